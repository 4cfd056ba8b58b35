// Alternating least squares finds GHZ at rank 2; W needs 3.

use std::error::Error;

use tripartite::classify::{als_fit, tensor_rank_bounds, RankEffort};
use tripartite::states::{ghz, w_state};
use tripartite::tolerance::TolerancePolicy;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let effort = RankEffort::default();
    let g = ghz(2)?.clear_provenance();
    let w = w_state().clear_provenance();
    for (name, psi) in [("ghz", &g), ("w", &w)] {
        for r in 1..=3 {
            match als_fit(psi, r, &effort) {
                Some(fit) => println!("{name} rank {r}: fit, residual {:.2e}", fit.residual),
                None => println!("{name} rank {r}: no fit"),
            }
        }
        let profile = tensor_rank_bounds(psi, &effort, &TolerancePolicy::default());
        println!("{name} bounds {:?} via {:?}", profile.candidates(), profile.source);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
