// Classify named witnesses and check their rank relations.

use std::error::Error;

use tripartite::classify::{check_table1_consistency, classify_state, RankEffort};
use tripartite::states::{ghz, psi_a, rnn_boundary, rrr_symmetric, tiles_pnn, w_state};
use tripartite::tolerance::TolerancePolicy;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let tol = TolerancePolicy::default();
    let effort = RankEffort::none();
    let states = [
        ("ghz(2)", ghz(2)?),
        ("w", w_state()),
        ("psi_a(3)", psi_a(3)?),
        ("rnn_boundary(2)", rnn_boundary(2)?),
        ("rrr_symmetric(3)", rrr_symmetric(3)?),
        ("tiles", tiles_pnn()),
    ];
    for (name, psi) in &states {
        let c = classify_state(psi, &tol, &effort)?;
        let table = match check_table1_consistency(&c.triple, &c.ranks) {
            Ok(t) => format!("{} {}", t.subset, if t.pass { "pass" } else { "fail" }),
            Err(e) => e.to_string(),
        };
        println!("{name:<18} {}  rank in {:?}  {table}", c.triple, c.ranks.candidates());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
