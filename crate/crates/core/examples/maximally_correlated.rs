// Detect maximally correlated reductions of an mc-family state.

use std::error::Error;

use tripartite::criteria::maximally_correlated_test;
use tripartite::linalg::C64;
use tripartite::states::{basis, mc_state, Pair};
use tripartite::tolerance::TolerancePolicy;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = vec![C64::new(s, 0.0), C64::new(s, 0.0)];
    let psi = mc_state(&[0.5, 0.5], &[basis(2, 0), plus])?;
    let tol = TolerancePolicy::default();
    for pair in Pair::ALL {
        let out = maximally_correlated_test(&psi.reduced_density(pair), &tol)?;
        println!(
            "{pair:?}: maximally correlated {} (commutator {:.1e}, alignment {:.1e})",
            out.holds, out.commutator_residual, out.alignment_residual
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
