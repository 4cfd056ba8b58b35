// The criteria battery on each reduction of the W state.

use std::error::Error;

use tripartite::criteria::{evaluate, hierarchy_audit, SeparabilityContext};
use tripartite::states::{w_state, Pair};
use tripartite::tolerance::TolerancePolicy;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let tol = TolerancePolicy::default();
    let psi = w_state();
    for pair in Pair::ALL {
        let rho = psi.reduced_density(pair);
        let report = evaluate(&rho, &SeparabilityContext::default(), &tol)?;
        println!(
            "{pair:?}: ppt min {:+.4}, reduction margin {:+.4}, majorization margin {:+.4}, H(X|Y) min {:+.4}, {:?}",
            report.ppt.min_eigenvalue,
            report.reduction.margin(),
            report.majorization.margin(),
            report.cond_entropy.min(),
            report.separability,
        );
        assert!(hierarchy_audit(&report, &tol).is_empty());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
