// Classify Haar-random states and tabulate the triples.

use std::error::Error;

use tripartite::cli::sweep;
use tripartite::tolerance::TolerancePolicy;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let report = sweep([2, 2, 4], 50, 2026, &TolerancePolicy::default())?;
    print!("{}", report.render());
    assert_eq!(report.monogamy_violations, 0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
