// Run the census suite: one witness per arrangement of the 18 subsets.

use std::error::Error;

use tripartite::harness::{run_census, SuiteConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let report = run_census(&SuiteConfig::new(2026))?;
    print!("{report}");
    assert!(report.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
