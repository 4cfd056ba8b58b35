// Random invertible local filters applied to GHZ land in several subsets.

use std::collections::BTreeSet;
use std::error::Error;

use tripartite::classify::{canonical_triple, classify_reports};
use tripartite::linalg::ComplexMatrix;
use tripartite::states::{ghz, random_filter, sample_rng, slocc_filter};
use tripartite::tolerance::TolerancePolicy;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let tol = TolerancePolicy::default();
    let g = ghz(2)?;
    let id = ComplexMatrix::identity(2);
    let mut seen = BTreeSet::new();
    for s in 0..40u64 {
        let mut rng = sample_rng(99, s);
        let f = random_filter(2, &mut rng);
        // Filter one, two or all three parties.
        let filters = match s % 3 {
            0 => [&f, &id, &id],
            1 => [&f, &f, &id],
            _ => [&f, &f, &f],
        };
        let Ok(psi) = slocc_filter(&g, filters) else { continue };
        let (_, triple) = classify_reports(&psi, &tol)?;
        if let Ok(c) = canonical_triple(&triple) {
            seen.insert(c.subset);
        }
    }
    println!("filtered GHZ subsets: {seen:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
