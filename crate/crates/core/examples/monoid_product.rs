// Direct-sum products combine classes by componentwise maximum.

use std::error::Error;

use tripartite::classify::classify_reports;
use tripartite::harness::witnesses::{sns_witness, ssn_witness};
use tripartite::states::{direct_sum_product, ghz, rrr_symmetric, PureState3};
use tripartite::tolerance::TolerancePolicy;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let tol = TolerancePolicy::default();
    let class = |psi: &PureState3| classify_reports(psi, &tol).map(|(_, t)| t);
    let ssn = ssn_witness();
    let sns = sns_witness();
    let rrr = rrr_symmetric(3)?;
    let unit = ghz(2)?;
    for (name, left, right) in [
        ("SSN·SNS", &ssn, &sns),
        ("RRR·SSN", &rrr, &ssn),
        ("RRR·GHZ", &rrr, &unit),
    ] {
        let product = direct_sum_product(left, right, 0.5)?;
        let expected = class(left)?.max(&class(right)?);
        let got = class(&product)?;
        println!("{name}: {got} (max of operands {expected})");
        assert_eq!(got, expected);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
