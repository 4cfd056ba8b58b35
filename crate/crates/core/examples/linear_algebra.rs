// Eigendecomposition, partial transpose and Schmidt decomposition on a Bell pair.

use std::error::Error;

use tripartite::linalg::{hermitian_eigen, partial_transpose, schmidt_decompose, ComplexMatrix, Subsystem, C64};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let bell = vec![C64::new(s, 0.0), z, z, C64::new(s, 0.0)];

    let schmidt = schmidt_decompose(&bell, [2, 2])?;
    println!("Schmidt coefficients {:?}", schmidt.coefficients);

    let rho = ComplexMatrix::outer(&bell);
    let pt = partial_transpose(&rho, [2, 2], Subsystem::Second)?;
    let eig = hermitian_eigen(&pt)?;
    println!("partial-transpose spectrum {:?}", eig.eigenvalues);
    assert!(eig.min_eigenvalue() < -0.49);

    let back = partial_transpose(&pt, [2, 2], Subsystem::Second)?;
    assert_eq!(back, rho);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
