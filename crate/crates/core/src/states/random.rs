use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde_json::json;

use super::{Pair, Provenance, PureState3, StateError};
use crate::linalg::{hermitian_eigen, rank_of_spectrum, ComplexMatrix, C64};

/// Generator used for every random draw in the crate.
pub type SampleRng = ChaCha8Rng;

/// Recorded in reports next to the master seed.
pub const PRNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9, seed_from_u64(master_seed ^ sample_index))";

/// Independent stream for sample `index` of a sweep seeded with `master`.
pub fn sample_rng(master: u64, index: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(master ^ index)
}

/// Standard complex Gaussian (real and imaginary parts i.i.d. N(0, 1/2)).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Uniformly random unit vector in C^d.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Haar-random unitary via Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for u in &cols {
                let ip: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= ip * y);
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// Complex Gaussian matrix; invertible with probability one.
pub fn random_filter<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| complex_gaussian(rng))
}

/// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
pub fn haar_random(dims: [usize; 3], seed: u64) -> PureState3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: usize = dims.iter().product();
    let amps: Vec<C64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
    PureState3::from_unnormalized(dims, amps)
        .expect("Gaussian vector is nonzero")
        .with_provenance(Provenance::new("haar", json!({ "dims": dims, "seed": seed })))
}

/// How the third-party vectors c_i of a separable B–C mixture are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcTermBasis {
    /// Independent uniformly random unit vectors.
    Random,
    /// The first `k` columns of a random unitary (requires k ≤ d_C).
    OrthonormalC,
}

/// Purification of a random separable ρ_BC = Σ_i p_i |b_i⟩⟨b_i| ⊗ |c_i⟩⟨c_i|.
pub fn purify_separable_bc(d_b: usize, d_c: usize, k_terms: usize, seed: u64) -> Result<PureState3, StateError> {
    purify_separable_bc_with(d_b, d_c, k_terms, seed, BcTermBasis::Random)
}

/// As [`purify_separable_bc`], with a choice of how the c_i are drawn.
///
/// The A system is the eigenbasis of ρ_BC restricted to its numerical
/// support, so d_A = rank ρ_BC.
pub fn purify_separable_bc_with(
    d_b: usize,
    d_c: usize,
    k_terms: usize,
    seed: u64,
    c_basis: BcTermBasis,
) -> Result<PureState3, StateError> {
    if k_terms == 0 || d_b == 0 || d_c == 0 {
        return Err(StateError::InvalidParameter(format!(
            "purify_separable_bc needs positive d_B, d_C, k (got {d_b}, {d_c}, {k_terms})"
        )));
    }
    if c_basis == BcTermBasis::OrthonormalC && k_terms > d_c {
        return Err(StateError::InvalidParameter(format!(
            "{k_terms} orthonormal vectors do not fit in C^{d_c}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Dirichlet(1, …, 1) weights.
    let raw: Vec<f64> = (0..k_terms).map(|_| Exp1.sample(&mut rng)).collect();
    let total: f64 = raw.iter().sum();
    let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let bs: Vec<Vec<C64>> = (0..k_terms).map(|_| random_unit_vector(d_b, &mut rng)).collect();
    let cs: Vec<Vec<C64>> = match c_basis {
        BcTermBasis::Random => (0..k_terms).map(|_| random_unit_vector(d_c, &mut rng)).collect(),
        BcTermBasis::OrthonormalC => {
            let u = random_unitary(d_c, &mut rng);
            (0..k_terms).map(|j| u.column(j)).collect()
        }
    };

    let n = d_b * d_c;
    let mut rho = ComplexMatrix::zeros(n, n);
    for ((pi, b), c) in p.iter().zip(&bs).zip(&cs) {
        let bc: Vec<C64> = b.iter().flat_map(|x| c.iter().map(move |y| x * y)).collect();
        rho = &rho + &ComplexMatrix::outer(&bc).scale_real(*pi);
    }
    let eig = hermitian_eigen(&rho)?;
    let rank = rank_of_spectrum(&eig.eigenvalues, 1e-8);
    let mut amps = vec![C64::new(0.0, 0.0); rank * n];
    for (m, k) in (n - rank..n).rev().enumerate() {
        let weight = eig.eigenvalues[k].max(0.0).sqrt();
        let v = eig.eigenvector(k);
        for (bc, z) in v.iter().enumerate() {
            amps[m * n + bc] = z * weight;
        }
    }
    let params = json!({
        "d_b": d_b,
        "d_c": d_c,
        "k": k_terms,
        "seed": seed,
        "c_basis": match c_basis {
            BcTermBasis::Random => "random",
            BcTermBasis::OrthonormalC => "orthonormal",
        },
    });
    // Any purification is an isometry on A away from Σ_i √p_i |a_i⟩|b_i⟩|c_i⟩,
    // so the term count bounds the tensor rank.
    Ok(PureState3::from_unnormalized([rank, d_b, d_c], amps)?.with_provenance(
        Provenance::new("purified-sep-bc", params)
            .with_rank(k_terms, false)
            .with_separable([Pair::BC]),
    ))
}
