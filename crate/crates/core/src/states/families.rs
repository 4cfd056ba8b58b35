use serde_json::json;

use super::{Pair, Provenance, PureState3, StateError};
use crate::linalg::{hermitian_eigen, ComplexMatrix, C64};

/// Orthonormality tolerance used when deciding which reductions of a
/// product-term expansion are certified separable.
const ORTHO_TOL: f64 = 1e-12;

/// Basis vector e_i of C^d (0-based `i`; the basis label |i+1⟩).
pub fn basis(d: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); d];
    v[i] = C64::new(1.0, 0.0);
    v
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// One term `coefficient · |a⟩|b⟩|c⟩` of a product expansion.
#[derive(Debug, Clone)]
pub struct ProductTerm {
    pub coefficient: C64,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    pub c: Vec<C64>,
}

impl ProductTerm {
    pub fn new(coefficient: f64, a: Vec<C64>, b: Vec<C64>, c: Vec<C64>) -> Self {
        Self {
            coefficient: re(coefficient),
            a,
            b,
            c,
        }
    }
}

fn accumulate(dims: [usize; 3], terms: &[ProductTerm]) -> Result<Vec<C64>, StateError> {
    let [da, db, dc] = dims;
    let mut amps = vec![C64::new(0.0, 0.0); da * db * dc];
    for t in terms {
        if t.a.len() != da || t.b.len() != db || t.c.len() != dc {
            return Err(StateError::InvalidParameter(format!(
                "term vectors of lengths ({}, {}, {}) for dims {dims:?}",
                t.a.len(),
                t.b.len(),
                t.c.len()
            )));
        }
        for i in 0..da {
            for j in 0..db {
                let ab = t.coefficient * t.a[i] * t.b[j];
                for k in 0..dc {
                    amps[(i * db + j) * dc + k] += ab * t.c[k];
                }
            }
        }
    }
    Ok(amps)
}

fn orthonormal(vectors: &[&Vec<C64>]) -> bool {
    for (x, u) in vectors.iter().enumerate() {
        for (y, v) in vectors.iter().enumerate().skip(x) {
            let ip: C64 = u.iter().zip(v.iter()).map(|(p, q)| p.conj() * q).sum();
            let target = if x == y { 1.0 } else { 0.0 };
            if (ip - re(target)).norm() > ORTHO_TOL {
                return false;
            }
        }
    }
    true
}

/// Pairs whose reduction is a mixture of product states by construction:
/// orthonormal third-party vectors make the other two parties' reduction
/// Σ |coef|² |x_i y_i⟩⟨x_i y_i|.
fn certified_pairs(terms: &[ProductTerm]) -> Vec<Pair> {
    let mut out = Vec::new();
    if orthonormal(&terms.iter().map(|t| &t.c).collect::<Vec<_>>()) {
        out.push(Pair::AB);
    }
    if orthonormal(&terms.iter().map(|t| &t.a).collect::<Vec<_>>()) {
        out.push(Pair::BC);
    }
    if orthonormal(&terms.iter().map(|t| &t.b).collect::<Vec<_>>()) {
        out.push(Pair::CA);
    }
    out
}

fn normalize_vec(v: &[C64], what: &str) -> Result<Vec<C64>, StateError> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 || !n.is_finite() {
        return Err(StateError::InvalidParameter(format!("zero {what} vector")));
    }
    Ok(v.iter().map(|z| z / n).collect())
}

fn check_probabilities(p: &[f64]) -> Result<(), StateError> {
    if p.is_empty() || p.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(StateError::InvalidParameter(format!("invalid probabilities {p:?}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(StateError::InvalidParameter(format!("probabilities sum to {sum}")));
    }
    Ok(())
}

/// d-level GHZ state (1/√d) Σ_i |i,i,i⟩.
pub fn ghz(d: usize) -> Result<PureState3, StateError> {
    if d < 2 {
        return Err(StateError::InvalidDimension(format!("ghz needs d >= 2, got {d}")));
    }
    let w = 1.0 / (d as f64).sqrt();
    let terms: Vec<_> = (0..d)
        .map(|i| ProductTerm::new(w, basis(d, i), basis(d, i), basis(d, i)))
        .collect();
    let amps = accumulate([d, d, d], &terms)?;
    Ok(PureState3::new([d, d, d], amps)?.with_provenance(
        Provenance::new("ghz", json!({ "d": d }))
            .with_rank(d, true)
            .with_separable(Pair::ALL),
    ))
}

/// Σ_i √p_i |b_i, i, i⟩: the B–C reduction is maximally correlated and the
/// other two reductions are separable.
pub fn mc_state(p: &[f64], b: &[Vec<C64>]) -> Result<PureState3, StateError> {
    check_probabilities(p)?;
    if b.len() != p.len() {
        return Err(StateError::InvalidParameter(format!(
            "{} probabilities but {} vectors",
            p.len(),
            b.len()
        )));
    }
    let da = b[0].len();
    if da == 0 || b.iter().any(|v| v.len() != da) {
        return Err(StateError::InvalidParameter(
            "vectors b_i must share one dimension".into(),
        ));
    }
    let n = p.len();
    let terms = p
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (&pi, bi))| {
            Ok(ProductTerm::new(
                pi.sqrt(),
                normalize_vec(bi, "b")?,
                basis(n, i),
                basis(n, i),
            ))
        })
        .collect::<Result<Vec<_>, StateError>>()?;
    let amps = accumulate([da, n, n], &terms)?;
    let support = p.iter().filter(|&&x| x > 0.0).count();
    let params = json!({ "p": p, "b": complex_lists(b) });
    Ok(PureState3::new([da, n, n], amps)?.with_provenance(
        Provenance::new("mc", params)
            .with_rank(support, true)
            .with_separable([Pair::AB, Pair::CA]),
    ))
}

/// Normalized Σ_i √p_i |a_i, b_i, c_i⟩.
pub fn schmidt_family(p: &[f64], a: &[Vec<C64>], b: &[Vec<C64>], c: &[Vec<C64>]) -> Result<PureState3, StateError> {
    check_probabilities(p)?;
    if a.len() != p.len() || b.len() != p.len() || c.len() != p.len() {
        return Err(StateError::InvalidParameter("term lists must have equal length".into()));
    }
    let dims = [a[0].len(), b[0].len(), c[0].len()];
    let terms = (0..p.len())
        .map(|i| {
            Ok(ProductTerm::new(
                p[i].sqrt(),
                normalize_vec(&a[i], "a")?,
                normalize_vec(&b[i], "b")?,
                normalize_vec(&c[i], "c")?,
            ))
        })
        .collect::<Result<Vec<_>, StateError>>()?;
    let params = json!({
        "p": p,
        "a": complex_lists(a),
        "b": complex_lists(b),
        "c": complex_lists(c),
    });
    from_terms("schmidt", params, dims, &terms)
}

/// Build a state from product terms, recording the term count as a tensor-rank
/// upper bound and any reductions certified separable by orthonormality.
pub fn from_terms(
    family: &str,
    params: serde_json::Value,
    dims: [usize; 3],
    terms: &[ProductTerm],
) -> Result<PureState3, StateError> {
    let amps = accumulate(dims, terms)?;
    let positive_terms = terms.iter().filter(|t| t.coefficient.norm() > 0.0).collect::<Vec<_>>();
    let kept: Vec<ProductTerm> = positive_terms.into_iter().cloned().collect();
    Ok(PureState3::from_unnormalized(dims, amps)?.with_provenance(
        Provenance::new(family, params)
            .with_rank(kept.len(), false)
            .with_separable(certified_pairs(&kept)),
    ))
}

/// (|1,1,2⟩ + |1,2,1⟩ + |2,1,1⟩)/√3. Tensor rank 3.
pub fn w_state() -> PureState3 {
    let e = |i| basis(2, i);
    let w = 1.0 / 3f64.sqrt();
    let terms = [
        ProductTerm::new(w, e(0), e(0), e(1)),
        ProductTerm::new(w, e(0), e(1), e(0)),
        ProductTerm::new(w, e(1), e(0), e(0)),
    ];
    let amps = accumulate([2, 2, 2], &terms).expect("static dims");
    PureState3::new([2, 2, 2], amps)
        .expect("normalized by construction")
        .with_provenance(Provenance::new("w", json!({})).with_rank(3, true))
}

/// (1/√(2d)) (Σ_{j=1}^{d} |j,j,j⟩ + Σ_{j=1}^{d−1} |j,j+1,d+j⟩ + |d,1,2d⟩)
/// on dims (d, d, 2d).
///
/// All 2d third-party labels are distinct, so the A–B reduction is the
/// diagonal mixture of 2d product states; the state is separable on A–B.
pub fn rnn_boundary(d: usize) -> Result<PureState3, StateError> {
    if d < 2 {
        return Err(StateError::InvalidDimension(format!(
            "rnn_boundary needs d >= 2, got {d}"
        )));
    }
    let w = 1.0 / ((2 * d) as f64).sqrt();
    let (ea, ec) = (|i| basis(d, i), |k| basis(2 * d, k));
    let mut terms: Vec<_> = (0..d).map(|j| ProductTerm::new(w, ea(j), ea(j), ec(j))).collect();
    for j in 0..d - 1 {
        terms.push(ProductTerm::new(w, ea(j), ea(j + 1), ec(d + j)));
    }
    terms.push(ProductTerm::new(w, ea(d - 1), ea(0), ec(2 * d - 1)));
    let mut psi = from_terms("rnn-boundary", json!({ "d": d }), [d, d, 2 * d], &terms)?;
    // d_C = 2d forces the rank up to the term count.
    if let Some(p) = psi.provenance.as_mut() {
        p.tensor_rank = Some(super::KnownRank {
            value: 2 * d,
            exact: true,
        });
    }
    Ok(psi)
}

/// (1/√(2r)) Σ_{σ ∈ S₃} |σ(1) σ(2) σ(3)⟩ + (1/√r) Σ_{j=4}^{r} |j,j,j⟩ on dims (r, r, r).
pub fn rrr_symmetric(r: usize) -> Result<PureState3, StateError> {
    if r < 3 {
        return Err(StateError::InvalidDimension(format!(
            "rrr_symmetric needs r >= 3, got {r}"
        )));
    }
    let e = |i| basis(r, i);
    let w = 1.0 / ((2 * r) as f64).sqrt();
    let perms = [[2, 0, 1], [0, 1, 2], [1, 2, 0], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
    let mut terms: Vec<_> = perms
        .iter()
        .map(|s| ProductTerm::new(w, e(s[0]), e(s[1]), e(s[2])))
        .collect();
    let tail = 1.0 / (r as f64).sqrt();
    for j in 3..r {
        terms.push(ProductTerm::new(tail, e(j), e(j), e(j)));
    }
    let amps = accumulate([r, r, r], &terms)?;
    // The permutation sum has a four-term expansion (see rrr_symmetric_waring_terms).
    Ok(PureState3::new([r, r, r], amps)?
        .with_provenance(Provenance::new("rrr-symmetric", json!({ "r": r })).with_rank(r + 1, false)))
}

/// An explicit (r+1)-term product expansion of [`rrr_symmetric`]`(r)`, from
/// Σ_σ e_σ(1)⊗e_σ(2)⊗e_σ(3) = ¼[s^⊗3 − (s−2e₁)^⊗3 − (s−2e₂)^⊗3 − (s−2e₃)^⊗3]
/// with s = e₁+e₂+e₃.
pub fn rrr_symmetric_waring_terms(r: usize) -> Vec<ProductTerm> {
    let w = 1.0 / ((2 * r) as f64).sqrt();
    let vec3 = |signs: [f64; 3]| {
        let mut v = vec![C64::new(0.0, 0.0); r];
        for (k, s) in signs.iter().enumerate() {
            v[k] = re(*s);
        }
        v
    };
    let patterns = [
        (1.0, [1.0, 1.0, 1.0]),
        (-1.0, [-1.0, 1.0, 1.0]),
        (-1.0, [1.0, -1.0, 1.0]),
        (-1.0, [1.0, 1.0, -1.0]),
    ];
    let mut terms: Vec<_> = patterns
        .iter()
        .map(|(sign, s)| ProductTerm::new(sign * w / 4.0, vec3(*s), vec3(*s), vec3(*s)))
        .collect();
    let tail = 1.0 / (r as f64).sqrt();
    for j in 3..r {
        terms.push(ProductTerm::new(tail, basis(r, j), basis(r, j), basis(r, j)));
    }
    terms
}

/// Σ_{i=2}^{r} |i,i,i⟩ + (|1⟩+|2⟩)^{⊗3}, normalized, on dims (r, r, r).
///
/// The |2,2,2⟩ component appears in both parts, so the squared norm of the
/// bracket is r + 9; the state is normalized numerically.
pub fn psi_a(r: usize) -> Result<PureState3, StateError> {
    if r < 2 {
        return Err(StateError::InvalidDimension(format!("psi_a needs r >= 2, got {r}")));
    }
    let e = |i| basis(r, i);
    let mut terms: Vec<_> = (1..r).map(|i| ProductTerm::new(1.0, e(i), e(i), e(i))).collect();
    let mut plus = vec![C64::new(0.0, 0.0); r];
    plus[0] = re(1.0);
    plus[1] = re(1.0);
    terms.push(ProductTerm::new(1.0, plus.clone(), plus.clone(), plus));
    let amps = accumulate([r, r, r], &terms)?;
    Ok(PureState3::from_unnormalized([r, r, r], amps)?
        .with_provenance(Provenance::new("psi-a", json!({ "r": r })).with_rank(r, true)))
}

/// Purification of the 3×3 "tiles" unextendible-product-basis state
/// ρ_AB = (I − Σ_{m=1}^{5} |ψ_m⟩⟨ψ_m|)/4, a rank-4 state with positive partial
/// transpose whose range contains no product vector. Dims (3, 3, 4).
pub fn tiles_pnn() -> PureState3 {
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let v = |x: [f64; 3]| x.iter().map(|&t| re(t)).collect::<Vec<_>>();
    let tiles: [(Vec<C64>, Vec<C64>); 5] = [
        (v([1.0, 0.0, 0.0]), v([s2, -s2, 0.0])),
        (v([s2, -s2, 0.0]), v([0.0, 0.0, 1.0])),
        (v([0.0, 0.0, 1.0]), v([0.0, s2, -s2])),
        (v([0.0, s2, -s2]), v([1.0, 0.0, 0.0])),
        (v([1.0 / 3f64.sqrt(); 3]), v([1.0 / 3f64.sqrt(); 3])),
    ];
    let mut projector = ComplexMatrix::identity(9);
    for (x, y) in &tiles {
        let xy: Vec<C64> = x.iter().flat_map(|p| y.iter().map(move |q| p * q)).collect();
        projector = &projector - &ComplexMatrix::outer(&xy);
    }
    let eig = hermitian_eigen(&projector).expect("Hermitian");
    // Eigenvalues are 0 (×5) then 1 (×4); the purification weights are 1/2.
    let mut amps = vec![C64::new(0.0, 0.0); 36];
    for (m, k) in (5..9).enumerate() {
        let col = eig.eigenvector(k);
        for (ab, z) in col.iter().enumerate() {
            amps[ab * 4 + m] = z * 0.5;
        }
    }
    PureState3::from_unnormalized([3, 3, 4], amps)
        .expect("nonzero")
        .with_provenance(Provenance::new("tiles-pnn", json!({})))
}

fn complex_lists(vs: &[Vec<C64>]) -> serde_json::Value {
    json!(vs
        .iter()
        .map(|v| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigen, numerical_rank, partial_transpose, Spectrum, Subsystem};

    fn close(a: C64, b: f64) -> bool {
        (a - re(b)).norm() < 1e-14
    }

    #[test]
    fn ghz2_amplitudes() {
        let g = ghz(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let expect = if i == j && j == k { s } else { 0.0 };
                    assert!(close(g.amp(i, j, k), expect));
                }
            }
        }
        assert!(ghz(1).is_err());
    }

    #[test]
    fn ghz3_marginals_maximally_mixed() {
        let g = ghz(3).unwrap();
        for p in crate::states::Party::ALL {
            let m = g.marginal(p);
            assert!(m.distance(&ComplexMatrix::identity(3).scale_real(1.0 / 3.0)) < 1e-14);
        }
        assert_eq!(g.local_ranks(1e-8), [3, 3, 3]);
    }

    #[test]
    fn ghz2_ab_reduction() {
        let rho = ghz(2).unwrap().reduced_density(Pair::AB);
        assert!(rho.matrix.distance(&ComplexMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5])) < 1e-14);
        assert_eq!(numerical_rank(&rho.matrix, 1e-8).unwrap(), 2);
        let a = rho.marginal(Subsystem::First);
        assert!(a.distance(&ComplexMatrix::diagonal(&[0.5, 0.5])) < 1e-14);
    }

    #[test]
    fn mc_state_rejects_bad_probabilities() {
        let b = vec![basis(2, 0), basis(2, 1)];
        assert!(mc_state(&[0.5, 0.6], &b).is_err());
        assert!(mc_state(&[0.5], &b).is_err());
    }

    #[test]
    fn mc_state_with_orthonormal_b_is_ghz_like() {
        let psi = mc_state(&[0.5, 0.5], &[basis(2, 0), basis(2, 1)]).unwrap();
        for (x, y) in psi.amplitudes().iter().zip(ghz(2).unwrap().amplitudes()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn w_state_reduction_spectrum() {
        let rho = w_state().reduced_density(Pair::AB);
        let spec = Spectrum::of_density(&rho.matrix).unwrap();
        let v = spec.values();
        assert!((v[0] - 2.0 / 3.0).abs() < 1e-14);
        assert!((v[1] - 1.0 / 3.0).abs() < 1e-14);
        assert!(v[2].abs() < 1e-14 && v[3].abs() < 1e-14);
    }

    #[test]
    fn w_state_marginals_agree_up_to_relabeling() {
        let w = w_state();
        let ab = w.reduced_density(Pair::AB).matrix;
        for pair in [Pair::BC, Pair::CA] {
            assert!(w.reduced_density(pair).matrix.distance(&ab) < 1e-14);
        }
    }

    #[test]
    fn rnn_boundary_layout() {
        let psi = rnn_boundary(2).unwrap();
        assert_eq!(psi.dims(), [2, 2, 4]);
        let nonzero: Vec<_> = psi.amplitudes().iter().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 4);
        assert!(nonzero.iter().all(|z| close(**z, 0.5)));
        assert!(close(psi.amp(0, 0, 0), 0.5));
        assert!(close(psi.amp(1, 1, 1), 0.5));
        assert!(close(psi.amp(0, 1, 2), 0.5));
        assert!(close(psi.amp(1, 0, 3), 0.5));
        assert_eq!(rnn_boundary(3).unwrap().local_ranks(1e-8), [3, 3, 6]);
        assert!(rnn_boundary(1).is_err());
    }

    #[test]
    fn rnn_boundary_ab_reduction_is_diagonal() {
        // Each of the 2d product terms carries its own third-party label.
        for d in 2..5 {
            let rho = rnn_boundary(d).unwrap().reduced_density(Pair::AB).matrix;
            for i in 0..d * d {
                for j in 0..d * d {
                    if i != j {
                        assert_eq!(rho[(i, j)].norm(), 0.0);
                    }
                }
            }
        }
        let p = rnn_boundary(2).unwrap();
        assert!(p.provenance().unwrap().certifies_separable(Pair::AB));
    }

    #[test]
    fn rrr_symmetric_amplitudes_and_norm() {
        let psi = rrr_symmetric(3).unwrap();
        let w = 1.0 / 6f64.sqrt();
        let nonzero: Vec<_> = psi.amplitudes().iter().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 6);
        assert!(nonzero.iter().all(|z| close(**z, w)));
        for r in 3..7 {
            assert!((rrr_symmetric(r).unwrap().norm() - 1.0).abs() < 1e-14);
        }
        assert!(rrr_symmetric(2).is_err());
    }

    #[test]
    fn rrr_waring_expansion_reproduces_state() {
        for r in 3..6 {
            let terms = rrr_symmetric_waring_terms(r);
            assert_eq!(terms.len(), r + 1);
            let amps = accumulate([r, r, r], &terms).unwrap();
            let psi = rrr_symmetric(r).unwrap();
            let err: f64 = amps
                .iter()
                .zip(psi.amplitudes())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-14, "r={r} err={err}");
        }
    }

    #[test]
    fn psi_a_normalization_counts_the_shared_component() {
        for r in 2..6 {
            let psi = psi_a(r).unwrap();
            let n = ((r + 9) as f64).sqrt();
            // |1,1,1⟩ only comes from the cube; |2,2,2⟩ from both parts.
            assert!(close(psi.amp(0, 0, 0), 1.0 / n));
            assert!(close(psi.amp(1, 1, 1), 2.0 / n));
            assert!(close(psi.amp(0, 1, 0), 1.0 / n));
            assert_eq!(psi.local_ranks(1e-8), [r, r, r]);
        }
    }

    #[test]
    fn tiles_reduction_is_ppt_with_rank_four() {
        let psi = tiles_pnn();
        assert_eq!(psi.local_ranks(1e-8), [3, 3, 4]);
        let rho = psi.reduced_density(Pair::AB);
        assert_eq!(numerical_rank(&rho.matrix, 1e-8).unwrap(), 4);
        let pt = partial_transpose(&rho.matrix, [3, 3], Subsystem::Second).unwrap();
        assert!(hermitian_eigen(&pt).unwrap().min_eigenvalue() > -1e-12);
    }

    #[test]
    fn certificates_follow_orthonormality() {
        let e = |i| basis(2, i);
        let psi = schmidt_family(&[0.5, 0.5], &[e(0), e(0)], &[e(0), e(1)], &[e(0), e(1)]).unwrap();
        let prov = psi.provenance().unwrap();
        assert_eq!(prov.separable_pairs, vec![Pair::AB, Pair::CA]);
        assert_eq!(prov.tensor_rank.unwrap().value, 2);
    }
}
