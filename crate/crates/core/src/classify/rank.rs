use serde::{Deserialize, Serialize};

use crate::linalg::{solve, ComplexMatrix, C64};
use crate::states::{complex_gaussian, sample_rng, PureState3};
use crate::tolerance::TolerancePolicy;

/// Budget for the alternating-least-squares rank search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankEffort {
    /// Ranks lb..=lb+extra are tried; `None` disables the search.
    pub extra_ranks: Option<usize>,
    pub restarts: usize,
    pub iterations: usize,
    /// Relative residual ‖Ψ − Σ a⊗b⊗c‖ accepted as an exact fit.
    pub accept: f64,
    /// Fits whose largest term norm exceeds this are treated as a diverging
    /// approximation (border rank), not a decomposition.
    pub max_term_norm: f64,
    pub seed: u64,
}

impl Default for RankEffort {
    fn default() -> Self {
        Self {
            extra_ranks: Some(2),
            restarts: 32,
            iterations: 500,
            accept: 1e-7,
            max_term_norm: 1e3,
            seed: 0,
        }
    }
}

impl RankEffort {
    /// Bounds from local ranks and provenance only.
    pub fn none() -> Self {
        Self {
            extra_ranks: None,
            ..Self::default()
        }
    }

    pub fn with_extra(extra: usize) -> Self {
        Self {
            extra_ranks: Some(extra),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankSource {
    /// The constructor knows the exact rank.
    Provenance,
    /// Upper bound from the constructor's term count.
    ProvenanceBound,
    /// Upper bound from an accepted ALS fit.
    Als,
    /// Upper bound min(d_A d_B, d_B d_C, d_C d_A) on local ranks; no search
    /// confirmed anything smaller.
    SliceBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProfile {
    /// Numerical ranks of ρ_A, ρ_B, ρ_C.
    pub local_ranks: [usize; 3],
    /// Largest local rank.
    pub lower: usize,
    pub upper: usize,
    /// `upper` is the tensor rank itself.
    pub exact: bool,
    pub source: RankSource,
}

impl RankProfile {
    /// The rank, when the bounds pin it down.
    pub fn value(&self) -> Option<usize> {
        self.exact.then_some(self.upper)
    }

    /// Values of the rank consistent with the bounds.
    pub fn candidates(&self) -> std::ops::RangeInclusive<usize> {
        if self.exact {
            self.upper..=self.upper
        } else {
            self.lower..=self.upper
        }
    }
}

/// Lower bound: the largest local rank. Upper bound: exact provenance, else
/// the best of the provenance term count, an ALS fit, and the slice bound.
pub fn tensor_rank_bounds(psi: &PureState3, effort: &RankEffort, tol: &TolerancePolicy) -> RankProfile {
    let local_ranks = psi.local_ranks(tol.rank_relative);
    let [ra, rb, rc] = local_ranks;
    let lower = ra.max(rb).max(rc);
    let slice = (ra * rb).min(rb * rc).min(rc * ra).max(lower);
    let known = psi.provenance().and_then(|p| p.tensor_rank);
    if let Some(k) = known.filter(|k| k.exact && k.value >= lower) {
        return RankProfile {
            local_ranks,
            lower,
            upper: k.value,
            exact: true,
            source: RankSource::Provenance,
        };
    }
    let (mut upper, mut source) = match known {
        Some(k) if k.value >= lower && k.value <= slice => (k.value, RankSource::ProvenanceBound),
        _ => (slice, RankSource::SliceBound),
    };
    if let Some(extra) = effort.extra_ranks {
        for r in lower..=(lower + extra).min(upper.saturating_sub(1)) {
            if als_fit(psi, r, effort).is_some() {
                upper = r;
                source = RankSource::Als;
                break;
            }
        }
    }
    RankProfile {
        local_ranks,
        lower,
        upper,
        exact: upper == lower,
        source,
    }
}

/// An accepted decomposition Ψ ≈ Σ_r a_r ⊗ b_r ⊗ c_r.
#[derive(Debug, Clone)]
pub struct AlsFit {
    pub rank: usize,
    pub residual: f64,
    /// Factor matrices of shape d_X × rank.
    pub factors: [ComplexMatrix; 3],
}

struct Tensor<'a> {
    dims: [usize; 3],
    x: &'a [C64],
}

impl Tensor<'_> {
    fn at(&self, i: usize, j: usize, k: usize) -> C64 {
        self.x[(i * self.dims[1] + j) * self.dims[2] + k]
    }
}

fn gram(m: &ComplexMatrix) -> ComplexMatrix {
    &m.adjoint() * m
}

fn hadamard(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] * b[(i, j)])
}

/// Solve G·x = h with a small ridge so rank-deficient Gram matrices stay usable.
fn ridge_solve(g: &ComplexMatrix, h: &[C64]) -> Option<Vec<C64>> {
    let ridge = 1e-13 * g.trace().re.max(1e-300);
    let reg = &ComplexMatrix::identity(g.rows()).scale_real(ridge) + g;
    solve(&reg, h).ok()
}

/// Update the factor of `mode` with the other two held fixed.
fn update(t: &Tensor, f: &mut [ComplexMatrix; 3], mode: usize) -> Option<()> {
    let (p, q) = match mode {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let g = hadamard(&gram(&f[p]), &gram(&f[q]));
    let rank = g.rows();
    let [da, db, dc] = t.dims;
    let mut out = ComplexMatrix::zeros(t.dims[mode], rank);
    for row in 0..t.dims[mode] {
        let mut h = vec![C64::new(0.0, 0.0); rank];
        for (r, hr) in h.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            match mode {
                0 => {
                    for j in 0..db {
                        for k in 0..dc {
                            acc += (f[1][(j, r)] * f[2][(k, r)]).conj() * t.at(row, j, k);
                        }
                    }
                }
                1 => {
                    for i in 0..da {
                        for k in 0..dc {
                            acc += (f[0][(i, r)] * f[2][(k, r)]).conj() * t.at(i, row, k);
                        }
                    }
                }
                _ => {
                    for i in 0..da {
                        for j in 0..db {
                            acc += (f[0][(i, r)] * f[1][(j, r)]).conj() * t.at(i, j, row);
                        }
                    }
                }
            }
            *hr = acc;
        }
        let sol = ridge_solve(&g, &h)?;
        for (r, v) in sol.into_iter().enumerate() {
            out[(row, r)] = v;
        }
    }
    f[mode] = out;
    Some(())
}

fn residual(t: &Tensor, f: &[ComplexMatrix; 3]) -> f64 {
    let [da, db, dc] = t.dims;
    let rank = f[0].cols();
    let mut err = 0.0;
    for i in 0..da {
        for j in 0..db {
            for k in 0..dc {
                let approx: C64 = (0..rank).map(|r| f[0][(i, r)] * f[1][(j, r)] * f[2][(k, r)]).sum();
                err += (t.at(i, j, k) - approx).norm_sqr();
            }
        }
    }
    err.sqrt()
}

fn largest_term(f: &[ComplexMatrix; 3]) -> f64 {
    let col_norm = |m: &ComplexMatrix, r: usize| m.column(r).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (0..f[0].cols())
        .map(|r| col_norm(&f[0], r) * col_norm(&f[1], r) * col_norm(&f[2], r))
        .fold(0.0, f64::max)
}

/// Search for a rank-`rank` decomposition by ALS from random starts. Returns
/// the first fit within the acceptance residual whose terms stay bounded.
pub fn als_fit(psi: &PureState3, rank: usize, effort: &RankEffort) -> Option<AlsFit> {
    if rank == 0 {
        return None;
    }
    let t = Tensor {
        dims: psi.dims(),
        x: psi.amplitudes(),
    };
    for restart in 0..effort.restarts {
        let mut rng = sample_rng(effort.seed, (rank as u64) << 32 | restart as u64);
        let mut f = t
            .dims
            .map(|d| ComplexMatrix::from_fn(d, rank, |_, _| complex_gaussian(&mut rng)));
        let mut last = f64::INFINITY;
        for it in 0..effort.iterations {
            if (0..3).any(|mode| update(&t, &mut f, mode).is_none()) {
                break;
            }
            if it % 10 == 9 || it + 1 == effort.iterations {
                let res = residual(&t, &f);
                if res < effort.accept {
                    break;
                }
                // Stalled well above the target: try another start.
                if res > 1e-3 && res > 0.999 * last {
                    break;
                }
                last = res;
            }
        }
        let res = residual(&t, &f);
        if res < effort.accept && largest_term(&f) <= effort.max_term_norm {
            return Some(AlsFit {
                rank,
                residual: res,
                factors: f,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz, haar_random, w_state};

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn ghz_rank_found_by_als() {
        let psi = ghz(3).unwrap().clear_provenance();
        let fit = als_fit(&psi, 3, &RankEffort::default()).expect("GHZ(3) has rank 3");
        assert!(fit.residual < 1e-7);
        let p = tensor_rank_bounds(&psi, &RankEffort::default(), &tol());
        assert_eq!((p.lower, p.upper, p.exact), (3, 3, true));
    }

    #[test]
    fn w_state_resists_rank_two() {
        let psi = w_state().clear_provenance();
        assert!(als_fit(&psi, 2, &RankEffort::default()).is_none());
        assert!(als_fit(&psi, 3, &RankEffort::default()).is_some());
        let p = tensor_rank_bounds(&psi, &RankEffort::default(), &tol());
        assert_eq!((p.lower, p.upper, p.source), (2, 3, RankSource::Als));
        let p = tensor_rank_bounds(&w_state(), &RankEffort::default(), &tol());
        assert_eq!((p.lower, p.upper, p.exact), (2, 3, true));
    }

    #[test]
    fn bounds_without_search() {
        let psi = haar_random([2, 2, 3], 4);
        let p = tensor_rank_bounds(&psi, &RankEffort::none(), &tol());
        assert_eq!(p.local_ranks, [2, 2, 3]);
        assert_eq!((p.lower, p.upper, p.source), (3, 4, RankSource::SliceBound));
        assert!(!p.exact);
    }
}
