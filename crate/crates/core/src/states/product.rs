use serde_json::json;

use super::{KnownRank, Pair, Party, Provenance, PureState3, StateError};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, C64};

/// Default mixing weight of the direct-sum product.
pub const DEFAULT_WEIGHT: f64 = 0.5;

/// Smallest accepted ratio σ_min/σ_max of an SLOCC filter.
pub const FILTER_CONDITION_FLOOR: f64 = 1e-8;

fn family_of(psi: &PureState3) -> String {
    psi.provenance()
        .map(|p| p.family.clone())
        .unwrap_or_else(|| "unknown".into())
}

/// Direct sum √w·Ψ₁ ⊕ √(1−w)·Ψ₂ on C^{d_A+d_A'} ⊗ C^{d_B+d_B'} ⊗ C^{d_C+d_C'}:
/// Ψ₁ occupies the leading block of every party and Ψ₂ the trailing block.
pub fn direct_sum_product(left: &PureState3, right: &PureState3, weight: f64) -> Result<PureState3, StateError> {
    if !(weight > 0.0 && weight < 1.0) {
        return Err(StateError::InvalidParameter(format!(
            "direct-sum weight must lie in (0, 1), got {weight}"
        )));
    }
    let [a1, b1, c1] = left.dims();
    let [a2, b2, c2] = right.dims();
    let dims = [a1 + a2, b1 + b2, c1 + c2];
    let [_, db, dc] = dims;
    let mut amps = vec![C64::new(0.0, 0.0); dims.iter().product()];
    let (wl, wr) = (weight.sqrt(), (1.0 - weight).sqrt());
    for i in 0..a1 {
        for j in 0..b1 {
            for k in 0..c1 {
                amps[(i * db + j) * dc + k] = left.amp(i, j, k) * wl;
            }
        }
    }
    for i in 0..a2 {
        for j in 0..b2 {
            for k in 0..c2 {
                amps[((a1 + i) * db + b1 + j) * dc + c1 + k] = right.amp(i, j, k) * wr;
            }
        }
    }

    let (lp, rp) = (left.provenance(), right.provenance());
    let rank = match (lp.and_then(|p| p.tensor_rank), rp.and_then(|p| p.tensor_rank)) {
        (Some(x), Some(y)) => Some(KnownRank {
            value: x.value + y.value,
            exact: false,
        }),
        _ => None,
    };
    // A block-diagonal mixture of separable blocks is separable.
    let separable = Pair::ALL.into_iter().filter(|&pair| {
        lp.is_some_and(|p| p.certifies_separable(pair)) && rp.is_some_and(|p| p.certifies_separable(pair))
    });
    let mut prov = Provenance::new(
        "direct-sum",
        json!({ "weight": weight, "left": family_of(left), "right": family_of(right) }),
    )
    .with_separable(separable);
    prov.tensor_rank = rank;
    Ok(PureState3::from_unnormalized(dims, amps)?.with_provenance(prov))
}

/// (F_A ⊗ F_B ⊗ F_C)|Ψ⟩, renormalized. Each filter must be square, match the
/// party's dimension and have σ_min ≥ 1e-8·σ_max.
pub fn slocc_filter(psi: &PureState3, filters: [&ComplexMatrix; 3]) -> Result<PureState3, StateError> {
    let dims = psi.dims();
    for (party, f) in Party::ALL.into_iter().zip(filters) {
        let d = dims[party.index()];
        if !f.is_square() || f.rows() != d {
            return Err(StateError::InvalidParameter(format!(
                "filter for party {party} is {}x{}, expected {d}x{d}",
                f.rows(),
                f.cols()
            )));
        }
        let ev = hermitian_eigenvalues(&(&f.adjoint() * f))?;
        let (lo, hi) = (ev[0].max(0.0).sqrt(), ev[d - 1].max(0.0).sqrt());
        let ratio = if hi > 0.0 { lo / hi } else { 0.0 };
        if ratio < FILTER_CONDITION_FLOOR {
            return Err(StateError::SingularFilter { party, ratio });
        }
    }
    let [da, db, dc] = dims;
    let [fa, fb, fc] = filters;
    let src = psi.amplitudes();
    let mut t1 = vec![C64::new(0.0, 0.0); src.len()];
    for i in 0..da {
        for i0 in 0..da {
            let f = fa[(i, i0)];
            for jk in 0..db * dc {
                t1[i * db * dc + jk] += f * src[i0 * db * dc + jk];
            }
        }
    }
    let mut t2 = vec![C64::new(0.0, 0.0); src.len()];
    for i in 0..da {
        for j in 0..db {
            for j0 in 0..db {
                let f = fb[(j, j0)];
                for k in 0..dc {
                    t2[(i * db + j) * dc + k] += f * t1[(i * db + j0) * dc + k];
                }
            }
        }
    }
    let mut t3 = vec![C64::new(0.0, 0.0); src.len()];
    for ij in 0..da * db {
        for k in 0..dc {
            t3[ij * dc + k] = (0..dc).map(|k0| fc[(k, k0)] * t2[ij * dc + k0]).sum();
        }
    }
    let mut prov = Provenance::new("slocc", json!({ "source": family_of(psi) }));
    // Invertible local filters preserve tensor rank; separability of a
    // reduction is not preserved (the traced party is filtered too).
    prov.tensor_rank = psi.provenance().and_then(|p| p.tensor_rank);
    Ok(PureState3::from_unnormalized(dims, t3)?.with_provenance(prov))
}

/// Relabel parties: slot `s` of the result holds old party `perm[s]`.
pub fn permute_parties(psi: &PureState3, perm: [Party; 3]) -> Result<PureState3, StateError> {
    let mut seen = [false; 3];
    for p in perm {
        seen[p.index()] = true;
    }
    if seen.contains(&false) {
        return Err(StateError::InvalidParameter(format!("{perm:?} is not a permutation")));
    }
    let old = psi.dims();
    let dims = perm.map(|p| old[p.index()]);
    let mut amps = vec![C64::new(0.0, 0.0); psi.amplitudes().len()];
    let mut x = [0usize; 3];
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                for (s, v) in [i, j, k].into_iter().enumerate() {
                    x[perm[s].index()] = v;
                }
                amps[(i * dims[1] + j) * dims[2] + k] = psi.amp(x[0], x[1], x[2]);
            }
        }
    }
    let mut out = PureState3::new(dims, amps)?;
    if let Some(p) = psi.provenance() {
        let inverse =
            |old_party: Party| Party::from_index(perm.iter().position(|&q| q == old_party).expect("permutation"));
        let separable = p.separable_pairs.iter().map(|pair| {
            let (x, y) = pair.parties();
            Pair::of(inverse(x), inverse(y))
        });
        let mut prov = Provenance::new(
            "permuted",
            json!({ "source": p.family, "perm": perm.map(|q| q.to_string()) }),
        )
        .with_separable(separable);
        prov.tensor_rank = p.tensor_rank;
        out = out.with_provenance(prov);
    }
    Ok(out)
}
