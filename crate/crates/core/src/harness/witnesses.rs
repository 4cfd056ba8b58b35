//! Constructed witnesses for each canonical subset.

use crate::classify::Subset;
use crate::linalg::C64;
use crate::states::{
    direct_sum_product, ghz, mc_state, permute_parties, rrr_symmetric, tiles_pnn, w_state, Party, PureState3,
    StateError, DEFAULT_WEIGHT,
};

/// Party relabellings that move the odd pair of a two-letter subset through
/// all three slots: identity and the two cyclic shifts.
pub const CYCLIC_SHIFTS: [[Party; 3]; 3] = [
    [Party::A, Party::B, Party::C],
    [Party::B, Party::C, Party::A],
    [Party::C, Party::A, Party::B],
];

fn e(d: usize, i: usize) -> Vec<C64> {
    crate::states::basis(d, i)
}

/// Σ √p_i |b_i, i, i⟩ with non-orthogonal b_i: SNS.
pub fn sns_witness() -> PureState3 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = vec![C64::new(s, 0.0), C64::new(s, 0.0)];
    mc_state(&[0.5, 0.5], &[e(2, 0), plus]).expect("valid parameters")
}

/// A Bell pair on C–A next to a product B: SSN.
pub fn ssn_witness() -> PureState3 {
    let mc = mc_state(&[0.5, 0.5], &[e(2, 0), e(2, 0)]).expect("valid parameters");
    permute_parties(&mc, [Party::B, Party::A, Party::C]).expect("permutation")
}

fn product(a: &PureState3, b: &PureState3) -> Result<PureState3, StateError> {
    direct_sum_product(a, b, DEFAULT_WEIGHT)
}

/// Witness for a canonical subset, in canonical orientation.
pub fn canonical_witness(subset: Subset) -> Result<PureState3, StateError> {
    Ok(match subset {
        Subset::SSS => ghz(2)?,
        Subset::SSN => ssn_witness(),
        Subset::SNN => product(&ssn_witness(), &sns_witness())?,
        Subset::PNN => tiles_pnn(),
        Subset::RRR => rrr_symmetric(3)?,
        Subset::RRN => product(&rrr_symmetric(3)?, &ssn_witness())?,
        Subset::RNN => {
            let snn = product(&ssn_witness(), &sns_witness())?;
            product(&rrr_symmetric(3)?, &snn)?
        }
        Subset::NNN => w_state(),
    })
}

/// Label, subset, relabelling applied to the canonical witness, state.
pub type CensusRow = (String, Subset, [Party; 3], PureState3);

/// One labelled state per arrangement of every subset: 18 in total.
pub fn census_witnesses() -> Result<Vec<CensusRow>, StateError> {
    let mut out = Vec::new();
    for subset in Subset::ALL {
        let base = canonical_witness(subset)?;
        for perm in CYCLIC_SHIFTS.iter().take(subset.arrangements()) {
            let psi = permute_parties(&base, *perm)?;
            let expected = subset.triple().permuted(*perm);
            out.push((format!("{subset} as {expected}"), subset, *perm, psi));
        }
    }
    Ok(out)
}

/// Labelled operands for the monoid suite.
pub fn monoid_catalogue() -> Result<Vec<(&'static str, PureState3)>, StateError> {
    let nss = permute_parties(&ssn_witness(), CYCLIC_SHIFTS[2])?;
    Ok(vec![
        ("SSS", ghz(2)?),
        ("SSS(d=3)", ghz(3)?),
        ("SSN", ssn_witness()),
        ("SNS", sns_witness()),
        ("NSS", nss),
        ("SNN", canonical_witness(Subset::SNN)?),
        ("PNN", tiles_pnn()),
        ("RRR", rrr_symmetric(3)?),
        ("RRN", canonical_witness(Subset::RRN)?),
        ("RNN", canonical_witness(Subset::RNN)?),
        ("NNN", w_state()),
        ("NNN(psi_a)", crate::states::psi_a(2)?),
    ])
}

/// Twenty labelled operand pairs, including the unit and the generating identities.
pub const MONOID_PAIRS: [(&str, &str); 20] = [
    ("SSN", "SNS"),
    ("RRR", "SSN"),
    ("RRR", "PNN"),
    ("PNN", "NSS"),
    ("SSN", "SSS"),
    ("SNS", "SSS"),
    ("SNN", "SSS"),
    ("PNN", "SSS"),
    ("RRR", "SSS"),
    ("RRN", "SSS"),
    ("RNN", "SSS"),
    ("NNN", "SSS"),
    ("SSS", "SSS(d=3)"),
    ("SNS", "NSS"),
    ("RRR", "RRR"),
    ("RRR", "NNN"),
    ("SSN", "NNN"),
    ("PNN", "PNN"),
    ("RRN", "SNS"),
    ("NNN", "NNN(psi_a)"),
];
