use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{candidates, Canonical, ClassTriple, RankProfile, Subset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("subset {0} has no rank relation in the table")]
    NotTabulated(Subset),
    #[error("triple {0} is not in any of the 18 subsets")]
    Outside(ClassTriple),
}

/// Outcome of checking one row of rank relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCheck {
    pub subset: Subset,
    pub pass: bool,
    /// Local ranks in canonical orientation (d_A, d_B, d_C).
    pub canonical_local_ranks: [usize; 3],
    /// Rank values in the bounds that satisfy the row.
    pub witnesses: Vec<usize>,
    pub detail: String,
}

/// The relation a tensor rank r and canonical local ranks must satisfy.
/// Predicate on (r, d_A, d_B, d_C).
type Relation = fn(usize, usize, usize, usize) -> bool;

fn row(subset: Subset) -> Option<(&'static str, Relation)> {
    Some(match subset {
        Subset::SSS => ("r = d_A = d_B = d_C", |r, a, b, c| r == a && a == b && b == c),
        Subset::SSN => ("r = d_A = d_C >= d_B", |r, a, b, c| r == a && a == c && c >= b),
        Subset::SNN => ("r = d_C >= d_A, d_B", |r, a, b, c| r == c && c >= a && c >= b),
        Subset::PNN => ("r >= d_C > d_A, d_B", |r, a, b, c| r >= c && c > a && c > b),
        Subset::RRR => ("r > d_C = d_B = d_A", |r, a, b, c| r > c && c == b && b == a),
        Subset::RRN => ("r > d_C = d_A >= d_B", |r, a, b, c| r > c && c == a && a >= b),
        Subset::RNN => ("r >= d_C >= d_A, d_B and r > d_A, d_B", |r, a, b, c| {
            r >= c && c >= a && c >= b && r > a && r > b
        }),
        Subset::NNN => return None,
    })
}

/// Check the row of `canonical.subset` with the local ranks read in the
/// canonical orientation. An inequality on r passes when some rank inside
/// the bounds satisfies it.
pub fn check_table1_row(canonical: &Canonical, profile: &RankProfile) -> Result<TableCheck, TableError> {
    let (relation, holds) = row(canonical.subset).ok_or(TableError::NotTabulated(canonical.subset))?;
    let local = canonical.party_map().map(|p| profile.local_ranks[p.index()]);
    let [a, b, c] = local;
    let witnesses: Vec<usize> = profile.candidates().filter(|&r| holds(r, a, b, c)).collect();
    let span = if profile.exact {
        format!("r = {}", profile.upper)
    } else {
        format!("r in [{}, {}]", profile.lower, profile.upper)
    };
    let mut detail = format!("{relation} with {span}, (d_A, d_B, d_C) = ({a}, {b}, {c})");
    if !profile.exact && !witnesses.is_empty() && witnesses.len() < profile.candidates().count() {
        detail.push_str("; conservative: passes on part of the rank interval");
    }
    Ok(TableCheck {
        subset: canonical.subset,
        pass: !witnesses.is_empty(),
        canonical_local_ranks: local,
        witnesses,
        detail,
    })
}

/// Check the rank relations of the triple's subset. For an undecided triple
/// each candidate subset is checked and the first passing one returned.
pub fn check_table1_consistency(triple: &ClassTriple, profile: &RankProfile) -> Result<TableCheck, TableError> {
    let cands: Vec<Canonical> = candidates(triple);
    let first = *cands.first().ok_or(TableError::Outside(*triple))?;
    let mut fallback = None;
    for c in &cands {
        match check_table1_row(c, profile) {
            Ok(check) if check.pass => return Ok(check),
            Ok(check) => fallback = fallback.or(Some(check)),
            Err(_) => {}
        }
    }
    fallback.ok_or(TableError::NotTabulated(first.subset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{canonical_triple, RankSource};

    fn profile(local: [usize; 3], lo: usize, hi: usize, exact: bool) -> RankProfile {
        RankProfile {
            local_ranks: local,
            lower: lo,
            upper: hi,
            exact,
            source: RankSource::Provenance,
        }
    }

    #[test]
    fn rows_in_canonical_orientation() {
        let sss = ClassTriple::parse("SSS").unwrap();
        assert!(
            check_table1_consistency(&sss, &profile([3, 3, 3], 3, 3, true))
                .unwrap()
                .pass
        );
        assert!(
            !check_table1_consistency(&sss, &profile([3, 3, 3], 3, 4, true))
                .unwrap()
                .pass
        );
        // RNN with r = 4 = d_C > d_A = d_B = 2.
        let rnn = ClassTriple::parse("RNN").unwrap();
        assert!(
            check_table1_consistency(&rnn, &profile([2, 2, 4], 4, 4, true))
                .unwrap()
                .pass
        );
        // Same subset arranged as NRN: ρ_BC is R, so canonical C is original A.
        let nrn = ClassTriple::parse("NRN").unwrap();
        let check = check_table1_consistency(&nrn, &profile([4, 2, 2], 4, 4, true)).unwrap();
        assert!(check.pass, "{}", check.detail);
        assert_eq!(check.canonical_local_ranks, [2, 2, 4]);
        let nnn = ClassTriple::parse("NNN").unwrap();
        assert_eq!(
            check_table1_consistency(&nnn, &profile([2, 2, 2], 3, 3, true)),
            Err(TableError::NotTabulated(Subset::NNN))
        );
    }

    #[test]
    fn bounds_are_used_conservatively() {
        let c = canonical_triple(&ClassTriple::parse("RRR").unwrap()).unwrap();
        let p = profile([3, 3, 3], 3, 4, false);
        let check = check_table1_row(&c, &p).unwrap();
        assert!(check.pass);
        assert_eq!(check.witnesses, vec![4]);
        assert!(check.detail.contains("conservative"));
    }
}
