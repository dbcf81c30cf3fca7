use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finitely generated abelian group in invariant-factor form:
/// `Z^free_rank ⊕ Z/d1 ⊕ Z/d2 ⊕ ...` with `2 <= d1 | d2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawAbGroup")]
pub struct AbGroup {
    free_rank: usize,
    torsion: Vec<u64>,
}

#[derive(Deserialize)]
struct RawAbGroup {
    free_rank: usize,
    torsion: Vec<u64>,
}

impl TryFrom<RawAbGroup> for AbGroup {
    type Error = Error;
    fn try_from(raw: RawAbGroup) -> Result<AbGroup> {
        AbGroup::new(raw.free_rank, raw.torsion)
    }
}

impl AbGroup {
    /// Validating constructor: every torsion entry is at least 2 and each
    /// divides the next.
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Result<AbGroup> {
        if let Some(d) = torsion.iter().find(|&&d| d < 2) {
            return Err(Error::invalid(format!("torsion coefficient {d} < 2")));
        }
        if let Some(w) = torsion.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::invalid(format!("torsion chain broken: {} does not divide {}", w[0], w[1])));
        }
        Ok(AbGroup { free_rank, torsion })
    }

    /// Normalizes an arbitrary list of cyclic orders (ones are dropped).
    pub fn from_cyclic_orders(free_rank: usize, orders: impl IntoIterator<Item = u64>) -> Result<AbGroup> {
        let mut rest: Vec<u64> = orders.into_iter().filter(|&d| d != 1).collect();
        if rest.contains(&0) {
            return Err(Error::invalid("cyclic order 0; count it as free rank instead"));
        }
        rest.sort_unstable();
        let k = rest.len();
        for i in 0..k {
            for j in (i + 1)..k {
                if rest[j].is_multiple_of(rest[i]) {
                    continue;
                }
                let g = rest[i].gcd(&rest[j]);
                let l = (rest[i] / g)
                    .checked_mul(rest[j])
                    .ok_or_else(|| Error::ResourceLimit("torsion coefficient exceeds u64".into()))?;
                rest[i] = g;
                rest[j] = l;
            }
        }
        rest.retain(|&d| d != 1);
        rest.sort_unstable();
        AbGroup::new(free_rank, rest)
    }

    pub fn zero() -> AbGroup {
        AbGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn cyclic(d: u64) -> AbGroup {
        AbGroup::from_cyclic_orders(0, [d]).expect("nonzero order")
    }

    pub fn free(rank: usize) -> AbGroup {
        AbGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Least positive integer killing the group; 1 for the zero group and
    /// `None` when there is a free part.
    pub fn exponent(&self) -> Option<u64> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.last().copied().unwrap_or(1))
    }

    /// Exponent of the torsion subgroup.
    pub fn torsion_exponent(&self) -> u64 {
        self.torsion.last().copied().unwrap_or(1)
    }

    pub fn order(&self) -> Option<u128> {
        if self.free_rank > 0 {
            return None;
        }
        self.torsion.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
    }

    pub fn direct_sum(&self, other: &AbGroup) -> AbGroup {
        AbGroup::from_cyclic_orders(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).copied(),
        )
        .expect("sum of valid groups")
    }

    /// `self^{⊕k}`.
    pub fn power(&self, k: usize) -> AbGroup {
        let mut torsion = Vec::with_capacity(self.torsion.len() * k);
        for d in &self.torsion {
            torsion.extend(std::iter::repeat_n(*d, k));
        }
        AbGroup { free_rank: self.free_rank * k, torsion }
    }

    /// Multiplicities of each invariant factor, largest factor first:
    /// `(Z/4)^4 ⊕ (Z/2)^6` becomes `[(4, 4), (2, 6)]`.
    pub fn grouped(&self) -> Vec<(u64, usize)> {
        let mut out: Vec<(u64, usize)> = Vec::new();
        for d in self.torsion.iter().rev() {
            match out.last_mut() {
                Some((v, k)) if v == d => *k += 1,
                _ => out.push((*d, 1)),
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "free_rank": self.free_rank, "torsion": self.torsion })
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for (d, k) in self.grouped() {
            if k == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{k}"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(AbGroup::new(0, vec![1]).is_err());
        assert!(AbGroup::new(0, vec![2, 3]).is_err());
        assert!(AbGroup::new(1, vec![2, 4, 12]).is_ok());
        let bad: std::result::Result<AbGroup, _> =
            serde_json::from_str(r#"{"free_rank":0,"torsion":[4,2]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn zero_group_exponent_is_one() {
        assert_eq!(AbGroup::zero().exponent(), Some(1));
        assert_eq!(AbGroup::free(1).exponent(), None);
    }

    #[test]
    fn normalization_and_sums() {
        let g = AbGroup::from_cyclic_orders(0, [2, 3]).unwrap();
        assert_eq!(g.torsion(), &[6]);
        let h = AbGroup::cyclic(4).power(4).direct_sum(&AbGroup::cyclic(2).power(6));
        assert_eq!(h.torsion(), &[2, 2, 2, 2, 2, 2, 4, 4, 4, 4]);
        assert_eq!(h.to_string(), "(Z/4)^4 + (Z/2)^6");
        assert_eq!(h.exponent(), Some(4));
    }

    #[test]
    fn json_shape() {
        let g = AbGroup::new(2, vec![3]).unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"free_rank":2,"torsion":[3]}"#);
        let back: AbGroup = serde_json::from_str(r#"{"free_rank":2,"torsion":[3]}"#).unwrap();
        assert_eq!(back, g);
    }
}
