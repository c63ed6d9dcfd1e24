use std::fmt;

use crate::algebra::GaussianRational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    KEven,
    KOdd,
}

impl Parity {
    pub fn of(k: usize) -> Self {
        if k % 2 == 0 {
            Parity::KEven
        } else {
            Parity::KOdd
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    G,
    N,
}

/// A stratum of `C^{2n} \ {0}`.
///
/// For even `K`: `G_i` holds the vectors whose first nonzero coordinate is
/// `a_i`; `N_i` those with `a = 0` and last nonzero `b` at position `n - i`.
/// For odd `K` the roles of `a` and `b` swap: `G'_i` has first nonzero `b`
/// at `i`, `N'_i` has `b = 0` and last nonzero `a` at `n - i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratumLabel {
    pub family: Family,
    pub index: usize,
    pub parity: Parity,
}

impl StratumLabel {
    /// The 0-based coordinate inside the relevant half that defines the
    /// stratum (first nonzero entry for `G`, last for `N`).
    pub fn pivot_position(&self, n: usize) -> usize {
        match self.family {
            Family::G => self.index - 1,
            Family::N => n - self.index - 1,
        }
    }

    pub fn all(n: usize, parity: Parity) -> Vec<StratumLabel> {
        let g = (1..=n).map(|index| StratumLabel { family: Family::G, index, parity });
        let nn = (0..n).map(|index| StratumLabel { family: Family::N, index, parity });
        g.chain(nn).collect()
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::G => "G",
            Family::N => "N",
        };
        let prime = if self.parity == Parity::KOdd { "'" } else { "" };
        write!(f, "{}{}{}", fam, prime, self.index)
    }
}

pub fn classify_stratum(v: &[GaussianRational], parity: Parity) -> Result<StratumLabel> {
    if v.is_empty() || v.len() % 2 != 0 {
        return Err(Error::DimensionMismatch(format!("vector of length {} has no half-split", v.len())));
    }
    let n = v.len() / 2;
    let (a, b) = v.split_at(n);
    let (lead, tail) = match parity {
        Parity::KEven => (a, b),
        Parity::KOdd => (b, a),
    };
    if let Some(i) = lead.iter().position(|x| !x.is_zero()) {
        return Ok(StratumLabel { family: Family::G, index: i + 1, parity });
    }
    match tail.iter().rposition(|x| !x.is_zero()) {
        Some(j) => Ok(StratumLabel { family: Family::N, index: n - j - 1, parity }),
        None => Err(Error::ZeroVector),
    }
}
