//! Bounds on the number of unitriangular factors needed for symplectic
//! maps, as a small rule engine that records every rule it applies.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundInput {
    pub n: usize,
    pub d: usize,
    /// Known value of the stable factor count `K~(n, d)`.
    pub known_ktilde: Option<usize>,
    /// Known continuous factor count `K_cont(2, d)`.
    pub known_kcont: Option<usize>,
}

impl BoundInput {
    pub fn new(n: usize, d: usize) -> Self {
        BoundInput { n, d, known_ktilde: None, known_kcont: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult {
    pub lower: usize,
    /// `None` when no upper bound follows from the inputs.
    pub upper: Option<usize>,
    pub derivation: Vec<Rule>,
}

impl fmt::Display for BoundResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(u) => writeln!(f, "lower={} upper={}", self.lower, u)?,
            None => writeln!(f, "lower={} upper=unavailable", self.lower)?,
        }
        for (i, r) in self.derivation.iter().enumerate() {
            write!(f, "  {}. {}: {}", i + 1, r.name, r.detail)?;
            if i + 1 < self.derivation.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Upper bound from peeling off one dimension at a time:
/// `K(n) <= K_cont(n) + K(n - 1) + 3` with `K_cont(n) <= K_cont(2)`.
pub fn k_recursion_upper(k_cont_2: usize, n: usize) -> usize {
    (n - 1) * (k_cont_2 + 3)
}

/// Stabilization: `K(N, d) <= 7 K~(n, d)` for `N > n`.
pub fn k_stabilization_upper(ktilde_n: usize) -> usize {
    7 * ktilde_n
}

fn builtin_ktilde(d: usize) -> Option<(usize, &'static str)> {
    match d {
        1 => Some((4, "K~(n,1) = 4 on one-dimensional spaces")),
        2 => Some((5, "K~(n,2) <= 5 on two-dimensional spaces")),
        _ => None,
    }
}

pub fn k_bounds(input: &BoundInput) -> Result<BoundResult> {
    let BoundInput { n, d, known_ktilde, known_kcont } = *input;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {}", n)));
    }
    if d < 1 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    if known_ktilde == Some(0) || known_kcont == Some(0) {
        return Err(Error::InvalidArgument("factor counts are positive".into()));
    }
    let mut derivation = Vec::new();
    let lower = if n <= 3 {
        derivation.push(Rule { name: "lower".into(), detail: "5 factors are needed already for constant matrices when n <= 3".into() });
        5
    } else {
        derivation.push(Rule { name: "lower".into(), detail: "6 factors are needed already for constant matrices when n >= 4".into() });
        6
    };

    let ktilde = match (known_ktilde, builtin_ktilde(d)) {
        (Some(v), _) => {
            derivation.push(Rule { name: "ktilde".into(), detail: format!("K~({},{}) = {} (supplied)", n, d, v) });
            Some(v)
        }
        (None, Some((v, why))) => {
            derivation.push(Rule { name: "ktilde".into(), detail: why.into() });
            Some(v)
        }
        (None, None) => {
            derivation.push(Rule { name: "ktilde".into(), detail: format!("no built-in value for d = {}", d) });
            None
        }
    };

    let mut upper = ktilde.map(|kt| {
        if n <= 3 {
            let u = 4 * kt;
            derivation.push(Rule { name: "multiplier".into(), detail: format!("K <= 4 K~ for n = 2, 3: 4 * {} = {}", kt, u) });
            u
        } else {
            let u = k_stabilization_upper(kt);
            derivation.push(Rule { name: "multiplier".into(), detail: format!("K <= 7 K~ for n >= 4: 7 * {} = {}", kt, u) });
            u
        }
    });

    if let Some(kc) = known_kcont {
        let r = k_recursion_upper(kc, n);
        derivation.push(Rule { name: "recursion".into(), detail: format!("K <= (n-1)(K_cont(2,d) + 3) = {} * {} = {}", n - 1, kc + 3, r) });
        upper = Some(upper.map_or(r, |u| u.min(r)));
    }

    if let Some(u) = upper {
        if u < lower {
            return Err(Error::Inconsistent(format!("upper bound {} is below the lower bound {}", u, lower)));
        }
    }
    Ok(BoundResult { lower, upper, derivation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(n: usize, d: usize) -> (usize, usize) {
        let r = k_bounds(&BoundInput::new(n, d)).unwrap();
        (r.lower, r.upper.unwrap())
    }

    #[test]
    fn table_rows() {
        assert_eq!(pair(2, 1), (5, 16));
        assert_eq!(pair(5, 1), (6, 28));
        assert_eq!(pair(4, 2), (6, 35));
        assert_eq!(pair(3, 2), (5, 20));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(k_recursion_upper(4, 2), 7);
        assert_eq!(k_recursion_upper(4, 5), 28);
        assert_eq!(k_recursion_upper(1, 2), 4);
        assert_eq!(k_stabilization_upper(4), 28);
        assert_eq!(k_stabilization_upper(5), 35);
        assert_eq!(k_stabilization_upper(1), 7);
    }

    #[test]
    fn conditional_and_inconsistent() {
        let r = k_bounds(&BoundInput::new(4, 3)).unwrap();
        assert_eq!(r.upper, None);
        let mut input = BoundInput::new(4, 3);
        input.known_ktilde = Some(6);
        assert_eq!(k_bounds(&input).unwrap().upper, Some(42));
        input.known_kcont = Some(4);
        assert_eq!(k_bounds(&input).unwrap().upper, Some(21));
        let mut bad = BoundInput::new(2, 1);
        bad.known_kcont = Some(1);
        assert!(matches!(k_bounds(&bad), Err(Error::Inconsistent(_))));
        assert!(k_bounds(&BoundInput::new(1, 1)).is_err());
    }

    #[test]
    fn prints_summary_first() {
        let r = k_bounds(&BoundInput::new(2, 1)).unwrap();
        assert!(r.to_string().starts_with("lower=5 upper=16\n"));
    }
}
