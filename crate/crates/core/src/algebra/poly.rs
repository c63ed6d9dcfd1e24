use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::gaussian::GaussianRational;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Exponent vector of a monomial. Variable `k` (0-based) prints as `x{k+1}`.
/// Trailing zero exponents are never stored, so polynomials in different
/// numbers of variables combine without padding.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_exponents(mut exps: Vec<u16>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(index: usize) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exponent(&self, var: usize) -> u16 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() { (self, other) } else { (other, self) };
        let mut e = long.0.clone();
        for (a, b) in e.iter_mut().zip(short.0.iter()) {
            *a += *b;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order with `x1 > x2 > ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let len = self.0.len().max(other.0.len());
            for k in 0..len {
                match self.exponent(k).cmp(&other.exponent(k)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", k + 1)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Multivariate polynomial over Q(i) in sparse canonical form.
///
/// Terms are kept sorted in descending graded-lex order and never carry a
/// zero coefficient, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct MultiPoly {
    terms: Vec<(Monomial, GaussianRational)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly { terms: vec![(Monomial::one(), c)] }
        }
    }

    /// The variable `x{index+1}`.
    pub fn var(index: usize) -> Self {
        MultiPoly { terms: vec![(Monomial::var(index), GaussianRational::one())] }
    }

    pub fn term(monomial: Monomial, c: GaussianRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly { terms: vec![(monomial, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussianRational)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, GaussianRational> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, GaussianRational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { terms }
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> &[(Monomial, GaussianRational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of variables in use: one past the highest variable index present.
    pub fn nvars(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.0.len()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for (m, _) in &self.terms {
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    out.insert(k);
                }
            }
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    /// Degree at most one in every variable.
    pub fn is_multilinear(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.0.iter().all(|&e| e <= 1))
    }

    pub fn constant_value(&self) -> Option<GaussianRational> {
        match self.terms.as_slice() {
            [] => Some(GaussianRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn evaluate(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        let nv = self.nvars();
        if nv > point.len() {
            return Err(Error::Evaluation(format!(
                "polynomial uses x{} but the point has {} coordinates",
                nv,
                point.len()
            )));
        }
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = &t * &point[k];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> MultiPoly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            terms.push((Monomial::from_exponents(exps), c * &GaussianRational::from_integer(e as i64)));
        }
        MultiPoly::from_terms(terms)
    }

    /// Writes `self = coeff * x_var + rest` for a polynomial of degree at
    /// most one in `x_var`. Returns `None` when the degree is higher.
    pub fn split_affine(&self, var: usize) -> Option<(MultiPoly, MultiPoly)> {
        let mut lin = Vec::new();
        let mut rest = Vec::new();
        for (m, c) in &self.terms {
            match m.exponent(var) {
                0 => rest.push((m.clone(), c.clone())),
                1 => {
                    let mut exps = m.0.clone();
                    exps[var] = 0;
                    lin.push((Monomial::from_exponents(exps), c.clone()));
                }
                _ => return None,
            }
        }
        Some((MultiPoly::from_terms(lin), MultiPoly::from_terms(rest)))
    }

    fn merge(&self, rhs: &MultiPoly, negate_rhs: bool) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            let ord = match (self.terms.get(i), rhs.terms.get(j)) {
                (Some(a), Some(b)) => b.0.cmp(&a.0),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let (m, c) = &rhs.terms[j];
                    out.push((m.clone(), if negate_rhs { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_rhs {
                        &self.terms[i].1 - &rhs.terms[j].1
                    } else {
                        &self.terms[i].1 + &rhs.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MultiPoly { terms: out }
    }
}

impl Scalar for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::constant(GaussianRational::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.merge(rhs, false)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.merge(rhs, true)
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, GaussianRational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        MultiPoly::from_map(acc)
    }
    fn neg(&self) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
    fn from_constant(c: &GaussianRational) -> Self {
        MultiPoly::constant(c.clone())
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }
    fn unit_inverse(&self) -> Option<Self> {
        // units of a polynomial ring over a field are the nonzero constants
        let c = self.constant_value()?;
        c.inv().map(MultiPoly::constant)
    }
    fn as_constant(&self) -> Option<GaussianRational> {
        self.constant_value()
    }
}

impl From<GaussianRational> for MultiPoly {
    fn from(c: GaussianRational) -> Self {
        MultiPoly::constant(c)
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical, whitespace-free form. A coefficient with both real and
    /// imaginary part is written as two terms on the same monomial, which
    /// keeps the grammar unambiguous: `1-2i`, `x1^2*x2-1/3`, `2*x1+3i*x1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let parts = [(&c.re, false), (&c.im, true)];
            for (part, imaginary) in parts {
                if part.is_zero() {
                    continue;
                }
                let negative = part.is_negative();
                if negative {
                    write!(f, "-")?;
                } else if !first {
                    write!(f, "+")?;
                }
                first = false;
                let mag = part.abs();
                let coeff = match (imaginary, mag.is_one()) {
                    (false, true) => String::new(),
                    (false, false) => mag.to_string(),
                    (true, true) => "i".to_string(),
                    (true, false) => format!("{}i", mag),
                };
                if m.is_one() {
                    if coeff.is_empty() {
                        write!(f, "1")?;
                    } else {
                        write!(f, "{}", coeff)?;
                    }
                } else if coeff.is_empty() {
                    write!(f, "{}", m)?;
                } else {
                    write!(f, "{}*{}", coeff, m)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(i)
    }

    fn c(v: i64) -> MultiPoly {
        MultiPoly::from_integer(v)
    }

    #[test]
    fn grlex_order() {
        // x1^2 > x1*x2 > x2^2 > x1 > x2 > 1
        let ms = [
            Monomial::from_exponents(vec![2]),
            Monomial::from_exponents(vec![1, 1]),
            Monomial::from_exponents(vec![0, 2]),
            Monomial::var(0),
            Monomial::var(1),
            Monomial::one(),
        ];
        for w in ms.windows(2) {
            assert!(w[0] > w[1], "{} > {}", w[0], w[1]);
        }
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = x(0).add(&x(1));
        let q = p.sub(&x(1));
        assert_eq!(q, x(0));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.sub(&p).num_terms(), 0);
    }

    #[test]
    fn display_canonical() {
        let p = x(0).mul(&x(0)).mul(&x(1)).sub(&MultiPoly::constant(GaussianRational::from_ratio(1, 3)));
        assert_eq!(p.to_string(), "x1^2*x2-1/3");
        let q = x(0).scale(&GaussianRational::new(2.into(), 3.into()));
        assert_eq!(q.to_string(), "2*x1+3i*x1");
        assert_eq!(c(-1).mul(&x(2)).to_string(), "-x3");
    }

    #[test]
    fn derivative_and_affine_split() {
        let p = x(0).mul(&x(1)).add(&x(1)).add(&c(3));
        assert_eq!(p.partial(0), x(1));
        assert_eq!(p.partial(1), x(0).add(&c(1)));
        let (lin, rest) = p.split_affine(0).unwrap();
        assert_eq!(lin, x(1));
        assert_eq!(rest, x(1).add(&c(3)));
        assert!(x(0).mul(&x(0)).split_affine(0).is_none());
        assert!(p.is_multilinear());
    }

    #[test]
    fn evaluate_checks_arity() {
        let p = x(2);
        assert!(p.evaluate(&[GaussianRational::one()]).is_err());
        let v = x(0).mul(&x(1)).evaluate(&[2.into(), 5.into()]).unwrap();
        assert_eq!(v, GaussianRational::from_integer(10));
    }
}
