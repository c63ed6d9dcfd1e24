//! Text formats for matrices and chains.
//!
//! ```text
//! matrix <rows> <cols> <gaussian|poly:m>
//! <row of scalars>
//! ...
//!
//! chain <n> <K>
//! factor minus|plus        factor lower|upper
//! <n rows of A>            <n rows of G>
//! <n rows of Z>
//! ...
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Scalars follow the
//! grammar in [`crate::algebra::parse`].

use std::fmt::{self, Write as _};

use crate::algebra::parse::parse_poly_at;
use crate::algebra::{GaussianRational, Matrix, MultiPoly, Scalar};
use crate::error::{Error, Result};
use crate::symplectic::{ElementaryChain, ElementarySymplectic, FactorChain, Side, Sign, StandardFactor};

/// Coefficient ring named in a matrix header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ring {
    Gaussian,
    /// Polynomials in `x1 .. xm`.
    Poly(usize),
}

impl Ring {
    /// Smallest ring holding every entry.
    pub fn of<'a>(entries: impl IntoIterator<Item = &'a MultiPoly>) -> Ring {
        let m = entries.into_iter().map(|p| p.nvars()).max().unwrap_or(0);
        if m == 0 {
            Ring::Gaussian
        } else {
            Ring::Poly(m)
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Gaussian => write!(f, "gaussian"),
            Ring::Poly(m) => write!(f, "poly:{}", m),
        }
    }
}

/// A parsed chain file: either elementary factors or standard factors.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainDocument {
    Elementary(ElementaryChain<MultiPoly>),
    Factors(FactorChain<MultiPoly>),
}

#[derive(Clone)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

struct Lines<'a> {
    lines: Vec<(usize, Vec<Token<'a>>)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut last_line = 1;
        for (idx, raw) in text.lines().enumerate() {
            last_line = idx + 1;
            let trimmed = raw.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut toks = Vec::new();
            let mut start = None;
            for (c, ch) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(c),
                    (true, Some(s)) => {
                        toks.push(Token { text: &raw[s..c], line: idx + 1, column: raw[..s].chars().count() + 1 });
                        start = None;
                    }
                    _ => {}
                }
            }
            lines.push((idx + 1, toks));
        }
        Lines { lines, pos: 0, last_line }
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<Token<'a>>)> {
        let line = self.last_line + 1;
        let item = self.lines.get(self.pos).cloned().ok_or_else(|| Error::parse(line, 1, format!("missing {}", what)))?;
        self.pos += 1;
        Ok(item)
    }

    fn finish(&self) -> Result<()> {
        match self.lines.get(self.pos) {
            Some((line, _)) => Err(Error::parse(*line, 1, "unexpected trailing content")),
            None => Ok(()),
        }
    }
}

fn parse_count(tok: &Token<'_>, what: &str) -> Result<usize> {
    tok.text.parse().map_err(|_| Error::parse(tok.line, tok.column, format!("expected {} but found '{}'", what, tok.text)))
}

fn expect_len(line: usize, toks: &[Token<'_>], n: usize, what: &str) -> Result<()> {
    if toks.len() != n {
        let col = toks.get(n).map(|t| t.column).unwrap_or(1);
        return Err(Error::parse(line, col, format!("expected {} {} but found {}", n, what, toks.len())));
    }
    Ok(())
}

fn parse_rows(lines: &mut Lines<'_>, rows: usize, cols: usize, max_var: Option<usize>) -> Result<Matrix<MultiPoly>> {
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let (line, toks) = lines.next("matrix row")?;
        expect_len(line, &toks, cols, "entries")?;
        for t in &toks {
            let p = parse_poly_at(t.text, t.line, t.column)?;
            if let Some(m) = max_var {
                if p.nvars() > m {
                    let ring = if m == 0 { "gaussian".to_string() } else { format!("poly:{}", m) };
                    return Err(Error::parse(t.line, t.column, format!("'{}' is outside the ring {}", t.text, ring)));
                }
            }
            data.push(p);
        }
    }
    Matrix::new(rows, cols, data)
}

fn parse_ring(tok: &Token<'_>) -> Result<Ring> {
    if tok.text == "gaussian" {
        return Ok(Ring::Gaussian);
    }
    if let Some(m) = tok.text.strip_prefix("poly:") {
        if let Ok(m) = m.parse::<usize>() {
            return Ok(Ring::Poly(m));
        }
    }
    Err(Error::parse(tok.line, tok.column, format!("unknown ring '{}'", tok.text)))
}

pub fn parse_matrix(text: &str) -> Result<(Matrix<MultiPoly>, Ring)> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next("matrix header")?;
    if header.first().map(|t| t.text) != Some("matrix") {
        return Err(Error::parse(line, 1, "expected 'matrix <rows> <cols> <ring>'"));
    }
    expect_len(line, &header, 4, "header fields")?;
    let rows = parse_count(&header[1], "row count")?;
    let cols = parse_count(&header[2], "column count")?;
    let ring = parse_ring(&header[3])?;
    let max_var = match ring {
        Ring::Gaussian => 0,
        Ring::Poly(m) => m,
    };
    let m = parse_rows(&mut lines, rows, cols, Some(max_var))?;
    lines.finish()?;
    Ok((m, ring))
}

pub fn parse_chain(text: &str) -> Result<ChainDocument> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next("chain header")?;
    if header.first().map(|t| t.text) != Some("chain") {
        return Err(Error::parse(line, 1, "expected 'chain <n> <K>'"));
    }
    expect_len(line, &header, 3, "header fields")?;
    let n = parse_count(&header[1], "n")?;
    let k = parse_count(&header[2], "K")?;
    if n == 0 {
        return Err(Error::parse(line, header[1].column, "n must be positive"));
    }
    let mut elementary = Vec::new();
    let mut standard = Vec::new();
    for idx in 0..k {
        let (line, toks) = lines.next("factor block")?;
        if toks.len() != 2 || toks[0].text != "factor" {
            return Err(Error::parse(line, 1, "expected 'factor <minus|plus|lower|upper>'"));
        }
        let kind = &toks[1];
        let wrap = |e: Error| match e {
            Error::Parse { .. } => e,
            other => Error::parse(line, 1, format!("factor {}: {}", idx + 1, other)),
        };
        match kind.text {
            "minus" | "plus" => {
                let sign = if kind.text == "minus" { Sign::Minus } else { Sign::Plus };
                let a = parse_rows(&mut lines, n, n, None)?;
                let z = parse_rows(&mut lines, n, n, None)?;
                elementary.push(ElementarySymplectic::new(sign, a, z).map_err(wrap)?);
            }
            "lower" | "upper" => {
                let side = if kind.text == "lower" { Side::Lower } else { Side::Upper };
                let g = parse_rows(&mut lines, n, n, None)?;
                standard.push(StandardFactor::new(side, g).map_err(wrap)?);
            }
            other => {
                return Err(Error::parse(line, kind.column, format!("unknown factor kind '{}'", other)));
            }
        }
        if !elementary.is_empty() && !standard.is_empty() {
            return Err(Error::parse(line, kind.column, "cannot mix elementary and standard factors"));
        }
    }
    lines.finish()?;
    let to_parse = |e: Error| Error::parse(line, 1, e.to_string());
    if standard.is_empty() {
        Ok(ChainDocument::Elementary(ElementaryChain::new(n, elementary).map_err(to_parse)?))
    } else {
        Ok(ChainDocument::Factors(FactorChain::new(n, standard).map_err(to_parse)?))
    }
}

fn write_rows<T: Scalar>(out: &mut String, m: &Matrix<T>) {
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

pub fn format_matrix<T: Scalar>(m: &Matrix<T>, ring: Ring) -> String {
    let mut out = format!("matrix {} {} {}\n", m.rows(), m.cols(), ring);
    write_rows(&mut out, m);
    out
}

pub fn format_elementary_chain<T: Scalar>(c: &ElementaryChain<T>) -> String {
    let mut out = format!("chain {} {}\n", c.n(), c.len());
    for e in c.factors() {
        let _ = writeln!(out, "factor {}", e.sign());
        write_rows(&mut out, e.a());
        write_rows(&mut out, e.z());
    }
    out
}

pub fn format_factor_chain<T: Scalar>(c: &FactorChain<T>) -> String {
    let mut out = format!("chain {} {}\n", c.n(), c.len());
    for f in c.factors() {
        let _ = writeln!(out, "factor {}", f.side());
        write_rows(&mut out, f.g());
    }
    out
}

/// Converts a constant polynomial matrix to Gaussian rationals, or fails
/// with [`Error::PolynomialEntries`].
pub fn to_gaussian(m: &Matrix<MultiPoly>) -> Result<Matrix<GaussianRational>> {
    m.to_constants().ok_or(Error::PolynomialEntries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let text = "matrix 2 2 poly:2\n1 x1^2*x2-1/3\n1-2i 0\n";
        let (m, ring) = parse_matrix(text).unwrap();
        assert_eq!(ring, Ring::Poly(2));
        assert_eq!(format_matrix(&m, ring), text);
    }

    #[test]
    fn matrix_errors_have_positions() {
        let err = parse_matrix("matrix 1 2 gaussian\n1 1/0\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, column: 5, message: "zero denominator".into() });
        let err = parse_matrix("matrix 1 1 gaussian\nx1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 1, .. }));
        assert!(parse_matrix("matrix 2 2 gaussian\n1 0\n").is_err());
    }

    #[test]
    fn chain_round_trip() {
        let text = "chain 2 2\nfactor minus\n1 x1\n0 1\n1 2\n2 0\nfactor plus\n1 0\n0 1\n0 0\n0 i\n";
        let doc = parse_chain(text).unwrap();
        let ChainDocument::Elementary(c) = &doc else { panic!("expected elementary chain") };
        assert_eq!(format_elementary_chain(c), text);

        let text = "chain 1 2\nfactor lower\n3\nfactor upper\n-1/2\n";
        let ChainDocument::Factors(f) = parse_chain(text).unwrap() else { panic!("expected factor chain") };
        assert_eq!(format_factor_chain(&f), text);
    }

    #[test]
    fn chain_shape_errors() {
        let bad_a = "chain 2 1\nfactor minus\n1 0\n1 1\n0 0\n0 0\n";
        assert!(matches!(parse_chain(bad_a), Err(Error::Parse { .. })));
        let bad_sign = "chain 1 1\nfactor plus\n1\n0\n";
        assert!(parse_chain(bad_sign).is_err());
    }
}
