use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::LatticePoint;
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("negative exponent in {0}")]
    NegativeExponent(LatticePoint),
    #[error("exponent {exponent} has dimension {got}, polynomial has {expected}")]
    DimensionMismatch {
        exponent: LatticePoint,
        got: usize,
        expected: usize,
    },
    #[error("cannot parse polynomial at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Finite-support polynomial in `x1..xd` with rational coefficients.
///
/// Stands in for a truncation of an analytic power series. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<LatticePoint, Rat>,
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        Self::monomial(c, LatticePoint::zero(dim)).expect("zero exponent is valid")
    }

    pub fn monomial(coeff: Rat, exponent: LatticePoint) -> Result<Self, PolyError> {
        let mut p = Poly::zero(exponent.dim());
        p.add_term(exponent, coeff)?;
        Ok(p)
    }

    /// The coordinate function `x_{i+1}` (0-based `i`).
    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(Rat::one(), LatticePoint(e)).expect("unit exponent is valid")
    }

    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = (LatticePoint, Rat)>,
    ) -> Result<Self, PolyError> {
        let mut p = Poly::zero(dim);
        for (e, c) in terms {
            p.add_term(e, c)?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, exponent: LatticePoint, coeff: Rat) -> Result<(), PolyError> {
        if exponent.dim() != self.dim {
            return Err(PolyError::DimensionMismatch {
                got: exponent.dim(),
                expected: self.dim,
                exponent,
            });
        }
        if exponent.iter().any(|&a| a < 0) {
            return Err(PolyError::NegativeExponent(exponent));
        }
        self.add_unchecked(exponent, coeff);
        Ok(())
    }

    fn add_unchecked(&mut self, exponent: LatticePoint, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponent) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &Rat)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &LatticePoint> {
        self.terms.keys()
    }

    pub fn coeff(&self, exponent: &[i64]) -> Rat {
        self.terms
            .get(&LatticePoint(exponent.to_vec()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn contains_monomial(&self, exponent: &[i64]) -> bool {
        self.terms.contains_key(&LatticePoint(exponent.to_vec()))
    }

    /// Keeps the terms for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(&LatticePoint, &Rat) -> bool) -> Poly {
        Poly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, c)| keep(e, c))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// The `c`-th truncation: terms of total degree at most `c`.
    pub fn truncate(&self, c: u64) -> Poly {
        self.filter(|e, _| total_degree(e) <= c as i64)
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }
}

pub(crate) fn total_degree(e: &[i64]) -> i64 {
    e.iter().sum()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(
            self.dim, rhs.dim,
            "adding polynomials of different dimension"
        );
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_unchecked(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(
            self.dim, rhs.dim,
            "multiplying polynomials of different dimension"
        );
        let mut out = Poly::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = LatticePoint(e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect());
                out.add_unchecked(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    /// `coef*x1^a1*...*xd^ad` terms joined by ` + ` / ` - `, highest total
    /// degree first; `0` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut ordered: Vec<(&LatticePoint, &Rat)> = self.terms.iter().collect();
        ordered
            .sort_by(|(a, _), (b, _)| total_degree(b).cmp(&total_degree(a)).then_with(|| b.cmp(a)));
        for (k, (e, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            let is_const = e.iter().all(|&a| a == 0);
            if !abs.is_one() || is_const {
                factors.push(rat::fmt_rat(&abs));
            }
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, a)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

/// Parses the text form `coef*x1^a1*...*xd^ad ± ...`.
///
/// Coefficients may be integers or `p/q`; a factor may repeat a variable.
pub fn parse_poly(dim: usize, s: &str) -> Result<Poly, PolyError> {
    Parser {
        src: s.as_bytes(),
        pos: 0,
        dim,
    }
    .poly()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .or_else(|_| self.err("number out of range"))
    }

    fn poly(&mut self) -> Result<Poly, PolyError> {
        let mut p = Poly::zero(self.dim);
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut sign = Rat::one();
        match self.peek() {
            Some(b'-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let (c, e) = self.term()?;
            p.add_unchecked(e, c * &sign);
            match self.peek() {
                None => break,
                Some(b'+') => {
                    sign = Rat::one();
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = -Rat::one();
                    self.pos += 1;
                }
                Some(ch) => return self.err(format!("unexpected character {:?}", ch as char)),
            }
        }
        Ok(p)
    }

    fn term(&mut self) -> Result<(Rat, LatticePoint), PolyError> {
        let mut coeff = Rat::one();
        let mut exp = vec![0i64; self.dim];
        loop {
            match self.peek() {
                Some(ch) if ch.is_ascii_digit() => {
                    let n = self.number()?;
                    let mut c = Rat::from_integer(n.into());
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let d = self.number()?;
                        if d == 0 {
                            return self.err("zero denominator");
                        }
                        c /= Rat::from_integer(d.into());
                    }
                    coeff *= c;
                }
                Some(b'x') => {
                    self.pos += 1;
                    let i = self.number()? as usize;
                    if i == 0 || i > self.dim {
                        return self.err(format!("variable x{i} outside x1..x{}", self.dim));
                    }
                    let mut a = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        a = self.number()? as i64;
                    }
                    exp[i - 1] += a;
                }
                Some(_) => return self.err("expected a coefficient or a variable"),
                None => return self.err("unexpected end of input"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((coeff, LatticePoint(exp)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};

    #[test]
    fn parse_roundtrip_examples() {
        let p = parse_poly(4, "x1*x2 + x3^7").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&[0, 0, 7, 0]), int(1));
        assert_eq!(p.to_string(), "x3^7 + x1*x2");
        let q = parse_poly(2, "-3/2*x1^2 + 2 - x2 + x1*x1").unwrap();
        assert_eq!(q.coeff(&[2, 0]), ratio(-1, 2));
        assert_eq!(q.coeff(&[0, 0]), int(2));
        assert_eq!(parse_poly(2, &q.to_string()).unwrap(), q);
        assert!(parse_poly(1, "x1 - x1").unwrap().is_zero());
        assert_eq!(parse_poly(2, "0").unwrap(), Poly::zero(2));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_poly(2, "x3"), Err(PolyError::Parse { .. })));
        assert!(matches!(
            parse_poly(2, "x1 +"),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            parse_poly(2, "1/0*x1"),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(parse_poly(2, "y"), Err(PolyError::Parse { .. })));
        assert!(matches!(parse_poly(2, ""), Err(PolyError::Parse { .. })));
    }

    #[test]
    fn arithmetic() {
        let a = parse_poly(2, "x1 + x2").unwrap();
        let b = parse_poly(2, "x1 - x2").unwrap();
        assert_eq!(&a * &b, parse_poly(2, "x1^2 - x2^2").unwrap());
        assert!((&a - &a).is_zero());
        assert!(Poly::monomial(int(1), LatticePoint(vec![-1, 0])).is_err());
    }

    #[test]
    fn truncation() {
        let h = parse_poly(2, "3 + x1 + x2^2 + x1^2*x2").unwrap();
        assert_eq!(h.truncate(0), Poly::constant(2, int(3)));
        assert_eq!(
            parse_poly(2, "x1 + x2^2").unwrap().truncate(1),
            Poly::var(2, 0)
        );
        assert_eq!(h.truncate(2).truncate(1), h.truncate(1));
    }
}
