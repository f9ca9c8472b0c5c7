//! Exact sparse multivariate polynomials over the rationals.
//!
//! A [`Poly`] is the coefficient ring of the coordinate chart: every structure
//! function, connection coefficient and form component is one of these.
//! Terms are kept in a map keyed by exponent vectors under graded
//! lexicographic order, and zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exponent vector. Ordered by total degree first, then lexicographically
/// (so `x1` > `x2` among linear monomials).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All monomials in `nvars` variables of total degree at most `bound`,
    /// ascending in graded-lex order.
    pub fn up_to_degree(nvars: usize, bound: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == cur.len() {
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, bound, &mut cur, &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, int(c))
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Rational::one());
        p
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.0.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant term if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::structural(format!(
                "polynomial variable count mismatch: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_ref(other);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        out.sub_assign_ref(other);
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars, "polynomial variable count mismatch");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars, "polynomial variable count mismatch");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Rational, other: &Poly) {
        assert_eq!(self.nvars, other.nvars, "polynomial variable count mismatch");
        if c.is_zero() {
            return;
        }
        for (m, k) in &other.terms {
            self.add_term(m.clone(), c * k);
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Formal partial derivative in variable `i` (0-based).
    pub fn partial(&self, i: usize) -> Result<Poly> {
        if i >= self.nvars {
            return Err(Error::structural(format!(
                "derivative index {i} out of range for {} variables",
                self.nvars
            )));
        }
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * int(e as i64));
        }
        Ok(out)
    }

    /// Partial derivative with an index known to be in range.
    pub fn d(&self, i: usize) -> Poly {
        self.partial(i).expect("derivative index in range")
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::structural("evaluation point has wrong dimension"));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in point.iter().zip(&m.0) {
                for _ in 0..*e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Parse the textual syntax `1/2*x1^2*x2 - 3` against a list of variable names.
    pub fn parse(src: &str, vars: &[String]) -> Result<Poly> {
        Parser::new(src, vars).parse()
    }

    /// Parse with the default variable names `x1, ..., xn`.
    pub fn parse_default(src: &str, nvars: usize) -> Result<Poly> {
        Self::parse(src, &default_var_names(nvars))
    }

    pub fn display_with<'a>(&'a self, vars: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, vars }
    }

    pub fn to_string_with(&self, vars: &[String]) -> String {
        self.display_with(vars).to_string()
    }
}

pub fn default_var_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial variable count mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial variable count mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial variable count mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    vars: &'a [String],
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.poly.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if m.degree() == 0 || !abs.is_one() {
                factors.push(fmt_rational(&abs));
            }
            for (i, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = default_var_names(self.nvars);
        write!(f, "{}", self.display_with(&vars))
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    vars: &'a [String],
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, vars: &'a [String]) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            vars,
            src,
        }
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        Error::parse(format!("'{}' col {}", self.src, self.pos + 1), reason)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Poly> {
        let n = self.vars.len();
        let mut out = Poly::zero(n);
        let mut sign = Rational::one();
        match self.peek() {
            Some('-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            None => return Err(self.err("empty polynomial")),
            _ => {}
        }
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, c * &sign);
            match self.peek() {
                None => break,
                Some('+') => {
                    sign = Rational::one();
                    self.pos += 1;
                }
                Some('-') => {
                    sign = -Rational::one();
                    self.pos += 1;
                }
                Some(ch) => return Err(self.err(format!("unexpected character '{ch}'"))),
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let n = self.vars.len();
        let mut coeff = Rational::one();
        let mut mono = Monomial::one(n);
        loop {
            match self.peek() {
                Some(ch) if ch.is_ascii_digit() => coeff *= self.rational()?,
                Some(ch) if ch.is_alphabetic() || ch == '_' => {
                    let name = self.ident();
                    let idx = self
                        .vars
                        .iter()
                        .position(|v| *v == name)
                        .ok_or_else(|| self.err(format!("unknown variable '{name}'")))?;
                    let mut e = 1u32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        e = self.unsigned()?;
                    }
                    mono.0[idx] += e;
                }
                _ => return Err(self.err("expected a number or a variable")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((mono, coeff))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<BigInt>().map_err(|e| self.err(e.to_string()))
    }

    fn unsigned(&mut self) -> Result<u32> {
        let d = self.digits()?;
        u32::try_from(d).map_err(|_| self.err("exponent too large"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.digits()?;
        if self.peek() == Some('/') {
            self.pos += 1;
            let den = self.digits()?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse_default(s, 2).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p("x1 + 1") * &p("x1 - 1"), p("x1^2 - 1"));
    }

    #[test]
    fn zero_absorbs() {
        let z = Poly::zero(2);
        assert!((&p("x1") * &z).is_zero());
    }

    #[test]
    fn exact_rational_scaling() {
        assert_eq!(p("1/2*x1 + 1/3").scale(&int(3)), p("3/2*x1 + 1"));
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("x1^2*x2").d(0), p("2*x1*x2"));
        assert!(p("7").d(1).is_zero());
        let f = p("x1");
        let g = p("x1*x2");
        assert_eq!((&f * &g).d(0), &(&f.d(0) * &g) + &(&f * &g.d(0)));
    }

    #[test]
    fn derivative_index_out_of_range() {
        assert!(matches!(p("x1").partial(2), Err(Error::Structural(_))));
    }

    #[test]
    fn mismatched_variable_counts() {
        let a = Poly::var(2, 0);
        let b = Poly::var(3, 0);
        assert!(matches!(a.checked_add(&b), Err(Error::Structural(_))));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn display_is_canonical() {
        let vars = default_var_names(2);
        let q = Poly::parse("-3 + x2*x1^2/1*1/2", &vars);
        // "x2*x1^2/1" is not valid syntax; the division only applies to numbers
        assert!(q.is_err());
        let q = Poly::parse("-3 + 1/2*x2*x1^2", &vars).unwrap();
        assert_eq!(q.to_string(), "1/2*x1^2*x2 - 3");
        assert_eq!(p("-x1 + x2").to_string(), "-x1 + x2");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("2*x1 - 2*x1").to_string(), "0");
    }

    #[test]
    fn parse_errors_are_located() {
        let e = Poly::parse_default("x1 + y", 2).unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        assert!(Poly::parse_default("", 2).is_err());
        assert!(Poly::parse_default("1/0", 2).is_err());
    }

    #[test]
    fn monomial_enumeration() {
        let ms = Monomial::up_to_degree(2, 2);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms[0], Monomial::one(2));
    }
}
