//! Sparse homogeneous polynomials and the ring context that operates on them.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Coef, PrimeField};
use crate::monomial::{Monomial, MAX_VARS};

/// A homogeneous polynomial. Terms are kept in strictly decreasing grevlex
/// order with nonzero coefficients; the zero polynomial has no terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: Vec<(Monomial, Coef)>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.degree())
    }

    pub fn terms(&self) -> &[(Monomial, Coef)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<(Monomial, Coef)> {
        self.terms.first().copied()
    }

    pub fn coefficient(&self, m: Monomial) -> Coef {
        self.terms
            .binary_search_by(|t| m.cmp_grevlex(t.0))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    /// Builds a polynomial from terms that are already sorted, combined and
    /// homogeneous. Only checked in debug builds.
    pub(crate) fn from_sorted_unchecked(terms: Vec<(Monomial, Coef)>) -> Polynomial {
        debug_assert!(terms.windows(2).all(|w| w[0].0.cmp_grevlex(w[1].0).is_gt()));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        Polynomial { terms }
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coef)> {
        self.terms
    }
}

/// The polynomial ring `F_p[x_0, ..., x_{n-1}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    pub field: PrimeField,
    pub nvars: usize,
}

impl Ring {
    pub fn new(p: u32, nvars: usize) -> Result<Ring> {
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::Usage(format!("number of variables must be in 1..={MAX_VARS}")));
        }
        Ok(Ring { field: PrimeField::new(p)?, nvars })
    }

    /// Coordinate ring of P^4 over `F_p`.
    pub fn p4(p: u32) -> Result<Ring> {
        Ring::new(p, 5)
    }

    pub fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn var(&self, i: usize) -> Polynomial {
        assert!(i < self.nvars, "variable x{i} out of range");
        Polynomial { terms: vec![(Monomial::var(i), 1)] }
    }

    pub fn vars(&self) -> Vec<Polynomial> {
        (0..self.nvars).map(|i| self.var(i)).collect()
    }

    pub fn constant(&self, c: i64) -> Polynomial {
        self.monomial(Monomial::ONE, self.field.from_i64(c))
    }

    pub fn one(&self) -> Polynomial {
        self.constant(1)
    }

    pub fn monomial(&self, m: Monomial, c: Coef) -> Polynomial {
        if c == 0 {
            Polynomial::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Collects arbitrary terms; fails if the result is not homogeneous.
    pub fn from_terms(&self, mut terms: Vec<(Monomial, Coef)>) -> Result<Polynomial> {
        terms.sort_by(|a, b| b.0.cmp_grevlex(a.0));
        let mut out: Vec<(Monomial, Coef)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % self.characteristic();
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = self.field.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        if let Some(first) = out.first() {
            let d = first.0.degree();
            if out.iter().any(|t| t.0.degree() != d) {
                return Err(Error::Degree("polynomial is not homogeneous".into()));
            }
        }
        Ok(Polynomial { terms: out })
    }

    pub fn add(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        match (f.degree(), g.degree()) {
            (Some(a), Some(b)) if a != b => Err(Error::Degree(format!(
                "cannot add polynomials of degrees {a} and {b}"
            ))),
            _ => Ok(self.add_unchecked(f, g, 1)),
        }
    }

    pub fn sub(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        self.add(f, &self.neg(g))
    }

    /// `f + c*g` assuming equal degrees.
    pub(crate) fn add_unchecked(&self, f: &Polynomial, g: &Polynomial, c: Coef) -> Polynomial {
        let k = &self.field;
        let (a, b) = (&f.terms, &g.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp_grevlex(b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let v = k.mul(c, b[j].1);
                    if v != 0 {
                        out.push((b[j].0, v));
                    }
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let v = k.add(a[i].1, k.mul(c, b[j].1));
                    if v != 0 {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let v = k.mul(c, t.1);
            if v != 0 {
                out.push((t.0, v));
            }
        }
        Polynomial { terms: out }
    }

    pub fn neg(&self, f: &Polynomial) -> Polynomial {
        Polynomial { terms: f.terms.iter().map(|&(m, c)| (m, self.field.neg(c))).collect() }
    }

    pub fn scale(&self, c: Coef, f: &Polynomial) -> Polynomial {
        let c = c % self.characteristic();
        if c == 0 {
            return Polynomial::zero();
        }
        Polynomial { terms: f.terms.iter().map(|&(m, a)| (m, self.field.mul(a, c))).collect() }
    }

    pub fn mul_monomial(&self, f: &Polynomial, m: Monomial, c: Coef) -> Polynomial {
        if c == 0 {
            return Polynomial::zero();
        }
        Polynomial {
            terms: f.terms.iter().map(|&(t, a)| (t.mul(m), self.field.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        if f.is_zero() || g.is_zero() {
            return Polynomial::zero();
        }
        let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
        if small.len() == 1 {
            let (m, c) = small.terms[0];
            return self.mul_monomial(large, m, c);
        }
        let p = self.characteristic() as u64;
        let mut prods: Vec<(u64, u64)> = Vec::with_capacity(f.len() * g.len());
        for &(m1, c1) in &small.terms {
            for &(m2, c2) in &large.terms {
                prods.push((m1.mul(m2).grevlex_key(), c1 as u64 * c2 as u64 % p));
            }
        }
        prods.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Coef)> = Vec::with_capacity(prods.len());
        let mut i = 0;
        while i < prods.len() {
            let key = prods[i].0;
            let mut acc = 0u64;
            while i < prods.len() && prods[i].0 == key {
                acc += prods[i].1;
                i += 1;
            }
            let c = (acc % p) as Coef;
            if c != 0 {
                out.push((Monomial::from_grevlex_key(key), c));
            }
        }
        Polynomial { terms: out }
    }

    pub fn pow(&self, f: &Polynomial, e: u32) -> Polynomial {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, f);
        }
        acc
    }

    pub fn sum(&self, fs: &[Polynomial]) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        for f in fs {
            acc = self.add(&acc, f)?;
        }
        Ok(acc)
    }

    /// Linear combination `sum c_i f_i` of polynomials of one degree.
    pub fn combination(&self, coefs: &[Coef], fs: &[Polynomial]) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        for (&c, f) in coefs.iter().zip(fs) {
            if let (Some(a), Some(b)) = (acc.degree(), f.degree()) {
                if a != b {
                    return Err(Error::Degree("combination of mixed degrees".into()));
                }
            }
            acc = self.add_unchecked(&acc, f, c);
        }
        Ok(acc)
    }

    pub fn derivative(&self, f: &Polynomial, i: usize) -> Polynomial {
        let mut terms = Vec::new();
        for &(m, c) in &f.terms {
            if let Some((e, q)) = m.derive(i) {
                let v = self.field.mul(c, self.field.from_i64(e as i64));
                if v != 0 {
                    terms.push((q, v));
                }
            }
        }
        // dividing by x_i keeps the grevlex order among surviving terms
        Polynomial { terms }
    }

    /// Scales `f` so that its leading coefficient is one.
    pub fn monic(&self, f: &Polynomial) -> Polynomial {
        match f.leading_term() {
            None => Polynomial::zero(),
            Some((_, c)) => self.scale(self.field.inv(c), f),
        }
    }

    pub fn eval(&self, f: &Polynomial, point: &[Coef]) -> Coef {
        let k = &self.field;
        let mut acc = 0;
        for &(m, c) in &f.terms {
            let mut v = c;
            for (i, &x) in point.iter().enumerate().take(self.nvars) {
                v = k.mul(v, k.pow(x, m.exponent(i) as u64));
            }
            acc = k.add(acc, v);
        }
        acc
    }

    /// Renders `f` in the textual syntax accepted by the parser.
    pub fn format(&self, f: &Polynomial) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, &(m, c)) in f.terms.iter().enumerate() {
            let v = self.field.to_signed(c);
            let (neg, a) = (v < 0, v.unsigned_abs());
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m == Monomial::ONE {
                let _ = write!(s, "{a}");
            } else if a == 1 {
                s.push_str(&m.fmt_with(self.nvars));
            } else {
                let _ = write!(s, "{a}*{}", m.fmt_with(self.nvars));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::p4(31991).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring();
        let (x0, x1) = (r.var(0), r.var(1));
        let a = r.add(&x0, &x1).unwrap();
        let b = r.sub(&x0, &x1).unwrap();
        let prod = r.mul(&a, &b);
        let expect = r.sub(&r.mul(&x0, &x0), &r.mul(&x1, &x1)).unwrap();
        assert_eq!(prod, expect);
        assert_eq!(r.format(&prod), "x0^2 - x1^2");
    }

    #[test]
    fn additive_inverse_and_characteristic() {
        let r = ring();
        let f = r.add(&r.var(2), &r.scale(7, &r.var(3))).unwrap();
        assert!(r.add(&f, &r.neg(&f)).unwrap().is_zero());
        let r5 = Ring::new(5, 5).unwrap();
        let x0 = r5.var(0);
        assert!(r5.add(&r5.scale(3, &x0), &r5.scale(2, &x0)).unwrap().is_zero());
    }

    #[test]
    fn adding_mixed_degrees_fails() {
        let r = ring();
        let sq = r.mul(&r.var(0), &r.var(0));
        assert!(matches!(r.add(&sq, &r.var(1)), Err(Error::Degree(_))));
        assert!(r.from_terms(vec![(Monomial::var(0), 1), (Monomial::ONE, 1)]).is_err());
    }

    #[test]
    fn key_round_trip() {
        let m = Monomial::from_exponents(&[3, 0, 2, 1, 4]);
        assert_eq!(Monomial::from_grevlex_key(m.grevlex_key()), m);
    }

    #[test]
    fn derivative_of_cube() {
        let r = ring();
        let f = r.mul(&r.pow(&r.var(0), 2), &r.var(1));
        let d = r.derivative(&f, 0);
        assert_eq!(d, r.scale(2, &r.mul(&r.var(0), &r.var(1))));
    }
}
