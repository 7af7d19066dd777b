//! Packed monomials and the graded reverse lexicographic order.
//!
//! A monomial in at most [`MAX_VARS`] variables is stored in a single `u64`:
//! byte `i` holds the exponent of `x_i` and the top byte holds the total
//! degree. Multiplication is integer addition, and grevlex comparison is an
//! integer comparison after flipping the exponent bytes.

use std::cmp::Ordering;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 7;
/// Exponents and degrees must stay below this bound so that the packed
/// divisibility test never borrows across bytes.
pub const MAX_EXPONENT: u32 = 127;

const DEG_SHIFT: u32 = 56;
const EXP_MASK: u64 = 0x00FF_FFFF_FFFF_FFFF;
const HIGH_BITS: u64 = 0x8080_8080_8080_8080;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        let mut raw = 0u64;
        let mut deg = 0u32;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e <= MAX_EXPONENT, "exponent {e} too large");
            raw |= (e as u64) << (8 * i);
            deg += e;
        }
        assert!(deg <= MAX_EXPONENT, "degree {deg} too large");
        Monomial(raw | ((deg as u64) << DEG_SHIFT))
    }

    pub fn var(i: usize) -> Monomial {
        assert!(i < MAX_VARS);
        Monomial((1u64 << (8 * i)) | (1u64 << DEG_SHIFT))
    }

    #[inline]
    pub fn raw(self) -> u64 {
        self.0
    }

    /// Inverse of [`Monomial::raw`].
    #[inline]
    pub fn from_raw(raw: u64) -> Monomial {
        Monomial(raw)
    }

    /// Inverse of [`Monomial::grevlex_key`].
    #[inline]
    pub fn from_grevlex_key(key: u64) -> Monomial {
        Monomial(key ^ EXP_MASK)
    }

    #[inline]
    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> (8 * i)) & 0xFF) as u32
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0 >> DEG_SHIFT) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        debug_assert!(self.degree() + other.degree() <= MAX_EXPONENT);
        Monomial(self.0 + other.0)
    }

    /// `self | other`.
    #[inline]
    pub fn divides(self, other: Monomial) -> bool {
        ((other.0 | HIGH_BITS).wrapping_sub(self.0) & HIGH_BITS) == HIGH_BITS
    }

    /// `other / self`; caller guarantees divisibility.
    #[inline]
    pub fn quotient_of(self, other: Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial(other.0 - self.0)
    }

    pub fn lcm(self, other: Monomial) -> Monomial {
        let mut raw = 0u64;
        let mut deg = 0u64;
        for i in 0..MAX_VARS {
            let e = self.exponent(i).max(other.exponent(i)) as u64;
            raw |= e << (8 * i);
            deg += e;
        }
        Monomial(raw | (deg << DEG_SHIFT))
    }

    pub fn gcd(self, other: Monomial) -> Monomial {
        let mut raw = 0u64;
        let mut deg = 0u64;
        for i in 0..MAX_VARS {
            let e = self.exponent(i).min(other.exponent(i)) as u64;
            raw |= e << (8 * i);
            deg += e;
        }
        Monomial(raw | (deg << DEG_SHIFT))
    }

    #[inline]
    pub fn is_coprime(self, other: Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exponent(i) == 0 || other.exponent(i) == 0)
    }

    /// Key whose integer order is grevlex with `x0 > x1 > ... `.
    #[inline]
    pub fn grevlex_key(self) -> u64 {
        self.0 ^ EXP_MASK
    }

    #[inline]
    pub fn cmp_grevlex(self, other: Monomial) -> Ordering {
        self.grevlex_key().cmp(&other.grevlex_key())
    }

    /// Formal partial derivative exponent bookkeeping: returns `(e_i, self / x_i)`.
    pub fn derive(self, i: usize) -> Option<(u32, Monomial)> {
        let e = self.exponent(i);
        if e == 0 {
            None
        } else {
            Some((e, Monomial(self.0 - Monomial::var(i).0)))
        }
    }

    pub fn fmt_with(self, nvars: usize) -> String {
        let mut parts = Vec::new();
        for i in 0..nvars {
            match self.exponent(i) {
                0 => {}
                1 => parts.push(format!("x{i}")),
                e => parts.push(format!("x{i}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.fmt_with(MAX_VARS))
    }
}

/// Grevlex comparison on raw exponent vectors.
pub fn compare_grevlex(a: &[u32], b: &[u32]) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::Usage(format!(
            "cannot compare monomials in {} and {} variables",
            a.len(),
            b.len()
        )));
    }
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    if da != db {
        return Ok(da.cmp(&db));
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            // smaller exponent in the last differing variable wins
            return Ok(b[i].cmp(&a[i]));
        }
    }
    Ok(Ordering::Equal)
}

const BINOM_N: usize = 192;

fn binom_table() -> &'static Vec<[u64; MAX_VARS + 2]> {
    static TABLE: OnceLock<Vec<[u64; MAX_VARS + 2]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![[0u64; MAX_VARS + 2]; BINOM_N];
        for n in 0..BINOM_N {
            t[n][0] = 1;
            for k in 1..MAX_VARS + 2 {
                t[n][k] = if n == 0 { 0 } else { t[n - 1][k - 1] + t[n - 1][k] };
            }
        }
        t
    })
}

/// `binom(n, k)` for small `k`; zero when `n < 0`.
pub fn binom_small(n: i64, k: usize) -> u64 {
    if n < 0 {
        return 0;
    }
    let n = n as usize;
    if n < BINOM_N && k < MAX_VARS + 2 {
        binom_table()[n][k]
    } else {
        let mut acc: u128 = 1;
        for i in 0..k as u128 {
            acc = acc * (n as u128 - i) / (i + 1);
        }
        acc as u64
    }
}

/// Number of monomials of degree `d` in `nvars` variables.
pub fn count_monomials(nvars: usize, d: i64) -> usize {
    if d < 0 {
        0
    } else if nvars == 0 {
        usize::from(d == 0)
    } else {
        binom_small(d + nvars as i64 - 1, nvars - 1) as usize
    }
}

/// Bijection from degree-`d` monomials onto `0..count_monomials(nvars, d)`.
#[inline]
pub fn monomial_rank(m: Monomial, nvars: usize) -> usize {
    let mut rank = 0u64;
    let mut suffix = 0i64;
    for j in (1..nvars).rev() {
        suffix += m.exponent(j) as i64;
        rank += binom_small(suffix + (nvars - j) as i64 - 1, nvars - j);
    }
    rank as usize
}

/// All monomials of degree `d` in `nvars` variables, in decreasing grevlex order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(count_monomials(nvars, d as i64));
    let mut exps = vec![0u32; nvars];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = exps.len();
        if i + 1 == n {
            exps[i] = left;
            out.push(Monomial::from_exponents(exps));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::ONE);
        }
        return out;
    }
    rec(0, d, &mut exps, &mut out);
    out.sort_by(|a, b| b.cmp_grevlex(*a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_examples() {
        // x0^2 > x0*x1
        assert_eq!(m(&[2, 0, 0, 0, 0]).cmp_grevlex(m(&[1, 1, 0, 0, 0])), Ordering::Greater);
        // x1*x2 > x0*x4
        assert_eq!(m(&[1, 0, 0, 0, 1]).cmp_grevlex(m(&[0, 1, 1, 0, 0])), Ordering::Less);
        assert_eq!(
            compare_grevlex(&[1, 0, 0, 0, 1], &[0, 1, 1, 0, 0]).unwrap(),
            Ordering::Less
        );
        assert_eq!(compare_grevlex(&[0, 3, 1], &[0, 3, 1]).unwrap(), Ordering::Equal);
        assert!(compare_grevlex(&[1, 0], &[1, 0, 0]).is_err());
    }

    #[test]
    fn ranks_are_a_bijection() {
        for n in 1..=6 {
            for d in 0..6u32 {
                let mons = monomials_of_degree(n, d);
                assert_eq!(mons.len(), count_monomials(n, d as i64));
                let mut seen = vec![false; mons.len()];
                for mm in mons {
                    let r = monomial_rank(mm, n);
                    assert!(!seen[r]);
                    seen[r] = true;
                }
            }
        }
    }

    fn exps() -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::vec(0u32..6, 5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn grevlex_is_multiplicative(a in exps(), b in exps(), c in exps()) {
            let (a, b, c) = (m(&a), m(&b), m(&c));
            let before = a.cmp_grevlex(b);
            prop_assert_eq!(a.mul(c).cmp_grevlex(b.mul(c)), before);
            prop_assert_eq!(
                compare_grevlex(&a.exponents(5), &b.exponents(5)).unwrap(),
                before
            );
        }

        #[test]
        fn divisibility_matches_exponents(a in exps(), b in exps()) {
            let (ma, mb) = (m(&a), m(&b));
            let expect = a.iter().zip(&b).all(|(x, y)| x <= y);
            prop_assert_eq!(ma.divides(mb), expect);
            prop_assert!(ma.divides(ma.mul(mb)));
            prop_assert_eq!(ma.quotient_of(ma.mul(mb)), mb);
            prop_assert_eq!(ma.lcm(mb).degree(), ma.degree() + mb.degree() - ma.gcd(mb).degree());
        }
    }
}
