//! Hilbert series and polynomials, and the numerical invariants of curves
//! and surfaces in P^4 that can be read off from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::GroebnerBasis;
use crate::monomial::Monomial;

/// Numerator `N(t)` of the Hilbert series `N(t) / (1 - t)^n` of `S / I`
/// for a monomial ideal `I` given by generators.
pub fn monomial_numerator(gens: &[Monomial], nvars: usize) -> Vec<i64> {
    let mut gens = minimalize(gens.to_vec());
    numerator_rec(&mut gens, nvars)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for m in gens {
        if !out.iter().any(|g| g.divides(m)) {
            out.push(m);
        }
    }
    out
}

fn poly_sub_shifted(a: &mut Vec<i64>, b: &[i64], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (i, &c) in b.iter().enumerate() {
        a[i + shift] -= c;
    }
}

fn numerator_rec(gens: &mut Vec<Monomial>, nvars: usize) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    // pairwise coprime generators: a product of (1 - t^deg)
    let coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(*b)));
    if coprime {
        let mut acc = vec![1i64];
        for g in gens.iter() {
            let d = g.degree() as usize;
            let mut next = acc.clone();
            poly_sub_shifted(&mut next, &acc, d);
            acc = next;
        }
        return acc;
    }
    // pivot on a variable that appears in several generators
    let mut best = (0, 0usize);
    for v in 0..nvars {
        let count = gens.iter().filter(|g| g.exponent(v) > 0).count();
        if count > best.1 {
            best = (v, count);
        }
    }
    let v = best.0;
    // the smallest exponent keeps x_v^e outside the ideal, so both branches
    // below are strictly larger ideals
    let e = gens.iter().map(|g| g.exponent(v)).filter(|&e| e > 0).min().unwrap();
    let mut pe = [0u32; crate::monomial::MAX_VARS];
    pe[v] = e;
    let pivot = Monomial::from_exponents(&pe[..nvars]);
    // HS(I) = HS(I + p) + t^deg(p) HS(I : p)
    let mut with_pivot: Vec<Monomial> = gens.clone();
    with_pivot.push(pivot);
    let mut with_pivot = minimalize(with_pivot);
    let mut colon: Vec<Monomial> =
        gens.iter().map(|g| g.gcd(pivot).quotient_of(*g)).collect();
    colon = minimalize(colon);
    let mut a = numerator_rec(&mut with_pivot, nvars);
    let b = numerator_rec(&mut colon, nvars);
    let mut neg = b.clone();
    for c in neg.iter_mut() {
        *c = -*c;
    }
    poly_sub_shifted(&mut a, &neg, e as usize);
    a
}

/// Hilbert series data of a graded module `F / U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub nvars: usize,
    /// Numerator of the series over `(1 - t)^nvars`, starting at `t^lo`.
    pub lo: i32,
    pub numerator: Vec<i64>,
    /// Krull dimension of the module.
    pub krull_dim: usize,
    /// Multiplicity (degree); zero for the zero module.
    pub degree: i64,
}

impl HilbertData {
    pub fn from_numerator(nvars: usize, lo: i32, mut numerator: Vec<i64>) -> HilbertData {
        while numerator.last() == Some(&0) {
            numerator.pop();
        }
        let mut lo = lo;
        while numerator.first() == Some(&0) {
            numerator.remove(0);
            lo += 1;
        }
        // divide by (1 - t) as long as t = 1 is a root
        let mut reduced = numerator.clone();
        let mut order = 0;
        while !reduced.is_empty() && reduced.iter().sum::<i64>() == 0 && order < nvars {
            let mut q = vec![0i64; reduced.len() - 1];
            let mut carry = 0;
            for i in 0..q.len() {
                carry += reduced[i];
                q[i] = carry;
            }
            reduced = q;
            order += 1;
        }
        let degree = reduced.iter().sum::<i64>();
        let krull_dim = if numerator.is_empty() { 0 } else { nvars - order };
        HilbertData { nvars, lo, numerator, krull_dim, degree }
    }

    /// From a Groebner basis, via its leading terms.
    pub fn from_basis(gb: &GroebnerBasis) -> HilbertData {
        let n = gb.ring().nvars;
        let module = gb.module();
        let leads = gb.leading_terms();
        let mut lo = i32::MAX;
        let mut parts = Vec::new();
        for (c, &tw) in module.twists.iter().enumerate() {
            let gens: Vec<Monomial> =
                leads.iter().filter(|l| l.1 as usize == c).map(|l| l.0).collect();
            let num = monomial_numerator(&gens, n);
            lo = lo.min(tw);
            parts.push((tw, num));
        }
        if parts.is_empty() {
            return HilbertData::from_numerator(n, 0, vec![]);
        }
        let hi = parts.iter().map(|(t, v)| t + v.len() as i32).max().unwrap();
        let mut total = vec![0i64; (hi - lo) as usize];
        for (tw, num) in parts {
            for (i, c) in num.iter().enumerate() {
                total[(tw - lo) as usize + i] += c;
            }
        }
        HilbertData::from_numerator(n, lo, total)
    }

    /// Projective dimension of the support (`-1` for finite length).
    pub fn projective_dim(&self) -> i32 {
        self.krull_dim as i32 - 1
    }

    /// Value of the Hilbert function in degree `m`.
    pub fn function(&self, m: i32) -> i64 {
        let n = self.nvars;
        self.numerator
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                c * crate::monomial::count_monomials(n, (m - self.lo - i as i32) as i64) as i64
            })
            .sum()
    }

    /// Value of the Hilbert polynomial at any integer `m`.
    pub fn polynomial(&self, m: i64) -> i64 {
        let k = self.nvars - 1;
        self.numerator
            .iter()
            .enumerate()
            .map(|(i, &c)| c * binom_poly(m - self.lo as i64 - i as i64 + k as i64, k))
            .sum()
    }

    /// Degree from which the Hilbert function agrees with the polynomial.
    pub fn regularity_bound(&self) -> i32 {
        self.lo + self.numerator.len() as i32
    }
}

/// `x (x-1) ... (x-k+1) / k!`, the binomial coefficient as a polynomial in `x`.
pub fn binom_poly(x: i64, k: usize) -> i64 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k as i128 {
        num *= x as i128 - i;
        den *= i + 1;
    }
    (num / den) as i64
}

/// Degree, sectional genus and Euler characteristic of a surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceNumbers {
    pub d: i64,
    pub pi: i64,
    pub chi: i64,
}

/// Reads `(d, pi, chi)` off the Hilbert polynomial of `S / I`, using
/// `chi(O_X(m)) = (d/2) m^2 + (d/2 - pi + 1) m + chi`.
pub fn surface_numbers(h: &HilbertData) -> Result<SurfaceNumbers> {
    if h.projective_dim() != 2 {
        return Err(Error::Dimension(format!(
            "expected a surface, found projective dimension {}",
            h.projective_dim()
        )));
    }
    let (p0, p1, pm1) = (h.polynomial(0), h.polynomial(1), h.polynomial(-1));
    let d = p1 + pm1 - 2 * p0;
    Ok(SurfaceNumbers { d, pi: d + 1 + p0 - p1, chi: p0 })
}

/// `(degree, arithmetic genus)` of a curve from `P(m) = d m + 1 - p_a`.
pub fn curve_numbers(h: &HilbertData) -> Result<(i64, i64)> {
    if h.projective_dim() != 1 {
        return Err(Error::Dimension(format!(
            "expected a curve, found projective dimension {}",
            h.projective_dim()
        )));
    }
    let (p0, p1) = (h.polynomial(0), h.polynomial(1));
    Ok((p1 - p0, 1 - p0))
}

/// Self-intersection of the canonical class of a smooth surface in P^4:
/// `K^2 = (d^2 - 5d - 10 pi + 12 chi + 10) / 2`.
pub fn k2_from_invariants(d: i64, pi: i64, chi: i64) -> Result<i64> {
    let twice = d * d - 5 * d - 10 * pi + 12 * chi + 10;
    if twice % 2 != 0 {
        return Err(Error::Construction(format!(
            "inconsistent invariants (d, pi, chi) = ({d}, {pi}, {chi}): K^2 = {twice}/2"
        )));
    }
    Ok(twice / 2)
}

/// `H.K = 2 pi - 2 - d` by adjunction on a hyperplane section.
pub fn hk(d: i64, pi: i64) -> i64 {
    2 * pi - 2 - d
}

/// Left side of the double point formula `d^2 - 10d - 5HK - 2K^2 + 12 chi`,
/// zero for smooth surfaces in P^4.
pub fn double_point_residual(d: i64, pi: i64, chi: i64, k2: i64) -> i64 {
    d * d - 10 * d - 5 * hk(d, pi) - 2 * k2 + 12 * chi
}

/// Arithmetic genus of a union of curves: `p_a(C) + p_a(D) + C.D - 1`.
pub fn genus_addition(p_c: i64, p_d: i64, c_dot_d: i64) -> i64 {
    p_c + p_d + c_dot_d - 1
}

/// `chi(I_X(m))` by Riemann-Roch for a surface with the given invariants.
pub fn rr_chi_ideal(m: i64, d: i64, pi: i64, q: i64, pg: i64) -> i64 {
    binom_poly(m + 4, 4) - binom_poly(m + 1, 2) * d + m * (pi - 1) - 1 + q - pg
}

/// The full set of surface invariants reported by the pipelines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub d: i64,
    pub pi: i64,
    pub chi: i64,
    pub pg: i64,
    pub q: i64,
    #[serde(rename = "K2")]
    pub k2: i64,
    pub s: i64,
}

impl SurfaceInvariants {
    /// Checks `chi = p_g - q + 1` and the double point formula.
    pub fn is_consistent(&self) -> bool {
        self.chi == self.pg - self.q + 1
            && double_point_residual(self.d, self.pi, self.chi, self.k2) == 0
    }

    /// Speciality predicted from the other invariants: `pi - d + 3 + q - p_g`.
    pub fn speciality_formula(&self) -> i64 {
        self.pi - self.d + 3 + self.q - self.pg
    }
}
