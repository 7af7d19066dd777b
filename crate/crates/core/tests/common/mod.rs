//! Brute-force graded linear algebra over F_p, used as an oracle for the
//! Groebner-based ideal operations. Everything here works on dense vectors
//! indexed by the monomials of one degree and never calls into the crate's
//! Groebner engine.

#![allow(dead_code)]

use std::collections::HashMap;

use p4surf::ideal::Ideal;
use p4surf::{Monomial, Polynomial, Ring};

pub type Exps = Vec<u32>;

/// Exponent vectors of degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Exps> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

/// A polynomial as a sparse map, with exponents read off the crate's type.
pub fn sparse(ring: &Ring, f: &Polynomial) -> HashMap<Exps, u64> {
    f.terms().iter().map(|(m, c)| (m.exponents(ring.nvars), *c as u64)).collect()
}

pub fn degree(ring: &Ring, f: &Polynomial) -> Option<u32> {
    sparse(ring, f).keys().map(|e| e.iter().sum()).max()
}

/// The linear span of a family of vectors, kept in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Span {
    pub p: u64,
    pub len: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

fn inv(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl Span {
    pub fn new(p: u64, len: usize) -> Span {
        Span { p, len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + p - c * r % p) % p;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut v = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv(v[piv], p);
        for x in v.iter_mut() {
            *x = *x * s % p;
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = (*x + p - c * r % p) % p;
                }
            }
        }
        self.rows.push((piv, v));
        true
    }

    pub fn intersection_dim(&self, other: &Span) -> usize {
        let mut sum = self.clone();
        for (_, r) in &other.rows {
            sum.insert(r);
        }
        self.dim() + other.dim() - sum.dim()
    }
}

/// The degree-`d` component of `S`, with its monomial index.
pub struct Graded {
    pub n: usize,
    pub p: u64,
}

impl Graded {
    pub fn new(ring: &Ring) -> Graded {
        Graded { n: ring.nvars, p: ring.characteristic() as u64 }
    }

    pub fn index(&self, d: u32) -> HashMap<Exps, usize> {
        monomials(self.n, d).into_iter().enumerate().map(|(i, e)| (e, i)).collect()
    }

    /// Dense coordinates of `m * f` where `m` has exponents `shift`.
    pub fn vector(&self, f: &HashMap<Exps, u64>, shift: &[u32], index: &HashMap<Exps, usize>) -> Vec<u64> {
        let mut v = vec![0; index.len()];
        for (e, c) in f {
            let prod: Exps = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            v[index[&prod]] = (v[index[&prod]] + c) % self.p;
        }
        v
    }

    /// `I_d` for `I` generated by `gens`.
    pub fn piece(&self, ring: &Ring, gens: &[Polynomial], d: u32) -> Span {
        let index = self.index(d);
        let mut span = Span::new(self.p, index.len());
        for g in gens {
            let Some(e) = degree(ring, g) else { continue };
            if e > d {
                continue;
            }
            let f = sparse(ring, g);
            for m in monomials(self.n, d - e) {
                span.insert(&self.vector(&f, &m, &index));
            }
        }
        span
    }

    /// Span of explicit degree-`d` polynomials.
    pub fn span_of(&self, ring: &Ring, fs: &[Polynomial], d: u32) -> Span {
        let index = self.index(d);
        let mut span = Span::new(self.p, index.len());
        let zero = vec![0; self.n];
        for f in fs {
            if degree(ring, f) == Some(d) {
                span.insert(&self.vector(&sparse(ring, f), &zero, &index));
            }
        }
        span
    }

    /// `(I : (h_1, ..., h_r))_d` as a span.
    pub fn quotient_piece(&self, ring: &Ring, i: &[Polynomial], j: &[Polynomial], d: u32) -> Span {
        let basis = monomials(self.n, d);
        let targets: Vec<(HashMap<Exps, u64>, u32, Span, HashMap<Exps, usize>)> = j
            .iter()
            .filter_map(|h| {
                let e = degree(ring, h)?;
                Some((sparse(ring, h), e, self.piece(ring, i, d + e), self.index(d + e)))
            })
            .collect();
        // Kernel of S_d -> (+) S_{d+e}/I_{d+e}, by elimination on the
        // augmented rows [image | identity].
        let width: usize = targets.iter().map(|t| t.3.len()).sum();
        let mut rows = Vec::new();
        for (k, m) in basis.iter().enumerate() {
            let mut row = Vec::with_capacity(width + basis.len());
            for (h, _, span, index) in &targets {
                row.extend(span.reduce(&self.vector(h, m, index)));
            }
            let mut unit = vec![0; basis.len()];
            unit[k] = 1;
            row.extend(unit);
            rows.push(row);
        }
        let mut ech = Span::new(self.p, width + basis.len());
        for r in &rows {
            ech.insert(r);
        }
        let mut out = Span::new(self.p, basis.len());
        for (piv, r) in &ech.rows {
            if *piv >= width {
                out.insert(&r[width..]);
            }
        }
        out
    }

    /// `(I : m^k)_d`.
    pub fn saturation_piece(&self, ring: &Ring, i: &[Polynomial], k: u32, d: u32) -> Span {
        let powers: Vec<Polynomial> = monomials(self.n, k)
            .into_iter()
            .map(|e| ring.monomial(Monomial::from_exponents(&e), 1))
            .collect();
        self.quotient_piece(ring, i, &powers, d)
    }
}

/// Largest degree in which the oracle compares graded pieces.
pub const CHECK_UP_TO: u32 = 7;

/// Membership of `f` and `dim I_d` for `d <= CHECK_UP_TO`.
pub fn agree_membership(ring: &Ring, i: &[Polynomial], f: &Polynomial) -> bool {
    let g = Graded::new(ring);
    let ideal = Ideal::new(ring, i.to_vec()).unwrap();
    if let Some(d) = degree(ring, f) {
        let v = g.vector(&sparse(ring, f), &vec![0; ring.nvars], &g.index(d));
        if ideal.contains(f) != g.piece(ring, i, d).contains(&v) {
            return false;
        }
    }
    (0..=CHECK_UP_TO).all(|e| ideal.dim_in_degree(e as i32) == g.piece(ring, i, e).dim())
}

/// `(I ∩ J)_d = I_d ∩ J_d`, and the computed generators lie in both.
pub fn agree_intersection(ring: &Ring, i: &[Polynomial], j: &[Polynomial]) -> bool {
    let g = Graded::new(ring);
    let meet = Ideal::new(ring, i.to_vec()).unwrap().intersect(&Ideal::new(ring, j.to_vec()).unwrap());
    let dims = (0..=CHECK_UP_TO)
        .all(|d| meet.dim_in_degree(d as i32) == g.piece(ring, i, d).intersection_dim(&g.piece(ring, j, d)));
    dims && meet.gens().iter().all(|h| {
        let d = degree(ring, h).unwrap();
        let v = g.span_of(ring, std::slice::from_ref(h), d);
        v.intersection_dim(&g.piece(ring, i, d)) == 1 && v.intersection_dim(&g.piece(ring, j, d)) == 1
    })
}

/// `(I : J)_d` equals the kernel computed by linear algebra.
pub fn agree_quotient(ring: &Ring, i: &[Polynomial], j: &[Polynomial]) -> bool {
    let g = Graded::new(ring);
    let q = Ideal::new(ring, i.to_vec()).unwrap().quotient(&Ideal::new(ring, j.to_vec()).unwrap());
    (0..=CHECK_UP_TO - 2).all(|d| {
        let oracle = g.quotient_piece(ring, i, j, d);
        let ours = g.span_of(ring, &q.basis_in_degree(d as i32), d);
        ours.dim() == oracle.dim() && ours.intersection_dim(&oracle) == oracle.dim()
    })
}

/// `I^sat_d = (I : m^k)_d` for `d <= 4`. With generators of degree at most
/// 3 in at most 3 variables the colon is stable by `k = 7`, which is
/// asserted as well.
pub fn agree_saturation(ring: &Ring, i: &[Polynomial]) -> bool {
    let g = Graded::new(ring);
    let sat = Ideal::new(ring, i.to_vec()).unwrap().saturate();
    (0..=4).all(|d| {
        let oracle = g.saturation_piece(ring, i, 7, d);
        oracle.dim() == g.saturation_piece(ring, i, 8, d).dim() && sat.dim_in_degree(d as i32) == oracle.dim()
    })
}

/// A random homogeneous polynomial of degree `d` with at most `terms` terms.
pub fn random_poly<R: rand::Rng>(ring: &Ring, d: u32, terms: usize, rng: &mut R) -> Polynomial {
    let mons = monomials(ring.nvars, d);
    let p = ring.characteristic();
    let t = (0..rng.gen_range(1..=terms))
        .map(|_| (Monomial::from_exponents(&mons[rng.gen_range(0..mons.len())]), rng.gen_range(1..p)))
        .collect();
    ring.from_terms(t).unwrap()
}

/// `count` nonzero random forms of degree `1..=3`.
pub fn random_forms<R: rand::Rng>(ring: &Ring, count: usize, terms: usize, rng: &mut R) -> Vec<Polynomial> {
    let mut out = Vec::new();
    while out.len() < count {
        let d = rng.gen_range(1..=3);
        let f = random_poly(ring, d, terms, rng);
        if !f.is_zero() {
            out.push(f);
        }
    }
    out
}
