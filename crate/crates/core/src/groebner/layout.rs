//! Dense per-degree coordinates for the terms of a graded free module.
//!
//! In a fixed total degree the module has finitely many terms `(mono, comp)`.
//! A [`Layout`] lists them in decreasing term order, so column `0` is the
//! largest term and the leading term of a row is its smallest column.

use std::sync::OnceLock;

use crate::field::Coef;
use crate::module::{FreeModule, Term};
use crate::monomial::{monomial_rank, monomials_of_degree, Monomial};

/// Term order on a free module: grevlex on monomials with the lower
/// component index winning ties. With `split = Some(s)` every term in a
/// component `< s` beats every term in a component `>= s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct TermOrder {
    pub split: Option<u32>,
}

impl TermOrder {
    pub fn plain() -> TermOrder {
        TermOrder { split: None }
    }

    pub fn split_at(s: u32) -> TermOrder {
        TermOrder { split: Some(s) }
    }

    #[inline]
    pub fn key(&self, mono: Monomial, comp: u32) -> u128 {
        let block = match self.split {
            Some(s) if comp < s => 1u128,
            _ => 0,
        };
        (block << 100) | ((mono.grevlex_key() as u128) << 32) | (u32::MAX - comp) as u128
    }

    #[inline]
    pub fn is_lower(&self, comp: u32) -> bool {
        self.split.is_some_and(|s| comp >= s)
    }
}

pub(crate) struct Layout {
    pub cols: Vec<(Monomial, u32)>,
    offsets: Vec<usize>,
    pos: Vec<u32>,
    nvars: usize,
}

impl Layout {
    pub fn new(module: &FreeModule, order: &TermOrder, nvars: usize, degree: i32) -> Layout {
        let mut offsets = Vec::with_capacity(module.rank());
        let mut entries: Vec<(u128, Monomial, u32)> = Vec::new();
        let mut total = 0usize;
        for (c, &tw) in module.twists.iter().enumerate() {
            offsets.push(total);
            let d = degree - tw;
            if d < 0 {
                continue;
            }
            let monos = monomials_of_degree(nvars, d as u32);
            total += monos.len();
            for m in monos {
                entries.push((order.key(m, c as u32), m, c as u32));
            }
        }
        entries.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut pos = vec![0u32; total];
        let cols: Vec<(Monomial, u32)> = entries.iter().map(|e| (e.1, e.2)).collect();
        for (i, &(m, c)) in cols.iter().enumerate() {
            pos[offsets[c as usize] + monomial_rank(m, nvars)] = i as u32;
        }
        Layout { cols, offsets, pos, nvars }
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    #[inline]
    pub fn col(&self, mono: Monomial, comp: u32) -> usize {
        self.pos[self.offsets[comp as usize] + monomial_rank(mono, self.nvars)] as usize
    }
}

/// A sparse row in layout coordinates, columns increasing.
#[derive(Clone, Debug, Default)]
pub(crate) struct Row {
    pub cols: Vec<u32>,
    pub coefs: Vec<Coef>,
}

impl Row {
    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn lead(&self) -> Option<usize> {
        self.cols.first().map(|&c| c as usize)
    }

    pub fn to_terms(&self, layout: &Layout) -> Vec<Term> {
        self.cols
            .iter()
            .zip(&self.coefs)
            .map(|(&c, &coef)| {
                let (mono, comp) = layout.cols[c as usize];
                Term { mono, comp, coef }
            })
            .collect()
    }
}

/// A basis element seen by the reducer: monic, terms in decreasing order.
#[derive(Clone, Debug)]
pub(crate) struct Elem {
    pub terms: Vec<Term>,
    pub deg: i32,
}

impl Elem {
    pub fn lead(&self) -> (Monomial, u32) {
        (self.terms[0].mono, self.terms[0].comp)
    }
}

/// Lazily built reducer rows for one layout: column `i` gets `t * g` for the
/// shortest basis element `g` whose leading term divides the term at `i`.
pub(crate) struct Reducers<'a> {
    layout: &'a Layout,
    elems: &'a [Elem],
    by_comp: Vec<Vec<(Monomial, usize)>>,
    cache: Vec<OnceLock<Option<Row>>>,
}

impl<'a> Reducers<'a> {
    /// Uses only the elements whose index is in `active`.
    pub fn new(
        layout: &'a Layout,
        elems: &'a [Elem],
        active: impl Iterator<Item = usize>,
        rank: usize,
    ) -> Reducers<'a> {
        let mut by_comp = vec![Vec::new(); rank];
        for i in active {
            let (m, c) = elems[i].lead();
            by_comp[c as usize].push((m, i));
        }
        let cache = (0..layout.len()).map(|_| OnceLock::new()).collect();
        Reducers { layout, elems, by_comp, cache }
    }

    #[inline]
    pub fn get(&self, col: usize) -> Option<&Row> {
        self.cache[col].get_or_init(|| self.build(col)).as_ref()
    }

    /// True if some active leading term divides the term at `col`.
    pub fn reducible(&self, col: usize) -> bool {
        let (mono, comp) = self.layout.cols[col];
        self.by_comp[comp as usize].iter().any(|&(m, _)| m.divides(mono))
    }

    fn build(&self, col: usize) -> Option<Row> {
        let (mono, comp) = self.layout.cols[col];
        let mut best: Option<usize> = None;
        for &(m, i) in &self.by_comp[comp as usize] {
            if m.divides(mono)
                && best.is_none_or(|b| self.elems[i].terms.len() < self.elems[b].terms.len())
            {
                best = Some(i);
            }
        }
        let g = &self.elems[best?];
        let q = g.terms[0].mono.quotient_of(mono);
        let mut pairs: Vec<(u32, Coef)> = g
            .terms
            .iter()
            .map(|t| (self.layout.col(t.mono.mul(q), t.comp) as u32, t.coef))
            .collect();
        pairs.sort_unstable_by_key(|p| p.0);
        debug_assert_eq!(pairs[0].0 as usize, col);
        Some(Row { cols: pairs.iter().map(|p| p.0).collect(), coefs: pairs.iter().map(|p| p.1).collect() })
    }
}

/// Dense accumulator for row reduction modulo `p`.
pub(crate) struct Accumulator {
    vals: Vec<u64>,
    p: u64,
    lo: usize,
    hi: usize,
}

const LAZY_LIMIT: u64 = 1 << 63;

impl Accumulator {
    pub fn new(len: usize, p: u32) -> Accumulator {
        Accumulator { vals: vec![0; len], p: p as u64, lo: usize::MAX, hi: 0 }
    }

    #[inline]
    pub fn add(&mut self, col: usize, c: Coef) {
        let a = &mut self.vals[col];
        *a += c as u64;
        if *a >= LAZY_LIMIT {
            *a %= self.p;
        }
        self.lo = self.lo.min(col);
        self.hi = self.hi.max(col);
    }

    /// Adds `f * row`, skipping the entries before position `from`.
    #[inline]
    pub fn add_row(&mut self, row: &Row, f: u64, from: usize) {
        for k in from..row.cols.len() {
            let a = &mut self.vals[row.cols[k] as usize];
            *a += f * row.coefs[k] as u64;
            if *a >= LAZY_LIMIT {
                *a %= self.p;
            }
        }
        if from < row.cols.len() {
            self.lo = self.lo.min(row.cols[from] as usize);
            self.hi = self.hi.max(*row.cols.last().unwrap() as usize);
        }
    }

    pub fn load_terms(&mut self, layout: &Layout, terms: &[Term], f: Coef, p: u32) {
        for t in terms {
            let c = (t.coef as u64 * f as u64 % p as u64) as Coef;
            self.add(layout.col(t.mono, t.comp), c);
        }
    }

    pub fn load_row(&mut self, row: &Row) {
        self.add_row(row, 1, 0);
    }

    /// Fully reduces the accumulated row and clears the accumulator.
    /// `pivot` returns a monic row whose first column is the given column.
    pub fn reduce<'r>(&mut self, pivot: impl Fn(usize) -> Option<&'r Row>) -> Row {
        let mut out = Row::default();
        if self.lo == usize::MAX {
            return out;
        }
        let p = self.p;
        let mut i = self.lo;
        while i <= self.hi {
            let raw = self.vals[i];
            if raw != 0 {
                self.vals[i] = 0;
                let v = raw % p;
                if v != 0 {
                    match pivot(i) {
                        Some(r) => {
                            self.add_row(r, p - v, 1);
                        }
                        None => {
                            out.cols.push(i as u32);
                            out.coefs.push(v as Coef);
                        }
                    }
                }
            }
            i += 1;
        }
        self.lo = usize::MAX;
        self.hi = 0;
        out
    }
}

/// Makes `row` monic with respect to its first entry.
pub(crate) fn make_monic(row: &mut Row, field: &crate::field::PrimeField) {
    if let Some(&c) = row.coefs.first() {
        if c != 1 {
            let inv = field.inv(c);
            for a in row.coefs.iter_mut() {
                *a = field.mul(*a, inv);
            }
        }
    }
}
