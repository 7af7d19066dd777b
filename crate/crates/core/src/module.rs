//! Graded free modules, their elements, and graded matrices between them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Coef;
use crate::monomial::{count_monomials, Monomial};
use crate::poly::{Polynomial, Ring};

/// `S(-t_1) + ... + S(-t_r)`, recorded by the twists `t_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeModule {
    pub twists: Vec<i32>,
}

impl FreeModule {
    pub fn new(twists: Vec<i32>) -> FreeModule {
        FreeModule { twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    /// Dimension of the degree-`m` piece over the field.
    pub fn dim(&self, nvars: usize, m: i32) -> usize {
        self.twists.iter().map(|&t| count_monomials(nvars, (m - t) as i64)).sum()
    }

    pub fn dual(&self) -> FreeModule {
        FreeModule { twists: self.twists.iter().map(|t| -t).collect() }
    }

    pub fn shift(&self, s: i32) -> FreeModule {
        FreeModule { twists: self.twists.iter().map(|t| t + s).collect() }
    }

    pub fn direct_sum(&self, other: &FreeModule) -> FreeModule {
        let mut twists = self.twists.clone();
        twists.extend_from_slice(&other.twists);
        FreeModule { twists }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub mono: Monomial,
    pub comp: u32,
    pub coef: Coef,
}

/// An element of a free module, stored sparsely. Terms are sorted by
/// component and then by decreasing grevlex; coefficients are nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vector {
    terms: Vec<Term>,
}

#[inline]
fn storage_cmp(a: &Term, b: &Term) -> std::cmp::Ordering {
    a.comp.cmp(&b.comp).then_with(|| b.mono.cmp_grevlex(a.mono))
}

impl Vector {
    pub fn zero() -> Vector {
        Vector { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Collects terms in any order, combining repeats.
    pub fn from_terms(ring: &Ring, mut terms: Vec<Term>) -> Vector {
        terms.sort_by(storage_cmp);
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.comp == t.comp && last.mono == t.mono => {
                    last.coef = ring.field.add(last.coef, t.coef)
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coef != 0);
        Vector { terms: out }
    }

    pub(crate) fn from_sorted_unchecked(terms: Vec<Term>) -> Vector {
        debug_assert!(terms.windows(2).all(|w| storage_cmp(&w[0], &w[1]).is_lt()));
        debug_assert!(terms.iter().all(|t| t.coef != 0));
        Vector { terms }
    }

    pub fn unit(comp: usize) -> Vector {
        Vector { terms: vec![Term { mono: Monomial::ONE, comp: comp as u32, coef: 1 }] }
    }

    pub fn from_polys(polys: &[Polynomial]) -> Vector {
        let mut terms = Vec::new();
        for (c, f) in polys.iter().enumerate() {
            for &(mono, coef) in f.terms() {
                terms.push(Term { mono, comp: c as u32, coef });
            }
        }
        Vector { terms }
    }

    pub fn from_poly(f: &Polynomial, comp: usize) -> Vector {
        Vector {
            terms: f
                .terms()
                .iter()
                .map(|&(mono, coef)| Term { mono, comp: comp as u32, coef })
                .collect(),
        }
    }

    pub fn component(&self, c: usize) -> Polynomial {
        let start = self.terms.partition_point(|t| (t.comp as usize) < c);
        let end = self.terms.partition_point(|t| (t.comp as usize) <= c);
        Polynomial::from_sorted_unchecked(
            self.terms[start..end].iter().map(|t| (t.mono, t.coef)).collect(),
        )
    }

    pub fn to_polys(&self, rank: usize) -> Vec<Polynomial> {
        (0..rank).map(|c| self.component(c)).collect()
    }

    /// Degree of the element in `module`, if nonzero.
    pub fn degree_in(&self, module: &FreeModule) -> Option<i32> {
        self.terms.first().map(|t| t.mono.degree() as i32 + module.twists[t.comp as usize])
    }

    pub fn is_homogeneous_in(&self, module: &FreeModule) -> bool {
        match self.degree_in(module) {
            None => true,
            Some(d) => self.terms.iter().all(|t| {
                (t.comp as usize) < module.rank()
                    && t.mono.degree() as i32 + module.twists[t.comp as usize] == d
            }),
        }
    }

    pub fn max_comp(&self) -> Option<u32> {
        self.terms.last().map(|t| t.comp)
    }

    pub fn add(&self, ring: &Ring, other: &Vector) -> Vector {
        self.add_scaled(ring, other, 1)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, ring: &Ring, other: &Vector, c: Coef) -> Vector {
        let k = &ring.field;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match storage_cmp(&a[i], &b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let v = k.mul(c, b[j].coef);
                    if v != 0 {
                        out.push(Term { coef: v, ..b[j] });
                    }
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let v = k.add(a[i].coef, k.mul(c, b[j].coef));
                    if v != 0 {
                        out.push(Term { coef: v, ..a[i] });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let v = k.mul(c, t.coef);
            if v != 0 {
                out.push(Term { coef: v, ..*t });
            }
        }
        Vector { terms: out }
    }

    pub fn scale(&self, ring: &Ring, c: Coef) -> Vector {
        if c % ring.characteristic() == 0 {
            return Vector::zero();
        }
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| Term { coef: ring.field.mul(t.coef, c), ..*t })
                .collect(),
        }
    }

    pub fn mul_monomial(&self, ring: &Ring, m: Monomial, c: Coef) -> Vector {
        if c == 0 {
            return Vector::zero();
        }
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| Term { mono: t.mono.mul(m), comp: t.comp, coef: ring.field.mul(t.coef, c) })
                .collect(),
        }
    }

    pub fn mul_poly(&self, ring: &Ring, f: &Polynomial) -> Vector {
        let mut acc = Vector::zero();
        for &(m, c) in f.terms() {
            acc = acc.add(ring, &self.mul_monomial(ring, m, c));
        }
        acc
    }

    /// Renumbers components through `map`; entries mapped to `None` are dropped.
    pub fn remap(&self, ring: &Ring, map: impl Fn(u32) -> Option<u32>) -> Vector {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| map(t.comp).map(|c| Term { comp: c, ..*t }))
            .collect();
        Vector::from_terms(ring, terms)
    }

    pub fn shift_comps(&self, offset: u32) -> Vector {
        Vector {
            terms: self.terms.iter().map(|t| Term { comp: t.comp + offset, ..*t }).collect(),
        }
    }

    /// Keeps the components in `lo..hi`, renumbered from zero.
    pub fn slice_comps(&self, lo: u32, hi: u32) -> Vector {
        Vector {
            terms: self
                .terms
                .iter()
                .filter(|t| t.comp >= lo && t.comp < hi)
                .map(|t| Term { comp: t.comp - lo, ..*t })
                .collect(),
        }
    }

    /// Rescales so that the first stored term has coefficient one.
    pub fn normalized(&self, ring: &Ring) -> Vector {
        match self.terms.first() {
            None => Vector::zero(),
            Some(t) => self.scale(ring, ring.field.inv(t.coef)),
        }
    }
}

/// A degree-preserving map `source -> target` between graded free modules,
/// stored by columns: column `j` is the image of the `j`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedMatrix {
    pub target: FreeModule,
    pub source: FreeModule,
    cols: Vec<Vector>,
}

impl GradedMatrix {
    pub fn new(target: FreeModule, source: FreeModule, cols: Vec<Vector>) -> Result<GradedMatrix> {
        if cols.len() != source.rank() {
            return Err(Error::Shape(format!(
                "{} columns given for a source of rank {}",
                cols.len(),
                source.rank()
            )));
        }
        for (j, col) in cols.iter().enumerate() {
            if let Some(c) = col.max_comp() {
                if c as usize >= target.rank() {
                    return Err(Error::Shape(format!("column {j} exceeds target rank")));
                }
            }
            if !col.is_homogeneous_in(&target) {
                return Err(Error::Degree(format!("column {j} is not homogeneous")));
            }
            if let Some(d) = col.degree_in(&target) {
                if d != source.twists[j] {
                    return Err(Error::Degree(format!(
                        "column {j} has degree {d} but source twist {}",
                        source.twists[j]
                    )));
                }
            }
        }
        Ok(GradedMatrix { target, source, cols })
    }

    /// Builds a matrix from rows of entries, taking column twists from the
    /// entries and the given row twists.
    pub fn from_rows(target: FreeModule, rows: &[Vec<Polynomial>]) -> Result<GradedMatrix> {
        if rows.len() != target.rank() {
            return Err(Error::Shape("row count differs from target rank".into()));
        }
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let mut twists = Vec::with_capacity(ncols);
        for j in 0..ncols {
            let mut d = None;
            for (i, row) in rows.iter().enumerate() {
                if let Some(e) = row[j].degree() {
                    let t = e as i32 + target.twists[i];
                    if d.is_some_and(|d| d != t) {
                        return Err(Error::Degree(format!("column {j} is not homogeneous")));
                    }
                    d = Some(t);
                }
            }
            twists.push(d.ok_or_else(|| {
                Error::Degree(format!("column {j} is zero; give source twists explicitly"))
            })?);
        }
        GradedMatrix::from_rows_with_source(target, FreeModule::new(twists), rows)
    }

    pub fn from_rows_with_source(
        target: FreeModule,
        source: FreeModule,
        rows: &[Vec<Polynomial>],
    ) -> Result<GradedMatrix> {
        if rows.len() != target.rank() || rows.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::Shape("entry array does not match module ranks".into()));
        }
        let cols = (0..source.rank())
            .map(|j| {
                let entries: Vec<Polynomial> = rows.iter().map(|r| r[j].clone()).collect();
                Vector::from_polys(&entries)
            })
            .collect();
        GradedMatrix::new(target, source, cols)
    }

    pub fn identity(module: &FreeModule) -> GradedMatrix {
        let cols = (0..module.rank()).map(Vector::unit).collect();
        GradedMatrix { target: module.clone(), source: module.clone(), cols }
    }

    pub fn zero(target: FreeModule, source: FreeModule) -> GradedMatrix {
        let cols = vec![Vector::zero(); source.rank()];
        GradedMatrix { target, source, cols }
    }

    pub fn nrows(&self) -> usize {
        self.target.rank()
    }

    pub fn ncols(&self) -> usize {
        self.source.rank()
    }

    pub fn cols(&self) -> &[Vector] {
        &self.cols
    }

    pub fn col(&self, j: usize) -> &Vector {
        &self.cols[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        self.cols[j].component(i)
    }

    pub fn rows(&self) -> Vec<Vec<Polynomial>> {
        let per_col: Vec<Vec<Polynomial>> =
            self.cols.iter().map(|c| c.to_polys(self.nrows())).collect();
        (0..self.nrows()).map(|i| per_col.iter().map(|c| c[i].clone()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    /// Image of a source element.
    pub fn apply(&self, ring: &Ring, v: &Vector) -> Vector {
        let mut acc = Vector::zero();
        let mut j = 0;
        let terms = v.terms();
        while j < terms.len() {
            let c = terms[j].comp;
            let mut k = j;
            while k < terms.len() && terms[k].comp == c {
                k += 1;
            }
            let f = Polynomial::from_sorted_unchecked(
                terms[j..k].iter().map(|t| (t.mono, t.coef)).collect(),
            );
            acc = acc.add(ring, &self.cols[c as usize].mul_poly(ring, &f));
            j = k;
        }
        acc
    }

    /// `self ∘ other`.
    pub fn compose(&self, ring: &Ring, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.source != other.target {
            return Err(Error::Shape(format!(
                "cannot compose: source twists {:?} differ from target twists {:?}",
                self.source.twists, other.target.twists
            )));
        }
        let cols = other.cols.iter().map(|c| self.apply(ring, c)).collect();
        Ok(GradedMatrix { target: self.target.clone(), source: other.source.clone(), cols })
    }

    /// The dual map `Hom(target, S) -> Hom(source, S)`.
    pub fn transpose(&self) -> GradedMatrix {
        let mut cols: Vec<Vec<crate::module::Term>> = vec![Vec::new(); self.nrows()];
        for (j, col) in self.cols.iter().enumerate() {
            for t in col.terms() {
                cols[t.comp as usize].push(Term { mono: t.mono, comp: j as u32, coef: t.coef });
            }
        }
        let cols = cols
            .into_iter()
            .map(|mut ts| {
                ts.sort_by(storage_cmp);
                Vector::from_sorted_unchecked(ts)
            })
            .collect();
        GradedMatrix { target: self.source.dual(), source: self.target.dual(), cols }
    }

    /// Twists both modules by `s`: a map `F -> G` becomes `F(-s) -> G(-s)`.
    pub fn shift(&self, s: i32) -> GradedMatrix {
        GradedMatrix {
            target: self.target.shift(s),
            source: self.source.shift(s),
            cols: self.cols.clone(),
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> GradedMatrix {
        GradedMatrix {
            target: self.target.clone(),
            source: FreeModule::new(idx.iter().map(|&j| self.source.twists[j]).collect()),
            cols: idx.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    pub fn select_rows(&self, ring: &Ring, idx: &[usize]) -> GradedMatrix {
        let mut map = vec![None; self.nrows()];
        for (new, &old) in idx.iter().enumerate() {
            map[old] = Some(new as u32);
        }
        GradedMatrix {
            target: FreeModule::new(idx.iter().map(|&i| self.target.twists[i]).collect()),
            source: self.source.clone(),
            cols: self.cols.iter().map(|c| c.remap(ring, |k| map[k as usize])).collect(),
        }
    }

    /// `[self | other]` with a shared target.
    pub fn concat_cols(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.target != other.target {
            return Err(Error::Shape("concatenated matrices need equal targets".into()));
        }
        let mut cols = self.cols.clone();
        cols.extend_from_slice(&other.cols);
        Ok(GradedMatrix {
            target: self.target.clone(),
            source: self.source.direct_sum(&other.source),
            cols,
        })
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &GradedMatrix) -> GradedMatrix {
        let offset = self.nrows() as u32;
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().map(|c| c.shift_comps(offset)));
        GradedMatrix {
            target: self.target.direct_sum(&other.target),
            source: self.source.direct_sum(&other.source),
            cols,
        }
    }

    /// Drops zero columns.
    pub fn compress(&self) -> GradedMatrix {
        let idx: Vec<usize> = (0..self.ncols()).filter(|&j| !self.cols[j].is_zero()).collect();
        self.select_cols(&idx)
    }

    /// Indices `(i, j)` of nonzero constant entries.
    pub fn unit_entries(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            for t in col.terms() {
                if t.mono == Monomial::ONE {
                    out.push((t.comp as usize, j));
                }
            }
        }
        out
    }
}

/// A finitely presented graded module, the cokernel of its presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    pub presentation: GradedMatrix,
}

impl GradedModule {
    pub fn coker(presentation: GradedMatrix) -> GradedModule {
        GradedModule { presentation }
    }

    pub fn free(module: FreeModule) -> GradedModule {
        let pres = GradedMatrix::zero(module, FreeModule::default());
        GradedModule { presentation: pres }
    }

    /// `S / I` for an ideal with the given generators.
    pub fn quotient_ring(gens: &[Polynomial]) -> Result<GradedModule> {
        let pres = GradedMatrix::from_rows(FreeModule::new(vec![0]), &[gens.to_vec()])?;
        Ok(GradedModule { presentation: pres })
    }

    pub fn generators(&self) -> &FreeModule {
        &self.presentation.target
    }

    pub fn shift(&self, s: i32) -> GradedModule {
        GradedModule { presentation: self.presentation.shift(s) }
    }
}
