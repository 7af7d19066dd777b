//! Syzygies, minimal presentations and minimal graded free resolutions.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{self, GroebnerBasis};
use crate::module::{FreeModule, GradedMatrix, GradedModule, Vector};
use crate::monomial::Monomial;
use crate::poly::{Polynomial, Ring};

/// Upper bound on resolution length in the default five variables, plus one.
pub const DEFAULT_MAX_STEPS: usize = 6;

/// Minimal generators of the kernel of `a`, as the columns of a map into
/// `a.source`.
pub fn kernel(ring: &Ring, a: &GradedMatrix) -> Result<GradedMatrix> {
    let r = a.nrows() as u32;
    let ambient = a.target.direct_sum(&a.source);
    let gens: Vec<Vector> = (0..a.ncols())
        .map(|j| a.col(j).add(ring, &Vector::unit(r as usize + j)))
        .collect();
    let run = groebner::lower_block(ring, &ambient, r, &gens)?;
    columns_to_matrix(ring, &a.source, run.lower)
}

/// Minimal generators of the submodule of `target` spanned by `vecs`.
pub fn columns_to_matrix(ring: &Ring, target: &FreeModule, vecs: Vec<Vector>) -> Result<GradedMatrix> {
    let vecs: Vec<Vector> = vecs.into_iter().filter(|v| !v.is_zero()).collect();
    let min = groebner::minimal_generators(ring, target, &vecs)?;
    let twists = min.iter().map(|v| v.degree_in(target).unwrap()).collect();
    GradedMatrix::new(target.clone(), FreeModule::new(twists), min)
}

/// Generators of the syzygy module of a Groebner basis: the kernel of the
/// map sending the `i`-th basis vector to the `i`-th element of `gb`.
pub fn syzygies(gb: &GroebnerBasis) -> Result<GradedMatrix> {
    let elems = gb.elements();
    let twists = elems.iter().map(|v| v.degree_in(gb.module()).unwrap()).collect();
    let map = GradedMatrix::new(gb.module().clone(), FreeModule::new(twists), elems)?;
    kernel(gb.ring(), &map)
}

/// Minimal generators of the image of `a` (a subset of its columns).
pub fn image_mingens(ring: &Ring, a: &GradedMatrix) -> Result<GradedMatrix> {
    let idx = groebner::minimal_generator_indices(ring, &a.target, a.cols())?;
    Ok(a.select_cols(&idx))
}

/// Removes generator/relation pairs joined by a unit entry until none is
/// left. The cokernel is unchanged up to isomorphism.
pub fn prune_units(ring: &Ring, p: &GradedMatrix) -> GradedMatrix {
    let mut cur = p.compress();
    loop {
        let units = cur.unit_entries();
        let Some(&(i, j)) = units.first() else { return cur };
        let pivot = cur.col(j).clone();
        let c = pivot.component(i).leading_term().unwrap().1;
        let cinv = ring.field.inv(c);
        let mut cols: Vec<Vector> = Vec::with_capacity(cur.ncols() - 1);
        let mut twists = Vec::new();
        for l in 0..cur.ncols() {
            if l == j {
                continue;
            }
            let col = cur.col(l);
            let f = col.component(i);
            let col = if f.is_zero() {
                col.clone()
            } else {
                let scaled = ring.scale(ring.field.neg(cinv), &f);
                col.add(ring, &pivot.mul_poly(ring, &scaled))
            };
            cols.push(col.remap(ring, |k| match (k as usize).cmp(&i) {
                std::cmp::Ordering::Less => Some(k),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(k - 1),
            }));
            twists.push(cur.source.twists[l]);
        }
        let mut target = cur.target.twists.clone();
        target.remove(i);
        cur = GradedMatrix::new(FreeModule::new(target), FreeModule::new(twists), cols)
            .expect("pruning keeps homogeneity")
            .compress();
    }
}

/// A presentation with minimal generators and minimal relations.
pub fn minimal_presentation(ring: &Ring, m: &GradedModule) -> Result<GradedMatrix> {
    let pruned = prune_units(ring, &m.presentation);
    image_mingens(ring, &pruned)
}

#[derive(Clone, Debug)]
pub struct Resolution {
    /// `differentials[i]` maps `F_{i+1} -> F_i`.
    pub differentials: Vec<GradedMatrix>,
    pub minimal: bool,
}

impl Resolution {
    pub fn len(&self) -> usize {
        self.differentials.iter().filter(|d| d.ncols() > 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The free modules `F_0, F_1, ...`.
    pub fn modules(&self) -> Vec<FreeModule> {
        let mut out = Vec::new();
        if let Some(d) = self.differentials.first() {
            out.push(d.target.clone());
        }
        for d in &self.differentials {
            if d.ncols() == 0 {
                break;
            }
            out.push(d.source.clone());
        }
        out
    }

    /// Alternating sum of ranks, the generic rank of the resolved module.
    pub fn rank(&self) -> i64 {
        self.modules()
            .iter()
            .enumerate()
            .map(|(i, f)| if i % 2 == 0 { f.rank() as i64 } else { -(f.rank() as i64) })
            .sum()
    }

    /// Checks that consecutive differentials compose to zero.
    pub fn is_complex(&self, ring: &Ring) -> bool {
        self.differentials.windows(2).all(|w| {
            w[0].compose(ring, &w[1]).map(|c| c.is_zero()).unwrap_or(false)
        })
    }

    pub fn betti_table(&self) -> Result<BettiTable> {
        if !self.minimal {
            return Err(Error::Usage("Betti numbers need a minimal resolution".into()));
        }
        Ok(BettiTable::from_modules(&self.modules()))
    }
}

/// Minimal free resolution of a finitely presented module.
pub fn minimal_free_resolution(ring: &Ring, m: &GradedModule, max_steps: usize) -> Result<Resolution> {
    let d1 = minimal_presentation(ring, m)?;
    let mut differentials = vec![d1];
    while differentials.len() < max_steps {
        let last = differentials.last().unwrap();
        if last.ncols() == 0 {
            break;
        }
        let next = kernel(ring, last)?;
        let done = next.ncols() == 0;
        differentials.push(next);
        if done {
            break;
        }
    }
    if differentials.last().is_some_and(|d| d.ncols() == 0) && differentials.len() > 1 {
        differentials.pop();
    }
    Ok(Resolution { differentials, minimal: true })
}

/// Resolution of `S / I`.
pub fn resolve_ideal(ring: &Ring, gens: &[Polynomial], max_steps: usize) -> Result<Resolution> {
    let nonzero: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let m = if nonzero.is_empty() {
        GradedModule::free(FreeModule::new(vec![0]))
    } else {
        GradedModule::quotient_ring(&nonzero)?
    };
    minimal_free_resolution(ring, &m, max_steps)
}

/// Graded Betti numbers: `(step, degree) -> rank`, where a summand
/// `S(-d)` in `F_step` counts towards `degree = d`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, i32), usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiRecord {
    pub step: usize,
    pub twist: i32,
    pub rank: usize,
}

impl Serialize for BettiTable {
    fn serialize<Sr: serde::Serializer>(&self, s: Sr) -> std::result::Result<Sr::Ok, Sr::Error> {
        self.records().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(BettiTable::from_records(&Vec::<BettiRecord>::deserialize(d)?))
    }
}

impl BettiTable {
    pub fn from_records(records: &[BettiRecord]) -> BettiTable {
        let mut entries = BTreeMap::new();
        for r in records {
            *entries.entry((r.step, -r.twist)).or_insert(0) += r.rank;
        }
        BettiTable { entries }
    }

    pub fn from_modules(modules: &[FreeModule]) -> BettiTable {
        let mut entries = BTreeMap::new();
        for (i, f) in modules.iter().enumerate() {
            for &t in &f.twists {
                *entries.entry((i, t)).or_insert(0) += 1;
            }
        }
        BettiTable { entries }
    }

    /// Builds a table from `(step, [(degree, rank)])` lists.
    pub fn from_shape(shape: &[(usize, &[(i32, usize)])]) -> BettiTable {
        let mut entries = BTreeMap::new();
        for &(i, list) in shape {
            for &(d, r) in list {
                if r > 0 {
                    *entries.entry((i, d)).or_insert(0) += r;
                }
            }
        }
        BettiTable { entries }
    }

    pub fn get(&self, step: usize, degree: i32) -> usize {
        self.entries.get(&(step, degree)).copied().unwrap_or(0)
    }

    pub fn total(&self, step: usize) -> usize {
        self.entries.iter().filter(|((i, _), _)| *i == step).map(|(_, r)| r).sum()
    }

    pub fn length(&self) -> usize {
        self.entries.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// `sum_i (-1)^i sum_d beta_{i,d} t^d`, as `(lowest degree, coefficients)`.
    pub fn numerator(&self) -> (i32, Vec<i64>) {
        let lo = self.entries.keys().map(|k| k.1).min().unwrap_or(0);
        let hi = self.entries.keys().map(|k| k.1).max().unwrap_or(0);
        let mut coefs = vec![0i64; (hi - lo + 1) as usize];
        for (&(i, d), &r) in &self.entries {
            let s = if i % 2 == 0 { 1 } else { -1 };
            coefs[(d - lo) as usize] += s * r as i64;
        }
        (lo, coefs)
    }

    /// Records `{"step": i, "twist": -d, "rank": b}`, sorted by step and degree.
    pub fn records(&self) -> Vec<BettiRecord> {
        self.entries
            .iter()
            .map(|(&(step, d), &rank)| BettiRecord { step, twist: -d, rank })
            .collect()
    }

    /// Text grid: column `i` is the step, row `r` holds `beta_{i, i + r}`.
    pub fn to_text(&self) -> String {
        let len = self.length();
        let rows: Vec<i32> = self.entries.keys().map(|&(i, d)| d - i as i32).collect();
        let (rlo, rhi) = (
            rows.iter().copied().min().unwrap_or(0),
            rows.iter().copied().max().unwrap_or(0),
        );
        let width = self.entries.values().map(|r| r.to_string().len()).max().unwrap_or(1).max(2);
        let label = format!("{}", rhi).len().max(format!("{}", rlo).len()).max(5);
        let mut s = String::new();
        let _ = write!(s, "{:>label$} ", "");
        for i in 0..=len {
            let _ = write!(s, " {:>width$}", i);
        }
        s.push('\n');
        let _ = write!(s, "{:>label$}:", "total");
        for i in 0..=len {
            let _ = write!(s, " {:>width$}", self.total(i));
        }
        s.push('\n');
        for r in rlo..=rhi {
            let _ = write!(s, "{:>label$}:", r);
            for i in 0..=len {
                let b = self.get(i, r + i as i32);
                if b == 0 {
                    let _ = write!(s, " {:>width$}", ".");
                } else {
                    let _ = write!(s, " {:>width$}", b);
                }
            }
            s.push('\n');
        }
        s
    }

    /// Summands per step written like `3S(-2)+6S(-3)`.
    pub fn summary(&self) -> Vec<String> {
        (0..=self.length())
            .map(|i| {
                let parts: Vec<String> = self
                    .entries
                    .iter()
                    .filter(|((s, _), _)| *s == i)
                    .map(|(&(_, d), &r)| {
                        let m = if d == 0 { "S".to_string() } else { format!("S({})", -d) };
                        if r == 1 { m } else { format!("{r}{m}") }
                    })
                    .collect();
                parts.join("+")
            })
            .collect()
    }
}

/// Hilbert function of a module from a Betti table: `sum (-1)^i beta_{i,d} binom(m - d + n - 1, n - 1)`.
pub fn hilbert_from_betti(table: &BettiTable, nvars: usize, m: i32) -> i64 {
    table
        .entries
        .iter()
        .map(|(&(i, d), &r)| {
            let s = if i % 2 == 0 { 1 } else { -1 };
            s * r as i64 * crate::monomial::count_monomials(nvars, (m - d) as i64) as i64
        })
        .sum()
}

/// Whether a presentation has any constant nonzero entry.
pub fn has_unit_entries(m: &GradedMatrix) -> bool {
    m.cols().iter().any(|c| c.terms().iter().any(|t| t.mono == Monomial::ONE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ideal;

    fn ring() -> Ring {
        Ring::p4(31991).unwrap()
    }

    #[test]
    fn koszul_relation() {
        let r = ring();
        let gb = groebner::groebner_ideal(&r, &[r.var(0), r.var(1)]).unwrap();
        let syz = syzygies(&gb).unwrap();
        assert_eq!(syz.ncols(), 1);
        assert_eq!(syz.source.twists, vec![2]);
        let (a, b) = (syz.entry(0, 0), syz.entry(1, 0));
        assert!(r.add(&r.mul(&a, &r.var(0)), &r.mul(&b, &r.var(1))).unwrap().is_zero());
    }

    #[test]
    fn koszul_complex_on_five_variables() {
        let r = ring();
        let res = resolve_ideal(&r, &r.vars(), DEFAULT_MAX_STEPS).unwrap();
        let betti = res.betti_table().unwrap();
        for i in 0..=5usize {
            let binom = [1, 5, 10, 10, 5, 1][i];
            assert_eq!(betti.get(i, i as i32), binom);
            assert_eq!(betti.total(i), binom);
        }
        assert!(res.is_complex(&r));
        assert_eq!(res.rank(), 0);
        // ten linear syzygies of the variables
        assert_eq!(res.differentials[1].source.twists, vec![2; 10]);
    }

    #[test]
    fn twisted_cubic_betti_numbers() {
        let r = Ring::new(31991, 4).unwrap();
        let gens = parse_ideal(&r, "x0*x2 - x1^2\nx0*x3 - x1*x2\nx1*x3 - x2^2").unwrap();
        let res = resolve_ideal(&r, &gens, 5).unwrap();
        let b = res.betti_table().unwrap();
        assert_eq!(b, BettiTable::from_shape(&[(0, &[(0, 1)]), (1, &[(2, 3)]), (2, &[(3, 2)])]));
        assert!(b.to_text().contains("total:"));
        let (lo, num) = b.numerator();
        assert_eq!((lo, num), (0, vec![1, 0, -3, 2]));
        assert_eq!(hilbert_from_betti(&b, 4, 5), 16);
    }

    #[test]
    fn pruning_removes_units() {
        let r = ring();
        // coker of [[1, x0], [0, x2]] is S / (x2)
        let m = GradedMatrix::from_rows(
            FreeModule::new(vec![0, 0]),
            &[vec![r.one(), r.var(0)], vec![Polynomial::zero(), r.var(2)]],
        )
        .unwrap();
        let p = prune_units(&r, &m);
        assert_eq!(p.nrows(), 1);
        assert_eq!(p.entry(0, 0), r.var(2));
        assert!(!has_unit_entries(&p));
        let min = minimal_presentation(&r, &GradedModule::coker(m)).unwrap();
        assert_eq!(min.ncols(), 1);
    }

    #[test]
    fn non_minimal_resolutions_have_no_betti_table() {
        let res = Resolution { differentials: vec![], minimal: false };
        assert!(res.betti_table().is_err());
    }
}
