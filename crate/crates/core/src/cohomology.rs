//! Sheaf cohomology on P^{n-1} through local duality: for a finitely
//! generated graded module `M` with sheaf `F`,
//! `h^i(F(d)) = dim Ext^{n-1-i}(M, S(-n))_{-d}` for `i >= 1`, and
//! `h^0(F(d)) = dim M_d - dim Ext^n_{-d} + dim Ext^{n-1}_{-d}`.
//! Ext is computed degree by degree from the dualized minimal resolution.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::groebner::{self, GroebnerBasis};
use crate::hilbert;
use crate::ideal::Ideal;
use crate::linalg::DenseMatrix;
use crate::module::{FreeModule, GradedMatrix, GradedModule, Term, Vector};
use crate::monomial::{count_monomials, monomial_rank, monomials_of_degree};
use crate::poly::Ring;
use crate::resolve::{self, Resolution};

fn offsets(nvars: usize, module: &FreeModule, e: i32) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(module.rank());
    let mut total = 0;
    for &t in &module.twists {
        offs.push(total);
        total += count_monomials(nvars, (e - t) as i64);
    }
    (offs, total)
}

/// The linear map `source_e -> target_e` induced by `a` in degree `e`, with
/// bases ordered by component and then by monomial rank.
pub fn piece_matrix(ring: &Ring, a: &GradedMatrix, e: i32) -> DenseMatrix {
    let n = ring.nvars;
    let (toff, trows) = offsets(n, &a.target, e);
    let (_, scols) = offsets(n, &a.source, e);
    let mut out = DenseMatrix::zeros(trows, scols);
    let mut col = 0;
    for (j, &t) in a.source.twists.iter().enumerate() {
        let d = e - t;
        if d < 0 {
            continue;
        }
        let column = a.col(j);
        for u in monomials_of_degree(n, d as u32) {
            let c = col + monomial_rank(u, n);
            for term in column.terms() {
                let m = u.mul(term.mono);
                let r = toff[term.comp as usize] + monomial_rank(m, n);
                out.set(r, c, ring.field.add(out.get(r, c), term.coef));
            }
        }
        col += count_monomials(n, d as i64);
    }
    out
}

/// `Ext^k(M, S(-n))` for the module resolved by `res`, as a graded vector
/// space with its multiplication by the variables.
#[derive(Clone, Debug)]
pub struct GradedExt {
    ring: Ring,
    k: usize,
    /// `C^k = F_k^*(-n)`, or `None` past the end of the resolution.
    module: Option<FreeModule>,
    /// `d^{k-1} : C^{k-1} -> C^k` and `d^k : C^k -> C^{k+1}`.
    incoming: Option<GradedMatrix>,
    outgoing: Option<GradedMatrix>,
}

impl GradedExt {
    pub fn new(ring: &Ring, res: &Resolution, k: usize) -> GradedExt {
        let n = ring.nvars as i32;
        let modules = res.modules();
        let dual = |m: &GradedMatrix| m.transpose().shift(n);
        let module = modules.get(k).map(|f| f.dual().shift(n));
        let incoming = if k == 0 { None } else { res.differentials.get(k - 1).map(dual) };
        let outgoing = res.differentials.get(k).filter(|d| d.ncols() > 0).map(dual);
        GradedExt { ring: *ring, k, module, incoming, outgoing }
    }

    pub fn index(&self) -> usize {
        self.k
    }

    fn rank_of(&self, m: &Option<GradedMatrix>, e: i32) -> usize {
        m.as_ref().map_or(0, |m| piece_matrix(&self.ring, m, e).rank(&self.ring.field))
    }

    /// Dimension of the degree-`e` piece.
    pub fn dim(&self, e: i32) -> usize {
        let Some(module) = &self.module else { return 0 };
        let total = module.dim(self.ring.nvars, e);
        total - self.rank_of(&self.outgoing, e) - self.rank_of(&self.incoming, e)
    }

    /// Dimension of the socle in degree `e`: classes killed by every variable.
    pub fn socle_dim(&self, e: i32) -> usize {
        let Some(module) = &self.module else { return 0 };
        if self.dim(e) == 0 {
            return 0;
        }
        let k = &self.ring.field;
        let n = self.ring.nvars;
        let reps = self.representatives(e);
        let next = self.boundaries(e + 1);
        let index = piece_index(n, module, e);
        let (offs_up, above) = offsets(n, module, e + 1);
        let mut images = Vec::new();
        for v in &reps {
            let mut row = Vec::with_capacity(n * above);
            for i in 0..n {
                let mut w = vec![0; above];
                for (c, &x) in v.iter().enumerate() {
                    if x != 0 {
                        let (comp, mono) = index[c];
                        let m = mono.mul(crate::monomial::Monomial::var(i));
                        w[offs_up[comp] + monomial_rank(m, n)] = x;
                    }
                }
                next.reduce(k, &mut w);
                row.extend(w);
            }
            images.push(row);
        }
        let rank = if images.is_empty() {
            0
        } else {
            let cols = images[0].len();
            DenseMatrix::from_rows(images, cols).rank(k)
        };
        reps.len() - rank
    }

    /// Cycles representing a basis of the degree-`e` piece.
    fn representatives(&self, e: i32) -> Vec<Vec<u32>> {
        let Some(module) = &self.module else { return vec![] };
        let k = &self.ring.field;
        let here = module.dim(self.ring.nvars, e);
        let cycles = match &self.outgoing {
            Some(m) => piece_matrix(&self.ring, m, e).kernel(k),
            None => identity_rows(here),
        };
        let mut bounds = self.boundaries(e);
        cycles.into_iter().filter(|z| bounds.insert(k, z.clone())).collect()
    }

    /// Whether the degree-`e` piece is spanned by `S_{e-d0}` times the
    /// degree-`d0` piece.
    pub fn spanned_from(&self, d0: i32, e: i32) -> bool {
        let Some(module) = &self.module else { return true };
        let k = &self.ring.field;
        let n = self.ring.nvars;
        let target = self.dim(e);
        if target == 0 {
            return true;
        }
        if e < d0 {
            return false;
        }
        let reps = self.representatives(d0);
        let index = piece_index(n, module, d0);
        let (offs, total) = offsets(n, module, e);
        let mut span = self.boundaries(e);
        let start = span.rows.len();
        for m in monomials_of_degree(n, (e - d0) as u32) {
            for v in &reps {
                let mut w = vec![0; total];
                for (c, &x) in v.iter().enumerate() {
                    if x != 0 {
                        let (comp, mono) = index[c];
                        w[offs[comp] + monomial_rank(mono.mul(m), n)] = x;
                    }
                }
                span.insert(k, w);
            }
        }
        span.rows.len() - start == target
    }

    /// Whether the sheaf associated to this Ext module is generated by the
    /// degree-`d0` piece, i.e. the quotient by the submodule it generates
    /// has finite length.
    pub fn sheaf_generated_in(&self, d0: i32) -> Result<bool> {
        let Some(module) = &self.module else { return Ok(true) };
        let ring = &self.ring;
        let n = ring.nvars;
        let cycles = match &self.outgoing {
            Some(m) => resolve::kernel(ring, m)?.cols().to_vec(),
            None => (0..module.rank()).map(Vector::unit).collect(),
        };
        let index = piece_index(n, module, d0);
        let mut sub: Vec<Vector> = self.incoming.as_ref().map_or(vec![], |m| m.cols().to_vec());
        for v in self.representatives(d0) {
            let terms = v
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(c, &x)| Term { coef: x, mono: index[c].1, comp: index[c].0 as u32 })
                .collect();
            sub.push(Vector::from_terms(ring, terms));
        }
        let quotient = hilbert::HilbertData::from_basis(&groebner::buchberger(ring, module, &sub)?);
        let whole = hilbert::HilbertData::from_basis(&groebner::buchberger(ring, module, &cycles)?);
        Ok((0..=n as i64).all(|m| quotient.polynomial(m) == whole.polynomial(m)))
    }

    /// Echelon basis of the boundaries `B_e`.
    fn boundaries(&self, e: i32) -> Echelon {
        let mut ech = Echelon::default();
        if let Some(m) = &self.incoming {
            let a = piece_matrix(&self.ring, m, e).transpose();
            for r in 0..a.rows {
                ech.insert(&self.ring.field, a.row(r).to_vec());
            }
        }
        ech
    }
}

fn identity_rows(n: usize) -> Vec<Vec<u32>> {
    (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect()
}

/// `(component, monomial)` of each basis index of the degree-`e` piece.
fn piece_index(nvars: usize, module: &FreeModule, e: i32) -> Vec<(usize, crate::monomial::Monomial)> {
    let (offs, total) = offsets(nvars, module, e);
    let mut out = vec![(0, crate::monomial::Monomial::ONE); total];
    for (j, &t) in module.twists.iter().enumerate() {
        if e - t < 0 {
            continue;
        }
        for m in monomials_of_degree(nvars, (e - t) as u32) {
            out[offs[j] + monomial_rank(m, nvars)] = (j, m);
        }
    }
    out
}

/// Incrementally built row echelon basis with monic pivots.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    fn reduce(&self, k: &crate::field::PrimeField, v: &mut [u32]) {
        for (p, row) in &self.rows {
            let c = v[*p];
            if c != 0 {
                let f = k.neg(c);
                for (x, &y) in v.iter_mut().zip(row) {
                    if y != 0 {
                        *x = k.add(*x, k.mul(f, y));
                    }
                }
            }
        }
    }

    /// Adds `v` if it is independent of the rows so far.
    fn insert(&mut self, k: &crate::field::PrimeField, mut v: Vec<u32>) -> bool {
        self.reduce(k, &mut v);
        let Some(p) = v.iter().position(|&x| x != 0) else { return false };
        let inv = k.inv(v[p]);
        for x in v.iter_mut() {
            *x = k.mul(*x, inv);
        }
        // keep earlier rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                let f = k.neg(c);
                for (x, &y) in row.iter_mut().zip(&v) {
                    if y != 0 {
                        *x = k.add(*x, k.mul(f, y));
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Cohomology of the sheaf of a finitely presented module.
#[derive(Clone, Debug)]
pub struct SheafCohomology {
    ring: Ring,
    gb: GroebnerBasis,
    exts: Vec<GradedExt>,
}

impl SheafCohomology {
    pub fn new(ring: &Ring, m: &GradedModule) -> Result<SheafCohomology> {
        let res = resolve::minimal_free_resolution(ring, m, ring.nvars + 1)?;
        Self::from_resolution(ring, m, &res)
    }

    /// Uses a known minimal resolution of `m`.
    pub fn from_resolution(ring: &Ring, m: &GradedModule, res: &Resolution) -> Result<SheafCohomology> {
        let gb = groebner::buchberger(ring, m.generators(), m.presentation.cols())?;
        let exts = (0..=ring.nvars).map(|k| GradedExt::new(ring, res, k)).collect();
        Ok(SheafCohomology { ring: *ring, gb, exts })
    }

    pub fn ext(&self, k: usize) -> &GradedExt {
        &self.exts[k]
    }

    /// `h^i` of the sheaf twisted by `d`.
    pub fn h(&self, i: usize, d: i32) -> usize {
        let n = self.ring.nvars;
        if i >= n {
            return 0;
        }
        if i == 0 {
            let local0 = self.exts[n].dim(-d);
            let local1 = self.exts[n - 1].dim(-d);
            return self.gb.hilbert_function(d) + local1 - local0;
        }
        self.exts[n - 1 - i].dim(-d)
    }

    /// Number of minimal generators in degree `d` of the finite-length
    /// module `H^i_*` (`1 <= i <= n - 2`), dual to a socle of Ext.
    pub fn generators_of_h(&self, i: usize, d: i32) -> usize {
        self.exts[self.ring.nvars - 1 - i].socle_dim(-d)
    }
}

/// The module `I` (not `S / I`) with the resolution read off from that of
/// `S / I`.
pub fn ideal_as_module(ring: &Ring, ideal: &Ideal) -> Result<(GradedModule, Resolution)> {
    let full = resolve::resolve_ideal(ring, ideal.gens(), ring.nvars + 1)?;
    let differentials: Vec<GradedMatrix> = full.differentials[1..].to_vec();
    let pres = differentials.first().cloned().unwrap_or_else(|| {
        GradedMatrix::zero(full.differentials[0].source.clone(), FreeModule::default())
    });
    let res = if differentials.is_empty() {
        Resolution { differentials: vec![pres.clone()], minimal: true }
    } else {
        Resolution { differentials, minimal: true }
    };
    Ok((GradedModule::coker(pres), res))
}

/// `h^i(I~(j))` on a rectangle of twists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub jmin: i32,
    pub jmax: i32,
    /// `entries[(i, j)]`, zeros included.
    #[serde(with = "table_serde")]
    pub entries: BTreeMap<(usize, i32), usize>,
}

mod table_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Cell {
        i: usize,
        j: i32,
        h: usize,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<(usize, i32), usize>, s: S) -> Result<S::Ok, S::Error> {
        let cells: Vec<Cell> = m.iter().map(|(&(i, j), &h)| Cell { i, j, h }).collect();
        cells.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, i32), usize>, D::Error> {
        let cells: Vec<Cell> = Vec::deserialize(d)?;
        Ok(cells.into_iter().map(|c| ((c.i, c.j), c.h)).collect())
    }
}

impl CohomologyTable {
    pub fn get(&self, i: usize, j: i32) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// `sum_i (-1)^i h^i(j)`.
    pub fn euler_characteristic(&self, j: i32) -> i64 {
        (0..5).map(|i| if i % 2 == 0 { self.get(i, j) as i64 } else { -(self.get(i, j) as i64) }).sum()
    }

    /// Grid with `i` decreasing upwards and `j` increasing to the right;
    /// zero entries are left blank.
    pub fn to_text(&self) -> String {
        let imax = self.entries.keys().map(|k| k.0).max().unwrap_or(0);
        let mut s = String::new();
        for i in (0..=imax).rev() {
            let _ = write!(s, "{i:>3} |");
            for j in self.jmin..=self.jmax {
                match self.get(i, j) {
                    0 => s.push_str("     |"),
                    h => {
                        let _ = write!(s, "{h:>4} |");
                    }
                }
            }
            s.push('\n');
        }
        s.push_str("     ");
        for j in self.jmin..=self.jmax {
            let _ = write!(s, "{j:>4}  ");
        }
        s.push_str(" j\n");
        s
    }
}

/// Full cohomology data of an ideal sheaf.
pub struct IdealCohomology {
    pub ideal: Ideal,
    /// Minimal resolution of `I` as a module.
    pub resolution: Resolution,
    pub sheaf: SheafCohomology,
}

impl IdealCohomology {
    pub fn new(ideal: &Ideal) -> Result<IdealCohomology> {
        let ring = *ideal.ring();
        let ideal = ideal.saturate().mingens();
        let (module, res) = ideal_as_module(&ring, &ideal)?;
        let sheaf = SheafCohomology::from_resolution(&ring, &module, &res)?;
        Ok(IdealCohomology { ideal, resolution: res, sheaf })
    }

    /// `h^i(I(j))`; `h^0` is read off the saturated ideal directly.
    pub fn h(&self, i: usize, j: i32) -> usize {
        if i == 0 {
            self.ideal.dim_in_degree(j)
        } else {
            self.sheaf.h(i, j)
        }
    }

    pub fn table(&self, jmin: i32, jmax: i32) -> CohomologyTable {
        let n = self.ideal.ring().nvars;
        let mut entries = BTreeMap::new();
        for j in jmin..=jmax {
            for i in 0..n {
                entries.insert((i, j), self.h(i, j));
            }
        }
        CohomologyTable { jmin, jmax, entries }
    }

    /// Hilbert function of `H^i_*` on the window `[lo, hi]`.
    pub fn rao_function(&self, i: usize, lo: i32, hi: i32) -> Vec<usize> {
        (lo..=hi).map(|j| self.h(i, j)).collect()
    }

    pub fn rao_generators(&self, i: usize, lo: i32, hi: i32) -> Vec<(i32, usize)> {
        (lo..=hi)
            .map(|j| (j, self.sheaf.generators_of_h(i, j)))
            .filter(|&(_, g)| g > 0)
            .collect()
    }
}

/// A Hartshorne-Rao module `H^i_* I~`, recorded on a window of twists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaoModule {
    pub i: usize,
    pub lo: i32,
    /// `dims[k] = h^i(I(lo + k))`.
    pub dims: Vec<usize>,
    /// `(degree, count)` of minimal generators.
    pub generators: Vec<(i32, usize)>,
}

/// Window in which the Hartshorne-Rao modules are reconstructed.
pub const RAO_WINDOW: (i32, i32) = (-2, 6);

pub fn hartshorne_rao(coh: &IdealCohomology, i: usize) -> RaoModule {
    let (lo, hi) = RAO_WINDOW;
    RaoModule {
        i,
        lo,
        dims: coh.rao_function(i, lo, hi),
        generators: coh.rao_generators(i, lo, hi),
    }
}

impl RaoModule {
    /// Nonzero values, from the first nonzero degree on.
    pub fn values(&self) -> Vec<usize> {
        let start = self.dims.iter().position(|&d| d > 0).unwrap_or(self.dims.len());
        let end = self.dims.iter().rposition(|&d| d > 0).map_or(start, |e| e + 1);
        self.dims[start..end].to_vec()
    }

    pub fn first_degree(&self) -> Option<i32> {
        self.dims.iter().position(|&d| d > 0).map(|k| self.lo + k as i32)
    }

    pub fn is_monogeneous(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].1 == 1
    }
}

/// The standard invariants of a smooth surface with ideal `I`:
/// `p_g = h^3(I(0))`, `q = h^2(I(0))`, `s = h^2(I(1))`.
pub fn surface_invariants(coh: &IdealCohomology) -> Result<hilbert::SurfaceInvariants> {
    let numbers = hilbert::surface_numbers(&coh.ideal.hilbert())?;
    let k2 = hilbert::k2_from_invariants(numbers.d, numbers.pi, numbers.chi)?;
    Ok(hilbert::SurfaceInvariants {
        d: numbers.d,
        pi: numbers.pi,
        chi: numbers.chi,
        pg: coh.h(3, 0) as i64,
        q: coh.h(2, 0) as i64,
        k2,
        s: coh.h(2, 1) as i64,
    })
}
