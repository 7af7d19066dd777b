//! Reduced Groebner bases of homogeneous submodules of graded free modules.

mod cache;
mod engine;
mod layout;

use std::time::Instant;

pub use cache::{cache_dir, set_cache_dir};
pub use layout::TermOrder;

use crate::error::{Error, Result};
use crate::module::{FreeModule, Term, Vector};
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::{Polynomial, Ring};
use engine::Engine;
use layout::{Accumulator, Elem, Layout, Reducers};

/// Computations faster than this are not written to the cache.
const CACHE_THRESHOLD_MS: u128 = 50;

/// A reduced Groebner basis, sorted by degree and then by decreasing
/// leading term. If `complete` is false the basis is only known to be
/// correct up to the degree in `truncated_at`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    module: FreeModule,
    order: TermOrder,
    elems: Vec<Elem>,
    truncated_at: Option<i32>,
}

/// Output of a run with a split order: the basis part above the split and
/// a generating set of the submodule's intersection with the lower block.
pub(crate) struct SplitRun {
    pub lower: Vec<Vector>,
}

fn check_inputs(module: &FreeModule, gens: &[Vector]) -> Result<()> {
    for (i, g) in gens.iter().enumerate() {
        if let Some(c) = g.max_comp() {
            if c as usize >= module.rank() {
                return Err(Error::Shape(format!("generator {i} lies outside the ambient module")));
            }
        }
        if !g.is_homogeneous_in(module) {
            return Err(Error::Usage(format!("generator {i} is not homogeneous")));
        }
    }
    Ok(())
}

fn pack(terms: &[Term]) -> cache::PackedVector {
    terms.iter().map(|t| (t.mono.raw(), t.comp, t.coef)).collect()
}

fn unpack(v: &cache::PackedVector) -> Vec<Term> {
    v.iter()
        .map(|&(raw, comp, coef)| Term { mono: Monomial::from_raw(raw), comp, coef })
        .collect()
}

struct Finished {
    elems: Vec<Elem>,
    kept: Vec<usize>,
    syzygies: Vec<Vector>,
}

/// Runs the engine to completion, consulting the cache when enabled.
fn run_complete(ring: &Ring, module: &FreeModule, order: TermOrder, gens: &[Vector]) -> Finished {
    let key = cache::cache_dir().map(|_| cache::key(ring, module, &order, gens));
    if let Some(entry) = key.as_deref().and_then(cache::load) {
        return Finished {
            elems: entry.elems.iter().map(|(deg, v)| Elem { terms: unpack(v), deg: *deg }).collect(),
            kept: entry.kept,
            syzygies: entry.syzygies.iter().map(|v| Vector::from_terms(ring, unpack(v))).collect(),
        };
    }
    let start = Instant::now();
    let mut eng = Engine::new(*ring, module.clone(), order, gens);
    eng.run(None, false);
    let done = Finished { elems: eng.elems, kept: eng.kept, syzygies: eng.syzygies };
    if let Some(key) = key {
        if start.elapsed().as_millis() >= CACHE_THRESHOLD_MS {
            let entry = cache::Entry {
                elems: done.elems.iter().map(|e| (e.deg, pack(&e.terms))).collect(),
                kept: done.kept.clone(),
                syzygies: done.syzygies.iter().map(|v| pack(v.terms())).collect(),
            };
            cache::store(&key, &entry);
        }
    }
    done
}

fn sort_elems(elems: &mut [Elem], order: &TermOrder) {
    elems.sort_by(|a, b| {
        a.deg.cmp(&b.deg).then_with(|| {
            let (am, ac) = a.lead();
            let (bm, bc) = b.lead();
            order.key(bm, bc).cmp(&order.key(am, ac))
        })
    });
}

/// Reduced Groebner basis of the submodule generated by `gens`.
pub fn buchberger(ring: &Ring, module: &FreeModule, gens: &[Vector]) -> Result<GroebnerBasis> {
    check_inputs(module, gens)?;
    let mut done = run_complete(ring, module, TermOrder::plain(), gens);
    sort_elems(&mut done.elems, &TermOrder::plain());
    Ok(GroebnerBasis {
        ring: *ring,
        module: module.clone(),
        order: TermOrder::plain(),
        elems: done.elems,
        truncated_at: None,
    })
}

/// Groebner basis of an ideal.
pub fn groebner_ideal(ring: &Ring, gens: &[Polynomial]) -> Result<GroebnerBasis> {
    let vecs: Vec<Vector> = gens.iter().map(|g| Vector::from_poly(g, 0)).collect();
    buchberger(ring, &FreeModule::new(vec![0]), &vecs)
}

/// Basis valid in degrees `<= limit`.
pub fn truncated_basis(
    ring: &Ring,
    module: &FreeModule,
    gens: &[Vector],
    limit: i32,
) -> Result<GroebnerBasis> {
    check_inputs(module, gens)?;
    let mut eng = Engine::new(*ring, module.clone(), TermOrder::plain(), gens);
    eng.run(Some(limit), false);
    let complete = eng.is_complete();
    let mut elems = eng.elems;
    sort_elems(&mut elems, &TermOrder::plain());
    Ok(GroebnerBasis {
        ring: *ring,
        module: module.clone(),
        order: TermOrder::plain(),
        elems,
        truncated_at: if complete { None } else { Some(limit) },
    })
}

/// Decides whether the ideal generated by `gens` contains a power of the
/// irrelevant ideal, computing degree by degree and stopping as soon as
/// some degree is entirely made of leading terms. Returns that degree.
/// Gives up (returning `None`) after `max_degree`.
pub fn m_primary_degree(ring: &Ring, gens: &[Polynomial], max_degree: i32) -> Result<Option<i32>> {
    let module = FreeModule::new(vec![0]);
    let vecs: Vec<Vector> = gens.iter().map(|g| Vector::from_poly(g, 0)).collect();
    check_inputs(&module, &vecs)?;
    let mut eng = Engine::new(*ring, module, TermOrder::plain(), &vecs);
    while let Some(d) = eng.next_degree() {
        if d > max_degree {
            break;
        }
        eng.run(Some(d), true);
        if eng.m_primary_at.is_some() {
            return Ok(eng.m_primary_at);
        }
    }
    if eng.is_complete() {
        let gb = GroebnerBasis {
            ring: *ring,
            module: FreeModule::new(vec![0]),
            order: TermOrder::plain(),
            elems: eng.elems,
            truncated_at: None,
        };
        let top = gb.elems.iter().map(|e| e.deg).max().unwrap_or(0).max(0);
        let bound = (ring.nvars as i32 * top).min(max_degree.max(top));
        for d in top..=bound {
            if gb.hilbert_function(d) == 0 {
                return Ok(Some(d));
            }
        }
    }
    Ok(None)
}

/// A minimal homogeneous generating set chosen among `gens`, ordered by
/// degree and then by input position.
pub fn minimal_generators(ring: &Ring, module: &FreeModule, gens: &[Vector]) -> Result<Vec<Vector>> {
    Ok(minimal_generator_indices(ring, module, gens)?.into_iter().map(|i| gens[i].clone()).collect())
}

pub fn minimal_generator_indices(
    ring: &Ring,
    module: &FreeModule,
    gens: &[Vector],
) -> Result<Vec<usize>> {
    check_inputs(module, gens)?;
    let done = run_complete(ring, module, TermOrder::plain(), gens);
    Ok(done.kept)
}

/// Generators of `U ∩ F_lower`, where `U` is generated by `gens` inside
/// `module` and `F_lower` is spanned by the components `>= split`. The
/// returned vectors are renumbered to start at component zero.
pub(crate) fn lower_block(
    ring: &Ring,
    module: &FreeModule,
    split: u32,
    gens: &[Vector],
) -> Result<SplitRun> {
    check_inputs(module, gens)?;
    let done = run_complete(ring, module, TermOrder::split_at(split), gens);
    let lower = done
        .syzygies
        .iter()
        .map(|v| v.slice_comps(split, module.rank() as u32))
        .collect();
    Ok(SplitRun { lower })
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.truncated_at.is_none()
    }

    pub fn truncated_at(&self) -> Option<i32> {
        self.truncated_at
    }

    pub fn elements(&self) -> Vec<Vector> {
        self.elems.iter().map(|e| Vector::from_terms(&self.ring, e.terms.clone())).collect()
    }

    /// Elements of an ideal basis as polynomials.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.elements().iter().map(|v| v.component(0)).collect()
    }

    pub fn leading_terms(&self) -> Vec<(Monomial, u32)> {
        self.elems.iter().map(|e| e.lead()).collect()
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.elems.iter().map(|e| e.deg).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elems.iter().any(|e| e.terms[0].mono == Monomial::ONE)
            && self.module.rank() == 1
    }

    pub fn is_zero(&self) -> bool {
        self.elems.is_empty()
    }

    fn layout(&self, d: i32) -> Layout {
        Layout::new(&self.module, &self.order, self.ring.nvars, d)
    }

    fn check_degree(&self, d: i32) {
        if let Some(t) = self.truncated_at {
            assert!(d <= t, "basis truncated at degree {t} cannot answer degree {d}");
        }
    }

    /// Remainder of `v` on division by the basis.
    pub fn normal_form(&self, v: &Vector) -> Result<Vector> {
        check_inputs(&self.module, std::slice::from_ref(v))?;
        let Some(d) = v.degree_in(&self.module) else { return Ok(Vector::zero()) };
        self.check_degree(d);
        let layout = self.layout(d);
        let reducers = self.reducers(&layout, d);
        let p = self.ring.characteristic();
        let mut acc = Accumulator::new(layout.len(), p);
        acc.load_terms(&layout, v.terms(), 1, p);
        let row = acc.reduce(|c| reducers.get(c));
        Ok(Vector::from_terms(&self.ring, row.to_terms(&layout)))
    }

    pub fn normal_form_poly(&self, f: &Polynomial) -> Result<Polynomial> {
        Ok(self.normal_form(&Vector::from_poly(f, 0))?.component(0))
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        Ok(self.normal_form(v)?.is_zero())
    }

    pub fn contains_poly(&self, f: &Polynomial) -> Result<bool> {
        self.contains(&Vector::from_poly(f, 0))
    }

    fn reducers<'a>(&'a self, layout: &'a Layout, d: i32) -> Reducers<'a> {
        let active = (0..self.elems.len()).filter(move |&i| self.elems[i].deg <= d);
        Reducers::new(layout, &self.elems, active, self.module.rank())
    }

    /// Dimension of the degree-`d` piece of `F / U`.
    pub fn hilbert_function(&self, d: i32) -> usize {
        self.check_degree(d);
        let layout = self.layout(d);
        let reducers = self.reducers(&layout, d);
        (0..layout.len()).filter(|&c| !reducers.reducible(c)).count()
    }

    /// Dimension of the degree-`d` piece of the submodule `U`.
    pub fn submodule_dim(&self, d: i32) -> usize {
        self.module.dim(self.ring.nvars, d) - self.hilbert_function(d)
    }

    /// Standard terms of degree `d`, in decreasing order.
    pub fn standard_terms(&self, d: i32) -> Vec<(Monomial, u32)> {
        self.check_degree(d);
        let layout = self.layout(d);
        let reducers = self.reducers(&layout, d);
        (0..layout.len()).filter(|&c| !reducers.reducible(c)).map(|c| layout.cols[c]).collect()
    }

    /// The reduced echelon basis `{ t - NF(t) }` of the degree-`d` piece of
    /// the submodule, indexed by the leading terms `t` in decreasing order.
    pub fn basis_in_degree(&self, d: i32) -> Vec<Vector> {
        self.check_degree(d);
        let layout = self.layout(d);
        let reducers = self.reducers(&layout, d);
        let p = self.ring.characteristic();
        let mut acc = Accumulator::new(layout.len(), p);
        let mut out = Vec::new();
        for c in 0..layout.len() {
            let Some(r) = reducers.get(c) else { continue };
            // t - NF(t) = t*g reduced in its tail
            acc.add(c, 0);
            acc.add_row(r, 1, 1);
            let tail = acc.reduce(|k| reducers.get(k));
            let mut terms = tail.to_terms(&layout);
            let (mono, comp) = layout.cols[c];
            terms.push(Term { mono, comp, coef: 1 });
            out.push(Vector::from_terms(&self.ring, terms));
        }
        out
    }

    /// Degree-`d` monomials of a rank-one basis that are not leading terms.
    pub fn standard_monomials(&self, d: i32) -> Vec<Monomial> {
        self.standard_terms(d).into_iter().map(|t| t.0).collect()
    }
}

/// All monomials of degree `d` as ideal generators, i.e. `m^d`.
pub fn power_of_maximal_ideal(ring: &Ring, d: u32) -> Vec<Polynomial> {
    monomials_of_degree(ring.nvars, d).into_iter().map(|m| ring.monomial(m, 1)).collect()
}
