//! Homogeneous Buchberger algorithm, one degree at a time.
//!
//! In degree `D` every pending S-vector and every input of degree `D` is
//! first reduced against the basis elements of lower degree (in parallel),
//! then the remainders are put in reduced echelon form among themselves.
//! Inputs are processed after the S-vectors, so an input survives exactly
//! when it is not in the span of what lower degrees and earlier inputs
//! already generate; the surviving inputs form a minimal generating set.

use rayon::prelude::*;

use super::layout::{make_monic, Accumulator, Elem, Layout, Reducers, Row, TermOrder};
use crate::module::{FreeModule, Term, Vector};
use crate::monomial::Monomial;
use crate::poly::Ring;

#[derive(Clone, Copy, Debug)]
struct Pair {
    i: u32,
    j: u32,
    lcm: Monomial,
    comp: u32,
    deg: i32,
}

pub(crate) struct Engine {
    pub ring: Ring,
    pub module: FreeModule,
    pub order: TermOrder,
    pub elems: Vec<Elem>,
    pub kept: Vec<usize>,
    pub syzygies: Vec<Vector>,
    inputs: Vec<(i32, usize, Vec<Term>)>,
    next_input: usize,
    pairs: Vec<Pair>,
    done_through: Option<i32>,
    pub m_primary_at: Option<i32>,
}

impl Engine {
    /// `inputs` must be homogeneous in `module`; zero vectors are ignored.
    pub fn new(ring: Ring, module: FreeModule, order: TermOrder, inputs: &[Vector]) -> Engine {
        let mut staged: Vec<(i32, usize, Vec<Term>)> = inputs
            .iter()
            .enumerate()
            .filter_map(|(idx, v)| {
                let d = v.degree_in(&module)?;
                let mut terms = v.terms().to_vec();
                terms.sort_unstable_by(|a, b| {
                    order.key(b.mono, b.comp).cmp(&order.key(a.mono, a.comp))
                });
                Some((d, idx, terms))
            })
            .collect();
        staged.sort_by_key(|s| (s.0, s.1));
        Engine {
            ring,
            module,
            order,
            elems: Vec::new(),
            kept: Vec::new(),
            syzygies: Vec::new(),
            inputs: staged,
            next_input: 0,
            pairs: Vec::new(),
            done_through: None,
            m_primary_at: None,
        }
    }

    pub fn next_degree(&self) -> Option<i32> {
        let a = self.inputs.get(self.next_input).map(|s| s.0);
        let b = self.pairs.iter().map(|p| p.deg).min();
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.next_degree().is_none()
    }

    /// Runs until all work of degree `<= limit` is done.
    pub fn run(&mut self, limit: Option<i32>, stop_if_m_primary: bool) {
        while let Some(d) = self.next_degree() {
            if limit.is_some_and(|l| d > l) {
                self.done_through = limit;
                return;
            }
            self.step(d, stop_if_m_primary);
            if stop_if_m_primary && self.m_primary_at.is_some() {
                return;
            }
        }
    }

    fn step(&mut self, d: i32, check_m_primary: bool) {
        let layout = Layout::new(&self.module, &self.order, self.ring.nvars, d);
        let p = self.ring.characteristic();
        let field = self.ring.field;

        let mut pairs: Vec<Pair> = Vec::new();
        self.pairs.retain(|pr| {
            if pr.deg == d {
                pairs.push(*pr);
                false
            } else {
                true
            }
        });
        pairs.sort_by(|a, b| {
            self.order
                .key(b.lcm, b.comp)
                .cmp(&self.order.key(a.lcm, a.comp))
                .then(a.i.cmp(&b.i))
                .then(a.j.cmp(&b.j))
        });
        let first_input = self.next_input;
        while self.next_input < self.inputs.len() && self.inputs[self.next_input].0 == d {
            self.next_input += 1;
        }
        let inputs = &self.inputs[first_input..self.next_input];

        let reducers =
            Reducers::new(&layout, &self.elems, 0..self.elems.len(), self.module.rank());
        let elems = &self.elems;
        let ncols = layout.len();

        // S-vectors and inputs, reduced modulo lower degrees
        let jobs: Vec<Job> = pairs
            .iter()
            .map(|pr| Job::Pair(*pr))
            .chain(inputs.iter().map(|inp| Job::Input(&inp.2)))
            .collect();
        let rows: Vec<Row> = jobs
            .par_iter()
            .map_init(
                || Accumulator::new(ncols, p),
                |acc, job| {
                    match job {
                        Job::Pair(pr) => {
                            let (gi, gj) = (&elems[pr.i as usize], &elems[pr.j as usize]);
                            let qi = gi.terms[0].mono.quotient_of(pr.lcm);
                            let qj = gj.terms[0].mono.quotient_of(pr.lcm);
                            for t in &gi.terms[1..] {
                                acc.add(layout.col(t.mono.mul(qi), t.comp), t.coef);
                            }
                            for t in &gj.terms[1..] {
                                acc.add(layout.col(t.mono.mul(qj), t.comp), field.neg(t.coef));
                            }
                        }
                        Job::Input(terms) => acc.load_terms(&layout, terms, 1, p),
                    }
                    acc.reduce(|c| reducers.get(c))
                },
            )
            .collect();
        drop(reducers);

        // echelon form among the remainders
        let mut pivot_of: Vec<u32> = vec![u32::MAX; ncols];
        let mut pivots: Vec<Row> = Vec::new();
        let mut acc = Accumulator::new(ncols, p);
        let npairs = pairs.len();
        for (k, row) in rows.into_iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let mut row = if pivots.is_empty() {
                row
            } else {
                acc.load_row(&row);
                acc.reduce(|c| {
                    let pv = pivot_of[c];
                    (pv != u32::MAX).then(|| &pivots[pv as usize])
                })
            };
            if row.is_empty() {
                continue;
            }
            make_monic(&mut row, &field);
            if k >= npairs {
                self.kept.push(inputs[k - npairs].1);
            }
            pivot_of[row.lead().unwrap()] = pivots.len() as u32;
            pivots.push(row);
        }

        // back substitution among upper pivots, smallest leading terms first
        let is_lower_col = |c: usize| self.order.is_lower(layout.cols[c].1);
        let mut order: Vec<usize> = (0..pivots.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(pivots[i].lead().unwrap()));
        for &i in &order {
            let lead = pivots[i].lead().unwrap();
            if is_lower_col(lead) {
                continue;
            }
            let needs = pivots[i].cols[1..].iter().any(|&c| {
                let pv = pivot_of[c as usize];
                pv != u32::MAX && !is_lower_col(c as usize)
            });
            if !needs {
                continue;
            }
            let row = std::mem::take(&mut pivots[i]);
            acc.add(row.cols[0] as usize, 0);
            acc.add_row(&row, 1, 1);
            let mut tail = acc.reduce(|c| {
                let pv = pivot_of[c];
                (pv != u32::MAX && !is_lower_col(c)).then(|| &pivots[pv as usize])
            });
            tail.cols.insert(0, row.cols[0]);
            tail.coefs.insert(0, row.coefs[0]);
            pivots[i] = tail;
        }

        let mut new_elems: Vec<usize> = Vec::new();
        let mut lead_sorted: Vec<usize> = (0..pivots.len()).collect();
        lead_sorted.sort_by_key(|&i| pivots[i].lead().unwrap());
        for i in lead_sorted {
            let row = &pivots[i];
            let terms = row.to_terms(&layout);
            if is_lower_col(row.lead().unwrap()) {
                self.syzygies.push(Vector::from_terms(&self.ring, terms));
            } else {
                new_elems.push(self.elems.len());
                self.elems.push(Elem { terms, deg: d });
            }
        }
        for k in new_elems {
            self.update_pairs(k);
        }
        self.done_through = Some(d);

        if check_m_primary && self.m_primary_at.is_none() {
            let all = Reducers::new(&layout, &self.elems, 0..self.elems.len(), self.module.rank());
            if (0..layout.len()).all(|c| all.reducible(c)) {
                self.m_primary_at = Some(d);
            }
        }
    }

    /// Gebauer-Moeller update for the new element `k`.
    fn update_pairs(&mut self, k: usize) {
        let (hm, hc) = self.elems[k].lead();
        let elems = &self.elems;
        self.pairs.retain(|pr| {
            if pr.comp != hc || !hm.divides(pr.lcm) {
                return true;
            }
            let li = elems[pr.i as usize].terms[0].mono.lcm(hm);
            let lj = elems[pr.j as usize].terms[0].mono.lcm(hm);
            li == pr.lcm || lj == pr.lcm
        });

        let product_ok = self.module.rank() == 1 && self.order.split.is_none();
        let mut cands: Vec<(Monomial, u32, bool)> = Vec::new();
        for (i, g) in self.elems[..k].iter().enumerate() {
            let (gm, gc) = g.lead();
            if gc != hc {
                continue;
            }
            cands.push((gm.lcm(hm), i as u32, product_ok && gm.is_coprime(hm)));
        }
        // criterion M: drop pairs whose lcm is a proper multiple of another's
        let keep: Vec<bool> = cands
            .iter()
            .map(|&(l, _, _)| !cands.iter().any(|&(l2, _, _)| l2 != l && l2.divides(l)))
            .collect();
        let mut survivors: Vec<(Monomial, u32, bool)> =
            cands.into_iter().zip(keep).filter(|x| x.1).map(|x| x.0).collect();
        // criterion F and the product criterion, per lcm class
        survivors.sort_by(|a, b| a.0.raw().cmp(&b.0.raw()).then(a.1.cmp(&b.1)));
        let mut idx = 0;
        while idx < survivors.len() {
            let mut end = idx;
            while end < survivors.len() && survivors[end].0 == survivors[idx].0 {
                end += 1;
            }
            let class = &survivors[idx..end];
            if !class.iter().any(|c| c.2) {
                let (lcm, i, _) = class[0];
                self.pairs.push(Pair {
                    i,
                    j: k as u32,
                    lcm,
                    comp: hc,
                    deg: lcm.degree() as i32 + self.module.twists[hc as usize],
                });
            }
            idx = end;
        }
    }
}

enum Job<'a> {
    Pair(Pair),
    Input(&'a [Term]),
}
