//! The monad construction: from the module `M` with Hilbert function
//! `(1, 2, 1)` through `N`, `K` and the rank four bundle `E` to the ideal of
//! the surface, cut out as the degeneracy locus of a general map
//! `3 O(-5) -> E`.

use std::time::Instant;

use rand::Rng;

use super::data;
use super::random::{stage_rng, MAX_ATTEMPTS};
use super::report::ConstructionReport;
use crate::cohomology::{self, CohomologyTable, IdealCohomology};
use crate::error::{Error, Result};
use crate::groebner;
use crate::hilbert::{self, HilbertData};
use crate::ideal::{self, module_to_ideal, Ideal, Verdict};
use crate::module::{FreeModule, GradedMatrix, GradedModule, Vector};
use crate::parse::{format_ideal, format_matrix};
use crate::poly::{Polynomial, Ring};
use crate::resolve::{self, BettiTable, Resolution};

/// Betti tables of the displayed resolutions, as `(step, [(degree, rank)])`.
pub fn expected_betti_m() -> BettiTable {
    BettiTable::from_shape(&[
        (0, &[(0, 1)]),
        (1, &[(1, 3), (2, 2)]),
        (2, &[(2, 3), (3, 6), (4, 1)]),
        (3, &[(3, 1), (4, 6), (5, 3)]),
        (4, &[(5, 2), (6, 3)]),
        (5, &[(7, 1)]),
    ])
}

pub fn expected_betti_n() -> BettiTable {
    BettiTable::from_shape(&[
        (0, &[(2, 1)]),
        (1, &[(3, 1), (4, 5)]),
        (2, &[(5, 7), (6, 7)]),
        (3, &[(6, 2), (7, 11), (8, 3)]),
        (4, &[(8, 4), (9, 5)]),
        (5, &[(10, 2)]),
    ])
}

const TAIL: [(usize, &[(i32, usize)]); 3] =
    [(1, &[(6, 2), (7, 10), (8, 3)]), (2, &[(8, 4), (9, 5)]), (3, &[(10, 2)])];

fn with_tail(first: &[(i32, usize)]) -> BettiTable {
    let mut shape = vec![(0, first)];
    shape.extend(TAIL);
    BettiTable::from_shape(&shape)
}

pub fn expected_betti_k() -> BettiTable {
    with_tail(&[(4, 1), (5, 8), (6, 4)])
}

pub fn expected_betti_e() -> BettiTable {
    with_tail(&[(5, 8), (6, 4)])
}

/// Betti table of `I_X` as a module.
pub fn expected_betti_ix() -> BettiTable {
    with_tail(&[(5, 5), (6, 4)])
}

/// `h^i I_X(j)` for `-1 <= j <= 3` with `a = 1` and `b = 0`.
pub fn expected_cohomology() -> CohomologyTable {
    let mut entries = std::collections::BTreeMap::new();
    for j in -1..=3 {
        for i in 0..5 {
            entries.insert((i, j), 0);
        }
    }
    for (i, j, h) in [(3, -1, 15), (3, 0, 3), (2, 0, 1), (2, 1, 2), (2, 2, 1), (1, 2, 1), (1, 3, 4)] {
        entries.insert((i, j), h);
    }
    CohomologyTable { jmin: -1, jmax: 3, entries }
}

/// `M = coker f0` and its minimal resolution.
pub fn build_m(ring: &Ring) -> Result<(GradedModule, Resolution)> {
    let m = GradedModule::coker(data::f0(ring)?);
    let res = resolve::minimal_free_resolution(ring, &m, resolve::DEFAULT_MAX_STEPS)?;
    Ok((m, res))
}

/// The Koszul map `F2 -> F1` on the basis `e_i ^ e_j` ordered as the rows
/// of `f2`: `e_i ^ e_j -> f_i e_j - f_j e_i`.
pub fn koszul_f1(ring: &Ring) -> Result<GradedMatrix> {
    let f = data::f0(ring)?.rows().remove(0);
    let pairs = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (2, 4), (3, 4)];
    let target = FreeModule::new(f.iter().map(|g| g.degree().unwrap() as i32).collect());
    let cols = pairs
        .iter()
        .map(|&(i, j)| {
            let mut v = vec![Polynomial::zero(); 5];
            v[j] = f[i].clone();
            v[i] = ring.neg(&f[j]);
            Vector::from_polys(&v)
        })
        .collect();
    GradedMatrix::new(target, FreeModule::new(data::F2_TWISTS.to_vec()), cols)
}

/// `N = coker(phi f2)`, generated in degree 2.
pub fn build_n(ring: &Ring) -> Result<(GradedModule, Resolution)> {
    let pf = data::phi(ring)?.compose(ring, &data::f2(ring)?)?;
    let n = GradedModule::coker(pf);
    let res = resolve::minimal_free_resolution(ring, &n, resolve::DEFAULT_MAX_STEPS)?;
    Ok((n, res))
}

/// The module `K = f2(Syz(phi f2)) ⊂ F2`, with generators chosen so that
/// `f2 psi` comes first and `f2 psi'` second.
#[derive(Clone, Debug)]
pub struct KData {
    /// Minimal generators of `Syz(phi f2)` inside `F3`.
    pub syz: GradedMatrix,
    /// Minimal generators of `K` as columns in `F2`.
    pub gens: GradedMatrix,
    /// Relations among those generators.
    pub relations: GradedMatrix,
    /// Whether `psi` and `psi'` survive as minimal generators.
    pub psi_minimal: bool,
    pub psi_prime_minimal: bool,
}

pub fn build_k(ring: &Ring) -> Result<KData> {
    let f2 = data::f2(ring)?;
    let pf = data::phi(ring)?.compose(ring, &f2)?;
    let syz = resolve::kernel(ring, &pf)?;
    let mut candidates = vec![data::psi(ring), data::psi_prime(ring)];
    candidates.extend(syz.cols().iter().cloned());
    let images: Vec<Vector> = candidates.iter().map(|v| f2.apply(ring, v)).collect();
    let nonzero: Vec<usize> = (0..images.len()).filter(|&i| !images[i].is_zero()).collect();
    let kept_images: Vec<Vector> = nonzero.iter().map(|&i| images[i].clone()).collect();
    let idx = groebner::minimal_generator_indices(ring, &f2.target, &kept_images)?;
    let chosen: Vec<usize> = idx.iter().map(|&i| nonzero[i]).collect();
    let cols: Vec<Vector> = chosen.iter().map(|&i| images[i].clone()).collect();
    let twists = cols.iter().map(|v| v.degree_in(&f2.target).unwrap()).collect();
    let gens = GradedMatrix::new(f2.target.clone(), FreeModule::new(twists), cols)?;
    let relations = resolve::kernel(ring, &gens)?;
    Ok(KData {
        syz,
        psi_minimal: chosen.first() == Some(&0),
        psi_prime_minimal: chosen.contains(&1),
        gens,
        relations,
    })
}

fn unit_columns(module: &FreeModule, idx: &[usize]) -> Result<GradedMatrix> {
    let twists = idx.iter().map(|&i| module.twists[i]).collect();
    GradedMatrix::new(module.clone(), FreeModule::new(twists), idx.iter().map(|&i| Vector::unit(i)).collect())
}

/// `E = K / (psi)`, minimally presented.
pub fn build_e(ring: &Ring, k: &KData) -> Result<GradedModule> {
    let pres = k.relations.concat_cols(&unit_columns(&k.gens.source, &[0])?)?;
    Ok(GradedModule::coker(resolve::minimal_presentation(ring, &GradedModule::coker(pres))?))
}

/// `F = K / (psi, psi')`, the rank three quotient.
pub fn build_f(ring: &Ring, k: &KData) -> Result<GradedModule> {
    let target = data::f2(ring)?.apply(ring, &data::psi_prime(ring));
    let psi_prime = (0..k.gens.ncols())
        .find(|&j| k.gens.col(j) == &target)
        .ok_or_else(|| Error::Construction("psi' is not among the generators of K".into()))?;
    let pres = k.relations.concat_cols(&unit_columns(&k.gens.source, &[0, psi_prime])?)?;
    Ok(GradedModule::coker(resolve::minimal_presentation(ring, &GradedModule::coker(pres))?))
}

/// Whether the columns `f2 v` span a subbundle of `B`: the maximal minors
/// of the matrix they form have no common zero.
pub fn spans_subbundle(ring: &Ring, vs: &[Vector]) -> Result<bool> {
    let f2 = data::f2(ring)?;
    let cols: Vec<Vec<Polynomial>> = vs.iter().map(|v| f2.apply(ring, v).to_polys(10)).collect();
    let minors: Vec<Polynomial> = match cols.len() {
        1 => cols[0].clone(),
        2 => {
            let mut out = Vec::new();
            for a in 0..10 {
                for b in a + 1..10 {
                    let p = ring.mul(&cols[0][a], &cols[1][b]);
                    let q = ring.mul(&cols[0][b], &cols[1][a]);
                    // entries of different rows can have different degrees
                    if let Ok(m) = ring.sub(&p, &q) {
                        out.push(m);
                    } else {
                        return Err(Error::Degree("inhomogeneous minor".into()));
                    }
                }
            }
            out
        }
        _ => return Err(Error::Usage("one or two sections expected".into())),
    };
    let minors: Vec<Polynomial> = minors.into_iter().filter(|m| !m.is_zero()).collect();
    Ok(groebner::m_primary_degree(ring, &minors, 40)?.is_some())
}

/// Chern classes `c_1 .. c_4` of the sheaf of a module, from its Betti
/// numbers, after twisting by `shift`.
pub fn chern_classes(table: &BettiTable, shift: i32) -> Vec<i64> {
    // c_t = prod (1 - a t)^{±1} over summands S(-a), truncated at t^4
    let mut c = vec![1i64, 0, 0, 0, 0];
    for (&(step, d), &rank) in &table.entries {
        let a = (d - shift) as i64;
        for _ in 0..rank {
            if step % 2 == 0 {
                for k in (1..5).rev() {
                    c[k] -= a * c[k - 1];
                }
            } else {
                // divide by (1 - a t)
                for k in 1..5 {
                    c[k] += a * c[k - 1];
                }
            }
        }
    }
    c[1..].to_vec()
}

/// The three draws of a general map `3 O(-5) -> E`: random constant
/// combinations of the degree-5 generators.
pub fn random_map<R: Rng + ?Sized>(ring: &Ring, e: &GradedModule, rng: &mut R) -> Result<GradedMatrix> {
    let gens = e.generators();
    let p = ring.characteristic();
    let cols: Vec<Vector> = (0..3)
        .map(|_| {
            let polys: Vec<Polynomial> = gens
                .twists
                .iter()
                .map(|&t| if t == 5 { ring.constant(rng.gen_range(0..p) as i64) } else { Polynomial::zero() })
                .collect();
            Vector::from_polys(&polys)
        })
        .collect();
    GradedMatrix::new(gens.clone(), FreeModule::new(vec![5, 5, 5]), cols)
}

/// The ideal of the degeneracy locus of `f : 3 O(-5) -> E`.
pub fn degeneracy_ideal(ring: &Ring, e: &GradedModule, f: &GradedMatrix) -> Result<Ideal> {
    let pres = e.presentation.concat_cols(f)?;
    let (ideal, twist) = module_to_ideal(ring, &GradedModule::coker(pres))?;
    if twist != 0 {
        return Err(Error::Degenerate(format!("cokernel embeds with twist {twist}")));
    }
    Ok(ideal)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MonadOptions {
    /// Replace the first draw of `f` by a rank-one map, to exercise the
    /// retry path.
    pub degenerate_first_draw: bool,
}

#[derive(Debug)]
pub struct MonadArtifacts {
    pub m: GradedModule,
    pub f2: GradedMatrix,
    pub phi: GradedMatrix,
    pub n: GradedModule,
    pub psi: Vector,
    pub k: KData,
    pub e: GradedModule,
    pub psi_prime: Vector,
    pub f_rank3: GradedModule,
    pub f: GradedMatrix,
    pub ix: Ideal,
}

impl MonadArtifacts {
    /// Stage outputs as `(file name, contents)`.
    pub fn files(&self, ring: &Ring) -> Vec<(String, String)> {
        vec![
            ("M.mat".into(), format_matrix(ring, &self.m.presentation)),
            ("f2.mat".into(), format_matrix(ring, &self.f2)),
            ("phi.mat".into(), format_matrix(ring, &self.phi)),
            ("N.mat".into(), format_matrix(ring, &self.n.presentation)),
            ("K.mat".into(), format_matrix(ring, &self.k.gens)),
            ("E.mat".into(), format_matrix(ring, &self.e.presentation)),
            ("F.mat".into(), format_matrix(ring, &self.f_rank3.presentation)),
            ("f.mat".into(), format_matrix(ring, &self.f)),
            ("X.ideal".into(), format_ideal(ring, self.ix.gens())),
        ]
    }
}

pub struct MonadRun {
    pub artifacts: MonadArtifacts,
    pub report: ConstructionReport,
    pub cohomology: IdealCohomology,
}

fn rank_of(res: &Resolution) -> i64 {
    res.rank()
}

/// Runs the whole construction and its verification.
pub fn monad_pipeline(seed: u64, p: u32) -> Result<MonadRun> {
    monad_pipeline_with(seed, p, MonadOptions::default())
}

pub fn monad_pipeline_with(seed: u64, p: u32, opts: MonadOptions) -> Result<MonadRun> {
    let ring = Ring::p4(p)?;
    let r = &ring;
    let mut rep = ConstructionReport::new("monad", seed, p);

    let t = Instant::now();
    let (m, mres) = build_m(r)?;
    rep.check("M", "Betti table", expected_betti_m(), mres.betti_table()?);
    let mh = HilbertData::from_basis(&groebner::buchberger(r, m.generators(), m.presentation.cols())?);
    rep.check("M", "Hilbert function", vec![1, 2, 1, 0], (0..4).map(|d| mh.function(d)).collect());
    rep.check("M", "resolution length", 5, mres.len());
    let f2 = data::f2(r)?;
    let f1 = koszul_f1(r)?;
    rep.check_true("M", "f1 f2 = 0", f1.compose(r, &f2)?.is_zero());
    let im_f2 = groebner::buchberger(r, &f2.target, f2.cols())?;
    let syz1 = resolve::kernel(r, &f1)?;
    rep.check_true("M", "f2 generates the second syzygies", syz1.cols().iter().all(|v| im_f2.contains(v).unwrap_or(false)));
    let coker_f2 = resolve::minimal_free_resolution(r, &GradedModule::coker(f2.clone()), 6)?;
    rep.check("M", "rank of B", 6, f2.nrows() as i64 - rank_of(&coker_f2));
    rep.time("M", t.elapsed());

    let t = Instant::now();
    let phi = data::phi(r)?;
    let (n, nres) = build_n(r)?;
    rep.check("N", "Betti table", expected_betti_n(), nres.betti_table()?);
    let nh = HilbertData::from_basis(&groebner::buchberger(r, n.generators(), n.presentation.cols())?);
    rep.check("N", "finite length", 0, nh.krull_dim);
    rep.check("N", "Hilbert function begins", vec![1, 4], vec![nh.function(2), nh.function(3)]);
    rep.time("N", t.elapsed());

    let t = Instant::now();
    let k = build_k(r)?;
    rep.check_true("K", "S(-4) in the syzygies of phi f2", k.syz.source.twists.contains(&4));
    let pf = phi.compose(r, &f2)?;
    rep.check_true("K", "psi is a syzygy", pf.apply(r, &data::psi(r)).is_zero());
    rep.check_true("K", "psi is a minimal generator", k.psi_minimal);
    rep.check("K", "generator twists", vec![4, 5, 5, 5, 5, 5, 5, 5, 5, 6, 6, 6, 6], k.gens.source.twists.clone());
    let kres = resolve::minimal_free_resolution(r, &GradedModule::coker(k.relations.clone()), 6)?;
    rep.check("K", "Betti table", expected_betti_k(), kres.betti_table()?);
    rep.check("K", "rank", 5, rank_of(&kres));
    rep.check_true("K", "psi spans a subbundle", spans_subbundle(r, &[data::psi(r)])?);
    rep.time("K", t.elapsed());

    let t = Instant::now();
    let e = build_e(r, &k)?;
    let eres = resolve::minimal_free_resolution(r, &e, 6)?;
    rep.check("E", "Betti table", expected_betti_e(), eres.betti_table()?);
    rep.check("E", "rank", 4, rank_of(&eres));
    rep.time("E", t.elapsed());

    let t = Instant::now();
    rep.check_true("F", "psi' is a syzygy", pf.apply(r, &data::psi_prime(r)).is_zero());
    rep.check_true("F", "psi' is a minimal generator", k.psi_prime_minimal);
    rep.check_true("F", "psi, psi' span a subbundle", spans_subbundle(r, &[data::psi(r), data::psi_prime(r)])?);
    let f_rank3 = build_f(r, &k)?;
    let fres = resolve::minimal_free_resolution(r, &f_rank3, 6)?;
    rep.check("F", "rank", 3, rank_of(&fres));
    let chern = chern_classes(&fres.betti_table()?, 5);
    rep.check("F", "Chern classes of F(5)", vec![5, 12, 12], chern[..3].to_vec());
    rep.time("F", t.elapsed());

    let t = Instant::now();
    let mut found = None;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = stage_rng(seed, p, "monad/f", attempt);
        let mut f = random_map(r, &e, &mut rng)?;
        if opts.degenerate_first_draw && attempt == 0 {
            let c = f.col(0).clone();
            f = GradedMatrix::new(f.target.clone(), f.source.clone(), vec![c.clone(), c.clone(), c])?;
        }
        let ix = match degeneracy_ideal(r, &e, &f) {
            Ok(ix) => ix,
            Err(err) => {
                rep.retry("f", attempt, err.to_string());
                continue;
            }
        };
        let dim = ix.hilbert().projective_dim();
        if dim != 2 {
            rep.retry("f", attempt, format!("degeneracy locus has dimension {dim}"));
            continue;
        }
        let cert = ideal::smoothness_certificate(&ix, 2)?;
        if cert.verdict != Verdict::Smooth {
            rep.retry("f", attempt, format!("degeneracy locus is not smooth: {:?}", cert.verdict));
            continue;
        }
        found = Some((f, ix, cert));
        break;
    }
    let Some((f, ix, cert)) = found else {
        rep.check_true("X", "a general map gives a smooth surface", false);
        return Err(Error::Construction(format!(
            "no smooth degeneracy locus in {MAX_ATTEMPTS} draws:\n{}",
            rep.to_text()
        )));
    };
    rep.check("X", "smoothness verdict", Verdict::Smooth, cert.verdict);
    rep.time("f", t.elapsed());

    let t = Instant::now();
    let coh = IdealCohomology::new(&ix)?;
    let betti = coh.resolution.betti_table()?;
    rep.check("X", "Betti table of I_X", expected_betti_ix(), betti.clone());
    rep.set_betti(&betti);
    verify_surface(&mut rep, "X", &coh)?;
    let table = coh.table(-1, 3);
    rep.check("X", "cohomology table", expected_cohomology(), table.clone());
    rep.cohomology = Some(table);
    let h2 = cohomology::hartshorne_rao(&coh, 2);
    rep.check("X", "Hilbert function of H^2_* I_X equals that of M", vec![1, 2, 1], h2.values());
    rep.check("X", "H^2_* I_X generated in degree 0", vec![(0, 1)], h2.generators.clone());
    let h1 = cohomology::hartshorne_rao(&coh, 1);
    rep.check("X", "H^1_* I_X generators", vec![(2, 1)], h1.generators.clone());
    rep.check_true("X", "H^1_* I_X monogeneous", h1.is_monogeneous());
    rep.check("X", "H^1_* I_X values in degrees 2, 3", vec![1, 4], h1.values()[..2.min(h1.values().len())].to_vec());
    // omega_X = Ext^1(I_X, S(-5))~; its three sections generate it
    let omega = coh.sheaf.ext(1);
    rep.check("X", "h^0 omega_X", 3, omega.dim(0));
    rep.check_true("X", "omega_X generated by its sections", omega.sheaf_generated_in(0)?);
    rep.time("X", t.elapsed());

    // the Remark route: X as the dependency locus of two sections of F
    let t = Instant::now();
    let mut rng = stage_rng(seed, p, "monad/F-sections", 0);
    let two = random_map(r, &f_rank3, &mut rng)?.select_cols(&[0, 1]);
    let remark = degeneracy_ideal(r, &f_rank3, &two)
        .and_then(|i| Ok(cohomology::ideal_as_module(r, &i)?.1.betti_table()?));
    match remark {
        Ok(b) => rep.check("F", "dependency locus of two sections of F", expected_betti_ix(), b),
        Err(err) => rep.check("F", "dependency locus of two sections of F", "computed".to_string(), err.to_string()),
    };
    rep.time("F-locus", t.elapsed());

    let artifacts = MonadArtifacts { m, f2, phi, n, psi: data::psi(r), k, e, psi_prime: data::psi_prime(r), f_rank3, f, ix: coh.ideal.clone() };
    Ok(MonadRun { artifacts, report: rep, cohomology: coh })
}

/// Expected invariants of the surfaces of both pipelines.
pub const ELLIPTIC: hilbert::SurfaceInvariants =
    hilbert::SurfaceInvariants { d: 12, pi: 13, chi: 3, pg: 3, q: 1, k2: 0, s: 2 };

/// The checks shared by every surface built here: invariants, the formula
/// suite and Riemann-Roch against the cohomology table.
pub fn verify_surface(rep: &mut ConstructionReport, stage: &str, coh: &IdealCohomology) -> Result<hilbert::SurfaceInvariants> {
    let inv = cohomology::surface_invariants(coh)?;
    rep.check(stage, "invariants (d, pi, chi, p_g, q, K^2)", (12, 13, 3, 3, 1, 0), (inv.d, inv.pi, inv.chi, inv.pg, inv.q, inv.k2));
    rep.check(stage, "h^0 I(5)", 5, coh.h(0, 5));
    verify_formulas(rep, stage, coh, &inv);
    rep.invariants = Some(inv);
    Ok(inv)
}

/// Double point formula, `chi = p_g - q + 1`, speciality both ways, and
/// `chi(I(j)) = sum (-1)^i h^i(I(j))` for `-1 <= j <= 5`.
pub fn verify_formulas(rep: &mut ConstructionReport, stage: &str, coh: &IdealCohomology, inv: &hilbert::SurfaceInvariants) {
    rep.check(stage, "double point residual", 0, hilbert::double_point_residual(inv.d, inv.pi, inv.chi, inv.k2));
    rep.check(stage, "chi = p_g - q + 1", inv.chi, inv.pg - inv.q + 1);
    rep.check(stage, "speciality: formula vs h^2 I(1)", inv.speciality_formula(), inv.s);
    let table = coh.table(-1, 5);
    let rr: Vec<i64> = (-1..=5).map(|j| hilbert::rr_chi_ideal(j as i64, inv.d, inv.pi, inv.q, inv.pg)).collect();
    let alt: Vec<i64> = (-1..=5).map(|j| table.euler_characteristic(j)).collect();
    rep.check(stage, "Riemann-Roch chi(I(j)), j = -1..5", rr, alt);
    let h4: Vec<usize> = (-4..=5).map(|j| coh.h(4, j)).collect();
    rep.check(stage, "h^4 I(j) = 0 for j >= -4", vec![0; 10], h4);
}
