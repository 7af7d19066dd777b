//! Acceptance run: one PASS/FAIL line per criterion. Expected values are
//! written out here and recomputed from the artifacts rather than read back
//! from the pipeline reports, except where a report assertion is the only
//! record of an intermediate choice.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;

use p4surf::cohomology::{hartshorne_rao, surface_invariants, CohomologyTable, IdealCohomology};
use p4surf::construct::bridge::{bridge_link, link, BridgeArtifacts};
use p4surf::construct::liaison::{liaison_example, liaison_pipeline, LiaisonRun};
use p4surf::construct::monad::{build_m, build_n, monad_pipeline, MonadRun};
use p4surf::construct::ConstructionReport;
use p4surf::groebner::{buchberger, groebner_ideal};
use p4surf::hilbert::{
    binom_poly, curve_numbers, double_point_residual, genus_addition, k2_from_invariants, rr_chi_ideal,
    HilbertData, SurfaceInvariants,
};
use p4surf::ideal::{smoothness_certificate, Ideal, Verdict};
use p4surf::monomial::compare_grevlex;
use p4surf::parse::parse_ideal;
use p4surf::resolve::{minimal_free_resolution, BettiTable, Resolution};
use p4surf::{GradedModule, Monomial, Polynomial, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u32 = 31991;
const SEEDS: [u64; 3] = [1, 2, 3];

type Outcome = Result<(), String>;

struct Runs {
    ring: Ring,
    monad: Vec<MonadRun>,
    bridge: Vec<(BridgeArtifacts, ConstructionReport)>,
    example: LiaisonRun,
    liaison: Vec<LiaisonRun>,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, expected: T, computed: T) -> Outcome {
    ensure(expected == computed, || format!("{what}: expected {expected:?}, computed {computed:?}"))
}

fn ideal(ring: &Ring, text: &str) -> Ideal {
    Ideal::new(ring, parse_ideal(ring, &text.replace(';', "\n")).unwrap()).unwrap()
}

fn same_ideal(a: &Ideal, b: &Ideal) -> bool {
    a.contains_ideal(b) && b.contains_ideal(a)
}

fn rank(res: &Resolution) -> Result<i64, String> {
    let t = res.betti_table().map_err(|e| e.to_string())?;
    Ok((0..=t.length()).map(|i| if i % 2 == 0 { t.total(i) as i64 } else { -(t.total(i) as i64) }).sum())
}

fn table(shape: &[(usize, &[(i32, usize)])]) -> BettiTable {
    BettiTable::from_shape(shape)
}

/// The tail shared by K, E and I_X.
fn with_tail(first: &[(i32, usize)]) -> BettiTable {
    table(&[(0, first), (1, &[(6, 2), (7, 10), (8, 3)]), (2, &[(8, 4), (9, 5)]), (3, &[(10, 2)])])
}

fn expected_cohomology() -> CohomologyTable {
    let mut entries = BTreeMap::new();
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

fn smooth(i: &Ideal) -> Outcome {
    let cert = smoothness_certificate(i, 2).map_err(|e| e.to_string())?;
    eq("smoothness verdict", Verdict::Smooth, cert.verdict)
}

fn c1(runs: &Runs) -> Outcome {
    let (_, res) = build_m(&runs.ring).map_err(|e| e.to_string())?;
    let expected = table(&[
        (0, &[(0, 1)]),
        (1, &[(1, 3), (2, 2)]),
        (2, &[(2, 3), (3, 6), (4, 1)]),
        (3, &[(3, 1), (4, 6), (5, 3)]),
        (4, &[(5, 2), (6, 3)]),
        (5, &[(7, 1)]),
    ]);
    eq("Betti table of M", expected, res.betti_table().map_err(|e| e.to_string())?)
}

fn c2(runs: &Runs) -> Outcome {
    let (_, res) = build_n(&runs.ring).map_err(|e| e.to_string())?;
    let expected = table(&[
        (0, &[(2, 1)]),
        (1, &[(3, 1), (4, 5)]),
        (2, &[(5, 7), (6, 7)]),
        (3, &[(6, 2), (7, 11), (8, 3)]),
        (4, &[(8, 4), (9, 5)]),
        (5, &[(10, 2)]),
    ]);
    eq("Betti table of N", expected, res.betti_table().map_err(|e| e.to_string())?)
}

fn c3(runs: &Runs) -> Outcome {
    let r = &runs.ring;
    for run in &runs.monad {
        let a = &run.artifacts;
        let k = minimal_free_resolution(r, &GradedModule::coker(a.k.relations.clone()), 6).map_err(|e| e.to_string())?;
        let e = minimal_free_resolution(r, &a.e, 6).map_err(|e| e.to_string())?;
        let ix = &run.cohomology.resolution;
        let bt = |res: &Resolution| res.betti_table().map_err(|e| e.to_string());
        eq("Betti table of K", with_tail(&[(4, 1), (5, 8), (6, 4)]), bt(&k)?)?;
        eq("Betti table of E", with_tail(&[(5, 8), (6, 4)]), bt(&e)?)?;
        eq("Betti table of I_X", with_tail(&[(5, 5), (6, 4)]), bt(ix)?)?;
        eq("ranks of K, E, I_X", (5, 4, 1), (rank(&k)?, rank(&e)?, rank(ix)?))?;
    }
    Ok(())
}

const ELLIPTIC: SurfaceInvariants = SurfaceInvariants { d: 12, pi: 13, chi: 3, pg: 3, q: 1, k2: 0, s: 2 };

fn c4(runs: &Runs) -> Outcome {
    for run in &runs.monad {
        let s = run.report.seed;
        let ix = &run.artifacts.ix;
        smooth(ix).map_err(|e| format!("seed {s}: {e}"))?;
        let inv = surface_invariants(&run.cohomology).map_err(|e| e.to_string())?;
        eq(&format!("seed {s} invariants"), ELLIPTIC, inv)?;
        eq(&format!("seed {s} h^0 I_X(5)"), 5, ix.dim_in_degree(5))?;
        eq(&format!("seed {s} cohomology table"), expected_cohomology(), run.cohomology.table(-1, 3))?;
        ensure(run.report.verdict, || format!("seed {s}: report verdict fail"))?;
    }
    let ideals: Vec<_> = runs.monad.iter().map(|r| r.artifacts.ix.clone()).collect();
    ensure(!same_ideal(&ideals[0], &ideals[1]) && !same_ideal(&ideals[1], &ideals[2]), || {
        "seeds gave the same surface".into()
    })
}

fn c5(runs: &Runs) -> Outcome {
    let (m, _) = build_m(&runs.ring).map_err(|e| e.to_string())?;
    let gb = buchberger(&runs.ring, m.generators(), m.presentation.cols()).map_err(|e| e.to_string())?;
    let hm = HilbertData::from_basis(&gb);
    let hf_m: Vec<i64> = (0..3).map(|d| hm.function(d)).collect();
    for run in &runs.monad {
        let h2 = hartshorne_rao(&run.cohomology, 2);
        let h2v: Vec<i64> = h2.values().iter().map(|&v| v as i64).collect();
        eq("H^2_* I_X", vec![1, 2, 1], h2v.clone())?;
        eq("H^2_* I_X vs M", hf_m.clone(), h2v)?;
        let h1 = hartshorne_rao(&run.cohomology, 1);
        ensure(h1.is_monogeneous(), || "H^1_* I_X is not monogeneous".into())?;
        eq("H^1_* I_X generator", vec![(2, 1)], h1.generators.clone())?;
        eq("H^1_* I_X values", vec![1, 4], h1.values()[..2].to_vec())?;
    }
    Ok(())
}

fn c6(runs: &Runs) -> Outcome {
    let r = &runs.ring;
    for ((art, rep), run) in runs.bridge.iter().zip(&runs.monad) {
        let s = rep.seed;
        let ix = &run.artifacts.ix;
        let j = Ideal::new(r, ix.basis_in_degree(5)).map_err(|e| e.to_string())?.saturate();
        let x0 = j.quotient(ix).saturate();
        ensure(same_ideal(&x0, &art.x0), || format!("seed {s}: residual differs from the bridge's X0"))?;
        let h = x0.hilbert();
        eq(&format!("seed {s} residual (dim, deg, linear forms)"), (2, 3, 1), (h.projective_dim(), h.degree, x0.dim_in_degree(1)))?;
        ensure(art.link.len() == 2 && art.link.iter().all(|g| g.degree() == Some(5)), || "link is not (5,5)".into())?;
        let t = link(&art.link, &ix.intersect(&x0)).map_err(|e| e.to_string())?;
        ensure(same_ideal(&t, &art.t), || format!("seed {s}: T differs"))?;
        let n = p4surf::hilbert::surface_numbers(&t.hilbert()).map_err(|e| e.to_string())?;
        eq(&format!("seed {s} (d, pi, chi) of T"), (10, 10, 4), (n.d, n.pi, n.chi))?;
        smooth(&t).map_err(|e| format!("seed {s} T: {e}"))?;
        let curve = ix.sum(&x0).saturate();
        eq(&format!("seed {s} X ∩ X0"), (12, 13), curve_numbers(&curve.hilbert()).map_err(|e| e.to_string())?)?;
        ensure(ix.sum(&art.l).saturate().is_unit(), || format!("seed {s}: X meets L"))?;
        ensure(rep.failures().is_empty(), || format!("seed {s}: {:?}", rep.failures()))?;
    }
    Ok(())
}

fn report_ok(rep: &ConstructionReport, stage: &str, name: &str) -> Outcome {
    let a = rep
        .assertions
        .iter()
        .find(|a| a.stage == stage && a.name == name)
        .ok_or_else(|| format!("no assertion {stage}/{name}"))?;
    ensure(a.pass, || format!("{stage}/{name}: expected {}, computed {}", a.expected, a.computed))
}

fn c7(runs: &Runs) -> Outcome {
    let ex = &runs.example.artifacts;
    eq("example h^0 I_{U0 ∪ D}(3)", 3, ex.u0.intersect(&ex.d).dim_in_degree(3))?;
    eq("example h^0 I_{U1 ∪ U0 ∪ D2}(4)", 5, ex.u1.intersect(&ex.u0).intersect(&ex.d2).dim_in_degree(4))?;
    eq("example final invariants", ELLIPTIC, surface_invariants(&runs.example.cohomology).map_err(|e| e.to_string())?)?;
    for run in &runs.liaison {
        let s = run.report.seed;
        let a = &run.artifacts;
        let w = |what: &str| format!("seed {s} {what}");
        eq(&w("h^0 I_T(4)"), 3, a.t.dim_in_degree(4))?;
        let tc = IdealCohomology::new(&a.t).map_err(|e| e.to_string())?;
        eq(&w("h^1 I_T(4)"), 1, tc.h(1, 4))?;
        // h0 is in I_D, so (I_D)_2 contains the five multiples h0 * x_i.
        eq(&w("h^0 I_{D,H0}(2)"), 2, a.d.dim_in_degree(2) - 5)?;
        eq(&w("h^0 I_Y(5)"), 5, a.y.dim_in_degree(5))?;
        report_ok(&run.report, "Y", "h^0 I_{Y ∩ H, H}(5) for general H ⊃ L")?;
        let hc = a.c1.hilbert();
        let pm: Vec<i64> = (0..5).map(|m| hc.polynomial(m)).collect();
        eq(&w("C1 Hilbert polynomial"), (1, vec![3, 9, 15, 21, 27]), (hc.projective_dim(), pm))?;
        let meet = a.c1.sum(&a.d).saturate().hilbert();
        eq(&w("C1 ∩ D"), (0, 12), (meet.projective_dim(), meet.degree))?;
        let inv = surface_invariants(&run.cohomology).map_err(|e| e.to_string())?;
        eq(&w("final (d, pi, chi, p_g, q, K^2)"), (12, 13, 3, 3, 1, 0), (inv.d, inv.pi, inv.chi, inv.pg, inv.q, inv.k2))?;
        smooth(&a.x).map_err(|e| w(&e))?;
        ensure(run.report.verdict, || w(&format!("{:?}", run.report.failures())))?;
    }
    ensure(runs.example.report.verdict, || format!("example: {:?}", runs.example.report.failures()))
}

fn c8(runs: &Runs) -> Outcome {
    for run in runs.liaison.iter().chain(std::iter::once(&runs.example)) {
        let y = &run.artifacts.y;
        let quintics = Ideal::new(&runs.ring, y.basis_in_degree(5)).map_err(|e| e.to_string())?;
        eq("quintics through Y", 5, quintics.gens().len())?;
        ensure(same_ideal(&quintics.saturate(), y), || format!("seed {}: Y is not cut out by quintics", run.report.seed))?;
    }
    Ok(())
}

/// K^2 from (d, pi, chi), the double point formula, chi = p_g - q + 1 and Riemann-Roch
/// on a surface with known K^2.
fn formula_suite(name: &str, i: &Ideal, k2: i64) -> Outcome {
    let coh = IdealCohomology::new(i).map_err(|e| e.to_string())?;
    let inv = surface_invariants(&coh).map_err(|e| format!("{name}: {e}"))?;
    let w = |what: &str| format!("{name} {what}");
    eq(&w("K^2"), k2, k2_from_invariants(inv.d, inv.pi, inv.chi).map_err(|e| e.to_string())?)?;
    eq(&w("double point residual"), 0, double_point_residual(inv.d, inv.pi, inv.chi, k2))?;
    eq(&w("chi = p_g - q + 1"), inv.chi, inv.pg - inv.q + 1)?;
    let h = i.hilbert();
    let t = coh.table(-1, 5);
    for j in -1..=5i64 {
        let from_hp = binom_poly(j + 4, 4) - h.polynomial(j);
        eq(&w(&format!("chi(I({j})) by cohomology")), from_hp, t.euler_characteristic(j as i32))?;
        eq(&w(&format!("chi(I({j})) by Riemann-Roch")), from_hp, rr_chi_ideal(j, inv.d, inv.pi, inv.q, inv.pg))?;
    }
    Ok(())
}

fn c9(runs: &Runs) -> Outcome {
    let r = &runs.ring;
    formula_suite("plane", &ideal(r, "x0;x1"), 9)?;
    formula_suite("cubic surface", &ideal(r, "x4;x0^3+x1^3+x2^3+x3^3"), 3)?;
    for run in &runs.monad {
        formula_suite(&format!("monad X seed {}", run.report.seed), &run.artifacts.ix, 0)?;
    }
    for (art, rep) in &runs.bridge {
        formula_suite(&format!("bridge T seed {}", rep.seed), &art.t, 4)?;
    }
    for run in runs.liaison.iter().chain(std::iter::once(&runs.example)) {
        formula_suite(&format!("liaison X seed {}", run.report.seed), &run.artifacts.x, 0)?;
        formula_suite(&format!("liaison T seed {}", run.report.seed), &run.artifacts.t, 4)?;
    }
    // Genus of a union of curves with known intersection numbers.
    let curve = |i: &Ideal| curve_numbers(&i.hilbert()).map_err(|e| e.to_string());
    let l1 = ideal(r, "x0;x1;x2");
    for (name, other, dot) in [
        ("skew lines", ideal(r, "x2;x3;x4"), 0),
        ("meeting lines", ideal(r, "x0;x1;x3"), 1),
    ] {
        let (_, pa) = curve(&l1.intersect(&other))?;
        eq(name, genus_addition(0, 0, dot), pa)?;
    }
    let conic = ideal(r, "x3;x4;x0*x1-x2^2");
    let line = ideal(r, "x2;x3;x4");
    eq("conic and secant line", genus_addition(0, 0, 2), curve(&conic.intersect(&line))?.1)?;
    for run in &runs.liaison {
        let three = genus_addition(genus_addition(0, 0, 0), 0, 0);
        eq("three disjoint conics", (6, three), curve(&run.artifacts.c1)?)?;
    }
    Ok(())
}

fn c10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut instances = 0;
    for k in 0..240 {
        let ring = Ring::new(7919, 2 + k % 2).unwrap();
        let i = common::random_forms(&ring, rng.gen_range(1..=3), 4, &mut rng);
        let j = common::random_forms(&ring, rng.gen_range(1..=2), 3, &mut rng);
        let ok = match k % 4 {
            0 => {
                let f = if rng.gen_bool(0.5) {
                    common::random_poly(&ring, rng.gen_range(1..=5), 6, &mut rng)
                } else {
                    ring.mul(&i[0], &j[0])
                };
                common::agree_membership(&ring, &i, &f)
            }
            1 => common::agree_quotient(&ring, &i, &j),
            2 => common::agree_saturation(&ring, &i),
            _ => common::agree_intersection(&ring, &i, &j),
        };
        ensure(ok, || format!("oracle disagreement on instance {k}: I = {i:?}, J = {j:?}"))?;
        instances += 1;
    }
    eq("oracle instances", 240, instances)?;

    for _ in 0..1000 {
        let e = |rng: &mut ChaCha8Rng| (0..5).map(|_| rng.gen_range(0..6)).collect::<Vec<u32>>();
        let (a, b, c) = (e(&mut rng), e(&mut rng), e(&mut rng));
        let ab = compare_grevlex(&a, &b).unwrap();
        let ac: Vec<u32> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
        let bc: Vec<u32> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
        eq("grevlex multiplicativity", ab, compare_grevlex(&ac, &bc).unwrap())?;
        let (ma, mb, mc) = (Monomial::from_exponents(&a), Monomial::from_exponents(&b), Monomial::from_exponents(&c));
        eq("packed grevlex", ab, ma.mul(mc).cmp_grevlex(mb.mul(mc)))?;
    }

    let ring = Ring::new(7919, 3).unwrap();
    for _ in 0..1000 {
        let fs = common::random_forms(&ring, rng.gen_range(1..=3), 3, &mut rng);
        let base = groebner_ideal(&ring, &fs).unwrap().polynomials();
        let mut other: Vec<Polynomial> = fs.iter().map(|f| ring.scale(rng.gen_range(1..7919), f)).collect();
        let shift = rng.gen_range(0..other.len());
        other.rotate_left(shift);
        let extra = ring.mul(&common::random_poly(&ring, 1, 3, &mut rng), &fs[0]);
        other.push(extra);
        eq("reduced basis after shuffling", &base, &groebner_ideal(&ring, &other).unwrap().polynomials())?;
    }
    Ok(())
}

fn c11(runs: &Runs) -> Outcome {
    let again = monad_pipeline(1, P).map_err(|e| e.to_string())?;
    ensure(again.report.to_json() == runs.monad[0].report.to_json(), || "monad report differs on rerun".into())?;
    let again = liaison_pipeline(1, P).map_err(|e| e.to_string())?;
    ensure(again.report.to_json() == runs.liaison[0].report.to_json(), || "liaison report differs on rerun".into())
}

fn build() -> Result<Runs, String> {
    let ring = Ring::p4(P).map_err(|e| e.to_string())?;
    let mut monad = Vec::new();
    let mut bridge = Vec::new();
    for seed in SEEDS {
        let run = monad_pipeline(seed, P).map_err(|e| format!("monad seed {seed}: {e}"))?;
        let mut rep = run.report.clone();
        let art = bridge_link(&run.artifacts.ix, seed, &mut rep).map_err(|e| format!("bridge seed {seed}: {e}"))?;
        bridge.push((art, rep));
        monad.push(run);
    }
    let example = liaison_example(1, P).map_err(|e| format!("liaison example: {e}"))?;
    let liaison = SEEDS
        .iter()
        .map(|&s| liaison_pipeline(s, P).map_err(|e| format!("liaison seed {s}: {e}")))
        .collect::<Result<_, _>>()?;
    Ok(Runs { ring, monad, bridge, example, liaison })
}

fn main() -> ExitCode {
    let titles = [
        "Betti table of M",
        "Betti table of N",
        "Betti tables and ranks of K, E, I_X",
        "monad surface: smooth, invariants, h^0 I_X(5), cohomology table (3 seeds)",
        "Hartshorne-Rao modules",
        "bridge link to T",
        "liaison pipeline: example counts and random seeds",
        "Y cut out by its quintics",
        "formula suite",
        "oracle suite",
        "determinism of JSON reports",
    ];
    let runs = build();
    let mut failed = 0;
    for (k, title) in titles.iter().enumerate() {
        // The oracle suite does not depend on the pipeline runs.
        let outcome = match (k, &runs) {
            (9, _) => c10(),
            (_, Err(e)) => Err(e.clone()),
            (_, Ok(r)) => {
                let checks: [fn(&Runs) -> Outcome; 11] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, |_| Ok(()), c11];
                checks[k](r)
            }
        };
        match outcome {
            Ok(()) => println!("PASS {:>2}  {title}", k + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2}  {title}: {e}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
