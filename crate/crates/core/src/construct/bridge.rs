//! The quintics through the monad surface `X` cut out `X ∪ X0` with `X0` a
//! singular cubic scroll in a hyperplane; `X ∪ X0` is linked `(5,5)` to a
//! smooth surface `T` of degree 10.

use std::time::Instant;

use rand::Rng;

use super::random::{stage_rng, MAX_ATTEMPTS};
use super::report::ConstructionReport;
use crate::error::{Error, Result};
use crate::hilbert::{self, SurfaceNumbers};
use crate::ideal::{random_combination, smoothness_certificate, support_line, support_point, Ideal, Verdict};
use crate::linalg::DenseMatrix;
use crate::monomial::Monomial;
use crate::parse::format_ideal;
use crate::poly::{Polynomial, Ring};

/// `(f_1, ..., f_k) : I`, the surface linked to `I` by the complete
/// intersection of the `f_i`.
pub fn link(ci: &[Polynomial], ideal: &Ideal) -> Result<Ideal> {
    let ci = Ideal::new(ideal.ring(), ci.to_vec())?;
    Ok(ci.quotient(ideal).saturate())
}

/// `(d, pi, chi)` of a surface ideal.
pub fn surface_numbers(ideal: &Ideal) -> Result<SurfaceNumbers> {
    hilbert::surface_numbers(&ideal.hilbert())
}

/// Records the degree and genus arithmetic of a link `X ~ X'` by a
/// complete intersection of type `(m, n)`.
pub fn check_link_arithmetic(
    rep: &mut ConstructionReport,
    stage: &str,
    (m, n): (i64, i64),
    x: &SurfaceNumbers,
    y: &SurfaceNumbers,
) {
    rep.check(stage, &format!("linkage ({m},{n}): d + d' = mn"), m * n, x.d + y.d);
    rep.check(
        stage,
        &format!("linkage ({m},{n}): pi - pi' = (m+n-4)(d-d')/2"),
        (m + n - 4) * (x.d - y.d) / 2,
        x.pi - y.pi,
    );
}

/// Runs the Jacobian criterion and records the verdict.
pub fn check_smooth(rep: &mut ConstructionReport, stage: &str, what: &str, ideal: &Ideal) -> Result<bool> {
    let cert = smoothness_certificate(ideal, 2)?;
    Ok(rep.check(stage, &format!("{what} smooth mod p"), Verdict::Smooth, cert.verdict))
}

/// Substitutes `x_i -> images[i]` into `f`.
fn substitute(target: &Ring, f: &Polynomial, images: &[Polynomial]) -> Result<Polynomial> {
    let n = images.len();
    let mut out = Polynomial::zero();
    for &(m, c) in f.terms() {
        let mut t = target.constant(c as i64);
        for (i, e) in m.exponents(n).into_iter().enumerate() {
            t = target.mul(&t, &target.pow(&images[i], e));
        }
        out = target.add(&out, &t)?;
    }
    Ok(out)
}

/// The lines on the surface `V(h0, c)` that miss the line `m`, inside the
/// hyperplane `h0 = 0`. With coordinates `(h0, m1, m2, w1, w2)` where
/// `I_m = (h0, m1, m2)`, such a line is `w = A (m1, m2)` for a 2x2 matrix
/// `A`; the conditions on `A` are the coefficients of `c(s, t, A(s, t))`.
/// Returns the line when exactly one point of `A`-space solves them.
pub fn line_missing<R: Rng + ?Sized>(h0: &Polynomial, c: &Polynomial, m: &Ideal, rng: &mut R) -> Result<Ideal> {
    let ring = *m.ring();
    let k = &ring.field;
    let n = ring.nvars;
    let forms = m.truncate(1).gens().to_vec();
    let coords = |f: &Polynomial| -> Vec<u32> { (0..n).map(|i| f.coefficient(Monomial::var(i))).collect() };
    // complete (h0, m1, m2) to a basis with two random forms
    let mut basis = vec![h0.clone()];
    for f in &forms {
        let mut rows: Vec<Vec<u32>> = basis.iter().map(coords).collect();
        rows.push(coords(f));
        if DenseMatrix::from_rows(rows, n).rank(k) == basis.len() + 1 {
            basis.push(f.clone());
        }
    }
    if basis.len() != 3 {
        return Err(Error::Construction("the line does not lie in the hyperplane".into()));
    }
    while basis.len() < n {
        let f = random_combination(&ring, &ring.vars(), rng)?;
        let mut rows: Vec<Vec<u32>> = basis.iter().map(coords).collect();
        rows.push(coords(&f));
        if DenseMatrix::from_rows(rows, n).rank(k) == basis.len() + 1 {
            basis.push(f);
        }
    }
    // x = T^{-1} y where y = T x are the new coordinates
    let mut aug = DenseMatrix::zeros(n, 2 * n);
    for (i, f) in basis.iter().enumerate() {
        for (j, v) in coords(f).into_iter().enumerate() {
            aug.set(i, j, v);
        }
        aug.set(i, n + i, 1);
    }
    aug.rref(k);
    // variables s, t, a, b, c, d, z of an auxiliary ring
    let big = Ring::new(ring.characteristic(), 7)?;
    let v = |i| big.var(i);
    let y = [
        Polynomial::zero(),
        big.mul(&v(6), &v(0)),
        big.mul(&v(6), &v(1)),
        big.add(&big.mul(&v(2), &v(0)), &big.mul(&v(3), &v(1)))?,
        big.add(&big.mul(&v(4), &v(0)), &big.mul(&v(5), &v(1)))?,
    ];
    let images: Vec<Polynomial> = (0..n)
        .map(|i| big.combination(&(0..n).map(|j| aug.get(i, n + j)).collect::<Vec<_>>(), &y))
        .collect::<Result<_>>()?;
    let on_line = substitute(&big, c, &images)?;
    let mut coefs: std::collections::BTreeMap<(u32, u32), Vec<(Monomial, u32)>> = Default::default();
    for &(mono, coef) in on_line.terms() {
        let e = mono.exponents(7);
        let rest = Monomial::from_exponents(&e[2..]);
        coefs.entry((e[0], e[1])).or_default().push((rest, coef));
    }
    let small = Ring::new(ring.characteristic(), 5)?;
    let eqs = coefs.into_values().map(|t| small.from_terms(t)).collect::<Result<Vec<_>>>()?;
    // drop solutions at infinity (z = 0)
    let mut sol = Ideal::new(&small, eqs)?;
    let z = Ideal::new(&small, vec![small.var(4)])?;
    loop {
        let next = sol.quotient(&z);
        if next == sol {
            break;
        }
        sol = next;
    }
    let p = support_point(&sol.saturate(), rng)?;
    if p[4] == 0 {
        return Err(Error::Construction("no line on the surface misses the given line".into()));
    }
    let zinv = k.inv(p[4]);
    let [a, b, cc, d] = [0, 1, 2, 3].map(|i| k.neg(k.mul(p[i], zinv)));
    let line = Ideal::new(
        &ring,
        vec![
            h0.clone(),
            ring.combination(&[1, a, b], &[basis[3].clone(), basis[1].clone(), basis[2].clone()])?,
            ring.combination(&[1, cc, d], &[basis[4].clone(), basis[1].clone(), basis[2].clone()])?,
        ],
    )?;
    let surface = Ideal::new(&ring, vec![h0.clone(), c.clone()])?;
    if !line.contains_ideal(&surface) || !line.sum(m).saturate().is_unit() {
        return Err(Error::Construction("the line found does not lie on the surface".into()));
    }
    Ideal::new(&ring, line.gb().polynomials())
}

#[derive(Clone, Debug)]
pub struct BridgeArtifacts {
    /// The five quintics through `X` and the saturated ideal they generate.
    pub quintics: Vec<Polynomial>,
    pub j: Ideal,
    pub x0: Ideal,
    /// The hyperplane of `X0`.
    pub h0: Polynomial,
    /// The double line of `X0` and the line `L` on `X0` missing it, the
    /// image of the directrix of the smooth scroll.
    pub double_line: Ideal,
    pub l: Ideal,
    /// The two quintics of the link and the linked surface.
    pub link: Vec<Polynomial>,
    pub t: Ideal,
}

impl BridgeArtifacts {
    pub fn files(&self, ring: &Ring) -> Vec<(String, String)> {
        vec![
            ("X_quintics.ideal".into(), format_ideal(ring, &self.quintics)),
            ("X0.ideal".into(), format_ideal(ring, self.x0.gens())),
            ("X0_double_line.ideal".into(), format_ideal(ring, self.double_line.gens())),
            ("L.ideal".into(), format_ideal(ring, self.l.gens())),
            ("bridge_ci.ideal".into(), format_ideal(ring, &self.link)),
            ("T.ideal".into(), format_ideal(ring, self.t.gens())),
        ]
    }
}

/// From the monad surface `X` to `X0`, `L` and `T`, recording every check
/// under the stage `bridge`.
pub fn bridge_link(ix: &Ideal, seed: u64, rep: &mut ConstructionReport) -> Result<BridgeArtifacts> {
    const STAGE: &str = "bridge";
    let t0 = Instant::now();
    let ring = *ix.ring();
    let r = &ring;
    let ix = ix.saturate();
    let quintics = ix.basis_in_degree(5);
    rep.check(STAGE, "h^0 I_X(5)", 5, quintics.len());
    let j = Ideal::new(r, quintics.clone())?.saturate();
    let jn = surface_numbers(&j)?;
    rep.check(STAGE, "degree of V(H^0 I_X(5))", 15, jn.d);
    if jn.d != 15 {
        return Err(Error::Construction(format!("the quintics through X define a surface of degree {}", jn.d)));
    }

    let x0 = j.quotient(&ix).saturate();
    let x0n = surface_numbers(&x0)?;
    rep.check(STAGE, "degree of X0", 3, x0n.d);
    let linear = x0.basis_in_degree(1);
    rep.check(STAGE, "X0 spans a hyperplane", 1, linear.len());
    let h0 = linear.first().cloned().ok_or_else(|| Error::Construction("X0 is not in a hyperplane".into()))?;
    rep.check_true(STAGE, "J = I_X ∩ I_X0", ix.intersect(&x0) == j);

    let cert = smoothness_certificate(&x0, 2)?;
    rep.check(STAGE, "X0 singular", Verdict::SingularWithLocus, cert.verdict);
    let sing = Ideal::new(r, cert.singular_ideal.clone())?.saturate();
    let mut rng = stage_rng(seed, r.characteristic(), "bridge/line", 0);
    let double_line = support_line(&sing, &mut rng)?;
    rep.check(STAGE, "singular locus of X0 is a line", (1, 0), hilbert::curve_numbers(&double_line.hilbert())?);
    let meet = ix.sum(&double_line).saturate().hilbert();
    rep.check(STAGE, "X meets the double line of X0 in 3 points", (0, 3), (meet.projective_dim(), meet.degree));
    let cubic = x0
        .gens()
        .iter()
        .find(|g| g.degree() == Some(3))
        .cloned()
        .ok_or_else(|| Error::Construction("X0 has no cubic generator".into()))?;
    let l = line_missing(&h0, &cubic, &double_line, &mut rng)?;
    rep.check_true(STAGE, "L lies on X0 and misses the double line", true);
    rep.check_true(STAGE, "X ∩ L = ∅", ix.sum(&l).saturate().is_unit());

    let c0 = ix.sum(&x0).saturate();
    rep.check(STAGE, "(deg, p_a) of X ∩ X0", (12, 13), hilbert::curve_numbers(&c0.hilbert())?);
    let hyper = ix.sum(&Ideal::new(r, vec![h0.clone()])?).saturate();
    rep.check_true(STAGE, "X ∩ X0 = X ∩ H0", hyper == c0);
    rep.time("bridge/X0", t0.elapsed());

    let t0 = Instant::now();
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = stage_rng(seed, r.characteristic(), "bridge/link", attempt);
        let ci = vec![random_combination(r, &quintics, &mut rng)?, random_combination(r, &quintics, &mut rng)?];
        let t = link(&ci, &j)?;
        let tn = match surface_numbers(&t) {
            Ok(n) => n,
            Err(e) => {
                rep.retry(STAGE, attempt, e.to_string());
                continue;
            }
        };
        if smoothness_certificate(&t, 2)?.verdict != Verdict::Smooth {
            rep.retry(STAGE, attempt, "linked surface is singular");
            continue;
        }
        rep.check(STAGE, "T smooth mod p", Verdict::Smooth, Verdict::Smooth);
        rep.check(STAGE, "(d, pi, chi) of T", (10, 10, 4), (tn.d, tn.pi, tn.chi));
        check_link_arithmetic(rep, STAGE, (5, 5), &jn, &tn);
        rep.check_true(STAGE, "linking T back returns X ∪ X0", link(&ci, &t)? == j);
        rep.time("bridge/T", t0.elapsed());
        return Ok(BridgeArtifacts { quintics, j, x0, h0, double_line, l, link: ci, t });
    }
    rep.check_true(STAGE, "a general pair of quintics links to a smooth surface", false);
    Err(Error::Construction(format!("no smooth link in {MAX_ATTEMPTS} draws")))
}
