//! Homogeneous ideals and the operations the constructions need: sums,
//! intersections, quotients, saturation, random elements, re-embedding a
//! rank-one module as an ideal, and the Jacobian smoothness test.

use std::sync::OnceLock;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{self, GroebnerBasis};
use crate::hilbert::HilbertData;
use crate::linalg::DenseMatrix;
use crate::module::{FreeModule, GradedMatrix, GradedModule, Vector};
use crate::poly::{Polynomial, Ring};
use crate::resolve;

#[derive(Debug)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
    saturated: bool,
    gb: OnceLock<GroebnerBasis>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(b) = self.gb.get() {
            let _ = gb.set(b.clone());
        }
        Ideal { ring: self.ring, gens: self.gens.clone(), saturated: self.saturated, gb }
    }
}

impl PartialEq for Ideal {
    /// Equality as ideals, decided by reduced Groebner bases.
    fn eq(&self, other: &Ideal) -> bool {
        self.gb().polynomials() == other.gb().polynomials()
    }
}

impl Ideal {
    /// The ideal generated by `gens`; zero generators are dropped.
    pub fn new(ring: &Ring, gens: Vec<Polynomial>) -> Result<Ideal> {
        for g in &gens {
            if g.terms().iter().any(|t| Some(t.0.degree()) != g.degree()) {
                return Err(Error::Degree("ideal generators must be homogeneous".into()));
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ring: *ring, gens, saturated: false, gb: OnceLock::new() })
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Ideal { ring: *ring, gens: vec![], saturated: true, gb: OnceLock::new() }
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Ideal { ring: *ring, gens: vec![ring.one()], saturated: true, gb: OnceLock::new() }
    }

    /// The irrelevant ideal `(x0, ..., x{n-1})`.
    pub fn maximal(ring: &Ring) -> Ideal {
        Ideal::new(ring, ring.vars()).unwrap()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Set once saturation has been computed or verified.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn gb(&self) -> &GroebnerBasis {
        self.gb.get_or_init(|| {
            groebner::groebner_ideal(&self.ring, &self.gens).expect("generators are homogeneous")
        })
    }

    pub fn is_unit(&self) -> bool {
        self.gb().is_unit_ideal()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.gb().contains_poly(f).expect("homogeneous polynomial")
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    /// `dim (S/I)_d`.
    pub fn quotient_dim(&self, d: i32) -> usize {
        self.gb().hilbert_function(d)
    }

    /// `dim I_d`.
    pub fn dim_in_degree(&self, d: i32) -> usize {
        self.gb().submodule_dim(d)
    }

    /// Hilbert series data of `S / I`.
    pub fn hilbert(&self) -> HilbertData {
        HilbertData::from_basis(self.gb())
    }

    /// A basis of the degree-`d` piece.
    pub fn basis_in_degree(&self, d: i32) -> Vec<Polynomial> {
        self.gb().basis_in_degree(d).iter().map(|v| v.component(0)).collect()
    }

    /// The same ideal with a minimal generating set.
    pub fn mingens(&self) -> Ideal {
        let vecs: Vec<Vector> = self.gens.iter().map(|g| Vector::from_poly(g, 0)).collect();
        let min = groebner::minimal_generators(&self.ring, &FreeModule::new(vec![0]), &vecs)
            .expect("homogeneous generators");
        let mut out = Ideal::new(&self.ring, min.iter().map(|v| v.component(0)).collect()).unwrap();
        out.saturated = self.saturated;
        if let Some(b) = self.gb.get() {
            let _ = out.gb.set(b.clone());
        }
        out
    }

    /// The ideal generated by the degree-`d` piece.
    pub fn truncate(&self, d: i32) -> Ideal {
        Ideal::new(&self.ring, self.basis_in_degree(d)).unwrap()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens).unwrap()
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for f in &self.gens {
            for g in &other.gens {
                gens.push(self.ring.mul(f, g));
            }
        }
        Ideal::new(&self.ring, gens).unwrap().mingens()
    }

    /// `I ∩ J`, as the lower block of the module generated by `(g, g)` for
    /// `g` in `I` and `(h, 0)` for `h` in `J` inside `S ⊕ S`.
    pub fn intersect(&self, other: &Ideal) -> Ideal {
        if self.is_zero() || other.is_zero() {
            return Ideal::zero(&self.ring);
        }
        let module = FreeModule::new(vec![0, 0]);
        let mut gens: Vec<Vector> = self
            .gens
            .iter()
            .map(|g| Vector::from_polys(&[g.clone(), g.clone()]))
            .collect();
        gens.extend(other.gens.iter().map(|h| Vector::from_poly(h, 0)));
        let run = groebner::lower_block(&self.ring, &module, 1, &gens).expect("homogeneous");
        let out = Ideal::new(&self.ring, run.lower.iter().map(|v| v.component(0)).collect()).unwrap();
        out.mingens()
    }

    /// `I : J = { f : f J ⊆ I }`. With `J = (v_1, ..., v_s)` of top degree
    /// `t`, this is the lower block of the module generated by
    /// `(v_1, ..., v_s ; 1)` and `g e_k` inside `⊕ S(deg v_k - t) ⊕ S(-t)`.
    pub fn quotient(&self, other: &Ideal) -> Ideal {
        if other.is_zero() || self.is_unit() {
            return Ideal::unit(&self.ring);
        }
        let r = &self.ring;
        let s = other.gens.len();
        let degs: Vec<i32> = other.gens.iter().map(|v| v.degree().unwrap() as i32).collect();
        let t = *degs.iter().max().unwrap();
        let mut twists: Vec<i32> = degs.iter().map(|d| t - d).collect();
        twists.push(t);
        let module = FreeModule::new(twists);
        let mut first = other.gens.clone();
        first.push(r.one());
        let mut gens = vec![Vector::from_polys(&first)];
        for g in &self.gens {
            for k in 0..s {
                gens.push(Vector::from_poly(g, k));
            }
        }
        let run = groebner::lower_block(r, &module, s as u32, &gens).expect("homogeneous");
        let out = Ideal::new(r, run.lower.iter().map(|v| v.component(0)).collect()).unwrap();
        let mut out = out.mingens();
        if out.gens.is_empty() {
            out = Ideal::zero(r);
            out.saturated = true;
        }
        out
    }

    /// `I : m^∞` for the irrelevant ideal `m`, by iterated quotients.
    pub fn saturate(&self) -> Ideal {
        if self.saturated {
            return self.clone();
        }
        let m = Ideal::maximal(&self.ring);
        let mut cur = self.clone();
        loop {
            if cur.is_zero() || cur.is_unit() {
                cur.saturated = true;
                return cur;
            }
            let next = cur.quotient(&m);
            if next == cur {
                let mut done = cur;
                done.saturated = true;
                return done;
            }
            cur = next;
        }
    }

    /// A random linear combination of a basis of `I_d`.
    pub fn random_element<R: Rng + ?Sized>(&self, d: i32, rng: &mut R) -> Result<Polynomial> {
        let basis = self.basis_in_degree(d);
        if basis.is_empty() {
            return Err(Error::Dimension(format!("the ideal is zero in degree {d}")));
        }
        random_combination(&self.ring, &basis, rng)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| self.ring.format(g)).collect()
    }
}

/// A combination of `basis` with coefficients drawn uniformly from `F_p`.
pub fn random_combination<R: Rng + ?Sized>(
    ring: &Ring,
    basis: &[Polynomial],
    rng: &mut R,
) -> Result<Polynomial> {
    let p = ring.characteristic();
    let coefs: Vec<u32> = basis.iter().map(|_| rng.gen_range(0..p)).collect();
    ring.combination(&coefs, basis)
}

/// Embeds a torsion-free rank-one module `C` into `S` through a
/// minimal-degree element `g` of `Hom(C, S)`. Returns the saturated image
/// ideal `I` and the twist `t` with `C ≅ I(t)`.
pub fn module_to_ideal(ring: &Ring, c: &GradedModule) -> Result<(Ideal, i32)> {
    let pres = resolve::minimal_presentation(ring, c)?;
    let f0 = pres.target.clone();
    if f0.rank() == 0 {
        return Err(Error::Usage("the zero module has no ideal embedding".into()));
    }
    // Hom(C, S) = ker(P^T), as elements of the dual of F0
    let homs = if pres.ncols() == 0 {
        GradedMatrix::identity(&f0.dual())
    } else {
        resolve::kernel(ring, &pres.transpose())?
    };
    if homs.ncols() == 0 {
        return Err(Error::Usage("the module has rank zero".into()));
    }
    let low = *homs.source.twists.iter().min().unwrap();
    let candidates: Vec<usize> = (0..homs.ncols()).filter(|&j| homs.source.twists[j] == low).collect();
    let pres_gb = groebner::buchberger(ring, &f0, pres.cols())?;
    for &j in &candidates {
        let h = homs.col(j);
        let entries = h.to_polys(f0.rank());
        // g is injective on C iff ker(g: F0 -> S) lies in the image of P
        let row = GradedMatrix::from_rows_with_source(
            FreeModule::new(vec![-low]),
            f0.clone(),
            &[entries.clone()],
        )?;
        let ker = resolve::kernel(ring, &row)?;
        let injective = ker.cols().iter().all(|v| pres_gb.contains(v).unwrap_or(false));
        if !injective {
            continue;
        }
        // g has degree `low`, mapping C_d into S_{d + low}
        let ideal = Ideal::new(ring, entries)?;
        return Ok((ideal.saturate(), low));
    }
    Err(Error::Degenerate("no injective homomorphism into S of minimal degree".into()))
}

/// Jacobian matrix rows of `gens`.
pub fn jacobian(ring: &Ring, gens: &[Polynomial]) -> Vec<Vec<Polynomial>> {
    gens.iter().map(|g| (0..ring.nvars).map(|i| ring.derivative(g, i)).collect()).collect()
}

/// All 2x2 minors of the Jacobian of `gens`.
pub fn jacobian_minors_2(ring: &Ring, gens: &[Polynomial]) -> Vec<Polynomial> {
    let jac = jacobian(ring, gens);
    let n = ring.nvars;
    let mut pairs = Vec::new();
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            for i in 0..n {
                for j in i + 1..n {
                    pairs.push((a, b, i, j));
                }
            }
        }
    }
    pairs
        .par_iter()
        .map(|&(a, b, i, j)| {
            let lhs = ring.mul(&jac[a][i], &jac[b][j]);
            let rhs = ring.mul(&jac[a][j], &jac[b][i]);
            ring.sub(&lhs, &rhs).unwrap_or_else(|_| Polynomial::zero())
        })
        .filter(|m| !m.is_zero())
        .collect()
}

/// The point supporting a zero-dimensional scheme concentrated at one
/// point. In a degree `d` where `S/Q` has dimension `k`, multiplication by
/// `x_i / l` acts on `(S/Q)_d` with the single eigenvalue `p_i / l(p)`, so
/// its trace is proportional to `p_i`.
pub fn support_point<R: Rng + ?Sized>(q: &Ideal, rng: &mut R) -> Result<Vec<u32>> {
    let ring = q.ring();
    let k = &ring.field;
    let n = ring.nvars;
    let h = q.hilbert();
    if h.projective_dim() != 0 {
        return Err(Error::Dimension(format!("expected points, found projective dimension {}", h.projective_dim())));
    }
    let len = h.degree as usize;
    if len as u64 % ring.characteristic() as u64 == 0 {
        return Err(Error::Construction("scheme length divisible by the characteristic".into()));
    }
    let gb = q.gb();
    let mut d = gb.degrees().into_iter().max().unwrap_or(0).max(0);
    while q.quotient_dim(d) != len || q.quotient_dim(d + 1) != len {
        d += 1;
    }
    let here = gb.standard_monomials(d);
    let above: std::collections::HashMap<_, _> =
        gb.standard_monomials(d + 1).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    // column j: normal form of g * here[j] in the basis `above`
    let mult = |g: &Polynomial| -> Result<Vec<Vec<u32>>> {
        let mut m = vec![vec![0; len]; len];
        for (j, &u) in here.iter().enumerate() {
            let nf = gb.normal_form_poly(&ring.mul_monomial(g, u, 1))?;
            for &(mono, c) in nf.terms() {
                m[above[&mono]][j] = c;
            }
        }
        Ok(m)
    };
    for _ in 0..8 {
        let l = random_combination(ring, &ring.vars(), rng)?;
        let a = mult(&l)?;
        let bs: Vec<Vec<Vec<u32>>> = (0..n).map(|i| mult(&ring.var(i))).collect::<Result<_>>()?;
        // [A | B_0 | ... | B_{n-1}] reduced gives A^{-1} B_i
        let rows = (0..len)
            .map(|r| {
                let mut row = a[r].clone();
                for b in &bs {
                    row.extend_from_slice(&b[r]);
                }
                row
            })
            .collect();
        let mut m = DenseMatrix::from_rows(rows, len * (n + 1));
        let pivots = m.rref(k);
        if pivots.len() < len || pivots[len - 1] >= len {
            continue;
        }
        let point: Vec<u32> = (0..n)
            .map(|i| (0..len).fold(0, |acc, r| k.add(acc, m.get(r, len * (i + 1) + r))))
            .collect();
        if point.iter().all(|&c| c == 0) {
            continue;
        }
        return Ok(point);
    }
    Err(Error::Construction("no invertible linear form found on the scheme".into()))
}

/// The reduced line `V(J)` when `J` is supported on a line: the span of the
/// points cut by two general hyperplanes, verified by `I_L^k ⊆ J ⊆ I_L`.
pub fn support_line<R: Rng + ?Sized>(j: &Ideal, rng: &mut R) -> Result<Ideal> {
    let ring = j.ring();
    let j = j.saturate();
    if j.hilbert().projective_dim() != 1 {
        return Err(Error::Dimension("expected a one-dimensional scheme".into()));
    }
    let mut points = Vec::new();
    for _ in 0..2 {
        let h = random_combination(ring, &ring.vars(), rng)?;
        let section = j.sum(&Ideal::new(ring, vec![h])?).saturate();
        points.push(support_point(&section, rng)?);
    }
    let forms = DenseMatrix::from_rows(points, ring.nvars).kernel(&ring.field);
    let gens = forms.iter().map(|c| ring.combination(c, &ring.vars())).collect::<Result<Vec<_>>>()?;
    let l = Ideal::new(ring, gens)?;
    if forms.len() != ring.nvars - 2 || !l.contains_ideal(&j) {
        return Err(Error::Construction("the scheme is not supported on a single line".into()));
    }
    let mut power = l.clone();
    for _ in 0..8 {
        if j.contains_ideal(&power) {
            let mut l = l;
            l.saturated = true;
            return Ok(l);
        }
        power = power.product(&l);
    }
    Err(Error::Construction("no power of the line ideal lies in the scheme".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Smooth,
    SingularWithLocus,
    Indeterminate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmoothnessCertificate {
    pub verdict: Verdict,
    pub characteristic: u32,
    pub codim: usize,
    pub generators: usize,
    pub minors: usize,
    /// Degree from which the singular ideal contains every monomial.
    pub m_primary_degree: Option<i32>,
    /// Generators of the saturated singular ideal when it is not `(1)`.
    pub locus: Vec<String>,
    pub note: String,
    #[serde(skip)]
    pub singular_ideal: Vec<Polynomial>,
}

/// Largest degree examined before the verdict is reported as
/// indeterminate.
pub const SMOOTHNESS_DEGREE_CAP: i32 = 60;

/// Jacobian criterion for a scheme of codimension 2 (the only case the
/// constructions need): `I` plus the 2x2 minors of the Jacobian of its
/// generators must saturate to the unit ideal.
pub fn smoothness_certificate(ideal: &Ideal, codim: usize) -> Result<SmoothnessCertificate> {
    let ring = ideal.ring();
    if codim != 2 {
        return Err(Error::Usage("only codimension 2 is supported".into()));
    }
    let expected = ring.nvars as i32 - 1 - codim as i32;
    let h = ideal.hilbert();
    if h.projective_dim() != expected {
        return Err(Error::Dimension(format!(
            "expected projective dimension {expected}, found {}",
            h.projective_dim()
        )));
    }
    let sat = if ideal.is_saturated() { ideal.mingens() } else { ideal.saturate().mingens() };
    let gens = sat.gens().to_vec();
    let minors = jacobian_minors_2(ring, &gens);
    let mut sing = gens.clone();
    sing.extend(minors.iter().cloned());
    let note = format!(
        "Jacobian criterion over F_{}; certifies smoothness of the reduction mod p",
        ring.characteristic()
    );
    let md = groebner::m_primary_degree(ring, &sing, SMOOTHNESS_DEGREE_CAP)?;
    let mut cert = SmoothnessCertificate {
        verdict: Verdict::Smooth,
        characteristic: ring.characteristic(),
        codim,
        generators: gens.len(),
        minors: minors.len(),
        m_primary_degree: md,
        locus: vec![],
        note,
        singular_ideal: sing.clone(),
    };
    if md.is_some() {
        return Ok(cert);
    }
    let j = Ideal::new(ring, sing)?;
    let top = j.gb().degrees().into_iter().max().unwrap_or(0);
    if top > SMOOTHNESS_DEGREE_CAP {
        cert.verdict = Verdict::Indeterminate;
        return Ok(cert);
    }
    let locus = j.saturate();
    if locus.is_unit() {
        return Ok(cert);
    }
    cert.verdict = Verdict::SingularWithLocus;
    cert.locus = locus.mingens().to_strings();
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ideal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring() -> Ring {
        Ring::p4(31991).unwrap()
    }

    fn ideal(r: &Ring, text: &str) -> Ideal {
        Ideal::new(r, parse_ideal(r, &text.replace(';', "\n")).unwrap()).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let r = ring();
        assert_eq!(ideal(&r, "x0").intersect(&ideal(&r, "x1")), ideal(&r, "x0*x1"));
        let p = ideal(&r, "x1; x2; x3; x4");
        let q = ideal(&r, "x0; x2; x3; x4");
        let two = p.intersect(&q);
        let h = two.hilbert();
        assert_eq!(h.projective_dim(), 0);
        assert_eq!(h.polynomial(7), 2);
    }

    #[test]
    fn quotient_examples() {
        let r = ring();
        assert_eq!(ideal(&r, "x0*x1").quotient(&ideal(&r, "x1")), ideal(&r, "x0"));
        let q = ideal(&r, "x0*x2; x0*x3").quotient(&ideal(&r, "x2; x3"));
        assert_eq!(q, ideal(&r, "x0"));
        assert!(ideal(&r, "x0").quotient(&ideal(&r, "x0")).is_unit());
    }

    #[test]
    fn saturation_examples() {
        let r = ring();
        let i = ideal(&r, "x0^2; x0*x1; x0*x2; x0*x3; x0*x4");
        let s = i.saturate();
        assert_eq!(s, ideal(&r, "x0"));
        assert!(s.is_saturated());
        let t = ideal(&r, "x0*x1 - x2*x3; x4^2");
        assert_eq!(t.saturate(), t);
        assert!(ideal(&r, "x0^3; x1; x2; x3; x4^5").saturate().is_unit());
    }

    #[test]
    fn random_elements_are_reproducible() {
        let r = ring();
        let i = ideal(&r, "x0*x1; x2^2");
        let a = i.random_element(3, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = i.random_element(3, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let c = i.random_element(3, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(i.contains(&a));
        assert!(i.random_element(1, &mut ChaCha8Rng::seed_from_u64(7)).is_err());
    }

    #[test]
    fn module_to_ideal_recovers_shifted_ideals() {
        let r = ring();
        let i = ideal(&r, "x0*x1; x0*x2; x1*x2");
        let res = resolve::resolve_ideal(&r, i.gens(), 2).unwrap();
        // the ideal itself, presented by its first syzygies
        let c = GradedModule::coker(res.differentials[1].clone());
        let (j, t) = module_to_ideal(&r, &c).unwrap();
        assert_eq!((j.clone(), t), (i.clone(), 0));
        // I(3), generated in degree -1
        let (j3, t3) = module_to_ideal(&r, &c.shift(-3)).unwrap();
        assert_eq!((j3, t3), (i, 3));
        let torsion = GradedModule::quotient_ring(&[r.var(0)]).unwrap();
        assert!(module_to_ideal(&r, &torsion).is_err());
    }

    #[test]
    fn smoothness_examples() {
        let r = ring();
        let plane = ideal(&r, "x0 + 2*x3 - x4; x1 - x2 + 5*x4");
        let cert = smoothness_certificate(&plane, 2).unwrap();
        assert_eq!(cert.verdict, Verdict::Smooth);
        let two = ideal(&r, "x0; x1").intersect(&ideal(&r, "x2; x3"));
        let cert = smoothness_certificate(&two, 2).unwrap();
        assert_eq!(cert.verdict, Verdict::SingularWithLocus);
        // the Jacobian scheme is a fat point supported at (0:0:0:0:1)
        let locus = Ideal::new(&r, cert.locus.iter().map(|f| crate::parse::parse_polynomial(&r, f).unwrap()).collect()).unwrap();
        assert_eq!(locus.hilbert().projective_dim(), 0);
        assert!(locus.gens().iter().all(|f| r.eval(f, &[0, 0, 0, 0, 1]) == 0));
        let line = ideal(&r, "x0; x1; x2");
        assert!(matches!(smoothness_certificate(&line, 2), Err(Error::Dimension(_))));
    }
}
