//! Spectral data of a Möbius map: trace, eigenvalues of the unimodular
//! matrix, fixed points, multipliers, Jordan form, the four-way class, the
//! conjugacy canonical form, and an explicit Möbius conjugator.
//!
//! Two routes are kept separate on purpose. Eigenvalues come from the trace
//! of the normalized matrix. Multipliers come from the derivative of the map
//! (raw coefficients) at the roots of `cz^2 + (d-a)z - b = 0`. The two are
//! related by `{μ, 1/μ} = {λ², λ⁻²}`, which is checked, never assumed.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extended_plane::{chordal_distance, ExtendedComplex};
use crate::moebius::{mat_inv_unimodular, mat_mul, Mat2, MoebiusMap, UnimodularMatrix};
use crate::Gates;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Conjugacy class of a Möbius map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConjClass {
    Identity,
    Parabolic,
    Elliptic,
    Hyperbolic,
    Loxodromic,
}

impl ConjClass {
    pub fn name(&self) -> &'static str {
        match self {
            ConjClass::Identity => "identity",
            ConjClass::Parabolic => "parabolic",
            ConjClass::Elliptic => "elliptic",
            ConjClass::Hyperbolic => "hyperbolic",
            ConjClass::Loxodromic => "loxodromic",
        }
    }
}

impl fmt::Display for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// True when `mu` is the preferred representative of `{mu, 1/mu}`:
/// modulus above one, or on the unit circle with `Im mu >= 0`.
pub fn is_preferred_multiplier(mu: Complex64, gates: &Gates) -> bool {
    if gates.is_unit(mu) {
        mu.im >= 0.0
    } else {
        mu.norm() > 1.0
    }
}

/// Eigenvalues `{λ, 1/λ}` of a unimodular matrix.
///
/// `first` is ordered so that `first²` is the preferred multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub first: Complex64,
    pub second: Complex64,
}

impl EigenPair {
    pub fn values(&self) -> [Complex64; 2] {
        [self.first, self.second]
    }

    pub fn is_double(&self) -> bool {
        self.first == self.second
    }
}

/// Fixed points of a Möbius map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedPointSet {
    Single(ExtendedComplex),
    Pair(ExtendedComplex, ExtendedComplex),
    /// The identity fixes every point.
    Everything,
}

impl FixedPointSet {
    /// `n(f)`; `None` for the identity.
    pub fn count(&self) -> Option<usize> {
        match self {
            FixedPointSet::Single(_) => Some(1),
            FixedPointSet::Pair(..) => Some(2),
            FixedPointSet::Everything => None,
        }
    }

    pub fn points(&self) -> Vec<ExtendedComplex> {
        match *self {
            FixedPointSet::Single(p) => vec![p],
            FixedPointSet::Pair(p, q) => vec![p, q],
            FixedPointSet::Everything => Vec::new(),
        }
    }
}

/// The multipliers `{μ, 1/μ}` of a nonidentity map; `{1}` when parabolic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierPair {
    /// Preferred representative (see [`is_preferred_multiplier`]).
    pub primary: Complex64,
    pub secondary: Complex64,
    pub parabolic: bool,
}

impl MultiplierPair {
    pub fn parabolic() -> Self {
        MultiplierPair {
            primary: ONE,
            secondary: ONE,
            parabolic: true,
        }
    }

    fn from_two(m1: Complex64, m2: Complex64, gates: &Gates) -> Self {
        let (primary, secondary) = if is_preferred_multiplier(m1, gates) { (m1, m2) } else { (m2, m1) };
        MultiplierPair {
            primary,
            secondary,
            parabolic: false,
        }
    }

    /// Distinct members: one for parabolic maps, two otherwise.
    pub fn values(&self) -> Vec<Complex64> {
        if self.parabolic {
            vec![self.primary]
        } else {
            vec![self.primary, self.secondary]
        }
    }

    /// Unordered comparison with tolerance `tol * max(1, |x|, |y|)`.
    pub fn approx_eq(&self, other: &MultiplierPair, tol: f64) -> bool {
        let close = |x: Complex64, y: Complex64| (x - y).norm() <= tol * crate::scale(x, y);
        (close(self.primary, other.primary) && close(self.secondary, other.secondary))
            || (close(self.primary, other.secondary) && close(self.secondary, other.primary))
    }
}

/// Trace of the canonical unimodular representative (defined up to sign).
pub fn trace(f: &MoebiusMap) -> Complex64 {
    f.normalize().trace()
}

/// `|tr ∓ 2| <= unit`; returns the sign of the double eigenvalue.
fn parabolic_sign(t: Complex64, gates: &Gates) -> Option<f64> {
    if (t - 2.0).norm() <= gates.unit {
        Some(1.0)
    } else if (t + 2.0).norm() <= gates.unit {
        Some(-1.0)
    } else {
        None
    }
}

pub fn is_parabolic_trace(t: Complex64, gates: &Gates) -> bool {
    parabolic_sign(t, gates).is_some()
}

/// Roots of `λ² - tr(M) λ + 1`; a trace within the gate of `±2` yields the
/// exact double root `±1`.
pub fn eigenvalues(m: &UnimodularMatrix, gates: &Gates) -> EigenPair {
    let t = m.trace();
    if let Some(sign) = parabolic_sign(t, gates) {
        let l = Complex64::new(sign, 0.0);
        return EigenPair { first: l, second: l };
    }
    let s = (t * t - 4.0).sqrt();
    let q = if (t + s).norm() >= (t - s).norm() { t + s } else { t - s };
    let l1 = q / 2.0;
    let l2 = l1.inv();
    if is_preferred_multiplier(l1 * l1, gates) {
        EigenPair { first: l1, second: l2 }
    } else {
        EigenPair { first: l2, second: l1 }
    }
}

/// Fixed points of `f` including the identity case.
pub fn fixed_point_set(f: &MoebiusMap, gates: &Gates) -> FixedPointSet {
    if f.is_identity() {
        return FixedPointSet::Everything;
    }
    let [a, b, c, d] = f.coefficients();
    let dma = d - a;
    if is_parabolic_trace(trace(f), gates) {
        // double root (a-d)/(2c) = -2b/(a-d); use the larger denominator
        let two_c = c * 2.0;
        let root = if two_c.norm() >= dma.norm() {
            if two_c == ZERO {
                ExtendedComplex::Infinity
            } else {
                ExtendedComplex::from_complex((-dma).fdiv(two_c))
            }
        } else {
            ExtendedComplex::from_complex((b * 2.0).fdiv(dma))
        };
        return FixedPointSet::Single(root);
    }
    // c z² + (d-a) z - b = 0, stable form
    let s = (dma * dma + b * c * 4.0).sqrt();
    let q = if (dma + s).norm() >= (dma - s).norm() { -(dma + s) / 2.0 } else { -(dma - s) / 2.0 };
    let z1 = if c == ZERO {
        ExtendedComplex::Infinity
    } else {
        ExtendedComplex::from_complex(q.fdiv(c))
    };
    let z2 = if q == ZERO {
        ExtendedComplex::Infinity
    } else {
        ExtendedComplex::from_complex((-b).fdiv(q))
    };
    FixedPointSet::Pair(z1, z2)
}

/// Fixed points of a nonidentity map.
pub fn fixed_points(f: &MoebiusMap, gates: &Gates) -> Result<FixedPointSet> {
    match fixed_point_set(f, gates) {
        FixedPointSet::Everything => Err(Error::IdentityMap),
        set => Ok(set),
    }
}

/// Multiplier at a fixed point: `f'(z)`, or `lim 1/f'(z)` as `z → ∞`.
pub fn multiplier_at(f: &MoebiusMap, z: ExtendedComplex) -> Complex64 {
    let [a, _, c, d] = f.coefficients();
    match z {
        ExtendedComplex::Finite(w) => f
            .derivative(w)
            .unwrap_or(Complex64::new(f64::INFINITY, 0.0)),
        // with c = 0 the map is (a z + b)/d, so 1/f' = d/a; for c ≠ 0 the
        // limit of (cz+d)²/det diverges
        ExtendedComplex::Infinity => {
            if c == ZERO {
                d.fdiv(a)
            } else {
                Complex64::new(f64::INFINITY, 0.0)
            }
        }
    }
}

/// Fixed points paired with their multipliers.
pub fn fixed_points_with_multipliers(
    f: &MoebiusMap,
    gates: &Gates,
) -> Result<Vec<(ExtendedComplex, Complex64)>> {
    Ok(match fixed_points(f, gates)? {
        FixedPointSet::Single(p) => vec![(p, ONE)],
        FixedPointSet::Pair(p, q) => vec![(p, multiplier_at(f, p)), (q, multiplier_at(f, q))],
        FixedPointSet::Everything => unreachable!(),
    })
}

pub fn multipliers(f: &MoebiusMap, gates: &Gates) -> Result<MultiplierPair> {
    let pts = fixed_points_with_multipliers(f, gates)?;
    Ok(match pts.as_slice() {
        [_] => MultiplierPair::parabolic(),
        [(_, m1), (_, m2)] => MultiplierPair::from_two(*m1, *m2, gates),
        _ => unreachable!(),
    })
}

pub fn classify(f: &MoebiusMap, gates: &Gates) -> ConjClass {
    if f.is_identity() {
        return ConjClass::Identity;
    }
    let mu = match multipliers(f, gates) {
        Ok(m) if m.parabolic => return ConjClass::Parabolic,
        Ok(m) => m.primary,
        Err(_) => return ConjClass::Identity,
    };
    if gates.is_unit(mu) {
        ConjClass::Elliptic
    } else if gates.is_real(mu) {
        ConjClass::Hyperbolic
    } else {
        ConjClass::Loxodromic
    }
}

/// Jordan form `T⁻¹ M T` of a unimodular matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanForm {
    /// `diag(λ, 1/λ)` or `[[±1, 1], [0, ±1]]`.
    pub canonical: Mat2,
    /// Determinant-1 change of basis.
    pub transform: Mat2,
    pub diagonalizable: bool,
}

pub fn jordan_form(m: &UnimodularMatrix, gates: &Gates) -> JordanForm {
    let e = *m.entries();
    let [a, b, c, d] = e;
    let eig = eigenvalues(m, gates);
    if eig.is_double() {
        let l = eig.first;
        let n = [a - l, b, c, d - l];
        let n_e1 = [n[0], n[2]];
        let n_e2 = [n[1], n[3]];
        let size = |v: &[Complex64; 2]| v[0].norm() + v[1].norm();
        if size(&n_e1).max(size(&n_e2)) <= gates.unit {
            // ±I
            return JordanForm {
                canonical: [l, ZERO, ZERO, l],
                transform: [ONE, ZERO, ZERO, ONE],
                diagonalizable: true,
            };
        }
        // v2 with N v2 ≠ 0, v1 = N v2; then M [v1 v2] = [v1 v2] J
        let (v2, v1) = if size(&n_e2) >= size(&n_e1) { ([ZERO, ONE], n_e2) } else { ([ONE, ZERO], n_e1) };
        let t = unit_det([v1[0], v2[0], v1[1], v2[1]]);
        return JordanForm {
            canonical: [l, ONE, ZERO, l],
            transform: t,
            diagonalizable: false,
        };
    }
    let eigvec = |l: Complex64| -> [Complex64; 2] {
        // kernel of M - λI from whichever row is larger
        let r1 = [b, l - a];
        let r2 = [l - d, c];
        let v = if r1[0].norm() + r1[1].norm() >= r2[0].norm() + r2[1].norm() { r1 } else { r2 };
        let k = if v[0].norm() >= v[1].norm() { v[0] } else { v[1] };
        [v[0] / k, v[1] / k]
    };
    let v1 = eigvec(eig.first);
    let v2 = eigvec(eig.second);
    JordanForm {
        canonical: [eig.first, ZERO, ZERO, eig.second],
        transform: unit_det([v1[0], v2[0], v1[1], v2[1]]),
        diagonalizable: true,
    }
}

fn unit_det(t: Mat2) -> Mat2 {
    let s = crate::moebius::mat_det(&t).sqrt();
    [t[0] / s, t[1] / s, t[2] / s, t[3] / s]
}

/// Residual `max |T⁻¹ M T - J|` of a Jordan decomposition.
pub fn jordan_residual(m: &UnimodularMatrix, jf: &JordanForm) -> f64 {
    let lhs = mat_mul(&mat_inv_unimodular(&jf.transform), &mat_mul(m.entries(), &jf.transform));
    crate::moebius::mat_max_diff(&lhs, &jf.canonical)
}

/// `μz` with the preferred multiplier, or `z + 1` for parabolic maps.
pub fn canonical_conjugacy_form(f: &MoebiusMap, gates: &Gates) -> Result<MoebiusMap> {
    let mp = multipliers(f, gates)?;
    if mp.parabolic {
        Ok(MoebiusMap::translation(ONE).expect("valid"))
    } else {
        MoebiusMap::scaling(mp.primary)
    }
}

/// A map `s` with `s⁻¹ f s` equal to the canonical form, plus the multiplier
/// carried to `0` (or `None` for parabolic maps).
fn standardizer(f: &MoebiusMap, target: Option<Complex64>, gates: &Gates) -> Result<(MoebiusMap, Option<Complex64>)> {
    let pts = fixed_points_with_multipliers(f, gates)?;
    let candidates: Vec<ExtendedComplex> = [
        (0.0, 0.0),
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (2.0, 1.0),
        (-0.5, -1.5),
    ]
    .iter()
    .map(|&(re, im)| ExtendedComplex::Finite(Complex64::new(re, im)))
    .collect();
    let zero = ExtendedComplex::ZERO;
    let one = ExtendedComplex::ONE;
    let inf = ExtendedComplex::Infinity;
    match pts.as_slice() {
        [(p, _)] => {
            // fixed point → ∞, w → 0, f(w) → 1 gives s⁻¹ f s = z + 1
            let score = |w: &ExtendedComplex| {
                let fw = f.apply(*w);
                chordal_distance(*w, *p).min(chordal_distance(fw, *p)).min(chordal_distance(*w, fw))
            };
            let w = best(&candidates, score);
            let s = MoebiusMap::from_three_points([inf, zero, one], [*p, w, f.apply(w)])?;
            Ok((s, None))
        }
        [(p1, m1), (p2, m2)] => {
            let goal = target.unwrap_or_else(|| if is_preferred_multiplier(*m1, gates) { *m1 } else { *m2 });
            let ((za, ma), zb) = if (m1 - goal).norm() <= (m2 - goal).norm() { ((*p1, *m1), *p2) } else { ((*p2, *m2), *p1) };
            let score = |w: &ExtendedComplex| chordal_distance(*w, za).min(chordal_distance(*w, zb));
            let w = best(&candidates, score);
            let s = MoebiusMap::from_three_points([zero, inf, one], [za, zb, w])?;
            Ok((s, Some(ma)))
        }
        _ => unreachable!(),
    }
}

fn best(candidates: &[ExtendedComplex], score: impl Fn(&ExtendedComplex) -> f64) -> ExtendedComplex {
    *candidates
        .iter()
        .max_by(|x, y| score(x).total_cmp(&score(y)))
        .expect("nonempty")
}

/// A Möbius map `h` with `g = h⁻¹ ∘ f ∘ h`, or `None` when `tr M_f ≠ ±tr M_g`.
pub fn conjugator(f: &MoebiusMap, g: &MoebiusMap, gates: &Gates) -> Result<Option<MoebiusMap>> {
    if f.is_identity() || g.is_identity() {
        return Err(Error::IdentityMap);
    }
    let (tf, tg) = (trace(f), trace(g));
    if !(gates.eq(tf, tg) || gates.eq(tf, -tg)) {
        return Ok(None);
    }
    if is_parabolic_trace(tf, gates) != is_parabolic_trace(tg, gates) {
        return Ok(None);
    }
    let (sf, mu) = standardizer(f, None, gates)?;
    let (sg, _) = standardizer(g, mu, gates)?;
    Ok(Some(sf.compose(&sg.inverse())))
}

/// Largest chordal distance between `g(z)` and `(h⁻¹ f h)(z)` over `points`.
pub fn conjugation_residual(f: &MoebiusMap, g: &MoebiusMap, h: &MoebiusMap, points: &[ExtendedComplex]) -> f64 {
    let hinv = h.inverse();
    points
        .iter()
        .map(|&z| chordal_distance(g.apply(z), hinv.apply(f.apply(h.apply(z)))))
        .fold(0.0, f64::max)
}
