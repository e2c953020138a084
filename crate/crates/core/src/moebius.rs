//! The Möbius group: maps `z ↦ (az+b)/(cz+d)`, their unimodular matrices,
//! evaluation on the sphere, composition and inversion.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extended_plane::{chordal_distance, format_complex, parse_complex, ExtendedComplex};

/// Row-major 2×2 complex matrix `[m11, m12, m21, m22]`.
pub type Mat2 = [Complex64; 4];

/// `|ad - bc| < SINGULAR_REL * max(|a|,|b|,|c|,|d|)^2` is rejected.
pub const SINGULAR_REL: f64 = 1e-12;
/// Entries below this modulus are skipped when fixing the sign of a matrix.
pub const SIGN_ENTRY_EPS: f64 = 1e-12;
/// Tolerance for identity detection and projective equality.
pub const MAP_EQ_EPS: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

pub fn mat_det(m: &Mat2) -> Complex64 {
    m[0] * m[3] - m[1] * m[2]
}

pub fn mat_neg(m: &Mat2) -> Mat2 {
    [-m[0], -m[1], -m[2], -m[3]]
}

/// Inverse of a determinant-1 matrix (the adjugate).
pub fn mat_inv_unimodular(m: &Mat2) -> Mat2 {
    [m[3], -m[1], -m[2], m[0]]
}

pub fn mat_max_diff(x: &Mat2, y: &Mat2) -> f64 {
    x.iter().zip(y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
}

fn max_modulus(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Picks the representative of `{m, -m}` whose first non-negligible entry has
/// positive real part (or zero real part and positive imaginary part).
/// Returns the representative and whether the sign was flipped.
pub fn canonical_sign(m: &Mat2) -> (Mat2, bool) {
    for z in m {
        let r = z.norm();
        if r <= SIGN_ENTRY_EPS {
            continue;
        }
        let flip = if z.re.abs() <= SIGN_ENTRY_EPS * r {
            z.im < 0.0
        } else {
            z.re < 0.0
        };
        return if flip { (mat_neg(m), true) } else { (*m, false) };
    }
    (*m, false)
}

/// A determinant-1 matrix stored as the canonical representative of its
/// `±` class, so that equal classes compare equal entrywise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnimodularMatrix {
    entries: Mat2,
    flipped: bool,
}

impl UnimodularMatrix {
    pub const IDENTITY: UnimodularMatrix = UnimodularMatrix {
        entries: [ONE, ZERO, ZERO, ONE],
        flipped: false,
    };

    /// Canonicalizes the sign of a matrix that already has determinant 1.
    /// `flipped` records whether `-entries` was stored.
    pub fn from_det_one(entries: Mat2) -> Self {
        let (entries, flipped) = canonical_sign(&entries);
        UnimodularMatrix { entries, flipped }
    }

    /// Scales an arbitrary nonsingular matrix to determinant 1 using the
    /// principal square root of its determinant, then fixes the sign.
    pub fn from_matrix(m: &Mat2) -> Result<Self> {
        let det = mat_det(m);
        let scale = max_modulus(m);
        if det.norm().is_nan() || det.norm() < SINGULAR_REL * scale * scale || scale == 0.0 {
            return Err(Error::SingularMap { det_modulus: det.norm() });
        }
        let s = det.sqrt();
        Ok(Self::from_det_one([m[0] / s, m[1] / s, m[2] / s, m[3] / s]))
    }

    pub fn entries(&self) -> &Mat2 {
        &self.entries
    }

    /// True when the stored representative is the negation of the input
    /// that was canonicalized.
    pub fn flipped(&self) -> bool {
        self.flipped
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0] + self.entries[3]
    }

    pub fn det(&self) -> Complex64 {
        mat_det(&self.entries)
    }

    /// Product of the two representatives, reduced to canonical sign.
    pub fn mul(&self, other: &UnimodularMatrix) -> UnimodularMatrix {
        Self::from_det_one(mat_mul(&self.entries, &other.entries))
    }

    pub fn inverse(&self) -> UnimodularMatrix {
        Self::from_det_one(mat_inv_unimodular(&self.entries))
    }

    /// The other representative of the `±` class.
    pub fn negated(&self) -> Mat2 {
        mat_neg(&self.entries)
    }

    pub fn approx_eq(&self, other: &UnimodularMatrix, tol: f64) -> bool {
        mat_max_diff(&self.entries, &other.entries) <= tol
    }

    pub fn is_identity(&self) -> bool {
        self.approx_eq(&Self::IDENTITY, MAP_EQ_EPS)
    }

    pub fn to_map(&self) -> MoebiusMap {
        let [a, b, c, d] = self.entries;
        MoebiusMap { a, b, c, d }
    }
}

/// `z ↦ (az+b)/(cz+d)` with `ad - bc ≠ 0`.
///
/// Coefficient quadruples that differ by a nonzero scalar are the same map;
/// use [`MoebiusMap::same_map`] rather than `==` to compare maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        if [a, b, c, d].iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = max_modulus(&[a, b, c, d]);
        let det = a * d - b * c;
        if scale == 0.0 || det.norm() < SINGULAR_REL * scale * scale {
            return Err(Error::SingularMap { det_modulus: det.norm() });
        }
        Ok(MoebiusMap { a, b, c, d })
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn from_matrix(m: &Mat2) -> Result<Self> {
        Self::new(m[0], m[1], m[2], m[3])
    }

    pub fn identity() -> Self {
        MoebiusMap { a: ONE, b: ZERO, c: ZERO, d: ONE }
    }

    /// `z ↦ mu z`; `mu` must be nonzero and finite.
    pub fn scaling(mu: Complex64) -> Result<Self> {
        Self::new(mu, ZERO, ZERO, ONE)
    }

    /// `z ↦ z + t`
    pub fn translation(t: Complex64) -> Result<Self> {
        Self::new(ONE, t, ZERO, ONE)
    }

    /// `z ↦ 1/z`
    pub fn reciprocal() -> Self {
        MoebiusMap { a: ZERO, b: ONE, c: ONE, d: ZERO }
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Determinant-1 matrix of the map, as the canonical `±` representative.
    pub fn normalize(&self) -> UnimodularMatrix {
        // the degeneracy gate ran at construction; composition may drift
        // below it but never to an exactly singular product
        let s = self.det().sqrt();
        UnimodularMatrix::from_det_one([self.a / s, self.b / s, self.c / s, self.d / s])
    }

    pub fn is_identity(&self) -> bool {
        self.normalize().is_identity()
    }

    /// Projective equality: canonical representatives agree within 1e-9.
    pub fn same_map(&self, other: &MoebiusMap) -> bool {
        self.normalize().approx_eq(&other.normalize(), MAP_EQ_EPS)
    }

    pub fn apply(&self, z: ExtendedComplex) -> ExtendedComplex {
        let (num, den) = match z {
            ExtendedComplex::Infinity => (self.a, self.c),
            ExtendedComplex::Finite(w) if w.norm() > 1e100 => {
                // evaluate in the chart at ∞ to avoid overflow
                let u = w.inv();
                (self.a + self.b * u, self.c + self.d * u)
            }
            ExtendedComplex::Finite(w) => (self.a * w + self.b, self.c * w + self.d),
        };
        if den.re == 0.0 && den.im == 0.0 {
            ExtendedComplex::Infinity
        } else {
            ExtendedComplex::from_complex(num.fdiv(den))
        }
    }

    /// `f ∘ g`, computed as the product of the coefficient matrices and
    /// rescaled so the largest coefficient has modulus 1.
    pub fn compose(&self, g: &MoebiusMap) -> MoebiusMap {
        let m = mat_mul(&self.coefficients(), &g.coefficients());
        let s = max_modulus(&m);
        MoebiusMap {
            a: m[0] / s,
            b: m[1] / s,
            c: m[2] / s,
            d: m[3] / s,
        }
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `h⁻¹ ∘ self ∘ h`
    pub fn conjugate_by(&self, h: &MoebiusMap) -> MoebiusMap {
        h.inverse().compose(&self.compose(h))
    }

    /// `f'(z) = (ad - bc)/(cz + d)^2` at a finite point; `None` at the pole.
    pub fn derivative(&self, z: Complex64) -> Option<Complex64> {
        let den = self.c * z + self.d;
        if den.re == 0.0 && den.im == 0.0 {
            return None;
        }
        let v = self.det().fdiv(den * den);
        (v.re.is_finite() && v.im.is_finite()).then_some(v)
    }

    /// The unique map sending `p[k]` to `q[k]` for `k = 0, 1, 2`.
    pub fn from_three_points(p: [ExtendedComplex; 3], q: [ExtendedComplex; 3]) -> Result<MoebiusMap> {
        let s = to_zero_one_infinity(p, "source")?;
        let t = to_zero_one_infinity(q, "target")?;
        Ok(t.inverse().compose(&s))
    }
}

/// The map sending `p[0], p[1], p[2]` to `0, 1, ∞`.
fn to_zero_one_infinity(p: [ExtendedComplex; 3], which: &str) -> Result<MoebiusMap> {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if chordal_distance(p[i], p[j]) < 1e-12 {
            return Err(Error::Degenerate(format!("{which} points {} and {} coincide", i + 1, j + 1)));
        }
    }
    use ExtendedComplex::{Finite, Infinity};
    let m = match (p[0], p[1], p[2]) {
        (Infinity, Finite(z2), Finite(z3)) => [ZERO, z2 - z3, ONE, -z3],
        (Finite(z1), Infinity, Finite(z3)) => [ONE, -z1, ONE, -z3],
        (Finite(z1), Finite(z2), Infinity) => [ONE, -z1, ZERO, z2 - z1],
        (Finite(z1), Finite(z2), Finite(z3)) => [z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)],
        _ => unreachable!("distinctness checked above"),
    };
    MoebiusMap::from_matrix(&m).map_err(|_| Error::Degenerate(format!("{which} points are numerically coincident")))
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            format_complex(self.a),
            format_complex(self.b),
            format_complex(self.c),
            format_complex(self.d)
        )
    }
}

/// Parses `"a,b,c,d"`.
impl FromStr for MoebiusMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(4);
        let mut offset = 0;
        for part in s.split(',') {
            let z = parse_complex(part).map_err(|e| match e {
                Error::Parse { position, message } => Error::Parse {
                    position: position + offset,
                    message,
                },
                other => other,
            })?;
            coeffs.push(z);
            offset += part.len() + 1;
        }
        if coeffs.len() != 4 {
            return Err(Error::Parse {
                position: s.len(),
                message: format!("expected 4 comma-separated coefficients a,b,c,d, found {}", coeffs.len()),
            });
        }
        MoebiusMap::new(coeffs[0], coeffs[1], coeffs[2], coeffs[3])
    }
}
