//! Möbius transformations of the Riemann sphere: normalization to unimodular
//! matrices, spectral data, the four-way classification, Möbius conjugacy,
//! and decision procedures for topological conjugacy.
//!
//! Topological conjugacy is decided by three independent routes (trace,
//! eigenvalue, multiplier) that must agree, plus a fourth route through the
//! spectral partition of the associated linear operator on `C^2`
//! (see [`operator`]).

pub mod ensemble;
pub mod error;
pub mod extended_plane;
pub mod moebius;
pub mod operator;
pub mod spectral;
pub mod suite;
pub mod topo;

pub use error::{Error, Result};
pub use extended_plane::{chordal_distance, format_complex, format_point, parse_complex, parse_point, ExtendedComplex};
pub use moebius::{MoebiusMap, UnimodularMatrix};
pub use num_complex::Complex64;
pub use spectral::{ConjClass, EigenPair, FixedPointSet, MultiplierPair};
pub use topo::TopoDecision;

/// Default tolerance for the unit-modulus and real-trace gates.
pub const DEFAULT_EPS_UNIT: f64 = 1e-9;
/// Default tolerance for equality of complex quantities.
pub const DEFAULT_EPS_EQUAL: f64 = 1e-9;
/// Default search bound for the root-of-unity check.
pub const DEFAULT_K_MAX: u32 = 64;

/// Tolerance gates shared by every decision procedure.
///
/// `unit` gates "modulus equals one" and "trace is real"; `equal` gates
/// equality of two complex numbers (scaled by `max(1, |x|, |y|)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gates {
    pub unit: f64,
    pub equal: f64,
    pub k_max: u32,
}

impl Default for Gates {
    fn default() -> Self {
        Gates {
            unit: DEFAULT_EPS_UNIT,
            equal: DEFAULT_EPS_EQUAL,
            k_max: DEFAULT_K_MAX,
        }
    }
}

impl Gates {
    pub fn with_unit(unit: f64) -> Self {
        Gates {
            unit,
            ..Gates::default()
        }
    }

    /// `||z| - 1| <= unit`
    pub fn is_unit(&self, z: Complex64) -> bool {
        (z.norm() - 1.0).abs() <= self.unit
    }

    /// Scaled equality of two complex numbers.
    pub fn eq(&self, x: Complex64, y: Complex64) -> bool {
        (x - y).norm() <= self.equal * scale(x, y)
    }

    /// `|Im t| <= unit * (1 + |t|)`
    pub fn is_real(&self, t: Complex64) -> bool {
        t.im.abs() <= self.unit * (1.0 + t.norm())
    }
}

pub(crate) fn scale(x: Complex64, y: Complex64) -> f64 {
    1f64.max(x.norm()).max(y.norm())
}

/// One tolerance-gated comparison: `value <= threshold` decides the gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateReading {
    pub value: f64,
    pub threshold: f64,
}

impl GateReading {
    pub fn new(value: f64, threshold: f64) -> Self {
        GateReading { value, threshold }
    }

    pub fn passes(&self) -> bool {
        self.value <= self.threshold
    }

    /// Distance of the gated quantity to its threshold.
    pub fn margin(&self) -> f64 {
        (self.value - self.threshold).abs()
    }

    /// True when the reading is clearly on one side: either well inside the
    /// threshold (at most a tenth of it) or at least `band` away from zero.
    pub fn is_clear(&self, band: f64) -> bool {
        self.value <= 0.1 * self.threshold || self.value >= band
    }
}
