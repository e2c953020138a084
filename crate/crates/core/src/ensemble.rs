//! Seeded random maps and pairs for property suites.
//!
//! Maps of a given class are built as `h⁻¹ ∘ c ∘ h` with `c` a canonical
//! form and `h` a random well-conditioned Möbius map. Pairs mix unrelated
//! maps with maps that share (or conjugate, or invert) a multiplier, so that
//! both verdicts of every criterion are exercised.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::extended_plane::ExtendedComplex;
use crate::moebius::MoebiusMap;
use crate::spectral::ConjClass;

pub struct Ensemble {
    rng: ChaCha8Rng,
}

/// The nonidentity classes, in a fixed order.
pub const CLASSES: [ConjClass; 4] = [
    ConjClass::Parabolic,
    ConjClass::Elliptic,
    ConjClass::Hyperbolic,
    ConjClass::Loxodromic,
];

impl Ensemble {
    pub fn new(seed: u64) -> Self {
        Ensemble {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform in the square `[-r, r]²`.
    pub fn complex(&mut self, r: f64) -> Complex64 {
        Complex64::new(self.rng.gen_range(-r..=r), self.rng.gen_range(-r..=r))
    }

    /// Random coefficients with `|ad - bc| >= 0.2 max|coef|²`.
    pub fn random_map(&mut self) -> MoebiusMap {
        loop {
            let [a, b, c, d] = [self.complex(1.0), self.complex(1.0), self.complex(1.0), self.complex(1.0)];
            let scale = [a, b, c, d].iter().map(|z| z.norm()).fold(0.0, f64::max);
            if (a * d - b * c).norm() >= 0.2 * scale * scale {
                if let Ok(f) = MoebiusMap::new(a, b, c, d) {
                    return f;
                }
            }
        }
    }

    /// A random nonidentity map with generic coefficients.
    pub fn random_nonidentity(&mut self) -> MoebiusMap {
        loop {
            let f = self.random_map();
            if !f.is_identity() {
                return f;
            }
        }
    }

    fn angle_away_from_zero(&mut self) -> f64 {
        self.rng.gen_range(0.2..(2.0 * PI - 0.2))
    }

    fn modulus_off_circle(&mut self) -> f64 {
        let r = self.rng.gen_range(1.2..4.0);
        if self.rng.gen_bool(0.5) {
            r
        } else {
            1.0 / r
        }
    }

    /// A multiplier of the given class (not parabolic or identity).
    pub fn multiplier(&mut self, class: ConjClass) -> Complex64 {
        match class {
            ConjClass::Elliptic => Complex64::from_polar(1.0, self.angle_away_from_zero()),
            ConjClass::Hyperbolic => {
                let r = self.modulus_off_circle();
                if self.rng.gen_bool(0.5) {
                    Complex64::new(r, 0.0)
                } else {
                    Complex64::new(-r, 0.0)
                }
            }
            ConjClass::Loxodromic => {
                let r = self.modulus_off_circle();
                let mut theta = self.rng.gen_range(0.2..(PI - 0.2));
                if self.rng.gen_bool(0.5) {
                    theta = -theta;
                }
                Complex64::from_polar(r, theta)
            }
            ConjClass::Parabolic | ConjClass::Identity => Complex64::new(1.0, 0.0),
        }
    }

    /// `h⁻¹ ∘ (μz) ∘ h` for a random `h`.
    pub fn with_multiplier(&mut self, mu: Complex64) -> MoebiusMap {
        let h = self.random_map();
        MoebiusMap::scaling(mu).expect("nonzero multiplier").conjugate_by(&h)
    }

    /// `h⁻¹ ∘ (z + t) ∘ h` for random `h` and `t`.
    pub fn parabolic(&mut self) -> MoebiusMap {
        let h = self.random_map();
        let t = loop {
            let t = self.complex(2.0);
            if t.norm() > 0.3 {
                break t;
            }
        };
        MoebiusMap::translation(t).expect("finite").conjugate_by(&h)
    }

    /// A map of the requested class.
    pub fn constructed(&mut self, class: ConjClass) -> MoebiusMap {
        match class {
            ConjClass::Identity => MoebiusMap::identity(),
            ConjClass::Parabolic => self.parabolic(),
            other => {
                let mu = self.multiplier(other);
                self.with_multiplier(mu)
            }
        }
    }

    pub fn class(&mut self) -> ConjClass {
        CLASSES[self.rng.gen_range(0..CLASSES.len())]
    }

    /// Generic random maps (40%) or constructed maps of a random class.
    pub fn nonidentity_map(&mut self) -> MoebiusMap {
        if self.rng.gen_bool(0.4) {
            self.random_nonidentity()
        } else {
            let class = self.class();
            self.constructed(class)
        }
    }

    /// A pair of nonidentity maps: unrelated, same class, or related through
    /// `μ`, `1/μ`, `conj μ`, `1/conj μ`.
    pub fn pair(&mut self) -> (MoebiusMap, MoebiusMap) {
        match self.rng.gen_range(0..10) {
            0..=2 => (self.nonidentity_map(), self.nonidentity_map()),
            3..=4 => {
                let class = self.class();
                (self.constructed(class), self.constructed(class))
            }
            _ => {
                let class = self.class();
                if class == ConjClass::Parabolic {
                    return (self.parabolic(), self.parabolic());
                }
                let mu = self.multiplier(class);
                let nu = match self.rng.gen_range(0..4) {
                    0 => mu,
                    1 => mu.inv(),
                    2 => mu.conj(),
                    _ => mu.conj().inv(),
                };
                (self.with_multiplier(mu), self.with_multiplier(nu))
            }
        }
    }

    /// A pair whose first map has `||λ| - 1| ≈ 1e-10`, well inside the
    /// default unit gate but not exactly on the circle.
    pub fn boundary_pair(&mut self) -> (MoebiusMap, MoebiusMap) {
        let sign = if self.rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        // |μ| = |λ|²
        let r = (1.0 + sign * 1e-10f64).powi(2);
        let mu = Complex64::from_polar(r, self.angle_away_from_zero());
        let f = self.with_multiplier(mu);
        let class = self.class();
        (f, self.constructed(class))
    }

    /// Random sample points: mostly finite in the disc of radius 3, with
    /// `0` and `∞` included.
    pub fn sample_points(&mut self, n: usize) -> Vec<ExtendedComplex> {
        let mut out = Vec::with_capacity(n);
        if n > 0 {
            out.push(ExtendedComplex::Infinity);
        }
        if n > 1 {
            out.push(ExtendedComplex::ZERO);
        }
        while out.len() < n {
            out.push(ExtendedComplex::Finite(self.complex(3.0)));
        }
        out
    }
}
