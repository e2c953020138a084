//! Cross-route property suite over a seeded ensemble of map pairs.
//!
//! Checked for every pair:
//! - the trace, eigenvalue and multiplier criteria agree;
//! - the operator bridge agrees with the Möbius verdict;
//! - a returned conjugator satisfies the conjugation equation, and Möbius
//!   conjugacy implies topological conjugacy;
//! - the multipliers of each map equal the squared eigenvalues.
//!
//! Pairs with a gated quantity in the ambiguous band are reported as
//! boundary cases; a disagreement there counts as indeterminate, not as a
//! failure.

use crate::ensemble::Ensemble;
use crate::moebius::MoebiusMap;
use crate::operator::moebius_operator_equiv;
use crate::spectral::{conjugation_residual, conjugator, eigenvalues, multipliers, MultiplierPair};
use crate::topo::evaluate;
use crate::Gates;

/// Ambiguous band: readings between a tenth of the threshold and this value.
pub const CLEAR_BAND: f64 = 1e-6;
/// Chordal bound for the conjugation equation.
pub const CONJUGATION_TOL: f64 = 1e-7;
/// Tolerance for the multiplier–eigenvalue law.
pub const LAW_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub count: usize,
    /// Draw every fourth pair from [`Ensemble::boundary_pair`].
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub index: usize,
    pub property: &'static str,
    pub f: String,
    pub g: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteReport {
    pub pairs: usize,
    pub clear_pairs: usize,
    pub boundary_pairs: usize,
    pub indeterminate: Vec<Counterexample>,
    pub failures: Vec<Counterexample>,
    pub conjugate_pairs: usize,
    pub mobius_conjugate_pairs: usize,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `{μ, 1/μ}` equals `{λ², λ⁻²}` (parabolic: `{1}` and `λ = ±1`).
pub fn multiplier_law_holds(f: &MoebiusMap, gates: &Gates, tol: f64) -> bool {
    let Ok(mp) = multipliers(f, gates) else {
        return false;
    };
    let e = eigenvalues(&f.normalize(), gates);
    let squared = MultiplierPair {
        primary: e.first * e.first,
        secondary: e.second * e.second,
        parabolic: mp.parabolic,
    };
    mp.approx_eq(&squared, tol)
}

pub fn check_pair(
    index: usize,
    f: &MoebiusMap,
    g: &MoebiusMap,
    points: &[crate::ExtendedComplex],
    gates: &Gates,
    report: &mut SuiteReport,
) {
    let ce = |property: &'static str, detail: String| Counterexample {
        index,
        property,
        f: f.to_string(),
        g: g.to_string(),
        detail,
    };
    report.pairs += 1;
    for (name, m) in [("f", f), ("g", g)] {
        if !multiplier_law_holds(m, gates, LAW_TOL) {
            report.failures.push(ce("multiplier-eigenvalue law", format!("fails for {name}")));
        }
    }
    let decision = match evaluate(f, g, gates) {
        Ok(d) => d,
        Err(e) => {
            report.failures.push(ce("evaluation", e.to_string()));
            return;
        }
    };
    let clear = decision.is_clear(CLEAR_BAND);
    if clear {
        report.clear_pairs += 1;
    } else {
        report.boundary_pairs += 1;
    }
    if !decision.criteria_agree() {
        let detail = format!(
            "trace={:?} eigen={:?} multiplier={:?} margin={:e}",
            decision.trace, decision.eigen, decision.multiplier, decision.margin
        );
        if clear {
            report.failures.push(ce("criterion agreement", detail));
        } else {
            report.indeterminate.push(ce("criterion agreement", detail));
        }
        return;
    }
    if decision.verdict {
        report.conjugate_pairs += 1;
    }
    match moebius_operator_equiv(f, g, gates) {
        Ok(bridge) if bridge != decision.verdict => {
            let detail = format!("operator route {bridge}, criteria {}", decision.verdict);
            if clear {
                report.failures.push(ce("operator bridge", detail));
            } else {
                report.indeterminate.push(ce("operator bridge", detail));
            }
        }
        Ok(_) => {}
        Err(e) => report.failures.push(ce("operator bridge", e.to_string())),
    }
    match conjugator(f, g, gates) {
        Ok(Some(h)) => {
            report.mobius_conjugate_pairs += 1;
            let residual = conjugation_residual(f, g, &h, points);
            if residual > CONJUGATION_TOL {
                report.failures.push(ce("conjugation equation", format!("h = {h}, residual {residual:e}")));
            }
            if !decision.verdict {
                report.failures.push(ce("conjugacy implies topological conjugacy", format!("h = {h}")));
            }
        }
        Ok(None) => {}
        Err(e) => report.failures.push(ce("conjugator", e.to_string())),
    }
}

pub fn run_suite(config: &SuiteConfig, gates: &Gates) -> SuiteReport {
    let mut ens = Ensemble::new(config.seed);
    let mut report = SuiteReport::default();
    for index in 0..config.count {
        let (f, g) = if config.boundary && index % 4 == 0 {
            ens.boundary_pair()
        } else {
            ens.pair()
        };
        let points = ens.sample_points(20);
        check_pair(index, &f, &g, &points, gates, &mut report);
    }
    report
}
