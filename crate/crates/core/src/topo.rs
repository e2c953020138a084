//! Topological conjugacy of Möbius maps.
//!
//! Three independent predicates decide it: one on traces, one on the
//! eigenvalues of the unimodular matrices, one on the multipliers at the
//! fixed points. They are equivalent in exact arithmetic, so
//! [`topo_conjugate`] always evaluates all three and reports disagreement as
//! [`Error::Indeterminate`] instead of picking one.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moebius::MoebiusMap;
use crate::spectral::{classify, eigenvalues, multipliers, trace, ConjClass};
use crate::{Gates, GateReading};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// A predicate verdict together with every gate reading it consulted.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub verdict: bool,
    pub readings: Vec<GateReading>,
}

impl CriterionOutcome {
    fn margin(&self) -> f64 {
        self.readings.iter().map(GateReading::margin).fold(f64::INFINITY, f64::min)
    }
}

/// Outcome of [`topo_conjugate`].
#[derive(Debug, Clone, PartialEq)]
pub struct TopoDecision {
    pub verdict: bool,
    /// `None` when the criterion was bypassed (identity inputs).
    pub trace: Option<bool>,
    pub eigen: Option<bool>,
    pub multiplier: Option<bool>,
    /// Smallest distance of any gated quantity to its threshold.
    pub margin: f64,
    pub class_f: ConjClass,
    pub class_g: ConjClass,
    pub notes: Vec<String>,
    readings: Vec<GateReading>,
}

impl TopoDecision {
    /// All three criteria were evaluated and agree.
    pub fn criteria_agree(&self) -> bool {
        match (self.trace, self.eigen, self.multiplier) {
            (Some(t), Some(e), Some(m)) => t == e && e == m,
            _ => true,
        }
    }

    /// Every gated quantity is either well within its threshold or at least
    /// `band` from zero.
    pub fn is_clear(&self, band: f64) -> bool {
        self.readings.iter().all(|r| r.is_clear(band))
    }

    pub fn readings(&self) -> &[GateReading] {
        &self.readings
    }
}

fn reading(value: f64, threshold: f64) -> GateReading {
    GateReading::new(value, threshold)
}

fn unit_reading(z: Complex64, gates: &Gates) -> GateReading {
    reading((z.norm() - 1.0).abs(), gates.unit)
}

fn eq_reading(x: Complex64, y: Complex64, gates: &Gates) -> GateReading {
    reading((x - y).norm(), gates.equal * crate::scale(x, y))
}

fn require_nonidentity(f: &MoebiusMap, g: &MoebiusMap) -> Result<()> {
    if f.is_identity() || g.is_identity() {
        Err(Error::IdentityMap)
    } else {
        Ok(())
    }
}

/// Trace real (relative gate) and in `[-2, 2]` (absolute gate).
fn trace_in_interval(t: Complex64, gates: &Gates, out: &mut Vec<GateReading>) -> bool {
    let real = reading(t.im.abs(), gates.unit * (1.0 + t.norm()));
    let edge = reading((t.re.abs() - 2.0).max(0.0), gates.unit);
    out.push(real);
    out.push(edge);
    real.passes() && edge.passes()
}

pub fn trace_outcome(f: &MoebiusMap, g: &MoebiusMap, gates: &Gates) -> Result<CriterionOutcome> {
    require_nonidentity(f, g)?;
    let (tf, tg) = (trace(f), trace(g));
    let mut readings = Vec::new();
    let in_f = trace_in_interval(tf, gates, &mut readings);
    let in_g = trace_in_interval(tg, gates, &mut readings);
    let same = eq_reading(tf, tg, gates);
    let opposite = eq_reading(tf, -tg, gates);
    readings.push(same);
    readings.push(opposite);
    let verdict = (!in_f && !in_g) || same.passes() || opposite.passes();
    Ok(CriterionOutcome { verdict, readings })
}

pub fn eigen_outcome(f: &MoebiusMap, g: &MoebiusMap, gates: &Gates) -> Result<CriterionOutcome> {
    require_nonidentity(f, g)?;
    let ef = eigenvalues(&f.normalize(), gates).values();
    let eg = eigenvalues(&g.normalize(), gates).values();
    let mut readings = Vec::new();
    let mut verdict = true;
    for &l in &ef {
        for &lp in &eg {
            let (ul, ulp) = (unit_reading(l, gates), unit_reading(lp, gates));
            let eqs = [
                eq_reading(l, lp, gates),
                eq_reading(l, -lp, gates),
                eq_reading(l, lp.conj(), gates),
                eq_reading(l, -lp.conj(), gates),
            ];
            let holds = (!ul.passes() && !ulp.passes()) || eqs.iter().any(GateReading::passes);
            verdict &= holds;
            readings.push(ul);
            readings.push(ulp);
            readings.extend(eqs);
        }
    }
    Ok(CriterionOutcome { verdict, readings })
}

pub fn multiplier_outcome(f: &MoebiusMap, g: &MoebiusMap, gates: &Gates) -> Result<CriterionOutcome> {
    require_nonidentity(f, g)?;
    let mf = multipliers(f, gates)?.values();
    let mg = multipliers(g, gates)?.values();
    let mut readings = Vec::new();
    let mut verdict = true;
    for &mu in &mf {
        for &nu in &mg {
            let (um, un) = (unit_reading(mu, gates), unit_reading(nu, gates));
            let same = eq_reading(mu, nu, gates);
            let conj = eq_reading(mu, nu.conj(), gates);
            verdict &= (!um.passes() && !un.passes()) || same.passes() || conj.passes();
            readings.extend([um, un, same, conj]);
        }
    }
    Ok(CriterionOutcome { verdict, readings })
}

/// `tr M_f, tr M_g ∉ [-2, 2]` or `tr M_f = ±tr M_g`.
pub fn criterion_trace(f: &MoebiusMap, g: &MoebiusMap, gates: &Gates) -> Result<bool> {
    trace_outcome(f, g, gates).map(|o| o.verdict)
}

/// For all eigenvalues `λ` of `M_f` and `λ'` of `M_g`: both off the unit
/// circle, or `λ = ±λ'`, or `λ = ±conj(λ')`.
pub fn criterion_eigen(f: &MoebiusMap, g: &MoebiusMap, gates: &Gates) -> Result<bool> {
    eigen_outcome(f, g, gates).map(|o| o.verdict)
}

/// For all multipliers `μ` of `f` and `ν` of `g`: both off the unit circle,
/// or `μ = ν`, or `μ = conj(ν)`.
pub fn criterion_multiplier(f: &MoebiusMap, g: &MoebiusMap, gates: &Gates) -> Result<bool> {
    multiplier_outcome(f, g, gates).map(|o| o.verdict)
}

/// Evaluates all three criteria without insisting that they agree.
///
/// The returned verdict is the majority vote; check
/// [`TopoDecision::criteria_agree`] before trusting it.
pub fn evaluate(f: &MoebiusMap, g: &MoebiusMap, gates: &Gates) -> Result<TopoDecision> {
    let (class_f, class_g) = (classify(f, gates), classify(g, gates));
    let (id_f, id_g) = (class_f == ConjClass::Identity, class_g == ConjClass::Identity);
    if id_f || id_g {
        let verdict = id_f && id_g;
        return Ok(TopoDecision {
            verdict,
            trace: None,
            eigen: None,
            multiplier: None,
            margin: f64::INFINITY,
            class_f,
            class_g,
            notes: vec![if verdict {
                "both maps are the identity".to_string()
            } else {
                "exactly one map is the identity".to_string()
            }],
            readings: Vec::new(),
        });
    }
    let t = trace_outcome(f, g, gates)?;
    let e = eigen_outcome(f, g, gates)?;
    let m = multiplier_outcome(f, g, gates)?;
    let margin = t.margin().min(e.margin()).min(m.margin());
    let votes = [t.verdict, e.verdict, m.verdict].iter().filter(|&&v| v).count();
    let mut notes = Vec::new();
    match (class_f, class_g) {
        (ConjClass::Hyperbolic | ConjClass::Loxodromic, ConjClass::Hyperbolic | ConjClass::Loxodromic) => {
            notes.push("both maps are topologically conjugate to z -> 2z".to_string())
        }
        (ConjClass::Parabolic, ConjClass::Parabolic) => {
            notes.push("both maps are topologically conjugate to z -> z+1".to_string())
        }
        _ => {}
    }
    let mut readings = t.readings;
    readings.extend(e.readings);
    readings.extend(m.readings);
    Ok(TopoDecision {
        verdict: votes >= 2,
        trace: Some(t.verdict),
        eigen: Some(e.verdict),
        multiplier: Some(m.verdict),
        margin,
        class_f,
        class_g,
        notes,
        readings,
    })
}

/// Decides topological conjugacy; the identity is conjugate only to itself.
pub fn topo_conjugate(f: &MoebiusMap, g: &MoebiusMap, gates: &Gates) -> Result<TopoDecision> {
    let d = evaluate(f, g, gates)?;
    if !d.criteria_agree() {
        return Err(Error::Indeterminate {
            trace: d.trace.unwrap_or(d.verdict),
            eigen: d.eigen.unwrap_or(d.verdict),
            multiplier: d.multiplier.unwrap_or(d.verdict),
            margin: d.margin,
        });
    }
    Ok(d)
}

/// Canonical form for topological conjugacy: `2z`, `μz` with `|μ| = 1` and
/// `Im μ >= 0`, or `z + 1`.
pub fn topo_canonical_form(f: &MoebiusMap, gates: &Gates) -> Result<MoebiusMap> {
    match classify(f, gates) {
        ConjClass::Identity => Err(Error::IdentityMap),
        ConjClass::Parabolic => MoebiusMap::translation(ONE),
        ConjClass::Hyperbolic | ConjClass::Loxodromic => MoebiusMap::scaling(Complex64::new(2.0, 0.0)),
        ConjClass::Elliptic => {
            let mp = multipliers(f, gates)?;
            let mu = if mp.primary.im >= 0.0 || mp.secondary.im < 0.0 { mp.primary } else { mp.secondary };
            MoebiusMap::scaling(mu)
        }
    }
}

/// Which clause of the scaling lemma applies to `z ↦ az` and `z ↦ bz`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingCase {
    /// `|a|, |b| < 1`
    BothContracting,
    /// `|a|, |b| > 1`
    BothExpanding,
    Equal,
    /// `a = conj(b)`
    ConjugateEqual,
    /// One inside and one outside the unit circle; `z ↦ 1/z` conjugates
    /// `bz` to `b⁻¹z`, which falls under the first two cases.
    InversionReduction,
    NotConjugate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingVerdict {
    pub conjugate: bool,
    pub case: ScalingCase,
    /// `z ↦ 1/z` when the inversion reduction was used.
    pub reduction: Option<MoebiusMap>,
}

/// Evaluates the scaling lemma for `z ↦ az` versus `z ↦ bz` directly.
pub fn scaling_lemma(a: Complex64, b: Complex64, gates: &Gates) -> Result<ScalingVerdict> {
    for (name, x) in [("a", a), ("b", b)] {
        if x.norm() <= gates.equal || gates.eq(x, ONE) {
            return Err(Error::InvalidInput(format!("{name} must not be 0 or 1")));
        }
    }
    let inside = |x: Complex64| !gates.is_unit(x) && x.norm() < 1.0;
    let outside = |x: Complex64| !gates.is_unit(x) && x.norm() > 1.0;
    let linear_case = |a: Complex64, b: Complex64| {
        if inside(a) && inside(b) {
            Some(ScalingCase::BothContracting)
        } else if outside(a) && outside(b) {
            Some(ScalingCase::BothExpanding)
        } else if gates.eq(a, b) {
            Some(ScalingCase::Equal)
        } else if gates.eq(a, b.conj()) {
            Some(ScalingCase::ConjugateEqual)
        } else {
            None
        }
    };
    if let Some(case) = linear_case(a, b) {
        return Ok(ScalingVerdict {
            conjugate: true,
            case,
            reduction: None,
        });
    }
    if (inside(a) && outside(b)) || (outside(a) && inside(b)) {
        debug_assert!(linear_case(a, b.inv()).is_some());
        return Ok(ScalingVerdict {
            conjugate: true,
            case: ScalingCase::InversionReduction,
            reduction: Some(MoebiusMap::reciprocal()),
        });
    }
    Ok(ScalingVerdict {
        conjugate: false,
        case: ScalingCase::NotConjugate,
        reduction: None,
    })
}

/// `|a|, |b| ≠ 1`, or `a = b`, or `a = conj(b)`.
pub fn scaling_topo_conjugate(a: Complex64, b: Complex64, gates: &Gates) -> Result<bool> {
    scaling_lemma(a, b, gates).map(|v| v.conjugate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(a: f64, b: f64, c: f64, d: f64) -> MoebiusMap {
        MoebiusMap::from_real(a, b, c, d).unwrap()
    }

    fn scal(re: f64, im: f64) -> MoebiusMap {
        MoebiusMap::scaling(Complex64::new(re, im)).unwrap()
    }

    fn rot(theta: f64) -> MoebiusMap {
        MoebiusMap::scaling(Complex64::from_polar(1.0, theta)).unwrap()
    }

    fn g() -> Gates {
        Gates::default()
    }

    #[test]
    fn trace_criterion_examples() {
        assert!(criterion_trace(&map(2.0, 0.0, 0.0, 1.0), &map(2.0, 1.0, 1.0, 1.0), &g()).unwrap());
        assert!(criterion_trace(&scal(0.0, 1.0), &scal(0.0, -1.0), &g()).unwrap());
        assert!(!criterion_trace(&map(1.0, 1.0, 0.0, 1.0), &map(2.0, 0.0, 0.0, 1.0), &g()).unwrap());
    }

    #[test]
    fn eigen_criterion_examples() {
        assert!(criterion_eigen(&map(2.0, 0.0, 0.0, 1.0), &map(3.0, 0.0, 0.0, 1.0), &g()).unwrap());
        assert!(criterion_eigen(&scal(0.0, 1.0), &scal(0.0, -1.0), &g()).unwrap());
        assert!(!criterion_eigen(&rot(1.0), &rot(2.0), &g()).unwrap());
    }

    #[test]
    fn multiplier_criterion_examples() {
        assert!(criterion_multiplier(&map(1.0, 1.0, 0.0, 1.0), &map(1.0, -1.0, 0.0, 1.0), &g()).unwrap());
        assert!(criterion_multiplier(&scal(0.0, 1.0), &scal(0.0, -1.0), &g()).unwrap());
        assert!(!criterion_multiplier(&map(2.0, 0.0, 0.0, 1.0), &scal(0.0, 1.0), &g()).unwrap());
    }

    #[test]
    fn criteria_reject_identity() {
        let id = MoebiusMap::identity();
        let two = map(2.0, 0.0, 0.0, 1.0);
        assert_eq!(criterion_trace(&id, &two, &g()), Err(Error::IdentityMap));
        assert_eq!(criterion_eigen(&two, &id, &g()), Err(Error::IdentityMap));
        assert_eq!(criterion_multiplier(&id, &id, &g()), Err(Error::IdentityMap));
    }

    #[test]
    fn topo_conjugate_examples() {
        let d = topo_conjugate(&map(2.0, 0.0, 0.0, 1.0), &map(2.0, 1.0, 1.0, 1.0), &g()).unwrap();
        assert!(d.verdict && d.criteria_agree());
        assert!(d.margin >= 0.0);
        let d = topo_conjugate(&rot(1.0), &rot(2.0), &g()).unwrap();
        assert!(!d.verdict);
        let id = MoebiusMap::identity();
        let d = topo_conjugate(&id, &id, &g()).unwrap();
        assert!(d.verdict && d.trace.is_none());
        assert!(!topo_conjugate(&id, &map(2.0, 0.0, 0.0, 1.0), &g()).unwrap().verdict);
    }

    #[test]
    fn boundary_input_is_indeterminate() {
        // |μ| - 1 = 1.5e-9 is off the circle for the multiplier gate, but
        // |λ| - 1 = 7.5e-10 is on it for the eigenvalue gate
        let f = MoebiusMap::scaling(Complex64::from_polar(1.0 + 1.5e-9, 2.0)).unwrap();
        let h = scal(2.0, 0.0);
        match topo_conjugate(&f, &h, &g()) {
            Err(Error::Indeterminate { trace, eigen, multiplier, .. }) => {
                assert!(!(trace == eigen && eigen == multiplier));
            }
            other => panic!("expected indeterminate, got {other:?}"),
        }
        let d = evaluate(&f, &h, &g()).unwrap();
        assert!(!d.is_clear(1e-6));
    }

    #[test]
    fn topo_canonical_examples() {
        assert!(topo_canonical_form(&map(5.0, 0.0, 0.0, 1.0), &g()).unwrap().same_map(&map(2.0, 0.0, 0.0, 1.0)));
        assert!(topo_canonical_form(&scal(0.0, -1.0), &g()).unwrap().same_map(&scal(0.0, 1.0)));
        let t = map(1.0, 1.0, 0.0, 1.0);
        assert!(topo_canonical_form(&t, &g()).unwrap().same_map(&t));
        assert_eq!(topo_canonical_form(&MoebiusMap::identity(), &g()), Err(Error::IdentityMap));
    }

    #[test]
    fn scaling_lemma_examples() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        assert!(scaling_topo_conjugate(c(2.0, 0.0), c(3.0, 0.0), &g()).unwrap());
        let v = scaling_lemma(c(0.0, 1.0), c(0.0, -1.0), &g()).unwrap();
        assert!(v.conjugate);
        assert_eq!(v.case, ScalingCase::ConjugateEqual);
        let v = scaling_lemma(c(2.0, 0.0), c(0.5, 0.0), &g()).unwrap();
        assert_eq!(v.case, ScalingCase::InversionReduction);
        assert!(v.reduction.unwrap().same_map(&MoebiusMap::reciprocal()));
        assert!(!scaling_topo_conjugate(c(2.0, 0.0), c(0.0, 1.0), &g()).unwrap());
        assert!(matches!(scaling_lemma(c(0.0, 0.0), c(2.0, 0.0), &g()), Err(Error::InvalidInput(_))));
        assert!(matches!(scaling_lemma(c(2.0, 0.0), c(1.0, 0.0), &g()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn inversion_reduction_conjugates_to_inverse() {
        let b = Complex64::new(0.5, 0.2);
        let gmap = MoebiusMap::scaling(b).unwrap();
        let phi = MoebiusMap::reciprocal();
        assert!(gmap.conjugate_by(&phi).same_map(&MoebiusMap::scaling(b.inv()).unwrap()));
    }
}
