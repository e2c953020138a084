//! Acceptance suite: nine criteria, one PASS/FAIL line each.
//!
//! Reference values are computed here from the raw coefficients, not taken
//! from the library routine under test.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use moebius_core::ensemble::Ensemble;
use moebius_core::moebius::Mat2;
use moebius_core::operator::{
    diag_unimodular_decision, moebius_operator_equiv, operator_branches, root_of_unity, root_of_unity_order, similar,
    spectral_partition, topo_conjugate_complex, topo_conjugate_real, BlockKind, OperatorMatrix,
};
use moebius_core::spectral::{classify, conjugator, eigenvalues, multipliers, trace, ConjClass};
use moebius_core::suite::CLEAR_BAND;
use moebius_core::topo::{evaluate, topo_canonical_form, topo_conjugate};
use moebius_core::{chordal_distance, Complex64, Gates, MoebiusMap};

const SEED: u64 = 20240917;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
    (x - y).norm() <= tol * 1f64.max(x.norm()).max(y.norm())
}

/// Coefficients divided by a square root of the determinant.
fn unimodular(f: &MoebiusMap) -> Mat2 {
    let [a, b, cc, d] = f.coefficients();
    let s = (a * d - b * cc).sqrt();
    [a / s, b / s, cc / s, d / s]
}

fn ref_trace(f: &MoebiusMap) -> Complex64 {
    let m = unimodular(f);
    m[0] + m[3]
}

/// Roots of `λ² - tλ + 1`, with the parabolic gate applied.
fn ref_eigen(t: Complex64, gate: f64) -> [Complex64; 2] {
    if (t - 2.0).norm() <= gate {
        return [c(1.0, 0.0); 2];
    }
    if (t + 2.0).norm() <= gate {
        return [c(-1.0, 0.0); 2];
    }
    let disc = (t * t - 4.0).sqrt();
    let (p, q) = ((t + disc) / 2.0, (t - disc) / 2.0);
    let big = if p.norm() >= q.norm() { p } else { q };
    [big, big.inv()]
}

fn same_multiset(x: &[Complex64], y: &[Complex64], tol: f64) -> bool {
    match (x, y) {
        ([a], [b]) => close(*a, *b, tol),
        ([a, b], [p, q]) => (close(*a, *p, tol) && close(*b, *q, tol)) || (close(*a, *q, tol) && close(*b, *p, tol)),
        _ => false,
    }
}

fn dedup(v: [Complex64; 2], tol: f64) -> Vec<Complex64> {
    if close(v[0], v[1], tol) {
        vec![v[0]]
    } else {
        v.to_vec()
    }
}

type Criterion = (&'static str, Box<dyn Fn() -> Verdict>);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

/// Trace, eigenvalue and multiplier criteria agree on clear pairs.
fn criterion_1(gates: &Gates) -> Verdict {
    let mut ens = Ensemble::new(SEED);
    let start = Instant::now();
    let (mut clear, mut disagree, mut errors) = (0, 0, 0);
    for _ in 0..10_000 {
        let (f, g) = ens.pair();
        match evaluate(&f, &g, gates) {
            Ok(d) if d.is_clear(CLEAR_BAND) => {
                clear += 1;
                if !d.criteria_agree() {
                    disagree += 1;
                }
            }
            Ok(_) => {}
            Err(_) => errors += 1,
        }
    }
    let elapsed = start.elapsed();
    verdict(
        disagree == 0 && errors == 0 && clear >= 9_000 && elapsed <= Duration::from_secs(10),
        format!("{clear} clear pairs of 10000, {disagree} disagreements, {errors} errors, {elapsed:.2?}"),
    )
}

/// Möbius verdict equals the operator bridge verdict.
fn criterion_2(gates: &Gates) -> Verdict {
    let mut ens = Ensemble::new(SEED + 2);
    let (mut mismatch, mut errors, mut positives) = (0, 0, 0);
    for _ in 0..1000 {
        let (f, g) = ens.pair();
        match (topo_conjugate(&f, &g, gates), moebius_operator_equiv(&f, &g, gates)) {
            (Ok(d), Ok(b)) => {
                positives += d.verdict as usize;
                if d.verdict != b {
                    mismatch += 1;
                }
            }
            _ => errors += 1,
        }
    }
    verdict(
        mismatch == 0 && errors == 0,
        format!("1000 pairs ({positives} conjugate), {mismatch} disagreements, {errors} errors"),
    )
}

/// A conjugator exists iff traces agree up to sign; it solves `g = h⁻¹∘f∘h`.
fn criterion_3(gates: &Gates) -> Verdict {
    let mut ens = Ensemble::new(SEED + 3);
    let (mut wrong_existence, mut bad_residual, mut found) = (0, 0, 0);
    let mut worst = 0f64;
    for _ in 0..1000 {
        let (f, g) = ens.pair();
        let points = ens.sample_points(20);
        let (tf, tg) = (ref_trace(&f), ref_trace(&g));
        let expect = close(tf, tg, 1e-9) || close(tf, -tg, 1e-9);
        let h = conjugator(&f, &g, gates).ok().flatten();
        if h.is_some() != expect {
            wrong_existence += 1;
        }
        if let Some(h) = h {
            found += 1;
            let hinv = h.inverse();
            let r = points
                .iter()
                .map(|&z| chordal_distance(g.apply(z), hinv.apply(f.apply(h.apply(z)))))
                .fold(0.0, f64::max);
            worst = worst.max(r);
            if r > 1e-7 {
                bad_residual += 1;
            }
        }
    }
    verdict(
        wrong_existence == 0 && bad_residual == 0 && found > 0,
        format!(
            "{found} conjugators, {wrong_existence} existence mismatches, {bad_residual} residuals > 1e-7 (worst {worst:.1e})"
        ),
    )
}

/// `{μ, 1/μ} = {λ², λ⁻²}`.
fn criterion_4(gates: &Gates) -> Verdict {
    let mut ens = Ensemble::new(SEED + 4);
    let mut bad = 0;
    for _ in 0..1000 {
        let f = ens.nonidentity_map();
        let l = ref_eigen(ref_trace(&f), gates.unit);
        let want = dedup([l[0] * l[0], l[1] * l[1]], 1e-9);
        let ok = multipliers(&f, gates)
            .map(|mp| same_multiset(&mp.values(), &want, 1e-9))
            .unwrap_or(false);
        if !ok {
            bad += 1;
        }
    }
    verdict(bad == 0, format!("1000 maps, {bad} violations"))
}

/// `|λ| = 1` iff the trace is real and in `[-2, 2]`; parabolic traces are `±2`.
fn criterion_5(gates: &Gates) -> Verdict {
    let mut ens = Ensemble::new(SEED + 5);
    let mut maps: Vec<(MoebiusMap, Option<ConjClass>)> = Vec::new();
    for _ in 0..100 {
        maps.push((ens.constructed(ConjClass::Elliptic), Some(ConjClass::Elliptic)));
        maps.push((ens.parabolic(), Some(ConjClass::Parabolic)));
    }
    for _ in 0..800 {
        maps.push((ens.nonidentity_map(), None));
    }
    let (mut law, mut para, mut tagged) = (0, 0, 0);
    for (f, tag) in &maps {
        let t = ref_trace(f);
        let e = eigenvalues(&f.normalize(), gates);
        let unit = (e.first.norm() - 1.0).abs() <= gates.unit && (e.second.norm() - 1.0).abs() <= gates.unit;
        let in_interval = t.im.abs() <= gates.unit * (1.0 + t.norm()) && t.re.abs() <= 2.0 + gates.unit;
        if unit != in_interval {
            law += 1;
        }
        match tag {
            Some(ConjClass::Parabolic) => {
                let lib = trace(f);
                if !((lib - 2.0).norm() <= 1e-9 || (lib + 2.0).norm() <= 1e-9) {
                    para += 1;
                }
                if !unit {
                    tagged += 1;
                }
            }
            Some(ConjClass::Elliptic) if !(unit && in_interval) => tagged += 1,
            _ => {}
        }
    }
    verdict(
        law == 0 && para == 0 && tagged == 0,
        format!("1000 maps, {law} law violations, {para} parabolic traces off ±2, {tagged} constructed maps off the circle"),
    )
}

/// `f` is topologically conjugate to its canonical form.
fn criterion_6(gates: &Gates) -> Verdict {
    let mut ens = Ensemble::new(SEED + 6);
    let two = [c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
    let (mut not_conj, mut not_two, mut lower) = (0, 0, 0);
    for k in 0..300 {
        let class = match k / 100 {
            0 if k % 2 == 0 => ConjClass::Hyperbolic,
            0 => ConjClass::Loxodromic,
            1 => ConjClass::Elliptic,
            _ => ConjClass::Parabolic,
        };
        let f = ens.constructed(class);
        let Ok(canon) = topo_canonical_form(&f, gates) else {
            not_conj += 1;
            continue;
        };
        if !topo_conjugate(&f, &canon, gates).map(|d| d.verdict).unwrap_or(false) {
            not_conj += 1;
        }
        match class {
            ConjClass::Hyperbolic | ConjClass::Loxodromic if canon.coefficients() != two => not_two += 1,
            ConjClass::Elliptic => {
                let [a, _, _, d] = canon.coefficients();
                if (a / d).im < 0.0 {
                    lower += 1;
                }
            }
            _ => {}
        }
    }
    verdict(
        not_conj == 0 && not_two == 0 && lower == 0,
        format!("300 maps, {not_conj} not conjugate, {not_two} forms other than 2z, {lower} elliptic with Im < 0"),
    )
}

/// Class and multipliers survive conjugation.
fn criterion_7(gates: &Gates) -> Verdict {
    let mut ens = Ensemble::new(SEED + 7);
    let (mut class_bad, mut mult_bad, mut total) = (0, 0, 0);
    for _ in 0..100 {
        let f = ens.nonidentity_map();
        let class = classify(&f, gates);
        let mp = multipliers(&f, gates).expect("nonidentity");
        for _ in 0..100 {
            let h = ens.random_map();
            let g = f.conjugate_by(&h);
            total += 1;
            if classify(&g, gates) != class {
                class_bad += 1;
            }
            if !multipliers(&g, gates).map(|q| q.approx_eq(&mp, 1e-7)).unwrap_or(false) {
                mult_bad += 1;
            }
        }
    }
    verdict(
        class_bad == 0 && mult_bad == 0,
        format!("{total} conjugations, {class_bad} class changes, {mult_bad} multiplier changes"),
    )
}

fn real(size: usize, e: &[f64]) -> OperatorMatrix {
    OperatorMatrix::real(size, e).unwrap()
}

fn cx(size: usize, e: &[Complex64]) -> OperatorMatrix {
    OperatorMatrix::complex(size, e).unwrap()
}

fn cdiag(a: Complex64, b: Complex64) -> OperatorMatrix {
    cx(2, &[a, c(0.0, 0.0), c(0.0, 0.0), b])
}

fn rotation(t: f64) -> OperatorMatrix {
    real(2, &[t.cos(), -t.sin(), t.sin(), t.cos()])
}

fn map(a: f64, b: f64, cc: f64, d: f64) -> MoebiusMap {
    MoebiusMap::from_real(a, b, cc, d).unwrap()
}

/// Worked operator examples.
fn criterion_8(gates: &Gates) -> Verdict {
    let e = |t: f64| Complex64::from_polar(1.0, t);
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let mut failed: Vec<&str> = Vec::new();
    let mut check = |name: &'static str, ok: bool| {
        if !ok {
            failed.push(name);
        }
    };

    let p = spectral_partition(&real(2, &[2.0, 0.0, 0.0, 0.5]), gates).unwrap();
    check("partition diag(2, 0.5)", p.block_sizes() == [0, 1, 0, 1]);
    let p = spectral_partition(&real(2, &[0.0, 1.0, 0.0, 0.0]), gates).unwrap();
    check("partition nilpotent", p.block_sizes() == [2, 0, 0, 0]);
    let p = spectral_partition(&cdiag(e(PI / 4.0), e(-PI / 4.0)), gates).unwrap();
    check("partition unit diagonal", p.block_sizes() == [0, 0, 2, 0] && p.block(BlockKind::Unit).size() == 2);

    let id = real(2, &[1.0, 0.0, 0.0, 1.0]);
    check("similar I I", similar(&id, &id, gates).unwrap());
    check("similar jordan vs I", !similar(&real(2, &[1.0, 1.0, 0.0, 1.0]), &id, gates).unwrap());
    // The 8-digit literals sit about 1.3e-9 from (3 ± √5)/2, so they are
    // compared at their own precision; the exact roots use the default gate.
    let golden = real(2, &[2.0, 1.0, 1.0, 1.0]);
    let eight_digits = Gates { equal: 1e-8, ..*gates };
    check(
        "similar shared char poly (8-digit literals)",
        similar(&golden, &real(2, &[2.61803399, 0.0, 0.0, 0.38196601]), &eight_digits).unwrap(),
    );
    let s5 = 5f64.sqrt();
    check(
        "similar shared char poly (exact roots)",
        similar(&golden, &real(2, &[(3.0 + s5) / 2.0, 0.0, 0.0, (3.0 - s5) / 2.0]), gates).unwrap(),
    );

    let hyp2 = cdiag(c(r2, 0.0), c(1.0 / r2, 0.0));
    let hyp3 = cdiag(c(r3, 0.0), c(1.0 / r3, 0.0));
    check("complex hyperbolic", topo_conjugate_complex(&hyp2, &hyp3, gates).unwrap());
    check(
        "complex distinct rotations",
        !topo_conjugate_complex(&cdiag(e(PI / 4.0), e(-PI / 4.0)), &cdiag(e(PI / 3.0), e(-PI / 3.0)), gates).unwrap(),
    );
    check(
        "complex jordan ±1",
        !topo_conjugate_complex(&real(2, &[1.0, 1.0, 0.0, 1.0]), &real(2, &[-1.0, 1.0, 0.0, -1.0]), gates).unwrap(),
    );

    check("real orientation", !topo_conjugate_real(&real(1, &[0.5]), &real(1, &[-0.5]), gates).unwrap());
    check("real same orientation", topo_conjugate_real(&real(1, &[0.5]), &real(1, &[0.25]), gates).unwrap());
    check("real rotations", !topo_conjugate_real(&rotation(1.0), &rotation(2.0), gates).unwrap());
    let big = OperatorMatrix::real(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    check("real size 3 unsupported", topo_conjugate_real(&big, &big, gates).is_err());

    check("diag hyperbolic", diag_unimodular_decision(&hyp2, &hyp3, gates).unwrap());
    check(
        "diag conjugate eigenvalue",
        diag_unimodular_decision(&cdiag(c(0.0, 1.0), c(0.0, -1.0)), &cdiag(c(0.0, -1.0), c(0.0, 1.0)), gates).unwrap(),
    );
    check(
        "diag elliptic vs hyperbolic",
        !diag_unimodular_decision(&cdiag(e(PI / 4.0), e(-PI / 4.0)), &hyp2, gates).unwrap(),
    );

    // z + 1 against z - 1 written with the other sign: only -M_g matches.
    let mf = [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
    let mg = [c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)];
    check("bridge minus branch", operator_branches(&mf, &mg, gates).unwrap() == (false, true));
    check("bridge z+1 z-1", moebius_operator_equiv(&map(1.0, 1.0, 0.0, 1.0), &map(1.0, -1.0, 0.0, 1.0), gates).unwrap());
    let rot = MoebiusMap::scaling(c(0.0, 1.0)).unwrap();
    check("bridge 2z iz", !moebius_operator_equiv(&map(2.0, 0.0, 0.0, 1.0), &rot, gates).unwrap());
    check("bridge 2z 3z", moebius_operator_equiv(&map(2.0, 0.0, 0.0, 1.0), &map(3.0, 0.0, 0.0, 1.0), gates).unwrap());

    check("root of unity i", root_of_unity_order(c(0.0, 1.0), 64) == Some(4));
    check("root of unity 0.5", !root_of_unity(c(0.5, 0.0), 64));
    check("root of unity e^i", !root_of_unity(e(1.0), 64));

    let n = 25;
    verdict(failed.is_empty(), format!("{} of {n} examples pass; failing: {failed:?}", n - failed.len()))
}

fn ref_canonical_sign(m: Mat2) -> Mat2 {
    for z in m {
        let r = z.norm();
        if r <= 1e-12 {
            continue;
        }
        let negative = if z.re.abs() <= 1e-12 * r { z.im < 0.0 } else { z.re < 0.0 };
        return if negative { m.map(|z| -z) } else { m };
    }
    m
}

/// `canonical-sign(M_f M_g) = M_{f∘g}`.
fn criterion_9() -> Verdict {
    let mut ens = Ensemble::new(SEED + 9);
    let mut bad = 0;
    let mut worst = 0f64;
    for _ in 0..1000 {
        let f = ens.random_map();
        let g = ens.random_map();
        let (x, y) = (unimodular(&f), unimodular(&g));
        let prod = [
            x[0] * y[0] + x[1] * y[2],
            x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3],
        ];
        let want = ref_canonical_sign(prod);
        let got = *f.compose(&g).normalize().entries();
        let diff = want.iter().zip(got.iter()).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        worst = worst.max(diff);
        if diff > 1e-9 {
            bad += 1;
        }
    }
    verdict(bad == 0, format!("1000 pairs, {bad} mismatches (worst {worst:.1e})"))
}

fn main() -> ExitCode {
    let gates = Gates::default();
    let criteria: [Criterion; 9] = [
        ("criteria equivalence", Box::new(move || criterion_1(&gates))),
        ("operator bridge", Box::new(move || criterion_2(&gates))),
        ("conjugator", Box::new(move || criterion_3(&gates))),
        ("eigenvalue-multiplier law", Box::new(move || criterion_4(&gates))),
        ("trace interval law", Box::new(move || criterion_5(&gates))),
        ("topological canonical forms", Box::new(move || criterion_6(&gates))),
        ("conjugation invariance", Box::new(move || criterion_7(&gates))),
        ("operator examples", Box::new(move || criterion_8(&gates))),
        ("composition homomorphism", Box::new(criterion_9)),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        all &= v.pass;
        println!("{} criterion {} ({name}): {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
