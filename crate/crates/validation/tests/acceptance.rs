//! Acceptance checks. Runs every criterion, prints one
//! `criterion N: PASS|FAIL` line each with the measured figures, and exits
//! non-zero if any failed.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};
use std::time::{Duration, Instant};

use linkseg::closed_form::lk_from_invariants;
use linkseg::invariants::SegmentPairInvariants;
use linkseg::link::builtin_expected;
use linkseg::periodic::default_lattice;
use linkseg::quadrature::{
    antiderivative_check, gauss_lk_segments, lk_single_integral, reduced_double_integral,
    QuadratureConfig,
};
use linkseg::sampling::{
    random_invariants_with, random_point, random_reflection, random_skew_pair, seeded,
    InvariantBounds, SkewPairBounds,
};
use linkseg::{
    builtin_links, convergence_scan, extract_invariants, lk_link, lk_segments,
    lk_simple_orthogonal, reconstruct_segments, PolyLink, Segment,
};

const FIXTURE_TOL: f64 = 1e-12;
const FIXTURE_TIME: Duration = Duration::from_secs(1);
const COR1_TOL: f64 = 1e-14;
const ORACLE_TOL: f64 = 1e-9;
const ORACLE_PAIRS: usize = 200;
const ORACLE_SEED: u64 = 42;
const ORACLE_TIME: Duration = Duration::from_secs(60);
const ANTIDERIVATIVE_STEP: f64 = 1e-5;
const ANTIDERIVATIVE_TOL: f64 = 1e-7;
const PROPERTY_PAIRS: usize = 1000;
const PROPERTY_SEED: u64 = 2718;
const PROPERTY_TOL: f64 = 1e-12;
const CENTRAL_TOL: f64 = 1e-9;
const LIMIT_TOL: f64 = 1e-5;
const PERIODIC_TOL: f64 = 0.01;
const PERIODIC_TIME: Duration = Duration::from_secs(120);
/// Shell deltas of the 3-direction lattice sit at the rounding floor; growth
/// smaller than this is treated as noise.
const DELTA_NOISE: f64 = 1e-14;
const ROUND_TRIP_TOL: f64 = 1e-9;
const ROUND_TRIP_TUPLES: usize = 1000;
const ROUND_TRIP_SEED: u64 = 161803;

type Outcome = (bool, String);

fn lk(s1: &Segment, s2: &Segment) -> f64 {
    lk_segments(s1, s2).value
}

fn criterion_1_fixture_links() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for (name, link) in builtin_links() {
        let got = lk_link(&link).map(|r| r.lk_total);
        let want = builtin_expected(name).unwrap();
        let pass = matches!(got, Ok(v) if (v - want).abs() < FIXTURE_TOL);
        ok &= pass;
        details.push(format!("{name}={got:?}"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < FIXTURE_TIME;
    (ok, format!("{}; {elapsed:?}", details.join(", ")))
}

fn criterion_2_simple_orthogonal() -> Outcome {
    let unit = lk_simple_orthogonal(1.0, 1.0, 1.0).unwrap();
    let general = lk_from_invariants(&SegmentPairInvariants::new(
        FRAC_PI_2, 1.0, 0.0, 1.0, 0.0, 1.0,
    ))
    .value;
    let mut ok = (unit + 1.0 / 24.0).abs() < COR1_TOL && (general + 1.0 / 24.0).abs() < COR1_TOL;

    let grid: Vec<f64> = (0..20).map(|i| 0.1 + 9.9 * i as f64 / 19.0).collect();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &l1 in &grid {
        for &l2 in &grid {
            for &d in &grid {
                let v = lk_simple_orthogonal(l1, l2, d).unwrap();
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    ok &= lo > -0.125 && hi < 0.0;
    (
        ok,
        format!("unit pair {unit:.17e}, general {general:.17e}; grid range [{lo:.6e}, {hi:.6e}]"),
    )
}

fn criterion_3_oracle_agreement() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut rng = seeded(ORACLE_SEED);
    let start = Instant::now();
    let mut worst = [0.0_f64; 3];
    let mut errors = 0;
    for _ in 0..ORACLE_PAIRS {
        let (s1, s2) = random_skew_pair(&mut rng, &SkewPairBounds::default());
        let inv = extract_invariants(&s1, &s2);
        let exact = lk_from_invariants(&inv).value;
        let oracles = [
            gauss_lk_segments(&s1, &s2, &cfg),
            reduced_double_integral(&inv, &cfg),
            lk_single_integral(&inv, &cfg),
        ];
        for (w, o) in worst.iter_mut().zip(oracles) {
            match o {
                Ok(v) => *w = w.max((v - exact).abs()),
                Err(_) => errors += 1,
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = errors == 0 && worst.iter().all(|&w| w < ORACLE_TOL) && elapsed < ORACLE_TIME;
    (ok, format!(
            "max |closed - gauss| {:.2e}, |closed - reduced| {:.2e}, |closed - single| {:.2e}; {errors} oracle errors; {elapsed:?}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn criterion_4_antiderivative() -> Outcome {
    let mut worst = 0.0_f64;
    for alpha in [FRAC_PI_6, FRAC_PI_2, 5.0 * FRAC_PI_6] {
        for p in -2..=2 {
            for r in -2..=2 {
                let (a, n) = antiderivative_check(p as f64, r as f64, alpha, ANTIDERIVATIVE_STEP);
                worst = worst.max((a - n).abs());
            }
        }
    }
    let ok = worst < ANTIDERIVATIVE_TOL;
    (ok, format!("max deviation {worst:.2e}"))
}

fn random_polygon(rng: &mut linkseg::sampling::SweepRng, n: usize) -> Vec<linkseg::Vec3> {
    (0..n).map(|_| random_point(rng, 3.0)).collect()
}

fn criterion_5_property_suite() -> Outcome {
    let mut rng = seeded(PROPERTY_SEED);
    let bounds = SkewPairBounds {
        half_width: 5.0,
        min_length: 0.1,
        min_distance: 1e-3,
        min_sin_alpha: 1e-3,
    };
    let mut worst_sym = 0.0_f64;
    let mut worst_rev = 0.0_f64;
    let mut worst_scale = 0.0_f64;
    let mut worst_refl = 0.0_f64;
    let mut worst_central = 0.0_f64;
    let mut max_abs = 0.0_f64;
    let mut sign_failures = 0;
    for _ in 0..PROPERTY_PAIRS {
        let (s1, s2) = random_skew_pair(&mut rng, &bounds);
        let v = lk(&s1, &s2);
        worst_sym = worst_sym.max((v - lk(&s2, &s1)).abs());
        worst_rev = worst_rev
            .max((v + lk(&s1.reversed(), &s2)).abs())
            .max((v + lk(&s1, &s2.reversed())).abs());
        for lambda in [0.1, 3.0, 100.0] {
            let w = lk(&s1.map(|p| p * lambda), &s2.map(|p| p * lambda));
            worst_scale = worst_scale.max((v - w).abs() / v.abs());
        }
        let m = random_reflection(&mut rng, 10.0);
        worst_refl = worst_refl.max((v + lk(&m.apply_segment(&s1), &m.apply_segment(&s2))).abs());

        let inv = extract_invariants(&s1, &s2);
        let mut mirrored = extract_invariants(&s1.map(|p| -p), &s2.map(|p| -p));
        mirrored.d = -mirrored.d;
        worst_central = worst_central.max(inv.max_field_diff(&mirrored));

        max_abs = max_abs.max(v.abs());
        if inv.d != 0.0 && v.signum() != -inv.d.signum() {
            sign_failures += 1;
        }
    }

    let mut worst_subdiv = 0.0_f64;
    let mut links = 0;
    while links < PROPERTY_PAIRS {
        let p = random_polygon(&mut rng, 5);
        let q = random_polygon(&mut rng, 4);
        let link = PolyLink::closed(p, q);
        let Ok(base) = lk_link(&link) else { continue };
        links += 1;
        let mut finer = link.clone();
        let edge = links % 5;
        let t = 0.1 + 0.8 * (links as f64 / PROPERTY_PAIRS as f64);
        let a = finer.comp1[edge];
        let b = finer.comp1[(edge + 1) % 5];
        finer.comp1.insert(edge + 1, a + (b - a) * t);
        let split = lk_link(&finer).unwrap();
        worst_subdiv = worst_subdiv.max((base.lk_total - split.lk_total).abs());
    }

    let checks = [
        ("symmetry", worst_sym, worst_sym <= PROPERTY_TOL),
        ("reversal", worst_rev, worst_rev <= PROPERTY_TOL),
        ("scale (relative)", worst_scale, worst_scale <= PROPERTY_TOL),
        ("reflection", worst_refl, worst_refl <= PROPERTY_TOL),
        (
            "central symmetry",
            worst_central,
            worst_central <= CENTRAL_TOL,
        ),
        ("max |lk|", max_abs, max_abs < 0.5),
        ("sign failures", sign_failures as f64, sign_failures == 0),
        ("subdivision", worst_subdiv, worst_subdiv <= PROPERTY_TOL),
    ];
    let ok = checks.iter().all(|c| c.2);
    let detail = checks
        .iter()
        .map(|(n, v, p)| format!("{n} {v:.2e}{}", if *p { "" } else { " FAILED" }))
        .collect::<Vec<_>>()
        .join(", ");
    (ok, detail)
}

fn criterion_6_limits() -> Outcome {
    let disjoint = |d| SegmentPairInvariants::new(FRAC_PI_2, d, 1.0, 2.0, 1.0, 2.0);
    let crossing = |d| SegmentPairInvariants::new(FRAC_PI_2, d, -1.0, 1.0, -1.0, 1.0);
    let value = |inv: SegmentPairInvariants| lk_from_invariants(&inv).value;

    let mut rows = Vec::new();
    for d in [1e-6, -1e-6] {
        let v = value(disjoint(d));
        rows.push((format!("disjoint d={d:e}"), v, v.abs() < LIMIT_TOL));
        let v = value(crossing(d));
        rows.push((
            format!("crossing d={d:e}"),
            v,
            (v + d.signum() / 2.0).abs() < LIMIT_TOL,
        ));
    }
    let v = value(SegmentPairInvariants::new(
        FRAC_PI_2, 1e6, -0.5, 0.5, -0.5, 0.5,
    ));
    rows.push(("d=1e6".into(), v, v.abs() < LIMIT_TOL));
    let v = value(SegmentPairInvariants::new(1e-8, 1.0, -0.5, 0.5, -0.5, 0.5));
    rows.push(("alpha=1e-8".into(), v, v.abs() < LIMIT_TOL));

    let ok = rows.iter().all(|r| r.2);
    let detail = rows
        .iter()
        .map(|(n, v, _)| format!("{n}: {v:.3e}"))
        .collect::<Vec<_>>()
        .join(", ");
    (ok, detail)
}

fn criterion_7_periodic_convergence() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (k, n_max, target) in [(1usize, 100usize, 0.30), (2, 40, 0.29), (3, 12, 0.30)] {
        let rows = convergence_scan(&default_lattice(k, 0).unwrap(), n_max).unwrap();
        let last = rows.last().unwrap().partial_lk;
        let near = (last - target).abs() < PERIODIC_TOL;
        let shrinking = rows[10..]
            .windows(2)
            .all(|w| w[1].delta.abs() <= w[0].delta.abs() + DELTA_NOISE);
        ok &= near && shrinking;
        detail.push(format!(
            "k={k} n={n_max}: {last:.6} vs {target} ({}), deltas {}",
            if near { "ok" } else { "off" },
            if shrinking {
                "shrinking"
            } else {
                "not shrinking"
            }
        ));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < PERIODIC_TIME;
    (ok, format!("{}; {elapsed:?}", detail.join("; ")))
}

fn criterion_8_round_trip() -> Outcome {
    let mut rng = seeded(ROUND_TRIP_SEED);
    let mut worst = 0.0_f64;
    let mut failures = 0;
    let bounds = InvariantBounds {
        alpha_margin: 0.1,
        d_min: 0.1,
        d_max: 10.0,
        coord_max: 10.0,
        min_length: 1e-3,
    };
    for _ in 0..ROUND_TRIP_TUPLES {
        let inv = random_invariants_with(&mut rng, &bounds);
        match reconstruct_segments(&inv) {
            Ok((s1, s2)) => worst = worst.max(extract_invariants(&s1, &s2).max_field_diff(&inv)),
            Err(_) => failures += 1,
        }
    }
    let ok = failures == 0 && worst < ROUND_TRIP_TOL;
    (
        ok,
        format!("max field error {worst:.2e}; {failures} rejected"),
    )
}

fn main() {
    let criteria: [fn() -> Outcome; 8] = [
        criterion_1_fixture_links,
        criterion_2_simple_orthogonal,
        criterion_3_oracle_agreement,
        criterion_4_antiderivative,
        criterion_5_property_suite,
        criterion_6_limits,
        criterion_7_periodic_convergence,
        criterion_8_round_trip,
    ];
    let mut failed = Vec::new();
    for (i, check) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        println!(
            "criterion {}: {} ({detail})",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
