//! Acceptance criteria, one line each. Run with
//! `cargo test -p aflab --test acceptance`.

use std::f64::consts::PI;
use std::time::Instant;

use aflab::checks::{convergence_study, registry, run_suite, CheckKind, CheckResult, OriginPolicy, RunOptions, Verdict};
use aflab::families::{convex_family, radial_family};
use aflab::geometry::{HarmonicTerm, Representation, SampleSet, Shape, SphereGrid};
use aflab::jensen::{jensen_deficit, phi_catalog, PhiFamily};
use aflab::measures::{l2_distance_support, mean_width, quermass, steiner_point, weighted_curvature_integral, weighted_l2_distance_sq};
use aflab::oracle::{ellipse_reference, offcenter_ball_reference};
use aflab::symfun::{elem_sym, newton_eigen, newton_shape_quadratic, CurvatureTuple};
use aflab::Error;
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn s1() -> SphereGrid {
    SphereGrid::s1(128).unwrap()
}

fn s2() -> SphereGrid {
    SphereGrid::s2(48, 96).unwrap()
}

fn grid_for(n: usize) -> SphereGrid {
    if n == 1 {
        s1()
    } else {
        s2()
    }
}

fn origin(n: usize) -> Vec<f64> {
    vec![0.0; n + 1]
}

fn off(n: usize) -> Vec<f64> {
    let mut c = origin(n);
    c[0] = 0.3;
    c
}

fn run_all(shape: &Shape, grid: &SphereGrid) -> Vec<CheckResult> {
    run_suite(shape, grid, &["all".into()], &RunOptions::default()).unwrap()
}

fn is_identity_family(id: &str) -> bool {
    ["af-identity-", "supp-identity-", "thm1-identity", "minkowski-", "weighted-minkowski-"]
        .iter()
        .any(|p| id.starts_with(p))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut shapes = Vec::new();
    for n in [1, 2] {
        for repr in [Representation::Support, Representation::Radial] {
            shapes.push(Shape::ball(n, 1.0, &origin(n), repr).unwrap());
            shapes.push(Shape::ball(n, 1.0, &off(n), repr).unwrap());
        }
    }
    shapes.push(Shape::ellipsoid(&[2.0, 1.0], &[0.0, 0.0], Representation::Support).unwrap());
    shapes.push(Shape::ellipsoid(&[2.0, 1.0], &[0.0, 0.0], Representation::Parametric).unwrap());
    for n in [1, 2] {
        shapes.extend(convex_family(n, 20, 11 + n as u64, &grid_for(n)).unwrap());
    }
    let mut worst = (0.0f64, String::new());
    let mut count = 0;
    let mut bad = Vec::new();
    for shape in &shapes {
        let ids: Vec<String> = registry(shape.dim())
            .into_iter()
            .filter(|s| s.kind == CheckKind::Identity && is_identity_family(&s.id))
            .map(|s| s.id)
            .collect();
        for r in run_suite(shape, &grid_for(shape.dim()), &ids, &RunOptions::default()).unwrap() {
            count += 1;
            let rel = r.relative_residual();
            if r.verdict != Verdict::Pass || !(rel < 1e-9) {
                bad.push(format!("{} ({}, rel {rel:.2e})", r.id, r.verdict));
            }
            if rel > worst.0 {
                worst = (rel, r.id.clone());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && secs < 60.0,
        format!(
            "{count} identity results on {} shapes, max relative residual {:.2e} ({}), {secs:.1} s (limit 60 s){}",
            shapes.len(),
            worst.0,
            worst.1,
            if bad.is_empty() { String::new() } else { format!(", failing: {}", bad.join(", ")) }
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let mut near = |name: &str, value: f64, target: f64, tol: f64| {
        let pass = (value - target).abs() <= tol;
        ok &= pass;
        notes.push(format!("{name} {value:.10} vs {target:.10}{}", if pass { "" } else { " MISMATCH" }));
    };
    let ball = Shape::ball(2, 1.0, &off(2), Representation::Support).unwrap();
    let set = ball.sample(&s2()).unwrap();
    let closed = offcenter_ball_reference(1.0, &off(2), 2).unwrap();
    let x2 = weighted_curvature_integral(&set, 2, |a| a.x2).unwrap();
    // The stated target 13.6973097 is a digit slip for 4π(1 + 0.09).
    near("int H2|X|^2", x2, closed["x2_h2"], 1e-6);
    near("int H2|X|^2 closed form", closed["x2_h2"], 4.0 * PI * 1.09, 1e-12);
    let thm1 = &run_suite(&ball, &s2(), &["thm1-identity".into()], &RunOptions::default()).unwrap()[0];
    near("thm1 lhs", thm1.lhs, 1.130_973_4, 1e-6);
    near("thm1 rhs", thm1.rhs, 1.130_973_4, 1e-6);
    near("delta_2^2", thm1.detail("delta2_sq").unwrap(), 0.376_991_1, 1e-6);

    let circle = Shape::ball(1, 1.0, &off(1), Representation::Support).unwrap();
    let af = &run_suite(&circle, &s1(), &["af-identity-1".into()], &RunOptions::default()).unwrap()[0];
    near("circle af lhs", af.lhs, 0.282_743_3, 1e-7);
    near("circle af rhs", af.rhs, 0.282_743_3, 1e-7);
    near("circle af lhs vs pi*0.09", af.lhs, PI * 0.09, 1e-8);
    near("circle af rhs vs pi*0.09", af.rhs, PI * 0.09, 1e-8);

    let ellipse = Shape::ellipsoid(&[2.0, 1.0], &[0.0, 0.0], Representation::Parametric).unwrap();
    let length = quermass(&ellipse.sample(&s1()).unwrap(), 0).unwrap();
    let agm = ellipse_reference(2.0, 1.0).unwrap().length;
    near("ellipse L vs AGM", length, agm, 1e-6);
    near("ellipse L", length, 9.688_448_2, 1e-6);
    outcome(ok, notes.join("; "))
}

/// Sandwich-bound verdicts collected while running the inequality suite.
#[derive(Default)]
struct Sandwich {
    passed: usize,
    failed: Vec<String>,
}

/// Runs every registered check on the four random families. Returns the
/// sandwich verdicts of every shape and every 20th sample set for reuse by
/// the Jensen criterion.
fn criterion_3() -> (Outcome, Sandwich, Vec<SampleSet>) {
    let start = Instant::now();
    let mut fails = Vec::new();
    let (mut inequalities, mut skipped) = (0, 0);
    let mut kept = Vec::new();
    let mut sandwich = Sandwich::default();
    for (n, seed) in [(1, 301), (2, 302)] {
        let grid = grid_for(n);
        let convex = convex_family(n, 100, seed, &grid).unwrap();
        let radial = radial_family(n, 100, seed + 10, &grid).unwrap();
        for (i, shape) in convex.iter().chain(&radial).enumerate() {
            let results = run_all(shape, &grid);
            for r in &results {
                if r.kind == CheckKind::Inequality {
                    match r.verdict {
                        Verdict::Pass => inequalities += 1,
                        Verdict::SkippedHypothesis => skipped += 1,
                        Verdict::Fail => {}
                    }
                }
                if r.id.starts_with("supp-jensen-bounds-") {
                    match r.verdict {
                        Verdict::Pass => sandwich.passed += 1,
                        Verdict::Fail => sandwich.failed.push(format!("n={n} shape {i}: {}", r.id)),
                        Verdict::SkippedHypothesis => {}
                    }
                }
                if r.verdict == Verdict::Fail {
                    fails.push(format!("n={n} shape {i}: {} slack {:.3e} tol {:.3e}", r.id, r.residual_or_slack, r.tol));
                }
            }
            if i % 20 == 0 {
                kept.push(shape.sample(&grid).unwrap());
            }
        }
    }
    let o = outcome(
        fails.is_empty(),
        format!(
            "400 shapes, {inequalities} inequality passes, {skipped} skipped on unmet hypotheses, {} fails, {:.1} s{}",
            fails.len(),
            start.elapsed().as_secs_f64(),
            if fails.is_empty() { String::new() } else { format!(": {}", fails.join("; ")) }
        ),
    );
    (o, sandwich, kept)
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    for n in [1, 2] {
        for (r, repr) in [(1.0, Representation::Support), (0.7, Representation::Radial), (1.4, Representation::Parametric)] {
            if n == 2 && repr == Representation::Parametric {
                continue;
            }
            let ball = Shape::ball(n, r, &origin(n), repr).unwrap();
            for res in run_all(&ball, &grid_for(n)) {
                // The minimizer comparison measures the probe offset, not a deficit.
                if res.id == "steiner-min" {
                    continue;
                }
                let rel = res.relative_residual();
                worst = worst.max(rel);
                if res.verdict != Verdict::Pass || !(rel < 1e-9) {
                    bad.push(format!("n={n} {repr:?} {} rel {rel:.2e}", res.id));
                }
            }
        }
    }
    let ids: Vec<String> = ["af-identity-1", "hn-x2", "rn-log-1", "thm1-identity"].iter().map(|s| s.to_string()).collect();
    let mut smallest = f64::INFINITY;
    let mut bodies = 0;
    for n in [1usize, 2] {
        for degree in 2..=if n == 1 { 4 } else { 3 } {
            let orders = if n == 1 { [degree as i64, -(degree as i64)] } else { [degree as i64, -1] };
            for order in orders {
                let body = Shape::support_harmonic(n, 1.0, vec![HarmonicTerm::new(degree, order, 0.1)], &origin(n)).unwrap();
                bodies += 1;
                for r in run_suite(&body, &grid_for(n), &ids, &RunOptions::default()).unwrap() {
                    let margin = match r.id.as_str() {
                        "af-identity-1" => r.detail("distance_term").unwrap_or(f64::NAN),
                        "thm1-identity" => r.lhs,
                        _ => r.residual_or_slack,
                    };
                    smallest = smallest.min(margin);
                    if r.verdict != Verdict::Pass || !(margin > 1e-5) {
                        bad.push(format!("n={n} Y({degree},{order}) {} margin {margin:.2e}", r.id));
                    }
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "centered balls: max relative deficit {worst:.2e} (limit 1e-9, steiner-min excluded); {bodies} perturbed bodies: smallest strict margin {smallest:.3e} (limit 1e-5){}",
            if bad.is_empty() { String::new() } else { format!("; failing: {}", bad.join(", ")) }
        ),
    )
}

fn criterion_5(sandwich: &Sandwich, sets: &[SampleSet]) -> Outcome {
    let mut bad = sandwich.failed.clone();
    let square = phi_catalog(PhiFamily::Square).unwrap();
    let mut worst = 0.0f64;
    let mut compared = 0;
    for set in sets {
        for k in 0..=set.dim() {
            let deficit = match jensen_deficit(set, k, &square) {
                Ok(d) => d,
                Err(Error::Hypothesis(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            let i_k = quermass(set, k as i32).unwrap();
            let r = quermass(set, k as i32 - 1).unwrap() / i_k;
            let dist = weighted_l2_distance_sq(set, k, r).unwrap();
            // Second route: the expanded square ∫H_k u² − I_k ū².
            let expanded = weighted_curvature_integral(set, k, |a| a.u * a.u).unwrap() - i_k * r * r;
            for other in [deficit, expanded] {
                let rel = (other - dist).abs() / dist.abs().max(f64::MIN_POSITIVE);
                worst = worst.max(rel);
                if !(rel < 1e-9) {
                    bad.push(format!("square k={k}: {other:.6e} vs {dist:.6e}"));
                }
            }
            compared += 1;
        }
    }
    outcome(
        bad.is_empty() && compared > 0 && sandwich.passed > 0,
        format!(
            "{} sandwich checks hold on the 400 random shapes; square deficit vs delta_2k^2 on {compared} (shape, k) pairs by two routes, max relative gap {worst:.2e} (limit 1e-9){}",
            sandwich.passed,
            if bad.is_empty() { String::new() } else { format!("; failing: {}", bad.join(", ")) }
        ),
    )
}

fn support_of_ball(grid: &SphereGrid, center: &Vector3<f64>, radius: f64) -> Vec<f64> {
    grid.nodes().iter().map(|x| radius + center.dot(x)).collect()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1e);
    let mut bad = Vec::new();
    let mut worst_z = 0.0f64;
    for n in [1usize, 2] {
        let grid = grid_for(n);
        for repr in [Representation::Support, Representation::Radial] {
            let c: Vec<f64> = (0..=n).map(|_| rng.gen_range(-0.5..0.5)).collect();
            let set = Shape::ball(n, 1.2, &c, repr).unwrap().sample(&grid).unwrap();
            let z = match set.support_field() {
                Some(h) => steiner_point(h, &grid),
                None => aflab::measures::steiner_point_samples(&set),
            };
            let err = (0..=n).map(|i| (z[i] - c[i]).abs()).fold(0.0, f64::max);
            worst_z = worst_z.max(err);
            if !(err < 1e-10) {
                bad.push(format!("z(ball + c) off by {err:.2e} (n={n}, {repr:?})"));
            }
        }
    }

    let mut worst_pyth = 0.0f64;
    let mut slacks = 0;
    for n in [1usize, 2] {
        let grid = grid_for(n);
        let bodies = convex_family(n, 20, 11 + n as u64, &grid).unwrap();
        for body in &bodies {
            let h = body.sample(&grid).unwrap().support_field().unwrap().to_vec();
            let z = steiner_point(&h, &grid);
            let hs = support_of_ball(&grid, &z, mean_width(&h, &grid) / 2.0);
            let d_s = l2_distance_support(&h, &hs, &grid).unwrap().powi(2);
            for _ in 0..50 {
                let mut c = Vector3::zeros();
                for i in 0..=n {
                    c[i] = rng.gen_range(-0.5..0.5);
                }
                let hb = support_of_ball(&grid, &c, rng.gen_range(0.5..1.5));
                let lhs = l2_distance_support(&h, &hb, &grid).unwrap().powi(2);
                let rhs = d_s + l2_distance_support(&hs, &hb, &grid).unwrap().powi(2);
                let rel = (lhs - rhs).abs() / lhs.max(rhs);
                worst_pyth = worst_pyth.max(rel);
                if !(rel < 1e-8) {
                    bad.push(format!("Pythagorean gap {rel:.2e}"));
                }
            }
            let opts = RunOptions {
                refine: true,
                origin_override: Some(OriginPolicy::SteinerPoint),
            };
            for r in run_suite(body, &grid, &["cor-isop".into(), "groemer-bound".into()], &opts).unwrap() {
                slacks += 1;
                if r.verdict != Verdict::Pass || r.origin != OriginPolicy::SteinerPoint {
                    bad.push(format!("{} slack {:.3e} tol {:.3e}", r.id, r.residual_or_slack, r.tol));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "Steiner point of translated balls off by at most {worst_z:.2e} (limit 1e-10); Pythagorean relation on 40 bodies x 50 balls, max relative gap {worst_pyth:.2e} (limit 1e-8); {slacks} cor-isop/groemer-bound slacks at the Steiner point non-negative{}",
            if bad.is_empty() { String::new() } else { format!("; failing: {}", bad.join(", ")) }
        ),
    )
}

fn criterion_7() -> Outcome {
    let ellipse = Shape::ellipsoid(&[2.0, 1.0], &[0.0, 0.0], Representation::Parametric).unwrap();
    let grids = [SphereGrid::s1(16).unwrap(), SphereGrid::s1(64).unwrap()];
    let rows = convergence_study(&ellipse, "af-identity-1", &grids).unwrap();
    let (coarse, fine) = (rows[0].residual_or_slack, rows[1].residual_or_slack);
    outcome(
        fine * 100.0 <= coarse,
        format!("af-identity-1 on the ellipse: residual {coarse:.3e} at N=16, {fine:.3e} at N=64 (ratio {:.2e}, need >= 100)", coarse / fine),
    )
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// `σ_k` of `values` with index `skip` removed, by subset enumeration, and
/// the sum of absolute products as a cancellation scale.
fn brute_sigma(values: &[f64], k: usize, skip: Option<usize>) -> (f64, f64) {
    let rest: Vec<f64> = values.iter().enumerate().filter(|(i, _)| Some(*i) != skip).map(|(_, v)| *v).collect();
    subsets(rest.len(), k).iter().fold((0.0, 0.0), |(s, a), sub| {
        let p: f64 = sub.iter().map(|&i| rest[i]).product();
        (s + p, a + p.abs())
    })
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5f);
    let mut worst = 0.0f64;
    let mut compared = 0;
    let mut rel = |got: f64, want: f64, scale: f64| {
        let e = (got - want).abs() / scale.max(want.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max(e);
        compared += 1;
    };
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let kappa: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let tuple = CurvatureTuple::new(&kappa).unwrap();
        for k in 0..=n {
            let (s, a) = brute_sigma(&kappa, k, None);
            rel(elem_sym(&tuple, k).unwrap(), s, a);
        }
        for k in 0..n {
            let eig = newton_eigen(&tuple, k).unwrap();
            for (i, t) in eig.iter().enumerate() {
                let (s, a) = brute_sigma(&kappa, k, Some(i));
                rel(*t, s, a);
            }
        }
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for k in 1..=n {
            let (mut want, mut scale) = (0.0, 0.0);
            for i in 0..n {
                let (s, a) = brute_sigma(&kappa, k - 1, Some(i));
                want += kappa[i] * s * v[i] * v[i];
                scale += (kappa[i] * v[i] * v[i]).abs() * a;
            }
            rel(newton_shape_quadratic(&tuple, k, &v).unwrap(), want, scale);
        }
    }
    outcome(
        worst < 1e-12,
        format!("{compared} comparisons on 1000 tuples (n <= 6), max relative error {worst:.2e} (limit 1e-12, relative to the absolute-term sum)"),
    )
}

/// Criterion numbers given on the command line select a subset; other
/// arguments (test-harness flags) are ignored.
fn main() {
    let chosen: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let want = |n: usize| chosen.is_empty() || chosen.contains(&n);
    let mut lines = Vec::new();
    let mut record = |n: usize, name: &str, o: Outcome| {
        let line = format!("criterion {n} [{name}]: {} {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        println!("{line}");
        lines.push(o.passed);
    };
    if want(1) {
        record(1, "identity suite", criterion_1());
    }
    if want(2) {
        record(2, "closed forms", criterion_2());
    }
    let mut jensen = None;
    if want(3) || want(5) {
        let (c3, sandwich, sets) = criterion_3();
        if want(3) {
            record(3, "inequality suite", c3);
        }
        if want(5) {
            jensen = Some(criterion_5(&sandwich, &sets));
        }
    }
    if want(4) {
        record(4, "equality characterization", criterion_4());
    }
    if let Some(o) = jensen {
        record(5, "Jensen sandwich", o);
    }
    if want(6) {
        record(6, "Steiner properties", criterion_6());
    }
    if want(7) {
        record(7, "convergence", criterion_7());
    }
    if want(8) {
        record(8, "symmetric functions", criterion_8());
    }
    let failed = lines.iter().filter(|p| !**p).count();
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
