//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test -p fastimd-cli --test acceptance -- --nocapture --test-threads=1`
//! to see them in order.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use fastimd::spline::{even_spline_system, min_points, Point};
use fastimd::{
    build_eef, build_even_spline, build_odd_spline, cumulative_integral, decompose, decompose_direction,
    decompose_direction_independent, decompose_image, find_extrema, fit_curve, sample_eef, BoundaryCondition,
    ControlPoints, Direction, KnotPlacement, PiecewisePoly, Selector, Series, Termination,
};
use fastimd_cli::pnm::read_image;
use fastimd_cli::series_csv::{read_series_csv, Layout, ReadOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{data, fastimd, golden_field, hash_dir};

const IMAGES: [&str; 4] = ["grating64.pgm", "blobs64.pgm", "rings64.pgm", "scene64.ppm"];

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id:>2} {} {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

fn times(rng: &mut ChaCha8Rng, n: usize, jitter: bool) -> Vec<f64> {
    let mut t = 0.0;
    (0..n)
        .map(|_| {
            let v = t;
            t += if jitter { rng.random_range(0.5..1.5) } else { 1.0 };
            v
        })
        .collect()
}

/// Sum of a few random sinusoids, a ramp and noise.
fn composite(rng: &mut ChaCha8Rng, t: &[f64]) -> Vec<f64> {
    let span = t[t.len() - 1] - t[0];
    let waves: Vec<(f64, f64, f64)> = (0..rng.random_range(1..=4))
        .map(|_| {
            let periods = rng.random_range(1.0..span / 6.0);
            (
                rng.random_range(0.2..3.0),
                2.0 * PI * periods / span,
                rng.random_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let slope = rng.random_range(-0.05..0.05);
    let offset = rng.random_range(-10.0..10.0);
    t.iter()
        .map(|&x| {
            offset
                + slope * x
                + waves.iter().map(|(a, w, p)| a * (w * x + p).sin()).sum::<f64>()
                + 0.05 * rng.random_range(-1.0..1.0)
        })
        .collect()
}

#[test]
fn criterion_01_eef_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut checked = 0;
    for case in 0..200 {
        let n = rng.random_range(10..=500);
        let t = times(&mut rng, n, case % 2 == 1);
        let v = composite(&mut rng, &t);
        let series = Series::new(t, v).unwrap();
        let keep: Vec<usize> = (1..n - 1).filter(|_| rng.random_bool(0.2)).collect();
        let mut control = ControlPoints::with_endpoints(keep, n).unwrap();
        if control.len() < 3 {
            control = ControlPoints::with_endpoints(vec![n / 2], n).unwrap();
        }
        let f = cumulative_integral(&series);
        for degree in 2..=5 {
            let eef = build_eef(
                &series,
                &control,
                degree,
                BoundaryCondition::Natural,
                BoundaryCondition::Natural,
            )
            .unwrap();
            for &i in control.indices() {
                let e = eef.integral_spline.evaluate(series.times()[i]).unwrap();
                worst = worst.max((e - f[i]).abs() / f[i].abs().max(1.0));
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        "EEF identity",
        worst <= 1e-9 && elapsed < Duration::from_secs(10),
        &format!("{checked} control points, worst scaled error {worst:.2e}, {elapsed:.2?}"),
    );
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> Vec<f64> {
    (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// `order`-th derivative of the polynomial with coefficients `c` at `x`.
fn poly_eval(c: &[f64], x: f64, order: usize) -> f64 {
    c.iter()
        .enumerate()
        .skip(order)
        .map(|(k, &ck)| ck * ((k - order + 1)..=k).map(|j| j as f64).product::<f64>() * x.powi((k - order) as i32))
        .sum()
}

fn dense_error(s: &PiecewisePoly, c: &[f64]) -> f64 {
    let (a, b) = (s.start(), s.end());
    (0..=2000)
        .map(|i| {
            let x = if i == 2000 { b } else { a + (b - a) * i as f64 / 2000.0 };
            let p = poly_eval(c, x, 0);
            (s.evaluate(x).unwrap() - p).abs() / p.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_02_spline_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut lines = Vec::new();
    let mut pass = true;
    // (degree, polynomial degree, boundary kind)
    let cases: [(usize, usize, &str); 6] = [
        (3, 1, "natural"),
        (5, 2, "natural"),
        (2, 2, "exact first derivative"),
        (3, 3, "exact first derivative"),
        (4, 4, "exact first and second derivatives"),
        (5, 5, "exact first and second derivatives"),
    ];
    for (degree, pdeg, kind) in cases {
        let mut worst = 0.0_f64;
        for _ in 0..100 {
            let n = rng.random_range(min_points(degree)..=40);
            let mut x = rng.random_range(-3.0..0.0);
            let c = random_poly(&mut rng, pdeg);
            let points: Vec<Point> = (0..n)
                .map(|_| {
                    let p = Point {
                        x,
                        y: poly_eval(&c, x, 0),
                    };
                    x += rng.random_range(0.05..0.3);
                    p
                })
                .collect();
            let (a, b) = (points[0].x, points[n - 1].x);
            let (left, right) = match kind {
                "natural" => (BoundaryCondition::Natural, BoundaryCondition::Natural),
                "exact first derivative" => (
                    BoundaryCondition::FirstDeriv(poly_eval(&c, a, 1)),
                    BoundaryCondition::FirstDeriv(poly_eval(&c, b, 1)),
                ),
                _ => (
                    BoundaryCondition::FirstAndSecondDeriv(poly_eval(&c, a, 1), poly_eval(&c, a, 2)),
                    BoundaryCondition::FirstAndSecondDeriv(poly_eval(&c, b, 1), poly_eval(&c, b, 2)),
                ),
            };
            let spline = if degree % 2 == 1 {
                build_odd_spline(&points, degree, left, right)
            } else {
                let alpha = rng.random_range(0.1..0.9);
                build_even_spline(&points, degree, KnotPlacement::new(alpha).unwrap(), left, right)
            }
            .unwrap();
            worst = worst.max(dense_error(&spline, &c));
        }
        pass &= worst <= 1e-8;
        lines.push(format!("deg {degree} ({kind}) on degree-{pdeg} data {worst:.1e}"));
    }
    report(2, "spline exactness", pass, &lines.join("; "));
}

#[test]
fn criterion_03_equation_count() {
    let mut bad = Vec::new();
    for n in 3..=50 {
        let points: Vec<Point> = (0..n)
            .map(|i| Point {
                x: i as f64,
                y: (i * i) as f64,
            })
            .collect();
        for (degree, factor) in [(2, 3), (4, 5)] {
            let (system, _) = even_spline_system(
                &points,
                degree,
                KnotPlacement::default(),
                BoundaryCondition::Natural,
                BoundaryCondition::Natural,
            )
            .unwrap();
            if system.unknowns() != factor * n || system.equation_count() != factor * n {
                bad.push(format!(
                    "degree {degree}, n {n}: {}x{}",
                    system.equation_count(),
                    system.unknowns()
                ));
            }
        }
    }
    report(
        3,
        "even spline equation count",
        bad.is_empty(),
        &if bad.is_empty() {
            "3n and 5n for n = 3..50".to_owned()
        } else {
            bad.join(", ")
        },
    );
}

#[test]
fn criterion_04_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0_f64;
    let mut increases = Vec::new();
    let mut other_stops = Vec::new();
    let mut counts = Vec::new();
    for case in 0..50 {
        let n = rng.random_range(200..=1000);
        let t = times(&mut rng, n, case % 2 == 1);
        let v = composite(&mut rng, &t);
        let series = Series::new(t, v).unwrap();
        let stack = decompose(&series, 5, 16).unwrap();
        let scale = series.values().iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        let err = stack
            .reconstruct()
            .iter()
            .zip(series.values())
            .map(|(r, v)| (r - v).abs() / scale)
            .fold(0.0, f64::max);
        worst = worst.max(err);
        let extrema: Vec<usize> = stack
            .modes
            .iter()
            .map(|m| find_extrema(m.trend.values()).len())
            .collect();
        if extrema.windows(2).any(|w| w[1] > w[0]) {
            increases.push(case);
        }
        match stack.terminated {
            Termination::ExtremaCountReached | Termination::MaxModesReached => {}
            other => other_stops.push(format!("case {case}: {other:?} with {extrema:?}")),
        }
        counts.push(stack.modes.len());
    }
    let pass = worst <= 1e-9 && increases.is_empty() && other_stops.is_empty();
    report(
        4,
        "reconstruction",
        pass,
        &format!(
            "worst scaled error {worst:.1e}; extrema increases in {increases:?}; other stops {other_stops:?}; \
             modes {}..{}",
            counts.iter().min().unwrap(),
            counts.iter().max().unwrap()
        ),
    );
}

#[test]
fn criterion_05_mode_separation() {
    let t: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.005).collect();
    let fast: Vec<f64> = t.iter().map(|x| (40.0 * x).sin()).collect();
    let slow: Vec<f64> = t.iter().map(|x| (5.0 * x).sin()).collect();
    let v = t.iter().map(|x| (40.0 * x).sin() + (5.0 * x).sin() + 0.2 * x).collect();
    let series = Series::new(t, v).unwrap();
    let start = Instant::now();
    let stack = decompose(&series, 5, 16).unwrap();
    let elapsed = start.elapsed();
    let best = |component: &[f64]| {
        stack
            .modes
            .iter()
            .map(|m| (m.index, correlation(m.fluctuation.values(), component)))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
    };
    let (fi, fc) = best(&fast);
    let (si, sc) = best(&slow);
    report(
        5,
        "two-sine mode separation",
        fc > 0.9 && sc > 0.9 && elapsed < Duration::from_secs(2),
        &format!(
            "sin 40t: mode {fi} r = {fc:.3}; sin 5t: mode {si} r = {sc:.3}; {} modes; {elapsed:.2?}",
            stack.modes.len()
        ),
    );
}

#[test]
fn criterion_06_stock_scale() {
    let options = ReadOptions {
        layout: Layout::YahooDaily,
        ..ReadOptions::default()
    };
    let series = read_series_csv(&data("daily_close.csv"), &options).unwrap();
    let stack = decompose(&series, 5, 16).unwrap();
    let count = stack.modes.len();
    let golden: usize = golden_field("daily_close.txt", "modes").parse().unwrap();
    report(
        6,
        "stock-scale mode count",
        (10..=99).contains(&count) && count == golden,
        &format!(
            "{} samples, {count} modes (golden {golden}), {:?}",
            series.len(),
            stack.terminated
        ),
    );
}

#[test]
fn criterion_07_slice_chaining() {
    let mut lines = Vec::new();
    let mut pass = true;
    for name in IMAGES {
        let image = read_image(&data(name)).unwrap();
        let start = Instant::now();
        let chained = decompose_direction(&image, Direction::Horizontal, 5).unwrap();
        let independent = decompose_direction_independent(&image, Direction::Horizontal, 5).unwrap();
        let a = fastimd::inter_slice_smoothness(&chained, Direction::Horizontal);
        let b = fastimd::inter_slice_smoothness(&independent, Direction::Horizontal);
        let elapsed = start.elapsed();
        let ok = a <= b && elapsed < Duration::from_secs(5);
        pass &= ok;
        lines.push(format!(
            "{name} {} chained {a:.3} vs independent {b:.3} ({elapsed:.2?})",
            if ok { "ok" } else { "worse" }
        ));
    }
    report(7, "2D slice chaining", pass, &lines.join("; "));
}

#[test]
fn criterion_08_image_reconstruction() {
    let mut lines = Vec::new();
    let mut pass = true;
    for name in IMAGES {
        let image = read_image(&data(name)).unwrap();
        let modes = decompose_image(&image, 5, 16).unwrap();
        let mut sum = modes.last().unwrap().trend.pixels().to_vec();
        for m in &modes {
            for (s, f) in sum.iter_mut().zip(m.fluctuation.pixels()) {
                *s += f;
            }
        }
        let err = sum
            .iter()
            .zip(image.pixels())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pass &= err <= 1e-9 * 255.0;
        lines.push(format!("{name} {} modes, max error {err:.1e}", modes.len()));
    }
    report(8, "2D reconstruction", pass, &lines.join("; "));
}

#[test]
fn criterion_09_cli_determinism() {
    let csv = data("two_sines.csv");
    let csv = csv.to_str().unwrap();
    let yahoo = data("daily_close.csv");
    let image = data("blobs64.pgm");
    let runs: [Vec<&str>; 6] = [
        vec!["decompose", csv, "--plot"],
        vec![
            "decompose",
            yahoo.to_str().unwrap(),
            "--layout",
            "yahoo",
            "--degree",
            "4",
        ],
        vec!["fit", csv, "--plot"],
        vec!["sample", csv, "--stride", "25", "--plot"],
        vec!["image", image.to_str().unwrap(), "--max-modes", "3"],
        vec!["eef", csv, "--plot"],
    ];
    let mut lines = Vec::new();
    let mut pass = true;
    for args in runs {
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        let hashes: Vec<_> = dirs
            .iter()
            .map(|d| {
                let mut a = args.clone();
                a.extend(["--out", d.path().to_str().unwrap()]);
                let out = fastimd(&a);
                assert_eq!(out.code, 0, "{a:?}: {}", out.stderr);
                hash_dir(d.path())
            })
            .collect();
        let same = hashes[0] == hashes[1] && !hashes[0].is_empty();
        pass &= same;
        lines.push(format!(
            "{} {} files {}",
            args[0],
            hashes[0].len(),
            if same { "identical" } else { "differ" }
        ));
    }
    report(9, "CLI determinism", pass, &lines.join("; "));
}

#[test]
fn criterion_10_fitting_and_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = [0.0_f64; 2];
    for case in 0..100 {
        let n = rng.random_range(20..=300);
        let t = times(&mut rng, n, case % 2 == 1);
        let scale = t[n - 1];
        for (slot, (degree, pdeg)) in [(5, 4), (3, 2)].into_iter().enumerate() {
            let c = random_poly(&mut rng, pdeg);
            let v: Vec<f64> = t.iter().map(|&x| poly_eval(&c, 2.0 * x / scale - 1.0, 0)).collect();
            let series = Series::new(t.clone(), v).unwrap();
            let fit = fit_curve(&series, degree).unwrap();
            let amplitude = series.values().iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            worst[slot] = worst[slot].max(fit.rms_error / amplitude);
        }
    }

    let t: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.01).collect();
    let series = Series::from_fn(t, |x| (20.0 * x).sin() + 1.0).unwrap();
    // One period of sin(20t) spans about 31 samples.
    let eef = sample_eef(&series, &Selector::Periodic(40), 5).unwrap();
    let f = cumulative_integral(&series);
    let control = fastimd::select_control(&Selector::Periodic(40), series.len(), 5).unwrap();
    let mut eef_err = 0.0_f64;
    let mut naive_err = 0.0_f64;
    let mut naive = 0.0;
    let idx = control.indices();
    for (k, &i) in idx.iter().enumerate() {
        let e = eef.integral_spline.evaluate(series.times()[i]).unwrap();
        eef_err = eef_err.max((e - f[i]).abs());
        if k > 0 {
            let j = idx[k - 1];
            let (tj, ti) = (series.times()[j], series.times()[i]);
            naive += 0.5 * (ti - tj) * (series.values()[i] + series.values()[j]);
        }
        naive_err = naive_err.max((naive - f[i]).abs());
    }

    let pass = worst[0] <= 1e-8 && worst[1] <= 1e-8 && eef_err <= 1e-7 && naive_err > 1e-7;
    report(
        10,
        "fitting and sampling",
        pass,
        &format!(
            "quintic fit of quartics rms {:.1e}, cubic fit of quadratics rms {:.1e}; \
             integral drift EEF {eef_err:.1e} vs decimation {naive_err:.2}",
            worst[0], worst[1]
        ),
    );
}
