//! Regenerates the sample inputs in `crates/cli/data`.
//!
//! ```text
//! cargo run -p fastimd-cli --example make_samples
//! ```

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use chrono::{Datelike, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn two_sines() -> String {
    let mut out = String::from("time,value\n");
    for i in 0..=2000 {
        let t = i as f64 * 0.005;
        let v = (40.0 * t).sin() + (5.0 * t).sin() + 0.2 * t;
        let _ = writeln!(out, "{t},{v}");
    }
    out
}

/// Five years of weekday closes from a geometric random walk.
fn daily_close() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let shock = Normal::new(0.0004, 0.012).unwrap();
    let mut out = String::from("Date,Open,High,Low,Close,Adj Close,Volume\n");
    let mut day = NaiveDate::from_ymd_opt(2015, 1, 2).unwrap();
    let mut close = 2500.0_f64;
    let mut rows = 0;
    while rows < 1260 {
        if !matches!(day.weekday(), Weekday::Sat | Weekday::Sun) {
            let open = close;
            close *= f64::exp(shock.sample(&mut rng));
            let high = open.max(close) * (1.0 + 0.004 * rng.random::<f64>());
            let low = open.min(close) * (1.0 - 0.004 * rng.random::<f64>());
            let volume: u64 = rng.random_range(1_000_000_000..3_000_000_000);
            let _ = writeln!(
                out,
                "{day},{open:.6},{high:.6},{low:.6},{close:.6},{:.6},{volume}",
                close * 0.98
            );
            rows += 1;
        }
        day = day.succ_opt().unwrap();
    }
    out
}

fn grey(width: usize, height: usize, f: impl Fn(f64, f64) -> f64) -> Vec<u8> {
    let mut px = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            px.push(f(x as f64, y as f64).clamp(0.0, 255.0).round() as u8);
        }
    }
    px
}

fn p5(width: usize, height: usize, px: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n# fastimd sample\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(px);
    out
}

fn p2(width: usize, height: usize, px: &[u8]) -> Vec<u8> {
    let mut out = format!("P2\n# fastimd sample\n{width} {height}\n255\n");
    for row in px.chunks(width) {
        let line: Vec<String> = row.iter().map(u8::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

fn gauss(x: f64, y: f64, cx: f64, cy: f64, s: f64) -> f64 {
    (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * s * s)).exp()
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("two_sines.csv"), two_sines()).unwrap();
    std::fs::write(dir.join("daily_close.csv"), daily_close()).unwrap();

    let n = 64;
    let grating = grey(n, n, |x, _| 128.0 + 100.0 * (2.0 * PI * x / 8.0).sin());
    std::fs::write(dir.join("grating64.pgm"), p5(n, n, &grating)).unwrap();

    let blobs = grey(n, n, |x, y| {
        40.0 + 1.5 * x + 0.5 * y + 120.0 * gauss(x, y, 20.0, 22.0, 7.0) - 60.0 * gauss(x, y, 45.0, 40.0, 10.0)
            + 12.0 * (0.9 * x).sin() * (0.7 * y).cos()
    });
    std::fs::write(dir.join("blobs64.pgm"), p2(n, n, &blobs)).unwrap();

    let rings = grey(n, n, |x, y| {
        let r = ((x - 31.5).powi(2) + (y - 31.5).powi(2)).sqrt();
        128.0 + 90.0 * (r / 3.0).cos()
    });
    std::fs::write(dir.join("rings64.pgm"), p5(n, n, &rings)).unwrap();

    let mut scene = format!("P6\n# fastimd sample\n{n} {n}\n255\n").into_bytes();
    for y in 0..n {
        for x in 0..n {
            let (xf, yf) = (x as f64, y as f64);
            let sky = yf < 24.0 + 6.0 * (xf / 9.0).sin();
            let (mut r, mut g, mut b) = if sky {
                (90.0 + yf * 2.0, 140.0 + yf * 2.0, 230.0)
            } else {
                (
                    70.0 + 25.0 * (xf * 1.3).sin(),
                    150.0 + 20.0 * (yf * 0.8 + xf * 0.3).cos(),
                    60.0,
                )
            };
            let sun = gauss(xf, yf, 48.0, 10.0, 4.0);
            r += 160.0 * sun;
            g += 120.0 * sun;
            b -= 80.0 * sun;
            if (20.0..36.0).contains(&xf) && (30.0..52.0).contains(&yf) {
                (r, g, b) = (170.0, 60.0, 50.0);
            }
            scene.extend([r, g, b].map(|c| c.clamp(0.0, 255.0).round() as u8));
        }
    }
    std::fs::write(dir.join("scene64.ppm"), scene).unwrap();
}
