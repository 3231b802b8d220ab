//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{kmax_tents, oracle_persistence, random_cloud, random_diagram, sort_triples};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdascan::anomaly::{ema_emvar_step, max_abs_z, run_pipeline, score_series, segment_norms, z_score};
use tdascan::io::{synth_generate, write_anomaly, Minute, ShockSpec, SynthSpec};
use tdascan::landscape::landscape_from_tents;
use tdascan::{
    build_filtration, build_landscape, compute_persistence, distance_matrix, landscape_norm, PersistenceDiagram,
    PipelineConfig, PointCloud, Tent,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn diagram(points: &[Vec<f64>]) -> PersistenceDiagram {
    let dm = distance_matrix(&PointCloud::new(points.to_vec()).unwrap());
    compute_persistence(&build_filtration(&dm, 2, None).unwrap()).unwrap()
}

fn persistence_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    for _ in 0..200 {
        let pts = random_cloud(&mut rng, 8, 3);
        let mut got: Vec<_> = diagram(&pts)
            .intervals()
            .iter()
            .filter(|i| i.dim <= 1)
            .map(|i| (i.dim, i.birth, i.death))
            .collect();
        sort_triples(&mut got);
        if got != oracle_persistence(&pts, 1) {
            mismatches += 1;
        }
    }
    let el = start.elapsed();
    outcome(
        mismatches == 0 && el < Duration::from_secs(60),
        format!("{mismatches} of 200 clouds differ from the rank oracle; {el:.2?} (limit 60s)"),
    )
}

fn landscape_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_rel, mut grid_misses) = (0.0f64, 0usize);
    for _ in 0..100 {
        let pairs = random_diagram(&mut rng, 15);
        let tents: Vec<Tent> = pairs.iter().map(|&(b, d)| Tent::new(b, d).unwrap()).collect();
        let l = landscape_from_tents(&tents);
        let norm = landscape_norm(&l, 1.0).unwrap();
        let area: f64 = pairs.iter().map(|(b, d)| (d - b) * (d - b) / 4.0).sum();
        if area > 0.0 {
            worst_rel = worst_rel.max((norm - area).abs() / area);
        } else if norm != 0.0 {
            worst_rel = f64::INFINITY;
        }
        for _ in 0..10_000 {
            let x = rng.gen_range(-0.5..4.0);
            let k = rng.gen_range(1..=pairs.len().max(1));
            // both sides evaluate the same piecewise-linear function; allow last-ulp rounding
            if l.eval(k, x) != kmax_tents(&pairs, k, x) {
                grid_misses += 1;
            }
        }
    }
    outcome(
        worst_rel <= 1e-10 && grid_misses == 0,
        format!("worst relative norm error {worst_rel:.2e} (limit 1e-10); {grid_misses} of 1e6 grid points differ"),
    )
}

fn unit_square() -> Outcome {
    let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
    let d = diagram(&pts);
    let h1: Vec<_> = d.in_dim(1).map(|i| (i.birth, i.death)).collect();
    let s2 = 2f64.sqrt();
    let norm = landscape_norm(&build_landscape(&d, &BTreeSet::from([1])), 1.0).unwrap();
    let want = (s2 - 1.0).powi(2) / 4.0;
    let ok = h1.len() == 1 && h1[0].0 == 1.0 && (h1[0].1 - s2).abs() <= 1e-12 && (norm - want).abs() <= 1e-12;
    outcome(ok, format!("H1 {h1:?}; norm {norm:.15} vs {want:.15}"))
}

fn recursion_fixture() -> Outcome {
    let ys = [1.0, 2.0, 3.0];
    let alpha = 0.5;
    let (mut ema, mut var) = (ys[0], 0.0);
    let mut z3 = None;
    for &y in &ys[1..] {
        z3 = z_score(y, ema, var, 0.0);
        let s = ema_emvar_step(ema, var, y, alpha);
        ema = s.ema;
        var = s.emvar;
    }
    let fixture_ok = ema == 2.25 && var == 0.34375 && z3 == Some(3.0);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(2..60);
        let ys: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
        let a = rng.gen_range(0.05..0.95);
        let (c, s) = (rng.gen_range(-50.0..50.0), rng.gen_range(0.1..10.0));
        let stamp = |v: &[f64]| -> Vec<(Minute, f64)> { v.iter().enumerate().map(|(i, &y)| (Minute(i as i64), y)).collect() };
        let base = score_series(&stamp(&ys), a, 0.0, 1);
        let shifted = score_series(&stamp(&ys.iter().map(|y| y + c).collect::<Vec<_>>()), a, 0.0, 1);
        let scaled = score_series(&stamp(&ys.iter().map(|y| y * s).collect::<Vec<_>>()), a, 0.0, 1);
        for ((b, sh), sc) in base.iter().zip(&shifted).zip(&scaled) {
            let shift_ok = (sh.ema - b.ema - c).abs() <= 1e-9 * (b.ema.abs() + c.abs())
                && (sh.emvar - b.emvar).abs() <= 1e-9 * b.emvar.max(1.0)
                && match (b.z, sh.z) {
                    (Some(x), Some(y)) => (x - y).abs() <= 1e-6 * x.abs().max(1.0),
                    (x, y) => x.is_none() == y.is_none(),
                };
            let scale_ok = (sc.ema - b.ema * s).abs() <= 1e-10 * (b.ema * s).abs()
                && (sc.emvar - b.emvar * s * s).abs() <= 1e-10 * (b.emvar * s * s)
                && match (b.z, sc.z) {
                    (Some(x), Some(y)) => (x - y).abs() <= 1e-10 * x.abs().max(1.0),
                    (x, y) => x.is_none() == y.is_none(),
                };
            if !(shift_ok && scale_ok) {
                bad += 1;
            }
        }
    }
    outcome(
        fixture_ok && bad == 0,
        format!("EMA3={ema} EMVar3={var} Z3={z3:?} (want 2.25, 0.34375, 3); {bad} equivariance violations over 1000 sequences"),
    )
}

const SHOCK_DAYS: usize = 5;
const MINUTES_PER_DAY: usize = 1430;

fn flash_crash() -> Outcome {
    let start_row = 3 * MINUTES_PER_DAY + 850;
    let shock = ShockSpec { start: start_row, depth: 0.06, duration: 36, vol_multiplier: 10.0 };
    let spec = SynthSpec { days: SHOCK_DAYS, minutes_per_day: MINUTES_PER_DAY, shock: Some(shock), ..SynthSpec::default() };
    let series = synth_generate(2010, &spec);
    let onset = series.timestamps()[start_row];
    let cfg = PipelineConfig::default();
    let alphas = [0.05, 0.1, 0.2];

    // one pass over the windows, then one recursion per alpha, as a sweep does
    let started = Instant::now();
    let ys = segment_norms(&series, &cfg).unwrap();
    let scored: Vec<_> = alphas
        .iter()
        .map(|&a| ys.iter().flat_map(|seg| score_series(seg, a, cfg.eps, cfg.warmup)).collect::<Vec<_>>())
        .collect();
    let el = started.elapsed();

    let mut ok = el < Duration::from_secs(120);
    let mut parts = Vec::new();
    for (recs, &alpha) in scored.iter().zip(&alphas) {
        let neighbourhood = |t: Minute| {
            let d = t.0 - onset.0;
            d >= -5 && d <= (shock.duration + cfg.window) as i64
        };
        let mut elsewhere: Vec<f64> = recs
            .iter()
            .filter(|r| !neighbourhood(r.timestamp))
            .filter_map(|r| r.z.map(f64::abs))
            .collect();
        elsewhere.sort_by(f64::total_cmp);
        let p99 = elsewhere[((elsewhere.len() as f64) * 0.99).ceil() as usize - 1];
        let (max, at) = max_abs_z(recs).unwrap_or((0.0, Minute(i64::MIN)));
        let lag = at.0 - onset.0;
        let hit = lag.abs() <= 5 && max > 10.0 * p99;
        ok &= hit;
        parts.push(format!("alpha {alpha}: max|Z| {max:.1} at onset{lag:+} min, p99 elsewhere {p99:.2}"));
    }
    outcome(ok, format!("{}; sweep {el:.1?} (limit 120s)", parts.join("; ")))
}

fn scan_bytes(threads: Option<usize>) -> Vec<u8> {
    let spec = SynthSpec { days: 2, minutes_per_day: 300, ..SynthSpec::default() };
    let series = synth_generate(6, &spec);
    let recs = run_pipeline(&series, &PipelineConfig { threads, ..Default::default() }).unwrap();
    let mut out = Vec::new();
    write_anomaly(&mut out, &recs, series.style()).unwrap();
    out
}

fn determinism() -> Outcome {
    let a = scan_bytes(Some(1));
    let b = scan_bytes(Some(4));
    let c = scan_bytes(None);
    let d = scan_bytes(Some(1));
    outcome(a == b && a == c && a == d, format!("{} bytes, 4 runs at 1/4/default/1 threads", a.len()))
}

fn throughput() -> Outcome {
    let spec = SynthSpec { minutes_per_day: MINUTES_PER_DAY, ..SynthSpec::default() };
    let series = synth_generate(7, &spec);
    let started = Instant::now();
    let recs = run_pipeline(&series, &PipelineConfig::default()).unwrap();
    let el = started.elapsed();
    outcome(
        el < Duration::from_secs(30),
        format!("{} windows in {el:.1?} on {} thread(s) (limit 30s)", recs.len(), rayon::current_num_threads()),
    )
}

fn main() {
    let checks: [(&str, fn() -> Outcome); 7] = [
        ("1 persistence oracle", persistence_oracle),
        ("2 landscape exactness", landscape_exactness),
        ("3 unit square", unit_square),
        ("4 EMA/EMVar recursion", recursion_fixture),
        ("5 synthetic flash crash", flash_crash),
        ("6 scan determinism", determinism),
        ("7 one-day throughput", throughput),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let o = check();
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
