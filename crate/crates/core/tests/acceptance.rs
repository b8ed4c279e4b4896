//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Reference numbers below were computed by hand from the closed-form
//! branch formulas and frozen; they are not produced by the library.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robust_duopoly::basins::{check_symmetry, compute_basins, GridSpec};
use robust_duopoly::dynamics1d::{
    chaotic_intervals, classify_regime, critical_orbit, find_two_cycles, fixed_points, homoclinic_value, lyapunov,
    Cycle, TwoCycle,
};
use robust_duopoly::dynamics2d::{
    attractor_catalog, classify_orbit, cycle_stability_2d, iterate_t, lift_cycles, step_t, OrbitLabel, Stability2D,
};
use robust_duopoly::model::{BestReplyMap, UncertaintySet};
use robust_duopoly::profit::profit_series;
use robust_duopoly::sweep::{bifurcation_1d, regime_map, BifurcationSpec, RegimeTag, SweepParam};

mod common;

use common::{brute_force_orbits, map};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);


// reference parameter sets: (b_hi, b_lo, g_hi, g_lo)
const REGIME_SETS: [(f64, f64, f64, f64); 6] = [
    (0.6, 0.2, 0.3, 0.0),
    (0.4, 0.1, 0.3, 0.0),
    (0.3, 0.15, 0.275, 0.0),
    (0.3, 0.1375, 0.275, 0.0),
    (0.3, 0.1, 0.25, 0.0),
    (0.3, 0.1, 0.28284275, 0.0),
];
const CHAOTIC: (f64, f64, f64, f64) = (0.6, 0.15, 0.5, 0.0);
const SINGLE_BAND: (f64, f64, f64, f64) = (0.33, 0.1, 0.3, 0.0);
const BAND_PAIR: (f64, f64, f64, f64) = (0.3, 0.1, 0.25, 0.0);
const SHIFTED: (f64, f64, f64, f64) = (0.29, 0.11, 0.235, 0.01);

fn m4(p: (f64, f64, f64, f64)) -> BestReplyMap {
    map(p.0, p.1, p.2, p.3)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn c1_regimes() -> Outcome {
    let start = Instant::now();
    let expected = ["I", "II", "IIIa", "IIIb", "IIIc", "IIId"];
    for (p, want) in REGIME_SETS.iter().zip(expected) {
        let got = classify_regime(&m4(*p)).tag();
        ensure(got == want, format!("{p:?}: expected {want}, got {got}"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!("I, II, IIIa, IIIb, IIIc, IIId in {t:?}"))
}

fn c2_closed_forms() -> Outcome {
    let m = m4(BAND_PAIR);
    // r = 0.25 / 0.2, x_l = 1 / (2 * 0.3 * r), x_u = 1 / (0.25 + 2 * 0.1 * r), x_m = 1 / 0.25
    let frozen = [
        ("r", m.r(), 1.25),
        ("x_l", m.x_l(), 4.0 / 3.0),
        ("x_u", m.x_u(), 2.0),
        ("x_m", m.x_m(), 4.0),
        ("x*_r", fixed_points(&m).point().unwrap(), 20.0 / 9.0),
    ];
    for (name, got, want) in frozen {
        ensure(close(got, want, 1e-10), format!("{name} = {got}, expected {want}"))?;
    }
    let cycles = find_two_cycles(&m);
    ensure(cycles.len() == 1, format!("{} two-cycles", cycles.len()))?;
    let TwoCycle::Isolated(c) = &cycles[0] else { return Err("two-cycle is a continuum".into()) };
    // middle/right pair: x1 = 1 / 0.5125, x2 = 1.25 * x1
    let mut pts = c.points.clone();
    pts.sort_by(f64::total_cmp);
    ensure(close(pts[0], 1.951_219_512_195_122, 1e-10) && close(pts[1], 2.439_024_390_243_902_4, 1e-10), format!("{pts:?}"))?;
    ensure(close(c.eigenvalue, -1.5625, 1e-10), format!("eigenvalue {}", c.eigenvalue))?;
    Ok("r, x_l, x_u, x_m, x*_r and the 2-cycle match to 1e-10".into())
}

fn c3_intervals() -> Outcome {
    let m = m4(BAND_PAIR);
    let b = chaotic_intervals(&m).map_err(|e| e.to_string())?;
    ensure(b.k == 1, format!("k = {}", b.k))?;
    let want = [(2.34375, 2.5), (1.875, 2.0703125)];
    for (got, want) in b.intervals.iter().zip(want) {
        ensure(close(got.0, want.0, 1e-10) && close(got.1, want.1, 1e-10), format!("{got:?} vs {want:?}"))?;
    }
    let (i1, i2) = (b.intervals[0], b.intervals[1]);
    let f1 = m.image_of_interval(i1.0, i1.1);
    ensure(close(f1.0, i2.0, 1e-10) && close(f1.1, i2.1, 1e-10), format!("f(I1) = {f1:?}"))?;
    let f2 = m.image_of_interval(i2.0, i2.1);
    ensure(f2.0 >= i1.0 - 1e-10 && f2.1 <= i1.1 + 1e-10, format!("f(I2) = {f2:?}"))?;

    let m5 = m4(SINGLE_BAND);
    let one = chaotic_intervals(&m5).map_err(|e| e.to_string())?;
    let c = critical_orbit(&m5, 2);
    // f(x_u) = 300/129, f^2(x_u) = 195/129
    ensure(close(c[0], 300.0 / 129.0, 1e-10) && close(c[1], 195.0 / 129.0, 1e-10), format!("{c:?}"))?;
    ensure(one.k == 0 && one.intervals.len() == 1, "single interval expected")?;
    ensure(close(one.intervals[0].0, c[1], 1e-10) && close(one.intervals[0].1, c[0], 1e-10), format!("{:?}", one.intervals))?;
    let h = homoclinic_value(&m5).unwrap();
    let xr = fixed_points(&m5).point().unwrap();
    ensure(h < xr, format!("homoclinic value {h} >= x*_r {xr}"))?;
    Ok(format!("I1, I2 exact, f(I1) = I2, f(I2) in I1; single interval with {h:.6} < x*_r = {xr:.6}"))
}

fn c4_lyapunov() -> Outcome {
    let mut parts = Vec::new();
    for (name, p) in [("single_band", SINGLE_BAND), ("band_pair", BAND_PAIR), ("chaotic", CHAOTIC)] {
        let m = m4(p);
        let l = lyapunov(&m, 0.37 * m.x_m(), 100_000).map_err(|e| e.to_string())?;
        ensure(l > 0.05, format!("{name}: {l}"))?;
        parts.push(format!("{name} {l:.4}"));
    }
    let d = m4(REGIME_SETS[3]);
    let x0 = 0.5 * (d.x_u() + d.apply(d.x_u()));
    let l = lyapunov(&d, x0, 100_000).map_err(|e| e.to_string())?;
    ensure(l.abs() <= 1e-10, format!("IIIb continuum: {l}"))?;
    for (name, p) in [("I", REGIME_SETS[0]), ("IIIa", REGIME_SETS[2])] {
        let m = m4(p);
        let l = lyapunov(&m, 0.37 * m.x_m(), 100_000).map_err(|e| e.to_string())?;
        ensure(l < 0.0, format!("{name}: {l}"))?;
        parts.push(format!("{name} {l:.4}"));
    }
    Ok(format!("{}, IIIb 0", parts.join(", ")))
}

fn c5_global_attraction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, p) in [("I", REGIME_SETS[0]), ("IIIa", REGIME_SETS[2])] {
        let m = m4(p);
        let xs = fixed_points(&m).point().unwrap();
        for _ in 0..1000 {
            let mut q = (rng.random_range(0.0..2.0 * m.x_m()), rng.random_range(0.0..2.0 * m.x_m()));
            let q0 = q;
            let mut steps = 0;
            while !(close(q.0, xs, 1e-8) && close(q.1, xs, 1e-8)) {
                q = step_t(&m, q);
                steps += 1;
                ensure(steps <= 1000, format!("{name}: {q0:?} not within 1e-8 after 1000 steps"))?;
            }
        }
    }
    Ok("2000 random starts reach the fixed point within 1000 steps".into())
}

fn c6_cycle_combinatorics() -> Outcome {
    let start = Instant::now();
    let sets: [&[usize]; 6] = [&[1], &[2], &[3], &[1, 1], &[2, 3], &[4]];
    for periods in sets {
        let mut base = 1.0;
        let pts: Vec<Vec<f64>> = periods
            .iter()
            .map(|&n| {
                let c: Vec<f64> = (0..n).map(|i| base + i as f64).collect();
                base += 10.0;
                c
            })
            .collect();
        let cycles: Vec<Cycle> =
            pts.iter().enumerate().map(|(i, p)| Cycle::new(p.clone(), 0.5 + i as f64).unwrap()).collect();
        let lifted = lift_cycles(&cycles).map_err(|e| e.to_string())?;
        let mut got: Vec<BTreeSet<(u64, u64)>> = lifted
            .iter()
            .map(|c| c.points.iter().map(|&(x, y)| (x.to_bits(), y.to_bits())).collect())
            .collect();
        let mut want = brute_force_orbits(&pts);
        got.sort();
        want.sort();
        ensure(got == want, format!("periods {periods:?}: lifted orbits differ from brute force"))?;
        for c in &lifted {
            ensure(c.points.len() == c.period, "period / point count mismatch")?;
        }
    }
    let values = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
    let expect = |l: f64, m: f64| {
        let (a, b) = (l.abs(), m.abs());
        if a == 1.0 || b == 1.0 {
            Stability2D::Marginal
        } else if a < 1.0 && b < 1.0 {
            Stability2D::StableNode
        } else if a > 1.0 && b > 1.0 {
            Stability2D::UnstableNode
        } else {
            Stability2D::Saddle
        }
    };
    for &l in &values {
        ensure(cycle_stability_2d(l, None).0 == expect(l, l), format!("singly {l}"))?;
        for &m in &values {
            ensure(cycle_stability_2d(l, Some(m)).0 == expect(l, m), format!("doubly {l}, {m}"))?;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!("6 cycle sets and 56 sign patterns in {t:?}"))
}

fn c7_catalog() -> Outcome {
    // groupings of band products, 1-based (i, j) for I_i x I_j
    let band_pair: Vec<Vec<(usize, usize)>> = vec![vec![(1, 1), (2, 2)], vec![(1, 2)], vec![(2, 1)]];
    let shifted: Vec<Vec<(usize, usize)>> = vec![
        vec![(1, 1), (2, 2), (3, 3), (4, 4)],
        vec![(1, 2), (3, 2), (3, 4), (1, 4)],
        vec![(2, 1), (2, 3), (4, 3), (4, 1)],
        vec![(1, 3), (4, 2), (3, 1), (2, 4)],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut detail = Vec::new();
    for (name, p, want) in [("band_pair", BAND_PAIR, band_pair), ("shifted", SHIFTED, shifted)] {
        let m = m4(p);
        let cat = attractor_catalog(&m).map_err(|e| e.to_string())?;
        ensure(cat.len() == want.len(), format!("{name}: {} attractors", cat.len()))?;
        let got: BTreeSet<BTreeSet<(usize, usize)>> = cat
            .attractors
            .iter()
            .map(|a| a.rectangles.iter().map(|r| (r.i + 1, r.j + 1)).collect())
            .collect();
        let want: BTreeSet<BTreeSet<(usize, usize)>> = want.into_iter().map(|g| g.into_iter().collect()).collect();
        ensure(got == want, format!("{name}: groupings {got:?}"))?;
        // T maps each rectangle into the next one of its attractor
        for a in &cat.attractors {
            for (k, r) in a.rectangles.iter().enumerate() {
                let nx = m.image_of_interval(r.y.0, r.y.1);
                let ny = m.image_of_interval(r.x.0, r.x.1);
                let s = a.rectangles[(k + 1) % a.rectangles.len()];
                let inside = |img: (f64, f64), tgt: (f64, f64)| img.0 >= tgt.0 - 1e-10 && img.1 <= tgt.1 + 1e-10;
                ensure(inside(nx, s.x) && inside(ny, s.y), format!("{name}: T(I{} x I{}) escapes", r.i + 1, r.j + 1))?;
            }
        }
        let mut unresolved = 0;
        for _ in 0..1000 {
            let q = (rng.random_range(0.0..m.x_m()), rng.random_range(0.0..m.x_m()));
            let tail = iterate_t(&m, q, 500, 2000).map_err(|e| e.to_string())?;
            if classify_orbit(&tail, &cat, 1e-6) == OrbitLabel::Unresolved {
                unresolved += 1;
            }
        }
        ensure(unresolved < 10, format!("{name}: {unresolved} unresolved orbits"))?;
        detail.push(format!("{name} {} attractors, {unresolved}/1000 unresolved", cat.len()));
    }
    Ok(detail.join("; "))
}

fn c8_basin_symmetry() -> Outcome {
    let mut detail = Vec::new();
    for (name, p) in [("band_pair", BAND_PAIR), ("shifted", SHIFTED)] {
        let m = m4(p);
        let spec = GridSpec::square(&m, 400);
        let start = Instant::now();
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let g = single.install(|| compute_basins(&m, &spec)).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        ensure(t <= Duration::from_secs(60), format!("{name}: single-worker grid took {t:?}"))?;
        let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let g4 = many.install(|| compute_basins(&m, &spec)).map_err(|e| e.to_string())?;
        ensure(g.labels == g4.labels, format!("{name}: labels depend on worker count"))?;
        let r = check_symmetry(&g).map_err(|e| e.to_string())?;
        ensure(r.fraction() >= 0.995, format!("{name}: symmetric fraction {}", r.fraction()))?;
        ensure(r.diagonal_on_attractor == r.diagonal_cells, format!("{name}: diagonal cell off its attractor"))?;
        detail.push(format!("{name} {:.4} in {:.1?}", r.fraction(), t));
    }
    Ok(detail.join("; "))
}

fn c9_bifurcation() -> Outcome {
    let base = UncertaintySet::unit(0.6, 0.2, 0.5, 0.0).unwrap();
    let step = 0.005;
    let mut spec = BifurcationSpec::new(SweepParam::BLo, 0.0, 0.4, 81);
    spec.burn = 5_000;
    spec.samples = 200;
    let d = bifurcation_1d(&base, &spec).map_err(|e| e.to_string())?;
    let mut single = Vec::new();
    for (i, &v) in d.values.iter().enumerate() {
        let n = d.distinct(i, 1e-8).ok_or(format!("column {v} skipped"))?;
        single.push(n == 1);
        if !(0.1 - 1e-3..=0.25 + 1e-3).contains(&v) {
            ensure(n == 1, format!("b_lo = {v}: {n} values"))?;
            let xs = fixed_points(&map(0.6, v, 0.5, 0.0)).point().unwrap();
            ensure(close(d.columns[i].as_ref().unwrap()[0], xs, 1e-8), format!("b_lo = {v}: not at x*"))?;
        }
        if (0.12 - 1e-9..=0.24 + 1e-9).contains(&v) {
            ensure(n >= 50, format!("b_lo = {v}: only {n} values"))?;
        }
    }
    let first_multi = single.iter().position(|s| !s).ok_or("no chaotic column")?;
    let last_multi = single.iter().rposition(|s| !s).unwrap();
    let lower = (d.values[first_multi - 1], d.values[first_multi]);
    let upper = (d.values[last_multi], d.values[last_multi + 1]);
    let brackets = |(a, b): (f64, f64), x: f64| a <= x + 1e-12 && x <= b + 1e-12 && b - a <= step + 1e-12;
    ensure(brackets(lower, 0.1), format!("lower transition {lower:?}"))?;
    ensure(brackets(upper, 0.25), format!("upper transition {upper:?}"))?;
    Ok(format!("transitions in [{:.3}, {:.3}] and [{:.3}, {:.3}]", lower.0, lower.1, upper.0, upper.1))
}

fn c10_regime_map() -> Outcome {
    let n = 200;
    let mut areas = Vec::new();
    for b_lo in [0.1, 0.15] {
        let g = regime_map(b_lo, 0.0, (0.0, 1.0), (0.0, 1.0), n, n).map_err(|e| e.to_string())?;
        // -1, 0 or 1 for below, on or above each curve
        let sign = |v: f64| if v.abs() <= 1e-12 { 0 } else { v.signum() as i32 };
        let r_sign = |(x, y): (f64, f64)| sign(y - b_lo - x);
        let flip_sign = |(x, _): (f64, f64)| sign(x - 2.0 * b_lo);
        let r_side = |p: (f64, f64)| r_sign(p) > 0;
        let flip_side = |p: (f64, f64)| flip_sign(p) > 0;
        for (a, b) in g.chaotic_boundary_pairs() {
            let (pa, pb) = (g.cell_center(a.0, a.1), g.cell_center(b.0, b.1));
            ensure(
                r_sign(pa) * r_sign(pb) <= 0 || flip_sign(pa) * flip_sign(pb) <= 0,
                format!("b_lo = {b_lo}: boundary pair {pa:?} / {pb:?} straddles no curve"),
            )?;
        }
        for iy in 0..n {
            for ix in 0..n {
                for (jx, jy) in [(ix + 1, iy), (ix, iy + 1)] {
                    if jx >= n || jy >= n {
                        continue;
                    }
                    let (ta, tb) = (g.tag(ix, iy), g.tag(jx, jy));
                    if ta == RegimeTag::OutOfDomain || tb == RegimeTag::OutOfDomain {
                        continue;
                    }
                    let (pa, pb) = (g.cell_center(ix, iy), g.cell_center(jx, jy));
                    let crosses_r = r_side(pa) != r_side(pb);
                    let crosses_flip = flip_side(pa) != flip_side(pb) && !r_side(pa) && !r_side(pb);
                    ensure(!(crosses_r || crosses_flip) || ta != tb, format!("no regime change across a curve at {pa:?}"))?;
                }
            }
        }
        areas.push(g.chaotic_area());
    }
    // strip 2 b_lo < g_hi, g_hi <= b_hi < g_hi + b_lo over the unit square
    let exact = [0.075, 0.09375];
    for (a, e) in areas.iter().zip(exact) {
        ensure(close(*a, e, 0.01), format!("area {a} vs {e}"))?;
    }
    ensure(areas[1] > areas[0], format!("areas {areas:?}"))?;
    Ok(format!("boundaries on r = 1 and g_hi = 2 b_lo; areas {:.4} < {:.4}", areas[0], areas[1]))
}

fn c11_profits() -> Outcome {
    let u = UncertaintySet::unit(CHAOTIC.0, CHAOTIC.1, CHAOTIC.2, CHAOTIC.3).unwrap();
    let s = profit_series(&u, 0.5, 10_000, 1_000).map_err(|e| e.to_string())?;
    let n = s.len() as f64;
    let gap = s.naivety_gap.iter().filter(|g| g.abs() > 1e-12).count() as f64 / n;
    let below = s.guaranteed_achievable.iter().zip(&s.max_guaranteed_expected).filter(|(a, b)| a < b).count() as f64 / n;
    let ordered = s.max_guaranteed_expected.iter().zip(&s.best_possible_expected).all(|(a, b)| a <= b);
    ensure(gap >= 0.3, format!("gap nonzero at {gap}"))?;
    ensure(below >= 0.3, format!("achievable below expected at {below}"))?;
    ensure(ordered, "worst-case expected payoff exceeds best case")?;
    Ok(format!("gap nonzero {:.1}%, achievable < expected {:.1}%, band ordered 100%", 100.0 * gap, 100.0 * below))
}

fn c12_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_duopoly");
    let six = ["--b-hi", "0.3", "--b-lo", "0.1", "--g-hi", "0.25", "--g-lo", "0"];
    let chaotic = ["--b-hi", "0.6", "--b-lo", "0.15", "--g-hi", "0.5", "--g-lo", "0"];
    let runs: Vec<Vec<&str>> = vec![
        [&["analyze"][..], &six].concat(),
        [&["simulate"][..], &six, &["--dim", "2", "--seed", "11"]].concat(),
        [&["simulate"][..], &chaotic, &["--seed", "3", "--burn", "100"]].concat(),
        [&["cycles"][..], &six].concat(),
        [&["bifurcate-1d"][..], &chaotic, &["--steps", "41"]].concat(),
        vec!["regime-map", "--b-lo", "0.1", "--g-lo", "0", "--nx", "60", "--ny", "60", "--verify", "10", "--seed", "2"],
        [&["basins"][..], &six, &["--n", "60"]].concat(),
        [&["profits"][..], &chaotic, &["--seed", "9"]].concat(),
    ];
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for (k, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for (rep, threads) in [(0, "1"), (1, "3")] {
            let dir = tmp.path().join(format!("{k}-{rep}"));
            let status = Command::new(bin)
                .args(args)
                .arg("--out-dir")
                .arg(&dir)
                .env("RAYON_NUM_THREADS", threads)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(status.status.success(), format!("{args:?}: {}", String::from_utf8_lossy(&status.stderr)))?;
            outputs.push(read_dir_bytes(&dir)?);
        }
        ensure(!outputs[0].is_empty(), format!("{args:?}: no output files"))?;
        ensure(outputs[0] == outputs[1], format!("{}: outputs differ between runs", args[0]))?;
        files += outputs[0].len();
    }
    Ok(format!("{} commands, {files} files byte-identical across runs and worker counts", runs.len()))
}

fn read_dir_bytes(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let e = e.map_err(|e| e.to_string())?;
        out.push((e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).map_err(|e| e.to_string())?));
    }
    out.sort();
    Ok(out)
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("regime classification", c1_regimes),
        ("closed-form map quantities", c2_closed_forms),
        ("chaotic intervals", c3_intervals),
        ("lyapunov exponents", c4_lyapunov),
        ("global attraction", c5_global_attraction),
        ("cycle combinatorics", c6_cycle_combinatorics),
        ("attractor catalog", c7_catalog),
        ("basin symmetry", c8_basin_symmetry),
        ("bifurcation diagram", c9_bifurcation),
        ("regime map", c10_regime_map),
        ("profit series", c11_profits),
        ("determinism", c12_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = format!("criterion {:02}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id.contains(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {id} {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id} {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
