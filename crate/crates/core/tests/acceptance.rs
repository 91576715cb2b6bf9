//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! A failing criterion is reported, not raised; the process only exits
//! nonzero when a criterion could not be evaluated at all.

use std::collections::HashSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use xyzdec::codes::{qubit_count, y_count};
use xyzdec::decoder::{build_weight_table, Decoder, DecoderKind};
use xyzdec::experiment::fit::{synthetic_points, FitErrors};
use xyzdec::experiment::{
    crossing_point, fit_threshold, is_logical_failure, jackknife, run_trials_on, BatchStats, FitPoint, FitResult,
    TrialConfig,
};
use xyzdec::matching::{build_decoding_graph, form_defect_graph, min_weight_perfect_matching};
use xyzdec::noise::{custom_params, resolve_params, sample_error, syndrome_of, trial_rng};
use xyzdec::{build_code, validate_layout, CodeKind, CodeLayout, NoiseParams, PauliString};

const REFERENCE_WEIGHTS: &str = include_str!("data/reference_weights.csv");

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn main() {
    let criteria: Vec<(&str, fn() -> Verdict)> = vec![
        ("weight-table reproduction", table_reproduction),
        ("structural suite", structural_suite),
        ("matching optimality", matching_optimality),
        ("syndrome consistency", syndrome_consistency),
        ("d=3 coset oracle", coset_oracle),
        ("xyz threshold crossing (eta=10)", xyz_crossing),
        ("planar threshold crossing (eta=inf)", planar_crossing),
        ("bias dominance at p=0.10", bias_dominance),
        ("custom-channel distance ordering", distance_ordering),
        ("fit recovery", fit_recovery),
        ("jackknife", jackknife_examples),
    ];
    let mut passed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let v = run();
        let secs = start.elapsed().as_secs_f64();
        passed += v.pass as usize;
        println!(
            "[{}] {name}: {} ({secs:.1} s)",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
}

fn table_reproduction() -> Verdict {
    let mut total = 0;
    let mut misses = Vec::new();
    let names = ["P_diff", "P_00", "P_11", "w_diff", "w_00", "w_11"];
    for line in REFERENCE_WEIGHTS.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let (eta, p, k) = (f[0], f[1], f[2] as usize);
        let params = resolve_params(p, eta).unwrap();
        let entry = *build_weight_table(&params).entry(k, k).unwrap();
        let ours = [entry.p_diff, entry.p_00, entry.p_11, entry.w_diff, entry.w_00, entry.w_11];
        for (i, (&mine, &theirs)) in ours.iter().zip(&f[3..]).enumerate() {
            total += 1;
            let delta = (mine - theirs).abs();
            if delta > 5e-6 {
                misses.push(format!(
                    "eta={eta} p={p} k={k} {}: table {theirs} vs {mine:.6}",
                    names[i]
                ));
            }
        }
    }
    let detail = if misses.is_empty() {
        format!("{total}/{total} values within 5e-6")
    } else {
        format!(
            "{}/{total} values within 5e-6; mismatches: {}",
            total - misses.len(),
            misses.join("; ")
        )
    };
    verdict(misses.is_empty(), detail)
}

fn structural_suite() -> Verdict {
    let mut problems = Vec::new();
    for d in [3, 5, 7, 9, 11] {
        for kind in [CodeKind::Planar, CodeKind::XyzPlanar] {
            let code = build_code(kind, d).unwrap();
            let report = validate_layout(&code);
            if !report.is_valid() {
                problems.push(format!("{kind} d={d}: {report}"));
            }
            if code.n() != 2 * d * d - 2 * d + 1 || code.n() != qubit_count(d) {
                problems.push(format!("{kind} d={d}: n = {}", code.n()));
            }
            let expected_y = if kind == CodeKind::XyzPlanar { (d - 1) / 2 * d } else { 0 };
            if code.y_qubit_count() != expected_y || (kind == CodeKind::XyzPlanar && y_count(d) != expected_y) {
                problems.push(format!("{kind} d={d}: {} Y qubits", code.y_qubit_count()));
            }
            // Exhaustive pairwise check, independent of the validator.
            let stabs: Vec<&PauliString> = code.stabilizers().collect();
            for (i, a) in stabs.iter().enumerate() {
                for b in &stabs[i + 1..] {
                    if a.symplectic_product(b).unwrap() != 0 {
                        problems.push(format!("{kind} d={d}: anticommuting stabilizers"));
                    }
                }
                for l in [code.logical_x(), code.logical_z()] {
                    if a.symplectic_product(l).unwrap() != 0 {
                        problems.push(format!("{kind} d={d}: logical fails to commute"));
                    }
                }
            }
            if code.logical_x().symplectic_product(code.logical_z()).unwrap() != 1 {
                problems.push(format!("{kind} d={d}: logicals commute"));
            }
        }
    }
    let ok = problems.is_empty();
    verdict(
        ok,
        if ok {
            "both codes valid for d = 3, 5, 7, 9, 11".to_string()
        } else {
            problems.join("; ")
        },
    )
}

/// Minimum total over all perfect matchings of `nodes` by recursion.
fn brute_force(w: &dyn Fn(usize, usize) -> f64, nodes: &[usize]) -> f64 {
    if nodes.is_empty() {
        return 0.0;
    }
    let first = nodes[0];
    let mut best = f64::INFINITY;
    for i in 1..nodes.len() {
        let rest: Vec<usize> = nodes[1..].iter().copied().filter(|&x| x != nodes[i]).collect();
        best = best.min(w(first, nodes[i]) + brute_force(w, &rest));
    }
    best
}

fn matching_optimality() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let codes = [build_code(CodeKind::XyzPlanar, 5).unwrap(), build_code(CodeKind::Planar, 7).unwrap()];
    let mut worst: f64 = 0.0;
    let mut instances = 0;
    let mut disagreements = 0;
    while instances < 1000 {
        let code = &codes[instances % 2];
        let check = if rng.gen_bool(0.5) { code.h_x() } else { code.h_z() };
        let probs: Vec<f64> = (0..code.n()).map(|_| rng.gen_range(0.001..0.6)).collect();
        let graph = build_decoding_graph(check, &probs).unwrap();
        let m = check.num_rows();
        let k = rng.gen_range(1..=8);
        let mut rows: Vec<usize> = (0..m).collect();
        rows.shuffle(&mut rng);
        let mut syndrome = vec![false; m];
        for &r in &rows[..k] {
            syndrome[r] = true;
        }
        let defects = form_defect_graph(&graph, &syndrome).unwrap();
        let matching = min_weight_perfect_matching(&defects).unwrap();
        let ours: f64 = matching.iter().map(|&(a, b)| defects.distance(a, b)).sum();
        let idx: Vec<usize> = (0..defects.len()).collect();
        let best = brute_force(&|a, b| defects.distance(a, b), &idx);
        let rel = (ours - best).abs() / best.max(1.0);
        worst = worst.max(rel);
        if rel > 1e-9 {
            disagreements += 1;
        }
        instances += 1;
    }
    verdict(
        disagreements == 0,
        format!("{instances} instances, {disagreements} above brute force; worst relative gap {worst:.1e}"),
    )
}

fn syndrome_consistency() -> Verdict {
    let combos = [
        (CodeKind::Planar, DecoderKind::Mwpm),
        (CodeKind::XyzPlanar, DecoderKind::Mwpm),
        (CodeKind::XyzPlanar, DecoderKind::Pmwpm),
    ];
    let mut violations = Vec::new();
    let mut trials = 0;
    for d in [3, 5, 7] {
        for (kind, decoder) in combos {
            let code = build_code(kind, d).unwrap();
            for eta in [1.0, 10.0, f64::INFINITY] {
                let cfg = TrialConfig::new(kind, d, resolve_params(0.15, eta).unwrap(), decoder, 10_000, 31);
                // run_trials_on checks every correction against its syndrome.
                match run_trials_on(&code, &cfg) {
                    Ok(s) => trials += s.trials,
                    Err(e) => violations.push(format!("{kind} {decoder} d={d} eta={eta}: {e}")),
                }
            }
        }
    }
    let ok = violations.is_empty();
    verdict(
        ok,
        if ok {
            format!("{trials} trials, 0 violations")
        } else {
            violations.join("; ")
        },
    )
}

fn key(op: &PauliString) -> (u32, u32) {
    let pack = |bits: Vec<bool>| bits.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | (b as u32) << i);
    (pack(op.x_bits()), pack(op.z_bits()))
}

fn coset_oracle() -> Verdict {
    let code = build_code(CodeKind::XyzPlanar, 3).unwrap();
    let gens: Vec<PauliString> = code.stabilizers().cloned().collect();
    let mut group = HashSet::new();
    for mask in 0u32..1 << gens.len() {
        let mut op = PauliString::identity(code.n());
        for (i, g) in gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                op.multiply_assign(g).unwrap();
            }
        }
        group.insert(key(&op));
    }
    if group.len() != 1 << gens.len() {
        return verdict(false, format!("stabilizer group has {} elements", group.len()));
    }
    let lx = code.logical_x().clone();
    let lz = code.logical_z().clone();
    let ly = lx.multiply(&lz).unwrap();
    let params = resolve_params(0.15, 10.0).unwrap();
    let decoder = Decoder::new(&code, DecoderKind::Pmwpm, &params).unwrap();
    let (mut in_group, mut logical, mut bad) = (0, 0, Vec::new());
    for t in 0..1000 {
        let mut rng = trial_rng(77, t);
        let error = sample_error(&params, code.n(), &mut rng);
        let syndrome = syndrome_of(&code, &error).unwrap();
        let c = decoder.decode(&syndrome).unwrap();
        let residual = error.multiply(&c.to_pauli().unwrap()).unwrap();
        let flags = is_logical_failure(&code, &residual).unwrap();
        let coset = if group.contains(&key(&residual)) {
            Some((false, false))
        } else if group.contains(&key(&residual.multiply(&lx).unwrap())) {
            Some((true, false))
        } else if group.contains(&key(&residual.multiply(&lz).unwrap())) {
            Some((false, true))
        } else if group.contains(&key(&residual.multiply(&ly).unwrap())) {
            Some((true, true))
        } else {
            None
        };
        match coset {
            Some((false, false)) if flags == (false, false) => in_group += 1,
            Some(f) if f == flags => logical += 1,
            other => bad.push(format!("trial {t}: coset {other:?}, flags {flags:?}")),
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "{in_group} residuals in the 4096-element stabilizer group, {logical} logical failures matching their flags, {} inconsistent{}",
            bad.len(),
            if bad.is_empty() { String::new() } else { format!(": {}", bad.join("; ")) }
        ),
    )
}

fn grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
}

fn curve(code: &CodeLayout, decoder: DecoderKind, ps: &[f64], eta: f64, seed: u64) -> Vec<BatchStats> {
    ps.iter()
        .map(|&p| {
            let cfg = TrialConfig::new(code.kind(), code.distance(), resolve_params(p, eta).unwrap(), decoder, 10_000, seed);
            run_trials_on(code, &cfg).unwrap()
        })
        .collect()
}

fn crossing_verdict(
    kind: CodeKind,
    decoder: DecoderKind,
    eta: f64,
    (d_small, d_large): (usize, usize),
    ps: &[f64],
    bracket: (f64, f64),
) -> Verdict {
    let small = curve(&build_code(kind, d_small).unwrap(), decoder, ps, eta, 101);
    let large = curve(&build_code(kind, d_large).unwrap(), decoder, ps, eta, 202);
    let pairs = |s: &[BatchStats]| s.iter().map(|b| (b.rate_any, b.se_any)).collect::<Vec<_>>();
    let cross = crossing_point(ps, &pairs(&small), &pairs(&large));
    let rates = |s: &[BatchStats]| s.iter().map(|b| format!("{:.4}", b.rate_any)).collect::<Vec<_>>().join(" ");
    let points: Vec<FitPoint> = small
        .iter()
        .chain(&large)
        .zip(ps.iter().chain(ps))
        .map(|(b, &p)| FitPoint {
            d: b.config.distance,
            p,
            f: b.rate_any,
            sigma: b.se_any.max(1e-4),
        })
        .collect();
    let fit = fit_threshold(&points)
        .map(|f| format!("; fit p_c = {:.4} ± {:.4}, nu = {:.2}", f.p_c, f.se.p_c, f.nu))
        .unwrap_or_default();
    let pass = cross.is_some_and(|p| p >= bracket.0 && p <= bracket.1);
    verdict(
        pass,
        format!(
            "crossing at {} (target [{}, {}]); d={d_small}: {}; d={d_large}: {}{fit}",
            cross.map_or("none".to_string(), |p| format!("{p:.4}")),
            bracket.0,
            bracket.1,
            rates(&small),
            rates(&large)
        ),
    )
}

fn xyz_crossing() -> Verdict {
    crossing_verdict(
        CodeKind::XyzPlanar,
        DecoderKind::Pmwpm,
        10.0,
        (11, 15),
        &grid(0.125, 0.155, 7),
        (0.13, 0.15),
    )
}

fn planar_crossing() -> Verdict {
    crossing_verdict(
        CodeKind::Planar,
        DecoderKind::Mwpm,
        f64::INFINITY,
        (7, 11),
        &grid(0.085, 0.121, 7),
        (0.09, 0.115),
    )
}

fn run(kind: CodeKind, decoder: DecoderKind, d: usize, params: NoiseParams, seed: u64) -> BatchStats {
    let code = build_code(kind, d).unwrap();
    run_trials_on(&code, &TrialConfig::new(kind, d, params, decoder, 10_000, seed)).unwrap()
}

fn bias_dominance() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for eta in [10.0, 100.0, 1000.0] {
        let params = resolve_params(0.10, eta).unwrap();
        let xyz = run(CodeKind::XyzPlanar, DecoderKind::Pmwpm, 11, params, 303);
        let planar = run(CodeKind::Planar, DecoderKind::Mwpm, 11, params, 303);
        let sigma = (xyz.se_any.powi(2) + planar.se_any.powi(2)).sqrt();
        let gap = (planar.rate_any - xyz.rate_any) / sigma;
        pass &= gap >= 3.0;
        parts.push(format!(
            "eta={eta}: pmwpm/xyz {:.4} vs mwpm/planar {:.4} ({gap:.1} sigma)",
            xyz.rate_any, planar.rate_any
        ));
    }
    verdict(pass, parts.join("; "))
}

/// Rate of residuals acting as a logical Z, i.e. those that flip the
/// logical X measurement.
fn x_readout_rate(s: &BatchStats) -> (f64, f64) {
    (s.rate_z, s.se_z)
}

fn distance_ordering() -> Verdict {
    let cases = [
        ((0.001, 0.001, 0.139), false),
        ((0.001, 0.01, 0.13), true),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for ((px, py, pz), increases) in cases {
        let params = custom_params(px, py, pz).unwrap();
        let rates: Vec<(usize, (f64, f64))> = [11, 15, 19]
            .iter()
            .map(|&d| (d, x_readout_rate(&run(CodeKind::XyzPlanar, DecoderKind::Pmwpm, d, params, 404))))
            .collect();
        let (f11, s11) = rates[0].1;
        let (f19, s19) = rates[2].1;
        let sigma = (s11 * s11 + s19 * s19).sqrt();
        let change = (f19 - f11) / sigma;
        let ok = if increases { change >= 3.0 } else { change <= -3.0 };
        pass &= ok;
        parts.push(format!(
            "({px}, {py}, {pz}) expected to {}: {} (d=11 to 19 change {change:+.1} sigma)",
            if increases { "increase" } else { "decrease" },
            rates
                .iter()
                .map(|(d, (f, _))| format!("d={d} {f:.4}"))
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    verdict(pass, parts.join("; "))
}

fn fit_recovery() -> Verdict {
    let truth = FitResult {
        p_c: 0.14,
        nu: 1.5,
        a: 0.3,
        b: 2.0,
        c: 1.0,
        se: FitErrors::default(),
        residual: 0.0,
        window: (0.125, 0.155),
        points_used: 28,
        reliable: true,
    };
    let ps = grid(0.125, 0.155, 7);
    let noise = Normal::new(0.0, 0.01).unwrap();
    let (mut worst_pc, mut worst_nu, mut failures) = (0.0f64, 0.0f64, 0);
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = synthetic_points(&truth, &[11, 15, 19, 23], &ps, 0.01);
        for pt in &mut pts {
            pt.f *= 1.0 + noise.sample(&mut rng);
        }
        match fit_threshold(&pts) {
            Ok(fit) => {
                let (dp, dn) = ((fit.p_c - 0.14).abs(), (fit.nu - 1.5).abs());
                worst_pc = worst_pc.max(dp);
                worst_nu = worst_nu.max(dn);
                failures += (dp > 0.002 || dn > 0.15) as usize;
            }
            Err(_) => failures += 1,
        }
    }
    verdict(
        failures == 0,
        format!("20 seeds, {failures} outside tolerance; worst |dp_c| = {worst_pc:.5}, worst |dnu| = {worst_nu:.3}"),
    )
}

fn jackknife_examples() -> Verdict {
    let (mean, se) = jackknife(&[0.1, 0.2]).unwrap();
    let (_, zero) = jackknife(&[0.25; 10]).unwrap();
    let ok = (mean - 0.15).abs() < 1e-12 && (se - 0.05).abs() < 1e-12 && zero == 0.0;
    verdict(
        ok,
        format!("{{0.1, 0.2}} gives mean {mean} and SE {se}; equal batches give SE {zero}"),
    )
}
