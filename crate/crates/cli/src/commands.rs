use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use serde::Serialize;
use serde_json::{json, Value};

use xyzdec::code_file::{CodeFile, SparsePauli};
use xyzdec::codes::validate_layout;
use xyzdec::decoder::{build_weight_table, Decoder, DecoderKind};
use xyzdec::experiment::{self, fit_threshold, BatchStats, FitPoint, TrialConfig};
use xyzdec::noise::{custom_params, resolve_params, sample_error, syndrome_of, trial_rng};
use xyzdec::{build_code, CodeKind, NoiseParams, PauliString, Syndrome};

use crate::grid::{parse_distances, parse_eta_list, parse_p_list};
use crate::{
    Category, CodegenArgs, DecodeArgs, Failure, GridArgs, NoiseArgs, SampleArgs, SweepArgs, ThresholdArgs,
    WeightsArgs,
};

type Outcome = Result<(), Failure>;

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(anyhow!("{msg}"))
}

fn runtime(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Runtime(e.into())
}

fn resolve(out_dir: &Option<PathBuf>, path: &Path) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

fn open_out(out_dir: &Option<PathBuf>, out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match out {
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
        Some(path) => {
            let path = resolve(out_dir, path);
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)
                    .with_context(|| format!("cannot create {}", parent.display()))
                    .map_err(runtime)?;
            }
            let file = File::create(&path)
                .with_context(|| format!("cannot write {}", path.display()))
                .map_err(runtime)?;
            Ok(Box::new(BufWriter::new(file)))
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn is_custom(noise: &NoiseArgs) -> bool {
    noise.px.is_some()
}

fn custom(noise: &NoiseArgs) -> Result<NoiseParams, Failure> {
    Ok(custom_params(noise.px.unwrap(), noise.py.unwrap(), noise.pz.unwrap())?)
}

/// Channels for a list of error rates: every bias crossed with every rate,
/// or the single custom channel. Each comes with the rate reported in
/// output.
fn channels(noise: &NoiseArgs, p: Option<&str>) -> Result<Vec<(f64, NoiseParams)>, Failure> {
    if is_custom(noise) {
        if p.is_some() {
            return Err(usage("--p cannot be combined with --px/--py/--pz"));
        }
        let params = custom(noise)?;
        return Ok(vec![(params.p(), params)]);
    }
    let eta = noise
        .eta
        .as_deref()
        .ok_or_else(|| usage("give either --eta or all of --px, --py, --pz"))?;
    let p = p.ok_or_else(|| usage("--p is required with --eta"))?;
    let etas = parse_eta_list(eta)?;
    let ps = parse_p_list(p)?;
    let mut out = Vec::with_capacity(etas.len() * ps.len());
    for &eta in &etas {
        for &p in &ps {
            out.push((p, resolve_params(p, eta)?));
        }
    }
    Ok(out)
}

fn single_channel(noise: &NoiseArgs, p: Option<f64>) -> Result<NoiseParams, Failure> {
    let p = p.map(|v| v.to_string());
    let mut list = channels(noise, p.as_deref())?;
    if list.len() != 1 {
        return Err(usage("this command takes a single channel"));
    }
    Ok(list.remove(0).1)
}

fn bits(v: &[bool]) -> Vec<u8> {
    v.iter().map(|&b| b as u8).collect()
}

pub fn codegen(out_dir: &Option<PathBuf>, args: CodegenArgs) -> Outcome {
    let layout = build_code(args.kind.into(), args.distance)?;
    let report = validate_layout(&layout);
    eprintln!(
        "{} d={} n={} stabilizers={}: {report}",
        layout.kind(),
        layout.distance(),
        layout.n(),
        layout.x_checks().len() + layout.zy_checks().len()
    );
    if !report.is_valid() {
        return Err(runtime(anyhow!("generated layout failed validation")));
    }
    let mut w = open_out(out_dir, &args.out)?;
    writeln!(w, "{}", CodeFile::from_layout(&layout).to_json()).map_err(runtime)?;
    w.flush().map_err(runtime)
}

pub fn weights(out_dir: &Option<PathBuf>, args: WeightsArgs) -> Outcome {
    if let Some(eta) = &args.noise.eta {
        if parse_eta_list(eta)?.len() != 1 {
            return Err(usage("weights takes a single --eta"));
        }
    }
    let list = channels(&args.noise, args.p.as_deref())?;
    let mut w = csv::Writer::from_writer(open_out(out_dir, &args.out)?);
    for (p, params) in list {
        for mut row in build_weight_table(&params).rows() {
            row.p = p;
            w.serialize(row).map_err(runtime)?;
        }
    }
    w.flush().map_err(runtime)
}

pub fn sample(out_dir: &Option<PathBuf>, args: SampleArgs) -> Outcome {
    let layout = build_code(args.kind.into(), args.distance)?;
    let params = single_channel(&args.noise, args.p)?;
    let mut w = open_out(out_dir, &args.out)?;
    for trial in args.trial..args.trial + args.count {
        let mut rng = trial_rng(args.seed, trial);
        let error = sample_error(&params, layout.n(), &mut rng);
        let s = syndrome_of(&layout, &error)?;
        let record = json!({
            "seed": args.seed,
            "trial": trial,
            "error": error.to_string(),
            "syndrome": { "s_x": bits(&s.s_x), "s_zy": bits(&s.s_zy) },
        });
        writeln!(w, "{record}").map_err(runtime)?;
    }
    w.flush().map_err(runtime)
}

#[derive(Serialize)]
struct ResultRow {
    kind: CodeKind,
    decoder: DecoderKind,
    d: usize,
    p: f64,
    eta_or_custom: String,
    px: f64,
    py: f64,
    pz: f64,
    trials: u64,
    fail_x: u64,
    fail_z: u64,
    fail_any: u64,
    rate_any: f64,
    se_any: f64,
    seed: u64,
    elapsed_ms: u64,
}

/// Runs the grid, streaming CSV rows to `out` when given. Returns each
/// cell's reported error rate with its statistics.
fn run_grid(
    out_dir: &Option<PathBuf>,
    grid: &GridArgs,
    out: Option<&Option<PathBuf>>,
) -> Result<Vec<(f64, BatchStats)>, Failure> {
    if let Some(jobs) = grid.jobs {
        if jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(runtime)?;
    }
    let distances = parse_distances(&grid.distances)?;
    let list = channels(&grid.noise, grid.p.as_deref())?;
    let mut cells = Vec::new();
    let mut rates = Vec::new();
    for &d in &distances {
        for &(p, params) in &list {
            let cfg = TrialConfig::new(grid.kind.into(), d, params, grid.decoder.into(), grid.trials, grid.seed)
                .with_batches(grid.batches);
            cfg.validate()?;
            cells.push(cfg);
            rates.push(p);
        }
    }
    // Build every layout up front so bad distances fail before any work.
    for &d in &distances {
        build_code(grid.kind.into(), d)?;
    }
    let mut writer = match out {
        Some(out) => Some(csv::Writer::from_writer(open_out(out_dir, out)?)),
        None => None,
    };
    let mut write_error: Option<anyhow::Error> = None;
    let swept = experiment::sweep(&cells, |i, s| {
        if let Some(w) = writer.as_mut() {
            let params = s.config.params;
            let row = ResultRow {
                kind: s.config.kind,
                decoder: s.config.decoder,
                d: s.config.distance,
                p: rates[i],
                eta_or_custom: params.bias.to_string(),
                px: params.px,
                py: params.py,
                pz: params.pz,
                trials: s.trials,
                fail_x: s.failures_x,
                fail_z: s.failures_z,
                fail_any: s.failures_any,
                rate_any: s.rate_any,
                se_any: s.se_any,
                seed: s.config.seed,
                elapsed_ms: if grid.no_timing { 0 } else { s.elapsed_ms },
            };
            let written = w
                .serialize(row)
                .map_err(anyhow::Error::from)
                .and_then(|()| w.flush().map_err(anyhow::Error::from));
            if let Err(e) = written {
                write_error = Some(e.context("cannot write results"));
                return Err(xyzdec::Error::Contract("output stopped".into()));
            }
        }
        eprintln!(
            "{} {} d={} p={} eta={}: {}/{} failures",
            s.config.kind, s.config.decoder, s.config.distance, rates[i], s.config.params.bias, s.failures_any, s.trials
        );
        Ok(())
    });
    let stats = match (swept, write_error) {
        (_, Some(e)) => return Err(runtime(e)),
        (Err(e), None) => return Err(e.into()),
        (Ok(stats), None) => stats,
    };
    Ok(rates.into_iter().zip(stats).collect())
}

pub fn sweep(out_dir: &Option<PathBuf>, args: SweepArgs) -> Outcome {
    run_grid(out_dir, &args.grid, Some(&args.out)).map(|_| ())
}

/// Four significant figures.
fn sig4(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let digits = (3 - v.abs().log10().floor() as i32).max(0) as usize;
    format!("{v:.digits$}")
}

pub fn threshold(out_dir: &Option<PathBuf>, args: ThresholdArgs) -> Outcome {
    if let Some(eta) = &args.grid.noise.eta {
        if parse_eta_list(eta)?.len() != 1 {
            return Err(usage("threshold takes a single --eta"));
        }
    }
    let results = match &args.out {
        Some(_) => run_grid(out_dir, &args.grid, Some(&args.out))?,
        None => run_grid(out_dir, &args.grid, None)?,
    };
    let points: Vec<FitPoint> = results
        .iter()
        .map(|(p, s)| {
            let (k, se) = match args.category {
                Category::Any => (s.failures_any, s.se_any),
                Category::X => (s.failures_x, s.se_x),
                Category::Z => (s.failures_z, s.se_z),
            };
            let n = s.trials as f64;
            let sigma = if se > 0.0 {
                se
            } else {
                // No spread observed; use the binomial error of a smoothed rate.
                let r = (k as f64 + 1.0) / (n + 2.0);
                (r * (1.0 - r) / n).sqrt()
            };
            FitPoint {
                d: s.config.distance,
                p: *p,
                f: k as f64 / n,
                sigma,
            }
        })
        .collect();
    let fit = fit_threshold(&points)?;
    let category = match args.category {
        Category::Any => "any",
        Category::X => "x",
        Category::Z => "z",
    };
    let mut doc = serde_json::to_value(&fit).map_err(runtime)?;
    doc["category"] = Value::from(category);
    let mut w = open_out(out_dir, &args.fit_out)?;
    writeln!(w, "{}", serde_json::to_string_pretty(&doc).map_err(runtime)?).map_err(runtime)?;
    w.flush().map_err(runtime)?;
    eprintln!(
        "p_c = {} ± {}, nu = {} ± {}",
        sig4(fit.p_c),
        sig4(fit.se.p_c),
        sig4(fit.nu),
        sig4(fit.se.nu)
    );
    if !fit.reliable {
        return Err(runtime(anyhow!(
            "unreliable fit: p_c or nu lies on the edge of the search region"
        )));
    }
    Ok(())
}

fn bit_list(v: &Value, name: &str) -> Result<Vec<bool>, Failure> {
    let arr = v
        .get(name)
        .and_then(Value::as_array)
        .ok_or_else(|| usage(format!("syndrome file has no {name} array")))?;
    arr.iter()
        .map(|b| match b {
            Value::Bool(b) => Ok(*b),
            Value::Number(n) if n.as_u64() == Some(0) => Ok(false),
            Value::Number(n) if n.as_u64() == Some(1) => Ok(true),
            other => Err(usage(format!("{name} entry {other} is not a bit"))),
        })
        .collect()
}

fn parse_error_operator(v: &Value, n: usize) -> Result<PauliString, Failure> {
    let op = v.get("error").unwrap_or(v);
    let pauli = match op {
        Value::String(s) => s.parse::<PauliString>()?,
        Value::Object(_) => serde_json::from_value::<SparsePauli>(op.clone())
            .map_err(|e| usage(format!("bad error operator: {e}")))?
            .to_pauli(n)?,
        _ => return Err(usage("error must be a Pauli literal or {paulis, qubits}")),
    };
    if pauli.len() != n {
        return Err(xyzdec::Error::Dimension {
            expected: n,
            found: pauli.len(),
        }
        .into());
    }
    Ok(pauli)
}

pub fn decode(out_dir: &Option<PathBuf>, args: DecodeArgs) -> Outcome {
    let layout = CodeFile::from_json(&read_input(&args.code)?)?.to_layout()?;
    let raw: Value = serde_json::from_str(&read_input(&args.syndrome)?)
        .map_err(|e| usage(format!("cannot parse {}: {e}", args.syndrome.display())))?;
    let node = raw.get("syndrome").unwrap_or(&raw);
    let syndrome = Syndrome {
        s_x: bit_list(node, "s_x")?,
        s_zy: bit_list(node, "s_zy")?,
    };
    syndrome.check_dims(&layout)?;
    let params = single_channel(&args.noise, args.p)?;
    let kind = args.decoder.map(DecoderKind::from).unwrap_or(match layout.kind() {
        CodeKind::XyzPlanar => DecoderKind::Pmwpm,
        CodeKind::Planar => DecoderKind::Mwpm,
    });
    let decoder = Decoder::new(&layout, kind, &params)?;
    let correction = decoder.decode(&syndrome).map_err(runtime)?;
    let consistent = correction.is_consistent(&layout, &syndrome)?;
    let pauli = correction.to_pauli()?;
    let mut doc = json!({
        "decoder": kind,
        "e_z": bits(&correction.e_z),
        "e_x": bits(&correction.e_x),
        "correction": pauli.to_string(),
        "consistent": consistent,
    });
    eprintln!("syndrome check: {}", if consistent { "consistent" } else { "inconsistent" });
    if let Some(path) = &args.check_error {
        let truth: Value = serde_json::from_str(&read_input(path)?)
            .map_err(|e| usage(format!("cannot parse {}: {e}", path.display())))?;
        let truth = parse_error_operator(&truth, layout.n())?;
        if syndrome_of(&layout, &truth)? != syndrome {
            return Err(usage("the given error does not produce the given syndrome"));
        }
        let residual = truth.multiply(&pauli)?;
        let (fx, fz) = experiment::is_logical_failure(&layout, &residual).map_err(runtime)?;
        let verdict = match (fx, fz) {
            (false, false) => "stabilizer",
            (true, false) => "logical-x",
            (false, true) => "logical-z",
            (true, true) => "logical-xz",
        };
        eprintln!("residual: {verdict}");
        doc["residual"] = Value::from(verdict);
    }
    let mut w = open_out(out_dir, &args.out)?;
    writeln!(w, "{}", serde_json::to_string_pretty(&doc).map_err(runtime)?).map_err(runtime)?;
    w.flush().map_err(runtime)?;
    if !consistent {
        return Err(runtime(anyhow!("correction does not reproduce the syndrome")));
    }
    Ok(())
}
