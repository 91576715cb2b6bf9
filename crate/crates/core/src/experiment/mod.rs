//! Monte Carlo estimation of logical failure rates.
//!
//! Trial `t` of a run with master seed `s` draws its error from
//! [`trial_rng`]`(s, t)`, so every trial can be replayed on its own and
//! the totals do not depend on how trials are spread over threads.

pub mod fit;
pub mod jackknife;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{build_code, CodeKind, CodeLayout};
use crate::decoder::{Decoder, DecoderKind};
use crate::error::{Error, Result};
use crate::noise::{sample_error, syndrome_of, trial_rng, NoiseParams};
use crate::pauli::PauliString;

pub use fit::{fit_threshold, fit_threshold_with, FitErrors, FitOptions, FitPoint, FitResult};
pub use jackknife::jackknife;

pub const DEFAULT_BATCHES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub kind: CodeKind,
    pub distance: usize,
    pub params: NoiseParams,
    pub decoder: DecoderKind,
    pub trials: u64,
    pub seed: u64,
    pub batches: usize,
}

impl TrialConfig {
    pub fn new(
        kind: CodeKind,
        distance: usize,
        params: NoiseParams,
        decoder: DecoderKind,
        trials: u64,
        seed: u64,
    ) -> Self {
        TrialConfig {
            kind,
            distance,
            params,
            decoder,
            trials,
            seed,
            batches: DEFAULT_BATCHES.min(trials.max(1) as usize),
        }
    }

    pub fn with_batches(mut self, batches: usize) -> Self {
        self.batches = batches;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if self.batches == 0 || self.trials % self.batches as u64 != 0 {
            return Err(Error::Parameter(format!(
                "batch count {} does not divide {} trials",
                self.batches, self.trials
            )));
        }
        if self.decoder == DecoderKind::Pmwpm && self.kind != CodeKind::XyzPlanar {
            return Err(Error::Parameter("pmwpm needs the xyz-planar code".into()));
        }
        Ok(())
    }
}

/// Failure counts of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub config: TrialConfig,
    pub trials: u64,
    pub failures_x: u64,
    pub failures_z: u64,
    pub failures_any: u64,
    pub rate_x: f64,
    pub rate_z: f64,
    pub rate_any: f64,
    pub se_x: f64,
    pub se_z: f64,
    pub se_any: f64,
    pub elapsed_ms: u64,
}

impl BatchStats {
    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &BatchStats) -> bool {
        BatchStats {
            elapsed_ms: 0,
            ..self.clone()
        } == BatchStats {
            elapsed_ms: 0,
            ..other.clone()
        }
    }
}

/// Logical effect of a residual error that has trivial syndrome:
/// `(acts as logical X, acts as logical Z)`.
pub fn is_logical_failure(layout: &CodeLayout, residual: &PauliString) -> Result<(bool, bool)> {
    let syndrome = syndrome_of(layout, residual)?;
    if !syndrome.is_trivial() {
        return Err(Error::Contract(
            "residual error has a nontrivial syndrome".into(),
        ));
    }
    Ok((
        residual.symplectic_product(layout.logical_z())? == 1,
        residual.symplectic_product(layout.logical_x())? == 1,
    ))
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    x: u64,
    z: u64,
    any: u64,
}

/// Runs one trial and reports its failure flags.
pub fn run_single_trial(
    layout: &CodeLayout,
    decoder: &Decoder<'_>,
    params: &NoiseParams,
    seed: u64,
    trial: u64,
) -> Result<(bool, bool)> {
    let mut rng = trial_rng(seed, trial);
    let error = sample_error(params, layout.n(), &mut rng);
    let syndrome = syndrome_of(layout, &error)?;
    if syndrome.is_trivial() {
        return is_logical_failure(layout, &error);
    }
    let correction = decoder.decode(&syndrome)?;
    if !correction.is_consistent(layout, &syndrome)? {
        return Err(Error::Contract(format!(
            "{} correction does not reproduce the syndrome (d = {}, seed = {seed}, trial = {trial})",
            decoder.kind(),
            layout.distance()
        )));
    }
    let residual = error.multiply(&correction.to_pauli()?)?;
    is_logical_failure(layout, &residual)
}

/// Runs the trials of `config` on an existing layout.
pub fn run_trials_on(layout: &CodeLayout, config: &TrialConfig) -> Result<BatchStats> {
    config.validate()?;
    let start = Instant::now();
    let decoder = Decoder::new(layout, config.decoder, &config.params)?;
    let per_batch = config.trials / config.batches as u64;
    let batches: Vec<Counts> = (0..config.batches as u64)
        .into_par_iter()
        .map(|b| {
            let mut c = Counts::default();
            for t in b * per_batch..(b + 1) * per_batch {
                let (fx, fz) = run_single_trial(layout, &decoder, &config.params, config.seed, t)?;
                c.x += fx as u64;
                c.z += fz as u64;
                c.any += (fx || fz) as u64;
            }
            Ok(c)
        })
        .collect::<Result<_>>()?;

    let total = batches.iter().fold(Counts::default(), |acc, c| Counts {
        x: acc.x + c.x,
        z: acc.z + c.z,
        any: acc.any + c.any,
    });
    let n = config.trials as f64;
    let se = |pick: fn(&Counts) -> u64| -> f64 {
        if batches.len() >= 2 {
            let rates: Vec<f64> = batches.iter().map(|c| pick(c) as f64 / per_batch as f64).collect();
            jackknife(&rates).map(|r| r.1).unwrap_or(f64::NAN)
        } else {
            let r = pick(&total) as f64 / n;
            (r * (1.0 - r) / n).sqrt()
        }
    };
    Ok(BatchStats {
        config: config.clone(),
        trials: config.trials,
        failures_x: total.x,
        failures_z: total.z,
        failures_any: total.any,
        rate_x: total.x as f64 / n,
        rate_z: total.z as f64 / n,
        rate_any: total.any as f64 / n,
        se_x: se(|c| c.x),
        se_z: se(|c| c.z),
        se_any: se(|c| c.any),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

pub fn run_trials(config: &TrialConfig) -> Result<BatchStats> {
    let layout = build_code(config.kind, config.distance)?;
    run_trials_on(&layout, config)
}

/// Runs every cell in order, handing each result to `on_cell` as soon as
/// it is ready. Layouts are built once per `(kind, distance)`.
pub fn sweep<F>(cells: &[TrialConfig], mut on_cell: F) -> Result<Vec<BatchStats>>
where
    F: FnMut(usize, &BatchStats) -> Result<()>,
{
    for cell in cells {
        cell.validate()?;
    }
    let mut layouts: Vec<CodeLayout> = Vec::new();
    let mut out = Vec::with_capacity(cells.len());
    for (i, cell) in cells.iter().enumerate() {
        let pos = layouts
            .iter()
            .position(|l| l.kind() == cell.kind && l.distance() == cell.distance);
        let layout = match pos {
            Some(k) => &layouts[k],
            None => {
                layouts.push(build_code(cell.kind, cell.distance)?);
                layouts.last().unwrap()
            }
        };
        let stats = run_trials_on(layout, cell)?;
        on_cell(i, &stats)?;
        out.push(stats);
    }
    Ok(out)
}

/// Where two failure-rate curves sampled on a common grid cross.
///
/// Returns the linear interpolation at the sign change of
/// `large - small` when there is exactly one; with several (noise near the
/// crossing) the root of a weighted straight-line fit to the difference is
/// used instead. `None` when the difference never changes sign.
pub fn crossing_point(ps: &[f64], small: &[(f64, f64)], large: &[(f64, f64)]) -> Option<f64> {
    let diff: Vec<(f64, f64)> = small
        .iter()
        .zip(large)
        .map(|(&(fs, ss), &(fl, sl))| (fl - fs, (ss * ss + sl * sl).sqrt()))
        .collect();
    let changes: Vec<usize> = (1..diff.len())
        .filter(|&i| (diff[i - 1].0 <= 0.0) != (diff[i].0 <= 0.0))
        .collect();
    match changes[..] {
        [] => None,
        [i] => {
            let (a, b) = (diff[i - 1].0, diff[i].0);
            Some(ps[i - 1] + (ps[i] - ps[i - 1]) * a / (a - b))
        }
        _ => {
            let mut s = [0.0; 5];
            for (&p, &(y, sig)) in ps.iter().zip(&diff) {
                let w = 1.0 / sig.max(1e-12).powi(2);
                s[0] += w;
                s[1] += w * p;
                s[2] += w * p * p;
                s[3] += w * y;
                s[4] += w * p * y;
            }
            let det = s[0] * s[2] - s[1] * s[1];
            let slope = (s[0] * s[4] - s[1] * s[3]) / det;
            let icpt = (s[2] * s[3] - s[1] * s[4]) / det;
            (slope != 0.0).then(|| -icpt / slope)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_planar, build_xyz_planar};
    use crate::noise::resolve_params;

    #[test]
    fn noiseless_runs_never_fail() {
        let cfg = TrialConfig::new(
            CodeKind::XyzPlanar,
            3,
            resolve_params(0.0, 10.0).unwrap(),
            DecoderKind::Pmwpm,
            200,
            1,
        );
        let s = run_trials(&cfg).unwrap();
        assert_eq!((s.failures_x, s.failures_z, s.failures_any), (0, 0, 0));
        assert_eq!(s.se_any, 0.0);
    }

    #[test]
    fn repeat_runs_agree() {
        let cfg = TrialConfig::new(
            CodeKind::Planar,
            5,
            resolve_params(0.1, 3.0).unwrap(),
            DecoderKind::Mwpm,
            400,
            77,
        )
        .with_batches(20);
        let a = run_trials(&cfg).unwrap();
        let b = run_trials(&cfg).unwrap();
        assert!(a.same_outcome(&b));
        assert!(a.failures_any > 0);
        assert!(a.failures_any >= a.failures_x.max(a.failures_z));
    }

    #[test]
    fn rejects_bad_configs() {
        let params = resolve_params(0.1, 3.0).unwrap();
        let cfg = TrialConfig::new(CodeKind::Planar, 3, params, DecoderKind::Mwpm, 10, 1);
        assert!(cfg.clone().with_batches(3).validate().is_err());
        assert!(TrialConfig { trials: 0, ..cfg.clone() }.validate().is_err());
        let cfg = TrialConfig::new(CodeKind::Planar, 3, params, DecoderKind::Pmwpm, 10, 1);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn failure_flags_follow_logical_operators() {
        let code = build_xyz_planar(5).unwrap();
        let lx = code.logical_x().clone();
        assert_eq!(is_logical_failure(&code, &lx).unwrap(), (true, false));
        let lz = code.logical_z().clone();
        assert_eq!(is_logical_failure(&code, &lz).unwrap(), (false, true));
        let stab = code.x_checks()[2].multiply(&code.zy_checks()[5]).unwrap();
        assert_eq!(is_logical_failure(&code, &stab).unwrap(), (false, false));
        assert_eq!(is_logical_failure(&code, &lx.multiply(&stab).unwrap()).unwrap(), (true, false));
        let mut bad = PauliString::identity(code.n());
        bad.set(0, crate::pauli::Pauli::Z);
        assert!(matches!(is_logical_failure(&code, &bad), Err(Error::Contract(_))));
    }

    #[test]
    fn below_threshold_beats_above() {
        let params = |p| resolve_params(p, f64::INFINITY).unwrap();
        let run = |p| {
            run_trials(&TrialConfig::new(CodeKind::Planar, 3, params(p), DecoderKind::Mwpm, 2000, 4)).unwrap()
        };
        let (lo, hi) = (run(0.05), run(0.3));
        assert!(hi.rate_any - lo.rate_any > 3.0 * (hi.se_any.powi(2) + lo.se_any.powi(2)).sqrt());
    }

    #[test]
    fn sweep_streams_in_order() {
        let params = resolve_params(0.08, 10.0).unwrap();
        let cells: Vec<TrialConfig> = [3, 5, 3]
            .iter()
            .map(|&d| TrialConfig::new(CodeKind::Planar, d, params, DecoderKind::Mwpm, 100, 2))
            .collect();
        let mut seen = Vec::new();
        let out = sweep(&cells, |i, s| {
            seen.push((i, s.config.distance));
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, vec![(0, 3), (1, 5), (2, 3)]);
        assert!(out[0].same_outcome(&out[2]));
        let single = run_trials_on(&build_planar(5).unwrap(), &cells[1]).unwrap();
        assert!(single.same_outcome(&out[1]));
    }

    #[test]
    fn crossing_interpolates_single_sign_change() {
        let ps = [0.1, 0.2, 0.3];
        let small = [(0.2, 0.01), (0.3, 0.01), (0.4, 0.01)];
        let large = [(0.1, 0.01), (0.3, 0.01), (0.6, 0.01)];
        let p = crossing_point(&ps, &small, &large).unwrap();
        assert!((p - 0.2).abs() < 1e-12);
        assert!(crossing_point(&ps, &small, &small.map(|(f, s)| (f - 0.1, s))).is_none());
    }
}
