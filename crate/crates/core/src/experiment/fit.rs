//! Finite-size-scaling fit `f = A + B x + C x^2` with
//! `x = (p - p_c) d^(1/nu)`.
//!
//! For fixed `(p_c, nu)` the model is linear in `(A, B, C)`, which is solved
//! exactly by weighted least squares. The outer two-parameter problem is
//! searched on a grid and refined with Nelder-Mead. Uncertainties come from
//! a leave-one-point-out jackknife.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::jackknife::jackknife_se;
use crate::error::{Error, Result};

/// One measured failure rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub d: usize,
    pub p: f64,
    pub f: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FitErrors {
    pub p_c: f64,
    pub nu: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub p_c: f64,
    pub nu: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub se: FitErrors,
    /// Weighted sum of squared residuals at the optimum.
    pub residual: f64,
    /// Smallest and largest `p` of the data.
    pub window: (f64, f64),
    pub points_used: usize,
    /// False when `p_c` or `nu` ended on the edge of the search region.
    pub reliable: bool,
}

impl FitResult {
    pub fn scaling_variable(&self, d: usize, p: f64) -> f64 {
        (p - self.p_c) * (d as f64).powf(1.0 / self.nu)
    }

    pub fn model(&self, d: usize, p: f64) -> f64 {
        let x = self.scaling_variable(d, p);
        self.a + self.b * x + self.c * x * x
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub nu_range: (f64, f64),
    pub nu_step: f64,
    pub p_step: f64,
    /// Compute jackknife errors; costs one refit per point.
    pub jackknife: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            nu_range: (0.5, 3.0),
            nu_step: 0.05,
            p_step: 1e-3,
            jackknife: true,
        }
    }
}

pub fn fit_threshold(points: &[FitPoint]) -> Result<FitResult> {
    fit_threshold_with(points, &FitOptions::default())
}

pub fn fit_threshold_with(points: &[FitPoint], options: &FitOptions) -> Result<FitResult> {
    check_points(points)?;
    let window = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), pt| {
        (lo.min(pt.p), hi.max(pt.p))
    });
    let (p_c, nu, chi2) = outer_search(points, window, options)?;
    let [a, b, c] = linear_part(points, p_c, nu)
        .ok_or_else(|| Error::Fit(format!("degenerate design matrix at p_c = {p_c}, nu = {nu}")))?
        .0;

    let mut se = FitErrors::default();
    if options.jackknife {
        let mut est: [Vec<f64>; 5] = Default::default();
        for skip in 0..points.len() {
            let subset: Vec<FitPoint> = points
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, pt)| *pt)
                .collect();
            let (pc_i, nu_i, _) = refine(&subset, p_c, nu, options);
            let Some(([a_i, b_i, c_i], _)) = linear_part(&subset, pc_i, nu_i) else {
                return Err(Error::Fit(format!("degenerate design matrix without point {skip}")));
            };
            for (list, v) in est.iter_mut().zip([pc_i, nu_i, a_i, b_i, c_i]) {
                list.push(v);
            }
        }
        se = FitErrors {
            p_c: jackknife_se(&est[0]),
            nu: jackknife_se(&est[1]),
            a: jackknife_se(&est[2]),
            b: jackknife_se(&est[3]),
            c: jackknife_se(&est[4]),
        };
    }

    let (nu_lo, nu_hi) = options.nu_range;
    let inside = |v: f64, lo: f64, hi: f64| v > lo + 1e-9 && v < hi - 1e-9;
    let reliable = inside(p_c, window.0, window.1) && inside(nu, nu_lo, nu_hi) && chi2.is_finite();
    Ok(FitResult {
        p_c,
        nu,
        a,
        b,
        c,
        se,
        residual: chi2,
        window,
        points_used: points.len(),
        reliable,
    })
}

fn check_points(points: &[FitPoint]) -> Result<()> {
    let mut per_d: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for pt in points {
        if !(pt.sigma > 0.0 && pt.sigma.is_finite()) {
            return Err(Error::Parameter(format!(
                "sigma must be positive, got {} at d = {}, p = {}",
                pt.sigma, pt.d, pt.p
            )));
        }
        if !pt.p.is_finite() || !pt.f.is_finite() || pt.d == 0 {
            return Err(Error::Parameter(format!("invalid fit point {pt:?}")));
        }
        per_d.entry(pt.d).or_default().push(pt.p);
    }
    if per_d.len() < 2 {
        return Err(Error::Parameter(format!(
            "fit needs at least 2 distances, got {}",
            per_d.len()
        )));
    }
    for (d, ps) in &mut per_d {
        ps.sort_by(f64::total_cmp);
        ps.dedup();
        if ps.len() < 3 {
            return Err(Error::Parameter(format!(
                "fit needs at least 3 p values per distance, d = {d} has {}",
                ps.len()
            )));
        }
    }
    Ok(())
}

/// Weighted least squares for `(A, B, C)`; returns the coefficients and
/// the chi-square.
fn linear_part(points: &[FitPoint], p_c: f64, nu: f64) -> Option<([f64; 3], f64)> {
    let rows: Vec<([f64; 3], f64)> = points
        .iter()
        .map(|pt| {
            let x = (pt.p - p_c) * (pt.d as f64).powf(1.0 / nu);
            let w = 1.0 / pt.sigma;
            ([w, w * x, w * x * x], w * pt.f)
        })
        .collect();
    let coef = least_squares(&rows)?;
    let chi2 = rows
        .iter()
        .map(|(a, y)| {
            let r = y - (a[0] * coef[0] + a[1] * coef[1] + a[2] * coef[2]);
            r * r
        })
        .sum();
    Some((coef, chi2))
}

/// Least squares for three unknowns by Householder QR.
fn least_squares(rows: &[([f64; 3], f64)]) -> Option<[f64; 3]> {
    let m = rows.len();
    if m < 3 {
        return None;
    }
    let mut a: Vec<[f64; 3]> = rows.iter().map(|r| r.0).collect();
    let mut y: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    let mut r_diag = [0.0; 3];
    for k in 0..3 {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        let col_scale = (0..m).map(|i| a[i][k].abs()).fold(0.0, f64::max);
        if norm <= 1e-13 * col_scale.max(f64::MIN_POSITIVE) || norm == 0.0 {
            return None;
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            r_diag[k] = alpha;
            continue;
        }
        for j in k..3 {
            let dot: f64 = (k..m).map(|i| v[i - k] * a[i][j]).sum();
            let f = 2.0 * dot / vv;
            for i in k..m {
                a[i][j] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..m).map(|i| v[i - k] * y[i]).sum();
        let f = 2.0 * dot / vv;
        for i in k..m {
            y[i] -= f * v[i - k];
        }
        r_diag[k] = a[k][k];
    }
    if r_diag.iter().any(|&r| r.abs() < 1e-14 * r_diag[0].abs().max(1e-300)) {
        return None;
    }
    let mut x = [0.0; 3];
    for k in (0..3).rev() {
        let s: f64 = (k + 1..3).map(|j| a[k][j] * x[j]).sum();
        x[k] = (y[k] - s) / a[k][k];
    }
    Some(x)
}

fn objective(points: &[FitPoint], p_c: f64, nu: f64) -> f64 {
    if !(nu > 0.0) || !p_c.is_finite() {
        return f64::INFINITY;
    }
    linear_part(points, p_c, nu).map_or(f64::INFINITY, |(_, chi2)| chi2)
}

fn outer_search(points: &[FitPoint], window: (f64, f64), options: &FitOptions) -> Result<(f64, f64, f64)> {
    let (lo, hi) = window;
    let p_steps = ((hi - lo) / options.p_step).round() as usize;
    let (nu_lo, nu_hi) = options.nu_range;
    let nu_steps = ((nu_hi - nu_lo) / options.nu_step).round() as usize;
    let mut best = (f64::INFINITY, lo, nu_lo);
    for i in 0..=p_steps {
        let p_c = (lo + i as f64 * options.p_step).min(hi);
        for j in 0..=nu_steps {
            let nu = nu_lo + j as f64 * options.nu_step;
            let chi2 = objective(points, p_c, nu);
            if chi2 < best.0 {
                best = (chi2, p_c, nu);
            }
        }
    }
    if !best.0.is_finite() {
        return Err(Error::Fit("no grid point gives a solvable linear part".into()));
    }
    Ok(refine(points, best.1, best.2, options))
}

/// Nelder-Mead in `(p_c, nu)` from a starting point.
fn refine(points: &[FitPoint], p_c: f64, nu: f64, options: &FitOptions) -> (f64, f64, f64) {
    let f = |v: [f64; 2]| objective(points, v[0], v[1]);
    let mut simplex = [
        [p_c, nu],
        [p_c + options.p_step, nu],
        [p_c, nu + options.nu_step],
    ];
    let mut values = simplex.map(f);
    for _ in 0..5000 {
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        let size = (1..3)
            .map(|i| {
                ((simplex[i][0] - simplex[0][0]) / options.p_step)
                    .abs()
                    .max(((simplex[i][1] - simplex[0][1]) / options.nu_step).abs())
            })
            .fold(0.0, f64::max);
        if size < 1e-10 {
            break;
        }
        let centroid = [
            (simplex[0][0] + simplex[1][0]) / 2.0,
            (simplex[0][1] + simplex[1][1]) / 2.0,
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };
        let reflected = along(-1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let (contracted, fc) = if fr < values[2] {
                let c = along(-0.5);
                (c, f(c))
            } else {
                let c = along(0.5);
                (c, f(c))
            };
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        simplex[0][0] + 0.5 * (simplex[i][0] - simplex[0][0]),
                        simplex[0][1] + 0.5 * (simplex[i][1] - simplex[0][1]),
                    ];
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    (simplex[best][0], simplex[best][1], values[best])
}

/// Synthetic data from an exact model, for tests and examples.
pub fn synthetic_points(
    truth: &FitResult,
    distances: &[usize],
    ps: &[f64],
    relative_sigma: f64,
) -> Vec<FitPoint> {
    let mut out = Vec::with_capacity(distances.len() * ps.len());
    for &d in distances {
        for &p in ps {
            let f = truth.model(d, p);
            out.push(FitPoint {
                d,
                p,
                f,
                sigma: (relative_sigma * f.abs()).max(1e-12),
            });
        }
    }
    out
}
