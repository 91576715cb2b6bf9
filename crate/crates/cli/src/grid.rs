//! Parsing of value lists given on the command line.

use anyhow::{bail, Context, Result};

/// The error rates tabulated for the weight tables.
pub const REFERENCE_POINTS: [f64; 9] = [0.02, 0.04, 0.06, 0.10, 0.12, 0.14, 0.16, 0.18, 0.20];

/// Parses a comma-separated list whose items are numbers, inclusive
/// ranges `a:b:k` with `k` evenly spaced points, or `a:b:refpoints` for
/// the reference error rates inside `[a, b]`.
pub fn parse_p_list(spec: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts[..] {
            [v] => out.push(number(v)?),
            [a, b, "refpoints"] => {
                let (a, b) = (number(a)?, number(b)?);
                out.extend(
                    REFERENCE_POINTS
                        .iter()
                        .copied()
                        .filter(|&p| p >= a - 1e-12 && p <= b + 1e-12),
                );
            }
            [a, b, k] => {
                let (a, b) = (number(a)?, number(b)?);
                let k: usize = k.parse().with_context(|| format!("bad point count in {item:?}"))?;
                match k {
                    0 => bail!("range {item:?} has no points"),
                    1 => out.push(a),
                    _ => out.extend((0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64)),
                }
            }
            _ => bail!("cannot parse {item:?}; expected a number, a:b:k or a:b:refpoints"),
        }
    }
    if out.is_empty() {
        bail!("empty list of error rates");
    }
    for &p in &out {
        if !(0.0..=1.0).contains(&p) {
            bail!("error rate {p} is outside [0, 1]");
        }
    }
    Ok(out)
}

/// Parses a comma-separated list of biases; `inf` means pure dephasing.
pub fn parse_eta_list(spec: &str) -> Result<Vec<f64>> {
    let out: Vec<f64> = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_eta)
        .collect::<Result<_>>()?;
    if out.is_empty() {
        bail!("empty list of biases");
    }
    Ok(out)
}

pub fn parse_eta(s: &str) -> Result<f64> {
    match s.to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        other => {
            let v = number(other)?;
            if v <= 0.0 {
                bail!("bias must be positive, got {v}");
            }
            Ok(v)
        }
    }
}

pub fn parse_distances(spec: &str) -> Result<Vec<usize>> {
    let out: Vec<usize> = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().with_context(|| format!("bad distance {s:?}")))
        .collect::<Result<_>>()?;
    if out.is_empty() {
        bail!("empty list of distances");
    }
    Ok(out)
}

fn number(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().with_context(|| format!("bad number {s:?}"))?;
    if !v.is_finite() {
        bail!("{s:?} is not finite");
    }
    Ok(v)
}
