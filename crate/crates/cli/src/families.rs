//! Named matrix families for `gen`, configured by `key=value` parameters.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use superdyn::generators::{
    backward_shift, conditioned, conjugate, diag_circle, jordan, random_complex, random_real,
    random_unitary, rng, rotation_blocks,
};
use superdyn::CMatrix;

use crate::error::{CliError, CliResult};

pub const FAMILIES: [&str; 7] = [
    "diag-circle",
    "jordan",
    "backward-shift",
    "rotation-blocks",
    "similar-conjugate",
    "random-unitary",
    "random",
];

/// Parsed `key=value` list; every key must be consumed.
pub struct Params {
    family: String,
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn parse(family: &str, raw: &[String]) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for item in raw {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| usage(format!("parameter `{item}` is not of the form key=value")))?;
            if values.insert(k.to_string(), v.to_string()).is_some() {
                return Err(usage(format!("parameter `{k}` given twice")));
            }
        }
        Ok(Self {
            family: family.to_string(),
            values,
        })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    fn number<T: std::str::FromStr>(&mut self, key: &str) -> CliResult<Option<T>> {
        self.take(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| usage(format!("{}: cannot parse {key}={v}", self.family)))
            })
            .transpose()
    }

    fn list(&mut self, key: &str) -> CliResult<Option<Vec<f64>>> {
        self.take(key)
            .map(|v| v.split(',').map(|x| parse_fraction(x.trim())).collect())
            .transpose()
    }

    fn finish(self) -> CliResult<()> {
        match self.values.keys().next() {
            Some(k) => Err(usage(format!("{}: unknown parameter `{k}`", self.family))),
            None => Ok(()),
        }
    }
}

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

/// `p/q` or a decimal.
pub fn parse_fraction(s: &str) -> CliResult<f64> {
    let bad = || usage(format!("cannot parse `{s}` as a number or fraction"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            Ok(p / q)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn parse_complex(s: &str) -> CliResult<Complex64> {
    let bad = || usage(format!("cannot parse `{s}` as a complex number"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse().map_err(|_| bad())?, im))
}

fn positive_dim(family: &str, d: usize) -> CliResult<usize> {
    if d == 0 {
        return Err(usage(format!("{family}: d must be at least 1")));
    }
    Ok(d)
}

/// Builds the named family. Random parameters come from `seed`.
pub fn generate(family: &str, raw: &[String], seed: u64) -> CliResult<CMatrix> {
    let mut p = Params::parse(family, raw)?;
    let mut r = rng(seed);
    let a = match family {
        "diag-circle" => {
            let radius = p.number("R")?.unwrap_or(1.0);
            let d: Option<usize> = p.number("d")?;
            let phases = match (p.list("phases")?, d) {
                (Some(ph), Some(d)) if ph.len() != d => {
                    return Err(usage(format!(
                        "diag-circle: d={d} but {} phases given",
                        ph.len()
                    )))
                }
                (Some(ph), _) => ph,
                (None, d) => {
                    let d = positive_dim(family, d.unwrap_or(2))?;
                    (0..d).map(|_| r.gen_range(0.0..1.0)).collect()
                }
            };
            diag_circle(radius, &phases)?
        }
        "jordan" => {
            let lambda = p
                .take("lambda")
                .map(|v| parse_complex(&v))
                .transpose()?
                .unwrap_or(Complex64::new(1.0, 0.0));
            let m = positive_dim(family, p.number("m")?.unwrap_or(2))?;
            jordan(lambda, m)?
        }
        "backward-shift" => {
            let d: Option<usize> = p.number("d")?;
            let weights = match (p.list("weights")?, d) {
                (Some(w), Some(d)) if w.len() + 1 != d => {
                    return Err(usage(format!(
                        "backward-shift: d={d} needs {} weights, got {}",
                        d.saturating_sub(1),
                        w.len()
                    )))
                }
                (Some(w), _) => w,
                (None, d) => vec![1.0; positive_dim(family, d.unwrap_or(4))? - 1],
            };
            backward_shift(&weights)?
        }
        "rotation-blocks" => {
            let blocks = match p.take("blocks") {
                Some(list) => list
                    .split(',')
                    .map(|blk| {
                        let (a, b) = blk
                            .split_once(':')
                            .ok_or_else(|| usage(format!("rotation-blocks: block `{blk}` is not a:b")))?;
                        Ok((parse_fraction(a)?, parse_fraction(b)?))
                    })
                    .collect::<CliResult<Vec<_>>>()?,
                None => vec![(p.number("a")?.unwrap_or(3.0), p.number("b")?.unwrap_or(4.0))],
            };
            rotation_blocks(&blocks)?
        }
        "similar-conjugate" => {
            let radius = p.number("R")?.unwrap_or(1.0);
            let cond = p.number("cond")?.unwrap_or(10.0);
            let d = positive_dim(family, p.number("d")?.unwrap_or(2))?;
            let phases = match p.list("phases")? {
                Some(ph) if ph.len() != d => {
                    return Err(usage(format!(
                        "similar-conjugate: d={d} but {} phases given",
                        ph.len()
                    )))
                }
                Some(ph) => ph,
                None => (0..d).map(|_| r.gen_range(0.0..1.0)).collect(),
            };
            let base = diag_circle(radius, &phases)?;
            let (v, vi) = conditioned(d, cond, false, &mut r)?;
            conjugate(&base, &v, &vi)
        }
        "random-unitary" => {
            let d = positive_dim(family, p.number("d")?.unwrap_or(3))?;
            random_unitary(d, &mut r)
        }
        "random" => {
            let d = positive_dim(family, p.number("d")?.unwrap_or(3))?;
            match p.take("field").as_deref() {
                None | Some("C") => random_complex(d, &mut r),
                Some("R") => random_real(d, &mut r),
                Some(other) => {
                    return Err(usage(format!("random: field must be R or C, got {other}")))
                }
            }
        }
        other => {
            return Err(usage(format!(
                "unknown family `{other}`; expected one of {}",
                FAMILIES.join(", ")
            )))
        }
    };
    p.finish()?;
    Ok(a)
}
