//! Flat sectioned `key = value` config files. Parse failures name the exact
//! 1-based line; unknown sections, unknown keys, and duplicate keys are
//! errors so a typo cannot silently change a run.
//!
//! ```text
//! [universe]
//! dimension = 2
//! tau = 0.25
//! # either a deterministic seed or explicit row-major entries:
//! h_forward = 0+0i, 0.5-0.5i, 0.5+0.5i, 0+0i
//! psi0 = 1, 0
//! steps = 8
//!
//! [scan]      # defaults for `scan` when no --figure preset is chosen
//! [regime]    # defaults for `regime` flags
//! ```
//!
//! Complex entries use the `re+imi` form accepted by `num_complex`
//! (`1`, `-0.5i`, `0.5-0.5i`, `1e-3+2i`), with no spaces inside an entry.

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use timewalk::toy::{CMatrix, CVector, ToyUniverse};

#[derive(Debug, Default)]
pub struct ConfigFile {
    pub universe: UniverseSection,
    pub scan: ScanSection,
    pub regime: RegimeSection,
}

/// Hamiltonian, initial state, step size, and default step count.
#[derive(Debug, Default)]
pub struct UniverseSection {
    pub dimension: Option<usize>,
    pub seed: Option<u64>,
    pub h_forward: Option<Vec<Complex64>>,
    pub psi0: Option<Vec<Complex64>>,
    pub tau: Option<f64>,
    pub steps: Option<u64>,
}

/// Defaults for the `scan` command when no figure preset is chosen.
#[derive(Debug, Default)]
pub struct ScanSection {
    pub totals: Option<Vec<u64>>,
    pub splits: Option<Vec<u64>>,
    pub z_min: Option<f64>,
    pub z_max: Option<f64>,
    pub points: Option<usize>,
    pub output: Option<String>,
    pub width: Option<f64>,
}

/// Defaults for the `regime` command flags.
#[derive(Debug, Default)]
pub struct RegimeSection {
    pub fraction: Option<f64>,
    pub strict: Option<bool>,
    pub duration: Option<f64>,
    pub tau: Option<f64>,
    pub scaled_c: Option<f64>,
    pub steps: Option<u64>,
}

#[derive(Clone, Copy)]
enum Section {
    Universe,
    Scan,
    Regime,
}

pub fn load(path: &Path) -> Result<ConfigFile> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse(&text).map_err(|e| anyhow!("config parse error in {}: {e:#}", path.display()))
}

fn parse(text: &str) -> Result<ConfigFile> {
    let mut cfg = ConfigFile::default();
    let mut section: Option<Section> = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = Some(match name.trim() {
                "universe" => Section::Universe,
                "scan" => Section::Scan,
                "regime" => Section::Regime,
                other => bail!("line {lineno}: unknown section [{other}]"),
            });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {lineno}: expected `key = value` or `[section]`, got `{line}`");
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(current) = section else {
            bail!("line {lineno}: key `{key}` appears before any [section] header");
        };
        assign(&mut cfg, current, key, value).map_err(|e| anyhow!("line {lineno}: {e:#}"))?;
    }
    Ok(cfg)
}

fn assign(cfg: &mut ConfigFile, section: Section, key: &str, value: &str) -> Result<()> {
    match section {
        Section::Universe => {
            let u = &mut cfg.universe;
            match key {
                "dimension" => put(&mut u.dimension, key, num(key, value)?),
                "seed" => put(&mut u.seed, key, num(key, value)?),
                "h_forward" => put(&mut u.h_forward, key, complex_list(key, value)?),
                "psi0" => put(&mut u.psi0, key, complex_list(key, value)?),
                "tau" => put(&mut u.tau, key, num(key, value)?),
                "steps" => put(&mut u.steps, key, num(key, value)?),
                _ => bail!("unknown key `{key}` in [universe]"),
            }
        }
        Section::Scan => {
            let s = &mut cfg.scan;
            match key {
                "N" => put(&mut s.totals, key, int_list(key, value)?),
                "n" => put(&mut s.splits, key, int_list(key, value)?),
                "z_min" => put(&mut s.z_min, key, num(key, value)?),
                "z_max" => put(&mut s.z_max, key, num(key, value)?),
                "points" => put(&mut s.points, key, num(key, value)?),
                "output" => put(&mut s.output, key, value.to_string()),
                "width" => put(&mut s.width, key, num(key, value)?),
                _ => bail!("unknown key `{key}` in [scan]"),
            }
        }
        Section::Regime => {
            let r = &mut cfg.regime;
            match key {
                "f" => put(&mut r.fraction, key, num(key, value)?),
                "strict" => put(&mut r.strict, key, num(key, value)?),
                "duration" => put(&mut r.duration, key, num(key, value)?),
                "tau" => put(&mut r.tau, key, num(key, value)?),
                "scaled_c" => put(&mut r.scaled_c, key, num(key, value)?),
                "steps" => put(&mut r.steps, key, num(key, value)?),
                _ => bail!("unknown key `{key}` in [regime]"),
            }
        }
    }
}

fn put<T>(slot: &mut Option<T>, key: &str, value: T) -> Result<()> {
    if slot.is_some() {
        bail!("duplicate key `{key}`");
    }
    *slot = Some(value);
    Ok(())
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| anyhow!("key `{key}`: cannot parse `{value}`: {e}"))
}

fn int_list(key: &str, value: &str) -> Result<Vec<u64>> {
    value.split(',').map(|t| num(key, t.trim())).collect()
}

fn complex_list(key: &str, value: &str) -> Result<Vec<Complex64>> {
    value
        .split(',')
        .map(|t| {
            let t = t.trim();
            Complex64::from_str(t).map_err(|e| anyhow!("key `{key}`: bad complex entry `{t}`: {e}"))
        })
        .collect()
}

impl UniverseSection {
    /// Builds the configured universe. Exactly one of `seed` and `h_forward`
    /// selects the Hamiltonian; `psi0` defaults to the first basis vector
    /// and is normalized by the simulator.
    pub fn build(&self) -> Result<ToyUniverse> {
        let tau = self
            .tau
            .ok_or_else(|| anyhow!("universe.tau is required"))?;
        match (&self.h_forward, self.seed) {
            (Some(_), Some(_)) => {
                bail!("universe.seed and universe.h_forward are mutually exclusive")
            }
            (None, None) => bail!("one of universe.seed or universe.h_forward is required"),
            (Some(entries), None) => {
                let dim = square_side(entries.len(), self.dimension)?;
                let h = CMatrix::from_row_slice(dim, dim, entries);
                let psi0 = match &self.psi0 {
                    Some(v) => vector(dim, v)?,
                    None => basis0(dim),
                };
                Ok(ToyUniverse::new(h, psi0, tau)?)
            }
            (None, Some(seed)) => {
                let dim = self
                    .dimension
                    .ok_or_else(|| anyhow!("universe.dimension is required with universe.seed"))?;
                let u = ToyUniverse::random(dim, tau, seed)?;
                match &self.psi0 {
                    Some(v) => Ok(ToyUniverse::new(
                        u.h_forward().clone(),
                        vector(dim, v)?,
                        tau,
                    )?),
                    None => Ok(u),
                }
            }
        }
    }
}

fn square_side(len: usize, declared: Option<usize>) -> Result<usize> {
    let side = (len as f64).sqrt().round() as usize;
    if side * side != len {
        bail!("universe.h_forward has {len} entries, which is not a square count");
    }
    if let Some(d) = declared {
        if d != side {
            bail!("universe.dimension = {d} but h_forward is {side} x {side}");
        }
    }
    Ok(side)
}

fn vector(dim: usize, entries: &[Complex64]) -> Result<CVector> {
    if entries.len() != dim {
        bail!(
            "universe.psi0 has {} entries, expected {dim}",
            entries.len()
        );
    }
    Ok(CVector::from_row_slice(entries))
}

fn basis0(dim: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[0] = Complex64::new(1.0, 0.0);
    v
}
