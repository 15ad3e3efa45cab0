//! Curve scans over a uniform z grid: transform columns, figure presets,
//! chunked parallel evaluation with ordered assembly, CSV output.

use crate::config;
use crate::csvout::{sig12, write_csv};
use anyhow::{bail, ensure, Result};
use clap::{Args, ValueEnum};
use std::f64::consts::PI;
use std::path::PathBuf;
use std::thread;
use timewalk::features::locate_extremum;
use timewalk::interference::{
    log_binomial, product_form, rescaled_interference_log, scaling_function_log,
};
use timewalk::PathCount;

/// Grids below this size are evaluated on the calling thread.
const PARALLEL_MIN_POINTS: usize = 256;

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Figure preset (1, 2, 3, 5, or 6); explicit flags override its fields.
    #[arg(long)]
    pub figure: Option<u8>,
    /// Walk length N; a comma list is allowed with `--output rescaled`.
    #[arg(long = "N", value_delimiter = ',')]
    pub totals: Option<Vec<u64>>,
    /// Forward step counts n, comma separated; one curve column each.
    #[arg(long = "n", value_delimiter = ',')]
    pub splits: Option<Vec<u64>>,
    /// Lower end of the grid (z, or x with `--output rescaled`). Default 0.
    #[arg(long)]
    pub z_min: Option<f64>,
    /// Upper end of the grid.
    #[arg(long)]
    pub z_max: Option<f64>,
    /// Number of uniform grid points, endpoints included. Default 4000.
    #[arg(long)]
    pub points: Option<usize>,
    /// Column transform; figure presets pick the matching one.
    #[arg(long, value_enum)]
    pub output: Option<OutputKind>,
    /// Gaussian standard deviation for `--output overlay`, in z units.
    /// Default: a quarter of the first subsidiary position 3 pi / (N+1).
    #[arg(long)]
    pub width: Option<f64>,
    /// Destination CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Config file whose [scan] section fills flags left unset (ignored
    /// when a figure preset is chosen).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Per-point column transform.
///
/// `y`, `rescaled`, and `overlay` divide by the envelope F, which has a
/// branch point at z = 2 pi / (N+1); the emitted curve inherits a jump
/// there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputKind {
    /// ln |I|.
    Raw,
    /// |I| / C(N, n); equals 1 at z = 0.
    Scaled,
    /// ln |I| / ln C(N, n).
    Log,
    /// |Y| = |I| / F.
    Y,
    /// |Y~(x)| = |Y(x / (N+1))| against x, one column per N.
    Rescaled,
    /// |Y| for a single (N, n) next to a unit-peak Gaussian of the
    /// configured width.
    Overlay,
}

impl OutputKind {
    fn parse_name(name: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(name, false)
            .map_err(|_| anyhow::anyhow!("unknown scan output `{name}`"))
    }
}

#[derive(Debug, Clone)]
pub struct ScanSpec {
    totals: Vec<u64>,
    splits: Vec<u64>,
    z_min: f64,
    z_max: f64,
    points: usize,
    output: OutputKind,
    width: Option<f64>,
}

/// Preset grids: N = 8000 with n in {1, 10, 50} over z in [0, 0.02] for the
/// scaled/log/peak figures and the overlay sketch, and the rescaled-axis
/// family N in {500, 1000, 2000, 4000} at n = 10 over x in [0, 40].
fn preset(figure: u8) -> Result<ScanSpec> {
    let standard = |output| ScanSpec {
        totals: vec![8000],
        splits: vec![1, 10, 50],
        z_min: 0.0,
        z_max: 0.02,
        points: 4000,
        output,
        width: None,
    };
    Ok(match figure {
        1 => standard(OutputKind::Scaled),
        2 => standard(OutputKind::Log),
        3 => standard(OutputKind::Y),
        5 => ScanSpec {
            splits: vec![50],
            ..standard(OutputKind::Overlay)
        },
        6 => ScanSpec {
            totals: vec![500, 1000, 2000, 4000],
            splits: vec![10],
            z_min: 0.0,
            z_max: 40.0,
            points: 4000,
            output: OutputKind::Rescaled,
            width: None,
        },
        other => bail!("unknown figure preset {other}; available: 1, 2, 3, 5, 6"),
    })
}

fn resolve(args: &ScanArgs) -> Result<ScanSpec> {
    let mut spec = match args.figure {
        Some(figure) => preset(figure)?,
        None => {
            let section = match &args.config {
                Some(path) => config::load(path)?.scan,
                None => config::ScanSection::default(),
            };
            let output = match (&args.output, &section.output) {
                (Some(o), _) => *o,
                (None, Some(name)) => OutputKind::parse_name(name)?,
                (None, None) => bail!("pass --output or a --figure preset"),
            };
            ScanSpec {
                totals: args
                    .totals
                    .clone()
                    .or(section.totals)
                    .ok_or_else(|| anyhow::anyhow!("pass --N"))?,
                splits: args
                    .splits
                    .clone()
                    .or(section.splits)
                    .ok_or_else(|| anyhow::anyhow!("pass --n"))?,
                z_min: args.z_min.or(section.z_min).unwrap_or(0.0),
                z_max: args
                    .z_max
                    .or(section.z_max)
                    .ok_or_else(|| anyhow::anyhow!("pass --z-max"))?,
                points: args.points.or(section.points).unwrap_or(4000),
                output,
                width: args.width.or(section.width),
            }
        }
    };
    if args.figure.is_some() {
        // A preset fixes the whole spec; individual flags still override.
        if let Some(v) = &args.totals {
            spec.totals = v.clone();
        }
        if let Some(v) = &args.splits {
            spec.splits = v.clone();
        }
        if let Some(v) = args.z_min {
            spec.z_min = v;
        }
        if let Some(v) = args.z_max {
            spec.z_max = v;
        }
        if let Some(v) = args.points {
            spec.points = v;
        }
        if let Some(v) = args.output {
            spec.output = v;
        }
        if let Some(v) = args.width {
            spec.width = v.into();
        }
    }
    validate(&mut spec)?;
    Ok(spec)
}

fn validate(spec: &mut ScanSpec) -> Result<()> {
    ensure!(spec.points >= 2, "a scan needs at least 2 grid points");
    ensure!(
        spec.z_min.is_finite() && spec.z_min >= 0.0,
        "the grid must start at z >= 0"
    );
    ensure!(
        spec.z_max.is_finite() && spec.z_min < spec.z_max,
        "the grid needs z-min < z-max"
    );
    ensure!(!spec.totals.is_empty(), "pass at least one N");
    ensure!(!spec.splits.is_empty(), "pass at least one n");
    match spec.output {
        OutputKind::Rescaled => ensure!(
            spec.splits.len() == 1,
            "rescaled output compares N values at a single n"
        ),
        OutputKind::Overlay => ensure!(
            spec.totals.len() == 1 && spec.splits.len() == 1,
            "overlay output uses a single (N, n) pair"
        ),
        _ => ensure!(
            spec.totals.len() == 1,
            "this output takes a single N (lists of N are for --output rescaled)"
        ),
    }
    for (total, n) in pairs(spec) {
        PathCount::new(total, n)?;
        if spec.output == OutputKind::Log {
            ensure!(
                n >= 1 && n < total,
                "ln C(N, n) vanishes at the boundary splits, so the log ratio needs 1 <= n <= N-1"
            );
        }
    }
    if spec.output == OutputKind::Overlay {
        let default_width = 3.0 * PI / (spec.totals[0] as f64 + 1.0) / 4.0;
        let width = spec.width.get_or_insert(default_width);
        ensure!(
            width.is_finite() && *width > 0.0,
            "--width must be a positive Gaussian standard deviation"
        );
    }
    Ok(())
}

/// The (N, n) pairs behind the value columns, in column order.
fn pairs(spec: &ScanSpec) -> Vec<(u64, u64)> {
    match spec.output {
        OutputKind::Rescaled => spec.totals.iter().map(|&t| (t, spec.splits[0])).collect(),
        _ => spec.splits.iter().map(|&n| (spec.totals[0], n)).collect(),
    }
}

struct Column {
    pc: PathCount,
    log_c: f64,
}

fn columns(spec: &ScanSpec) -> Result<Vec<Column>> {
    pairs(spec)
        .into_iter()
        .map(|(total, n)| {
            let pc = PathCount::new(total, n)?;
            Ok(Column {
                pc,
                log_c: log_binomial(total, n)?,
            })
        })
        .collect()
}

fn header(spec: &ScanSpec) -> Vec<String> {
    // In rescaled mode the abscissa is x = z (N+1), shared by every column.
    let abscissa = match spec.output {
        OutputKind::Rescaled => "x",
        _ => "z",
    };
    let mut h = vec![abscissa.to_string()];
    match spec.output {
        OutputKind::Raw => h.extend(spec.splits.iter().map(|n| format!("ln_abs_n{n}"))),
        OutputKind::Scaled => h.extend(spec.splits.iter().map(|n| format!("scaled_n{n}"))),
        OutputKind::Log => h.extend(spec.splits.iter().map(|n| format!("logratio_n{n}"))),
        OutputKind::Y => h.extend(spec.splits.iter().map(|n| format!("y_n{n}"))),
        OutputKind::Rescaled => {
            h.extend(spec.totals.iter().map(|total| format!("ytilde_N{total}")))
        }
        OutputKind::Overlay => {
            h.push(format!("y_n{}", spec.splits[0]));
            h.push("rho".to_string());
        }
    }
    h
}

fn value(output: OutputKind, col: &Column, z: f64) -> Result<f64> {
    Ok(match output {
        OutputKind::Raw => product_form(col.pc, z)?.log_mag,
        OutputKind::Scaled => (product_form(col.pc, z)?.log_mag - col.log_c).exp(),
        OutputKind::Log => product_form(col.pc, z)?.log_mag / col.log_c,
        OutputKind::Y | OutputKind::Overlay => {
            (product_form(col.pc, z)?.log_mag - scaling_function_log(col.pc, z)?).exp()
        }
        OutputKind::Rescaled => rescaled_interference_log(col.pc, z)?.log_mag.exp(),
    })
}

fn row(spec: &ScanSpec, cols: &[Column], z: f64) -> Result<Vec<String>> {
    let mut fields = vec![sig12(z)];
    for col in cols {
        fields.push(sig12(value(spec.output, col, z)?));
    }
    if spec.output == OutputKind::Overlay {
        let width = spec.width.expect("validated overlay width");
        fields.push(sig12((-0.5 * (z / width).powi(2)).exp()));
    }
    Ok(fields)
}

fn grid(spec: &ScanSpec) -> Vec<f64> {
    let span = spec.z_max - spec.z_min;
    (0..spec.points)
        .map(|i| spec.z_min + span * i as f64 / (spec.points - 1) as f64)
        .collect()
}

/// Evaluates the grid, splitting it across threads for large scans. Chunks
/// are reassembled in index order, so the output is identical to a serial
/// run byte for byte.
fn evaluate(spec: &ScanSpec) -> Result<Vec<Vec<String>>> {
    let cols = columns(spec)?;
    let zs = grid(spec);
    if zs.len() < PARALLEL_MIN_POINTS {
        return zs.iter().map(|&z| row(spec, &cols, z)).collect();
    }
    let workers = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8);
    let chunk = zs.len().div_ceil(workers);
    let chunk_results: Vec<Result<Vec<Vec<String>>>> = thread::scope(|scope| {
        let handles: Vec<_> = zs
            .chunks(chunk)
            .map(|part| {
                let cols = &cols;
                let spec = &*spec;
                scope.spawn(move || part.iter().map(|&z| row(spec, cols, z)).collect())
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });
    let mut rows = Vec::with_capacity(zs.len());
    for part in chunk_results {
        rows.extend(part?);
    }
    Ok(rows)
}

fn branch_note(spec: &ScanSpec) {
    match spec.output {
        OutputKind::Y | OutputKind::Overlay => {
            let z_branch = 2.0 * PI / (spec.totals[0] as f64 + 1.0);
            if spec.z_min < z_branch && z_branch < spec.z_max {
                eprintln!(
                    "note: the envelope F has a branch point at z = {}; \
                     the y column jumps there",
                    sig12(z_branch)
                );
            }
        }
        OutputKind::Rescaled => {
            let x_branch = 2.0 * PI;
            if spec.z_min < x_branch && x_branch < spec.z_max {
                eprintln!(
                    "note: the envelope F has a branch point at x = 2 pi; \
                     the ytilde columns jump there"
                );
            }
        }
        _ => {}
    }
}

/// Golden-section refinement of the first subsidiary peak per N; peak
/// positions are never read off the grid.
fn report_refined_peaks(spec: &ScanSpec) -> Result<()> {
    if 3.0 * PI < spec.z_min || 3.0 * PI > spec.z_max {
        return Ok(());
    }
    for &total in &spec.totals {
        let pc = PathCount::new(total, spec.splits[0])?;
        let np1 = total as f64 + 1.0;
        let nominal = 3.0 * PI / np1;
        let spacing = PI / np1;
        let (z_peak, _) = locate_extremum(pc, (nominal - spacing, nominal + spacing))?;
        println!("first_subsidiary_x_peak_N{total} = {}", sig12(z_peak * np1));
    }
    println!("nominal_first_subsidiary_x = {}", sig12(3.0 * PI));
    Ok(())
}

pub fn run_scan(args: &ScanArgs) -> Result<()> {
    let spec = resolve(args)?;
    let header = header(&spec);
    let rows = evaluate(&spec)?;
    write_csv(&args.out, &header, &rows)?;
    println!(
        "wrote {}: {} rows, {} columns",
        args.out.display(),
        rows.len(),
        header.len()
    );
    branch_note(&spec);
    if spec.output == OutputKind::Rescaled {
        report_refined_peaks(&spec)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_args() -> ScanArgs {
        ScanArgs {
            figure: None,
            totals: Some(vec![100]),
            splits: Some(vec![1, 2]),
            z_min: None,
            z_max: Some(0.5),
            points: Some(5),
            output: Some(OutputKind::Scaled),
            width: None,
            out: PathBuf::from("unused.csv"),
            config: None,
        }
    }

    #[test]
    fn presets_pick_the_documented_grids() {
        let fig1 = preset(1).expect("preset 1");
        assert_eq!(fig1.totals, vec![8000]);
        assert_eq!(fig1.splits, vec![1, 10, 50]);
        assert_eq!(fig1.output, OutputKind::Scaled);
        assert_eq!(fig1.points, 4000);
        let fig6 = preset(6).expect("preset 6");
        assert_eq!(fig6.totals, vec![500, 1000, 2000, 4000]);
        assert_eq!(fig6.splits, vec![10]);
        assert_eq!(fig6.z_max, 40.0);
        assert!(preset(4).is_err());
    }

    #[test]
    fn flags_override_preset_fields() {
        let args = ScanArgs {
            figure: Some(1),
            points: Some(64),
            totals: None,
            splits: None,
            z_min: None,
            z_max: None,
            output: None,
            width: None,
            out: PathBuf::from("unused.csv"),
            config: None,
        };
        let spec = resolve(&args).expect("resolves");
        assert_eq!(spec.points, 64);
        assert_eq!(spec.totals, vec![8000]);
    }

    #[test]
    fn invalid_ranges_are_rejected() {
        let mut args = base_args();
        args.points = Some(1);
        assert!(resolve(&args).is_err());

        let mut args = base_args();
        args.z_min = Some(-0.1);
        assert!(resolve(&args).is_err());

        let mut args = base_args();
        args.z_min = Some(1.0);
        assert!(resolve(&args).is_err());

        let mut args = base_args();
        args.totals = Some(vec![100, 200]);
        assert!(resolve(&args).is_err(), "N lists need rescaled output");

        let mut args = base_args();
        args.splits = Some(vec![0]);
        args.output = Some(OutputKind::Log);
        assert!(resolve(&args).is_err(), "log ratio undefined at n = 0");
    }

    #[test]
    fn scaled_column_is_unity_at_the_origin() {
        let spec = resolve(&base_args()).expect("resolves");
        assert_eq!(header(&spec), vec!["z", "scaled_n1", "scaled_n2"]);
        let rows = evaluate(&spec).expect("evaluates");
        assert_eq!(rows.len(), 5);
        let first: f64 = rows[0][1].parse().expect("numeric");
        let second: f64 = rows[0][2].parse().expect("numeric");
        assert!((first - 1.0).abs() < 1e-9, "{first}");
        assert!((second - 1.0).abs() < 1e-9, "{second}");
    }
}
