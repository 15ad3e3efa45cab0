//! Feature reports: predicted zeros, unit-modulus points, subsidiary peaks,
//! peak widths; plus the paired numeric-vs-model table around the principal
//! peak and the first subsidiary peak.

use crate::csvout::{sig12, write_csv};
use anyhow::{anyhow, ensure, Result};
use clap::Args;
use std::f64::consts::PI;
use std::path::PathBuf;
use timewalk::features::{
    feature_report, locate_extremum, peak_widths, principal_model_factor, subsidiary_model_factor,
};
use timewalk::interference::{log_binomial, product_form, scaling_function_log};
use timewalk::PathCount;

/// Half-window around each compared peak in the paired table.
const PAIRED_HALF_WINDOW: f64 = 0.00025;
/// Grid steps on each side of a compared peak.
const PAIRED_HALF_POINTS: i64 = 200;

#[derive(Args, Debug)]
pub struct FeaturesArgs {
    /// Walk length N.
    #[arg(long = "N", default_value_t = 8000)]
    pub total: u64,
    /// Forward step count n (required without --paired-models).
    #[arg(long = "n")]
    pub split: Option<u64>,
    /// Upper end of the reported range. Default (2 m_max + 2) pi / (N+1),
    /// which covers every requested subsidiary peak.
    #[arg(long)]
    pub z_max: Option<f64>,
    /// Highest subsidiary peak index to report.
    #[arg(long, default_value_t = 6)]
    pub m_max: u64,
    /// Emit paired (numeric |Y|, quadratic model) columns around z = 0 and
    /// around the refined first subsidiary peak, half-window 0.00025.
    #[arg(long = "fig4")]
    pub paired_models: bool,
    /// Destination CSV (required with --fig4).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run_features(args: &FeaturesArgs) -> Result<()> {
    if args.paired_models {
        paired_models(args)
    } else {
        general_report(args)
    }
}

fn general_report(args: &FeaturesArgs) -> Result<()> {
    let n = args.split.ok_or_else(|| anyhow!("pass --n"))?;
    let pc = PathCount::new(args.total, n)?;
    let z_max = args
        .z_max
        .unwrap_or((2.0 * args.m_max as f64 + 2.0) * PI / (args.total as f64 + 1.0));
    ensure!(z_max.is_finite() && z_max > 0.0, "--z-max must be positive");
    println!("N = {}", args.total);
    println!("n = {n}");
    println!("z_max = {}", sig12(z_max));
    if n == 0 || n == args.total {
        // One-sided walk: the magnitude is 1 for every z, so there are no
        // zeros, no distinguished unit-modulus grid, and no peaks.
        println!("trivial_split = true (magnitude is 1 for every z)");
        println!("zeros_found = 0");
        println!("unity_as_found = 0");
        println!("unity_bs_found = 0");
        println!("subsidiary_found = 0");
        println!("widths = none (boundary split has no interior peaks)");
        return Ok(());
    }
    let report = feature_report(pc, z_max, args.m_max)?;
    list("zero", &report.zeros);
    println!("unity_grid_a = 2 pi j / (N+1)");
    list("unity_a", &report.unity_points_a);
    println!("unity_grid_b = 2 pi j / (N-n)");
    list("unity_b", &report.unity_points_b);
    println!("subsidiary_found = {}", report.subsidiary.len());
    for s in &report.subsidiary {
        println!(
            "subsidiary_{}: position = {}, height_estimate_log = {}, estimate_valid = {}",
            s.index,
            sig12(s.position),
            sig12(s.bound_log_mag),
            s.bound_valid
        );
    }
    match report.widths {
        Some(w) => {
            println!("eps_principal = {}", sig12(w.eps_principal));
            println!("eps_subsidiary = {}", sig12(w.eps_subsidiary));
            println!("width_scale_principal = {}", sig12(w.bound_principal));
            println!("width_scale_subsidiary = {}", sig12(w.bound_subsidiary));
        }
        None => println!("widths = none (boundary split has no interior peaks)"),
    }
    Ok(())
}

fn list(label: &str, values: &[f64]) {
    println!("{label}s_found = {}", values.len());
    for (i, v) in values.iter().take(10).enumerate() {
        println!("{label}_{} = {}", i + 1, sig12(*v));
    }
    if values.len() > 10 {
        println!("{label}s_omitted = {}", values.len() - 10);
    }
}

struct PairedColumn {
    pc: PathCount,
    log_c: f64,
    /// Refined first-subsidiary position and the measured |Y| there.
    z_peak: f64,
    y_peak: f64,
    /// Half-roots of the two quadratic models.
    half_principal: f64,
    half_subsidiary: f64,
    worst_principal: f64,
    worst_subsidiary: f64,
}

/// Numeric |Y| against the quadratic models around z = 0 and around the
/// refined first subsidiary peak. The models are compared in
/// envelope-normalized form; the subsidiary model is centered on the
/// refined peak, since the true peak sits a few subsidiary roots above the
/// nominal 3 pi / (N+1) grid position at large n.
fn paired_models(args: &FeaturesArgs) -> Result<()> {
    let out = args
        .out
        .as_ref()
        .ok_or_else(|| anyhow!("--fig4 writes a CSV; pass --out"))?;
    let splits: Vec<u64> = match args.split {
        Some(n) => vec![n],
        None => vec![1, 10, 50],
    };
    let total = args.total;
    let nominal = 3.0 * PI / (total as f64 + 1.0);
    let spacing = PI / (total as f64 + 1.0);

    let mut cols = Vec::new();
    let mut header = vec!["eps".to_string()];
    for &n in &splits {
        let pc = PathCount::new(total, n)?;
        ensure!(
            n >= 1 && n < total,
            "paired models need an interior split (1 <= n <= N-1)"
        );
        let widths = peak_widths(pc)?;
        let (z_peak, log_peak) = locate_extremum(pc, (nominal - spacing, nominal + spacing))?;
        let y_peak = (log_peak - scaling_function_log(pc, z_peak)?).exp();
        cols.push(PairedColumn {
            pc,
            log_c: log_binomial(total, n)?,
            z_peak,
            y_peak,
            half_principal: widths.eps_principal / 2.0,
            half_subsidiary: widths.eps_subsidiary / 2.0,
            worst_principal: 0.0,
            worst_subsidiary: 0.0,
        });
        header.push(format!("prin_numeric_n{n}"));
        header.push(format!("prin_model_n{n}"));
        header.push(format!("sub_numeric_n{n}"));
        header.push(format!("sub_model_n{n}"));
    }

    let mut rows = Vec::new();
    for i in -PAIRED_HALF_POINTS..=PAIRED_HALF_POINTS {
        let eps = PAIRED_HALF_WINDOW * i as f64 / PAIRED_HALF_POINTS as f64;
        let mut row = vec![sig12(eps)];
        for col in &mut cols {
            // |I(-z)| = |I(z)|, and F = C(N, n) throughout this window, so
            // the numeric |Y| near the origin is |I(|eps|)| / C.
            let prin_numeric = (product_form(col.pc, eps.abs())?.log_mag - col.log_c).exp();
            let prin_model = principal_model_factor(col.pc, eps);
            let z = col.z_peak + eps;
            let sub_numeric =
                (product_form(col.pc, z)?.log_mag - scaling_function_log(col.pc, z)?).exp();
            let sub_model = col.y_peak * subsidiary_model_factor(col.pc, eps);
            if eps.abs() <= col.half_principal {
                let rel = ((prin_numeric - prin_model) / prin_model).abs();
                col.worst_principal = col.worst_principal.max(rel);
            }
            if eps.abs() <= col.half_subsidiary {
                let rel = ((sub_numeric - sub_model) / sub_model).abs();
                col.worst_subsidiary = col.worst_subsidiary.max(rel);
            }
            row.push(sig12(prin_numeric));
            row.push(sig12(prin_model));
            row.push(sig12(sub_numeric));
            row.push(sig12(sub_model));
        }
        rows.push(row);
    }

    write_csv(out, &header, &rows)?;
    println!(
        "wrote {}: {} rows, {} columns",
        out.display(),
        rows.len(),
        header.len()
    );
    for (col, &n) in cols.iter().zip(&splits) {
        println!(
            "refined_peak_z_n{n} = {} (nominal {})",
            sig12(col.z_peak),
            sig12(nominal)
        );
        println!(
            "principal_worst_rel_n{n} = {} (inside half-root window {})",
            sig12(col.worst_principal),
            sig12(col.half_principal)
        );
        println!(
            "subsidiary_worst_rel_n{n} = {} (inside half-root window {})",
            sig12(col.worst_subsidiary),
            sig12(col.half_subsidiary)
        );
    }
    Ok(())
}
