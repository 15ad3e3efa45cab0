//! Browser bindings for the interference library. Three operations back a
//! single static demo page: curve sampling for a canvas plot, an analytic
//! feature table, and a validity-window report. Each `_json` call returns a
//! serialized object so the page needs no extra glue types.

use std::f64::consts::PI;
use timewalk::features::feature_report;
use timewalk::interference::{
    log_binomial, product_form, rescaled_interference_log, scaling_function_log,
};
use timewalk::{Error, PathCount, Result};
use wasm_bindgen::prelude::*;

/// Sample cap keeping a slider drag responsive in the browser.
const MAX_POINTS: u32 = 20_000;

/// Sampled transform values over an inclusive uniform grid. `kind` selects
/// the column: `scaled` is |I|/C, `log` is ln|I|/ln C, `y` divides by the
/// envelope, `rescaled` plots the collapsed curve against x = z (N+1).
#[wasm_bindgen]
pub fn curve(
    total: u32,
    split: u32,
    min: f64,
    max: f64,
    points: u32,
    kind: &str,
) -> std::result::Result<Vec<f64>, JsError> {
    curve_inner(total, split, min, max, points, kind).map_err(to_js)
}

/// Predicted zeros, unit-modulus grids, subsidiary peaks, and width scales
/// as a JSON object.
#[wasm_bindgen]
pub fn features_json(total: u32, split: u32, m_max: u32) -> std::result::Result<String, JsError> {
    features_inner(total, split, m_max).map_err(to_js)
}

/// Duration window for a dephasing budget fraction at fixed Planck-scale
/// steps, as a JSON object.
#[wasm_bindgen]
pub fn regime_json(fraction: f64, strict: bool) -> std::result::Result<String, JsError> {
    regime_inner(fraction, strict).map_err(to_js)
}

fn to_js(err: Error) -> JsError {
    JsError::new(&err.to_string())
}

fn curve_inner(
    total: u32,
    split: u32,
    min: f64,
    max: f64,
    points: u32,
    kind: &str,
) -> Result<Vec<f64>> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(Error::Domain(format!(
            "points must lie in [2, {MAX_POINTS}], got {points}"
        )));
    }
    if !(min.is_finite() && max.is_finite() && 0.0 <= min && min < max) {
        return Err(Error::Domain(format!(
            "need 0 <= min < max, got [{min}, {max}]"
        )));
    }
    let pc = PathCount::new(total as u64, split as u64)?;
    let log_c = log_binomial(total as u64, split as u64)?;
    if kind == "log" && (split == 0 || split == total) {
        // ln C(N, n) vanishes at the boundary splits.
        return Err(Error::Domain("the log ratio needs 1 <= n <= N-1".into()));
    }
    let mut values = Vec::with_capacity(points as usize);
    for i in 0..points {
        let z = min + (max - min) * i as f64 / (points - 1) as f64;
        let v = match kind {
            "scaled" => (product_form(pc, z)?.log_mag - log_c).exp(),
            "log" => product_form(pc, z)?.log_mag / log_c,
            "y" => (product_form(pc, z)?.log_mag - scaling_function_log(pc, z)?).exp(),
            "rescaled" => rescaled_interference_log(pc, z)?.log_mag.exp(),
            other => return Err(Error::Domain(format!("unknown curve kind `{other}`"))),
        };
        values.push(v);
    }
    Ok(values)
}

fn features_inner(total: u32, split: u32, m_max: u32) -> Result<String> {
    let pc = PathCount::new(total as u64, split as u64)?;
    if split == 0 || split == total {
        // One-sided walk: the magnitude is 1 everywhere, nothing to list.
        return Ok(serde_json::json!({
            "total": total, "split": split, "trivial": true,
            "zeros": [], "unity_a": [], "unity_b": [], "subsidiary": [],
            "widths": serde_json::Value::Null,
        })
        .to_string());
    }
    let z_max = (2.0 * m_max as f64 + 2.0) * PI / (total as f64 + 1.0);
    let report = feature_report(pc, z_max, m_max as u64)?;
    let subsidiary: Vec<_> = report
        .subsidiary
        .iter()
        .map(|s| {
            serde_json::json!({
                "index": s.index,
                "position": s.position,
                "height_log": s.bound_log_mag,
                "estimate_valid": s.bound_valid,
            })
        })
        .collect();
    let widths = report.widths.map(|w| {
        serde_json::json!({
            "eps_principal": w.eps_principal,
            "eps_subsidiary": w.eps_subsidiary,
            "scale_principal": w.bound_principal,
            "scale_subsidiary": w.bound_subsidiary,
        })
    });
    Ok(serde_json::json!({
        "total": total, "split": split, "trivial": false, "z_max": z_max,
        "zeros": report.zeros,
        "unity_a": report.unity_points_a,
        "unity_b": report.unity_points_b,
        "subsidiary": subsidiary,
        "widths": widths,
    })
    .to_string())
}

fn regime_inner(fraction: f64, strict: bool) -> Result<String> {
    use timewalk::regime::{
        upper_bound_total_time, validity_window, RegimeInputs, TauModel, PLANCK_TIME_S,
        SECONDS_PER_YEAR,
    };
    let inputs = RegimeInputs::new(
        fraction,
        TauModel::Fixed {
            tau_s: PLANCK_TIME_S,
        },
    )?;
    let upper = upper_bound_total_time(&inputs)?;
    let window = validity_window(&inputs, strict)?;
    Ok(serde_json::json!({
        "fraction": fraction,
        "dephasing_rate_per_s2": inputs.dephasing_rate(),
        "tau_s": PLANCK_TIME_S,
        "upper_bound_s": upper,
        "upper_bound_years": upper / SECONDS_PER_YEAR,
        "window_strict": window.strict,
        "window_lower_s": window.lower_s,
        "window_upper_s": window.upper_s,
        "conflict": window.conflict,
    })
    .to_string())
}
