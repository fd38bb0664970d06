//! Browser bindings for the demo page. Each export returns a flat `Float64Array`;
//! the plain functions underneath are what the native tests exercise.

use evanescent::aperture::ApertureProfile;
use evanescent::nearfield::{field_at_with, FieldOptions};
use evanescent::probe::{absorption_probability, GaussianPacket};
use evanescent::recoil::{critical_threshold, recoil_solution, ScreenSpec};
use wasm_bindgen::prelude::*;

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `|Ψ|²` and the crawling share behind a slit of width `a`, on an `nx × nz`
/// grid over `[-x_max, x_max] × [0, z_max]`. Row-major in `z`: first all
/// intensities, then all crawling shares.
pub fn slit_field_map(a: f64, x_max: f64, z_max: f64, nx: usize, nz: usize) -> Result<Vec<f64>, String> {
    let profile = ApertureProfile::single_slit(a).map_err(|e| e.to_string())?;
    // the picture needs a few digits, not eleven
    let opts = FieldOptions::with_tolerance(1e-7);
    let mut intensity = Vec::with_capacity(nx * nz);
    let mut share = Vec::with_capacity(nx * nz);
    for z in grid(0.0, z_max, nz) {
        for x in grid(-x_max, x_max, nx) {
            let s = field_at_with(x, z, &profile, &opts).map_err(|e| e.to_string())?;
            let i = s.psi_total.norm_sqr();
            intensity.push(i);
            share.push(if i > 0.0 { s.psi_cw.norm_sqr() / i } else { 0.0 });
        }
    }
    intensity.extend(share);
    Ok(intensity)
}

/// Rows of `[kx, Re k̃_z, Im k̃_z, Γ]` for a screen of mass ratio `K_M`,
/// `kx` from 0 to `kx_max`.
pub fn recoil_rows(k_m: f64, kx_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let screen = ScreenSpec::new(k_m).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(4 * n);
    for kx in grid(0.0, kx_max, n) {
        let s = recoil_solution(kx, &screen).map_err(|e| e.to_string())?;
        out.extend([kx, s.kz_tilde.re, s.kz_tilde.im, s.screen_width]);
    }
    Ok(out)
}

/// Rows of `[kx, P(kx)]` for a probe packet at height `z0` with width
/// `delta_z` behind a slit, over crawling modes up to `kx_max`.
pub fn absorption_rows(a: f64, z0: f64, delta_z: f64, kx_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let profile = ApertureProfile::single_slit(a).map_err(|e| e.to_string())?;
    let packet = GaussianPacket::new(z0, delta_z, 0.0).map_err(|e| e.to_string())?;
    if !(kx_max > 1.0) {
        return Err(format!("kx_max must exceed 1, got {kx_max}"));
    }
    let mut out = Vec::with_capacity(2 * n);
    for kx in grid(1.0 + 1e-3, kx_max, n) {
        let p = absorption_probability(kx, &packet, &profile).map_err(|e| e.to_string())?;
        out.extend([kx, p]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = slitFieldMap)]
pub fn slit_field_map_js(a: f64, x_max: f64, z_max: f64, nx: usize, nz: usize) -> Result<Vec<f64>, JsError> {
    slit_field_map(a, x_max, z_max, nx, nz).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = recoilRows)]
pub fn recoil_rows_js(k_m: f64, kx_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    recoil_rows(k_m, kx_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = absorptionRows)]
pub fn absorption_rows_js(a: f64, z0: f64, delta_z: f64, kx_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    absorption_rows(a, z0, delta_z, kx_max, n).map_err(|e| JsError::new(&e))
}

/// Threshold `k_c/k0` of a free screen.
#[wasm_bindgen(js_name = thresholdKc)]
pub fn threshold_kc(k_m: f64) -> f64 {
    ScreenSpec::new(k_m).map(|s| critical_threshold(&s).k_c).unwrap_or(f64::NAN)
}
