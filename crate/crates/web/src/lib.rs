//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each operation has a plain Rust entry point returning a JSON string,
//! which the native tests exercise, and a thin `#[wasm_bindgen]` wrapper
//! that turns the error into a JavaScript exception.

use serde::Serialize;
use teich_core::boundary::{
    boundary_samples, extremal_fits, is_orientation_preserving, HolderFit, DEFAULT_WINDOW,
};
use teich_core::marked_group::{punctured_torus, TorusRoot};
use teich_core::spectra::{self, Method, SearchOptions};
use teich_core::{
    ExtendedReal, IsometryClass, MarkedGroup, MarkedIsomorphism, MoebiusMap, Tolerances, Word,
};
use wasm_bindgen::prelude::*;

/// Longest word the page will enumerate; larger cutoffs stall a tab.
pub const MAX_CUTOFF: usize = 10;

#[derive(Serialize)]
struct Classified {
    matrix: [[f64; 2]; 2],
    trace: f64,
    class: IsometryClass,
}

#[derive(Serialize)]
struct Point {
    word: Word,
    x: ExtendedReal,
    y: ExtendedReal,
    /// `x` and `y` squeezed into `(-1, 1]` by `2 atan(t) / π`, with ∞ at 1.
    u: f64,
    v: f64,
}

#[derive(Serialize)]
struct BoundaryView {
    points: Vec<Point>,
    orientation_preserving: bool,
    fits: Vec<HolderFit>,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn torus_pair(x1: f64, y1: f64, x2: f64, y2: f64) -> Result<(MarkedGroup, MarkedGroup), String> {
    let build = |x, y| punctured_torus(x, y, TorusRoot::Plus).map_err(|e| e.to_string());
    Ok((build(x1, y1)?, build(x2, y2)?))
}

fn check_cutoff(max_len: usize) -> Result<(), String> {
    if (1..=MAX_CUTOFF).contains(&max_len) {
        Ok(())
    } else {
        Err(format!(
            "cutoff must be between 1 and {MAX_CUTOFF}, got {max_len}"
        ))
    }
}

fn squeeze(t: ExtendedReal) -> f64 {
    match t {
        ExtendedReal::Finite(t) => t.atan() / std::f64::consts::FRAC_PI_2,
        ExtendedReal::Infinity => 1.0,
    }
}

/// Canonical form, trace and isometry class of `z ↦ (az + b)/(cz + d)`.
pub fn classify_json(a: f64, b: f64, c: f64, d: f64) -> Result<String, String> {
    let map = MoebiusMap::new(a, b, c, d).map_err(|e| e.to_string())?;
    let class = map
        .classify_with(&Tolerances::default())
        .map_err(|e| e.to_string())?;
    to_json(&Classified {
        matrix: map.rows(),
        trace: map.trace(),
        class,
    })
}

/// Distance report between the tori with Fricke traces `(x1, y1)` and
/// `(x2, y2)`, both estimators, with per-cutoff traces.
pub fn torus_distance_json(
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
    max_len: usize,
) -> Result<String, String> {
    check_cutoff(max_len)?;
    let (x, y) = torus_pair(x1, y1, x2, y2)?;
    let report = spectra::distance(&x, &y, Method::Both, &SearchOptions::new(max_len))
        .map_err(|e| e.to_string())?;
    to_json(&report)
}

/// Sampled boundary map between the same two tori, plus Hölder fits at
/// the worst anchors.
pub fn torus_boundary_json(
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
    max_len: usize,
) -> Result<String, String> {
    check_cutoff(max_len)?;
    let tol = Tolerances::default();
    let (x, y) = torus_pair(x1, y1, x2, y2)?;
    let iso = MarkedIsomorphism::new(x, y, &tol).map_err(|e| e.to_string())?;
    let samples = boundary_samples(&iso, max_len, &tol).map_err(|e| e.to_string())?;
    let fits = extremal_fits(&iso, &samples, 3, DEFAULT_WINDOW, &tol).map_err(|e| e.to_string())?;
    let points = samples
        .iter()
        .map(|s| Point {
            word: s.word.clone(),
            x: s.x,
            y: s.y,
            u: squeeze(s.x),
            v: squeeze(s.y),
        })
        .collect();
    to_json(&BoundaryView {
        points,
        orientation_preserving: is_orientation_preserving(&samples),
        fits,
    })
}

#[wasm_bindgen]
pub fn classify(a: f64, b: f64, c: f64, d: f64) -> Result<String, JsError> {
    classify_json(a, b, c, d).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = torusDistance)]
pub fn torus_distance(
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
    max_len: usize,
) -> Result<String, JsError> {
    torus_distance_json(x1, y1, x2, y2, max_len).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = torusBoundary)]
pub fn torus_boundary(
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
    max_len: usize,
) -> Result<String, JsError> {
    torus_boundary_json(x1, y1, x2, y2, max_len).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squeeze_sends_infinity_to_one() {
        assert_eq!(squeeze(ExtendedReal::Infinity), 1.0);
        assert_eq!(squeeze(ExtendedReal::Finite(0.0)), 0.0);
        assert!((squeeze(ExtendedReal::Finite(1.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cutoff_bounds() {
        assert!(check_cutoff(0).is_err());
        assert!(check_cutoff(MAX_CUTOFF).is_ok());
        assert!(check_cutoff(MAX_CUTOFF + 1).is_err());
    }
}
