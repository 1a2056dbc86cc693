//! Browser bindings returning catalog rows and Hessian spectra as JSON.

use critlat::latcat;
use critlat::morse::{alpha_sweep, criticality, hessian_spectrum, DEFAULT_TOL};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn entry(name: &str) -> Result<critlat::LatticeEntry, String> {
    latcat::get(name).map_err(|e| e.to_string())
}

/// Catalog rows with their first theta coefficients.
pub fn catalog_json() -> String {
    serde_json::to_string(&latcat::list_catalog()).expect("catalog serializes")
}

/// Spectrum report of a catalog lattice, or its criticality defect.
pub fn spectrum_json(name: &str, alpha: f64) -> Result<String, String> {
    let e = entry(name)?;
    if !criticality(&e).map_err(|x| x.to_string())?.is_critical() {
        return Ok(json!({ "lattice": e.name(), "critical": false }).to_string());
    }
    let r = hessian_spectrum(&e, alpha, DEFAULT_TOL).map_err(|x| x.to_string())?;
    let mut v = serde_json::to_value(&r).expect("report serializes");
    v["critical"] = json!(true);
    Ok(v.to_string())
}

/// `[{alpha, lambda, mu, error_radius}]` on a uniform grid.
pub fn sweep_json(name: &str, from: f64, to: f64, steps: usize) -> Result<String, String> {
    let e = entry(name)?;
    let reports = alpha_sweep(&e, from, to, steps, DEFAULT_TOL).map_err(|x| x.to_string())?;
    let rows: Vec<_> = reports
        .iter()
        .flat_map(|r| {
            r.entries.iter().map(move |s| {
                json!({ "alpha": r.alpha, "lambda": s.lambda, "mu": s.mu, "error_radius": s.error_radius })
            })
        })
        .collect();
    Ok(serde_json::Value::Array(rows).to_string())
}

#[wasm_bindgen]
pub fn catalog() -> String {
    catalog_json()
}

#[wasm_bindgen]
pub fn spectrum(name: &str, alpha: f64) -> Result<String, JsValue> {
    spectrum_json(name, alpha).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sweep(name: &str, from: f64, to: f64, steps: usize) -> Result<String, JsValue> {
    sweep_json(name, from, to, steps).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn catalog_lists_every_entry() {
        let v: serde_json::Value = serde_json::from_str(&catalog_json()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 29);
    }

    #[test]
    fn spectrum_of_e8_squared() {
        let v: serde_json::Value = serde_json::from_str(&spectrum_json("E8^2", PI).unwrap()).unwrap();
        assert_eq!(v["entries"].as_array().unwrap().len(), 3);
        let k: serde_json::Value = serde_json::from_str(&spectrum_json("Kervaire", PI).unwrap()).unwrap();
        assert_eq!(k["critical"], false);
        assert!(spectrum_json("nope", PI).is_err());
    }

    #[test]
    fn sweep_rows() {
        let v: serde_json::Value = serde_json::from_str(&sweep_json("D16+", 2.0, 4.0, 5).unwrap()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 10);
        assert!(sweep_json("E8", 0.1, 1.0, 3).is_err());
    }
}
