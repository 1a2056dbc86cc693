#![allow(dead_code)]

mod table24;
pub use table24::TABLE24;

/// Truncates toward zero at `digits` decimals.
pub fn truncate(x: f64, digits: i32) -> f64 {
    let p = 10f64.powi(digits);
    (x * p).trunc() / p
}
