//! Multichannel (pretzel) transmission through the closed-form Jones
//! polynomial of pretzel knots.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::parity_sign;
use crate::braid::{Params, POLE_GUARD};
use crate::error::{Error, Result};

/// How the pretzel Jones polynomial is normalized into a transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `|Jones|² / d²`
    #[default]
    PerState,
    /// `|Jones|² / d^{2g}`
    PerGenus,
}

/// Quantum integer `[n] = (s^n − s^{−n}) / (s − s^{−1})` for an explicit
/// square root `s = q^{1/2}`. At `s = ±1` the limit `n·s^{n−1}` is returned.
pub fn quantum_integer_at_root(n: i64, s: Complex64) -> Complex64 {
    let n32 = i32::try_from(n).expect("quantum integer index out of range");
    let den = s - s.inv();
    if den.norm() < 1e-12 {
        return s.powi(n32 - 1) * n as f64;
    }
    (s.powi(n32) - s.powi(-n32)) / den
}

/// Quantum integer at `q`, using the principal square root of `q`.
pub fn quantum_integer(n: i64, q: Complex64) -> Complex64 {
    quantum_integer_at_root(n, q.sqrt())
}

fn jones_with_root(ns: &[i64], s: Complex64) -> Result<Complex64> {
    if ns.is_empty() {
        return Err(Error::UnsupportedFamily("pretzel needs at least one channel".into()));
    }
    let q = s * s;
    let two = quantum_integer_at_root(2, s);
    if two.norm() <= POLE_GUARD {
        return Err(Error::Pole { what: "[2] = 0", at: s.arg() });
    }
    let three = quantum_integer_at_root(3, s);
    let g = ns.len() as i64 - 1;
    let mut plus = Complex64::new(1.0, 0.0);
    let mut minus = Complex64::new(1.0, 0.0);
    for &n in ns {
        let x = (-q).powi(i32::try_from(n).expect("winding out of range"));
        plus *= 1.0 + three * x;
        minus *= 1.0 - x;
    }
    let pre = parity_sign(g + 1) / two.powi((g + 2) as i32);
    Ok((plus + three * minus) * pre)
}

/// Unnormalized Jones polynomial of the pretzel knot `(n₀, …, n_g)` at `q`.
pub fn jones_pretzel(ns: &[i64], q: Complex64) -> Result<Complex64> {
    jones_with_root(ns, q.sqrt())
}

/// Transmission `|Jones|²/d²` (per state) or `|Jones|²/d^{2g}` (per genus)
/// with `q = A⁴`, `q^{1/2} = A²`.
pub fn pretzel_transmission(ns: &[i64], theta: f64, norm: Normalization) -> Result<f64> {
    let p = Params::new(theta);
    if p.near_pole(POLE_GUARD) {
        return Err(Error::Pole { what: "d = 0", at: theta });
    }
    let jones = jones_with_root(ns, p.a * p.a)?;
    let g = ns.len() as i32 - 1;
    let scale = match norm {
        Normalization::PerState => p.d * p.d,
        Normalization::PerGenus => p.d.powi(2 * g),
    };
    Ok(jones.norm_sqr() / scale)
}
