//! Limiting distribution functions for `(a,2)` formulas at density `c = L/n`.
//!
//! * `H_∞(c) = e^c (1-2c)^{1/2}`: no cycle at all (max-rank), and QXOR with `m → ∞`.
//! * `H_0(c) = e^{c/2} (1-2c)^{1/4}`: no bad cycle with constant labels (2-XOR-SAT).
//! * `H(c) = e^c (1-2c)^{1/2} (1-4c²)^{-1/8}`: QXOR with `m = a = 1`.
//! * `H_m(c) = exp(-λ_{m,1}(c))`: QXOR with fixed `m` and `a = 1`.
//!
//! All curves vanish for `c ≥ 1/2`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default truncation tolerance of the `λ_{m,1}` series used by [`h_m`].
pub const SERIES_TOL: f64 = 1e-10;

/// `h_m` is held constant on `[1/2 - CLAMP, 1/2)`, where the series needs
/// millions of terms and diverges at the endpoint.
pub const BOUNDARY_CLAMP: f64 = 1e-6;

fn check_density(c: f64) -> Result<()> {
    if c.is_nan() || c < 0.0 {
        return Err(Error::invalid(format!("density must be non-negative, got {c}")));
    }
    Ok(())
}

pub fn h_inf(c: f64) -> Result<f64> {
    check_density(c)?;
    if c >= 0.5 {
        return Ok(0.0);
    }
    Ok(c.exp() * (1.0 - 2.0 * c).sqrt())
}

pub fn h_0(c: f64) -> Result<f64> {
    check_density(c)?;
    if c >= 0.5 {
        return Ok(0.0);
    }
    Ok((c / 2.0).exp() * (1.0 - 2.0 * c).powf(0.25))
}

pub fn h_1(c: f64) -> Result<f64> {
    check_density(c)?;
    if c >= 0.5 {
        return Ok(0.0);
    }
    Ok(c.exp() * (1.0 - 2.0 * c).sqrt() * (1.0 - 4.0 * c * c).powf(-0.125))
}

/// Limit of the expected number of cycles, `-½ ln(1-2c) - c`, for `0 ≤ c < 1/2`.
pub fn lambda_inf(c: f64) -> Result<f64> {
    check_density(c)?;
    if c >= 0.5 {
        return Err(Error::Domain(format!("cycle expectation diverges for c = {c} >= 1/2")));
    }
    Ok(-0.5 * (-2.0 * c).ln_1p() - c)
}

/// Fraction of length-`l` label sequences over `m` symbols (even `l`) in
/// which some symbol occurs an odd number of times:
/// `1 - Σ_{k<m} C(m-1,k) ((m-2k)/m)^l / 2^{m-1}`.
pub fn parity_factor(m: u32, l: u32) -> f64 {
    1.0 - parity_weights(m)
        .map(|(w, r)| w * r.powi(l as i32))
        .sum::<f64>()
}

/// `(C(m-1,k)/2^{m-1}, (m-2k)/m)` for `k = 0..m`, weights built in log space.
fn parity_weights(m: u32) -> impl Iterator<Item = (f64, f64)> {
    let mf = f64::from(m);
    let mut log_w = -(mf - 1.0) * std::f64::consts::LN_2;
    (0..m).map(move |k| {
        let kf = f64::from(k);
        let item = (log_w.exp(), (mf - 2.0 * kf) / mf);
        log_w += ((mf - 1.0 - kf) / (kf + 1.0)).ln();
        item
    })
}

/// Limiting expected number of bad cycles for `a = 1` and `m` universal
/// variables, summed until the geometric tail bound drops below `tol`.
///
/// Odd lengths `l` contribute `(2c)^l / (2l)`; even lengths contribute
/// `(2c)^l / (4l)` for constant parity plus the same weighted by
/// [`parity_factor`].
pub fn lambda_m1(c: f64, m: u32, tol: f64) -> Result<f64> {
    check_density(c)?;
    if c >= 0.5 {
        return Err(Error::Domain(format!("series diverges for c = {c} >= 1/2")));
    }
    if m < 1 {
        return Err(Error::invalid("m must be at least 1"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    if c == 0.0 {
        return Ok(0.0);
    }

    // Terms w_k r_k^l of the parity sum, advanced by r_k^2 per even step.
    // Terms below 1e-20 are dropped; they shrink monotonically, so the total
    // error is at most m * 1e-20 * λ_∞(c).
    const NEGLIGIBLE: f64 = 1e-20;
    let mut active: Vec<(f64, f64)> = parity_weights(m)
        .map(|(w, r)| (w * r * r, r * r))
        .filter(|&(q, _)| q >= NEGLIGIBLE)
        .collect();

    let x = 2.0 * c;
    let mut pow = x;
    let mut sum = 0.0;
    let mut carry = 0.0;
    let mut l: u64 = 1;
    loop {
        l += 1;
        pow *= x;
        let lf = l as f64;
        let term = if l % 2 == 1 {
            pow / (2.0 * lf)
        } else {
            if l > 2 {
                for entry in &mut active {
                    entry.0 *= entry.1;
                }
                active.retain(|&(q, _)| q >= NEGLIGIBLE);
            }
            let s: f64 = active.iter().map(|&(q, _)| q).sum();
            pow / (4.0 * lf) * (2.0 - s)
        };
        // Kahan summation; up to ~10^7 terms near the boundary
        let y = term - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;

        let tail = pow * x / (2.0 * (lf + 1.0) * (1.0 - x));
        if tail < tol {
            return Ok(sum);
        }
    }
}

/// `exp(-λ_{m,1}(c))` on `[0, 1/2)`, zero from `1/2` on.
pub fn h_m(c: f64, m: u32) -> Result<f64> {
    check_density(c)?;
    if m < 1 {
        return Err(Error::invalid("m must be at least 1"));
    }
    if c >= 0.5 {
        return Ok(0.0);
    }
    let c = c.min(0.5 - BOUNDARY_CLAMP);
    Ok((-lambda_m1(c, m, SERIES_TOL)?).exp())
}

/// Which distribution function to tabulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveId {
    H0,
    H1,
    Hm(u32),
    HInf,
}

impl CurveId {
    pub fn eval(self, c: f64) -> Result<f64> {
        match self {
            CurveId::H0 => h_0(c),
            CurveId::H1 => h_1(c),
            CurveId::Hm(m) => h_m(c, m),
            CurveId::HInf => h_inf(c),
        }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveId::H0 => f.write_str("h0"),
            CurveId::H1 => f.write_str("h1"),
            CurveId::Hm(m) => write!(f, "hm({m})"),
            CurveId::HInf => f.write_str("hinf"),
        }
    }
}

impl FromStr for CurveId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h0" => Ok(CurveId::H0),
            "h1" => Ok(CurveId::H1),
            "hinf" => Ok(CurveId::HInf),
            _ => s
                .strip_prefix("hm(")
                .and_then(|rest| rest.strip_suffix(')'))
                .and_then(|m| m.parse().ok())
                .filter(|&m| m >= 1)
                .map(CurveId::Hm)
                .ok_or_else(|| Error::invalid(format!("unknown curve {s:?}"))),
        }
    }
}

/// Evenly spaced densities `from, from + step, ..` up to `to` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityGrid {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl DensityGrid {
    pub fn new(from: f64, to: f64, step: f64) -> Result<Self> {
        let grid = DensityGrid { from, to, step };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.from >= 0.0 && self.from <= self.to && self.to.is_finite()) {
            return Err(Error::invalid(format!(
                "grid needs 0 <= from <= to, got {}..{}",
                self.from, self.to
            )));
        }
        if self.step.is_nan() || self.step <= 0.0 {
            return Err(Error::invalid(format!("grid step must be positive, got {}", self.step)));
        }
        Ok(())
    }

    /// Grid points, computed as `from + i·step` (no accumulated drift) and
    /// including `to` up to a relative slack of 1e-9 steps.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.to - self.from) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.from + i as f64 * self.step).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoryCurve {
    pub id: CurveId,
    /// `(c, value)` pairs in grid order.
    pub points: Vec<(f64, f64)>,
}

pub fn tabulate(id: CurveId, grid: &DensityGrid) -> Result<TheoryCurve> {
    grid.validate()?;
    let points = grid
        .points()
        .into_iter()
        .map(|c| Ok((c, id.eval(c)?)))
        .collect::<Result<_>>()?;
    Ok(TheoryCurve { id, points })
}
