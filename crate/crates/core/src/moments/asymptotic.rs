// Asymptotic companions, evaluated in log space.

use super::{FormulaTag, MomentError, MomentValue};
use crate::math::{ln, pow};

const TAU: f64 = 2.0 * core::f64::consts::PI;

/// `k^(k/2) (2 pi n)^(-(k-1)/2) (k ((k-1)/(2k))^c)^n` with `c = m/n`.
pub fn asymptotic_first_moment_mnm(n: usize, m: usize, k: usize) -> MomentValue {
    let (nf, kf) = (n as f64, k as f64);
    let c = m as f64 / nf;
    let l = kf / 2.0 * ln(kf) - (kf - 1.0) / 2.0 * ln(TAU * nf) + nf * (ln(kf) + c * ln((kf - 1.0) / (2.0 * kf)));
    MomentValue::from_ln(l, FormulaTag::FirstMnmAsymptotic)
}

/// `k^(k/2) ((k-1)/(2 pi (k-2)))^((k-1)/2) n^(-(k-1)/2) k^n ((k-1)/(2k))^(dn/2)`.
pub fn asymptotic_first_moment_cnd(n: usize, d: usize, k: usize) -> Result<MomentValue, MomentError> {
    if k < 3 {
        return Err(MomentError::Domain("need k >= 3"));
    }
    let (nf, kf, df) = (n as f64, k as f64, d as f64);
    let l = kf / 2.0 * ln(kf) + (kf - 1.0) / 2.0 * ln((kf - 1.0) / (TAU * (kf - 2.0))) - (kf - 1.0) / 2.0 * ln(nf)
        + nf * ln(kf)
        + df * nf / 2.0 * ln((kf - 1.0) / (2.0 * kf));
    Ok(MomentValue::from_ln(l, FormulaTag::FirstCndAsymptotic))
}

/// `ln(k ((k-1)/(2k))^(d/2))`: the exponential growth rate of the first
/// moment in `C(n, d)`; zero exactly at `d = u_k`.
pub fn first_moment_growth_rate(k: usize, d: f64) -> f64 {
    let kf = k as f64;
    ln(kf) + d / 2.0 * ln((kf - 1.0) / (2.0 * kf))
}

/// `((k-1)^4 / (((k-1)^2 - 2c)^2 - 4 c^2 k^2))^((k-1)^2/4)`, the limiting
/// `E Y^2 / (E Y)^2` in `M(n, cn)`.
pub fn second_moment_ratio_mnm(k: usize, c: f64) -> Result<f64, MomentError> {
    if !(c >= 0.0) {
        return Err(MomentError::Domain("need c >= 0"));
    }
    let kf = k as f64;
    let s = (kf - 1.0) * (kf - 1.0);
    let den = (s - 2.0 * c) * (s - 2.0 * c) - 4.0 * c * c * kf * kf;
    if !(den > 0.0) || s - 2.0 * c <= 0.0 {
        return Err(MomentError::Domain("denominator not positive"));
    }
    Ok(pow(s * s / den, s / 4.0))
}
