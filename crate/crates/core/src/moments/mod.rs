//! First and second moments of the number of equitable `T`-colourings in
//! the random multigraph model `M(n, m)` and the oriented configuration
//! model `C(n, d)`: exact rational sums, brute-force enumerations,
//! asymptotic formulas, the overlap functionals and the Hessian determinant.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

mod asymptotic;
pub mod brute;
mod exact;
mod functional;
mod hessian;
pub mod lattice;

pub use asymptotic::{
    asymptotic_first_moment_cnd, asymptotic_first_moment_mnm, first_moment_growth_rate, second_moment_ratio_mnm,
};
pub use exact::{
    class_sizes, first_moment_cnd, first_moment_mnm_exact, first_moment_mnm_near_equitable, second_moment_cnd_exact,
    second_moment_mnm_exact,
};
pub use functional::{
    b_hat, f_ab, f_ab_relaxed, f_big_ab, f_big_ab_relaxed, kl_argmax_b, kl_argmax_b_exact,
};
pub use hessian::{d_hat, hessian_det_closed_form, hessian_det_numeric};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MomentError {
    #[error("k = {k} does not divide n = {n}")]
    Divisibility { n: usize, k: usize },
    #[error("d * n = {0} is odd")]
    OddPointCount(usize),
    #[error("lattice exceeds the budget of {0} points")]
    SizeLimit(u64),
    #[error("argument outside the domain: {0}")]
    Domain(&'static str),
    #[error("tournament is not doubly regular")]
    NotDoublyRegular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum FormulaTag {
    FirstMnmExact,
    FirstMnmNearEquitable,
    FirstMnmAsymptotic,
    SecondMnmExact,
    FirstCndExact,
    FirstCndAsymptotic,
    SecondCndExact,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentValue {
    pub exact: Option<BigRational>,
    pub float: f64,
    /// Natural log of the value; finite where `float` under- or overflows.
    pub ln: f64,
    pub tag: FormulaTag,
}

impl MomentValue {
    pub fn from_exact(q: BigRational, tag: FormulaTag) -> Self {
        let float = q.to_f64().unwrap_or(f64::NAN);
        let ln = ln_rational(&q);
        Self { exact: Some(q), float, ln, tag }
    }

    pub fn from_ln(ln: f64, tag: FormulaTag) -> Self {
        Self { exact: None, float: crate::math::exp(ln), ln, tag }
    }
}

/// `ln q` for positive `q`, robust to huge numerators and denominators.
pub fn ln_rational(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return crate::math::ln(x.to_f64().expect("fits").abs());
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("fits").abs();
    crate::math::ln(top) + shift as f64 * core::f64::consts::LN_2
}

/// Memoized factorials.
pub(crate) struct Factorials {
    table: Vec<BigUint>,
}

impl Factorials {
    pub(crate) fn new() -> Self {
        Self { table: alloc::vec![BigUint::one()] }
    }

    pub(crate) fn get(&mut self, n: usize) -> BigUint {
        while self.table.len() <= n {
            let i = self.table.len();
            let next = &self.table[i - 1] * BigUint::from(i);
            self.table.push(next);
        }
        self.table[n].clone()
    }

    pub(crate) fn int(&mut self, n: usize) -> BigInt {
        BigInt::from(self.get(n))
    }
}

pub(crate) fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}
