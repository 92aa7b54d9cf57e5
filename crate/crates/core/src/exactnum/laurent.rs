use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Relative precision carried by every nonzero series.
const PRECISION: usize = 16;

/// Truncated Laurent series `sum_i c_i eps^(val + i) + O(eps^(val + len))`
/// over an exact field.
///
/// Used to evaluate quantities that are `0/0` at an isolated parameter value
/// by perturbing the parameter to `p + eps` and reading the constant term.
/// Every nonzero value has a nonzero leading coefficient; precision shrinks
/// by one term per cancelled leading order.
#[derive(Clone, Debug)]
pub struct Laurent<S> {
    val: i32,
    coeffs: Vec<S>,
}

impl<S: Scalar> Laurent<S> {
    pub fn constant(c: S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![S::zero(); PRECISION];
        coeffs[0] = c;
        Laurent { val: 0, coeffs }
    }

    /// The formal parameter `eps`.
    pub fn epsilon() -> Self {
        let mut s = Self::constant(S::one());
        s.val = 1;
        s
    }

    /// `c + eps`.
    pub fn perturbed(c: S) -> Self {
        Self::constant(c) + Self::epsilon()
    }

    /// Lowest power present, `None` for zero.
    pub fn valuation(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// Coefficient of `eps^power`; zero outside the known range.
    pub fn coeff(&self, power: i32) -> S {
        let idx = power - self.val;
        if idx < 0 {
            return S::zero();
        }
        self.coeffs.get(idx as usize).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(0)
    }

    fn abs_precision(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then(|| self.val + self.coeffs.len() as i32)
    }

    fn normalize(val: i32, mut coeffs: Vec<S>) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Self::zero(),
            Some(k) => {
                coeffs.drain(..k);
                Laurent { val: val + k as i32, coeffs }
            }
        }
    }
}

impl<S: Scalar> Zero for Laurent<S> {
    fn zero() -> Self {
        Laurent { val: 0, coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<S: Scalar> One for Laurent<S> {
    fn one() -> Self {
        Self::constant(S::one())
    }
}

impl<S: Scalar> PartialEq for Laurent<S> {
    fn eq(&self, other: &Self) -> bool {
        match (self.valuation(), other.valuation()) {
            (None, None) => true,
            (Some(a), Some(b)) if a == b => {
                self.coeffs.iter().zip(&other.coeffs).all(|(x, y)| x == y)
            }
            _ => false,
        }
    }
}

impl<S: Scalar> Add for Laurent<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (Some(pa), Some(pb)) = (self.abs_precision(), rhs.abs_precision()) else {
            return if self.is_zero() { rhs } else { self };
        };
        let lo = self.val.min(rhs.val);
        let hi = pa.min(pb);
        if hi <= lo {
            return Self::zero();
        }
        let coeffs = (lo..hi).map(|p| self.coeff(p) + rhs.coeff(p)).collect();
        Self::normalize(lo, coeffs)
    }
}

impl<S: Scalar> Sub for Laurent<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Neg for Laurent<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Laurent { val: self.val, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<S: Scalar> Mul for Laurent<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let len = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = vec![S::zero(); len];
        for (i, a) in self.coeffs.iter().take(len).enumerate() {
            for (j, b) in rhs.coeffs.iter().take(len - i).enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::normalize(self.val + rhs.val, out)
    }
}

impl<S: Scalar> Div for Laurent<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "Laurent series division by zero");
        let len = rhs.coeffs.len();
        let lead_inv = S::one() / rhs.coeffs[0].clone();
        let mut inv = vec![S::zero(); len];
        inv[0] = lead_inv.clone();
        for k in 1..len {
            let acc = (1..=k).fold(S::zero(), |acc, j| {
                acc + rhs.coeffs[j].clone() * inv[k - j].clone()
            });
            inv[k] = -acc * lead_inv.clone();
        }
        self * Laurent { val: -rhs.val, coeffs: inv }
    }
}

impl<S: Scalar> fmt::Display for Laurent<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})e^{}", self.val + i as i32))
            .collect();
        write!(f, "{} + O(e^{})", terms.join(" + "), self.val + self.coeffs.len() as i32)
    }
}

impl<S: Scalar> Scalar for Laurent<S> {
    fn from_i64(v: i64) -> Self {
        Self::constant(S::from_i64(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type L = Laurent<BigRational>;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_frac(n, d)
    }

    #[test]
    fn removable_singularity() {
        // ((2 + e) - 2) * 3 / ((2 + e) - 2) -> 3
        let k = L::perturbed(q(2, 1));
        let num = (k.clone() - L::from_i64(2)) * L::from_i64(3);
        let den = k - L::from_i64(2);
        let r = num / den;
        assert_eq!(r.valuation(), Some(0));
        assert_eq!(r.constant_term(), q(3, 1));
    }

    #[test]
    fn pole_is_detected() {
        let e = L::epsilon();
        let r = L::one() / e;
        assert_eq!(r.valuation(), Some(-1));
    }

    #[test]
    fn geometric_series() {
        // 1 / (1 - e) = 1 + e + e^2 + ...
        let r = L::one() / (L::one() - L::epsilon());
        for p in 0..5 {
            assert_eq!(r.coeff(p), q(1, 1));
        }
    }

    #[test]
    fn cancellation_to_zero() {
        let a = L::constant(q(1, 3));
        assert!((a.clone() - a).is_zero());
    }
}
