//! Exact scalar substrate: generalized binomials, univariate polynomials,
//! Bernoulli polynomials, interpolation and rational row reduction.

mod laurent;
pub mod linalg;
mod unipoly;

pub use laurent::Laurent;
pub use unipoly::UniPoly;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Generalized binomial coefficient `alpha (alpha-1) ... (alpha-m+1) / m!`.
pub fn binomial_general<S: Scalar>(alpha: &S, m: u32) -> S {
    let mut acc = S::one();
    for i in 0..m {
        acc = acc * (alpha.clone() - S::from_i64(i as i64)) / S::from_i64(i as i64 + 1);
    }
    acc
}

/// Ordinary binomial coefficient for nonnegative integers.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// `n (n-1) ... (n-m+1)`, zero when `m > n`.
pub fn falling_factorial(n: u32, m: u32) -> u128 {
    if m > n {
        return 0;
    }
    (0..m).fold(1u128, |acc, i| acc * u128::from(n - i))
}

pub(crate) fn int_scalar<S: Scalar>(v: u128) -> S {
    S::from_i64(i64::try_from(v).expect("combinatorial factor exceeds i64"))
}

/// Bernoulli polynomial `B_s`, built from `B_0 = 1` by `B_s' = s B_{s-1}`
/// with the normalization that `B_s` integrates to zero on `[0, 1]`.
pub fn bernoulli<S: Scalar>(s: u32) -> UniPoly<S> {
    let mut b = UniPoly::constant(S::one());
    for j in 1..=s {
        let prim = b.antiderivative().scale(&S::from_i64(j as i64));
        let mean = prim.antiderivative().eval(&S::one());
        b = prim - UniPoly::constant(mean);
    }
    b
}

/// Coordinates of `p` in the basis `B_0, B_1, ..., B_deg`.
pub fn to_bernoulli_basis<S: Scalar>(p: &UniPoly<S>) -> Vec<S> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    let mut rest = p.clone();
    let mut out = vec![S::zero(); deg + 1];
    for s in (0..=deg).rev() {
        let c = rest.coeff(s);
        if !c.is_zero() {
            rest = rest - bernoulli::<S>(s as u32).scale(&c);
            out[s] = c;
        }
    }
    debug_assert!(rest.is_zero());
    out
}

/// The unique polynomial of degree below `points.len()` through every point.
pub fn lagrange_interpolate<S: Scalar>(points: &[(S, S)]) -> Result<UniPoly<S>> {
    for (i, (xi, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(xj, _)| xj == xi) {
            return Err(Error::DuplicateAbscissa(xi.to_string()));
        }
    }
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = UniPoly::constant(S::one());
        let mut denom = S::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                basis = basis * UniPoly::from_coeffs(vec![-xj.clone(), S::one()]);
                denom = denom * (xi.clone() - xj.clone());
            }
        }
        acc = acc + basis.scale(&(yi.clone() / denom));
    }
    Ok(acc)
}

/// Small-integer interpolation nodes `0, 1, -1, 2, -2, ...`.
pub fn interpolation_nodes<S: Scalar>(count: usize) -> Vec<S> {
    (0..count as i64)
        .map(|i| {
            let mag = (i + 1) / 2;
            S::from_i64(if i % 2 == 1 { mag } else { -mag })
        })
        .collect()
}
