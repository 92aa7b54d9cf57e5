use serde::{Deserialize, Serialize};

use crate::exactnum::{binomial_general, UniPoly};
use crate::scalar::{sign, Scalar};

/// `J_m : F_lambda x F_mu -> F_(lambda + mu + m)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar + std::str::FromStr"))]
pub struct TransvectantSpec<S> {
    pub m: u32,
    #[serde(with = "crate::scalar::as_string")]
    pub lambda: S,
    #[serde(with = "crate::scalar::as_string")]
    pub mu: S,
}

impl<S: Scalar> TransvectantSpec<S> {
    pub fn new(m: u32, lambda: S, mu: S) -> Self {
        TransvectantSpec { m, lambda, mu }
    }
}

/// `J_m(phi, psi) = sum_{i+j=m} (-1)^i m! (2mu+m-1 choose i) (2lambda+m-1 choose j) phi^(i) psi^(j)`.
pub fn transvectant<S: Scalar>(phi: &UniPoly<S>, psi: &UniPoly<S>, spec: &TransvectantSpec<S>) -> UniPoly<S> {
    let m = spec.m;
    let fact = (1..=m as i64).fold(S::one(), |acc, v| acc * S::from_i64(v));
    let a = S::from_i64(2) * spec.mu.clone() + S::from_i64(m as i64 - 1);
    let b = S::from_i64(2) * spec.lambda.clone() + S::from_i64(m as i64 - 1);
    let mut out = UniPoly::zero();
    for i in 0..=m {
        let j = m - i;
        let c = sign::<S>(i) * fact.clone() * binomial_general(&a, i) * binomial_general(&b, j);
        if c.is_zero() {
            continue;
        }
        out = out + (phi.nth_derivative(i as usize) * psi.nth_derivative(j as usize)).scale(&c);
    }
    out
}

/// `J_m(X, psi)` with the vector field `X` as a density of weight `-1`.
pub fn gamma_bar<S: Scalar>(x: &UniPoly<S>, psi: &UniPoly<S>, mu: &S, m: u32) -> UniPoly<S> {
    transvectant(x, psi, &TransvectantSpec::new(m, -S::one(), mu.clone()))
}
