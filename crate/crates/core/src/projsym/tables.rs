use std::fmt::Write;

use serde::Serialize;

use super::{quant_coeff, sigma_coeff};
use crate::poly::PhasePoly;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffKind {
    /// `c_ell^k` of the symbol map.
    Symbol,
    /// `cbar_ell^k` of the quantization map.
    Quantization,
}

/// CSV rows `k,ell,n,lambda,value` for `0 <= ell <= k <= k_max`.
pub fn coefficient_table_csv<S: Scalar>(kind: CoeffKind, k_max: u32, n: usize, lambda: &S) -> String {
    let mut out = String::from("k,ell,n,lambda,value\n");
    for k in 0..=k_max {
        for ell in 0..=k {
            let v = match kind {
                CoeffKind::Symbol => sigma_coeff(k, ell, n, lambda),
                CoeffKind::Quantization => quant_coeff(k, ell, n, lambda),
            }
            .expect("ell <= k");
            writeln!(out, "{k},{ell},{n},{lambda},{v}").expect("writing to a String");
        }
    }
    out
}

/// One failed equivariance probe.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct DefectEntry<S> {
    pub generator: String,
    pub input: PhasePoly<S>,
    pub defect: PhasePoly<S>,
}
