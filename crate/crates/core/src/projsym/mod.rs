//! The projectively equivariant symbol calculus on `R^n`.
//!
//! `symbol_map` and `quantize` are the unique `sl(n+1)`-equivariant
//! isomorphisms between operators on weight-`lambda` densities and
//! polynomial symbols, normalized by the principal symbol.

mod equivariance;
mod gamma;
mod generators;
mod geodesic;
mod tables;

pub use equivariance::{
    check_recurrence, equivariance_defect, equivariance_sweep, equivariant_hom_basis,
    solve_div_coefficients, transported_quadratic_action, DivCoeffSolution, HomBasis, HomTerm,
    RecurrenceReport, SweepReport,
};
pub use gamma::{
    cocycle_defect, cocycle_defect_on_basis, conjugation_sign_check, ell_bar_tensor, ell_k,
    fit_gamma2_coefficients, gamma1_closed, gamma2_closed, gamma2_coefficients, gamma2_conventional_coefficients, gamma2_terms, gamma_extract,
    quotient_iso, s_bar, s_bar_factor, second_order_iso, transported_action, DiagonalIso, EllBar, GammaMap,
};
pub use generators::{
    casimir_eigenvalue, casimir_operator, embedding_sign, projective_field, sl_basis,
    sl_generators, Casimir, SlGenerator, SlGeneratorKind,
};
pub use geodesic::{christoffel, geodesic_quantize, laplace_beltrami_form};
pub use tables::{coefficient_table_csv, CoeffKind, DefectEntry};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::exactnum::{binomial, binomial_general, falling_factorial, int_scalar};
use crate::poly::PhasePoly;
use crate::scalar::{sign, Scalar};

fn check_indices(k: u32, ell: u32) -> Result<()> {
    if ell > k {
        Err(Error::IndexOutOfRange(format!("ell = {ell} exceeds k = {k}")))
    } else {
        Ok(())
    }
}

fn lambda_shift<S: Scalar>(k: u32, n: usize, lambda: &S) -> S {
    S::from_i64(n as i64 + 1) * lambda.clone() + S::from_i64(k as i64 - 1)
}

/// `c_ell^k = (-1)^(k-ell) (k choose ell) ((n+1)lambda + k - 1 choose k - ell)
/// / (k + ell + n choose k - ell)`, the coefficient of `div^(k-ell)` in the
/// symbol map.
pub fn sigma_coeff<S: Scalar>(k: u32, ell: u32, n: usize, lambda: &S) -> Result<S> {
    check_indices(k, ell)?;
    let m = k - ell;
    let num = int_scalar::<S>(binomial(k, ell)) * binomial_general(&lambda_shift(k, n, lambda), m);
    let den = int_scalar::<S>(binomial(k + ell + n as u32, m));
    Ok(sign::<S>(m) * num / den)
}

/// `cbar_ell^k = (k choose ell) ((n+1)lambda + k - 1 choose k - ell)
/// / (2k + n - 1 choose k - ell)`, the coefficient of `div^(k-ell)` in the
/// quantization map.
pub fn quant_coeff<S: Scalar>(k: u32, ell: u32, n: usize, lambda: &S) -> Result<S> {
    check_indices(k, ell)?;
    let m = k - ell;
    let num = int_scalar::<S>(binomial(k, ell)) * binomial_general(&lambda_shift(k, n, lambda), m);
    let top = (2 * k + n as u32).checked_sub(1).expect("n >= 1");
    Ok(num / int_scalar::<S>(binomial(top, m)))
}

/// Coefficient `C_ell^k` of `Div^(k-ell)`: since `div^m = Div^m / (k (k-1) ... (k-m+1))`
/// on `S^k`, `c_ell^k = (k! / ell!) C_ell^k`.
pub fn div_power_coeff<S: Scalar>(k: u32, ell: u32, n: usize, lambda: &S) -> Result<S> {
    let c = sigma_coeff(k, ell, n, lambda)?;
    Ok(c / int_scalar::<S>(falling_factorial(k, k - ell)))
}

/// `sum_k sum_ell coeff(k, ell) div^(k-ell)` applied to each fiber-homogeneous part.
fn div_series<S: Scalar>(p: &PhasePoly<S>, coeff: impl Fn(u32, u32) -> S) -> PhasePoly<S> {
    let mut out = PhasePoly::zero(p.n());
    for (k, part) in p.homogeneous_parts() {
        out = out + &part.scale(&coeff(k, k));
        let mut cur = part;
        for ell in (0..k).rev() {
            cur = cur.big_div().scale(&(S::one() / S::from_i64(ell as i64 + 1)));
            if cur.is_zero() {
                break;
            }
            out = out + &cur.scale(&coeff(k, ell));
        }
    }
    out
}

/// The equivariant symbol `sigma_lambda(A)`, at the operator's own weight.
pub fn symbol_map<S: Scalar>(a: &DiffOp<S>) -> PhasePoly<S> {
    let (n, lambda) = (a.n(), a.lambda());
    div_series(a.symbol(), |k, ell| sigma_coeff(k, ell, n, lambda).expect("ell <= k"))
}

/// The equivariant quantization `Q_lambda(P)`, inverse to `symbol_map`.
pub fn quantize<S: Scalar>(p: &PhasePoly<S>, lambda: &S) -> DiffOp<S> {
    let n = p.n();
    let sym = div_series(p, |k, ell| quant_coeff(k, ell, n, lambda).expect("ell <= k"));
    DiffOp::from_symbol(sym, lambda.clone())
}
