use rayon::prelude::*;

use super::{gamma_bar, psido_quantize, psido_symbol};
use crate::error::{Error, Result};
use crate::exactnum::{bernoulli, interpolation_nodes, lagrange_interpolate, to_bernoulli_basis, Laurent, UniPoly};
use crate::scalar::{sign, Scalar};

/// Symbol components of `sigma(L_X Q(a xi^k))` down to `depth`.
pub fn transported_component<S: Scalar>(
    k: &S,
    lambda: &S,
    depth: usize,
    x: &UniPoly<S>,
    a: &UniPoly<S>,
) -> Result<Vec<UniPoly<S>>> {
    let mut comps = vec![UniPoly::zero(); depth + 1];
    comps[0] = a.clone();
    let op = psido_quantize(&comps, k, lambda)?;
    psido_symbol(&op.lie(x))
}

/// `t_k^j(lambda)`: the component of `sigma L_X sigma^-1 (a xi^k)` of fiber degree
/// `k - j` is `t` times the transvectant `gamma_bar_(j+1)(X, a)` (with `a` of
/// weight `-k`), normalized so that its `X^(j+1) a` term has coefficient `(-1)^j`.
/// Proportionality is checked on monomial fields and coefficients.
pub fn extract_t<S: Scalar>(k: &S, j: u32, lambda: &S) -> Result<S> {
    if j < 2 {
        return Err(Error::IndexOutOfRange(format!("t_k^j needs j >= 2, got {j}")));
    }
    let depth = j as usize;
    let mu = -k.clone();
    let top = j as usize + 1;
    let one = UniPoly::constant(S::one());
    let lead = transported_component(k, lambda, depth, &UniPoly::monomial(S::one(), top), &one)?.swap_remove(depth);
    let fact = (1..=top as i64).fold(S::one(), |acc, v| acc * S::from_i64(v));
    let t = sign::<S>(j) * lead.coeff(0) / fact;
    let mut ratio: Option<S> = None;
    for d in 0..=(top + 1) {
        let x = UniPoly::monomial(S::one(), d);
        for e in 0..=top {
            let a = UniPoly::monomial(S::one(), e);
            let got = transported_component(k, lambda, depth, &x, &a)?.swap_remove(depth);
            let g = gamma_bar(&x, &a, &mu, j + 1);
            if g.is_zero() {
                if !got.is_zero() {
                    return Err(Error::NotProportional(format!("X = x^{d}, a = x^{e}: {got} against zero")));
                }
                continue;
            }
            let r = ratio
                .get_or_insert_with(|| {
                    let deg = g.degree().expect("nonzero");
                    got.coeff(deg) / g.coeff(deg)
                })
                .clone();
            if got != g.scale(&r) {
                return Err(Error::NotProportional(format!("X = x^{d}, a = x^{e}: {got} against {g}")));
            }
        }
    }
    Ok(t)
}

/// `extract_t`, falling back to the limit `k + eps -> k` when `k` is resonant
/// at the depth needed.
fn extract_t_regular<S: Scalar>(k: &S, j: u32, lambda: &S) -> Result<S> {
    match extract_t(k, j, lambda) {
        Err(Error::ResonantOrder(_)) => {
            let t = extract_t(&Laurent::perturbed(k.clone()), j, &Laurent::constant(lambda.clone()))?;
            match t.valuation() {
                Some(v) if v < 0 => Err(Error::ResonantOrder(format!("t_k^{j} has a pole at k = {k}"))),
                _ => Ok(t.constant_term()),
            }
        }
        other => other,
    }
}

/// `t_k^j` as a polynomial in `lambda`, interpolated through `j + 1` integer nodes.
pub fn extract_t_poly<S: Scalar>(k: &S, j: u32) -> Result<UniPoly<S>> {
    let points = interpolation_nodes::<S>(j as usize + 1)
        .into_par_iter()
        .map(|l| extract_t_regular(k, j, &l).map(|t| (l, t)))
        .collect::<Result<Vec<_>>>()?;
    lagrange_interpolate(&points)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParityReport<S> {
    pub k: S,
    pub j: u32,
    pub poly: UniPoly<S>,
    /// Coordinates on `B_0, B_1, ...`.
    pub bernoulli: Vec<S>,
    /// Whether `t(1 - lambda) = (-1)^j t(lambda)`.
    pub involution: bool,
}

impl<S: Scalar> ParityReport<S> {
    /// Indices of Bernoulli coordinates whose parity differs from `j`.
    pub fn wrong_parity(&self) -> Vec<usize> {
        self.bernoulli
            .iter()
            .enumerate()
            .filter(|(s, c)| (*s as u32 + self.j) % 2 == 1 && !c.is_zero())
            .map(|(s, _)| s)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.involution && self.wrong_parity().is_empty()
    }
}

pub fn bernoulli_parity_check<S: Scalar>(k: &S, j: u32) -> Result<ParityReport<S>> {
    let poly = extract_t_poly(k, j)?;
    let bern = to_bernoulli_basis(&poly);
    let flipped = poly.compose(&UniPoly::from_coeffs(vec![S::one(), -S::one()]));
    let expect = if j % 2 == 0 { poly.clone() } else { -poly.clone() };
    debug_assert_eq!(
        bern.iter().enumerate().fold(UniPoly::zero(), |acc, (s, c)| acc + bernoulli::<S>(s as u32).scale(c)),
        poly
    );
    Ok(ParityReport { k: k.clone(), j, poly, bernoulli: bern, involution: flipped == expect })
}

/// `k,j,basis,degree,coefficient` rows, monomial basis first.
pub fn t_poly_csv<S: Scalar>(reports: &[ParityReport<S>]) -> String {
    let mut out = String::from("k,j,basis,degree,coefficient\n");
    for r in reports {
        for (d, c) in r.poly.coeffs().iter().enumerate() {
            out.push_str(&format!("{},{},monomial,{d},{c}\n", r.k, r.j));
        }
        for (d, c) in r.bernoulli.iter().enumerate() {
            out.push_str(&format!("{},{},bernoulli,{d},{c}\n", r.k, r.j));
        }
    }
    out
}
