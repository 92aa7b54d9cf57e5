//! One-dimensional pseudodifferential operators of arbitrary rational order,
//! transvectants and the polynomials `t_k^j(lambda)`.

mod tkj;
mod transvectant;

pub use tkj::{
    bernoulli_parity_check, extract_t, extract_t_poly, t_poly_csv, transported_component, ParityReport,
};
pub use transvectant::{gamma_bar, transvectant, TransvectantSpec};

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{binomial_general, UniPoly};
use crate::scalar::{sign, Scalar};

/// `A = sum_{i=0..N} a_{k-i}(x) D^(k-i)`, truncated at depth `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiDO<S> {
    k: S,
    lambda: S,
    coeffs: Vec<UniPoly<S>>,
}

impl<S: Scalar> PsiDO<S> {
    /// `coeffs[i]` is the coefficient of `D^(k-i)`; the depth is `coeffs.len() - 1`.
    pub fn new(k: S, lambda: S, coeffs: Vec<UniPoly<S>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::IndexOutOfRange("a truncated operator needs at least one slot".into()));
        }
        Ok(PsiDO { k, lambda, coeffs })
    }

    pub fn zero(k: S, depth: usize, lambda: S) -> Self {
        PsiDO { k, lambda, coeffs: vec![UniPoly::zero(); depth + 1] }
    }

    /// `D^k`.
    pub fn power(k: S, depth: usize, lambda: S) -> Self {
        let mut a = Self::zero(k, depth, lambda);
        a.coeffs[0] = UniPoly::constant(S::one());
        a
    }

    pub fn identity(depth: usize, lambda: S) -> Self {
        Self::power(S::zero(), depth, lambda)
    }

    pub fn multiplication(f: UniPoly<S>, depth: usize, lambda: S) -> Self {
        let mut a = Self::zero(S::zero(), depth, lambda);
        a.coeffs[0] = f;
        a
    }

    /// `L_X = X D + lambda X'`.
    pub fn lie_derivative(x: &UniPoly<S>, depth: usize, lambda: S) -> Self {
        let mut a = Self::zero(S::one(), depth, lambda.clone());
        a.coeffs[0] = x.clone();
        if depth >= 1 {
            a.coeffs[1] = x.derivative().scale(&lambda);
        }
        a
    }

    pub fn order(&self) -> &S {
        &self.k
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn depth(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[UniPoly<S>] {
        &self.coeffs
    }

    /// Coefficient of `D^(k-i)`.
    pub fn coeff(&self, i: usize) -> &UniPoly<S> {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(UniPoly::is_zero)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.lambda != other.lambda {
            return Err(Error::WeightMismatch { left: self.lambda.to_string(), right: other.lambda.to_string() });
        }
        if self.depth() != other.depth() {
            return Err(Error::DepthMismatch { left: self.depth(), right: other.depth() });
        }
        Ok(())
    }

    fn with_depth(&self, depth: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(depth + 1, UniPoly::zero());
        PsiDO { k: self.k.clone(), lambda: self.lambda.clone(), coeffs }
    }

    /// Generalized Leibniz rule `D^s a = sum_r (s choose r) a^(r) D^(s-r)`, truncated.
    fn compose_unchecked(&self, other: &Self) -> Self {
        let depth = self.depth();
        let mut out = vec![UniPoly::zero(); depth + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let s = self.k.clone() - S::from_i64(i as i64);
            for (j, b) in other.coeffs.iter().enumerate().take(depth + 1 - i) {
                let mut db = b.clone();
                for r in 0..=(depth - i - j) {
                    if db.is_zero() {
                        break;
                    }
                    let c = binomial_general(&s, r as u32);
                    if !c.is_zero() {
                        out[i + j + r] = out[i + j + r].clone() + a.clone() * db.scale(&c);
                    }
                    db = db.derivative();
                }
            }
        }
        PsiDO { k: self.k.clone() + other.k.clone(), lambda: self.lambda.clone(), coeffs: out }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.k != other.k {
            return Err(Error::IndexOutOfRange(format!("orders {} and {} differ", self.k, other.k)));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(PsiDO { k: self.k.clone(), lambda: self.lambda.clone(), coeffs })
    }

    pub fn scale(&self, c: &S) -> Self {
        PsiDO {
            k: self.k.clone(),
            lambda: self.lambda.clone(),
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// `L_X A - A L_X` at the same order and depth.
    pub fn lie(&self, x: &UniPoly<S>) -> Self {
        let depth = self.depth();
        let wide = self.with_depth(depth + 1);
        let l = PsiDO::lie_derivative(x, depth + 1, self.lambda.clone());
        let left = l.compose_unchecked(&wide);
        let right = wide.compose_unchecked(&l);
        let mut coeffs: Vec<UniPoly<S>> =
            left.coeffs.into_iter().zip(right.coeffs).map(|(a, b)| a - b).collect();
        debug_assert!(coeffs[0].is_zero());
        coeffs.remove(0);
        PsiDO { k: self.k.clone(), lambda: self.lambda.clone(), coeffs }
    }
}

/// `(-1)^m (K choose m) (2 lambda + K - 1 choose m) / (2K - m + 1 choose m)`:
/// the weight of `a^(m) xi^(K-m)` in the symbol of `a D^K`.
fn symbol_weight<S: Scalar>(big_k: &S, m: u32, lambda: &S) -> Result<S> {
    let den = binomial_general(&(S::from_i64(2) * big_k.clone() - S::from_i64(m as i64 - 1)), m);
    if den.is_zero() {
        return Err(Error::ResonantOrder(format!("(2K-m+1 choose m) vanishes at K = {big_k}, m = {m}")));
    }
    let shifted = S::from_i64(2) * lambda.clone() + big_k.clone() - S::one();
    Ok(sign::<S>(m) * binomial_general(big_k, m) * binomial_general(&shifted, m) / den)
}

/// `(K choose m) (2 lambda + K - 1 choose m) / (2K choose m)`.
fn quant_weight<S: Scalar>(big_k: &S, m: u32, lambda: &S) -> Result<S> {
    let den = binomial_general(&(S::from_i64(2) * big_k.clone()), m);
    if den.is_zero() {
        return Err(Error::ResonantOrder(format!("(2K choose m) vanishes at K = {big_k}, m = {m}")));
    }
    let shifted = S::from_i64(2) * lambda.clone() + big_k.clone() - S::one();
    Ok(binomial_general(big_k, m) * binomial_general(&shifted, m) / den)
}

fn triangular<S: Scalar>(
    k: &S,
    lambda: &S,
    input: &[UniPoly<S>],
    weight: impl Fn(&S, u32, &S) -> Result<S>,
) -> Result<Vec<UniPoly<S>>> {
    let depth = input.len() - 1;
    let mut out = vec![UniPoly::zero(); depth + 1];
    for (i, a) in input.iter().enumerate() {
        let big_k = k.clone() - S::from_i64(i as i64);
        let mut da = a.clone();
        for m in 0..=(depth - i) {
            let w = weight(&big_k, m as u32, lambda)?;
            if !da.is_zero() {
                out[i + m] = out[i + m].clone() + da.scale(&w);
                da = da.derivative();
            }
        }
    }
    Ok(out)
}

/// Components `s_i` of the equivariant symbol `sum_i s_i xi^(k-i)`.
///
/// Every weight that the truncation could use is checked, so resonance is a
/// property of `(k, N)` alone and not of the particular coefficients.
pub fn psido_symbol<S: Scalar>(a: &PsiDO<S>) -> Result<Vec<UniPoly<S>>> {
    triangular(&a.k, &a.lambda, &a.coeffs, symbol_weight)
}

/// Inverse of `psido_symbol`; the depth is `components.len() - 1`.
pub fn psido_quantize<S: Scalar>(components: &[UniPoly<S>], k: &S, lambda: &S) -> Result<PsiDO<S>> {
    let coeffs = triangular(k, lambda, components, quant_weight)?;
    PsiDO::new(k.clone(), lambda.clone(), coeffs)
}

/// The natural action on `a xi^K`, which transforms as a density of weight `-K`.
pub fn symbol_lie<S: Scalar>(x: &UniPoly<S>, k: &S, components: &[UniPoly<S>]) -> Vec<UniPoly<S>> {
    components
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let big_k = k.clone() - S::from_i64(i as i64);
            x.clone() * s.derivative() - (x.derivative() * s.clone()).scale(&big_k)
        })
        .collect()
}

impl<S: Scalar> fmt::Display for PsiDO<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = self.k.clone() - S::from_i64(i as i64);
            write!(f, "[{a}] D^({e})")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(D^({}))", self.k.clone() - S::from_i64(self.depth() as i64 + 1))
    }
}

#[derive(Serialize, Deserialize)]
struct PsiWire<P> {
    k: String,
    #[serde(rename = "N")]
    depth: usize,
    lambda: String,
    coeffs: Vec<P>,
}

impl<S: Scalar> Serialize for PsiDO<S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        PsiWire { k: self.k.to_string(), depth: self.depth(), lambda: self.lambda.to_string(), coeffs: self.coeffs.iter().collect() }
            .serialize(s)
    }
}

impl<'de, S: Scalar + FromStr> Deserialize<'de> for PsiDO<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = PsiWire::<UniPoly<S>>::deserialize(d)?;
        let parse = |t: &str| t.parse::<S>().map_err(|_| D::Error::custom(format!("bad rational {t:?}")));
        if wire.coeffs.len() != wire.depth + 1 {
            return Err(D::Error::custom(format!("expected {} coefficient slots", wire.depth + 1)));
        }
        Ok(PsiDO { k: parse(&wire.k)?, lambda: parse(&wire.lambda)?, coeffs: wire.coeffs })
    }
}
