//! Sparse polynomials on the cotangent bundle `T*R^n` with exact coefficients.
//!
//! Variables are `x_1..x_n` (base) and `xi_1..xi_n` (fiber). Axes are
//! zero-based in this API; the text format is one-based.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, falling_factorial, int_scalar};
use crate::scalar::Scalar;

/// Exponent vector of length `n`, used for derivative multi-indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn new(exps: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(exps))
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, n))
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(n);
        m.0[i] = 1;
        m
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Product of per-axis binomials `(self_i choose gamma_i)`.
    pub fn binomial(&self, gamma: &Self) -> u128 {
        self.0.iter().zip(&gamma.0).map(|(&a, &g)| binomial(a, g)).product()
    }

    /// All `gamma <= self`.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zeros(0)];
        for &a in &self.0 {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..=a).map(move |g| {
                        let mut m2 = m.clone();
                        m2.0.push(g);
                        m2
                    })
                })
                .collect();
        }
        out
    }

    /// All multi-indices of length `n` and order exactly `k`.
    pub fn all_of_order(n: usize, k: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(k);
                out.push(MultiIndex::new(prefix));
                prefix.pop();
                return;
            }
            for a in (0..=k).rev() {
                prefix.push(a);
                rec(n, k - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if k == 0 {
                out.push(MultiIndex::zeros(0));
            }
            return out;
        }
        rec(n, k, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// All multi-indices of length `n` and order at most `k`.
    pub fn all_up_to_order(n: usize, k: u32) -> Vec<MultiIndex> {
        (0..=k).flat_map(|d| Self::all_of_order(n, d)).collect()
    }
}

/// Calls `f` on every exponent vector `g` with `g <= limits` componentwise.
pub(crate) fn for_each_below(limits: &[u32], mut f: impl FnMut(&[u32])) {
    let mut g = vec![0u32; limits.len()];
    loop {
        f(&g);
        let mut i = 0;
        loop {
            if i == g.len() {
                return;
            }
            if g[i] < limits[i] {
                g[i] += 1;
                break;
            }
            g[i] = 0;
            i += 1;
        }
    }
}

/// Exponents of `x_1..x_n` followed by `xi_1..xi_n`.
///
/// The derived order compares total degree first, then the concatenated
/// exponent vector lexicographically (graded lex).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    deg: u32,
    exps: SmallVec<[u32; 6]>,
}

impl Monomial {
    pub fn new(x: &[u32], xi: &[u32]) -> Self {
        assert_eq!(x.len(), xi.len(), "x and xi exponent vectors differ in length");
        let mut exps = SmallVec::with_capacity(2 * x.len());
        exps.extend_from_slice(x);
        exps.extend_from_slice(xi);
        Self::from_exps(exps)
    }

    fn from_exps(exps: SmallVec<[u32; 6]>) -> Self {
        Monomial { deg: exps.iter().sum(), exps }
    }

    pub fn one(n: usize) -> Self {
        Self::from_exps(SmallVec::from_elem(0, 2 * n))
    }

    pub fn n(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn x(&self) -> &[u32] {
        &self.exps[..self.n()]
    }

    pub fn xi(&self) -> &[u32] {
        &self.exps[self.n()..]
    }

    pub fn x_degree(&self) -> u32 {
        self.x().iter().sum()
    }

    pub fn xi_degree(&self) -> u32 {
        self.xi().iter().sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.deg
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_exps(self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect())
    }

    /// Same monomial with the exponent at flat position `pos` replaced.
    fn with_exp(&self, pos: usize, e: u32) -> Self {
        let mut exps = self.exps.clone();
        exps[pos] = e;
        Self::from_exps(exps)
    }

    /// Replace the fiber part by `xi`.
    pub fn with_xi(&self, xi: &[u32]) -> Self {
        Self::new(self.x(), xi)
    }

    /// Replace the base part by `x`.
    pub fn with_x(&self, x: &[u32]) -> Self {
        Self::new(x, self.xi())
    }
}

/// Sparse polynomial on `T*R^n`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoly<S> {
    n: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> PhasePoly<S> {
    pub fn zero(n: usize) -> Self {
        PhasePoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: S) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, S::one())
    }

    /// `c x^x xi^xi`.
    pub fn monomial(c: S, x: &[u32], xi: &[u32]) -> Self {
        let mut p = Self::zero(x.len());
        p.add_term(Monomial::new(x, xi), c);
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            assert_eq!(m.n(), n, "monomial dimension differs from polynomial dimension");
            p.add_term(m, c);
        }
        p
    }

    /// The coordinate `x_i` (zero-based).
    pub fn var_x(n: usize, i: usize) -> Self {
        let mut x = vec![0; n];
        x[i] = 1;
        Self::monomial(S::one(), &x, &vec![0; n])
    }

    /// The fiber coordinate `xi_i` (zero-based).
    pub fn var_xi(n: usize, i: usize) -> Self {
        let mut xi = vec![0; n];
        xi[i] = 1;
        Self::monomial(S::one(), &vec![0; n], &xi)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (graded lex) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Accumulates `c` onto the coefficient of `m`.
    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let sum = v.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left: self.n, right: other.n })
        }
    }

    fn check_axis(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::AxisOutOfRange { axis: i, n: self.n })
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        PhasePoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Monomial, &S) -> Option<(Monomial, S)>) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if let Some((m2, c2)) = f(m, c) {
                out.add_term(m2, c2);
            }
        }
        out
    }

    /// Exact `d/dx_i`.
    pub fn partial_x(&self, i: usize) -> Result<Self> {
        self.check_axis(i)?;
        Ok(self.dx(i))
    }

    /// Exact `d/dxi_i`.
    pub fn partial_xi(&self, i: usize) -> Result<Self> {
        self.check_axis(i)?;
        Ok(self.dxi(i))
    }

    pub(crate) fn dx(&self, i: usize) -> Self {
        self.diff_pos(i)
    }

    pub(crate) fn dxi(&self, i: usize) -> Self {
        self.diff_pos(self.n + i)
    }

    fn diff_pos(&self, pos: usize) -> Self {
        self.map_terms(|m, c| {
            let e = m.exps[pos];
            (e > 0).then(|| (m.with_exp(pos, e - 1), c.clone() * S::from_i64(e as i64)))
        })
    }

    /// `d^alpha/dx^alpha`.
    pub fn dx_multi(&self, alpha: &[u32]) -> Self {
        self.diff_multi(alpha, 0)
    }

    /// `d^beta/dxi^beta`.
    pub fn dxi_multi(&self, beta: &[u32]) -> Self {
        self.diff_multi(beta, self.n)
    }

    fn diff_multi(&self, alpha: &[u32], offset: usize) -> Self {
        self.map_terms(|m, c| {
            let mut exps = m.exps.clone();
            let mut factor: u128 = 1;
            for (i, &a) in alpha.iter().enumerate() {
                let e = exps[offset + i];
                if a > e {
                    return None;
                }
                factor *= falling_factorial(e, a);
                exps[offset + i] = e - a;
            }
            Some((Monomial::from_exps(exps), c.clone() * int_scalar::<S>(factor)))
        })
    }

    /// Euler operator `E = xi_i d/dxi_i`.
    pub fn euler_xi(&self) -> Self {
        self.map_terms(|m, c| {
            let k = m.xi_degree();
            (k > 0).then(|| (m.clone(), c.clone() * S::from_i64(k as i64)))
        })
    }

    /// `Div = sum_i d^2/(dx_i dxi_i)`.
    pub fn big_div(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            for i in 0..self.n {
                let (a, b) = (m.exps[i], m.exps[self.n + i]);
                if a > 0 && b > 0 {
                    let m2 = m.with_exp(i, a - 1).with_exp(self.n + i, b - 1);
                    out.add_term(m2, c.clone() * S::from_i64((a * b) as i64));
                }
            }
        }
        out
    }

    /// `div = Div / k` on a polynomial homogeneous of fiber degree `k >= 1`.
    pub fn small_div(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        match self.xi_homogeneous_degree() {
            None => Err(Error::NotHomogeneous),
            Some(0) => Err(Error::ZeroDegree),
            Some(k) => Ok(self.big_div().scale(&(S::one() / S::from_i64(k as i64)))),
        }
    }

    /// Poisson bracket `{F, G} = dF/dxi_i dG/dx_i - dF/dx_i dG/dxi_i`.
    pub fn poisson(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            out = out + &(&self.dxi(i) * &other.dx(i)) - &(&self.dx(i) * &other.dxi(i));
        }
        Ok(out)
    }

    /// Highest fiber degree, `None` for zero.
    pub fn xi_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::xi_degree).max()
    }

    /// Highest base degree, `None` for zero.
    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::x_degree).max()
    }

    /// `Some(k)` when every term has fiber degree `k`; `None` for zero or mixed.
    pub fn xi_homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::xi_degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(|m| m.xi_degree() == 0)
    }

    /// Fiber-degree-`k` component.
    pub fn xi_component(&self, k: u32) -> Self {
        self.map_terms(|m, c| (m.xi_degree() == k).then(|| (m.clone(), c.clone())))
    }

    /// Split into fiber-homogeneous components, keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.xi_degree())
                .or_insert_with(|| Self::zero(self.n))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Sum of the components with fiber degree at least `k`.
    pub fn truncate_below(&self, k: u32) -> Self {
        self.map_terms(|m, c| (m.xi_degree() >= k).then(|| (m.clone(), c.clone())))
    }
}

impl<'a, S: Scalar> Add<&'a PhasePoly<S>> for &'a PhasePoly<S> {
    type Output = PhasePoly<S>;
    fn add(self, rhs: &'a PhasePoly<S>) -> PhasePoly<S> {
        self.clone() + rhs
    }
}

impl<S: Scalar> Add<&PhasePoly<S>> for PhasePoly<S> {
    type Output = PhasePoly<S>;
    fn add(mut self, rhs: &PhasePoly<S>) -> PhasePoly<S> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in polynomial addition");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
        self
    }
}

impl<S: Scalar> Add for PhasePoly<S> {
    type Output = PhasePoly<S>;
    fn add(self, rhs: PhasePoly<S>) -> PhasePoly<S> {
        self + &rhs
    }
}

impl<S: Scalar> Sub<&PhasePoly<S>> for PhasePoly<S> {
    type Output = PhasePoly<S>;
    fn sub(mut self, rhs: &PhasePoly<S>) -> PhasePoly<S> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in polynomial subtraction");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
        self
    }
}

impl<'a, S: Scalar> Sub<&'a PhasePoly<S>> for &'a PhasePoly<S> {
    type Output = PhasePoly<S>;
    fn sub(self, rhs: &'a PhasePoly<S>) -> PhasePoly<S> {
        self.clone() - rhs
    }
}

impl<S: Scalar> Sub for PhasePoly<S> {
    type Output = PhasePoly<S>;
    fn sub(self, rhs: PhasePoly<S>) -> PhasePoly<S> {
        self - &rhs
    }
}

impl<S: Scalar> Neg for PhasePoly<S> {
    type Output = PhasePoly<S>;
    fn neg(self) -> PhasePoly<S> {
        PhasePoly { n: self.n, terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<'a, S: Scalar> Mul<&'a PhasePoly<S>> for &'a PhasePoly<S> {
    type Output = PhasePoly<S>;
    fn mul(self, rhs: &'a PhasePoly<S>) -> PhasePoly<S> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in polynomial product");
        let mut out = PhasePoly::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Mul for PhasePoly<S> {
    type Output = PhasePoly<S>;
    fn mul(self, rhs: PhasePoly<S>) -> PhasePoly<S> {
        &self * &rhs
    }
}

/// Writes `coef * atoms` in the canonical text syntax, with a leading sign
/// handled by the caller. `atoms` is empty for a constant.
pub(crate) fn write_signed_terms<'a, S: Scalar + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a S)>,
) -> fmt::Result {
    let mut first = true;
    for (atoms, c) in terms {
        let s = c.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        first = false;
        match (atoms.is_empty(), mag == "1") {
            (true, _) => write!(f, "{mag}")?,
            (false, true) => write!(f, "{atoms}")?,
            (false, false) => write!(f, "{mag} {atoms}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

pub(crate) fn atom_string(prefix: &str, exps: &[u32]) -> Vec<String> {
    exps.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("{prefix}{}", i + 1)
            } else {
                format!("{prefix}{}^{e}", i + 1)
            }
        })
        .collect()
}

impl<S: Scalar> fmt::Display for PhasePoly<S> {
    /// Canonical text form, e.g. `3/2 x1^2 xi2 - x1 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(
            f,
            self.terms.iter().map(|(m, c)| {
                let mut atoms = atom_string("x", m.x());
                atoms.extend(atom_string("xi", m.xi()));
                (atoms.join(" "), c)
            }),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    coef: String,
    x: Vec<u32>,
    xi: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PolyWire {
    n: usize,
    terms: Vec<TermWire>,
}

impl<S: Scalar> Serialize for PhasePoly<S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        PolyWire {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermWire { coef: c.to_string(), x: m.x().to_vec(), xi: m.xi().to_vec() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, S: Scalar + FromStr> Deserialize<'de> for PhasePoly<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = PolyWire::deserialize(d)?;
        let mut p = PhasePoly::zero(wire.n);
        for t in wire.terms {
            if t.x.len() != wire.n || t.xi.len() != wire.n {
                return Err(D::Error::custom("exponent vector length differs from n"));
            }
            let c = t
                .coef
                .parse::<S>()
                .map_err(|_| D::Error::custom(format!("bad rational {:?}", t.coef)))?;
            p.add_term(Monomial::new(&t.x, &t.xi), c);
        }
        Ok(p)
    }
}

/// A polynomial of fiber degree exactly one: `X = X^i xi_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<S>(PhasePoly<S>);

impl<S: Scalar> VectorField<S> {
    pub fn new(p: PhasePoly<S>) -> Result<Self> {
        if p.terms().all(|(m, _)| m.xi_degree() == 1) {
            Ok(VectorField(p))
        } else {
            Err(Error::NotVectorField)
        }
    }

    /// `sum_i components[i] d/dx_i`; every component must be free of `xi`.
    pub fn from_components(components: &[PhasePoly<S>]) -> Result<Self> {
        let n = components.len();
        let mut p = PhasePoly::zero(n);
        for (i, c) in components.iter().enumerate() {
            if c.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: c.n() });
            }
            if !c.is_x_only() {
                return Err(Error::NotVectorField);
            }
            p = p + &(c * &PhasePoly::var_xi(n, i));
        }
        Ok(VectorField(p))
    }

    pub fn zero(n: usize) -> Self {
        VectorField(PhasePoly::zero(n))
    }

    /// The translation `d/dx_i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        VectorField(PhasePoly::var_xi(n, i))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn as_poly(&self) -> &PhasePoly<S> {
        &self.0
    }

    pub fn into_poly(self) -> PhasePoly<S> {
        self.0
    }

    /// Component `X^i`.
    pub fn component(&self, i: usize) -> PhasePoly<S> {
        self.0.dxi(i)
    }

    /// `div X = d_i X^i`.
    pub fn divergence(&self) -> PhasePoly<S> {
        self.0.big_div()
    }

    /// Lie bracket `[X, Y]`, computed as the Poisson bracket of the symbols.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        Ok(VectorField(self.0.poisson(&other.0)?))
    }

    pub fn scale(&self, c: &S) -> Self {
        VectorField(self.0.scale(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorField(&self.0 + &other.0)
    }
}

/// Canonical lift of `X` to `T*R^n`: `L_X = X^i d_i - xi_j (d_i X^j) d/dxi_i`.
pub fn lie_lift<S: Scalar>(x: &VectorField<S>, p: &PhasePoly<S>) -> Result<PhasePoly<S>> {
    x.as_poly().check_dim(p)?;
    let n = p.n();
    let mut out = PhasePoly::zero(n);
    for i in 0..n {
        let xi_comp = x.component(i);
        if !xi_comp.is_zero() {
            out = out + &(&xi_comp * &p.dx(i));
        }
        let dp = p.dxi(i);
        if dp.is_zero() {
            continue;
        }
        // xi_j d_i X^j
        let dxi_x = x.as_poly().dx(i);
        if !dxi_x.is_zero() {
            out = out - &(&dxi_x * &dp);
        }
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;
    type P = PhasePoly<Q>;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn mono(c: i64, x: &[u32], xi: &[u32]) -> P {
        P::monomial(q(c), x, xi)
    }

    #[test]
    fn partials() {
        let p = mono(1, &[2, 0], &[0, 1]);
        assert_eq!(p.partial_x(0).unwrap(), mono(2, &[1, 0], &[0, 1]));
        assert_eq!(p.partial_xi(1).unwrap(), mono(1, &[2, 0], &[0, 0]));
        assert!(P::constant(2, q(5)).partial_x(1).unwrap().is_zero());
        assert_eq!(p.partial_x(2), Err(Error::AxisOutOfRange { axis: 2, n: 2 }));
    }

    #[test]
    fn euler() {
        let p = mono(1, &[0, 0], &[2, 1]);
        assert_eq!(p.euler_xi(), mono(3, &[0, 0], &[2, 1]));
        assert!(mono(1, &[3, 0], &[0, 0]).euler_xi().is_zero());
        let s = mono(1, &[0, 0], &[1, 0]) + mono(1, &[0, 0], &[1, 1]);
        assert_eq!(s.euler_xi(), mono(1, &[0, 0], &[1, 0]) + mono(2, &[0, 0], &[1, 1]));
    }

    #[test]
    fn divergences() {
        assert_eq!(mono(1, &[1], &[1]).big_div(), P::one(1));
        assert!(mono(1, &[0], &[2]).big_div().is_zero());
        // d1 dxi1 (x1^2 xi1 xi2) = 2 x1 xi2; d2 dxi2 gives 0
        assert_eq!(mono(1, &[2, 0], &[1, 1]).big_div(), mono(2, &[1, 0], &[0, 1]));
        assert_eq!(mono(1, &[1], &[2]).small_div().unwrap(), mono(1, &[0], &[1]));
        assert!(mono(3, &[0, 0], &[2, 0]).small_div().unwrap().is_zero());
        assert!(mono(1, &[1, 0], &[0, 1]).small_div().unwrap().is_zero());
        let mixed = mono(1, &[1], &[1]) + mono(1, &[1], &[2]);
        assert_eq!(mixed.small_div(), Err(Error::NotHomogeneous));
        assert_eq!(mono(1, &[1], &[0]).small_div(), Err(Error::ZeroDegree));
    }

    #[test]
    fn poisson_examples() {
        let xi1 = P::var_xi(1, 0);
        let x1 = P::var_x(1, 0);
        assert_eq!(xi1.poisson(&x1).unwrap(), P::one(1));
        let f = mono(1, &[0, 0], &[1, 1]);
        assert!(f.poisson(&f).unwrap().is_zero());
        let g = mono(1, &[1, 1], &[0, 0]);
        let expect = mono(1, &[0, 1], &[0, 1]) + mono(1, &[1, 0], &[1, 0]);
        assert_eq!(f.poisson(&g).unwrap(), expect);
        assert!(matches!(f.poisson(&P::one(3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn lift_examples() {
        // X = x1 d2, P = xi1 -> -xi2
        let x = VectorField::new(mono(1, &[1, 0], &[0, 1])).unwrap();
        let p = mono(1, &[0, 0], &[1, 0]);
        assert_eq!(lie_lift(&x, &p).unwrap(), mono(-1, &[0, 0], &[0, 1]));
        assert!(lie_lift(&x, &P::one(2)).unwrap().is_zero());
        let t = VectorField::coordinate(1, 0);
        assert_eq!(lie_lift(&t, &mono(1, &[2], &[0])).unwrap(), mono(2, &[1], &[0]));
    }

    #[test]
    fn vector_field_validation() {
        assert_eq!(VectorField::new(mono(1, &[1], &[2])), Err(Error::NotVectorField));
        let x = VectorField::from_components(&[mono(1, &[2, 0], &[0, 0]), P::zero(2)]).unwrap();
        assert_eq!(x.as_poly(), &mono(1, &[2, 0], &[1, 0]));
        assert_eq!(x.divergence(), mono(2, &[1, 0], &[0, 0]));
    }

    #[test]
    fn canonical_order_and_display() {
        let p = mono(3, &[0, 0], &[0, 0]) + mono(-1, &[1, 0], &[0, 0])
            + P::monomial(Q::from_frac(3, 2), &[2, 0], &[0, 1]);
        assert_eq!(p.to_string(), "3 - x1 + 3/2 x1^2 xi2");
        assert_eq!(P::zero(1).to_string(), "0");
    }

    #[test]
    fn json_form() {
        let p = P::monomial(Q::from_frac(-1, 2), &[1, 0], &[0, 2]);
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"{"n":2,"terms":[{"coef":"-1/2","x":[1,0],"xi":[0,2]}]}"#);
        let back: P = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn multi_index_enumeration() {
        assert_eq!(MultiIndex::all_of_order(3, 2).len(), 6);
        assert_eq!(MultiIndex::all_up_to_order(2, 3).len(), 10);
        let a = MultiIndex::new(&[2, 1]);
        assert_eq!(a.sub_indices().len(), 6);
        assert_eq!(a.binomial(&MultiIndex::new(&[1, 1])), 2);
    }

    pub(crate) fn arb_poly(n: usize, max_deg: u32) -> impl Strategy<Value = P> {
        let term = (
            proptest::collection::vec(0..=max_deg, n),
            proptest::collection::vec(0..=max_deg, n),
            -5i64..=5,
        );
        proptest::collection::vec(term, 0..5).prop_map(move |ts| {
            let mut p = P::zero(n);
            for (x, xi, c) in ts {
                p.add_term(Monomial::new(&x, &xi), q(c));
            }
            p
        })
    }

    fn arb_field(n: usize, max_deg: u32) -> impl Strategy<Value = VectorField<Q>> {
        proptest::collection::vec(arb_poly(n, max_deg), n).prop_map(|comps| {
            let comps: Vec<P> = comps.iter().map(|c| c.xi_component(0)).collect();
            VectorField::from_components(&comps).unwrap()
        })
    }

    proptest! {
        #[test]
        fn lift_equals_poisson(x in arb_field(2, 3), p in arb_poly(2, 3)) {
            prop_assert_eq!(lie_lift(&x, &p).unwrap(), x.as_poly().poisson(&p).unwrap());
        }

        #[test]
        fn lift_preserves_fiber_degree(x in arb_field(2, 3), p in arb_poly(2, 3)) {
            let k = 2;
            let pk = p.xi_component(k);
            let lifted = lie_lift(&x, &pk).unwrap();
            prop_assert!(lifted.is_zero() || lifted.xi_homogeneous_degree() == Some(k));
        }

        #[test]
        fn lift_is_lie_algebra_action(
            x in arb_field(2, 2), y in arb_field(2, 2), p in arb_poly(2, 2)
        ) {
            let xy = x.bracket(&y).unwrap();
            let lhs = lie_lift(&x, &lie_lift(&y, &p).unwrap()).unwrap()
                - lie_lift(&y, &lie_lift(&x, &p).unwrap()).unwrap();
            prop_assert_eq!(lhs, lie_lift(&xy, &p).unwrap());
        }

        #[test]
        fn poisson_jacobi(f in arb_poly(2, 2), g in arb_poly(2, 2), h in arb_poly(2, 2)) {
            let a = f.poisson(&g.poisson(&h).unwrap()).unwrap();
            let b = g.poisson(&h.poisson(&f).unwrap()).unwrap();
            let c = h.poisson(&f.poisson(&g).unwrap()).unwrap();
            prop_assert!((a + b + c).is_zero());
        }

        #[test]
        fn poisson_leibniz_and_antisymmetry(
            f in arb_poly(2, 2), g in arb_poly(2, 2), h in arb_poly(2, 2)
        ) {
            prop_assert_eq!(f.poisson(&g).unwrap(), -g.poisson(&f).unwrap());
            let lhs = f.poisson(&(&g * &h)).unwrap();
            let rhs = &f.poisson(&g).unwrap() * &h + &(&g * &f.poisson(&h).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn partial_leibniz(f in arb_poly(2, 3), g in arb_poly(2, 3), i in 0usize..2) {
            let lhs = (&f * &g).partial_x(i).unwrap();
            let rhs = &f.partial_x(i).unwrap() * &g + &(&f * &g.partial_x(i).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn big_div_is_k_small_div(p in arb_poly(3, 2)) {
            for (k, part) in p.homogeneous_parts() {
                if k == 0 { continue; }
                let lhs = part.big_div();
                let rhs = part.small_div().unwrap().scale(&q(k as i64));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
