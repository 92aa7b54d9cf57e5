//! Normal-ordered differential operators on weight-`lambda` densities.
//!
//! An operator `sum_alpha a_alpha(x) d^alpha` is stored as its normal-ordered
//! symbol `sum_alpha a_alpha(x) xi^alpha` together with its weight.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, falling_factorial, int_scalar};
use crate::poly::{atom_string, for_each_below, write_signed_terms, Monomial, MultiIndex, PhasePoly, VectorField};
use crate::scalar::{sign, Scalar};

/// A weight-`lambda` density `phi(x) |dx|^lambda`, stored by its coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Density<S> {
    lambda: S,
    value: PhasePoly<S>,
}

impl<S: Scalar> Density<S> {
    pub fn new(value: PhasePoly<S>, lambda: S) -> Result<Self> {
        if !value.is_x_only() {
            return Err(Error::NotXOnly);
        }
        Ok(Density { lambda, value })
    }

    pub fn n(&self) -> usize {
        self.value.n()
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn value(&self) -> &PhasePoly<S> {
        &self.value
    }

    pub fn into_value(self) -> PhasePoly<S> {
        self.value
    }
}

/// Differential operator `F_lambda -> F_lambda` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp<S> {
    lambda: S,
    symbol: PhasePoly<S>,
}

fn check_weight<S: Scalar>(a: &S, b: &S) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::WeightMismatch { left: a.to_string(), right: b.to_string() })
    }
}

impl<S: Scalar> DiffOp<S> {
    pub fn zero(n: usize, lambda: S) -> Self {
        DiffOp { lambda, symbol: PhasePoly::zero(n) }
    }

    pub fn identity(n: usize, lambda: S) -> Self {
        DiffOp { lambda, symbol: PhasePoly::one(n) }
    }

    /// Operator whose normal-ordered symbol is `p`: `xi^alpha` becomes `d^alpha`.
    pub fn from_symbol(p: PhasePoly<S>, lambda: S) -> Self {
        DiffOp { lambda, symbol: p }
    }

    /// Builds `sum a_alpha d^alpha`; every coefficient must be free of `xi`.
    pub fn from_coeffs(
        n: usize,
        lambda: S,
        coeffs: impl IntoIterator<Item = (MultiIndex, PhasePoly<S>)>,
    ) -> Result<Self> {
        let mut symbol = PhasePoly::zero(n);
        for (alpha, a) in coeffs {
            if alpha.len() != n {
                return Err(Error::DimensionMismatch { left: n, right: alpha.len() });
            }
            if a.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: a.n() });
            }
            if !a.is_x_only() {
                return Err(Error::NotXOnly);
            }
            for (m, c) in a.terms() {
                symbol.add_term(m.with_xi(alpha.as_slice()), c.clone());
            }
        }
        Ok(DiffOp { lambda, symbol })
    }

    /// Multiplication by `a(x)`.
    pub fn multiplication(a: PhasePoly<S>, lambda: S) -> Result<Self> {
        if !a.is_x_only() {
            return Err(Error::NotXOnly);
        }
        Ok(DiffOp { lambda, symbol: a })
    }

    /// The Lie derivative `L_X^lambda = X^i d_i + lambda div X` as an operator.
    pub fn lie_derivative(x: &VectorField<S>, lambda: S) -> Self {
        let symbol = x.as_poly() + &x.divergence().scale(&lambda);
        DiffOp { lambda, symbol }
    }

    pub fn n(&self) -> usize {
        self.symbol.n()
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    /// Same coefficients, reinterpreted at another weight.
    pub fn with_lambda(self, lambda: S) -> Self {
        DiffOp { lambda, symbol: self.symbol }
    }

    pub fn symbol(&self) -> &PhasePoly<S> {
        &self.symbol
    }

    pub fn to_symbol(&self) -> PhasePoly<S> {
        self.symbol.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.is_zero()
    }

    /// Highest derivative order present, `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.symbol.xi_degree()
    }

    /// Coefficient map `alpha -> a_alpha(x)`.
    pub fn coeffs(&self) -> BTreeMap<MultiIndex, PhasePoly<S>> {
        let n = self.n();
        let zero_xi = vec![0; n];
        let mut out: BTreeMap<MultiIndex, PhasePoly<S>> = BTreeMap::new();
        for (m, c) in self.symbol.terms() {
            out.entry(MultiIndex::new(m.xi()))
                .or_insert_with(|| PhasePoly::zero(n))
                .add_term(m.with_xi(&zero_xi), c.clone());
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.symbol.check_dim(&other.symbol)?;
        check_weight(&self.lambda, &other.lambda)
    }

    pub fn scale(&self, c: &S) -> Self {
        DiffOp { lambda: self.lambda.clone(), symbol: self.symbol.scale(c) }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(DiffOp { lambda: self.lambda.clone(), symbol: &self.symbol + &other.symbol })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(DiffOp { lambda: self.lambda.clone(), symbol: &self.symbol - &other.symbol })
    }

    /// `sum a_alpha d^alpha phi`.
    pub fn apply(&self, phi: &Density<S>) -> Result<Density<S>> {
        self.symbol.check_dim(&phi.value)?;
        check_weight(&self.lambda, &phi.lambda)?;
        let mut out = PhasePoly::zero(self.n());
        for (alpha, a) in self.coeffs() {
            let d = phi.value.dx_multi(alpha.as_slice());
            if !d.is_zero() {
                out = out + &(&a * &d);
            }
        }
        Ok(Density { lambda: self.lambda.clone(), value: out })
    }

    /// `self o other`, expanded by the Leibniz rule.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(DiffOp { lambda: self.lambda.clone(), symbol: compose_symbols(&self.symbol, &other.symbol) })
    }

    /// `L_X^lambda o A - A o L_X^lambda`.
    pub fn lie_op(&self, x: &VectorField<S>) -> Result<Self> {
        self.symbol.check_dim(x.as_poly())?;
        let l = Self::lie_derivative(x, self.lambda.clone());
        Ok(DiffOp {
            lambda: self.lambda.clone(),
            symbol: compose_symbols(&l.symbol, &self.symbol) - compose_symbols(&self.symbol, &l.symbol),
        })
    }

    /// Formal adjoint `*(a d^alpha) = (-1)^|alpha| sum_beta (alpha choose beta)
    /// d^(alpha-beta)(a) d^beta`, landing at weight `1 - lambda`.
    pub fn conjugate(&self) -> Self {
        let n = self.n();
        let mut out = PhasePoly::zero(n);
        for (m, c) in self.symbol.terms() {
            let alpha = m.xi();
            let x = m.x();
            let s: S = sign(alpha.iter().sum());
            for_each_below(alpha, |beta| {
                let mut factor: u128 = 1;
                let mut new_x = Vec::with_capacity(n);
                for i in 0..n {
                    let d = alpha[i] - beta[i];
                    if d > x[i] {
                        return;
                    }
                    factor *= binomial(alpha[i], beta[i]) * falling_factorial(x[i], d);
                    new_x.push(x[i] - d);
                }
                out.add_term(Monomial::new(&new_x, beta), s.clone() * c.clone() * int_scalar::<S>(factor));
            });
        }
        DiffOp { lambda: S::one() - self.lambda.clone(), symbol: out }
    }

    /// Top-order part of the symbol.
    pub fn principal_symbol(&self) -> Result<PhasePoly<S>> {
        let k = self.order().ok_or(Error::ZeroOperator)?;
        Ok(self.symbol.xi_component(k))
    }
}

/// Symbol of the composition of two normal-ordered operators:
/// `x^p xi^a o x^q xi^b = sum_g (a choose g) x^p d^g(x^q) xi^(a - g + b)`.
pub(crate) fn compose_symbols<S: Scalar>(a: &PhasePoly<S>, b: &PhasePoly<S>) -> PhasePoly<S> {
    let n = a.n();
    let mut out = PhasePoly::zero(n);
    let mut limits = vec![0u32; n];
    let mut x = vec![0u32; n];
    let mut xi = vec![0u32; n];
    for (m1, c1) in a.terms() {
        for (m2, c2) in b.terms() {
            let (alpha, p) = (m1.xi(), m1.x());
            let (beta, q) = (m2.xi(), m2.x());
            for i in 0..n {
                limits[i] = alpha[i].min(q[i]);
            }
            let c12 = c1.clone() * c2.clone();
            for_each_below(&limits, |g| {
                let mut factor: u128 = 1;
                for i in 0..n {
                    factor *= binomial(alpha[i], g[i]) * falling_factorial(q[i], g[i]);
                    x[i] = p[i] + q[i] - g[i];
                    xi[i] = alpha[i] - g[i] + beta[i];
                }
                out.add_term(Monomial::new(&x, &xi), c12.clone() * int_scalar::<S>(factor));
            });
        }
    }
    out
}

/// Operator `L_X^lambda` applied to a density.
pub fn lie_density<S: Scalar>(x: &VectorField<S>, phi: &Density<S>) -> Result<Density<S>> {
    DiffOp::lie_derivative(x, phi.lambda.clone()).apply(phi)
}

impl<S: Scalar> Add for DiffOp<S> {
    type Output = DiffOp<S>;
    /// Panics on mismatched weights; use `try_add` for a checked sum.
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("operator sum of incompatible operands")
    }
}

impl<S: Scalar> Sub for DiffOp<S> {
    type Output = DiffOp<S>;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("operator difference of incompatible operands")
    }
}

impl<S: Scalar> Neg for DiffOp<S> {
    type Output = DiffOp<S>;
    fn neg(self) -> Self {
        DiffOp { lambda: self.lambda, symbol: -self.symbol }
    }
}

impl<S: Scalar> fmt::Display for DiffOp<S> {
    /// Canonical text form, e.g. `x1 d1^2 + d2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(
            f,
            self.symbol.terms().map(|(m, c)| {
                let mut atoms = atom_string("x", m.x());
                atoms.extend(atom_string("d", m.xi()));
                (atoms.join(" "), c)
            }),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffWire<P> {
    alpha: Vec<u32>,
    poly: P,
}

#[derive(Serialize, Deserialize)]
struct OpWire<P> {
    n: usize,
    lambda: String,
    coeffs: Vec<CoeffWire<P>>,
}

impl<S: Scalar> Serialize for DiffOp<S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        OpWire {
            n: self.n(),
            lambda: self.lambda.to_string(),
            coeffs: self
                .coeffs()
                .into_iter()
                .map(|(alpha, poly)| CoeffWire { alpha: alpha.as_slice().to_vec(), poly })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, S: Scalar + FromStr> Deserialize<'de> for DiffOp<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = OpWire::<PhasePoly<S>>::deserialize(d)?;
        let lambda = wire
            .lambda
            .parse::<S>()
            .map_err(|_| D::Error::custom(format!("bad rational {:?}", wire.lambda)))?;
        DiffOp::from_coeffs(
            wire.n,
            lambda,
            wire.coeffs.into_iter().map(|c| (MultiIndex::new(&c.alpha), c.poly)),
        )
        .map_err(D::Error::custom)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::poly::tests::arb_poly;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;
    type P = PhasePoly<Q>;
    type Op = DiffOp<Q>;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn mono(c: i64, x: &[u32], xi: &[u32]) -> P {
        P::monomial(q(c), x, xi)
    }

    fn op(p: P) -> Op {
        Op::from_symbol(p, Q::from_frac(1, 3))
    }

    fn dens(p: P) -> Density<Q> {
        Density::new(p, Q::from_frac(1, 3)).unwrap()
    }

    #[test]
    fn symbol_identification() {
        let a = op(mono(1, &[1, 0], &[0, 1]));
        let c = a.coeffs();
        assert_eq!(c.len(), 1);
        assert_eq!(c[&MultiIndex::new(&[0, 1])], mono(1, &[1, 0], &[0, 0]));
        let back = Op::from_coeffs(2, q(0), c).unwrap();
        assert_eq!(back.to_symbol(), a.to_symbol());
    }

    #[test]
    fn apply_examples() {
        let d1 = op(mono(1, &[0], &[1]));
        assert_eq!(d1.apply(&dens(mono(1, &[2], &[0]))).unwrap().value(), &mono(2, &[1], &[0]));
        let a = op(mono(1, &[1, 0], &[2, 0]) + mono(1, &[0, 0], &[0, 1]));
        let phi = dens(mono(1, &[2, 1], &[0, 0]));
        let expect = mono(2, &[1, 1], &[0, 0]) + mono(1, &[2, 0], &[0, 0]);
        assert_eq!(a.apply(&phi).unwrap().value(), &expect);
        let id = Op::identity(2, Q::from_frac(1, 3));
        assert_eq!(id.apply(&phi).unwrap(), phi);
        let other = Density::new(mono(1, &[1, 0], &[0, 0]), q(1)).unwrap();
        assert!(matches!(id.apply(&other), Err(Error::WeightMismatch { .. })));
    }

    #[test]
    fn compose_examples() {
        let d1 = op(mono(1, &[0], &[1]));
        let x1 = op(mono(1, &[1], &[0]));
        assert_eq!(d1.compose(&x1).unwrap().to_symbol(), mono(1, &[1], &[1]) + P::one(1));
        let d11 = op(mono(1, &[0], &[2]));
        assert_eq!(
            d11.compose(&x1).unwrap().to_symbol(),
            mono(1, &[1], &[2]) + mono(2, &[0], &[1])
        );
        let a = op(mono(3, &[2], &[1]));
        assert_eq!(a.compose(&Op::identity(1, Q::from_frac(1, 3))).unwrap(), a);
    }

    #[test]
    fn lie_examples() {
        let x = VectorField::new(mono(1, &[1], &[1])).unwrap();
        let lam = Q::from_frac(2, 7);
        let phi = Density::new(mono(1, &[1], &[0]), lam.clone()).unwrap();
        let got = lie_density(&x, &phi).unwrap();
        assert_eq!(got.value(), &mono(1, &[1], &[0]).scale(&(q(1) + lam)));
        let t = VectorField::coordinate(2, 0);
        let a = op(mono(1, &[1, 0], &[0, 1]));
        assert_eq!(a.lie_op(&t).unwrap().to_symbol(), mono(1, &[0, 0], &[0, 1]));
        assert!(Op::identity(2, q(1)).lie_op(&x_field2()).unwrap().is_zero());
    }

    fn x_field2() -> VectorField<Q> {
        VectorField::new(mono(1, &[2, 1], &[1, 0]) + mono(1, &[0, 1], &[0, 1])).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        let id = Op::identity(2, Q::from_frac(1, 3));
        let cid = id.conjugate();
        assert_eq!(cid.to_symbol(), P::one(2));
        assert_eq!(cid.lambda(), &Q::from_frac(2, 3));
        let d1 = op(mono(1, &[0, 0], &[1, 0]));
        assert_eq!(d1.conjugate().to_symbol(), mono(-1, &[0, 0], &[1, 0]));
        // *(x d) = -d o x = -x d - 1
        let xd = op(mono(1, &[1], &[1]));
        assert_eq!(xd.conjugate().to_symbol(), mono(-1, &[1], &[1]) - P::one(1));
    }

    #[test]
    fn principal_symbol_examples() {
        let a = op(mono(1, &[1, 0], &[0, 2]) + mono(1, &[0, 0], &[1, 0]));
        assert_eq!(a.principal_symbol().unwrap(), mono(1, &[1, 0], &[0, 2]));
        assert_eq!(op(P::constant(2, q(5))).principal_symbol().unwrap(), P::constant(2, q(5)));
        assert_eq!(op(P::zero(2)).principal_symbol(), Err(Error::ZeroOperator));
        let l = Op::lie_derivative(&x_field2(), q(3));
        assert_eq!(l.principal_symbol().unwrap(), x_field2().into_poly());
    }

    #[test]
    fn json_form() {
        let a = op(mono(1, &[1, 0], &[0, 2]) + mono(-2, &[0, 0], &[0, 0]));
        let js = serde_json::to_string(&a).unwrap();
        assert!(js.starts_with(r#"{"n":2,"lambda":"1/3","coeffs":[{"alpha":[0,0],"poly":"#));
        let back: Op = serde_json::from_str(&js).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn display() {
        let a = op(mono(1, &[1, 0], &[0, 2]) + mono(-3, &[0, 0], &[1, 0]));
        assert_eq!(a.to_string(), "-3 d1 + x1 d2^2");
    }

    /// Random operator of order at most `ord` and coefficient degree at most `deg`.
    pub(crate) fn arb_op(n: usize, ord: u32, deg: u32) -> impl Strategy<Value = P> {
        arb_poly(n, ord.max(deg)).prop_map(move |p| {
            p.map_terms(|m, c| {
                (m.xi_degree() <= ord && m.x_degree() <= deg).then(|| (m.clone(), c.clone()))
            })
        })
    }

    pub(crate) fn arb_field(n: usize, deg: u32) -> impl Strategy<Value = VectorField<Q>> {
        proptest::collection::vec(arb_poly(n, deg), n).prop_map(move |cs| {
            let cs: Vec<P> = cs
                .iter()
                .map(|c| c.map_terms(|m, v| (m.xi_degree() == 0 && m.x_degree() <= deg).then(|| (m.clone(), v.clone()))))
                .collect();
            VectorField::from_components(&cs).unwrap()
        })
    }

    fn test_densities(n: usize) -> Vec<Density<Q>> {
        crate::poly::MultiIndex::all_up_to_order(n, 4)
            .into_iter()
            .map(|e| dens(P::monomial(q(1), e.as_slice(), &vec![0; n])))
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn compose_matches_application(a in arb_op(2, 2, 2), b in arb_op(2, 2, 2)) {
            let (a, b) = (op(a), op(b));
            let ab = a.compose(&b).unwrap();
            for phi in test_densities(2) {
                prop_assert_eq!(ab.apply(&phi).unwrap(), a.apply(&b.apply(&phi).unwrap()).unwrap());
            }
        }

        #[test]
        fn compose_associative(a in arb_op(2, 3, 2), b in arb_op(2, 3, 2), c in arb_op(2, 3, 2)) {
            let (a, b, c) = (op(a), op(b), op(c));
            prop_assert_eq!(
                a.compose(&b).unwrap().compose(&c).unwrap(),
                a.compose(&b.compose(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn lie_op_matches_commutator_on_densities(x in arb_field(2, 2), a in arb_op(2, 2, 2)) {
            let a = op(a);
            let la = a.lie_op(&x).unwrap();
            for phi in test_densities(2) {
                let lhs = la.apply(&phi).unwrap();
                let rhs = lie_density(&x, &a.apply(&phi).unwrap()).unwrap().into_value()
                    - a.apply(&lie_density(&x, &phi).unwrap()).unwrap().into_value();
                prop_assert_eq!(lhs.into_value(), rhs);
            }
        }

        #[test]
        fn lie_op_is_action(x in arb_field(2, 2), y in arb_field(2, 2), a in arb_op(2, 2, 2)) {
            let a = op(a);
            let xy = x.bracket(&y).unwrap();
            let lhs = a.lie_op(&y).unwrap().lie_op(&x).unwrap()
                - a.lie_op(&x).unwrap().lie_op(&y).unwrap();
            prop_assert_eq!(lhs, a.lie_op(&xy).unwrap());
        }

        #[test]
        fn conjugate_is_antihomomorphic_involution(a in arb_op(2, 3, 2), b in arb_op(2, 2, 2)) {
            let (a, b) = (op(a), op(b));
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            let lhs = a.compose(&b).unwrap().conjugate();
            let rhs = b.conjugate().compose(&a.conjugate()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conjugate_intertwines_lie_derivative(a in arb_op(2, 2, 2), x in arb_field(2, 3)) {
            let a = op(a);
            let lam = a.lambda().clone();
            let lhs = Op::lie_derivative(&x, lam.clone()).compose(&a).unwrap().conjugate();
            let rhs = -a.conjugate().compose(&Op::lie_derivative(&x, q(1) - lam)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn symbol_round_trip(p in arb_poly(3, 3)) {
            let a = Op::from_symbol(p.clone(), q(0));
            let back = Op::from_coeffs(3, q(0), a.coeffs()).unwrap();
            prop_assert_eq!(back.to_symbol(), p);
        }
    }
}
