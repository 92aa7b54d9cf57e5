#![allow(dead_code)]

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

use projcalc_core::poly::{Monomial, PhasePoly};
use projcalc_core::{DiffOp, Rational, VectorField};

pub type Poly = PhasePoly<Rational>;

pub fn q(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

fn exps(n: usize, max: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max, n)
}

/// Up to `terms` monomials with `x` exponents `<= x_max` and `xi` exponents `<= xi_max` each.
pub fn arb_poly(n: usize, terms: usize, x_max: u32, xi_max: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-5i64..6, 1i64..5, exps(n, x_max), exps(n, xi_max)), 0..=terms).prop_map(move |ts| {
        Poly::from_terms(n, ts.into_iter().map(|(a, b, x, xi)| (Monomial::new(&x, &xi), q(a, b))))
    })
}

/// A polynomial homogeneous of fiber degree one.
pub fn arb_field(n: usize, terms: usize, x_max: u32) -> impl Strategy<Value = VectorField> {
    prop::collection::vec((-3i64..4, exps(n, x_max), 0..n), 1..=terms).prop_map(move |ts| {
        let p = Poly::from_terms(
            n,
            ts.into_iter().map(|(a, x, i)| {
                let mut xi = vec![0; n];
                xi[i] = 1;
                (Monomial::new(&x, &xi), q(a, 1))
            }),
        );
        let p = if p.is_zero() { Poly::var_xi(n, 0) } else { p };
        VectorField::new(p).expect("fiber degree one")
    })
}

pub fn arb_op(n: usize, terms: usize, x_max: u32, order: u32, lambda: Rational) -> impl Strategy<Value = DiffOp> {
    arb_poly(n, terms, x_max, order).prop_map(move |p| {
        let p = p.map_terms(|m, c| (m.xi_degree() <= order).then(|| (m.clone(), c.clone())));
        DiffOp::from_symbol(p, lambda.clone())
    })
}

/// Deterministic draws from a strategy.
pub struct Sampler(TestRunner);

impl Sampler {
    pub fn new() -> Self {
        Sampler(TestRunner::deterministic())
    }

    pub fn draw<S: Strategy>(&mut self, s: &S) -> S::Value {
        s.new_tree(&mut self.0).expect("strategy").current()
    }
}
