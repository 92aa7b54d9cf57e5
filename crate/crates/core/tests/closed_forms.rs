use num_traits::Zero;
use projcalc_core::diffop::DiffOp as Op;
use projcalc_core::exactnum::bernoulli;
use projcalc_core::onedim::{bernoulli_parity_check, extract_t, extract_t_poly, psido_quantize, psido_symbol, PsiDO};
use projcalc_core::poly::{MultiIndex, PhasePoly, VectorField};
use projcalc_core::projsym::{
    casimir_eigenvalue, equivariant_hom_basis, gamma_extract, sigma_coeff, sl_generators, symbol_map,
};
use projcalc_core::scalar::Scalar;
use projcalc_core::{Rational, UniPoly};

type Q = Rational;
type U = UniPoly;

fn q(a: i64, b: i64) -> Q {
    Q::from_frac(a, b)
}

fn bern(s: u32) -> U {
    bernoulli::<Q>(s)
}

#[test]
fn bernoulli_values() {
    assert_eq!(bern(0), U::constant(q(1, 1)));
    assert_eq!(bern(2), U::from_coeffs(vec![q(1, 6), q(-1, 1), q(1, 1)]));
    assert_eq!(bern(5), U::from_coeffs(vec![q(0, 1), q(-1, 6), q(0, 1), q(5, 3), q(-5, 2), q(1, 1)]));
}

#[test]
fn adjoint_of_identity() {
    let id = Op::identity(3, q(2, 7));
    let c = id.conjugate();
    assert_eq!(c.symbol(), id.symbol());
    assert_eq!(c.lambda(), &q(5, 7));
}

#[test]
fn line_generators_and_casimir() {
    let gens = sl_generators::<Q>(1);
    let fields: Vec<String> = gens.iter().map(|g| g.field.as_poly().to_string()).collect();
    assert_eq!(fields.len(), 3);
    for f in ["xi1", "x1 xi1", "x1^2 xi1"] {
        assert!(fields.iter().any(|g| g == f || g == &format!("-{f}")), "{fields:?}");
    }
    assert_eq!(casimir_eigenvalue::<Q>(1, 2), q(6, 1));
    assert_eq!(casimir_eigenvalue::<Q>(2, 1), q(12, 1));
    assert_eq!(sigma_coeff(2, 1, 2, &q(1, 3)).unwrap(), q(-4, 5));
}

#[test]
fn first_map_vanishes_on_the_line() {
    let x = VectorField::new(PhasePoly::monomial(q(1, 1), &[5], &[1])).unwrap();
    for k in 0..=5 {
        for e in 0..=3 {
            let p = PhasePoly::monomial(q(1, 1), &[e], &[k]);
            assert!(gamma_extract(1, &x, &q(2, 9), &p).unwrap().is_zero());
        }
    }
}

#[test]
fn no_maps_between_different_degrees() {
    assert_eq!(equivariant_hom_basis::<Q>(2, 1, 2, 3, 2).dim(), 0);
}

#[test]
fn line_operators_agree_with_the_general_calculus() {
    // a x^2 d^2 + x d + 1 at weight 1/5, as a truncated series and as a differential operator
    let lam = q(1, 5);
    let p = PhasePoly::monomial(q(3, 1), &[2], &[2]) + &PhasePoly::monomial(q(1, 1), &[1], &[1]) + &PhasePoly::one(1);
    let sigma = symbol_map(&Op::from_symbol(p, lam.clone()));
    let coeffs = vec![
        U::from_coeffs(vec![q(0, 1), q(0, 1), q(3, 1)]),
        U::from_coeffs(vec![q(0, 1), q(1, 1)]),
        U::constant(q(1, 1)),
    ];
    let a = PsiDO::new(q(2, 1), lam.clone(), coeffs).unwrap();
    let comps = psido_symbol(&a).unwrap();
    for (i, c) in comps.iter().enumerate() {
        let part = sigma.xi_component(2 - i as u32);
        let expect = part.terms().fold(U::zero(), |acc, (m, v)| acc + U::monomial(v.clone(), m.x()[0] as usize));
        assert_eq!(c, &expect, "component {i}");
    }
    assert_eq!(psido_quantize(&comps, &q(2, 1), &lam).unwrap(), a);
}

fn k_of(k: &Q) -> impl Fn(i64, i64) -> Q + '_ {
    move |a, b| k.clone() * q(a, 1) + q(b, 1)
}

#[test]
fn second_coefficient_in_bernoulli_form() {
    for k in [q(2, 1), q(3, 1), q(7, 3), q(6, 1)] {
        let l = k_of(&k);
        let c = k.clone() * l(1, -1) / l(2, -1);
        let expect = (bern(2) - U::constant(k.clone() * l(1, -1) / q(12, 1))).scale(&c);
        assert_eq!(extract_t_poly(&k, 2).unwrap(), expect);
    }
}

#[test]
fn third_coefficient() {
    for k in [q(2, 1), q(3, 1), q(5, 2), q(7, 3)] {
        assert_eq!(extract_t_poly(&k, 3).unwrap(), bern(3).scale(&(k.clone() / q(3, 1))));
        assert!(extract_t_poly(&k, 3).unwrap().eval(&q(1, 2)).is_zero());
    }
}

#[test]
fn fourth_coefficient() {
    for k in [q(3, 1), q(4, 1), q(7, 3)] {
        let l = k_of(&k);
        let c = k.clone() * l(1, -1) * l(1, -2) / (q(2, 1) * l(2, -3) * l(2, -5));
        let k2 = k.clone() * k.clone();
        let b2 = (q(2, 1) * k2.clone() - q(6, 1) * k.clone() + q(3, 1)) / q(12, 1);
        let k3 = k2.clone() * k.clone();
        let k4 = k3.clone() * k.clone();
        let b0 = -(q(3, 1) * k4 - q(18, 1) * k3 + q(35, 1) * k2 - q(24, 1) * k.clone() + q(6, 1)) / q(720, 1);
        let expect = (bern(4) + bern(2).scale(&b2) + U::constant(b0)).scale(&c);
        assert_eq!(extract_t_poly(&k, 4).unwrap(), expect, "k = {k}");
    }
}

#[test]
fn fifth_coefficient() {
    for k in [q(4, 1), q(7, 3)] {
        let l = k_of(&k);
        let c = k.clone() * l(1, -1) / (q(15, 1) * l(2, -7));
        let b3 = q(5, 1) * l(1, -1) * l(1, -3) / q(12, 1);
        let expect = (bern(5) + bern(3).scale(&b3)).scale(&c);
        assert_eq!(extract_t_poly(&k, 5).unwrap(), expect, "k = {k}");
    }
}

#[test]
fn interpolation_degree_is_enough() {
    // the interpolant must agree with a direct extraction away from the nodes
    for j in 2..=5 {
        let k = q(7, 3);
        let lam = q(1, 3);
        assert_eq!(extract_t(&k, j, &lam).unwrap(), extract_t_poly(&k, j).unwrap().eval(&lam), "j = {j}");
    }
}

#[test]
fn parity_components() {
    let even = bernoulli_parity_check(&q(3, 1), 2).unwrap();
    assert!(even.bernoulli.iter().enumerate().all(|(s, c)| c.is_zero() || s == 0 || s == 2));
    let odd = bernoulli_parity_check(&q(4, 1), 5).unwrap();
    assert!(odd.bernoulli.iter().enumerate().all(|(s, c)| c.is_zero() || [1, 3, 5].contains(&s)));
    assert!(odd.passed());
}

#[test]
fn generators_cover_every_axis() {
    for n in 1..=3 {
        let count = sl_generators::<Q>(n).len();
        assert_eq!(count, n * n + 2 * n);
        assert_eq!(MultiIndex::all_of_order(n, 1).len(), n);
    }
}
