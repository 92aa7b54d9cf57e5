use std::collections::BTreeMap;
use std::sync::Arc;

use super::equivariance::monomial_basis;
use super::{quantize, symbol_map};
use crate::error::{Error, Result};
use crate::exactnum::linalg::{RowReducer, SparseRow};
use crate::poly::{lie_lift, PhasePoly, VectorField};
use crate::scalar::Scalar;

/// `sigma_lambda(L_X^lambda(Q_lambda(P)))`: the action of `X` on symbols
/// transported from operators.
pub fn transported_action<S: Scalar>(x: &VectorField<S>, p: &PhasePoly<S>, lambda: &S) -> Result<PhasePoly<S>> {
    x.as_poly().check_dim(p)?;
    Ok(symbol_map(&quantize(p, lambda).lie_op(x)?))
}

/// Fiber degree of a homogeneous input; `None` for zero.
fn homogeneous_degree<S: Scalar>(p: &PhasePoly<S>) -> Result<Option<u32>> {
    if p.is_zero() {
        return Ok(None);
    }
    p.xi_homogeneous_degree().map(Some).ok_or(Error::NotHomogeneous)
}

/// Degree-drop-`ell` component of `sigma o L_X o sigma^(-1) - L_X` on `P` in `S^k`.
pub fn gamma_extract<S: Scalar>(ell: u32, x: &VectorField<S>, lambda: &S, p: &PhasePoly<S>) -> Result<PhasePoly<S>> {
    let Some(k) = homogeneous_degree(p)? else {
        return Ok(PhasePoly::zero(p.n()));
    };
    if ell > k {
        return Ok(PhasePoly::zero(p.n()));
    }
    let defect = transported_action(x, p, lambda)? - &lie_lift(x, p)?;
    Ok(defect.xi_component(k - ell))
}

/// Components `lbar^h_ij` of the symmetric (2,1)-tensor
/// `d_ij X^h - (delta^h_i d_j + delta^h_j d_i) div X / (n + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EllBar<S> {
    n: usize,
    comps: Vec<PhasePoly<S>>,
}

impl<S: Scalar> EllBar<S> {
    pub fn get(&self, h: usize, i: usize, j: usize) -> &PhasePoly<S> {
        &self.comps[(h * self.n + i) * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(PhasePoly::is_zero)
    }

    /// `lbar^h_ij xi_h d^2 P / dxi_i dxi_j`.
    pub fn contract(&self, p: &PhasePoly<S>) -> PhasePoly<S> {
        let n = self.n;
        let mut out = PhasePoly::zero(n);
        for i in 0..n {
            for j in 0..n {
                let d = p.dxi(i).dxi(j);
                if d.is_zero() {
                    continue;
                }
                for h in 0..n {
                    let t = self.get(h, i, j);
                    if !t.is_zero() {
                        out = out + &(&(t * &PhasePoly::var_xi(n, h)) * &d);
                    }
                }
            }
        }
        out
    }
}

pub fn ell_bar_tensor<S: Scalar>(x: &VectorField<S>) -> EllBar<S> {
    let n = x.n();
    let div = x.divergence();
    let inv = S::one() / S::from_i64(n as i64 + 1);
    let mut comps = Vec::with_capacity(n * n * n);
    for h in 0..n {
        let xh = x.component(h);
        for i in 0..n {
            for j in 0..n {
                let mut t = xh.dx(i).dx(j);
                if h == i {
                    t = t - &div.dx(j).scale(&inv);
                }
                if h == j {
                    t = t - &div.dx(i).scale(&inv);
                }
                comps.push(t);
            }
        }
    }
    EllBar { n, comps }
}

/// `l_k(X)(P) = d_ij X d^2P/dxi_i dxi_j - 2(k-1)/(n+1) d_i(div X) dP/dxi_i`.
pub fn ell_k<S: Scalar>(x: &VectorField<S>, p: &PhasePoly<S>) -> Result<PhasePoly<S>> {
    x.as_poly().check_dim(p)?;
    let Some(k) = homogeneous_degree(p)? else {
        return Ok(PhasePoly::zero(p.n()));
    };
    let n = p.n();
    let xp = x.as_poly();
    let div = x.divergence();
    let c = S::from_frac(2 * (k as i64 - 1), n as i64 + 1);
    let mut out = PhasePoly::zero(n);
    for i in 0..n {
        let pi = p.dxi(i);
        if pi.is_zero() {
            continue;
        }
        for j in 0..n {
            out = out + &(&xp.dx(i).dx(j) * &pi.dxi(j));
        }
        out = out - &(&div.dx(i) * &pi).scale(&c);
    }
    Ok(out)
}

/// Closed form `(n+1) / (2(2k+n-1)) (2 lambda - 1) l_k(X)` of the first map.
pub fn gamma1_closed<S: Scalar>(x: &VectorField<S>, lambda: &S, p: &PhasePoly<S>) -> Result<PhasePoly<S>> {
    let Some(k) = homogeneous_degree(p)? else {
        return Ok(PhasePoly::zero(p.n()));
    };
    if k == 0 {
        return Ok(PhasePoly::zero(p.n()));
    }
    let n = p.n() as i64;
    let den = 2 * (2 * k as i64 + n - 1);
    if den == 0 {
        return Err(Error::DegenerateDenominator(format!("2k+n-1 = 0 at k={k}, n={n}")));
    }
    let c = S::from_frac(n + 1, den) * (S::from_i64(2) * lambda.clone() - S::one());
    Ok(ell_k(x, p)?.scale(&c))
}

/// Coefficients of the second map's closed form, one per entry of `gamma2_terms`.
pub fn gamma2_coefficients<S: Scalar>(k: u32, n: usize, lambda: &S) -> Result<[S; 5]> {
    let [alpha1, alpha2, beta1, beta2, delta] = gamma2_conventional_coefficients(k, n, lambda)?;
    Ok([alpha1, alpha2, beta2, S::from_i64(2) * beta1, delta])
}

/// The same numbers in the conventional `[alpha1, alpha2, beta1, beta2, delta]`
/// order, where `beta1` pairs with `d_ij(div X)` and `beta2` with `d_i(div X) Div`.
/// That pairing does not reproduce the extracted map; `gamma2_coefficients` does.
pub fn gamma2_conventional_coefficients<S: Scalar>(k: u32, n: usize, lambda: &S) -> Result<[S; 5]> {
    let (k, n) = (k as i64, n as i64);
    let d1 = 2 * k + n - 1;
    if d1 == 0 {
        return Err(Error::DegenerateDenominator(format!("2k+n-1 = 0 at k={k}, n={n}")));
    }
    let l = lambda.clone() * (lambda.clone() - S::one());
    let i = |v: i64| S::from_i64(v);
    let nn = i(n + 1);
    let alpha1 = -(nn.clone() * nn.clone() * l.clone() + S::from_frac(k * k + k * n + n * n - k + n, 3));
    let alpha2 = -(i(2) * nn.clone() * nn.clone() * l.clone() + i(2 * k * k + 2 * k * n - 4 * k + n * n - n + 2))
        / i(d1);
    let beta1 = (i(4 * k + n - 5) * nn.clone() * l.clone() - i((k - 2) * (k - 1))) / i(d1);
    let beta2 = i(4 * k - 6) * nn.clone() * l.clone() + i((k - 2) * n);
    let delta = -(nn.clone() * nn * l) + i((k - 2) * (k + n - 1));
    Ok([alpha1, alpha2, beta1, beta2, delta])
}

/// The five operator terms of the second map's closed form, in the order of
/// `gamma2_coefficients`:
/// `d_hij X d^3P/dxi_h dxi_i dxi_j`, `d_ij X Div(d^2P/dxi_i dxi_j)`,
/// `d_ij(div X) d^2P/dxi_i dxi_j`, `d_i(div X) Div(dP/dxi_i)`,
/// `d_ij X^h d_h d^2P/dxi_i dxi_j`.
pub fn gamma2_terms<S: Scalar>(x: &VectorField<S>, p: &PhasePoly<S>) -> Result<[PhasePoly<S>; 5]> {
    x.as_poly().check_dim(p)?;
    let n = p.n();
    let xp = x.as_poly();
    let div = x.divergence();
    let mut t: [PhasePoly<S>; 5] = std::array::from_fn(|_| PhasePoly::zero(n));
    for i in 0..n {
        let pi = p.dxi(i);
        if pi.is_zero() {
            continue;
        }
        t[3] = t[3].clone() + &(&div.dx(i) * &pi.big_div());
        for j in 0..n {
            let pij = pi.dxi(j);
            if pij.is_zero() {
                continue;
            }
            let xij = xp.dx(i).dx(j);
            t[1] = t[1].clone() + &(&xij * &pij.big_div());
            t[2] = t[2].clone() + &(&div.dx(i).dx(j) * &pij);
            for h in 0..n {
                t[0] = t[0].clone() + &(&xij.dx(h) * &pij.dxi(h));
                t[4] = t[4].clone() + &(&x.component(h).dx(i).dx(j) * &pij.dx(h));
            }
        }
    }
    Ok(t)
}

/// Closed form `s_k / (2(2k+n-2)(2k+n-3))` of the second map; zero below `k = 2`.
pub fn gamma2_closed<S: Scalar>(x: &VectorField<S>, lambda: &S, p: &PhasePoly<S>) -> Result<PhasePoly<S>> {
    let Some(k) = homogeneous_degree(p)? else {
        return Ok(PhasePoly::zero(p.n()));
    };
    if k < 2 {
        return Ok(PhasePoly::zero(p.n()));
    }
    let n = p.n() as i64;
    let (d2, d3) = (2 * k as i64 + n - 2, 2 * k as i64 + n - 3);
    if d2 == 0 || d3 == 0 {
        return Err(Error::DegenerateDenominator(format!("2k+n-3 = 0 at k={k}, n={n}")));
    }
    let coeffs = gamma2_coefficients(k, p.n(), lambda)?;
    let terms = gamma2_terms(x, p)?;
    let s = coeffs
        .iter()
        .zip(&terms)
        .fold(PhasePoly::zero(p.n()), |acc, (c, t)| acc + &t.scale(c));
    Ok(s.scale(&(S::one() / S::from_i64(2 * d2 * d3))))
}

/// `-(n+1)^2 lambda(lambda-1)`: on `S^2` the second map's operator is this multiple of `s_bar`.
pub fn s_bar_factor<S: Scalar>(n: usize, lambda: &S) -> S {
    let nn = S::from_i64(n as i64 + 1);
    -(nn.clone() * nn * lambda.clone() * (lambda.clone() - S::one()))
}

/// `sbar(X)(P) = lbar^i_ab d_i d^2P/dxi_a dxi_b - 2/(n-1) d_h lbar^h_ab d^2P/dxi_a dxi_b`
/// on `S^2`; needs `n >= 2`.
pub fn s_bar<S: Scalar>(x: &VectorField<S>, p: &PhasePoly<S>) -> Result<PhasePoly<S>> {
    let n = p.n();
    if n < 2 {
        return Err(Error::DegenerateDenominator("n - 1 = 0".into()));
    }
    let lb = ell_bar_tensor(x);
    let c = S::from_frac(2, n as i64 - 1);
    let mut out = PhasePoly::zero(n);
    for a in 0..n {
        for b in 0..n {
            let pab = p.dxi(a).dxi(b);
            if pab.is_zero() {
                continue;
            }
            for h in 0..n {
                out = out + &(lb.get(h, a, b) * &pab.dx(h));
                out = out - &(&lb.get(h, a, b).dx(h) * &pab).scale(&c);
            }
        }
    }
    Ok(out)
}

/// Fits the five closed-form coefficients of the second map by an exact
/// linear solve against the extracted map on the given samples. Returns
/// `None` when the samples do not determine them uniquely or no exact fit exists.
pub fn fit_gamma2_coefficients<S: Scalar>(
    lambda: &S,
    samples: &[(VectorField<S>, PhasePoly<S>)],
) -> Result<Option<[S; 5]>> {
    let mut red = RowReducer::new(6);
    for (x, p) in samples {
        let Some(k) = homogeneous_degree(p)? else { continue };
        let n = p.n() as i64;
        let scale = S::from_i64(2 * (2 * k as i64 + n - 2) * (2 * k as i64 + n - 3));
        let target = gamma_extract(2, x, lambda, p)?.scale(&scale);
        let terms = gamma2_terms(x, p)?;
        let mut rows: BTreeMap<crate::poly::Monomial, SparseRow<S>> = BTreeMap::new();
        for (col, t) in terms.iter().enumerate() {
            for (m, c) in t.terms() {
                rows.entry(m.clone()).or_default().insert(col, c.clone());
            }
        }
        for (m, c) in target.terms() {
            rows.entry(m.clone()).or_default().insert(5, -c.clone());
        }
        for row in rows.into_values() {
            red.push(row);
        }
    }
    let kernel = red.kernel_basis();
    if kernel.len() != 1 || kernel[0][5].is_zero() {
        return Ok(None);
    }
    let last = kernel[0][5].clone();
    Ok(Some(std::array::from_fn(|i| kernel[0][i].clone() / last.clone())))
}

type GammaFn<S> = dyn Fn(&VectorField<S>, &PhasePoly<S>) -> Result<PhasePoly<S>> + Send + Sync;

/// A linear map `X -> Hom(S^k, S^(k - ell))`.
#[derive(Clone)]
pub struct GammaMap<S> {
    ell: u32,
    f: Arc<GammaFn<S>>,
}

impl<S: Scalar + 'static> GammaMap<S> {
    pub fn custom(
        ell: u32,
        f: impl Fn(&VectorField<S>, &PhasePoly<S>) -> Result<PhasePoly<S>> + Send + Sync + 'static,
    ) -> Self {
        GammaMap { ell, f: Arc::new(f) }
    }

    pub fn extracted(ell: u32, lambda: S) -> Self {
        Self::custom(ell, move |x, p| gamma_extract(ell, x, &lambda, p))
    }

    pub fn gamma1(lambda: S) -> Self {
        Self::custom(1, move |x, p| gamma1_closed(x, &lambda, p))
    }

    pub fn gamma2(lambda: S) -> Self {
        Self::custom(2, move |x, p| gamma2_closed(x, &lambda, p))
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn eval(&self, x: &VectorField<S>, p: &PhasePoly<S>) -> Result<PhasePoly<S>> {
        (self.f)(x, p)
    }
}

/// `[L_X, g(Y)](P) - [L_Y, g(X)](P) - g([X, Y])(P)`.
pub fn cocycle_defect<S: Scalar + 'static>(
    g: &GammaMap<S>,
    x: &VectorField<S>,
    y: &VectorField<S>,
    p: &PhasePoly<S>,
) -> Result<PhasePoly<S>> {
    let comm = |a: &VectorField<S>, b: &VectorField<S>| -> Result<PhasePoly<S>> {
        Ok(lie_lift(a, &g.eval(b, p)?)? - &g.eval(b, &lie_lift(a, p)?)?)
    };
    Ok(comm(x, y)? - &comm(y, x)? - &g.eval(&x.bracket(y)?, p)?)
}

/// Nonzero cocycle defects over the monomials of `S^k` with coefficient
/// degree at most `coeff_deg`.
pub fn cocycle_defect_on_basis<S: Scalar + 'static>(
    g: &GammaMap<S>,
    x: &VectorField<S>,
    y: &VectorField<S>,
    k: u32,
    coeff_deg: u32,
) -> Result<Vec<(PhasePoly<S>, PhasePoly<S>)>> {
    let mut out = Vec::new();
    for p in monomial_basis::<S>(x.n(), k, coeff_deg) {
        let d = cocycle_defect(g, x, y, &p)?;
        if !d.is_zero() {
            out.push((p, d));
        }
    }
    Ok(out)
}

/// `sigma_(1-lambda)(*(Q_lambda(P)))`; equals `(-1)^k P` on `S^k`.
pub fn conjugation_sign_check<S: Scalar>(p: &PhasePoly<S>, lambda: &S) -> Result<PhasePoly<S>> {
    homogeneous_degree(p)?;
    Ok(symbol_map(&quantize(p, lambda).conjugate()))
}

/// A map scaling fiber-degree components, between symbol spaces with the
/// actions transported from weights `lambda` and `mu`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalIso<S> {
    pub lambda: S,
    pub mu: S,
    /// Scaling factor per fiber degree; other degrees are outside the module.
    pub factors: BTreeMap<u32, S>,
}

impl<S: Scalar> DiagonalIso<S> {
    fn restrict(&self, p: &PhasePoly<S>) -> PhasePoly<S> {
        p.map_terms(|m, c| self.factors.contains_key(&m.xi_degree()).then(|| (m.clone(), c.clone())))
    }

    pub fn apply(&self, p: &PhasePoly<S>) -> PhasePoly<S> {
        p.map_terms(|m, c| self.factors.get(&m.xi_degree()).map(|f| (m.clone(), c.clone() * f.clone())))
    }

    /// `T(rho_lambda(X) P) - rho_mu(X)(T P)`, both read in the module.
    pub fn intertwining_defect(&self, x: &VectorField<S>, p: &PhasePoly<S>) -> Result<PhasePoly<S>> {
        let p = self.restrict(p);
        let lhs = self.apply(&transported_action(x, &p, &self.lambda)?);
        let rhs = self.restrict(&transported_action(x, &self.apply(&p), &self.mu)?);
        Ok(lhs - &rhs)
    }
}

fn forbid<S: Scalar>(w: &S, bad: &[S]) -> Result<()> {
    if bad.contains(w) {
        Err(Error::ExceptionalWeight(w.to_string()))
    } else {
        Ok(())
    }
}

/// `(P_k, P_(k-1)) -> (P_k, (2mu - 1)/(2lambda - 1) P_(k-1))` on `S^k + S^(k-1)`.
pub fn quotient_iso<S: Scalar>(k: u32, lambda: &S, mu: &S) -> Result<DiagonalIso<S>> {
    let half = S::from_frac(1, 2);
    forbid(lambda, std::slice::from_ref(&half))?;
    forbid(mu, std::slice::from_ref(&half))?;
    if k == 0 {
        return Err(Error::IndexOutOfRange("quotient module needs k >= 1".into()));
    }
    let two = S::from_i64(2);
    let r = (two.clone() * mu.clone() - S::one()) / (two * lambda.clone() - S::one());
    let factors = BTreeMap::from([(k, S::one()), (k - 1, r)]);
    Ok(DiagonalIso { lambda: lambda.clone(), mu: mu.clone(), factors })
}

/// `(P_2, P_1, P_0) -> (P_2, (2mu-1)/(2lambda-1) P_1, mu(mu-1)/(lambda(lambda-1)) P_0)`.
pub fn second_order_iso<S: Scalar>(lambda: &S, mu: &S) -> Result<DiagonalIso<S>> {
    let bad = [S::zero(), S::from_frac(1, 2), S::one()];
    forbid(lambda, &bad)?;
    forbid(mu, &bad)?;
    let two = S::from_i64(2);
    let r1 = (two.clone() * mu.clone() - S::one()) / (two * lambda.clone() - S::one());
    let r0 = mu.clone() * (mu.clone() - S::one()) / (lambda.clone() * (lambda.clone() - S::one()));
    let factors = BTreeMap::from([(2, S::one()), (1, r1), (0, r0)]);
    Ok(DiagonalIso { lambda: lambda.clone(), mu: mu.clone(), factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::DiffOp;
    use crate::projsym::sl_generators;
    use num_rational::BigRational;

    type Q = BigRational;
    type P = PhasePoly<Q>;

    fn q(a: i64, b: i64) -> Q {
        Q::from_frac(a, b)
    }

    fn mono(c: i64, x: &[u32], xi: &[u32]) -> P {
        P::monomial(Q::from_i64(c), x, xi)
    }

    fn cubic2() -> VectorField<Q> {
        VectorField::new(mono(1, &[3, 0], &[1, 0]) + mono(2, &[1, 2], &[0, 1]) + mono(-1, &[0, 2], &[1, 0]))
            .unwrap()
    }

    #[test]
    fn gammas_vanish_on_the_algebra() {
        for g in sl_generators::<Q>(2) {
            for p in monomial_basis::<Q>(2, 3, 2) {
                for ell in 1..=3 {
                    assert!(gamma_extract(ell, &g.field, &q(1, 3), &p).unwrap().is_zero());
                }
            }
            assert!(ell_bar_tensor(&g.field).is_zero());
        }
    }

    #[test]
    fn ell_bar_examples() {
        let x = VectorField::new(mono(1, &[2], &[1])).unwrap();
        assert!(ell_bar_tensor(&x).is_zero());
        let x = VectorField::new(mono(1, &[3, 0], &[1, 0])).unwrap();
        let lb = ell_bar_tensor(&x);
        // d_11 x^3 = 6x, div = 3x^2, d_1 div = 6x -> 6x - 2/3 * 6x = 2x
        assert_eq!(lb.get(0, 0, 0), &mono(2, &[1, 0], &[0, 0]));
        assert_eq!(lb.get(1, 0, 1), &mono(-2, &[1, 0], &[0, 0]));
        for p in monomial_basis::<Q>(2, 3, 1) {
            assert_eq!(lb.contract(&p), ell_k(&x, &p).unwrap());
        }
    }

    #[test]
    fn gamma1_matches_extraction() {
        let x = cubic2();
        for lam in [q(0, 1), q(1, 3), q(1, 2), q(2, 1)] {
            for k in 1..=3 {
                for p in monomial_basis::<Q>(2, k, 2) {
                    assert_eq!(gamma_extract(1, &x, &lam, &p).unwrap(), gamma1_closed(&x, &lam, &p).unwrap());
                }
            }
        }
    }

    #[test]
    fn gamma2_matches_extraction() {
        let x = cubic2();
        for lam in [q(0, 1), q(1, 3), q(-2, 5)] {
            for k in 2..=3 {
                for p in monomial_basis::<Q>(2, k, 1) {
                    assert_eq!(gamma_extract(2, &x, &lam, &p).unwrap(), gamma2_closed(&x, &lam, &p).unwrap(), "{p}");
                }
            }
        }
    }

    #[test]
    fn conventional_pairing_is_refuted_by_fit() {
        let x = cubic2();
        let lam = q(1, 3);
        let samples: Vec<_> = monomial_basis::<Q>(2, 3, 1).into_iter().map(|p| (x.clone(), p)).collect();
        let fit = fit_gamma2_coefficients(&lam, &samples).unwrap().unwrap();
        assert_eq!(fit, gamma2_coefficients(3, 2, &lam).unwrap());
        assert_ne!(fit, gamma2_conventional_coefficients(3, 2, &lam).unwrap());
    }

    #[test]
    fn second_map_on_quadrics_is_a_multiple_of_s_bar() {
        let x = cubic2();
        for lam in [q(1, 3), q(2, 1)] {
            for p in monomial_basis::<Q>(2, 2, 1) {
                let s = gamma2_closed(&x, &lam, &p).unwrap().scale(&Q::from_i64(2 * 4 * 3));
                assert_eq!(s, s_bar(&x, &p).unwrap().scale(&s_bar_factor(2, &lam)));
            }
        }
        assert_eq!(s_bar_factor::<Q>(2, &q(1, 3)), q(2, 1));
    }

    #[test]
    fn half_density_gamma1_vanishes() {
        let x = cubic2();
        for p in monomial_basis::<Q>(2, 3, 2) {
            assert!(gamma_extract(1, &x, &q(1, 2), &p).unwrap().is_zero());
            assert!(gamma_extract(3, &x, &q(1, 2), &p).unwrap().is_zero());
        }
    }

    #[test]
    fn conjugation_signs() {
        for k in 0..=3u32 {
            for p in monomial_basis::<Q>(2, k, 2) {
                let got = conjugation_sign_check(&p, &q(1, 3)).unwrap();
                let s = if k % 2 == 0 { q(1, 1) } else { q(-1, 1) };
                assert_eq!(got, p.scale(&s));
            }
        }
        let x = cubic2();
        let l = DiffOp::lie_derivative(&x, q(1, 3)).conjugate();
        assert_eq!(l, -DiffOp::lie_derivative(&x, q(2, 3)));
    }

    #[test]
    fn iso_examples() {
        let iso = quotient_iso(3, &q(0, 1), &q(1, 1)).unwrap();
        assert_eq!(iso.factors[&2], q(-1, 1));
        let iso = quotient_iso(2, &q(1, 3), &q(1, 3)).unwrap();
        assert!(iso.factors.values().all(|f| f == &q(1, 1)));
        let iso = second_order_iso(&q(1, 3), &q(2, 3)).unwrap();
        assert_eq!(iso.factors.values().cloned().collect::<Vec<_>>(), vec![q(1, 1), q(-1, 1), q(1, 1)]);
        assert!(matches!(quotient_iso(2, &q(1, 2), &q(0, 1)), Err(Error::ExceptionalWeight(_))));
        assert!(matches!(second_order_iso(&q(1, 3), &q(1, 1)), Err(Error::ExceptionalWeight(_))));
    }

    #[test]
    fn isos_intertwine() {
        let x = cubic2();
        let iso = quotient_iso(3, &q(1, 3), &q(3, 4)).unwrap();
        for k in 2..=3 {
            for p in monomial_basis::<Q>(2, k, 2) {
                assert!(iso.intertwining_defect(&x, &p).unwrap().is_zero());
            }
        }
        let iso = second_order_iso(&q(1, 3), &q(3, 4)).unwrap();
        for k in 0..=2 {
            for p in monomial_basis::<Q>(2, k, 2) {
                assert!(iso.intertwining_defect(&x, &p).unwrap().is_zero());
            }
        }
    }
}
