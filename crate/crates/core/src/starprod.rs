//! The graded product `F * G = sum_r hbar^r C_r(F, G)` transported from
//! operator composition by the equivariant quantization.

use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::poly::PhasePoly;
use crate::projsym::{quantize, symbol_map};
use crate::scalar::Scalar;
use crate::Result;

/// Finite series in the formal grading `hbar`.
#[derive(Clone, Debug, PartialEq)]
pub struct HbarSeries<S> {
    pub n: usize,
    pub lambda: S,
    pub terms: BTreeMap<u32, PhasePoly<S>>,
}

impl<S: Scalar> HbarSeries<S> {
    pub fn zero(n: usize, lambda: S) -> Self {
        HbarSeries { n, lambda, terms: BTreeMap::new() }
    }

    /// Coefficient of `hbar^r`.
    pub fn term(&self, r: u32) -> PhasePoly<S> {
        self.terms.get(&r).cloned().unwrap_or_else(|| PhasePoly::zero(self.n))
    }

    pub fn max_power(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    fn add_at(&mut self, r: u32, p: PhasePoly<S>) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(r).or_insert_with(|| PhasePoly::zero(p.n()));
        *slot = slot.clone() + &p;
        if slot.is_zero() {
            self.terms.remove(&r);
        }
    }

    /// Sum of the series with `hbar = 1`; equal to `sigma(Q(F) Q(G))`.
    pub fn collapse(&self) -> PhasePoly<S> {
        self.terms.values().fold(PhasePoly::zero(self.n), |acc, p| acc + p)
    }
}

pub fn star<S: Scalar>(f: &PhasePoly<S>, g: &PhasePoly<S>, lambda: &S) -> Result<HbarSeries<S>> {
    f.check_dim(g)?;
    let n = f.n();
    let fparts = f.homogeneous_parts();
    let gparts = g.homogeneous_parts();
    let mut out = HbarSeries::zero(n, lambda.clone());
    for (&p, fp) in &fparts {
        let qf = quantize(fp, lambda);
        for (&q, gq) in &gparts {
            let prod = qf.compose(&quantize(gq, lambda))?;
            for (d, part) in symbol_map(&prod).homogeneous_parts() {
                out.add_at(p + q - d, part);
            }
        }
    }
    Ok(out)
}

/// Coefficient of `hbar^r` in `star(F, G)`.
pub fn c_term<S: Scalar>(f: &PhasePoly<S>, g: &PhasePoly<S>, r: u32, lambda: &S) -> Result<PhasePoly<S>> {
    Ok(star(f, g, lambda)?.term(r))
}

/// `C_1(F, G) - C_1(G, F) - {F, G}`.
pub fn poisson_check<S: Scalar>(f: &PhasePoly<S>, g: &PhasePoly<S>, lambda: &S) -> Result<PhasePoly<S>> {
    let a = c_term(f, g, 1, lambda)?;
    let b = c_term(g, f, 1, lambda)?;
    Ok(a - &b - &f.poisson(g)?)
}

/// Grade-wise difference `(F * G) * H - F * (G * H)`, with the outer
/// products taken term by term in each grade.
pub fn associator<S: Scalar>(
    f: &PhasePoly<S>,
    g: &PhasePoly<S>,
    h: &PhasePoly<S>,
    lambda: &S,
) -> Result<HbarSeries<S>> {
    let fg = star(f, g, lambda)?;
    let gh = star(g, h, lambda)?;
    let mut out = HbarSeries::zero(f.n(), lambda.clone());
    for (&r, c) in &fg.terms {
        for (s, t) in star(c, h, lambda)?.terms {
            out.add_at(r + s, t);
        }
    }
    for (&r, c) in &gh.terms {
        for (s, t) in star(f, c, lambda)?.terms {
            out.add_at(r + s, -t);
        }
    }
    Ok(out)
}

/// Runs `poisson_check` over all ordered pairs of `inputs`, in parallel;
/// returns the indices of the failing pairs.
pub fn poisson_sweep<S: Scalar>(inputs: &[PhasePoly<S>], lambda: &S) -> Result<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> =
        (0..inputs.len()).flat_map(|i| (0..inputs.len()).map(move |j| (i, j))).collect();
    let checked: Result<Vec<Option<(usize, usize)>>> = pairs
        .into_par_iter()
        .map(|(i, j)| Ok((!poisson_check(&inputs[i], &inputs[j], lambda)?.is_zero()).then_some((i, j))))
        .collect();
    Ok(checked?.into_iter().flatten().collect())
}

#[derive(Serialize, Deserialize)]
struct SeriesWire<P> {
    lambda: String,
    terms: BTreeMap<String, P>,
}

impl<S: Scalar> Serialize for HbarSeries<S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        SeriesWire {
            lambda: self.lambda.to_string(),
            terms: self.terms.iter().map(|(r, p)| (r.to_string(), p)).collect(),
        }
        .serialize(s)
    }
}

impl<'de, S: Scalar + FromStr> Deserialize<'de> for HbarSeries<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = SeriesWire::<PhasePoly<S>>::deserialize(d)?;
        let lambda =
            wire.lambda.parse::<S>().map_err(|_| D::Error::custom(format!("bad rational {:?}", wire.lambda)))?;
        let mut terms = BTreeMap::new();
        let mut n = None;
        for (r, p) in wire.terms {
            let r: u32 = r.parse().map_err(|_| D::Error::custom(format!("bad grade {r:?}")))?;
            if *n.get_or_insert(p.n()) != p.n() {
                return Err(D::Error::custom("terms of different dimension"));
            }
            terms.insert(r, p);
        }
        Ok(HbarSeries { n: n.unwrap_or(1), lambda, terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::tests::arb_op;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;
    type P = PhasePoly<Q>;

    fn q(a: i64, b: i64) -> Q {
        Q::from_frac(a, b)
    }

    #[test]
    fn canonical_pair() {
        let lam = q(1, 3);
        let xi = P::var_xi(1, 0);
        let x = P::var_x(1, 0);
        let s = star(&xi, &x, &lam).unwrap();
        assert_eq!(s.term(0), &xi * &x);
        assert_eq!(s.term(1), P::constant(1, q(2, 3)));
        assert_eq!(s.max_power(), Some(1));
        let s = star(&x, &xi, &lam).unwrap();
        assert_eq!(s.term(1), P::constant(1, q(-1, 3)));
        assert!(poisson_check(&xi, &x, &lam).unwrap().is_zero());
    }

    #[test]
    fn functions_commute() {
        let f = P::var_x(2, 0);
        let g = &P::var_x(2, 1) * &P::var_x(2, 1);
        let s = star(&f, &g, &q(1, 2)).unwrap();
        assert_eq!(s.terms.len(), 1);
        assert_eq!(s.term(0), &f * &g);
    }

    #[test]
    fn series_is_finite() {
        let f = &P::var_xi(2, 0) * &P::var_xi(2, 1);
        let g = &P::var_x(2, 0) * &(&P::var_x(2, 1) * &P::var_xi(2, 0));
        let s = star(&f, &g, &q(1, 4)).unwrap();
        assert!(s.max_power().unwrap() <= 3);
        assert!(c_term(&f, &g, 4, &q(1, 4)).unwrap().is_zero());
        assert_eq!(s.collapse(), symbol_map(&quantize(&f, &q(1, 4)).compose(&quantize(&g, &q(1, 4))).unwrap()));
    }

    #[test]
    fn json_round_trip() {
        let s = star(&P::var_xi(1, 0), &P::var_x(1, 0), &q(1, 3)).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with("{\"lambda\":\"1/3\",\"terms\":{\"0\":"));
        let back: HbarSeries<Q> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn skew_part_is_the_poisson_bracket(f in arb_op(2, 2, 2), g in arb_op(2, 2, 2), l in -4i64..5) {
            prop_assert!(poisson_check(&f, &g, &q(l, 3)).unwrap().is_zero());
        }

        #[test]
        fn grade_zero_is_the_product(f in arb_op(2, 2, 2), g in arb_op(2, 2, 2)) {
            prop_assert_eq!(star(&f, &g, &q(1, 5)).unwrap().term(0), &f * &g);
        }

        #[test]
        fn associative(f in arb_op(1, 2, 1), g in arb_op(1, 2, 1), h in arb_op(1, 2, 1), l in -3i64..4) {
            prop_assert!(associator(&f, &g, &h, &q(l, 2)).unwrap().terms.is_empty());
        }
    }
}
