use std::collections::BTreeMap;

use rayon::prelude::*;

use super::generators::{sl_generators, SlGenerator, SlGeneratorKind};
use super::tables::DefectEntry;
use super::{div_power_coeff, symbol_map};
use crate::diffop::DiffOp;
use crate::error::Result;
use crate::exactnum::linalg::{RowReducer, SparseRow};
use crate::exactnum::{falling_factorial, int_scalar};
use crate::poly::{lie_lift, Monomial, MultiIndex, PhasePoly, VectorField};
use crate::scalar::Scalar;

/// `L_X(map(A)) - map(L_X^lambda A)`.
pub fn equivariance_defect<S: Scalar>(
    map: impl Fn(&DiffOp<S>) -> PhasePoly<S>,
    x: &VectorField<S>,
    a: &DiffOp<S>,
) -> Result<PhasePoly<S>> {
    let lhs = lie_lift(x, &map(a))?;
    Ok(lhs - &map(&a.lie_op(x)?))
}

/// Outcome of an exhaustive equivariance check.
#[derive(Clone, Debug)]
pub struct SweepReport<S> {
    pub checked: usize,
    pub failures: Vec<DefectEntry<S>>,
}

impl<S> SweepReport<S> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Monomials `x^e xi^b` with `|e| <= coeff_deg` and `|b| = k`.
pub(crate) fn monomial_basis<S: Scalar>(n: usize, k: u32, coeff_deg: u32) -> Vec<PhasePoly<S>> {
    let xis = MultiIndex::all_of_order(n, k);
    MultiIndex::all_up_to_order(n, coeff_deg)
        .iter()
        .flat_map(|e| {
            xis.iter()
                .map(move |b| PhasePoly::monomial(S::one(), e.as_slice(), b.as_slice()))
        })
        .collect()
}

/// Checks `symbol_map` against every generator on every monomial of fiber
/// degree at most `k_max` and coefficient degree at most `coeff_deg`.
pub fn equivariance_sweep<S: Scalar>(n: usize, lambda: &S, k_max: u32, coeff_deg: u32) -> SweepReport<S> {
    let gens = sl_generators::<S>(n);
    let inputs: Vec<PhasePoly<S>> =
        (0..=k_max).flat_map(|k| monomial_basis::<S>(n, k, coeff_deg)).collect();
    let jobs: Vec<(&SlGenerator<S>, &PhasePoly<S>)> =
        gens.iter().flat_map(|g| inputs.iter().map(move |p| (g, p))).collect();
    let failures = jobs
        .par_iter()
        .filter_map(|(g, p)| {
            let a = DiffOp::from_symbol((*p).clone(), lambda.clone());
            let d = equivariance_defect(symbol_map, &g.field, &a).expect("dimensions agree");
            (!d.is_zero()).then(|| DefectEntry {
                generator: g.kind.to_string(),
                input: (*p).clone(),
                defect: d,
            })
        })
        .collect();
    SweepReport { checked: jobs.len(), failures }
}

/// The action of `x^s E` on normal-ordered symbols:
/// `L_{X_s} - (E + lambda (n + 1)) d/dxi_s`.
pub fn transported_quadratic_action<S: Scalar>(
    xs: &VectorField<S>,
    s: usize,
    p: &PhasePoly<S>,
    lambda: &S,
) -> Result<PhasePoly<S>> {
    let d = p.partial_xi(s)?;
    let shift = S::from_i64(p.n() as i64 + 1) * lambda.clone();
    Ok(lie_lift(xs, p)? - &d.euler_xi() - &d.scale(&shift))
}

#[derive(Clone, Debug)]
pub struct RecurrenceReport<S> {
    pub k: u32,
    pub n: usize,
    pub lambda: S,
    /// `(ell, C_ell^k + (k - 1 + lambda (n+1)) / ((k - ell)(k + ell + n)) C_ell^(k-1))`
    pub residuals: Vec<(u32, S)>,
}

impl<S: Scalar> RecurrenceReport<S> {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }
}

/// Checks the closed-form `Div`-power coefficients against their recurrence in `k`.
pub fn check_recurrence<S: Scalar>(k: u32, n: usize, lambda: &S) -> RecurrenceReport<S> {
    let shift = S::from_i64(k as i64 - 1) + S::from_i64(n as i64 + 1) * lambda.clone();
    let residuals = (0..k)
        .map(|ell| {
            let ck = div_power_coeff(k, ell, n, lambda).expect("ell <= k");
            let ck1 = div_power_coeff(k - 1, ell, n, lambda).expect("ell <= k - 1");
            let den = S::from_i64(((k - ell) * (k + ell + n as u32)) as i64);
            (ell, ck + shift.clone() / den * ck1)
        })
        .collect();
    RecurrenceReport { k, n, lambda: lambda.clone(), residuals }
}

/// Solution space of the equivariance equation for the coefficients
/// `C_ell^j` (`j = ell..=k`) of `Div^(j - ell)` landing in `S^ell`.
#[derive(Clone, Debug)]
pub struct DivCoeffSolution<S> {
    pub ell: u32,
    pub kernel_dim: usize,
    /// `C_ell^ell, ..., C_ell^k` normalized by `C_ell^ell = 1`, when the
    /// kernel is a line not contained in `C_ell^ell = 0`.
    pub normalized: Option<Vec<S>>,
}

fn div_pow<S: Scalar>(p: &PhasePoly<S>, m: u32) -> PhasePoly<S> {
    (0..m).fold(p.clone(), |acc, _| acc.big_div())
}

/// Solves `[L_{X_s}, sigma] = -sigma o (E + lambda (n+1)) o d/dxi_s` for
/// `sigma = sum C_ell^j Div^(j - ell)` as an exact linear system, one target
/// degree `ell` at a time, independently of the closed form.
pub fn solve_div_coefficients<S: Scalar>(k: u32, n: usize, lambda: &S) -> Vec<DivCoeffSolution<S>> {
    let gens: Vec<(usize, VectorField<S>)> = sl_generators::<S>(n)
        .into_iter()
        .filter_map(|g| match g.kind {
            SlGeneratorKind::Quadratic(s) => Some((s, g.field)),
            _ => None,
        })
        .collect();
    (0..=k)
        .into_par_iter()
        .map(|ell| {
            let ncols = (k - ell + 1) as usize;
            let mut red = RowReducer::new(ncols);
            for j in ell + 1..=k {
                let m = j - ell;
                let factor = S::from_i64(j as i64 - 1) + S::from_i64(n as i64 + 1) * lambda.clone();
                for p in monomial_basis::<S>(n, j, m) {
                    for (s, xs) in &gens {
                        let comm = lie_lift(xs, &div_pow(&p, m)).expect("dims")
                            - &div_pow(&lie_lift(xs, &p).expect("dims"), m);
                        let rhs = div_pow(&p.dxi(*s), m - 1).scale(&factor);
                        let mut rows: BTreeMap<Monomial, SparseRow<S>> = BTreeMap::new();
                        for (mono, c) in comm.terms() {
                            rows.entry(mono.clone()).or_default().insert(m as usize, c.clone());
                        }
                        for (mono, c) in rhs.terms() {
                            rows.entry(mono.clone()).or_default().insert(m as usize - 1, c.clone());
                        }
                        for row in rows.into_values() {
                            red.push(row);
                        }
                    }
                }
            }
            let kernel = red.kernel_basis();
            let normalized = (kernel.len() == 1 && !kernel[0][0].is_zero()).then(|| {
                let lead = kernel[0][0].clone();
                kernel[0].iter().map(|v| v.clone() / lead.clone()).collect()
            });
            DivCoeffSolution { ell, kernel_dim: kernel.len(), normalized }
        })
        .collect()
}

/// One ansatz term `x^x xi^xi d_x^dx d_xi^dxi` of a map `S^k -> S^ell`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomTerm {
    pub x: MultiIndex,
    pub dx: MultiIndex,
    pub xi: MultiIndex,
    pub dxi: MultiIndex,
}

impl HomTerm {
    /// Value on a monomial of fiber degree `|dxi|`.
    fn apply_monomial<S: Scalar>(&self, m: &Monomial, c: &S) -> Option<(Monomial, S)> {
        if m.xi() != self.dxi.as_slice() {
            return None;
        }
        let mut factor: u128 = 1;
        let mut x = Vec::with_capacity(m.n());
        for (i, &e) in m.x().iter().enumerate() {
            let d = self.dx.as_slice()[i];
            if d > e {
                return None;
            }
            factor *= falling_factorial(e, d) * falling_factorial(self.dxi.as_slice()[i], self.dxi.as_slice()[i]);
            x.push(e - d + self.x.as_slice()[i]);
        }
        Some((Monomial::new(&x, self.xi.as_slice()), c.clone() * int_scalar::<S>(factor)))
    }

    pub fn apply<S: Scalar>(&self, p: &PhasePoly<S>) -> PhasePoly<S> {
        p.map_terms(|m, c| self.apply_monomial(m, c))
    }
}

/// Exact kernel of the equivariance system over a bounded ansatz.
#[derive(Clone, Debug)]
pub struct HomBasis<S> {
    pub k: u32,
    pub ell: u32,
    pub n: usize,
    pub terms: Vec<HomTerm>,
    pub basis: Vec<Vec<S>>,
}

impl<S: Scalar> HomBasis<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Applies the `idx`-th basis map to a polynomial in `S^k`.
    pub fn apply(&self, idx: usize, p: &PhasePoly<S>) -> PhasePoly<S> {
        let mut out = PhasePoly::zero(self.n);
        for (t, c) in self.terms.iter().zip(&self.basis[idx]) {
            if !c.is_zero() {
                out = out + &t.apply(p).scale(c);
            }
        }
        out
    }

    /// `Some(c)` when the `idx`-th basis map acts as `c` times the identity
    /// on every monomial of `S^k` with coefficient degree at most `coeff_deg`.
    pub fn scalar_multiple(&self, idx: usize, coeff_deg: u32) -> Option<S> {
        if self.k != self.ell {
            return None;
        }
        let mut factor: Option<S> = None;
        for p in monomial_basis::<S>(self.n, self.k, coeff_deg) {
            let img = self.apply(idx, &p);
            let (m, c) = p.terms().next().expect("monomial");
            let ratio = img.coeff(m) / c.clone();
            if img != p.scale(&ratio) {
                return None;
            }
            match &factor {
                Some(f) if f != &ratio => return None,
                _ => factor = Some(ratio),
            }
        }
        factor
    }
}

/// Kernel of "`L_X T - T L_X = 0` for every generator" over maps `S^k -> S^ell`
/// of the form `sum a(x) xi^b d_x^alpha d_xi^beta` with `|alpha| <= max_order`,
/// `deg a <= max_coeff_degree`, `|b| = ell`, `|beta| = k`.
pub fn equivariant_hom_basis<S: Scalar>(
    k: u32,
    ell: u32,
    n: usize,
    max_order: u32,
    max_coeff_degree: u32,
) -> HomBasis<S> {
    let xs = MultiIndex::all_up_to_order(n, max_coeff_degree);
    let dxs = MultiIndex::all_up_to_order(n, max_order);
    let xis = MultiIndex::all_of_order(n, ell);
    let dxis = MultiIndex::all_of_order(n, k);
    let mut terms = Vec::new();
    for x in &xs {
        for dx in &dxs {
            for xi in &xis {
                for dxi in &dxis {
                    terms.push(HomTerm { x: x.clone(), dx: dx.clone(), xi: xi.clone(), dxi: dxi.clone() });
                }
            }
        }
    }
    let probe_deg = (max_coeff_degree + 2).max(max_order);
    let inputs = monomial_basis::<S>(n, k, probe_deg);
    // translations first: they alone force constant coefficients and keep
    // the later rows sparse
    let gens = sl_generators::<S>(n);
    let jobs: Vec<(&VectorField<S>, &PhasePoly<S>)> =
        gens.iter().flat_map(|g| inputs.iter().map(move |p| (&g.field, p))).collect();
    let row_sets: Vec<Vec<SparseRow<S>>> = jobs
        .par_iter()
        .map(|(x, p)| {
            let lp = lie_lift(x, p).expect("dims");
            let mut rows: BTreeMap<Monomial, SparseRow<S>> = BTreeMap::new();
            for (col, t) in terms.iter().enumerate() {
                let d = lie_lift(x, &t.apply(p)).expect("dims") - &t.apply(&lp);
                for (mono, c) in d.terms() {
                    rows.entry(mono.clone()).or_default().insert(col, c.clone());
                }
            }
            rows.into_values().collect()
        })
        .collect();
    let mut red = RowReducer::new(terms.len());
    for rows in row_sets {
        for row in rows {
            red.push(row);
        }
    }
    HomBasis { k, ell, n, basis: red.kernel_basis(), terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projsym::sigma_coeff;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(a: i64, b: i64) -> Q {
        Q::from_frac(a, b)
    }

    #[test]
    fn symbol_map_is_equivariant_small() {
        for n in 1..=2 {
            let rep = equivariance_sweep(n, &q(1, 3), 3, 2);
            assert!(rep.passed(), "{:?}", rep.failures.first());
            assert!(rep.checked > 0);
        }
    }

    #[test]
    fn naive_symbol_is_not_equivariant() {
        let n = 2;
        let x1e = sl_generators::<Q>(n)
            .into_iter()
            .find(|g| g.kind == SlGeneratorKind::Quadratic(0))
            .unwrap()
            .field;
        let a = DiffOp::from_symbol(PhasePoly::monomial(q(1, 1), &[0, 0], &[2, 0]), q(0, 1));
        let d = equivariance_defect(|a: &DiffOp<Q>| a.to_symbol(), &x1e, &a).unwrap();
        assert!(!d.is_zero());
    }

    #[test]
    fn equivariance_fails_outside_the_algebra() {
        let x = VectorField::new(PhasePoly::monomial(q(1, 1), &[3, 0], &[1, 0])).unwrap();
        let a = DiffOp::from_symbol(PhasePoly::monomial(q(1, 1), &[0, 0], &[2, 0]), q(1, 3));
        assert!(!equivariance_defect(symbol_map, &x, &a).unwrap().is_zero());
    }

    #[test]
    fn linear_solve_reproduces_closed_form() {
        for n in 1..=2 {
            for lam in [q(0, 1), q(1, 3), q(1, 2)] {
                let k = 4;
                for sol in solve_div_coefficients(k, n, &lam) {
                    assert_eq!(sol.kernel_dim, 1);
                    let got = sol.normalized.unwrap();
                    for (idx, c) in got.iter().enumerate() {
                        let j = sol.ell + idx as u32;
                        assert_eq!(c, &div_power_coeff(j, sol.ell, n, &lam).unwrap());
                    }
                }
            }
        }
        // C = c ell!/k!; the literal falling factorial k (k-1) ... (k-ell+1) disagrees at k=2, ell=0
        let c = sigma_coeff(2, 0, 1, &q(1, 1)).unwrap();
        assert_eq!(div_power_coeff(2, 0, 1, &q(1, 1)).unwrap(), c.clone() / q(2, 1));
    }

    #[test]
    fn hom_dimensions_small() {
        let id = equivariant_hom_basis::<Q>(0, 0, 2, 1, 1);
        assert_eq!(id.dim(), 1);
        assert!(id.scalar_multiple(0, 2).is_some());
        let h = equivariant_hom_basis::<Q>(1, 1, 2, 1, 1);
        assert_eq!(h.dim(), 1);
        assert!(h.scalar_multiple(0, 2).is_some());
        assert_eq!(equivariant_hom_basis::<Q>(1, 0, 2, 1, 1).dim(), 0);
        assert_eq!(equivariant_hom_basis::<Q>(2, 1, 2, 2, 1).dim(), 0);
    }
}
