use std::fmt;

use crate::exactnum::linalg::inverse;
use crate::poly::{lie_lift, PhasePoly, VectorField};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlGeneratorKind {
    /// `d_i`
    Translation(usize),
    /// `x^i d_j`
    Linear(usize, usize),
    /// `x^s E` with `E = x^j d_j`
    Quadratic(usize),
}

impl fmt::Display for SlGeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SlGeneratorKind::Translation(i) => write!(f, "d{}", i + 1),
            SlGeneratorKind::Linear(i, j) => write!(f, "x{} d{}", i + 1, j + 1),
            SlGeneratorKind::Quadratic(s) => write!(f, "x{} E", s + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlGenerator<S> {
    pub kind: SlGeneratorKind,
    pub field: VectorField<S>,
}

/// The `n^2 + 2n` vector fields spanning the projective algebra on `R^n`:
/// translations, then linear fields, then the quadratic fields.
pub fn sl_generators<S: Scalar>(n: usize) -> Vec<SlGenerator<S>> {
    let mut out = Vec::with_capacity(n * n + 2 * n);
    for i in 0..n {
        out.push(SlGenerator {
            kind: SlGeneratorKind::Translation(i),
            field: VectorField::coordinate(n, i),
        });
    }
    for i in 0..n {
        for j in 0..n {
            let p = &PhasePoly::var_x(n, i) * &PhasePoly::var_xi(n, j);
            out.push(SlGenerator {
                kind: SlGeneratorKind::Linear(i, j),
                field: VectorField::new(p).expect("degree one"),
            });
        }
    }
    let euler = (0..n).fold(PhasePoly::zero(n), |acc, j| {
        acc + &(&PhasePoly::var_x(n, j) * &PhasePoly::var_xi(n, j))
    });
    for s in 0..n {
        out.push(SlGenerator {
            kind: SlGeneratorKind::Quadratic(s),
            field: VectorField::new(&PhasePoly::var_x(n, s) * &euler).expect("degree one"),
        });
    }
    out
}

/// Vector field of the block matrix `[[A, b], [c, d]]` acting by
/// linear-fractional transformations: `x' = A x + b - x (c.x + d)`.
pub fn projective_field<S: Scalar>(m: &[Vec<S>]) -> VectorField<S> {
    let n = m.len() - 1;
    let lin = |row: usize| {
        (0..n).fold(PhasePoly::constant(n, m[row][n].clone()), |acc, j| {
            acc + &PhasePoly::var_x(n, j).scale(&m[row][j])
        })
    };
    let denom = lin(n);
    let comps: Vec<PhasePoly<S>> =
        (0..n).map(|i| lin(i) - &PhasePoly::var_x(n, i) * &denom).collect();
    VectorField::from_components(&comps).expect("components are functions of x")
}

/// Basis of `sl(n+1)`: off-diagonal units `E_ij`, then `H_i = E_ii - E_(i+1)(i+1)`.
pub fn sl_basis<S: Scalar>(n: usize) -> Vec<Vec<Vec<S>>> {
    let dim = n + 1;
    let unit = |i: usize, j: usize| {
        let mut m = vec![vec![S::zero(); dim]; dim];
        m[i][j] = S::one();
        m
    };
    let mut out = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                out.push(unit(i, j));
            }
        }
    }
    for i in 0..n {
        let mut h = unit(i, i);
        h[i + 1][i + 1] = -S::one();
        out.push(h);
    }
    out
}

fn trace_form<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> S {
    let d = a.len();
    let mut acc = S::zero();
    for i in 0..d {
        for j in 0..d {
            acc = acc + a[i][j].clone() * b[j][i].clone();
        }
    }
    acc
}

fn mat_mul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).fold(S::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
                .collect()
        })
        .collect()
}

fn commutator<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    ab.into_iter()
        .zip(ba)
        .map(|(r1, r2)| r1.into_iter().zip(r2).map(|(x, y)| x - y).collect())
        .collect()
}

/// `Some(s)` when `[X_M, X_N] = s X_[M,N]` for every pair of basis matrices.
pub fn embedding_sign<S: Scalar>(n: usize) -> Option<i64> {
    let basis = sl_basis::<S>(n);
    let fields: Vec<VectorField<S>> = basis.iter().map(|m| projective_field(m)).collect();
    let mut found: Option<i64> = None;
    for (a, ma) in basis.iter().enumerate() {
        for (b, mb) in basis.iter().enumerate() {
            let lhs = fields[a].bracket(&fields[b]).ok()?;
            let rhs = projective_field(&commutator(ma, mb));
            let s = if lhs == rhs {
                if lhs.as_poly().is_zero() {
                    continue;
                }
                1
            } else if lhs == rhs.scale(&-S::one()) {
                -1
            } else {
                return None;
            };
            match found {
                Some(f) if f != s => return None,
                _ => found = Some(s),
            }
        }
    }
    found
}

/// Quadratic Casimir `sum_a L_{X_a} L_{X^a}` over a trace-form-dual pair of bases.
#[derive(Clone, Debug)]
pub struct Casimir<S> {
    pairs: Vec<(VectorField<S>, VectorField<S>)>,
}

impl<S: Scalar> Casimir<S> {
    pub fn apply(&self, p: &PhasePoly<S>) -> PhasePoly<S> {
        let mut out = PhasePoly::zero(p.n());
        for (a, b) in &self.pairs {
            let inner = lie_lift(b, p).expect("dimensions agree");
            out = out + &lie_lift(a, &inner).expect("dimensions agree");
        }
        out
    }

    pub fn pairs(&self) -> &[(VectorField<S>, VectorField<S>)] {
        &self.pairs
    }
}

pub fn casimir_operator<S: Scalar>(n: usize) -> Casimir<S> {
    let basis = sl_basis::<S>(n);
    let dim = basis.len();
    let ncartan = n;
    let nroot = dim - ncartan;
    let gram: Vec<Vec<S>> = (0..ncartan)
        .map(|i| (0..ncartan).map(|j| trace_form(&basis[nroot + i], &basis[nroot + j])).collect())
        .collect();
    let ginv = inverse(&gram).expect("Cartan Gram matrix is invertible");
    let d = n + 1;
    let mut pairs = Vec::with_capacity(dim);
    for m in &basis[..nroot] {
        // the dual of E_ij under tr(AB) is E_ji
        let (i, j) = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .find(|&(i, j)| !m[i][j].is_zero())
            .expect("unit matrix");
        let mut dual = vec![vec![S::zero(); d]; d];
        dual[j][i] = S::one();
        pairs.push((projective_field(m), projective_field(&dual)));
    }
    for i in 0..ncartan {
        let mut dual = vec![vec![S::zero(); d]; d];
        for j in 0..ncartan {
            for r in 0..d {
                dual[r][r] = dual[r][r].clone() + ginv[i][j].clone() * basis[nroot + j][r][r].clone();
            }
        }
        pairs.push((projective_field(&basis[nroot + i]), projective_field(&dual)));
    }
    Casimir { pairs }
}

/// `2k(k + n)`.
pub fn casimir_eigenvalue<S: Scalar>(k: u32, n: usize) -> S {
    S::from_i64(2 * k as i64 * (k as i64 + n as i64))
}
