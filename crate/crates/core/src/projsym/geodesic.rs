use super::quantize;
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::poly::PhasePoly;
use crate::scalar::Scalar;

type Matrix<S> = [Vec<PhasePoly<S>>];

fn check_square<S: Scalar>(m: &Matrix<S>) -> Result<usize> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::DimensionMismatch { left: n, right: row.len() });
        }
        for e in row {
            if e.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: e.n() });
            }
            if !e.is_x_only() {
                return Err(Error::NotXOnly);
            }
        }
    }
    Ok(n)
}

fn check_symmetric<S: Scalar>(m: &Matrix<S>) -> Result<usize> {
    let n = check_square(m)?;
    for i in 0..n {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    Ok(n)
}

/// `Q_(1/2)(g^ij xi_i xi_j)`, built from the inverse metric alone.
pub fn geodesic_quantize<S: Scalar>(g_inv: &Matrix<S>) -> Result<DiffOp<S>> {
    let n = check_symmetric(g_inv)?;
    let mut h = PhasePoly::zero(n);
    for i in 0..n {
        for j in 0..n {
            h = h + &(&g_inv[i][j] * &(&PhasePoly::var_xi(n, i) * &PhasePoly::var_xi(n, j)));
        }
    }
    Ok(quantize(&h, &S::from_frac(1, 2)))
}

/// `Gamma^k_ij = g^kl (d_i g_jl + d_j g_il - d_l g_ij) / 2`, indexed `[k][i][j]`.
pub fn christoffel<S: Scalar>(g: &Matrix<S>, g_inv: &Matrix<S>) -> Result<Vec<Vec<Vec<PhasePoly<S>>>>> {
    let n = check_symmetric(g)?;
    if check_symmetric(g_inv)? != n {
        return Err(Error::DimensionMismatch { left: n, right: g_inv.len() });
    }
    for i in 0..n {
        for j in 0..n {
            let prod = (0..n).fold(PhasePoly::zero(n), |acc, l| acc + &(&g[i][l] * &g_inv[l][j]));
            let expect = if i == j { PhasePoly::one(n) } else { PhasePoly::zero(n) };
            if prod != expect {
                return Err(Error::NotInverse);
            }
        }
    }
    let half = S::from_frac(1, 2);
    Ok((0..n)
        .map(|k| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (0..n).fold(PhasePoly::zero(n), |acc, l| {
                                let t = g[j][l].dx(i) + &g[i][l].dx(j) - &g[i][j].dx(l);
                                acc + &(&g_inv[k][l] * &t)
                            })
                            .scale(&half)
                        })
                        .collect()
                })
                .collect()
        })
        .collect())
}

/// `g^ij (d_i d_j - Gamma^k_ij d_k) + (n+1)/(4(n+2)) d_ij g^ij` at weight 1/2.
///
/// Coincides with `geodesic_quantize(g_inv)` when `det g` is constant.
pub fn laplace_beltrami_form<S: Scalar>(g: &Matrix<S>, g_inv: &Matrix<S>) -> Result<DiffOp<S>> {
    let gamma = christoffel(g, g_inv)?;
    let n = g.len();
    let mut sym = PhasePoly::zero(n);
    let mut potential = PhasePoly::zero(n);
    for i in 0..n {
        for j in 0..n {
            let xi_ij = &PhasePoly::var_xi(n, i) * &PhasePoly::var_xi(n, j);
            sym = sym + &(&g_inv[i][j] * &xi_ij);
            for k in 0..n {
                sym = sym - &(&(&g_inv[i][j] * &gamma[k][i][j]) * &PhasePoly::var_xi(n, k));
            }
            potential = potential + &g_inv[i][j].dx(i).dx(j);
        }
    }
    let c = S::from_frac(n as i64 + 1, 4 * (n as i64 + 2));
    Ok(DiffOp::from_symbol(sym + &potential.scale(&c), S::from_frac(1, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;
    type P = PhasePoly<Q>;

    fn mono(c: i64, x: &[u32]) -> P {
        P::monomial(Q::from_i64(c), x, &vec![0; x.len()])
    }

    #[test]
    fn flat_metric() {
        let id = vec![vec![mono(1, &[0, 0]), P::zero(2)], vec![P::zero(2), mono(1, &[0, 0])]];
        let op = geodesic_quantize(&id).unwrap();
        assert_eq!(op.to_string(), "d2^2 + d1^2");
    }

    #[test]
    fn one_dimensional_potential() {
        let g_inv = vec![vec![mono(1, &[0]) + mono(1, &[2])]];
        let op = geodesic_quantize(&g_inv).unwrap();
        let zero_order = op.to_symbol().xi_component(0);
        assert_eq!(zero_order, P::constant(1, Q::from_frac(1, 3)));
    }

    #[test]
    fn unimodular_metric_matches_laplace_beltrami() {
        // g^-1 = [[1, x2], [x2, 1 + x2^2]], det = 1
        let g_inv = vec![
            vec![mono(1, &[0, 0]), mono(1, &[0, 1])],
            vec![mono(1, &[0, 1]), mono(1, &[0, 0]) + mono(1, &[0, 2])],
        ];
        let g = vec![
            vec![mono(1, &[0, 0]) + mono(1, &[0, 2]), mono(-1, &[0, 1])],
            vec![mono(-1, &[0, 1]), mono(1, &[0, 0])],
        ];
        assert_eq!(geodesic_quantize(&g_inv).unwrap(), laplace_beltrami_form(&g, &g_inv).unwrap());
    }

    #[test]
    fn errors() {
        let bad = vec![vec![mono(1, &[0, 0]), mono(1, &[1, 0])], vec![P::zero(2), mono(1, &[0, 0])]];
        assert_eq!(geodesic_quantize(&bad), Err(Error::NotSymmetric));
        let g = vec![vec![mono(2, &[0])]];
        let g_inv = vec![vec![mono(1, &[0])]];
        assert_eq!(laplace_beltrami_form(&g, &g_inv), Err(Error::NotInverse));
    }
}
