//! Truncated power series in `T` at a fixed rational value of `q`.

use crate::error::{invalid, AskError, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesQ {
    pub q_value: BigRational,
    /// `c_0..c_{order-1}`.
    pub coeffs: Vec<BigRational>,
}

impl SeriesQ {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }
}

/// Coefficientwise product.
pub fn hadamard(a: &SeriesQ, b: &SeriesQ) -> Result<SeriesQ> {
    if a.q_value != b.q_value {
        return invalid(format!("series at q={} and q={}", a.q_value, b.q_value));
    }
    if a.order() != b.order() {
        return invalid(format!("series of order {} and {}", a.order(), b.order()));
    }
    Ok(SeriesQ { q_value: a.q_value.clone(), coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * y).collect() })
}

/// Result of a successful fit: `numerator(T) / denominator(T)` at the series' `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fit {
    pub numerator: Vec<BigRational>,
    pub denominator: Vec<BigRational>,
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Fits `S = N(T) / (q^m * prod (1 - q^{a_i} T^{b_i}))` with `deg N <= num_degree`
/// (default: as large as the margin allows). The fit is accepted only if at
/// least `margin` further coefficients of `S * D` vanish; otherwise `None`.
pub fn fit_rational(
    s: &SeriesQ,
    hypothesis: &[(i64, u32)],
    m: i64,
    num_degree: Option<usize>,
    margin: usize,
) -> Result<Option<Fit>> {
    if margin < 3 {
        return invalid("safety margin must be at least 3");
    }
    let order = s.order();
    let n_deg = match num_degree {
        Some(n) => n,
        None => match order.checked_sub(margin + 1) {
            Some(n) => n,
            None => return invalid(format!("order {order} too small for margin {margin}")),
        },
    };
    if n_deg + margin >= order {
        return invalid(format!("order {order} must exceed numerator degree {n_deg} plus margin {margin}"));
    }
    let q = &s.q_value;
    let qpow = |a: i64| -> BigRational {
        if a >= 0 {
            num_traits::pow(q.clone(), a as usize)
        } else {
            num_traits::pow(q.recip(), (-a) as usize)
        }
    };
    let mut den = vec![qpow(m)];
    for &(a, b) in hypothesis {
        let mut f = vec![BigRational::zero(); b as usize + 1];
        f[0] = BigRational::one();
        f[b as usize] = -qpow(a);
        den = poly_mul(&den, &f);
    }
    let prod = poly_mul(&s.coeffs, &den);
    if prod[n_deg + 1..order].iter().any(|c| !c.is_zero()) {
        return Ok(None);
    }
    Ok(Some(Fit { numerator: trim(prod[..=n_deg].to_vec()), denominator: trim(den) }))
}

/// Generic Padé fit with `den(0) = 1`, checked on `margin` extra coefficients.
pub fn fit_pade(s: &SeriesQ, num_degree: usize, den_degree: usize, margin: usize) -> Result<Option<Fit>> {
    let order = s.order();
    if num_degree + den_degree + margin >= order {
        return invalid("series too short for the requested Padé fit");
    }
    let c = |k: isize| -> BigRational { if k < 0 { BigRational::zero() } else { s.coeffs[k as usize].clone() } };
    // unknowns e_1..e_dd: sum_{j=0}^{dd} e_j c_{k-j} = 0 for k in nd+1..=nd+dd
    let dd = den_degree;
    let mut rows: Vec<Vec<BigRational>> = (0..dd)
        .map(|r| {
            let k = (num_degree + 1 + r) as isize;
            let mut row: Vec<BigRational> = (1..=dd).map(|j| c(k - j as isize)).collect();
            row.push(-c(k));
            row
        })
        .collect();
    let sol = solve_square(&mut rows, dd).ok_or_else(|| AskError::InvalidInput("singular Padé system".into()));
    let Ok(sol) = sol else { return Ok(None) };
    let mut den = vec![BigRational::one()];
    den.extend(sol);
    let prod = poly_mul(&s.coeffs, &den);
    if prod[num_degree + 1..order].iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    Ok(Some(Fit { numerator: trim(prod[..=num_degree].to_vec()), denominator: trim(den) }))
}

fn solve_square(m: &mut [Vec<BigRational>], n: usize) -> Option<Vec<BigRational>> {
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for j in col..=n {
            m[col][j] = &m[col][j] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=n {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn hadamard_checks_compatibility() {
        let a = SeriesQ { q_value: r(3), coeffs: vec![r(1), r(2)] };
        let b = SeriesQ { q_value: r(5), coeffs: vec![r(1), r(2)] };
        let c = SeriesQ { q_value: r(3), coeffs: vec![r(1)] };
        assert!(hadamard(&a, &b).is_err());
        assert!(hadamard(&a, &c).is_err());
        assert_eq!(hadamard(&a, &a).unwrap().coeffs, vec![r(1), r(4)]);
    }

    #[test]
    fn exponential_is_not_rational() {
        let mut coeffs = vec![r(1)];
        for k in 1..12i64 {
            let prev: BigRational = coeffs.last().unwrap().clone();
            coeffs.push(prev / r(k));
        }
        let s = SeriesQ { q_value: r(3), coeffs };
        for hyp in [vec![(0, 1)], vec![(0, 1), (1, 1)], vec![(0, 2), (1, 1), (2, 1)]] {
            assert!(fit_rational(&s, &hyp, 0, None, 3).unwrap().is_none());
        }
        assert!(fit_pade(&s, 3, 3, 3).unwrap().is_none());
    }

    #[test]
    fn margin_is_enforced() {
        let s = SeriesQ { q_value: r(3), coeffs: vec![r(1); 4] };
        assert!(fit_rational(&s, &[(0, 1)], 0, Some(1), 2).is_err());
        assert!(fit_rational(&s, &[(0, 1)], 0, Some(1), 3).is_err());
        let s = SeriesQ { q_value: r(3), coeffs: vec![r(1); 6] };
        let f = fit_rational(&s, &[(0, 1)], 0, Some(1), 3).unwrap().unwrap();
        assert_eq!(f.numerator, vec![r(1)]);
    }
}
