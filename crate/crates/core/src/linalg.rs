//! Exact linear algebra over `Z`, `Q` and prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rank over `Q` of an integer matrix given as rows.
pub fn rank_q(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nr = m.len();
    let nc = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..nc {
        let Some(p) = (rank..nr).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(p, rank);
        let piv = m[rank][c].clone();
        for r in rank + 1..nr {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            let mut g = BigInt::zero();
            for j in c..nc {
                let v = &m[r][j] * &piv - &f * &m[rank][j];
                g = g.gcd(&v);
                m[r][j] = v;
            }
            if g > BigInt::one() {
                for j in c..nc {
                    m[r][j] = &m[r][j] / &g;
                }
            }
        }
        rank += 1;
        if rank == nr {
            break;
        }
    }
    rank
}

/// Rank over `F_p` of a matrix with entries already reduced mod `p`.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let nr = m.len();
    let nc = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..nc {
        let Some(pr) = (rank..nr).find(|&r| !m[r][c].is_multiple_of(p)) else { continue };
        m.swap(pr, rank);
        let inv = crate::arith::inv_mod(m[rank][c] % p, p).expect("unit");
        for r in rank + 1..nr {
            let f = (m[r][c] % p) as u128 * inv as u128 % p as u128;
            if f == 0 {
                continue;
            }
            for j in c..nc {
                let t = (f * m[rank][j] as u128 % p as u128) as u64;
                m[r][j] = (m[r][j] % p + p - t) % p;
            }
        }
        rank += 1;
        if rank == nr {
            break;
        }
    }
    rank
}

/// One solution of `sum_i c_i * cols[i] = target` over `Q` (free variables set
/// to zero), or `None` if the system is inconsistent.
pub fn solve_combination(cols: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigRational>> {
    let k = cols.len();
    let nr = target.len();
    // augmented matrix with rows indexed by coordinates
    let mut m: Vec<Vec<BigRational>> = (0..nr)
        .map(|r| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| BigRational::from(c[r].clone())).collect();
            row.push(BigRational::from(target[r].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..k {
        let Some(p) = (rank..nr).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(p, rank);
        let inv = m[rank][c].recip();
        for j in c..=k {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for r in 0..nr {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..=k {
                    let t = &f * &m[rank][j];
                    m[r][j] -= t;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if m[rank..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut sol = vec![BigRational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = m[r][k].clone();
    }
    Some(sol)
}

/// Row-style Hermite normal form: a basis of the `Z`-span of `rows`, echelon
/// with positive pivots and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let nc = rows.first().map_or(0, |r| r.len());
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut pivot_cols = Vec::new();
    for c in 0..nc {
        // gcd-combine all rows with nonzero entry in column c into one row
        loop {
            let nz: Vec<usize> = (0..m.len()).filter(|&r| !m[r][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let best = *nz.iter().min_by_key(|&&r| m[r][c].abs()).unwrap();
            let pivot = m[best].clone();
            for &r in &nz {
                if r == best {
                    continue;
                }
                let q = m[r][c].div_floor(&pivot[c]);
                for j in 0..nc {
                    let t = &q * &pivot[j];
                    m[r][j] -= t;
                }
            }
        }
        if let Some(r) = (0..m.len()).find(|&r| !m[r][c].is_zero()) {
            let mut row = m.remove(r);
            if row[c].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            out.push(row);
            pivot_cols.push(c);
        }
        m.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    for i in 0..out.len() {
        let c = pivot_cols[i];
        for k in 0..i {
            let q = out[k][c].div_floor(&out[i][c]);
            if !q.is_zero() {
                let pr = out[i].clone();
                for j in 0..nc {
                    let t = &q * &pr[j];
                    out[k][j] -= t;
                }
            }
        }
    }
    out
}

/// Nonzero invariant factors of an integer matrix (Smith normal form diagonal).
pub fn invariant_factors(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nr = m.len();
    let nc = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..nr {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..nc {
                    let v = &q * &m[t][j];
                    m[i][j] -= v;
                }
                if !m[i][t].is_zero() {
                    m.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..nc {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility condition on the remaining block
            let piv = m[t][t].clone();
            let bad = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| !(&m[i][j] % &piv).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..nc {
                        let v = m[i][j].clone();
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

pub fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        assert_eq!(rank_q(&to_big(&[vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(rank_q(&to_big(&[vec![0, 0], vec![0, 0]])), 0);
        assert_eq!(rank_q(&to_big(&[vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 0]])), 2);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 4]], 3), 1);
        assert_eq!(rank_mod_p(&[vec![1, 1], vec![1, 2]], 3), 2);
    }

    #[test]
    fn hermite_basis() {
        let h = hermite_rows(&to_big(&[vec![2, 4], vec![3, 5]]));
        assert_eq!(h, to_big(&[vec![1, 1], vec![0, 2]]));
        let h = hermite_rows(&to_big(&[vec![2, 0], vec![4, 0], vec![0, 0]]));
        assert_eq!(h, to_big(&[vec![2, 0]]));
    }

    #[test]
    fn smith() {
        let f = invariant_factors(&to_big(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn solve() {
        let cols = to_big(&[vec![2, 0], vec![0, 3]]);
        let s = solve_combination(&cols, &[BigInt::from(1), BigInt::from(1)]).unwrap();
        assert_eq!(s[0], BigRational::new(1.into(), 2.into()));
        assert!(solve_combination(&to_big(&[vec![1, 1]]), &[BigInt::from(1), BigInt::from(0)]).is_none());
    }
}
