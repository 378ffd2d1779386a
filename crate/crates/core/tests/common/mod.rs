//! Brute-force reference computations shared by the integration tests.
//! Nothing here calls into the library's arithmetic.
#![allow(dead_code)]

use askzeta::matmodule::MatrixModule;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::collections::HashSet;

pub fn residues(m: &MatrixModule, q: i64) -> Vec<Vec<i64>> {
    m.basis.iter().map(|a| a.data.iter().map(|x| x.mod_floor(&BigInt::from(q)).to_i64().unwrap()).collect()).collect()
}

fn tuples(len: usize, q: i64) -> impl Iterator<Item = Vec<i64>> {
    let total = (q as u64).pow(len as u32);
    (0..total).map(move |mut i| {
        (0..len)
            .map(|_| {
                let v = (i % q as u64) as i64;
                i /= q as u64;
                v
            })
            .collect()
    })
}

fn element(basis: &[Vec<i64>], c: &[i64], q: i64, size: usize) -> Vec<i64> {
    let mut a = vec![0i64; size];
    for (ci, b) in c.iter().zip(basis) {
        for (t, x) in a.iter_mut().zip(b) {
            *t = (*t + ci * x) % q;
        }
    }
    a
}

fn act(x: &[i64], a: &[i64], d: usize, e: usize, q: i64) -> Vec<i64> {
    (0..e).map(|j| (0..d).map(|i| x[i] * a[i * e + j]).sum::<i64>().rem_euclid(q)).collect()
}

/// Number of `x ∈ (Z/q)^d` with `x a = 0`.
pub fn brute_kernel(a: &[i64], d: usize, e: usize, q: i64) -> u64 {
    tuples(d, q).filter(|x| act(x, a, d, e, q).iter().all(|&v| v == 0)).count() as u64
}

/// Average kernel size over all coefficient tuples modulo `p^n`.
pub fn brute_ask(m: &MatrixModule, p: u64, n: u32) -> BigRational {
    let q = (p as i64).pow(n);
    let basis = residues(m, q);
    let mut total = BigInt::from(0);
    let mut count = BigInt::from(0);
    for c in tuples(m.ell(), q) {
        let a = element(&basis, &c, q, m.d * m.e);
        total += brute_kernel(&a, m.d, m.e, q);
        count += 1;
    }
    BigRational::new(total, count)
}

/// `sum over x of 1/|x M_n|`.
pub fn brute_orbit_sum(m: &MatrixModule, p: u64, n: u32) -> BigRational {
    let q = (p as i64).pow(n);
    let basis = residues(m, q);
    let elems: Vec<Vec<i64>> = tuples(m.ell(), q).map(|c| element(&basis, &c, q, m.d * m.e)).collect();
    let mut s = BigRational::from_integer(0.into());
    for x in tuples(m.d, q) {
        let orbit: HashSet<Vec<i64>> = elems.iter().map(|a| act(&x, a, m.d, m.e, q)).collect();
        s += BigRational::new(1.into(), BigInt::from(orbit.len()));
    }
    s
}

/// Rank over the prime field `F_q`.
pub fn rank_mod(rows: &[Vec<i64>], q: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(q)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = (1..q).find(|&t| t * m[rank][c] % q == 1).unwrap();
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * inv % q;
                for k in 0..cols {
                    m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(q);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub mod props {
    //! Structural identities for ask coefficients. Each returns a description
    //! of the first violation.

    use askzeta::ask::{ask_mod_composite, ask_series, EngineConfig, Method};
    use askzeta::matmodule::{add_zero_col, add_zero_row, direct_sum, generic_element_rank, generic_orbit_rank, rescale, transpose, MatrixModule};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    pub type Check = Result<(), String>;

    fn cfg() -> EngineConfig {
        EngineConfig { budget: 20_000_000, parallel: true }
    }

    fn series(m: &MatrixModule, p: u64, n: u32) -> Vec<BigRational> {
        ask_series(m, p, n, Method::Auto, &cfg()).expect("within budget")
    }

    fn pw(p: u64, e: i64) -> BigRational {
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(BigInt::from(p), e as usize))
        } else {
            BigRational::new(1.into(), num_traits::pow(BigInt::from(p), (-e) as usize))
        }
    }

    fn fail(what: &str, m: &MatrixModule, p: u64, n: usize) -> Check {
        Err(format!("{what} fails for {:?} (d={}, e={}) at p={p}, n={n}", m.label, m.d, m.e))
    }

    pub fn direct_sum_rule(a: &MatrixModule, b: &MatrixModule, p: u64, n: u32) -> Check {
        let (sa, sb, s) = (series(a, p, n), series(b, p, n), series(&direct_sum(a, b), p, n));
        for k in 0..=n as usize {
            if s[k] != &sa[k] * &sb[k] {
                return fail("direct sum", a, p, k);
            }
        }
        Ok(())
    }

    pub fn zero_row_rule(m: &MatrixModule, p: u64, n: u32) -> Check {
        let s = series(m, p, n);
        for pos in [0, m.d] {
            let z = add_zero_row(m, pos).unwrap();
            let sz = series(&z, p, n);
            for k in 0..=n as usize {
                if sz[k] != &s[k] * pw(p, k as i64) {
                    return fail("zero row", m, p, k);
                }
            }
            if generic_element_rank(&z).unwrap() != generic_element_rank(m).unwrap() || generic_orbit_rank(&z).unwrap() != generic_orbit_rank(m).unwrap() {
                return Err(format!("zero row changes a generic rank of {:?}", m.label));
            }
        }
        let c = add_zero_col(m, m.e).unwrap();
        if series(&c, p, n) != s {
            return fail("zero column", m, p, n as usize);
        }
        if generic_element_rank(&c).unwrap() != generic_element_rank(m).unwrap() {
            return Err(format!("zero column changes grk of {:?}", m.label));
        }
        Ok(())
    }

    pub fn transpose_rule(m: &MatrixModule, p: u64, n: u32) -> Check {
        let (s, st) = (series(m, p, n), series(&transpose(m), p, n));
        for k in 0..=n as usize {
            if st[k] != &s[k] * pw(p, k as i64 * (m.e as i64 - m.d as i64)) {
                return fail("transpose", m, p, k);
            }
        }
        Ok(())
    }

    pub fn rescale_rule(m: &MatrixModule, p: u64, k: u32, n: u32) -> Check {
        let (s, sr) = (series(m, p, n), series(&rescale(m, k, p), p, n));
        for j in k..=n {
            if sr[j as usize] != &s[(j - k) as usize] * pw(p, (m.d as u32 * k) as i64) {
                return fail("rescaling", m, p, j as usize);
            }
        }
        Ok(())
    }

    pub fn composite_rule(m: &MatrixModule, n1: u64, n2: u64) -> Check {
        let c = cfg();
        let whole = ask_mod_composite(m, n1 * n2, &c).unwrap();
        let prod = ask_mod_composite(m, n1, &c).unwrap() * ask_mod_composite(m, n2, &c).unwrap();
        if whole != prod {
            return Err(format!("composite multiplicativity fails for {:?} at {n1}*{n2}", m.label));
        }
        Ok(())
    }

    pub fn prime_power_composite_rule(m: &MatrixModule, p: u64, n: u32) -> Check {
        if ask_mod_composite(m, p.pow(n), &cfg()).unwrap() != series(m, p, n)[n as usize] {
            return fail("composite at a prime power", m, p, n as usize);
        }
        Ok(())
    }

    pub fn bounds_rule(m: &MatrixModule, p: u64, n: u32) -> Check {
        let s = series(m, p, n);
        let gor = generic_orbit_rank(m).unwrap() as i64;
        let grk = generic_element_rank(m).unwrap();
        if gor > m.e as i64 || grk > m.d.min(m.e) {
            return Err(format!("rank bounds fail for {:?}", m.label));
        }
        for k in 0..=n as usize {
            let lo = pw(p, (k as i64 * (m.d as i64 - gor)).max(0));
            let hi = pw(p, k as i64 * m.d as i64);
            if s[k] < lo || s[k] > hi {
                return fail("coefficient bounds", m, p, k);
            }
        }
        Ok(())
    }

    pub fn engine_rule(m: &MatrixModule, p: u64, n: u32) -> Check {
        let a = ask_series(m, p, n, Method::Average, &cfg()).unwrap();
        let o = ask_series(m, p, n, Method::Orbit, &cfg()).unwrap();
        if a != o {
            return fail("engine agreement", m, p, n as usize);
        }
        Ok(())
    }

    pub fn integrality_rule(m: &MatrixModule, p: u64, n: u32) -> Check {
        for (k, c) in series(m, p, n).iter().enumerate() {
            if !c.is_integer() {
                return fail("integrality", m, p, k);
            }
        }
        Ok(())
    }
}
