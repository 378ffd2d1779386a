//! Exact average kernel sizes `ask(M_n)` by enumeration.
//!
//! Both sums are organised by `p`-adic valuation. A coefficient tuple (or
//! vector) of valuation `k` is `p^k` times a primitive one, and its kernel (or
//! orbit) size is determined by the primitive part modulo `p^{n-k}`. Primitive
//! tuples are further grouped by multiplication with units, which changes
//! neither kernels nor orbit sizes. So each level `m` only enumerates one
//! representative per unit class of primitive tuples modulo `p^m`: the first
//! unit coordinate is normalised to 1.

use crate::error::{invalid, AskError, Result};
use crate::linalg::invariant_factors;
use crate::matmodule::MatrixModule;
use crate::ring_zpn::{ModPn, RingSpec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Whichever of the two sums enumerates fewer points.
    Auto,
    /// Average of kernel sizes over coefficient tuples.
    Average,
    /// Sum of inverse orbit sizes over vectors.
    Orbit,
}

impl std::str::FromStr for Method {
    type Err = AskError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "average" => Ok(Method::Average),
            "orbit" => Ok(Method::Orbit),
            _ => invalid(format!("unknown method {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EngineConfig {
    /// Maximum number of enumerated points over all levels.
    pub budget: u128,
    pub parallel: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { budget: DEFAULT_BUDGET, parallel: true }
    }
}

fn pow_u128(p: u64, e: u32) -> Option<u128> {
    (p as u128).checked_pow(e)
}

/// Number of unit classes of primitive vectors of length `len` modulo `p^m`.
pub fn class_count(len: usize, p: u64, m: u32) -> Option<u128> {
    let mut total: u128 = 0;
    for j in 0..len {
        let a = pow_u128(p, (m - 1).checked_mul(j as u32)?)?;
        let b = pow_u128(p, m.checked_mul((len - 1 - j) as u32)?)?;
        total = total.checked_add(a.checked_mul(b)?)?;
    }
    Some(total)
}

/// Points enumerated by `method` for levels `1..=n_max`.
pub fn enumeration_cost(m: &MatrixModule, p: u64, n_max: u32, method: Method) -> Option<u128> {
    let len = match resolve(m, method) {
        Method::Average => m.ell(),
        _ => m.d,
    };
    let mut total: u128 = 0;
    for lvl in 1..=n_max {
        total = total.checked_add(class_count(len, p, lvl)?)?;
    }
    Some(total)
}

fn resolve(m: &MatrixModule, method: Method) -> Method {
    match method {
        Method::Auto => {
            if m.ell() < m.d {
                Method::Average
            } else {
                Method::Orbit
            }
        }
        x => x,
    }
}

/// Calls `f` on every normalised primitive vector of the given level,
/// returning the merged histogram of the values `f` reports.
fn sweep<F>(len: usize, ctx: ModPn, hist_len: usize, parallel: bool, f: F) -> Vec<u64>
where
    F: Fn(&[u64], &mut Vec<u64>) -> usize + Sync,
{
    const CHUNK: u128 = 4096;
    let p = ctx.p;
    let m = ctx.m;
    let mut hist = vec![0u64; hist_len];
    for j in 0..len {
        let radices: Vec<u64> = (0..len)
            .map(|i| {
                if i < j {
                    p.pow(m - 1)
                } else if i == j {
                    1
                } else {
                    ctx.modulus
                }
            })
            .collect();
        let count: u128 = radices.iter().map(|&r| r as u128).product();
        let chunks = count.div_ceil(CHUNK);
        let work = |c: u128| -> Vec<u64> {
            let mut h = vec![0u64; hist_len];
            let start = c * CHUNK;
            let end = (start + CHUNK).min(count);
            let mut digits = vec![0u64; len];
            let mut rest = start;
            for i in (0..len).rev() {
                digits[i] = (rest % radices[i] as u128) as u64;
                rest /= radices[i] as u128;
            }
            let mut v = vec![0u64; len];
            let mut scratch = Vec::new();
            for _ in start..end {
                for i in 0..len {
                    v[i] = if i < j {
                        digits[i] * p
                    } else if i == j {
                        1
                    } else {
                        digits[i]
                    };
                }
                h[f(&v, &mut scratch)] += 1;
                for i in (0..len).rev() {
                    digits[i] += 1;
                    if digits[i] < radices[i] {
                        break;
                    }
                    digits[i] = 0;
                }
            }
            h
        };
        let parts: Vec<Vec<u64>> = if parallel && chunks > 1 {
            (0..chunks).into_par_iter().map(work).collect()
        } else {
            (0..chunks).map(work).collect()
        };
        for part in parts {
            for (a, b) in hist.iter_mut().zip(part) {
                *a += b;
            }
        }
    }
    hist
}

struct Reduced {
    d: usize,
    e: usize,
    basis: Vec<Vec<u64>>,
}

impl Reduced {
    fn new(m: &MatrixModule, ctx: &ModPn) -> Self {
        Reduced { d: m.d, e: m.e, basis: m.basis.iter().map(|a| a.to_mod(ctx.modulus)).collect() }
    }
}

/// Histogram of kernel exponents over normalised primitive tuples at level `m`.
fn kernel_hist(m: &MatrixModule, p: u64, lvl: u32, parallel: bool) -> Result<Vec<u64>> {
    let ctx = ModPn::new(p, lvl)?;
    let r = Reduced::new(m, &ctx);
    let (d, e) = (r.d, r.e);
    Ok(sweep(m.ell(), ctx, d * lvl as usize + 1, parallel, |c, buf| {
        buf.clear();
        buf.resize(d * e, 0);
        for (ci, a) in c.iter().zip(&r.basis) {
            if *ci == 0 {
                continue;
            }
            for (t, x) in buf.iter_mut().zip(a) {
                if *x != 0 {
                    *t = ctx.add(*t, ctx.mul(*ci, *x));
                }
            }
        }
        ctx.kernel_exp(buf, d, e) as usize
    }))
}

/// Histogram of orbit-size exponents over normalised primitive vectors at level `m`.
fn orbit_hist(m: &MatrixModule, p: u64, lvl: u32, parallel: bool) -> Result<Vec<u64>> {
    let ctx = ModPn::new(p, lvl)?;
    let r = Reduced::new(m, &ctx);
    let (d, e, ell) = (r.d, r.e, m.ell());
    Ok(sweep(d, ctx, e * lvl as usize + 1, parallel, |x, buf| {
        buf.clear();
        buf.resize(ell * e, 0);
        for (i, a) in r.basis.iter().enumerate() {
            for (k, xk) in x.iter().enumerate() {
                if *xk == 0 {
                    continue;
                }
                for j in 0..e {
                    let v = a[k * e + j];
                    if v != 0 {
                        buf[i * e + j] = ctx.add(buf[i * e + j], ctx.mul(*xk, v));
                    }
                }
            }
        }
        ctx.image_exp(buf, ell, e) as usize
    }))
}

fn pbig(p: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

fn check_budget(m: &MatrixModule, p: u64, n_max: u32, method: Method, cfg: &EngineConfig) -> Result<()> {
    let needed = enumeration_cost(m, p, n_max, method).unwrap_or(u128::MAX);
    if needed > cfg.budget {
        return Err(AskError::BudgetExceeded { needed, budget: cfg.budget });
    }
    if p.checked_pow(n_max).is_none_or(|x| x >= 1 << 62) {
        return invalid(format!("{p}^{n_max} exceeds machine arithmetic"));
    }
    Ok(())
}

/// `ask(M_n)` for `n = 0..=n_max` at the prime `p`.
pub fn ask_series(m: &MatrixModule, p: u64, n_max: u32, method: Method, cfg: &EngineConfig) -> Result<Vec<BigRational>> {
    RingSpec::new(p, n_max)?;
    let method = resolve(m, method);
    check_budget(m, p, n_max, method, cfg)?;
    let units = |lvl: u32| BigInt::from(p - 1) * pbig(p, lvl as u64 - 1);
    let mut out = vec![BigRational::one()];
    match method {
        Method::Average => {
            // prim[m] = sum over primitive tuples mod p^m of |ker|
            let mut prim = vec![BigInt::zero()];
            for lvl in 1..=n_max {
                let h = kernel_hist(m, p, lvl, cfg.parallel)?;
                let s: BigInt = h.iter().enumerate().map(|(k, &c)| BigInt::from(c) * pbig(p, k as u64)).sum();
                prim.push(s * units(lvl));
            }
            let d = m.d as u64;
            for n in 1..=n_max {
                let mut total = pbig(p, d * n as u64);
                for k in 0..n {
                    total += pbig(p, d * k as u64) * &prim[(n - k) as usize];
                }
                out.push(BigRational::new(total, pbig(p, m.ell() as u64 * n as u64)));
            }
        }
        _ => {
            let mut prim = vec![BigRational::zero()];
            for lvl in 1..=n_max {
                let h = orbit_hist(m, p, lvl, cfg.parallel)?;
                let top = (h.len() - 1) as u64;
                let s: BigInt = h.iter().enumerate().map(|(k, &c)| BigInt::from(c) * pbig(p, top - k as u64)).sum();
                prim.push(BigRational::new(s * units(lvl), pbig(p, top)));
            }
            for n in 1..=n_max {
                let mut total = BigRational::one();
                for k in 0..n {
                    total += &prim[(n - k) as usize];
                }
                out.push(total);
            }
        }
    }
    Ok(out)
}

/// Average of `|ker a|` over all `a ∈ M_n`.
pub fn ask_average(m: &MatrixModule, ring: RingSpec, cfg: &EngineConfig) -> Result<BigRational> {
    Ok(ask_series(m, ring.p, ring.n, Method::Average, cfg)?.pop().expect("nonempty"))
}

/// `sum over x ∈ V_n of 1/|x M_n|`.
pub fn ask_orbit(m: &MatrixModule, ring: RingSpec, cfg: &EngineConfig) -> Result<BigRational> {
    Ok(ask_series(m, ring.p, ring.n, Method::Orbit, cfg)?.pop().expect("nonempty"))
}

/// Average kernel size over the image of `M` in `Mat_{d×e}(Z/N)`, by direct
/// enumeration of `(Z/N)^ℓ` and Smith normal forms over `Z`.
pub fn ask_mod_composite(m: &MatrixModule, modulus: u64, cfg: &EngineConfig) -> Result<BigRational> {
    if modulus == 0 {
        return invalid("modulus must be positive");
    }
    let ell = m.ell();
    let total = (modulus as u128).checked_pow(ell as u32).unwrap_or(u128::MAX);
    if total > cfg.budget {
        return Err(AskError::BudgetExceeded { needed: total, budget: cfg.budget });
    }
    let nb = BigInt::from(modulus);
    let d = m.d;
    let sum_for = |idx: u128| -> BigInt {
        let mut rest = idx;
        let coeffs: Vec<BigInt> = (0..ell)
            .map(|_| {
                let c = (rest % modulus as u128) as u64;
                rest /= modulus as u128;
                BigInt::from(c)
            })
            .collect();
        let a = m.element(&coeffs);
        let rows: Vec<Vec<BigInt>> = (0..a.rows).map(|i| a.row(i).to_vec()).collect();
        let inv = invariant_factors(&rows);
        let mut k = num_traits::pow(nb.clone(), d - inv.len());
        for s in &inv {
            k *= s.gcd(&nb);
        }
        k
    };
    let s: BigInt = if cfg.parallel {
        (0..total.to_u64().expect("within budget")).into_par_iter().map(|i| sum_for(i as u128)).sum()
    } else {
        (0..total).map(sum_for).sum()
    };
    Ok(BigRational::new(s, num_traits::pow(nb, ell)))
}

/// Number of `d×e` matrices of rank `r` over `F_q`.
pub fn rank_distribution(d: u32, e: u32, r: u32, q: u64) -> Result<BigInt> {
    if q < 2 || crate::arith::factor_u64(q).len() != 1 {
        return invalid(format!("{q} is not a prime power"));
    }
    if r > d.min(e) {
        return Ok(BigInt::zero());
    }
    let qb = |k: u32| pbig(q, k as u64);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r {
        num *= (qb(e) - qb(i)) * (qb(d - i) - 1);
        den *= qb(i + 1) - 1;
    }
    let (quot, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(AskError::Internal("rank count is not an integer".into()));
    }
    Ok(quot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_module;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn small_averages() {
        let m22 = catalog_module("mat(2,2)").unwrap();
        let m11 = catalog_module("mat(1,1)").unwrap();
        let z = MatrixModule::zero(2, 2);
        assert_eq!(ask_average(&m22, RingSpec::new(3, 1).unwrap(), &cfg()).unwrap(), q(17, 9));
        assert_eq!(ask_average(&m11, RingSpec::new(3, 2).unwrap(), &cfg()).unwrap(), q(7, 3));
        assert_eq!(ask_average(&z, RingSpec::new(5, 1).unwrap(), &cfg()).unwrap(), q(25, 1));
        assert_eq!(ask_orbit(&m22, RingSpec::new(3, 1).unwrap(), &cfg()).unwrap(), q(17, 9));
        assert_eq!(ask_orbit(&z, RingSpec::new(5, 1).unwrap(), &cfg()).unwrap(), q(25, 1));
    }

    #[test]
    fn orbit_examples() {
        let so3 = catalog_module("so(3)").unwrap();
        assert_eq!(ask_orbit(&so3, RingSpec::new(5, 1).unwrap(), &cfg()).unwrap(), q(149, 25));
        let n2 = catalog_module("n(2)").unwrap();
        assert_eq!(ask_orbit(&n2, RingSpec::new(3, 1).unwrap(), &cfg()).unwrap(), q(5, 1));
    }

    #[test]
    fn series() {
        let m11 = catalog_module("mat(1,1)").unwrap();
        let s = ask_series(&m11, 3, 3, Method::Auto, &cfg()).unwrap();
        assert_eq!(s, vec![q(1, 1), q(5, 3), q(7, 3), q(3, 1)]);
        let n3 = catalog_module("n(3)").unwrap();
        let s = ask_series(&n3, 3, 2, Method::Auto, &cfg()).unwrap();
        assert_eq!(s, vec![q(1, 1), q(7, 1), q(37, 1)]);
    }

    #[test]
    fn budget_is_enforced() {
        let m = catalog_module("mat(3,3)").unwrap();
        let tight = EngineConfig { budget: 10, parallel: false };
        assert!(matches!(
            ask_series(&m, 3, 2, Method::Average, &tight),
            Err(AskError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn composite_moduli() {
        let m11 = catalog_module("mat(1,1)").unwrap();
        assert_eq!(ask_mod_composite(&m11, 6, &cfg()).unwrap(), q(5, 2));
        assert_eq!(ask_mod_composite(&m11, 2, &cfg()).unwrap(), q(3, 2));
        assert_eq!(ask_mod_composite(&m11, 3, &cfg()).unwrap(), q(5, 3));
        assert_eq!(ask_mod_composite(&m11, 1, &cfg()).unwrap(), q(1, 1));
    }

    #[test]
    fn rank_counts() {
        assert_eq!(rank_distribution(2, 2, 2, 3).unwrap(), BigInt::from(48));
        assert_eq!(rank_distribution(2, 2, 0, 3).unwrap(), BigInt::from(1));
        let total: BigInt = (0..=2).map(|r| rank_distribution(2, 2, r, 3).unwrap()).sum();
        assert_eq!(total, BigInt::from(81));
    }
}
