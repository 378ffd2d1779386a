//! Finite-level group computations over `Z/p^n`: orbit counts of linear
//! groups on `(Z/p^n)^d`, conjugacy class counts of unipotent groups
//! `exp(g)`, and the comparison of both with ask coefficients.

use crate::arith::{bigint_mod_u64, inv_mod, primitive_root_mod_prime_power};
use crate::ask::{ask_series, EngineConfig, Method};
use crate::error::{invalid, AskError, Result};
use crate::linalg::rank_mod_p;
use crate::matmodule::{ad_representation, structure_constants, MatrixModule};
use crate::poly::Poly;
use crate::ring_zpn::{IntMatrix, ModPn, RingSpec};
use crate::structural::non_isolated_primes;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupGenSet {
    pub d: usize,
    pub generators: Vec<IntMatrix>,
    pub label: Option<String>,
}

impl GroupGenSet {
    pub fn new(d: usize, generators: Vec<IntMatrix>, label: Option<&str>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.rows != d || g.cols != d) {
            return invalid(format!("generator of shape {}x{} in a group of degree {d}", g.rows, g.cols));
        }
        Ok(GroupGenSet { d, generators, label: label.map(str::to_string) })
    }

    /// Every generator is invertible modulo `p`.
    pub fn check_invertible(&self, p: u64) -> Result<()> {
        for (i, g) in self.generators.iter().enumerate() {
            let rows: Vec<Vec<u64>> = (0..self.d).map(|r| g.row(r).iter().map(|x| bigint_mod_u64(x, p)).collect()).collect();
            if rank_mod_p(&rows, p) < self.d {
                return invalid(format!("generator {} is not invertible modulo {p}", i + 1));
            }
        }
        Ok(())
    }
}

/// A Lie algebra of nilpotent `d×d` matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpotentAlgebra {
    pub module: MatrixModule,
    /// Smallest `c` such that all products of `c + 1` basis elements vanish.
    pub class: usize,
}

fn int_pow(a: &IntMatrix, k: usize) -> IntMatrix {
    let mut r = IntMatrix::identity(a.rows);
    for _ in 0..k {
        r = r.mul(a);
    }
    r
}

impl NilpotentAlgebra {
    pub fn new(module: MatrixModule) -> Result<Self> {
        let d = module.d;
        if module.e != d {
            return invalid(format!("algebra must be square, got {}x{}", d, module.e));
        }
        structure_constants(&module)?;
        for (i, a) in module.basis.iter().enumerate() {
            if !int_pow(a, d).is_zero() {
                return Err(AskError::NotNilpotent(format!("basis element {} is not nilpotent", i + 1)));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let c: Vec<BigInt> = (0..module.ell()).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
            if !int_pow(&module.element(&c), d).is_zero() {
                return Err(AskError::NotNilpotent(format!("combination {c:?} is not nilpotent")));
            }
        }
        if !generic_nilpotent(&module) {
            return Err(AskError::NotNilpotent("the generic element is not nilpotent".into()));
        }
        // associative powers of the span until they vanish
        let mut class = 0;
        let mut cur = module.clone();
        while cur.ell() > 0 {
            class += 1;
            let prods: Vec<IntMatrix> = cur.basis.iter().flat_map(|x| module.basis.iter().map(move |a| x.mul(a))).collect();
            cur = MatrixModule::new(d, d, &prods, None)?;
        }
        Ok(NilpotentAlgebra { module, class })
    }

    pub fn d(&self) -> usize {
        self.module.d
    }
}

/// `N(X)^d = 0` for the generic element `N(X) = Σ X_i a_i`.
fn generic_nilpotent(m: &MatrixModule) -> bool {
    let d = m.d;
    let nv = m.ell();
    let n: Vec<Vec<Poly>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let coeffs: Vec<BigInt> = m.basis.iter().map(|a| a.get(i, j).clone()).collect();
                    Poly::linear(&coeffs)
                })
                .collect()
        })
        .collect();
    let mut pw = n.clone();
    for _ in 1..d {
        let mut next = vec![vec![Poly::zero(nv); d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut s = Poly::zero(nv);
                for k in 0..d {
                    if !pw[i][k].is_zero() && !n[k][j].is_zero() {
                        s = s.add(&pw[i][k].mul(&n[k][j]));
                    }
                }
                next[i][j] = s;
            }
        }
        pw = next;
    }
    d == 0 || pw.iter().flatten().all(Poly::is_zero)
}

fn mat_mul(r: &ModPn, a: &[u64], b: &[u64], d: usize) -> Vec<u64> {
    let mut out = vec![0u64; d * d];
    for i in 0..d {
        for k in 0..d {
            let x = a[i * d + k];
            if x == 0 {
                continue;
            }
            for j in 0..d {
                out[i * d + j] = r.add(out[i * d + j], r.mul(x, b[k * d + j]));
            }
        }
    }
    out
}

fn identity(d: usize) -> Vec<u64> {
    let mut v = vec![0u64; d * d];
    for i in 0..d {
        v[i * d + i] = 1;
    }
    v
}

fn from_residues(d: usize, v: &[u64]) -> IntMatrix {
    IntMatrix { rows: d, cols: d, data: v.iter().map(|&x| BigInt::from(x)).collect() }
}

fn require_p_at_least_d(p: u64, d: usize) -> Result<()> {
    if (p as u128) < d as u128 {
        return invalid(format!("exp undefined: factorial denominators not invertible (p = {p} < d = {d})"));
    }
    Ok(())
}

/// `exp(a) = Σ_{i<d} a^i / i!` modulo `p^n`, entries in `[0, p^n)`.
pub fn exp_nilpotent(a: &IntMatrix, ring: RingSpec) -> Result<IntMatrix> {
    let d = a.rows;
    if a.cols != d {
        return invalid("exp needs a square matrix");
    }
    if ring.n == 0 {
        return invalid("exp needs n >= 1");
    }
    require_p_at_least_d(ring.p, d)?;
    if !int_pow(a, d).is_zero() {
        return Err(AskError::NotNilpotent("a^d != 0".into()));
    }
    let r = ModPn::new(ring.p, ring.n)?;
    Ok(from_residues(d, &exp_mod(&r, &a.to_mod(r.modulus), d)))
}

fn exp_mod(r: &ModPn, a: &[u64], d: usize) -> Vec<u64> {
    let mut out = identity(d);
    let mut term = identity(d);
    for i in 1..d {
        let inv_i = inv_mod(i as u64 % r.modulus, r.modulus).expect("i < p is a unit");
        term = mat_mul(r, &term, a, d).into_iter().map(|x| r.mul(x, inv_i)).collect();
        for (o, t) in out.iter_mut().zip(&term) {
            *o = r.add(*o, *t);
        }
    }
    out
}

/// Inverse of [`exp_nilpotent`]: `Σ_{i<d} (-1)^{i+1} (u - 1)^i / i` modulo `p^n`.
pub fn log_unipotent(u: &IntMatrix, ring: RingSpec) -> Result<IntMatrix> {
    let d = u.rows;
    if u.cols != d {
        return invalid("log needs a square matrix");
    }
    if ring.n == 0 {
        return invalid("log needs n >= 1");
    }
    require_p_at_least_d(ring.p, d)?;
    let r = ModPn::new(ring.p, ring.n)?;
    let mut n = u.to_mod(r.modulus);
    for i in 0..d {
        n[i * d + i] = r.sub(n[i * d + i], 1);
    }
    let mut pw = identity(d);
    for _ in 0..d {
        pw = mat_mul(&r, &pw, &n, d);
    }
    if pw.iter().any(|&x| x != 0) {
        return Err(AskError::NotNilpotent("u - 1 is not nilpotent modulo p^n".into()));
    }
    let mut out = vec![0u64; d * d];
    let mut term = identity(d);
    for i in 1..d {
        term = mat_mul(&r, &term, &n, d);
        let c = inv_mod(i as u64, r.modulus).expect("i < p is a unit");
        for (o, t) in out.iter_mut().zip(&term) {
            let v = r.mul(*t, c);
            *o = if i % 2 == 1 { r.add(*o, v) } else { r.sub(*o, v) };
        }
    }
    Ok(from_residues(d, &out))
}

fn check_points(p: u64, exp: u64, cfg: &EngineConfig) -> Result<u128> {
    let needed = (p as u128).checked_pow(exp as u32).filter(|_| exp <= u32::MAX as u64).unwrap_or(u128::MAX);
    if needed > cfg.budget {
        return Err(AskError::BudgetExceeded { needed, budget: cfg.budget });
    }
    Ok(needed)
}

/// Number of orbits of the generated group on `(Z/p^n)^d`, acting on row
/// vectors from the right.
fn orbit_count(r: &ModPn, gens: &[Vec<u64>], d: usize) -> u64 {
    let q = r.modulus;
    let total = q.pow(d as u32) as usize;
    let mut seen = vec![false; total];
    let decode = |mut idx: usize| -> Vec<u64> {
        (0..d)
            .map(|_| {
                let v = (idx as u64) % q;
                idx /= q as usize;
                v
            })
            .collect()
    };
    let encode = |x: &[u64]| -> usize { x.iter().rev().fold(0usize, |acc, &v| acc * q as usize + v as usize) };
    let mut orbits = 0u64;
    let mut stack = Vec::new();
    for start in 0..total {
        if seen[start] {
            continue;
        }
        orbits += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let x = decode(idx);
            for g in gens {
                let y: Vec<u64> = (0..d)
                    .map(|j| (0..d).fold(0u64, |acc, i| r.add(acc, r.mul(x[i], g[i * d + j]))))
                    .collect();
                let k = encode(&y);
                if !seen[k] {
                    seen[k] = true;
                    stack.push(k);
                }
            }
        }
    }
    orbits
}

/// `|(Z/p^n)^d / G_n|` for `n = 0..=n_max`.
pub fn oc_coefficients(g: &GroupGenSet, p: u64, n_max: u32, cfg: &EngineConfig) -> Result<Vec<BigInt>> {
    RingSpec::new(p, n_max)?;
    check_points(p, g.d as u64 * n_max as u64, cfg)?;
    g.check_invertible(p)?;
    let mut out = vec![BigInt::from(1)];
    for n in 1..=n_max {
        let r = ModPn::new(p, n)?;
        let gens: Vec<Vec<u64>> = g.generators.iter().map(|a| a.to_mod(r.modulus)).collect();
        out.push(BigInt::from(orbit_count(&r, &gens, g.d)));
    }
    Ok(out)
}

fn closure(r: &ModPn, gens: &[Vec<u64>], d: usize, cfg: &EngineConfig) -> Result<(Vec<Vec<u64>>, HashMap<Vec<u64>, usize>)> {
    let mut elems = vec![identity(d)];
    let mut index = HashMap::new();
    index.insert(identity(d), 0);
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head].clone();
        head += 1;
        for g in gens {
            let y = mat_mul(r, &x, g, d);
            if !index.contains_key(&y) {
                if elems.len() as u128 >= cfg.budget {
                    return Err(AskError::BudgetExceeded { needed: elems.len() as u128 + 1, budget: cfg.budget });
                }
                index.insert(y.clone(), elems.len());
                elems.push(y);
            }
        }
    }
    Ok((elems, index))
}

/// Order of the group generated by `exp(a_i)` modulo `p^n`.
pub fn exp_group_order(l: &NilpotentAlgebra, p: u64, n: u32, cfg: &EngineConfig) -> Result<usize> {
    require_p_at_least_d(p, l.d())?;
    if n == 0 {
        return Ok(1);
    }
    let r = ModPn::new(p, n)?;
    let gens: Vec<Vec<u64>> = l.module.basis.iter().map(|a| exp_mod(&r, &a.to_mod(r.modulus), l.d())).collect();
    Ok(closure(&r, &gens, l.d(), cfg)?.0.len())
}

/// Number of conjugacy classes `k(G_n)` of `G_n = <exp(a_i) mod p^n>` for
/// `n = 0..=n_max`.
pub fn cc_coefficients_direct(l: &NilpotentAlgebra, p: u64, n_max: u32, cfg: &EngineConfig) -> Result<Vec<BigInt>> {
    RingSpec::new(p, n_max)?;
    let d = l.d();
    require_p_at_least_d(p, d)?;
    check_points(p, l.module.ell() as u64 * n_max as u64, cfg)?;
    let mut out = vec![BigInt::from(1)];
    for n in 1..=n_max {
        let r = ModPn::new(p, n)?;
        let mut gens = Vec::new();
        let mut invs = Vec::new();
        for a in &l.module.basis {
            let am = a.to_mod(r.modulus);
            let neg: Vec<u64> = am.iter().map(|&x| r.sub(0, x)).collect();
            gens.push(exp_mod(&r, &am, d));
            invs.push(exp_mod(&r, &neg, d));
        }
        let (elems, index) = closure(&r, &gens, d, cfg)?;
        let mut seen = vec![false; elems.len()];
        let mut classes = 0u64;
        let mut stack = Vec::new();
        for start in 0..elems.len() {
            if seen[start] {
                continue;
            }
            classes += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(i) = stack.pop() {
                for (g, gi) in gens.iter().zip(&invs) {
                    let c = mat_mul(&r, &mat_mul(&r, gi, &elems[i], d), g, d);
                    let k = index[&c];
                    if !seen[k] {
                        seen[k] = true;
                        stack.push(k);
                    }
                }
            }
        }
        out.push(BigInt::from(classes));
    }
    Ok(out)
}

/// Ask coefficients together with warnings about violated hypotheses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeResult {
    pub coefficients: Vec<BigRational>,
    pub warnings: Vec<String>,
}

fn hypothesis_warnings(l: &NilpotentAlgebra, p: u64) -> Vec<String> {
    if non_isolated_primes(&l.module).contains(&BigUint::from(p)) {
        vec![format!("Theorem hypothesis violated: the algebra is not isolated at p = {p}")]
    } else {
        Vec::new()
    }
}

/// Conjugacy class counts through the ask coefficients of `ad(L)`.
pub fn cc_via_ask(l: &NilpotentAlgebra, p: u64, n_max: u32, cfg: &EngineConfig) -> Result<BridgeResult> {
    require_p_at_least_d(p, l.d())?;
    let ad = ad_representation(&l.module)?;
    Ok(BridgeResult { coefficients: ask_series(&ad, p, n_max, Method::Auto, cfg)?, warnings: hypothesis_warnings(l, p) })
}

/// Orbit counts of `exp(L)` through the ask coefficients of `L`.
pub fn oc_via_ask(l: &NilpotentAlgebra, p: u64, n_max: u32, cfg: &EngineConfig) -> Result<BridgeResult> {
    require_p_at_least_d(p, l.d())?;
    Ok(BridgeResult { coefficients: ask_series(&l.module, p, n_max, Method::Auto, cfg)?, warnings: hypothesis_warnings(l, p) })
}

/// `{exp(a_i)}` reduced modulo `p^n_max`; valid for every level `n <= n_max`.
pub fn exp_generators(l: &NilpotentAlgebra, p: u64, n_max: u32) -> Result<GroupGenSet> {
    let ring = RingSpec::new(p, n_max.max(1))?;
    let gens = l.module.basis.iter().map(|a| exp_nilpotent(a, ring)).collect::<Result<Vec<_>>>()?;
    let label = l.module.label.as_ref().map(|s| format!("exp({s})"));
    GroupGenSet::new(l.d(), gens, label.as_deref())
}

/// Block matrices `[[I_d, a], [0, I_e]]` for the basis elements `a`.
pub fn semidirect_embed(m: &MatrixModule) -> GroupGenSet {
    let n = m.d + m.e;
    let gens = m
        .basis
        .iter()
        .map(|a| {
            let mut g = IntMatrix::identity(n);
            for i in 0..m.d {
                for j in 0..m.e {
                    g.set(i, m.d + j, a.get(i, j).clone());
                }
            }
            g
        })
        .collect();
    let label = m.label.as_ref().map(|s| format!("{s}*"));
    GroupGenSet { d: n, generators: gens, label }
}

/// Generators of `GL_d(Z/p^n)` for all `n <= n_max`: elementary
/// transvections and diagonal matrices whose entries generate the units.
pub fn gl_generators(d: usize, p: u64, n_max: u32) -> Result<GroupGenSet> {
    RingSpec::new(p, 1)?;
    let mut gens = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                gens.push(IntMatrix::identity(d).add(&IntMatrix::unit(d, d, i, j, 1)));
            }
        }
    }
    let units: Vec<u64> = match primitive_root_mod_prime_power(p, n_max.max(1)) {
        Some(g) => vec![g],
        // (Z/2^n)^x = <-1> x <5>
        None => vec![(1u64 << n_max) - 1, 5],
    };
    if d > 0 {
        for u in units {
            let mut g = IntMatrix::identity(d);
            g.set(0, 0, BigInt::from(u));
            gens.push(g);
        }
    }
    GroupGenSet::new(d, gens, Some(&format!("GL({d})")))
}

/// `{±1}` acting on `Z^d`.
pub fn negation_group(d: usize) -> GroupGenSet {
    GroupGenSet { d, generators: vec![IntMatrix::identity(d).scale(&BigInt::from(-1))], label: Some("{-1}".into()) }
}

/// The coordinate swap on `Z^2`.
pub fn swap_group() -> GroupGenSet {
    GroupGenSet { d: 2, generators: vec![IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])], label: Some("swap".into()) }
}
