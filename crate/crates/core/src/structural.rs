//! Certificates for orbit-maximality and kernel-minimality, constant-rank
//! checks over finite fields, and the resulting closed-form templates.
//!
//! Both certificates test whether every pure power `X_j^i` lies in the
//! `Q`-span of the `i×i` minors of a matrix of linear forms, for
//! `i = 1..rank`. A rational point where the matrix drops rank refutes the
//! criterion.

use crate::arith::{bigint_mod_u64, is_prime, prime_divisors};
use crate::closed_forms::constant_rank_form;
use crate::error::{invalid, AskError, Result};
use crate::linalg::{invariant_factors, rank_mod_p, rank_q, solve_combination};
use crate::matmodule::{generic_element, generic_element_rank, generic_orbit_rank, orbit_matrix, LinearFormMatrix, MatrixModule};
use crate::poly::{det, Poly};
use crate::ratfun::{parse_qt, QTRational};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Certified,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, Copy)]
pub struct CertOptions {
    pub minor_budget: u64,
    pub witness_trials: u32,
    pub seed: u64,
}

impl Default for CertOptions {
    fn default() -> Self {
        CertOptions { minor_budget: 1_000_000, witness_trials: 10_000, seed: 0 }
    }
}

/// Outcome of a graded minor-span test for one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub degree: usize,
    pub minors: usize,
    pub span_dim: usize,
    /// Variables `j` with `X_j^degree` in the span.
    pub powers_in_span: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub status: Status,
    /// Generic rank the test ran up to.
    pub rank: usize,
    pub degrees: Vec<DegreeRecord>,
    /// Primes dividing denominators of the span certificates; the result is
    /// not claimed at these primes.
    pub excluded_primes: Vec<BigUint>,
    /// Primes at which the module is not isolated (kernel-minimality only).
    pub non_isolated_primes: Vec<BigUint>,
    /// Rational point where the rank drops, when refuted.
    pub witness: Option<Vec<BigInt>>,
    pub note: Option<String>,
}

impl Certificate {
    pub fn certified(&self) -> bool {
        self.status == Status::Certified
    }

    /// Certified and valid at the prime `p`.
    pub fn valid_at(&self, p: u64) -> bool {
        let pb = BigUint::from(p);
        self.certified() && !self.excluded_primes.contains(&pb) && !self.non_isolated_primes.contains(&pb)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn n_choose(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r.min(u64::MAX as u128) as u64
}

/// Runs the graded minor-span test on `f` up to `rank`.
fn graded_span_test(f: &LinearFormMatrix, rank: usize, opts: &CertOptions) -> Result<(bool, Vec<DegreeRecord>, BTreeSet<BigUint>, Option<String>)> {
    let polys = f.to_poly();
    let nv = f.nvars;
    let mut records = Vec::new();
    let mut bad_primes = BTreeSet::new();
    for i in 1..=rank {
        let count = n_choose(f.rows, i).saturating_mul(n_choose(f.cols, i));
        if count > opts.minor_budget {
            return Ok((false, records, bad_primes, Some(format!("{count} minors of size {i} exceed the budget"))));
        }
        let mut minors: BTreeSet<Poly> = BTreeSet::new();
        for rs in subsets(f.rows, i) {
            for cs in subsets(f.cols, i) {
                let sub: Vec<Vec<Poly>> = rs.iter().map(|&r| cs.iter().map(|&c| polys[r][c].clone()).collect()).collect();
                let m = det(&sub, nv);
                if !m.is_zero() {
                    minors.insert(m.primitive());
                }
            }
        }
        // coordinates over the monomials that occur
        let mut index: BTreeMap<Vec<u16>, usize> = BTreeMap::new();
        for m in &minors {
            for e in m.terms.keys() {
                let len = index.len();
                index.entry(e.clone()).or_insert(len);
            }
        }
        let targets: Vec<Vec<u16>> = (0..nv)
            .map(|j| {
                let mut e = vec![0u16; nv];
                e[j] = i as u16;
                e
            })
            .collect();
        for t in &targets {
            let len = index.len();
            index.entry(t.clone()).or_insert(len);
        }
        let dim = index.len();
        let cols: Vec<Vec<BigInt>> = minors
            .iter()
            .map(|m| {
                let mut v = vec![BigInt::zero(); dim];
                for (e, c) in &m.terms {
                    v[index[e]] = c.clone();
                }
                v
            })
            .collect();
        let span_dim = rank_q(&cols);
        let mut in_span = Vec::new();
        for (j, t) in targets.iter().enumerate() {
            let mut v = vec![BigInt::zero(); dim];
            v[index[t]] = BigInt::one();
            if let Some(sol) = solve_combination(&cols, &v) {
                in_span.push(j);
                for s in sol {
                    if !s.denom().is_one() {
                        bad_primes.extend(prime_divisors(s.denom(), 1 << 20));
                    }
                }
            }
        }
        let all = in_span.len() == nv;
        records.push(DegreeRecord { degree: i, minors: minors.len(), span_dim, powers_in_span: in_span });
        if !all {
            return Ok((false, records, bad_primes, None));
        }
    }
    Ok((true, records, bad_primes, None))
}

/// Searches for a nonzero integer point where `f` has rank below `rank`.
fn find_rank_drop(f: &LinearFormMatrix, rank: usize, opts: &CertOptions) -> Option<Vec<BigInt>> {
    let nv = f.nvars;
    if nv == 0 {
        return None;
    }
    let drops = |x: &[i64]| -> bool {
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        rank_q(&f.eval(&xb)) < rank
    };
    let mut tried = 0u32;
    // small deterministic points first: entries in {-1, 0, 1}
    if nv <= 8 {
        let total = 3usize.pow(nv as u32);
        for idx in 1..total {
            let mut r = idx;
            let x: Vec<i64> = (0..nv)
                .map(|_| {
                    let d = (r % 3) as i64 - 1;
                    r /= 3;
                    d
                })
                .collect();
            if x.iter().all(|&v| v == 0) {
                continue;
            }
            tried += 1;
            if drops(&x) {
                return Some(x.into_iter().map(BigInt::from).collect());
            }
            if tried >= opts.witness_trials {
                return None;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    while tried < opts.witness_trials {
        tried += 1;
        let x: Vec<i64> = (0..nv).map(|_| if rng.gen_bool(0.4) { 0 } else { rng.gen_range(-3..=3) }).collect();
        if x.iter().all(|&v| v == 0) {
            continue;
        }
        if drops(&x) {
            return Some(x.into_iter().map(BigInt::from).collect());
        }
    }
    None
}

fn certify(f: &LinearFormMatrix, rank: usize, opts: &CertOptions, non_isolated: Vec<BigUint>) -> Result<Certificate> {
    if rank == 0 {
        return Ok(Certificate {
            status: Status::Certified,
            rank,
            degrees: Vec::new(),
            excluded_primes: Vec::new(),
            non_isolated_primes: non_isolated,
            witness: None,
            note: Some("rank zero".into()),
        });
    }
    let (ok, degrees, bad, note) = graded_span_test(f, rank, opts)?;
    if ok {
        return Ok(Certificate {
            status: Status::Certified,
            rank,
            degrees,
            excluded_primes: bad.into_iter().collect(),
            non_isolated_primes: non_isolated,
            witness: None,
            note,
        });
    }
    let witness = find_rank_drop(f, rank, opts);
    Ok(Certificate {
        status: if witness.is_some() { Status::Refuted } else { Status::Inconclusive },
        rank,
        degrees,
        excluded_primes: Vec::new(),
        non_isolated_primes: non_isolated,
        witness,
        note,
    })
}

/// Orbit-maximality test on `C(X)`.
pub fn check_o_maximal(m: &MatrixModule, opts: &CertOptions) -> Result<Certificate> {
    let gor = generic_orbit_rank(m)?;
    certify(&orbit_matrix(m), gor, opts, Vec::new())
}

/// Primes dividing a nontrivial elementary divisor of the basis matrix.
pub fn non_isolated_primes(m: &MatrixModule) -> Vec<BigUint> {
    let rows: Vec<Vec<BigInt>> = m.basis.iter().map(|a| a.data.clone()).collect();
    let mut out = BTreeSet::new();
    for f in invariant_factors(&rows) {
        if !f.is_one() {
            out.extend(prime_divisors(&f, 1 << 20));
        }
    }
    out.into_iter().collect()
}

/// Kernel-minimality test on the generic element.
pub fn check_k_minimal(m: &MatrixModule, opts: &CertOptions) -> Result<Certificate> {
    let grk = generic_element_rank(m)?;
    certify(&generic_element(m), grk, opts, non_isolated_primes(m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantRankResult {
    pub q: u64,
    pub constant: bool,
    pub rank: Option<usize>,
    pub ranks_seen: Vec<usize>,
    /// Every nonzero coefficient vector gives the zero matrix.
    pub no_nonzero_elements: bool,
}

/// Do all nonzero elements of the image of `M` in `Mat_{d×e}(F_q)` have the
/// same rank? `q` must be prime and `q^ℓ <= 10^7`.
pub fn check_constant_rank_fq(m: &MatrixModule, q: u64) -> Result<ConstantRankResult> {
    if !is_prime(q) {
        return invalid(format!("{q} is not prime"));
    }
    let ell = m.ell() as u32;
    if (q as u128).checked_pow(ell).is_none_or(|v| v > 10_000_000) {
        return Err(AskError::BudgetExceeded { needed: (q as u128).saturating_pow(ell), budget: 10_000_000 });
    }
    let basis: Vec<Vec<u64>> = m.basis.iter().map(|a| a.data.iter().map(|x| bigint_mod_u64(x, q)).collect()).collect();
    let mut seen = BTreeSet::new();
    let total = q.pow(ell);
    let mut c = vec![0u64; ell as usize];
    for idx in 1..total {
        let mut r = idx;
        for ci in c.iter_mut() {
            *ci = r % q;
            r /= q;
        }
        // one representative per line: first nonzero coordinate equal to 1
        if c.iter().find(|&&v| v != 0) != Some(&1) {
            continue;
        }
        let mut a = vec![0u64; m.d * m.e];
        for (ci, b) in c.iter().zip(&basis) {
            for (t, x) in a.iter_mut().zip(b) {
                *t = (*t + ci * x) % q;
            }
        }
        if a.iter().all(|&v| v == 0) {
            continue;
        }
        let rows: Vec<Vec<u64>> = a.chunks(m.e.max(1)).map(|r| r.to_vec()).collect();
        seen.insert(rank_mod_p(&rows, q));
    }
    let no_nonzero = seen.is_empty();
    let ranks_seen: Vec<usize> = seen.into_iter().collect();
    let constant = ranks_seen.len() <= 1;
    let rank = if no_nonzero { Some(0) } else if constant { Some(ranks_seen[0]) } else { None };
    Ok(ConstantRankResult { q, constant, rank, ranks_seen, no_nonzero_elements: no_nonzero })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Template {
    /// `Z_M = Z_{Mat_{d×gor}}`.
    OMaximal { d: usize, gor: usize },
    /// Constant-rank form with `ℓ` generators and rank `r`.
    ConstantRank { d: usize, ell: usize, r: usize },
}

impl Template {
    pub fn formula(&self) -> QTRational {
        match *self {
            Template::OMaximal { d, gor } => {
                if gor == 0 {
                    return constant_rank_form(d, 0, 0);
                }
                let s = format!("(1 - q^{}*T)/((1 - T)*(1 - q^{}*T))", -(gor as i64), d as i64 - gor as i64);
                parse_qt(&s).expect("template parses")
            }
            Template::ConstantRank { d, ell, r } => constant_rank_form(d, ell, r),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Template::OMaximal { d, gor } => format!("mat({d},{gor})"),
            Template::ConstantRank { d, ell, r } => format!("constant_rank({d},{ell},{r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub d: usize,
    pub e: usize,
    pub ell: usize,
    pub grk: usize,
    pub gor: usize,
    pub o_maximal: Certificate,
    pub k_minimal: Certificate,
    pub constant_orbit_dim: Status,
    pub constant_rank: Option<ConstantRankResult>,
    pub template: Option<Template>,
}

/// Full structural report. `rank_prime` optionally runs the constant-rank
/// check over `F_p`.
pub fn structure_report(m: &MatrixModule, opts: &CertOptions, rank_prime: Option<u64>) -> Result<StructureReport> {
    let grk = generic_element_rank(m)?;
    let gor = generic_orbit_rank(m)?;
    let o_maximal = check_o_maximal(m, opts)?;
    let k_minimal = check_k_minimal(m, opts)?;
    let constant_rank = match rank_prime {
        Some(p) => Some(check_constant_rank_fq(m, p)?),
        None => None,
    };
    let from_o = o_maximal.certified().then_some(Template::OMaximal { d: m.d, gor });
    let from_k = k_minimal.certified().then_some(Template::ConstantRank { d: m.d, ell: m.ell(), r: grk });
    let template = match (from_o, from_k) {
        (Some(a), Some(b)) => {
            if a.formula() != b.formula() {
                return Err(AskError::Internal(format!("templates {} and {} disagree", a.label(), b.label())));
            }
            Some(a)
        }
        (a, b) => a.or(b),
    };
    Ok(StructureReport {
        d: m.d,
        e: m.e,
        ell: m.ell(),
        grk,
        gor,
        constant_orbit_dim: o_maximal.status,
        o_maximal,
        k_minimal,
        constant_rank,
        template,
    })
}
