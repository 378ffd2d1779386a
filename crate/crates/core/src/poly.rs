//! Sparse multivariate polynomials over `Z`, used for generic ranks and minors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Exponent vectors ordered lexicographically; the largest key is the leading
/// monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u16>, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, i, 1, BigInt::one())
    }

    /// `c * X_i^k`.
    pub fn monomial(nvars: usize, i: usize, k: u16, c: BigInt) -> Self {
        let mut e = vec![0; nvars];
        e[i] = k;
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// Linear form `sum c_i X_i`.
    pub fn linear(coeffs: &[BigInt]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign_scaled(&mut self, other: &Poly, s: &BigInt) {
        for (e, c) in &other.terms {
            let entry = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c * s;
            if entry.is_zero() {
                self.terms.remove(e);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        r.add_assign_scaled(other, &BigInt::one());
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        r.add_assign_scaled(other, &BigInt::from(-1));
        r
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out: BTreeMap<Vec<u16>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Poly { nvars: self.nvars, terms: out }
    }

    pub fn leading(&self) -> Option<(&Vec<u16>, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (de, dc) = d.leading()?;
        let (de, dc) = (de.clone(), dc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qe: Vec<u16> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let mut t = Poly::zero(self.nvars);
            t.terms.insert(qe, qc);
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn eval_i128(&self, x: &[i64]) -> BigInt {
        let mut s = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(BigInt::from(*xi), k as usize);
                }
            }
            s += t;
        }
        s
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().map(|&k| k as u32).sum()).max()
    }

    /// Content-free copy with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return self.clone();
        }
        if self.leading().is_some_and(|(_, c)| c.is_negative()) {
            g = -g;
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / &g)).collect(),
        }
    }
}

/// Fraction-free (Bareiss) elimination on a polynomial matrix. Returns the rank
/// over the fraction field and, for square input, the determinant.
pub fn bareiss(mut m: Vec<Vec<Poly>>, nvars: usize) -> (usize, Option<Poly>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let square = rows == cols;
    let mut prev = Poly::constant(nvars, BigInt::one());
    let mut sign = 1i64;
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            col += 1;
            continue;
        };
        if piv != rank {
            m.swap(piv, rank);
            sign = -sign;
        }
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = m[rank][col].mul(&m[r][c]).sub(&m[r][col].mul(&m[rank][c]));
                m[r][c] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[r][col] = Poly::zero(nvars);
        }
        prev = m[rank][col].clone();
        rank += 1;
        col += 1;
    }
    let det = if square {
        if rank == rows {
            let d = m[rows - 1][cols - 1].clone();
            Some(if sign < 0 { Poly::zero(nvars).sub(&d) } else { d })
        } else {
            Some(Poly::zero(nvars))
        }
    } else {
        None
    };
    (rank, det)
}

/// Determinant by Bareiss elimination.
pub fn det(m: &[Vec<Poly>], nvars: usize) -> Poly {
    if m.is_empty() {
        return Poly::constant(nvars, BigInt::one());
    }
    bareiss(m.to_vec(), nvars).1.expect("square")
}
