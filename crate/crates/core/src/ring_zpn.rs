//! Arithmetic in `Z/p^n` and elementary-divisor data of integer matrices.
//!
//! Matrices act on row vectors: `x -> x * a`. Every size reported here is a
//! power of `p` and is returned as a [`PPower`].

use crate::arith::{big_pow, bigint_mod_u64, inv_mod, is_prime};
use crate::error::{invalid, AskError, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u64,
    pub n: u32,
}

impl RingSpec {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        Ok(RingSpec { p, n })
    }

    /// `p^n` as a machine integer, if it fits comfortably.
    pub fn modulus_u64(&self) -> Option<u64> {
        self.p.checked_pow(self.n).filter(|&m| m < (1u64 << 62))
    }
}

/// `p^exp`, kept symbolic so that huge sizes stay cheap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PPower {
    pub p: u64,
    pub exp: u64,
}

impl PPower {
    pub fn value(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p), self.exp as usize)
    }
}

impl fmt::Display for PPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.exp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    /// Valuation of zero.
    Infinite,
}

pub fn pval(x: &BigInt, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let pb = BigInt::from(p);
    let mut y = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        y = q;
        v += 1;
    }
}

fn pval_finite(x: &BigInt, p: u64) -> u32 {
    match pval(x, p) {
        Valuation::Finite(v) => v,
        Valuation::Infinite => u32::MAX,
    }
}

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols, "entry count");
        IntMatrix { rows, cols, data: vals.iter().map(|&v| BigInt::from(v)).collect() }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let flat: Vec<i64> = rows.iter().flat_map(|x| x.iter().copied()).collect();
        Self::from_i64(r, c, &flat)
    }

    /// Matrix with a single entry `v` at `(i, j)`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize, v: i64) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.set(i, j, BigInt::from(v));
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, s: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Commutator `[self, other] = self*other - other*self`.
    pub fn bracket(&self, other: &IntMatrix) -> IntMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Entries reduced into `[0, m)`.
    pub fn to_mod(&self, m: u64) -> Vec<u64> {
        self.data.iter().map(|x| bigint_mod_u64(x, m)).collect()
    }
}

/// Elementary divisor exponents `λ_1 <= ... <= λ_r` of a matrix over `Z_(p)`,
/// with `r` the rank over `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquivType {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub lambdas: Vec<u32>,
}

impl EquivType {
    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    pub fn kernel_exp(&self, n: u32) -> u64 {
        let s: u64 = self.lambdas.iter().map(|&l| l.min(n) as u64).sum();
        s + (self.rows - self.rank()) as u64 * n as u64
    }

    pub fn image_exp(&self, n: u32) -> u64 {
        let s: u64 = self.lambdas.iter().map(|&l| l.min(n) as u64).sum();
        self.rank() as u64 * n as u64 - s
    }
}

/// Smith-type reduction localised at `p`, pivoting on an entry of minimal
/// valuation. Rows are only ever multiplied by `p`-units, so the result is the
/// `Z_(p)`-equivalence type.
pub fn equivalence_type(a: &IntMatrix, p: u64) -> Result<EquivType> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    let (rows, cols) = (a.rows, a.cols);
    let mut m: Vec<Vec<BigInt>> = (0..rows).map(|i| a.row(i).to_vec()).collect();
    let mut lambdas = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if x.is_zero() {
                    continue;
                }
                let v = pval_finite(x, p);
                if best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, bi, bj)) = best else { break };
        m.swap(k, bi);
        for row in m.iter_mut() {
            row.swap(k, bj);
        }
        let pv = big_pow(p, v as u64);
        let u = &m[k][k] / &pv;
        let pivot_row = m[k].clone();
        for row in m.iter_mut().skip(k + 1) {
            if row[k].is_zero() {
                continue;
            }
            let b = &row[k] / &pv;
            for j in k..cols {
                row[j] = &u * &row[j] - &b * &pivot_row[j];
            }
            strip_unit_content(&mut row[k + 1..], p);
        }
        lambdas.push(v);
        k += 1;
    }
    lambdas.sort_unstable();
    Ok(EquivType { p, rows, cols, lambdas })
}

fn strip_unit_content(row: &mut [BigInt], p: u64) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return;
    }
    let pb = BigInt::from(p);
    while (&g % &pb).is_zero() {
        g /= &pb;
    }
    if !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// `|{x in (Z/p^n)^d : x a = 0}|`.
pub fn kernel_size(a: &IntMatrix, ring: RingSpec) -> Result<PPower> {
    let t = equivalence_type(a, ring.p)?;
    Ok(PPower { p: ring.p, exp: t.kernel_exp(ring.n) })
}

/// `|(Z/p^n)^d a|`.
pub fn image_size(a: &IntMatrix, ring: RingSpec) -> Result<PPower> {
    let t = equivalence_type(a, ring.p)?;
    Ok(PPower { p: ring.p, exp: t.image_exp(ring.n) })
}

/// Size of the `Z/p^n`-span of the given vectors of a common length.
pub fn span_size(vectors: &[Vec<BigInt>], ring: RingSpec) -> Result<PPower> {
    if vectors.is_empty() {
        if !is_prime(ring.p) {
            return invalid(format!("{} is not prime", ring.p));
        }
        return Ok(PPower { p: ring.p, exp: 0 });
    }
    let e = vectors[0].len();
    if vectors.iter().any(|v| v.len() != e) {
        return invalid("vectors of different lengths");
    }
    let a = IntMatrix {
        rows: vectors.len(),
        cols: e,
        data: vectors.iter().flat_map(|v| v.iter().cloned()).collect(),
    };
    image_size(&a, ring)
}

/// Machine-integer arithmetic modulo `p^m` for the enumeration hot loops.
#[derive(Debug, Clone, Copy)]
pub struct ModPn {
    pub p: u64,
    pub m: u32,
    pub modulus: u64,
}

impl ModPn {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        let modulus = p
            .checked_pow(m)
            .filter(|&x| x < (1u64 << 62))
            .ok_or_else(|| AskError::InvalidInput(format!("{p}^{m} too large for fast arithmetic")))?;
        Ok(ModPn { p, m, modulus })
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    /// Valuation of a residue, with `val(0) = m`.
    #[inline]
    pub fn val(&self, mut x: u64) -> u32 {
        if x == 0 {
            return self.m;
        }
        if self.p == 2 {
            return x.trailing_zeros().min(self.m);
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Reduces a row-major `rows x cols` matrix in place and returns
    /// `(sum of pivot valuations, number of pivots)`. Pivots of valuation `m`
    /// (zero residues) are not counted.
    pub fn smith_profile(&self, mat: &mut [u64], rows: usize, cols: usize) -> (u32, u32) {
        let mut row_idx: Vec<usize> = (0..rows).collect();
        let mut col_alive = vec![true; cols];
        let mut sum_v = 0u32;
        let mut rank = 0u32;
        let mut live_rows = rows;
        while live_rows > 0 {
            let mut best = (self.m, usize::MAX, usize::MAX);
            'scan: for (ri, &r) in row_idx[..live_rows].iter().enumerate() {
                for c in 0..cols {
                    if !col_alive[c] {
                        continue;
                    }
                    let x = mat[r * cols + c];
                    if x == 0 {
                        continue;
                    }
                    let v = self.val(x);
                    if v < best.0 {
                        best = (v, ri, c);
                        if v == 0 {
                            break 'scan;
                        }
                    }
                }
            }
            let (v, ri, c) = best;
            if v >= self.m {
                break;
            }
            let pr = row_idx[ri];
            row_idx.swap(ri, live_rows - 1);
            live_rows -= 1;
            col_alive[c] = false;
            sum_v += v;
            rank += 1;
            let pv = self.p.pow(v);
            let u = mat[pr * cols + c] / pv;
            let u_inv = inv_mod(u % self.modulus, self.modulus).expect("unit");
            for &r in &row_idx[..live_rows] {
                let b = mat[r * cols + c];
                if b == 0 {
                    continue;
                }
                let f = self.mul(b / pv, u_inv);
                for cc in 0..cols {
                    if !col_alive[cc] {
                        continue;
                    }
                    let t = self.mul(f, mat[pr * cols + cc]);
                    mat[r * cols + cc] = self.sub(mat[r * cols + cc], t);
                }
                mat[r * cols + c] = 0;
            }
        }
        (sum_v, rank)
    }

    pub fn kernel_exp(&self, mat: &mut [u64], rows: usize, cols: usize) -> u32 {
        let (s, r) = self.smith_profile(mat, rows, cols);
        s + (rows as u32 - r) * self.m
    }

    pub fn image_exp(&self, mat: &mut [u64], rows: usize, cols: usize) -> u32 {
        let (s, r) = self.smith_profile(mat, rows, cols);
        r * self.m - s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: u32) -> RingSpec {
        RingSpec::new(p, n).unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(pval(&BigInt::from(18), 3), Valuation::Finite(2));
        assert_eq!(pval(&BigInt::from(1), 3), Valuation::Finite(0));
        assert_eq!(pval(&BigInt::from(-250), 5), Valuation::Finite(3));
        assert_eq!(pval(&BigInt::from(0), 5), Valuation::Infinite);
    }

    #[test]
    fn equivalence_types() {
        let t = equivalence_type(&IntMatrix::from_rows(&[vec![3, 0], vec![0, 9]]), 3).unwrap();
        assert_eq!(t.lambdas, vec![1, 2]);
        let t = equivalence_type(&IntMatrix::from_rows(&[vec![1, 0], vec![0, 0]]), 5).unwrap();
        assert_eq!(t.lambdas, vec![0]);
        let t = equivalence_type(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]), 2).unwrap();
        assert_eq!(t.lambdas, vec![1, 2]);
        assert!(equivalence_type(&IntMatrix::zeros(1, 1), 4).is_err());
    }

    #[test]
    fn sizes() {
        let z = IntMatrix::zeros(2, 2);
        let id = IntMatrix::identity(2);
        let d = IntMatrix::from_rows(&[vec![3, 0], vec![0, 9]]);
        assert_eq!(kernel_size(&z, ring(3, 1)).unwrap().value(), BigUint::from(9u32));
        assert_eq!(kernel_size(&id, ring(3, 3)).unwrap().value(), BigUint::from(1u32));
        assert_eq!(kernel_size(&d, ring(3, 2)).unwrap().value(), BigUint::from(27u32));
        assert_eq!(image_size(&id, ring(3, 2)).unwrap().value(), BigUint::from(81u32));
        assert_eq!(image_size(&d, ring(3, 2)).unwrap().value(), BigUint::from(3u32));
        assert_eq!(image_size(&z, ring(3, 2)).unwrap().value(), BigUint::from(1u32));
        assert_eq!(kernel_size(&d, ring(3, 0)).unwrap().exp, 0);
    }

    #[test]
    fn spans() {
        let v = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(span_size(&[v(&[1, 0])], ring(3, 2)).unwrap().value(), BigUint::from(9u32));
        assert_eq!(span_size(&[v(&[3, 0]), v(&[0, 3])], ring(3, 2)).unwrap().value(), BigUint::from(9u32));
        assert_eq!(span_size(&[], ring(3, 2)).unwrap().value(), BigUint::from(1u32));
    }

    #[test]
    fn fast_path_matches_bigint_path() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 6], vec![6, 8, 3], vec![12, 0, 9]]);
        for &(p, n) in &[(2u64, 3u32), (3, 2), (5, 1)] {
            let ctx = ModPn::new(p, n).unwrap();
            let mut m = a.to_mod(ctx.modulus);
            let k = ctx.kernel_exp(&mut m, 3, 3) as u64;
            assert_eq!(k, kernel_size(&a, ring(p, n)).unwrap().exp);
        }
    }
}
