//! Integral matrix modules `M ⊂ Mat_{d×e}(Z)` given by a finite basis.

use crate::error::{invalid, AskError, Result};
use crate::linalg::{hermite_rows, rank_q, solve_combination};
use crate::poly::{bareiss, Poly};
use crate::ring_zpn::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixModule {
    pub d: usize,
    pub e: usize,
    /// Hermite normal form basis of the `Z`-span of the generators.
    pub basis: Vec<IntMatrix>,
    pub label: Option<String>,
}

impl MatrixModule {
    /// Module spanned by `generators`. Only the lattice matters: the stored
    /// basis is its Hermite normal form.
    pub fn new(d: usize, e: usize, generators: &[IntMatrix], label: Option<&str>) -> Result<Self> {
        for g in generators {
            if g.rows != d || g.cols != e {
                return invalid(format!("generator of shape {}x{} in a {d}x{e} module", g.rows, g.cols));
            }
        }
        let flat: Vec<Vec<BigInt>> = generators.iter().map(|g| g.data.clone()).collect();
        let basis = if flat.is_empty() { Vec::new() } else { hermite_rows(&flat) };
        let basis = basis.into_iter().map(|data| IntMatrix { rows: d, cols: e, data }).collect();
        Ok(MatrixModule { d, e, basis, label: label.map(str::to_string) })
    }

    pub fn zero(d: usize, e: usize) -> Self {
        MatrixModule { d, e, basis: Vec::new(), label: Some(format!("zero({d},{e})")) }
    }

    pub fn ell(&self) -> usize {
        self.basis.len()
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    /// `sum c_i a_i`.
    pub fn element(&self, coeffs: &[BigInt]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.d, self.e);
        for (c, a) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&a.scale(c));
            }
        }
        out
    }

    /// Same `Z`-lattice (bases may differ).
    pub fn same_lattice(&self, other: &MatrixModule) -> bool {
        self.d == other.d && self.e == other.e && self.basis == other.basis
    }
}

/// Matrix of linear forms; entry `(i, j)` holds the coefficient vector of a
/// linear form in `nvars` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormMatrix {
    pub rows: usize,
    pub cols: usize,
    pub nvars: usize,
    pub coeffs: Vec<Vec<Vec<BigInt>>>,
}

impl LinearFormMatrix {
    pub fn eval(&self, x: &[BigInt]) -> Vec<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|row| row.iter().map(|f| f.iter().zip(x).map(|(a, b)| a * b).sum()).collect())
            .collect()
    }

    pub fn to_poly(&self) -> Vec<Vec<Poly>> {
        self.coeffs.iter().map(|row| row.iter().map(|f| Poly::linear(f)).collect()).collect()
    }

    /// Human readable form such as `[-X2, X1, 0]` per row.
    pub fn render(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(|f| render_linear(f)).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect()
    }
}

fn render_linear(f: &[BigInt]) -> String {
    let mut s = String::new();
    for (k, c) in f.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let coef = if mag.is_one() { String::new() } else { format!("{mag}*") };
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        s.push_str(&format!("{coef}X{}", k + 1));
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// The `ℓ×e` matrix `C(X)` whose rows are `X a_i`, `X = (X_1..X_d)`.
pub fn orbit_matrix(m: &MatrixModule) -> LinearFormMatrix {
    let coeffs = m
        .basis
        .iter()
        .map(|a| (0..m.e).map(|j| (0..m.d).map(|k| a.get(k, j).clone()).collect()).collect())
        .collect();
    LinearFormMatrix { rows: m.ell(), cols: m.e, nvars: m.d, coeffs }
}

/// The generic element `sum X_i a_i` as a `d×e` matrix of linear forms in `ℓ` variables.
pub fn generic_element(m: &MatrixModule) -> LinearFormMatrix {
    let coeffs = (0..m.d)
        .map(|r| (0..m.e).map(|c| m.basis.iter().map(|a| a.get(r, c).clone()).collect()).collect())
        .collect();
    LinearFormMatrix { rows: m.d, cols: m.e, nvars: m.ell(), coeffs }
}

const SYMBOLIC_CELL_LIMIT: usize = 400;

/// Rank over `Q(X)` of a linear-form matrix, computed both by random
/// evaluation and (for moderate sizes) by fraction-free elimination over `Z[X]`.
pub fn generic_rank(f: &LinearFormMatrix, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..8 {
        let x: Vec<BigInt> = (0..f.nvars).map(|_| BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000))).collect();
        best = best.max(rank_q(&f.eval(&x)));
        if best == f.rows.min(f.cols) {
            break;
        }
    }
    if f.rows * f.cols <= SYMBOLIC_CELL_LIMIT && f.nvars <= 16 {
        let (sym, _) = bareiss(f.to_poly(), f.nvars);
        if sym != best {
            return Err(AskError::Internal(format!("symbolic rank {sym} differs from sampled rank {best}")));
        }
    }
    Ok(best)
}

/// Symbolic-only rank; used to cross-check the sampled one in tests.
pub fn generic_rank_symbolic(f: &LinearFormMatrix) -> usize {
    bareiss(f.to_poly(), f.nvars).0
}

/// `grk(M)`: rank of a generic element.
pub fn generic_element_rank(m: &MatrixModule) -> Result<usize> {
    if m.ell() == 0 {
        return Ok(0);
    }
    generic_rank(&generic_element(m), 0x5eed_0001)
}

/// `gor(M)`: generic orbit dimension, the rank of `C(X)`.
pub fn generic_orbit_rank(m: &MatrixModule) -> Result<usize> {
    if m.ell() == 0 {
        return Ok(0);
    }
    generic_rank(&orbit_matrix(m), 0x5eed_0002)
}

pub fn transpose(m: &MatrixModule) -> MatrixModule {
    let gens: Vec<IntMatrix> = m.basis.iter().map(IntMatrix::transpose).collect();
    let mut t = MatrixModule::new(m.e, m.d, &gens, None).expect("shapes agree");
    t.label = m.label.as_ref().map(|l| format!("{l}^T"));
    t
}

pub fn direct_sum(a: &MatrixModule, b: &MatrixModule) -> MatrixModule {
    let (d, e) = (a.d + b.d, a.e + b.e);
    let mut gens = Vec::new();
    for x in &a.basis {
        let mut g = IntMatrix::zeros(d, e);
        for i in 0..a.d {
            for j in 0..a.e {
                g.set(i, j, x.get(i, j).clone());
            }
        }
        gens.push(g);
    }
    for x in &b.basis {
        let mut g = IntMatrix::zeros(d, e);
        for i in 0..b.d {
            for j in 0..b.e {
                g.set(a.d + i, a.e + j, x.get(i, j).clone());
            }
        }
        gens.push(g);
    }
    let label = match (&a.label, &b.label) {
        (Some(x), Some(y)) => Some(format!("{x}+{y}")),
        _ => None,
    };
    let mut s = MatrixModule::new(d, e, &gens, None).expect("shapes agree");
    s.label = label;
    s
}

/// Inserts a zero row at index `position` (`0..=d`).
pub fn add_zero_row(m: &MatrixModule, position: usize) -> Result<MatrixModule> {
    if position > m.d {
        return invalid(format!("row position {position} out of range 0..={}", m.d));
    }
    let gens: Vec<IntMatrix> = m
        .basis
        .iter()
        .map(|a| {
            let mut g = IntMatrix::zeros(m.d + 1, m.e);
            for i in 0..m.d {
                let ti = if i < position { i } else { i + 1 };
                for j in 0..m.e {
                    g.set(ti, j, a.get(i, j).clone());
                }
            }
            g
        })
        .collect();
    let out = MatrixModule::new(m.d + 1, m.e, &gens, None)?;
    Ok(MatrixModule { label: m.label.clone(), ..out })
}

/// Inserts a zero column at index `position` (`0..=e`).
pub fn add_zero_col(m: &MatrixModule, position: usize) -> Result<MatrixModule> {
    if position > m.e {
        return invalid(format!("column position {position} out of range 0..={}", m.e));
    }
    let t = add_zero_row(&transpose(m), position)?;
    let mut out = transpose(&t);
    out.label = m.label.clone();
    Ok(out)
}

/// `p^k M`.
pub fn rescale(m: &MatrixModule, k: u32, p: u64) -> MatrixModule {
    let s = num_traits::pow(BigInt::from(p), k as usize);
    let gens: Vec<IntMatrix> = m.basis.iter().map(|a| a.scale(&s)).collect();
    let out = MatrixModule::new(m.d, m.e, &gens, None).expect("shapes agree");
    MatrixModule { label: m.label.as_ref().map(|l| format!("{p}^{k}*{l}")), ..out }
}

/// Structure constants `[b_i, b_j] = sum_k c[i][j][k] b_k` of a Lie ring with
/// a `Z`-basis `b_1..b_ℓ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstants {
    pub dim: usize,
    pub c: Vec<Vec<Vec<BigInt>>>,
}

impl StructureConstants {
    /// From a list of nonzero brackets `[x_i, x_j] = sum coeff x_k` with
    /// 1-based indices; antisymmetry is filled in.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, &[(usize, i64)])]) -> Self {
        let mut c = vec![vec![vec![BigInt::zero(); dim]; dim]; dim];
        for &(i, j, terms) in brackets {
            for &(k, v) in terms {
                c[i - 1][j - 1][k - 1] += BigInt::from(v);
                c[j - 1][i - 1][k - 1] -= BigInt::from(v);
            }
        }
        StructureConstants { dim, c }
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_brackets(dim, &[])
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().flatten().flatten().all(Zero::is_zero)
    }

    /// Adjoint module: `ad(b_i)` sends the row vector of `b` to that of `[b, b_i]`.
    pub fn ad_module(&self) -> MatrixModule {
        let n = self.dim;
        let gens: Vec<IntMatrix> = (0..n)
            .map(|i| {
                let mut a = IntMatrix::zeros(n, n);
                for j in 0..n {
                    for k in 0..n {
                        a.set(j, k, self.c[j][i][k].clone());
                    }
                }
                a
            })
            .collect();
        MatrixModule::new(n, n, &gens, Some("ad")).expect("square")
    }

    /// Checks the Jacobi identity.
    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.dim;
        let br = |x: &[BigInt], y: &[BigInt]| -> Vec<BigInt> {
            let mut out = vec![BigInt::zero(); n];
            for i in 0..n {
                if x[i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if y[j].is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        out[k] += &x[i] * &y[j] * &self.c[i][j][k];
                    }
                }
            }
            out
        };
        let unit = |i: usize| -> Vec<BigInt> { (0..n).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }).collect() };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t1 = br(&unit(a), &br(&unit(b), &unit(c)));
                    let t2 = br(&unit(b), &br(&unit(c), &unit(a)));
                    let t3 = br(&unit(c), &br(&unit(a), &unit(b)));
                    if (0..n).any(|k| !(&t1[k] + &t2[k] + &t3[k]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Structure constants of a module whose basis is closed under commutators.
pub fn structure_constants(m: &MatrixModule) -> Result<StructureConstants> {
    if m.d != m.e {
        return Err(AskError::NotLieAlgebra(format!("{}x{} matrices are not square", m.d, m.e)));
    }
    let n = m.ell();
    let cols: Vec<Vec<BigInt>> = m.basis.iter().map(|a| a.data.clone()).collect();
    let mut c = vec![vec![vec![BigInt::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let br = m.basis[i].bracket(&m.basis[j]);
            if br.is_zero() {
                continue;
            }
            let sol = solve_combination(&cols, &br.data).ok_or_else(|| {
                AskError::NotLieAlgebra(format!("[b{}, b{}] leaves the span", i + 1, j + 1))
            })?;
            for (k, s) in sol.iter().enumerate() {
                if !s.is_integer() {
                    return Err(AskError::NonIntegralStructureConstants(format!(
                        "[b{}, b{}] has coefficient {s} on b{}",
                        i + 1,
                        j + 1,
                        k + 1
                    )));
                }
                c[i][j][k] = s.to_integer();
            }
        }
    }
    Ok(StructureConstants { dim: n, c })
}

/// `ad(L)` as a module in `Mat_{ℓ×ℓ}(Z)`.
pub fn ad_representation(m: &MatrixModule) -> Result<MatrixModule> {
    let sc = structure_constants(m)?;
    let mut ad = sc.ad_module();
    ad.label = m.label.as_ref().map(|l| format!("ad({l})"));
    Ok(ad)
}

/// Content gcd of all basis entries; nonzero content means `M ⊂ c·Mat`.
pub fn content(m: &MatrixModule) -> BigInt {
    let mut g = BigInt::zero();
    for a in &m.basis {
        for x in &a.data {
            g = g.gcd(x);
        }
    }
    g
}
