//! Rational functions in `q` and `T` with integer coefficients, allowing
//! negative powers of `q` (and, transiently, of `T`).

mod parse;
mod series;

pub use parse::{parse_qt, parse_qt_with};
pub use series::{fit_pade, fit_rational, hadamard, Fit, SeriesQ};

use crate::error::{AskError, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Laurent polynomial `sum c * q^a * T^b`, keyed by `(b, a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QTPoly {
    pub terms: BTreeMap<(i64, i64), BigInt>,
}

impl QTPoly {
    pub fn zero() -> Self {
        QTPoly::default()
    }

    pub fn one() -> Self {
        Self::term(1, 0, 0)
    }

    /// `c * q^a * T^b`.
    pub fn term(c: i64, a: i64, b: i64) -> Self {
        Self::term_big(BigInt::from(c), a, b)
    }

    pub fn term_big(c: BigInt, a: i64, b: i64) -> Self {
        let mut p = QTPoly::zero();
        if !c.is_zero() {
            p.terms.insert((b, a), c);
        }
        p
    }

    pub fn q() -> Self {
        Self::term(1, 1, 0)
    }

    pub fn t() -> Self {
        Self::term(1, 0, 1)
    }

    /// `1 - q^a T^b`.
    pub fn one_minus(a: i64, b: i64) -> Self {
        Self::one().sub(&Self::term(1, a, b))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: (i64, i64), c: &BigInt) {
        let e = self.terms.entry(key).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &QTPoly) -> QTPoly {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c);
        }
        r
    }

    pub fn neg(&self) -> QTPoly {
        QTPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, o: &QTPoly) -> QTPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QTPoly) -> QTPoly {
        let mut r = QTPoly::zero();
        for ((b1, a1), c1) in &self.terms {
            for ((b2, a2), c2) in &o.terms {
                r.add_term((b1 + b2, a1 + a2), &(c1 * c2));
            }
        }
        r
    }

    pub fn scale(&self, s: &BigInt) -> QTPoly {
        if s.is_zero() {
            return QTPoly::zero();
        }
        QTPoly { terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect() }
    }

    pub fn pow(&self, e: u32) -> QTPoly {
        let mut r = QTPoly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Multiplies by `q^a T^b`.
    pub fn shift(&self, a: i64, b: i64) -> QTPoly {
        QTPoly { terms: self.terms.iter().map(|((tb, qa), c)| ((tb + b, qa + a), c.clone())).collect() }
    }

    /// `f(q^{-1}, T^{-1})`.
    pub fn invert(&self) -> QTPoly {
        QTPoly { terms: self.terms.iter().map(|((b, a), c)| ((-b, -a), c.clone())).collect() }
    }

    /// `f(q, q^s T)`.
    pub fn subst_t_scaled(&self, s: i64) -> QTPoly {
        QTPoly { terms: self.terms.iter().map(|((b, a), c)| ((*b, a + s * b), c.clone())).collect() }
    }

    pub fn min_t(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.0).min()
    }

    pub fn max_t(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn min_q(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.1).min()
    }

    pub fn max_q(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Coefficients in `T` after substituting a rational value for `q`.
    pub fn eval_q(&self, q: &BigRational) -> BTreeMap<i64, BigRational> {
        let mut out: BTreeMap<i64, BigRational> = BTreeMap::new();
        for ((b, a), c) in &self.terms {
            let qa = rat_pow(q, *a);
            *out.entry(*b).or_insert_with(BigRational::zero) += qa * BigRational::from(c.clone());
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Coefficient polynomial in `q` of `T^b`, as a map `a -> c`.
    pub fn t_coeff(&self, b: i64) -> BTreeMap<i64, BigInt> {
        self.terms.iter().filter(|((tb, _), _)| *tb == b).map(|((_, a), c)| (*a, c.clone())).collect()
    }

    /// Exact quotient, treating the polynomial as Laurent in `q` and
    /// polynomial in `T` (both operands must have nonnegative `T` exponents).
    pub fn div_exact(&self, d: &QTPoly) -> Option<QTPoly> {
        if d.is_zero() {
            return None;
        }
        // divide by leading term in order (T desc, q desc); Laurent in q means
        // the q exponents of the quotient are unconstrained
        let (&(db, da), dc) = d.terms.iter().next_back()?;
        let dlow_t = d.min_t()?;
        let qfloor = self.min_q()? - d.min_q()?;
        let mut rem = self.clone();
        let mut quot = QTPoly::zero();
        let mut steps = 0usize;
        while let Some((&(rb, ra), rc)) = rem.terms.iter().next_back() {
            steps += 1;
            if rb < db || steps > 100_000 {
                return None;
            }
            // the lowest T power of the remainder must stay reachable
            if rem.min_t()? < dlow_t {
                return None;
            }
            if ra - da < qfloor {
                return None;
            }
            let (qc, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            let t = QTPoly::term_big(qc, ra - da, rb - db);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }
}

fn rat_pow(q: &BigRational, a: i64) -> BigRational {
    if a >= 0 {
        num_traits::pow(q.clone(), a as usize)
    } else {
        num_traits::pow(q.recip(), (-a) as usize)
    }
}

/// A rational function `num / den` in `q` and `T`.
#[derive(Debug, Clone)]
pub struct QTRational {
    pub num: QTPoly,
    pub den: QTPoly,
}

impl PartialEq for QTRational {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl QTRational {
    pub fn new(num: QTPoly, den: QTPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(AskError::InvalidInput("zero denominator".into()));
        }
        Ok(QTRational { num, den })
    }

    pub fn from_poly(p: QTPoly) -> Self {
        QTRational { num: p, den: QTPoly::one() }
    }

    pub fn add(&self, o: &Self) -> Self {
        QTRational { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QTRational { num: self.num.mul(&o.den).sub(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        QTRational { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        QTRational::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn neg(&self) -> Self {
        QTRational { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(QTRational { num: self.num.pow(e as u32), den: self.den.pow(e as u32) })
        } else {
            QTRational::new(self.den.pow((-e) as u32), self.num.pow((-e) as u32))
        }
    }

    /// `W(q^{-1}, T^{-1})`.
    pub fn invert(&self) -> Self {
        QTRational { num: self.num.invert(), den: self.den.invert() }
    }

    /// `W(q, q^s T)`.
    pub fn subst_t_scaled(&self, s: i64) -> Self {
        QTRational { num: self.num.subst_t_scaled(s), den: self.den.subst_t_scaled(s) }
    }

    /// Equal numerator and denominator up to a common factor, with the
    /// denominator's lowest term positive and its minimal exponents zero, and
    /// with factors `1 - q^a T^b` of the denominator cancelled where possible.
    pub fn normalized(&self) -> Self {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        if num.is_zero() {
            return QTRational { num, den: QTPoly::one() };
        }
        let (tmin, qmin) = (den.min_t().unwrap(), den.min_q().unwrap());
        num = num.shift(-qmin, -tmin);
        den = den.shift(-qmin, -tmin);
        if let Some(nt) = num.min_t() {
            if nt < 0 {
                num = num.shift(0, -nt);
                den = den.shift(0, -nt);
            }
        }
        // common powers of T
        let common_t = num.min_t().unwrap().min(den.min_t().unwrap());
        if common_t > 0 {
            num = num.shift(0, -common_t);
            den = den.shift(0, -common_t);
        }
        let (factors, rest) = factor_denominator(&den);
        let mut kept = Vec::new();
        for (a, b, k) in factors {
            let f = QTPoly::one_minus(a, b);
            let mut left = k;
            while left > 0 {
                match num.div_exact(&f) {
                    Some(qn) => {
                        num = qn;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                kept.push((a, b, left));
            }
        }
        den = kept.iter().fold(rest, |acc, &(a, b, k)| acc.mul(&QTPoly::one_minus(a, b).pow(k)));
        let g = num.content().gcd(&den.content());
        let lowest_sign = den.terms.iter().next().map(|(_, c)| c.is_negative()).unwrap_or(false);
        let g = if lowest_sign { -g } else { g };
        if !g.is_one() && !g.is_zero() {
            num = QTPoly { terms: num.terms.iter().map(|(k, c)| (*k, c / &g)).collect() };
            den = QTPoly { terms: den.terms.iter().map(|(k, c)| (*k, c / &g)).collect() };
        }
        let qmin = den.min_q().unwrap();
        QTRational { num: num.shift(-qmin, 0), den: den.shift(-qmin, 0) }
    }

    /// Canonical text, stable under parse/print round trips.
    pub fn canonical(&self) -> String {
        let n = self.normalized();
        let (factors, rest) = factor_denominator(&n.den);
        let num_s = render_poly(&n.num);
        let mut den_parts = Vec::new();
        if rest != QTPoly::one() {
            den_parts.push(if rest.terms.len() == 1 { render_poly(&rest) } else { format!("({})", render_poly(&rest)) });
        }
        for (a, b, k) in factors {
            let f = format!("({})", render_poly(&QTPoly::one_minus(a, b)));
            den_parts.push(if k == 1 { f } else { format!("{f}^{k}") });
        }
        if den_parts.is_empty() {
            num_s
        } else {
            format!("({num_s})/({})", den_parts.join("*"))
        }
    }

    /// Power series coefficients `c_0..c_{order-1}` at a rational value of `q`.
    pub fn expand(&self, q: &BigRational, order: usize) -> Result<SeriesQ> {
        let n = self.normalized();
        let num = n.num.eval_q(q);
        let den = n.den.eval_q(q);
        if num.keys().next().is_some_and(|&k| k < 0) {
            return Err(AskError::InvalidInput("not a power series in T".into()));
        }
        let d0 = den.get(&0).cloned().unwrap_or_else(BigRational::zero);
        if d0.is_zero() {
            return Err(AskError::InvalidInput(format!("denominator vanishes at T=0 for q={q}")));
        }
        let inv0 = d0.recip();
        let mut c: Vec<BigRational> = Vec::with_capacity(order);
        for k in 0..order {
            let mut s = num.get(&(k as i64)).cloned().unwrap_or_else(BigRational::zero);
            if k >= 1 {
                for (&j, dj) in den.range(1..=(k as i64)) {
                    s -= dj * &c[k - j as usize];
                }
            }
            c.push(s * &inv0);
        }
        Ok(SeriesQ { q_value: q.clone(), coeffs: c })
    }

    /// Coefficient list at an integer prime power `q`.
    pub fn expand_at(&self, q: u64, order: usize) -> Result<Vec<BigRational>> {
        Ok(self.expand(&BigRational::from(BigInt::from(q)), order)?.coeffs)
    }
}

impl fmt::Display for QTRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// Greedy extraction of factors `1 - q^a T^b` (largest `b` first). Returns
/// `(a, b, multiplicity)` triples and the remaining cofactor.
pub fn factor_denominator(den: &QTPoly) -> (Vec<(i64, i64, u32)>, QTPoly) {
    let mut rest = den.clone();
    let mut out: Vec<(i64, i64, u32)> = Vec::new();
    if rest.is_zero() || rest.min_t() != Some(0) {
        return (out, rest);
    }
    let maxb = rest.max_t().unwrap_or(0);
    for b in (1..=maxb).rev() {
        let (lo, hi) = (rest.min_q().unwrap_or(0) - 1, rest.max_q().unwrap_or(0) + 1);
        let lo = lo.min(-hi.abs() - 1);
        let hi = hi.max(lo.abs() + 1);
        for a in lo..=hi {
            let f = QTPoly::one_minus(a, b);
            let mut k = 0;
            while rest.max_t().unwrap_or(0) >= b {
                match rest.div_exact(&f) {
                    Some(q) => {
                        rest = q;
                        k += 1;
                    }
                    None => break,
                }
            }
            if k > 0 {
                out.push((a, b, k));
            }
        }
    }
    out.sort_by(|x, y| (y.1, y.0).cmp(&(x.1, x.0)));
    (out, rest)
}

fn render_poly(p: &QTPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    // T ascending, then q descending
    let mut keys: Vec<&(i64, i64)> = p.terms.keys().collect();
    keys.sort_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)));
    let mut s = String::new();
    for (i, k) in keys.iter().enumerate() {
        let c = &p.terms[k];
        let (b, a) = **k;
        let mut factors = Vec::new();
        let mag = c.abs();
        if !mag.is_one() || (a == 0 && b == 0) {
            factors.push(mag.to_string());
        }
        match a {
            0 => {}
            1 => factors.push("q".into()),
            _ => factors.push(format!("q^{a}")),
        }
        match b {
            0 => {}
            1 => factors.push("T".into()),
            _ => factors.push(format!("T^{b}")),
        }
        let body = factors.join("*");
        if i == 0 {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    s
}

/// Checks `W(q^{-1}, T^{-1}) = (-q^d T) * W(q, T)` as an identity.
pub fn functional_equation_check(w: &QTRational, d: i64) -> bool {
    let lhs = w.invert();
    let rhs = QTRational::from_poly(QTPoly::term(-1, d, 1)).mul(w);
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn expansions() {
        let f = parse_qt("(1-q^-2*T)/((1-T)*(1-q^0*T))").unwrap();
        assert_eq!(f.expand(&r(3, 1), 2).unwrap().coeffs, vec![r(1, 1), r(17, 9)]);
        let g = parse_qt("1/(1-q*T)").unwrap();
        assert_eq!(g.expand(&r(3, 1), 3).unwrap().coeffs, vec![r(1, 1), r(3, 1), r(9, 1)]);
        let h = parse_qt("(1-T)/((1-q^2*T)*(1-q*T))").unwrap();
        assert_eq!(h.expand(&r(3, 1), 3).unwrap().coeffs, vec![r(1, 1), r(11, 1), r(105, 1)]);
    }

    #[test]
    fn canonical_round_trip() {
        for s in [
            "(1-q^-2*T)/((1-T)*(1-T))",
            "(1-T)^2/(1-q*T)^3",
            "(1 - 2*T + q*T^2 + q^2*T - 2*q^3*T^2 + q^3*T^3)/((1-q^5*T^2)*(1-q^2*T)*(1-q*T))",
            "(1-T)*(1-T)/(1-T)",
            "q^-3*T + 5",
        ] {
            let a = parse_qt(s).unwrap();
            let c1 = a.canonical();
            let b = parse_qt(&c1).unwrap();
            assert_eq!(a, b, "{s}");
            assert_eq!(c1, b.canonical(), "{s}");
        }
        assert_eq!(parse_qt("(1-T)*(1-T)/(1-T)").unwrap().canonical(), "1 - T");
        assert_eq!(parse_qt("(1-T)^2/(1-q*T)^3").unwrap().canonical(), "(1 - 2*T + T^2)/((1 - q*T)^3)");
    }

    #[test]
    fn functional_equations() {
        let mat22 = parse_qt("(1-q^-2*T)/((1-T)*(1-T))").unwrap();
        assert!(functional_equation_check(&mat22, 2));
        let n3 = parse_qt("(1-T)^2/(1-q*T)^3").unwrap();
        assert!(functional_equation_check(&n3, 3));
        let bad = parse_qt("1/(1-T)").unwrap();
        assert!(!functional_equation_check(&bad, 1));
    }
}
