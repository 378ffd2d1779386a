//! Small integer helpers shared across modules.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorisation by trial division, as (prime, multiplicity) pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            let mut k = 0;
            while n.is_multiple_of(f) {
                n /= f;
                k += 1;
            }
            out.push((f, k));
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Primes dividing `n`, found by trial division up to `bound`. A cofactor left
/// over after the search is reported as-is (it may be composite).
pub fn prime_divisors(n: &BigInt, bound: u64) -> Vec<BigUint> {
    let mut n = n.abs().to_biguint().unwrap_or_default();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut f = 2u64;
    while f <= bound && n > BigUint::one() {
        let fb = BigUint::from(f);
        if (&n % &fb).is_zero() {
            out.push(fb.clone());
            while (&n % &fb).is_zero() {
                n /= &fb;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > BigUint::one() {
        out.push(n);
    }
    out
}

pub fn pow_u64_checked(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

pub fn big_pow(p: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// Inverse of `a` modulo `m`, assuming `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Smallest generator of `(Z/p^n)^x` for odd primes `p`.
pub fn primitive_root_mod_prime_power(p: u64, n: u32) -> Option<u64> {
    if p == 2 {
        return match n {
            0 | 1 => Some(1),
            2 => Some(3),
            _ => None,
        };
    }
    let phi = p - 1;
    let fac = factor_u64(phi);
    let mut g = 2u64;
    loop {
        if g >= p {
            return None;
        }
        if fac.iter().all(|(f, _)| pow_mod(g, phi / f, p) != 1) {
            break;
        }
        g += 1;
    }
    if n >= 2 {
        let p2 = p * p;
        if pow_mod(g, phi, p2) == 1 {
            g += p;
        }
    }
    Some(g)
}

pub fn bigint_mod_u64(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}
