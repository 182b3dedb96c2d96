//! Integer utilities: trial-division factorization, Kronecker symbols,
//! fundamental discriminants, and modular arithmetic on `u64` with `u128`
//! intermediates.
//!
//! Everything here is desk-scale by design: factorization is plain trial
//! division with a 2/3/5 wheel, good to 2^63 but intended for d up to ~10^7.

use crate::error::{Error, Result};

/// Prime factorization of a positive integer, exponents ordered by prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    /// (prime, exponent) pairs, primes strictly increasing, exponents >= 1.
    pub primes: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn is_squarefree(&self) -> bool {
        self.primes.iter().all(|&(_, e)| e == 1)
    }

    /// Odd prime divisors in increasing order.
    pub fn odd_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().map(|&(p, _)| p).filter(|&p| p != 2)
    }

    /// Re-multiplies the factorization (used by tests as a round-trip check).
    pub fn product(&self) -> u64 {
        self.primes
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }
}

/// Trial-division factorization with a 2/3/5 wheel. `n = 0` is a domain error;
/// `n = 1` yields the empty factorization.
pub fn factor(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::domain("factor: n must be positive"));
    }
    let mut primes = Vec::new();
    let mut m = n;
    for q in [2u64, 3, 5] {
        if m % q == 0 {
            let mut e = 0;
            while m % q == 0 {
                m /= q;
                e += 1;
            }
            primes.push((q, e));
        }
    }
    // Wheel increments mod 30 starting from 7.
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut q = 7u64;
    let mut w = 0usize;
    while q.checked_mul(q).is_some_and(|qq| qq <= m) {
        if m % q == 0 {
            let mut e = 0;
            while m % q == 0 {
                m /= q;
                e += 1;
            }
            primes.push((q, e));
        }
        q += WHEEL[w];
        w = (w + 1) % WHEEL.len();
    }
    if m > 1 {
        primes.push((m, 1));
    }
    primes.sort_unstable();
    Ok(Factorization { n, primes })
}

/// `true` iff `n` is prime (trial division; desk scale).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5] {
        if n % q == 0 {
            return n == q;
        }
    }
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut q = 7u64;
    let mut w = 0usize;
    while q * q <= n {
        if n % q == 0 {
            return false;
        }
        q += WHEEL[w];
        w = (w + 1) % WHEEL.len();
    }
    true
}

/// Integer square root: the largest `s` with `s*s <= n`.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    // Fix up float rounding in both directions.
    while x.checked_mul(x).map_or(true, |xx| xx > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|xx| xx <= n) {
        x += 1;
    }
    x
}

/// Simple sieve of Eratosthenes, inclusive upper bound.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2usize;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}

/// Squarefree part bookkeeping for the field Q(sqrt(d)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Discriminant {
    /// Squarefree d > 1.
    pub d: u64,
    /// Fundamental discriminant: d when d = 1 (mod 4), else 4d.
    pub disc: i64,
    /// 1 when d = 1 (mod 4), else 2.
    pub delta: u8,
}

/// Fundamental discriminant of Q(sqrt(d)) for squarefree d > 1.
pub fn fundamental_discriminant(d: u64) -> Result<Discriminant> {
    if d < 2 {
        return Err(Error::domain("fundamental_discriminant: need d > 1"));
    }
    if !factor(d)?.is_squarefree() {
        return Err(Error::domain(format!(
            "fundamental_discriminant: {d} is not squarefree"
        )));
    }
    Ok(if d % 4 == 1 {
        Discriminant {
            d,
            disc: d as i64,
            delta: 1,
        }
    } else {
        Discriminant {
            d,
            disc: 4 * d as i64,
            delta: 2,
        }
    })
}

/// `true` iff `disc` is a fundamental discriminant (1 counts: principal).
pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc == 1 {
        return true;
    }
    if disc == 0 {
        return false;
    }
    let squarefree = |m: i64| {
        factor(m.unsigned_abs())
            .map(|f| f.is_squarefree())
            .unwrap_or(false)
    };
    if disc.rem_euclid(4) == 1 {
        squarefree(disc)
    } else if disc % 4 == 0 {
        let m = disc / 4;
        let r = m.rem_euclid(4);
        (r == 2 || r == 3) && squarefree(m)
    } else {
        false
    }
}

/// Full Kronecker symbol (a|n), defined for all integers, by the reciprocity
/// recursion with the (a|2) rule (0 for even a, +1 for a = ±1 mod 8, −1 for
/// a = ±3 mod 8) and (a|−1) = sign(a).
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    while n % 2 == 0 {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    // n odd and positive from here; standard Jacobi loop.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// a * b mod m with a 128-bit intermediate.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m by square-and-multiply.
pub fn mod_pow(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    a %= m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` (extended Euclid); error when gcd(a, m) > 1.
pub fn mod_inv(a: i64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::domain("mod_inv: zero modulus"));
    }
    let mi = m as i128;
    let mut r0: i128 = mi;
    let mut r1: i128 = (a as i128).rem_euclid(mi);
    let mut s0: i128 = 0;
    let mut s1: i128 = 1;
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(Error::domain(format!(
            "mod_inv: gcd({a}, {m}) = {r0}, not invertible"
        )));
    }
    Ok(s0.rem_euclid(mi) as u64)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// p^k as a u64 modulus, or a precision error when it does not fit.
pub fn checked_prime_power(p: u64, k: u32) -> Result<u64> {
    let mut m: u64 = 1;
    for _ in 0..k {
        m = m
            .checked_mul(p)
            .ok_or_else(|| Error::Precision(format!("p^k overflows u64 for p={p}, k={k}")))?;
    }
    Ok(m)
}

/// A rational residue a/b modulo p^k, with b required to be a p-unit.
///
/// Construction refuses denominators divisible by p; Bernoulli callers must
/// handle the von Staudt–Clausen boundary explicitly before reducing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalModPk {
    pub numerator: i64,
    pub denominator: u64,
    pub p: u64,
    pub k: u32,
    /// numerator * denominator^{-1} reduced into [0, p^k).
    pub reduced: u64,
}

impl RationalModPk {
    pub fn new(numerator: i64, denominator: i64, p: u64, k: u32) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::domain("RationalModPk: zero denominator"));
        }
        let (numerator, denominator) = if denominator < 0 {
            (-numerator, (-denominator) as u64)
        } else {
            (numerator, denominator as u64)
        };
        if denominator % p == 0 {
            return Err(Error::Pole(format!(
                "RationalModPk: denominator {denominator} divisible by p={p}"
            )));
        }
        let m = checked_prime_power(p, k)?;
        let num = (numerator as i128).rem_euclid(m as i128) as u64;
        let den_inv = mod_inv(denominator as i64, m)?;
        Ok(RationalModPk {
            numerator,
            denominator,
            p,
            k,
            reduced: mul_mod(num, den_inv, m),
        })
    }

    /// Wraps an already-reduced residue (denominator 1).
    pub fn from_residue(value: u64, p: u64, k: u32) -> Result<Self> {
        let m = checked_prime_power(p, k)?;
        Ok(RationalModPk {
            numerator: (value % m) as i64,
            denominator: 1,
            p,
            k,
            reduced: value % m,
        })
    }
}
