//! Truncated p-adic integers: Teichmüller lifts, the unit decomposition
//! a = ω(a)·⟨a⟩, the p-adic logarithm on units, and the series for
//! log_p(ε)/√d attached to a fundamental unit.
//!
//! All values live in Z/p^k viewed as Z_p truncated at precision k; p is an
//! odd prime and p^k must fit in a `u64`. There is no representation of
//! ramified extensions: the unit-log series is arranged so √d never needs to
//! be constructed.

use crate::arith::{checked_prime_power, mod_inv, mod_pow, mul_mod};
use crate::error::{Error, Result};

/// An element of Z_p known modulo p^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Padic {
    p: u64,
    k: u32,
    modulus: u64,
    value: u64,
}

impl Padic {
    pub fn new(p: u64, k: u32, value: i64) -> Result<Self> {
        if p < 3 || p % 2 == 0 {
            return Err(Error::domain(format!("Padic: p = {p} must be an odd prime")));
        }
        if k == 0 {
            return Err(Error::domain("Padic: precision k must be >= 1"));
        }
        let modulus = checked_prime_power(p, k)?;
        let value = (value as i128).rem_euclid(modulus as i128) as u64;
        Ok(Padic {
            p,
            k,
            modulus,
            value,
        })
    }

    pub fn zero(p: u64, k: u32) -> Result<Self> {
        Self::new(p, k, 0)
    }

    pub fn one(p: u64, k: u32) -> Result<Self> {
        Self::new(p, k, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_unit(&self) -> bool {
        self.value % self.p != 0
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Largest j <= k with p^j | value; k means indistinguishable from 0 here.
    pub fn valuation(&self) -> u32 {
        if self.value == 0 {
            return self.k;
        }
        let mut v = 0;
        let mut x = self.value;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Reduce to a lower precision k' <= k.
    pub fn reduce_to(&self, k: u32) -> Result<Padic> {
        if k > self.k {
            return Err(Error::Precision(format!(
                "cannot raise precision {} -> {k}",
                self.k
            )));
        }
        let m = checked_prime_power(self.p, k)?;
        Padic::new(self.p, k, (self.value % m) as i64)
    }

    fn same_ring(&self, other: &Padic) {
        assert_eq!(
            (self.p, self.k),
            (other.p, other.k),
            "mixed p-adic rings: ({},{}) vs ({},{})",
            self.p,
            self.k,
            other.p,
            other.k
        );
    }

    pub fn inv(&self) -> Result<Padic> {
        if !self.is_unit() {
            return Err(Error::domain(format!(
                "inverse of non-unit {} mod {}^{}",
                self.value, self.p, self.k
            )));
        }
        Ok(Padic {
            value: mod_inv(self.value as i64, self.modulus)?,
            ..*self
        })
    }

    pub fn try_div(&self, rhs: &Padic) -> Result<Padic> {
        self.same_ring(rhs);
        Ok(*self * rhs.inv()?)
    }

    pub fn pow(&self, e: u64) -> Padic {
        Padic {
            value: mod_pow(self.value, e, self.modulus),
            ..*self
        }
    }

    pub fn neg(&self) -> Padic {
        Padic {
            value: (self.modulus - self.value) % self.modulus,
            ..*self
        }
    }
}

impl std::ops::Add for Padic {
    type Output = Padic;
    fn add(self, rhs: Padic) -> Padic {
        self.same_ring(&rhs);
        Padic {
            value: ((self.value as u128 + rhs.value as u128) % self.modulus as u128) as u64,
            ..self
        }
    }
}

impl std::ops::Sub for Padic {
    type Output = Padic;
    fn sub(self, rhs: Padic) -> Padic {
        self.same_ring(&rhs);
        Padic {
            value: (self.value + (self.modulus - rhs.value)) % self.modulus,
            ..self
        }
    }
}

impl std::ops::Mul for Padic {
    type Output = Padic;
    fn mul(self, rhs: Padic) -> Padic {
        self.same_ring(&rhs);
        Padic {
            value: mul_mod(self.value, rhs.value, self.modulus),
            ..self
        }
    }
}

impl std::fmt::Display for Padic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.p, self.k)
    }
}

/// Teichmüller lift ω(a): the unique (p−1)-st root of unity congruent to a
/// mod p, computed by fixed-point iteration x ← x^p (a contraction: if
/// x = ω mod p^{j+1} then x^p = ω mod p^{j+2}, so k−1 steps reach p^k).
pub fn teichmuller(a: i64, p: u64, k: u32) -> Result<Padic> {
    let x0 = Padic::new(p, k, a)?;
    if !x0.is_unit() {
        return Err(Error::domain(format!(
            "teichmuller: p = {p} divides a = {a}"
        )));
    }
    let mut x = x0;
    for _ in 1..k {
        x = x.pow(p);
    }
    Ok(x)
}

/// Principal-unit part ⟨a⟩ = a / ω(a), congruent to 1 mod p.
pub fn unit_part(a: i64, p: u64, k: u32) -> Result<Padic> {
    let x = Padic::new(p, k, a)?;
    if !x.is_unit() {
        return Err(Error::domain(format!("unit_part: p = {p} divides a = {a}")));
    }
    x.try_div(&teichmuller(a, p, k)?)
}

/// Number of times p divides n.
fn val_p(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// floor(log_p(n)) for n >= 1.
fn ilog_p(n: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut m = p;
    while m <= n {
        v += 1;
        match m.checked_mul(p) {
            Some(next) => m = next,
            None => break,
        }
    }
    v
}

/// p-adic logarithm of a unit, defined as the log series applied to ⟨x⟩;
/// the Teichmüller factor is a root of unity and contributes 0.
///
/// With y = ⟨x⟩ and w = 1 − y (valuation >= 1), term n of log y = −Σ w^n/n
/// has valuation >= n − v_p(n) >= n − floor(log_p n). The bound is
/// non-decreasing in n (2n+? growth never advances floor(log_p) by more than
/// its own increment), so summation stops at the first n where it reaches k.
/// The division by n = p^e·c is exact: w^n is divisible by p^e, so we work
/// with e_max = floor(log_p n_max) guard digits and divide before reducing.
pub fn plog(x: &Padic) -> Result<Padic> {
    if !x.is_unit() {
        return Err(Error::domain(format!(
            "plog: {} is not a unit mod {}^{}",
            x.value(),
            x.p(),
            x.k()
        )));
    }
    let (p, k) = (x.p(), x.k());
    let mut n_max = 1u64;
    while n_max - (ilog_p(n_max, p) as u64) < k as u64 {
        n_max += 1;
    }
    let e_max = ilog_p(n_max, p);
    let kk = k + e_max;
    let big = checked_prime_power(p, kk)?;
    let y = unit_part(x.value() as i64, p, kk)?;
    let w = Padic::new(p, kk, 1)? - y; // valuation >= 1
    let mut sum = Padic::zero(p, k)?;
    let mut w_pow = Padic::one(p, kk)?;
    for n in 1..n_max {
        w_pow = w_pow * w;
        let e = val_p(n, p);
        let c = n / p.pow(e);
        // exact division by p^e, then by the p-unit c
        let pe = p.pow(e);
        debug_assert_eq!(w_pow.value() % pe, 0, "w^n must be divisible by p^{e}");
        let reduced = (w_pow.value() / pe) % big;
        let term = Padic::new(p, kk, reduced as i64)?
            .try_div(&Padic::new(p, kk, c as i64)?)?
            .reduce_to(k)?;
        sum = sum + term;
    }
    Ok(sum.neg())
}

/// The unit-log ratio log_p(ε)/√d as an element of Z_p, evaluated through the
/// series (u/t)·Σ_{n>=0} d^n/(2n+1)·(u/t)^{2n}, for p | d, p² ∤ d, p ∤ t.
///
/// Writing d = p·m and 2n+1 = p^e·c, term n equals p^{n−e}·m^n/c·(u/t)^{2n+1}
/// with n − e >= n − floor(log_p(2n+1)) >= 0: the p-power cancellation is
/// exact before any reduction, and the valuation bound is non-decreasing in
/// n, so summation stops at the first n where it reaches k.
pub fn plog_eps_over_sqrt_d(d: u64, t: u64, u: u64, p: u64, k: u32) -> Result<Padic> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::domain(format!("p = {p} must be an odd prime")));
    }
    if d % p != 0 {
        return Err(Error::domain(format!("p = {p} does not divide d = {d}")));
    }
    if (d / p) % p == 0 {
        return Err(Error::domain(format!("p^2 divides d = {d}: not squarefree")));
    }
    if t % p == 0 {
        return Err(Error::domain(format!("p = {p} divides t: ε is not a p-unit")));
    }
    let m = d / p;
    let modulus = checked_prime_power(p, k)?;
    let t_inv = Padic::new(p, k, (t % modulus) as i64)?.inv()?;
    let ratio = t_inv * Padic::new(p, k, (u % modulus) as i64)?;
    let ratio_sq = ratio * ratio;
    let m_padic = Padic::new(p, k, (m % modulus) as i64)?;
    let mut sum = Padic::zero(p, k)?;
    let mut m_pow = Padic::one(p, k)?; // m^n mod p^k
    let mut r_pow = Padic::one(p, k)?; // (u/t)^{2n} mod p^k
    let mut n = 0u64;
    loop {
        let bound = n.saturating_sub(ilog_p(2 * n + 1, p) as u64);
        if bound >= k as u64 {
            break;
        }
        let e = val_p(2 * n + 1, p);
        let c = (2 * n + 1) / p.pow(e);
        if n >= e as u64 {
            // term = p^{n−e} · m^n · c^{-1} · (u/t)^{2n}, times the overall u/t
            let p_pow = if n - e as u64 >= k as u64 {
                Padic::zero(p, k)?
            } else {
                Padic::new(p, k, p.pow((n - e as u64) as u32) as i64)?
            };
            let term = p_pow * m_pow * r_pow * Padic::new(p, k, c as i64)?.inv()?;
            sum = sum + term;
        }
        m_pow = m_pow * m_padic;
        r_pow = r_pow * ratio_sq;
        n += 1;
    }
    Ok(sum * ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::kronecker;

    #[test]
    fn teichmuller_spec_examples() {
        for p in [3u64, 5, 7, 13] {
            for k in [1u32, 2, 4] {
                assert_eq!(teichmuller(1, p, k).unwrap().value(), 1);
                let m = checked_prime_power(p, k).unwrap();
                assert_eq!(teichmuller(p as i64 - 1, p, k).unwrap().value(), m - 1);
            }
        }
        assert_eq!(teichmuller(2, 5, 2).unwrap().value(), 7);
        assert!(teichmuller(10, 5, 2).is_err());
    }

    #[test]
    fn teichmuller_is_root_of_unity_and_congruent() {
        for p in [3u64, 5, 7, 13, 31] {
            for k in [1u32, 2, 4] {
                for a in 1..p {
                    let w = teichmuller(a as i64, p, k).unwrap();
                    assert_eq!(w.pow(p - 1).value(), 1, "p={p} k={k} a={a}");
                    assert_eq!(w.value() % p, a, "p={p} k={k} a={a}");
                }
            }
        }
    }

    #[test]
    fn teichmuller_multiplicative() {
        for p in [3u64, 5, 7, 11, 13] {
            let k = 3;
            for a in 1..p {
                for b in 1..p {
                    let ab = (a * b % p) as i64;
                    let lhs = teichmuller(a as i64, p, k).unwrap()
                        * teichmuller(b as i64, p, k).unwrap();
                    let rhs = teichmuller(ab, p, k).unwrap();
                    assert_eq!(lhs, rhs, "p={p} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn unit_part_examples() {
        assert_eq!(unit_part(1, 7, 3).unwrap().value(), 1);
        // ⟨2⟩ = 2·ω(2)^{-1} = 2·7^{-1} = 2·18 = 36 = 11 mod 25
        assert_eq!(unit_part(2, 5, 2).unwrap().value(), 11);
        for p in [5u64, 11, 13] {
            for a in 1..p {
                let u = unit_part(a as i64, p, 3).unwrap();
                assert_eq!(u.value() % p, 1, "⟨a⟩ = 1 mod p");
                let w = teichmuller(a as i64, p, 3).unwrap();
                assert_eq!((w * u).value() % p.pow(3), a, "ω(a)·⟨a⟩ = a");
            }
        }
    }

    #[test]
    fn teichmuller_half_power_is_legendre() {
        let p = 11u64;
        let k = 3;
        let m = checked_prime_power(p, k).unwrap();
        for a in 1..p {
            let sign = teichmuller(a as i64, p, k).unwrap().pow((p - 1) / 2);
            let expect = kronecker(a as i64, p as i64);
            let expect_val = if expect == 1 { 1 } else { m - 1 };
            assert_eq!(sign.value(), expect_val, "a={a}");
        }
    }

    #[test]
    fn plog_examples() {
        // log of 1 is 0
        let one = Padic::new(7, 4, 1).unwrap();
        assert_eq!(plog(&one).unwrap().value(), 0);
        // log(1+p) = p mod p^2 (series x − x²/2 + …, all later terms vanish)
        for p in [3u64, 5, 7, 13] {
            let x = Padic::new(p, 2, (1 + p) as i64).unwrap();
            assert_eq!(plog(&x).unwrap().value(), p, "p={p}");
        }
        // 7 = ω(2) at (5,2) is a root of unity: log is 0
        let x = Padic::new(5, 2, 7).unwrap();
        assert_eq!(plog(&x).unwrap().value(), 0);
        // non-unit rejected
        let x = Padic::new(5, 2, 10).unwrap();
        assert!(plog(&x).is_err());
    }

    #[test]
    fn plog_functional_equation() {
        // deterministic pseudo-random unit pairs at (p,k) = (7,4)
        let (p, k) = (7u64, 4u32);
        let m = checked_prime_power(p, k).unwrap();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut count = 0;
        while count < 100 {
            let a = next() % m;
            let b = next() % m;
            if a % p == 0 || b % p == 0 {
                continue;
            }
            count += 1;
            let xa = Padic::new(p, k, a as i64).unwrap();
            let xb = Padic::new(p, k, b as i64).unwrap();
            let lhs = plog(&(xa * xb)).unwrap();
            let rhs = plog(&xa).unwrap() + plog(&xb).unwrap();
            assert_eq!(lhs, rhs, "a={a} b={b}");
        }
    }

    #[test]
    fn plog_of_unit_part_linear_mod_p2() {
        for p in [5u64, 11, 13] {
            for a in 1..(2 * p) {
                if a % p == 0 {
                    continue;
                }
                let u = unit_part(a as i64, p, 2).unwrap();
                let lg = plog(&u).unwrap();
                let expect = (u - Padic::one(p, 2).unwrap()).value();
                assert_eq!(lg.value(), expect, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn precision_reduction_commutes() {
        for a in [2i64, 4, 6, 23, 101] {
            let hi = unit_part(a, 5, 6).unwrap();
            let lo = unit_part(a, 5, 2).unwrap();
            assert_eq!(hi.reduce_to(2).unwrap(), lo);
            let hi_log = plog(&hi).unwrap();
            let lo_log = plog(&lo).unwrap();
            assert_eq!(hi_log.reduce_to(2).unwrap(), lo_log);
        }
    }

    #[test]
    fn unit_log_ratio_first_order() {
        // mod p the ratio is u/t for p > 3
        for (d, t, u, p) in [(5u64, 1u64, 1u64, 5u64), (35, 6, 1, 5), (65, 8, 1, 13)] {
            let got = plog_eps_over_sqrt_d(d, t, u, p, 1).unwrap();
            let t_inv = Padic::new(p, 1, t as i64).unwrap().inv().unwrap();
            let expect = t_inv * Padic::new(p, 1, u as i64).unwrap();
            assert_eq!(got, expect, "d={d}");
        }
        // p = 3: the second series term contributes (1+m)(u/t)
        for (d, t, u) in [(21u64, 5u64, 1u64), (6, 5, 2), (33, 46, 8)] {
            let m = d / 3;
            let got = plog_eps_over_sqrt_d(d, t, u, 3, 1).unwrap();
            let t_inv = Padic::new(3, 1, t as i64).unwrap().inv().unwrap();
            let ut = t_inv * Padic::new(3, 1, u as i64).unwrap();
            let expect = Padic::new(3, 1, (1 + m) as i64).unwrap() * ut;
            assert_eq!(got, expect, "d={d}");
        }
    }

    #[test]
    fn unit_log_ratio_guards() {
        assert!(plog_eps_over_sqrt_d(5, 1, 1, 7, 1).is_err()); // 7 ∤ 5
        assert!(plog_eps_over_sqrt_d(45, 1, 1, 3, 1).is_err()); // 9 | 45
        assert!(plog_eps_over_sqrt_d(5, 5, 1, 5, 1).is_err()); // p | t
    }

    #[test]
    fn unit_log_ratio_precision_commutes() {
        let hi = plog_eps_over_sqrt_d(5, 1, 1, 5, 6).unwrap();
        let lo = plog_eps_over_sqrt_d(5, 1, 1, 5, 2).unwrap();
        assert_eq!(hi.reduce_to(2).unwrap(), lo);
    }

    #[test]
    fn valuation_and_reduce() {
        let x = Padic::new(5, 4, 75).unwrap();
        assert_eq!(x.valuation(), 2);
        assert_eq!(Padic::zero(5, 4).unwrap().valuation(), 4);
        assert_eq!(x.reduce_to(2).unwrap().value(), 0);
        assert!(x.reduce_to(5).is_err());
    }
}
