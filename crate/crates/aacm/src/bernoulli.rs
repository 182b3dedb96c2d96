//! Bernoulli and Euler numbers, exactly and modulo p, and generalized
//! Bernoulli numbers B_{n,χ} for real quadratic characters.
//!
//! Conventions: B_n are the coefficients of x/(e^x − 1), so B_1 = −1/2;
//! E_n are the coefficients of 1/cosh(x), so E_2 = −1, E_4 = 5, E_6 = −61.
//! (The 1/cos convention differs by a factor (−1)^{n/2} on even indices;
//! `euler_cos_mod_p` converts.)

use crate::arith::{
    is_fundamental_discriminant, kronecker, mod_inv, mul_mod, RationalModPk,
};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A real quadratic Dirichlet character, carried as the Kronecker symbol of a
/// fundamental discriminant (disc = 1 is the principal character mod 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct QuadChar {
    disc: i64,
}

impl QuadChar {
    pub fn principal() -> Self {
        QuadChar { disc: 1 }
    }

    pub fn from_fundamental_discriminant(disc: i64) -> Result<Self> {
        if !is_fundamental_discriminant(disc) {
            return Err(Error::domain(format!(
                "{disc} is not a fundamental discriminant"
            )));
        }
        Ok(QuadChar { disc })
    }

    /// χ_D attached to the real field Q(sqrt(d)), d squarefree > 1.
    pub fn for_real_field(d: u64) -> Result<Self> {
        Ok(QuadChar {
            disc: crate::arith::fundamental_discriminant(d)?.disc,
        })
    }

    /// The Legendre symbol (·|p) as a primitive character: conductor p,
    /// discriminant p* = ±p fixed by p mod 4.
    pub fn legendre(p: u64) -> Result<Self> {
        if p < 3 || p % 2 == 0 {
            return Err(Error::domain(format!("legendre: p = {p} must be odd")));
        }
        let p = p as i64;
        Ok(QuadChar {
            disc: if p % 4 == 1 { p } else { -p },
        })
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn conductor(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    /// χ(−1) = 1 exactly when the discriminant is positive.
    pub fn is_even(&self) -> bool {
        self.disc > 0
    }

    pub fn is_principal(&self) -> bool {
        self.disc == 1
    }

    pub fn eval(&self, n: i64) -> i32 {
        kronecker(self.disc, n)
    }

    /// Primitive product character: quadratic characters multiply by taking
    /// the square class of the product of their discriminants.
    pub fn mul(&self, other: &QuadChar) -> Result<QuadChar> {
        let prod = self.disc.checked_mul(other.disc).ok_or_else(|| {
            Error::Precision("character product discriminant overflows".into())
        })?;
        // squarefree core of the product, sign preserved
        let mut core = 1i64;
        let f = crate::arith::factor(prod.unsigned_abs())?;
        for (q, e) in f.primes {
            if e % 2 == 1 {
                core *= q as i64;
            }
        }
        if prod < 0 {
            core = -core;
        }
        let disc = if core.rem_euclid(4) == 1 { core } else { 4 * core };
        QuadChar::from_fundamental_discriminant(disc)
    }
}

/// The character ψ with ψ(n) = (n|p)·χ_D(n) away from D, primitive of
/// conductor D/p, for squarefree d with odd p | d. Its discriminant is D/p*.
pub fn build_psi(d: u64, p: u64) -> Result<QuadChar> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::domain(format!("build_psi: p = {p} must be odd")));
    }
    if d % p != 0 {
        return Err(Error::domain(format!("build_psi: p = {p} does not divide d = {d}")));
    }
    let disc = crate::arith::fundamental_discriminant(d)?.disc;
    let p_star = if p % 4 == 1 { p as i64 } else { -(p as i64) };
    debug_assert_eq!(disc % p_star, 0);
    let psi = QuadChar::from_fundamental_discriminant(disc / p_star)?;
    debug_assert_eq!(psi.conductor(), disc as u64 / p, "conductor must be D/p");
    Ok(psi)
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact Bernoulli numbers B_0..=B_64 by the defining convolution
/// Σ_{j<=m} C(m+1, j) B_j = 0.
pub fn bernoulli_exact(n: u32) -> Result<BigRational> {
    if n > 64 {
        return Err(Error::Precision(format!(
            "bernoulli_exact: n = {n} exceeds the exact-rational cap 64"
        )));
    }
    let row = bernoulli_exact_row(n);
    Ok(row[n as usize].clone())
}

fn bernoulli_exact_row(n: u32) -> Vec<BigRational> {
    let n = n as usize;
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    // Pascal row for C(m+1, j), maintained additively.
    let mut pascal: Vec<BigInt> = vec![BigInt::one()]; // row 0
    for m in 1..=n {
        // advance pascal to row m+1 (length m+2)
        while pascal.len() < m + 2 {
            let mut next = vec![BigInt::one(); pascal.len() + 1];
            for j in 1..pascal.len() {
                next[j] = &pascal[j - 1] + &pascal[j];
            }
            pascal = next;
        }
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(pascal[j].clone()) * bj;
        }
        let bm = -acc / big(m as i64 + 1);
        b.push(bm);
    }
    b
}

/// Akiyama–Tanigawa transform modulo p; divides only by integers below p.
/// The transform natively produces the +1/2 convention at n = 1, so that
/// single value is negated to stay in the x/(e^x−1) convention.
pub fn bernoulli_mod_p_akiyama_tanigawa(n: u32, p: u64) -> Result<u64> {
    check_bernoulli_mod_args(n, p)?;
    let n = n as usize;
    let mut a: Vec<u64> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        a.push(mod_inv(j as i64 + 1, p)?);
    }
    for i in 1..=n {
        for j in 0..=(n - i) {
            let diff = (a[j] + p - a[j + 1]) % p;
            a[j] = mul_mod(j as u64 + 1, diff, p);
        }
    }
    Ok(if n == 1 { (p - a[0]) % p } else { a[0] })
}

fn check_bernoulli_mod_args(n: u32, p: u64) -> Result<()> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::domain(format!("p = {p} must be an odd prime")));
    }
    if n > 0 && n as u64 % (p - 1) == 0 {
        return Err(Error::Pole(format!(
            "B_{n} has p = {p} in its denominator ((p−1) | n)"
        )));
    }
    if n as u64 > p - 2 && n % 2 == 0 {
        return Err(Error::domain(format!(
            "n = {n} exceeds the mod-p recurrence cap p−2 = {}",
            p - 2
        )));
    }
    Ok(())
}

/// B_n mod p. Odd n >= 3 return 0; even n must satisfy n <= p−2, which keeps
/// the whole recurrence clear of von Staudt–Clausen poles.
pub fn bernoulli_mod_p(n: u32, p: u64) -> Result<RationalModPk> {
    check_bernoulli_mod_args(n, p)?;
    if n >= 3 && n % 2 == 1 {
        return RationalModPk::from_residue(0, p, 1);
    }
    let value = bernoulli_mod_p_akiyama_tanigawa(n, p)?;
    RationalModPk::from_residue(value, p, 1)
}

/// The whole row B_0..=B_n mod p by the convolution recurrence
/// B_m = −(1/(m+1)) Σ_{j<m} C(m+1, j) B_j, all divisions by units below p.
pub fn bernoulli_row_mod_p(n: u32, p: u64) -> Result<Vec<u64>> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::domain(format!("p = {p} must be an odd prime")));
    }
    if n as u64 > p - 2 {
        return Err(Error::domain(format!(
            "row cap: n = {n} exceeds p−2 = {}",
            p - 2
        )));
    }
    let n = n as usize;
    let mut b = vec![0u64; n + 1];
    b[0] = 1;
    // Pascal row C(m+1, ·) mod p, advanced additively (no divisions).
    let mut pascal: Vec<u64> = vec![1, 1]; // row 1
    for m in 1..=n {
        // advance from row m to row m+1
        let mut next = vec![1u64; m + 2];
        for j in 1..=m {
            next[j] = (pascal[j - 1] + pascal[j]) % p;
        }
        pascal = next;
        let mut acc = 0u64;
        for j in 0..m {
            acc = (acc + mul_mod(pascal[j], b[j], p)) % p;
        }
        let inv = mod_inv(m as i64 + 1, p)?;
        b[m] = mul_mod((p - acc) % p, inv, p);
    }
    Ok(b)
}

/// Euler numbers E_n mod p (cosh convention) via the integer recurrence
/// Σ_{j<=m} C(2m, 2j) E_{2j} = 0 with additive Pascal rows, valid for any n.
pub fn euler_mod_p(n: u32, p: u64) -> Result<u64> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::domain(format!("p = {p} must be an odd prime")));
    }
    if n % 2 == 1 {
        return Ok(0);
    }
    let n = n as usize;
    let mut e = vec![0u64; n / 2 + 1]; // e[j] = E_{2j} mod p
    e[0] = 1;
    let mut pascal: Vec<u64> = vec![1]; // row 0
    for m in 1..=(n / 2) {
        // advance pascal from row 2(m−1) to row 2m
        for _ in 0..2 {
            let mut next = vec![1u64; pascal.len() + 1];
            for j in 1..pascal.len() {
                next[j] = (pascal[j - 1] + pascal[j]) % p;
            }
            pascal = next;
        }
        let mut acc = 0u64;
        for j in 0..m {
            acc = (acc + mul_mod(pascal[2 * j], e[j], p)) % p;
        }
        e[m] = (p - acc) % p;
    }
    Ok(e[n / 2])
}

/// Exact Euler numbers (cosh convention) for small n.
pub fn euler_exact(n: u32) -> Result<BigInt> {
    if n > 64 {
        return Err(Error::Precision(format!(
            "euler_exact: n = {n} exceeds the exact cap 64"
        )));
    }
    if n % 2 == 1 {
        return Ok(BigInt::zero());
    }
    let half = (n / 2) as usize;
    let mut e: Vec<BigInt> = vec![BigInt::zero(); half + 1];
    e[0] = BigInt::one();
    let mut pascal: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=half {
        for _ in 0..2 {
            let mut next = vec![BigInt::one(); pascal.len() + 1];
            for j in 1..pascal.len() {
                next[j] = &pascal[j - 1] + &pascal[j];
            }
            pascal = next;
        }
        let mut acc = BigInt::zero();
        for j in 0..m {
            acc += &pascal[2 * j] * &e[j];
        }
        e[m] = -acc;
    }
    Ok(e[half].clone())
}

/// E_n mod p in the 1/cos convention: differs by (−1)^{n/2} on even n.
pub fn euler_cos_mod_p(n: u32, p: u64) -> Result<u64> {
    let v = euler_mod_p(n, p)?;
    Ok(if (n / 2) % 2 == 1 { (p - v) % p } else { v })
}

/// Exact generalized Bernoulli number B_{n,χ} = f^{n−1} Σ_{a<=f} χ(a) B_n(a/f)
/// with B_n(x) the Bernoulli polynomial; n <= 64.
pub fn gen_bernoulli_exact(n: u32, chi: &QuadChar) -> Result<BigRational> {
    if n > 64 {
        return Err(Error::Precision(format!(
            "gen_bernoulli_exact: n = {n} exceeds the exact-rational cap 64"
        )));
    }
    let f = chi.conductor() as i64;
    let b = bernoulli_exact_row(n);
    // binomials C(n, j)
    let mut binom: Vec<BigInt> = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::one(); binom.len() + 1];
        for i in 1..binom.len() {
            next[i] = &binom[i - 1] + &binom[i];
        }
        binom = next;
    }
    let mut total = BigRational::zero();
    for a in 1..=f {
        let c = chi.eval(a);
        if c == 0 {
            continue;
        }
        let x = big(a) / big(f);
        // B_n(x) = Σ_j C(n,j) B_j x^{n−j}
        let mut poly = BigRational::zero();
        let mut x_pow = BigRational::one();
        for j in (0..=n as usize).rev() {
            // iterate j from n down so x_pow = x^{n−j}
            poly += BigRational::from_integer(binom[j].clone()) * &b[j] * &x_pow;
            x_pow *= &x;
        }
        let signed = if c == 1 { poly } else { -poly };
        total += signed;
    }
    // f^{n−1}
    let f_pow = if n == 0 {
        BigRational::one() / big(f)
    } else {
        BigRational::from_integer(BigInt::from(f).pow(n - 1))
    };
    Ok(total * f_pow)
}

/// B_{n,χ} mod p through the same finite identity, expanded as
/// Σ_j C(n,j) B_j f^{j−1} S_{n−j} with S_k = Σ_{a<=f} χ(a) a^k mod p.
/// Requires p ∤ f and n <= p−2, which keeps every B_j in the sum pole-free
/// (only j = 0 is divisible by p−1, and B_0 = 1).
pub fn gen_bernoulli_mod_p(n: u32, chi: &QuadChar, p: u64) -> Result<RationalModPk> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::domain(format!("p = {p} must be an odd prime")));
    }
    let f = chi.conductor();
    if f % p == 0 {
        return Err(Error::domain(format!(
            "gen_bernoulli_mod_p: conductor {f} divisible by p = {p}"
        )));
    }
    if n as u64 > p - 2 {
        return Err(Error::Pole(format!(
            "gen_bernoulli_mod_p: n = {n} exceeds p−2 = {}; the (p−1) | j pole \
             region would enter the Bernoulli sum",
            p - 2
        )));
    }
    let nn = n as usize;
    let b = bernoulli_row_mod_p(n, p)?;
    // power sums S_k = Σ_{a=1}^{f} χ(a) a^k mod p for k = 0..=n
    let mut s = vec![0u64; nn + 1];
    for a in 1..=f {
        let c = chi.eval(a as i64);
        if c == 0 {
            continue;
        }
        let am = a % p;
        let mut pw = 1u64;
        for sk in s.iter_mut() {
            if c == 1 {
                *sk = (*sk + pw) % p;
            } else {
                *sk = (*sk + p - pw) % p;
            }
            pw = mul_mod(pw, am, p);
        }
    }
    // binomials C(n, j) mod p via factorials (n < p)
    let mut fact = vec![1u64; nn + 1];
    for i in 1..=nn {
        fact[i] = mul_mod(fact[i - 1], i as u64, p);
    }
    let binom = |j: usize| -> Result<u64> {
        let denom = mul_mod(fact[j], fact[nn - j], p);
        Ok(mul_mod(fact[nn], mod_inv(denom as i64, p)?, p))
    };
    let mut total = 0u64;
    let mut f_pow = mod_inv(f as i64, p)?; // f^{j−1} starting at j = 0
    for j in 0..=nn {
        let term = mul_mod(mul_mod(binom(j)?, b[j], p), mul_mod(f_pow, s[nn - j], p), p);
        total = (total + term) % p;
        f_pow = mul_mod(f_pow, f % p, p);
    }
    RationalModPk::from_residue(total, p, 1)
}

/// Reduce an exact rational mod p^k; pole error if p divides the denominator.
pub fn reduce_rational_mod_pk(x: &BigRational, p: u64, k: u32) -> Result<RationalModPk> {
    let m = crate::arith::checked_prime_power(p, k)?;
    let mb = BigInt::from(m);
    let num = x.numer().clone();
    let den = x.denom().clone();
    if (&den % BigInt::from(p)).is_zero() {
        return Err(Error::Pole(format!(
            "denominator of {x} divisible by p = {p}"
        )));
    }
    let num_red = ((num % &mb) + &mb) % &mb;
    let den_red = ((den % &mb) + &mb) % &mb;
    let num_u: u64 = num_red.try_into().map_err(|_| Error::internal("mod fold"))?;
    let den_u: u64 = den_red.try_into().map_err(|_| Error::internal("mod fold"))?;
    let value = mul_mod(num_u, mod_inv(den_u as i64, m)?, m);
    RationalModPk::from_residue(value, p, k)
}
