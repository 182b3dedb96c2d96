//! Real quadratic field invariants: fundamental units from the periodic
//! continued fraction of √d or (1+√d)/2, exactly (big integers) and streamed
//! modulo p^k; real class numbers by cycles of reduced indefinite forms;
//! imaginary class numbers two independent ways.
//!
//! The continued-fraction state machine runs on the exact small state
//! (P_i, Q_i) with P, Q < 2√d + 1, so period detection is exact even when the
//! convergents are carried only modulo p^k.

use crate::arith::{checked_prime_power, isqrt, mul_mod};
use crate::bernoulli::{gen_bernoulli_exact, QuadChar};
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Fundamental unit ε = (δ/2)(t + u√d) of Q(√d), exact.
///
/// δ = 1 (d = 1 mod 4): t² − d·u² = ±4 with t = u mod 2, ε = (t + u√d)/2.
/// δ = 2 (otherwise):   t² − d·u² = ±1, ε = t + u√d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub d: u64,
    pub t: BigUint,
    pub u: BigUint,
    pub delta: u8,
    /// Sign of t² − d·u², i.e. the norm of ε.
    pub norm: i8,
}

impl FundamentalUnit {
    /// (t, u) reduced modulo p^k.
    pub fn residues(&self, p: u64, k: u32) -> Result<(u64, u64)> {
        let m = checked_prime_power(p, k)?;
        let mb = BigUint::from(m);
        let t = (&self.t % &mb).to_u64().expect("residue fits");
        let u = (&self.u % &mb).to_u64().expect("residue fits");
        Ok((t, u))
    }
}

/// (t, u) of the fundamental unit reduced mod p^k, plus exact period data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitResidue {
    pub d: u64,
    pub p: u64,
    pub k: u32,
    pub t_mod: u64,
    pub u_mod: u64,
    pub delta: u8,
    pub norm: i8,
    pub period_length: u64,
}

/// Default cap on continued-fraction steps; scans must fail loudly, not hang.
pub const DEFAULT_PERIOD_BOUND: u64 = 100_000_000;

/// Continued-fraction expansion state for (P + √d)/Q.
struct CfState {
    d: u64,
    sqrt_d: u64,
    p: u64,
    q: u64,
}

impl CfState {
    fn start(d: u64) -> CfState {
        let sqrt_d = isqrt(d);
        if d % 4 == 1 {
            // (1 + √d)/2; the invariant Q | d − P² holds since d is odd
            CfState { d, sqrt_d, p: 1, q: 2 }
        } else {
            CfState { d, sqrt_d, p: 0, q: 1 }
        }
    }

    /// Emits the next partial quotient and advances (P, Q).
    fn step(&mut self) -> u64 {
        // floor((P + √d)/Q) equals floor((P + ⌊√d⌋)/Q) for Q > 0
        let a = (self.p + self.sqrt_d) / self.q;
        let p_next = a * self.q - self.p;
        debug_assert!(self.d >= p_next * p_next, "CF state stays reduced");
        let q_next = (self.d - p_next * p_next) / self.q;
        debug_assert_eq!((self.d - p_next * p_next) % self.q, 0, "Q | d − P²");
        self.p = p_next;
        self.q = q_next;
        a
    }
}

/// Shared driver: runs the CF machine until one full period, feeding each
/// partial quotient to `push`, and returns (period_length, norm). The period
/// of the tail is detected by the exact first return of (P, Q) to the state
/// after the first step (the tail is purely periodic from index 1). When the
/// period ends, the last two pushed convergents bracket the unit: the caller
/// keeps convergents through a_{l−1} and one extra (a_l), and uses the older.
fn run_cf<F: FnMut(u64)>(d: u64, bound: u64, mut push: F) -> Result<(u64, i8)> {
    let mut st = CfState::start(d);
    let a0 = st.step();
    push(a0);
    let anchor = (st.p, st.q);
    let mut steps: u64 = 0;
    loop {
        let a = st.step();
        steps += 1;
        if (st.p, st.q) == anchor {
            // period l = steps; the partial quotient just consumed is a_l
            let norm = if steps % 2 == 0 { 1 } else { -1 };
            return Ok((steps, norm));
        }
        push(a);
        if steps >= bound {
            return Err(Error::Resource(format!(
                "continued-fraction period of d = {d} exceeds bound {bound}"
            )));
        }
    }
}

fn check_unit_domain(d: u64) -> Result<u8> {
    let disc = crate::arith::fundamental_discriminant(d)?;
    Ok(disc.delta)
}

/// Exact fundamental unit by the periodic continued fraction of (1+√d)/2
/// (d = 1 mod 4) or √d (otherwise). With α₀ the expanded irrational, ℓ the
/// tail period, and A/B = A_{ℓ−1}/B_{ℓ−1} the last convergent of the first
/// period, ε = A − B·conj(α₀); for δ = 1 the stored pair is
/// (t, u) = (2A − B, B), for δ = 2 it is (A, B).
pub fn fundamental_unit(d: u64) -> Result<FundamentalUnit> {
    let delta = check_unit_domain(d)?;
    // rolling convergents: (prev2, prev1) = (A_{i−2}, A_{i−1})
    let mut a2 = BigUint::from(0u32);
    let mut a1 = BigUint::from(1u32);
    let mut b2 = BigUint::from(1u32);
    let mut b1 = BigUint::from(0u32);
    let (_period, norm) = run_cf(d, 1_000_000, |a| {
        let a = BigUint::from(a);
        let a_next = &a * &a1 + &a2;
        let b_next = &a * &b1 + &b2;
        a2 = std::mem::replace(&mut a1, a_next);
        b2 = std::mem::replace(&mut b1, b_next);
    })?;
    // run_cf pushes exactly a_0..a_{ℓ−1}, so (a1, b1) = (A_{ℓ−1}, B_{ℓ−1})
    let (t, u) = if delta == 1 {
        (BigUint::from(2u32) * &a1 - &b1, b1)
    } else {
        (a1, b1)
    };
    #[cfg(debug_assertions)]
    {
        use num_bigint::BigInt;
        let tt = BigInt::from(t.clone());
        let uu = BigInt::from(u.clone());
        let lhs = &tt * &tt - BigInt::from(d) * &uu * &uu;
        let want = BigInt::from(norm as i64 * if delta == 1 { 4 } else { 1 });
        debug_assert_eq!(lhs, want, "Pell relation for d = {d}");
    }
    Ok(FundamentalUnit {
        d,
        t,
        u,
        delta,
        norm,
    })
}

/// Fundamental unit residues mod p^k without big integers: the CF state is
/// exact, the convergents are carried mod p^k.
pub fn fundamental_unit_mod(d: u64, p: u64, k: u32) -> Result<UnitResidue> {
    fundamental_unit_mod_bounded(d, p, k, DEFAULT_PERIOD_BOUND)
}

pub fn fundamental_unit_mod_bounded(d: u64, p: u64, k: u32, bound: u64) -> Result<UnitResidue> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::domain(format!("p = {p} must be an odd prime")));
    }
    let delta = check_unit_domain(d)?;
    let m = checked_prime_power(p, k)?;
    let mm = unit_convergents_mod(d, &[m], bound)?;
    let (a_l1, b_l1) = mm.residues[0];
    let (t_mod, u_mod) = normalize_unit_residue(a_l1, b_l1, delta, m);
    Ok(UnitResidue {
        d,
        p,
        k,
        t_mod,
        u_mod,
        delta,
        norm: mm.norm,
        period_length: mm.period_length,
    })
}

fn normalize_unit_residue(a: u64, b: u64, delta: u8, m: u64) -> (u64, u64) {
    if delta == 1 {
        (((2 * a as u128 + m as u128 - b as u128) % m as u128) as u64, b)
    } else {
        (a, b)
    }
}

/// Convergents A_{l−1}, B_{l−1} reduced modulo each of several moduli in one
/// continued-fraction pass (the scanner's fast path).
pub struct MultiUnitResidues {
    pub d: u64,
    pub delta: u8,
    pub norm: i8,
    pub period_length: u64,
    /// (A, B) mod moduli[i], unnormalized.
    pub residues: Vec<(u64, u64)>,
}

pub fn unit_convergents_mod(d: u64, moduli: &[u64], bound: u64) -> Result<MultiUnitResidues> {
    let delta = if d % 4 == 1 { 1 } else { 2 };
    let n = moduli.len();
    // rolling convergents mod each modulus: (prev2, prev1)
    let mut a2 = vec![0u64; n];
    let mut a1 = vec![1u64; n];
    let mut b2 = vec![1u64; n];
    let mut b1 = vec![0u64; n];
    let (period_length, norm) = run_cf(d, bound, |a| {
        for i in 0..n {
            let m = moduli[i];
            let am = a % m;
            let a_next = (mul_mod(am, a1[i], m) + a2[i]) % m;
            let b_next = (mul_mod(am, b1[i], m) + b2[i]) % m;
            a2[i] = a1[i];
            a1[i] = a_next;
            b2[i] = b1[i];
            b1[i] = b_next;
        }
    })?;
    let residues = a1.into_iter().zip(b1).collect();
    Ok(MultiUnitResidues {
        d,
        delta,
        norm,
        period_length,
        residues,
    })
}

/// Normalized (t, u) residues mod each modulus for the scanner.
pub fn unit_tu_mod(d: u64, moduli: &[u64], bound: u64) -> Result<MultiUnitResidues> {
    let mut mm = unit_convergents_mod(d, moduli, bound)?;
    for (i, m) in moduli.iter().enumerate() {
        let (a, b) = mm.residues[i];
        mm.residues[i] = normalize_unit_residue(a, b, mm.delta, *m);
    }
    Ok(mm)
}

/// Norm of the fundamental unit from the period parity alone.
pub fn unit_norm(d: u64, bound: u64) -> Result<i8> {
    Ok(run_cf(d, bound, |_| {})?.1)
}

// ---------------------------------------------------------------------------
// Class numbers
// ---------------------------------------------------------------------------

/// Narrow class number h⁺: the number of cycles of reduced indefinite binary
/// quadratic forms (a, b, c) of discriminant D = b² − 4ac > 0.
/// Reduced means |√D − 2|a|| < b < √D, all checks done in exact integers.
pub fn narrow_class_number(disc: i64) -> Result<u64> {
    if disc <= 0 {
        return Err(Error::domain("narrow_class_number: need D > 0"));
    }
    let d = disc as u64;
    let s = isqrt(d);
    if s * s == d {
        return Err(Error::domain("narrow_class_number: square discriminant"));
    }
    let is_reduced = |a: i64, b: i64| -> bool {
        // 0 < b < √D and √D − b < 2|a| < √D + b
        if b <= 0 || (b as u64) > s {
            return false;
        }
        let two_a = 2 * a.unsigned_abs();
        let b = b as u64;
        // 2|a| < √D + b  ⟺  (2|a| − b)² < D when 2|a| > b, else always
        let upper = if two_a > b { (two_a - b) * (two_a - b) < d } else { true };
        // 2|a| > √D − b  ⟺  (2|a| + b)² > D
        let lower = (two_a + b) * (two_a + b) > d;
        upper && lower
    };
    // enumerate: b ≡ D (mod 2), 0 < b < √D; (D − b²)/4 = |a|·|c|
    let mut forms: std::collections::HashSet<(i64, i64, i64)> = Default::default();
    let mut b = if disc % 2 == 0 { 2 } else { 1 };
    while (b as u64) <= s {
        let n = (d - (b as u64) * (b as u64)) / 4;
        if (d - (b as u64) * (b as u64)) % 4 == 0 && n > 0 {
            let mut a = 1u64;
            while a * a <= n {
                if n % a == 0 {
                    for aa in [a, n / a] {
                        if is_reduced(aa as i64, b) {
                            let c = (n / aa) as i64;
                            forms.insert((aa as i64, b, -c));
                            forms.insert((-(aa as i64), b, c));
                        }
                    }
                }
                a += 1;
            }
        }
        b += 2;
    }
    // rho: (a, b, c) → (c, b', (b'² − D)/(4c)) with b' ≡ −b (mod 2|c|) in the
    // reduction window √D − 2|c| < b' ≤ √D ... < √D (b' < √D exact).
    let rho = |(_, b, c): (i64, i64, i64)| -> (i64, i64, i64) {
        let two_c = 2 * c.abs();
        let r = (-b).rem_euclid(two_c);
        // largest b' ≡ r (mod 2|c|) with b' ≤ s
        let b_next = r + two_c * ((s as i64 - r).div_euclid(two_c));
        debug_assert!(b_next > 0 && (b_next as u64) <= s);
        let c_next = ((b_next * b_next) - disc) / (4 * c);
        debug_assert_eq!((b_next * b_next - disc) % (4 * c), 0);
        (c, b_next, c_next)
    };
    let mut cycles = 0u64;
    let mut seen: std::collections::HashSet<(i64, i64, i64)> = Default::default();
    for &start in &forms {
        if seen.contains(&start) {
            continue;
        }
        cycles += 1;
        let mut cur = start;
        loop {
            seen.insert(cur);
            cur = rho(cur);
            debug_assert!(forms.contains(&cur), "rho leaves the reduced set: {cur:?}");
            if cur == start {
                break;
            }
        }
    }
    Ok(cycles)
}

/// Wide class number h of Q(√d): h⁺ when N(ε) = −1, else h⁺/2.
pub fn class_number_real(d: u64) -> Result<u64> {
    if d < 2 || d > 1_000_000 {
        return Err(Error::domain(format!(
            "class_number_real: d = {d} outside (1, 10^6]"
        )));
    }
    let disc = crate::arith::fundamental_discriminant(d)?;
    let h_plus = narrow_class_number(disc.disc)?;
    let norm = unit_norm(d, DEFAULT_PERIOD_BOUND)?;
    if norm == -1 {
        Ok(h_plus)
    } else {
        if h_plus % 2 != 0 {
            return Err(Error::internal(format!(
                "h⁺ = {h_plus} odd with norm +1 at d = {d}"
            )));
        }
        Ok(h_plus / 2)
    }
}

/// Class number H of the imaginary field Q(√−m) with discriminant below −4,
/// computed as −B_{1,χ} (exact rational, must be a positive integer) and
/// cross-checked against the count of reduced positive-definite forms.
pub fn class_number_imag(m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::domain("class_number_imag: m must be positive"));
    }
    if !crate::arith::factor(m)?.is_squarefree() {
        return Err(Error::domain(format!("class_number_imag: {m} not squarefree")));
    }
    let disc: i64 = if m % 4 == 3 {
        -(m as i64)
    } else {
        -4 * (m as i64)
    };
    if disc >= -4 {
        return Err(Error::domain(format!(
            "class_number_imag: discriminant {disc} is −3 or −4 (extra units)"
        )));
    }
    let chi = QuadChar::from_fundamental_discriminant(disc)?;
    let b1 = gen_bernoulli_exact(1, &chi)?;
    let neg = -b1;
    if !neg.is_integer() {
        return Err(Error::internal(format!("−B_(1,χ_{disc}) not an integer")));
    }
    let h_bernoulli = neg
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::internal("negative class number from −B_(1,χ)"))?;
    let h_forms = imag_form_count(disc)?;
    if h_bernoulli != h_forms {
        return Err(Error::internal(format!(
            "class_number_imag({m}): −B_(1,χ) = {h_bernoulli} but form count = {h_forms}"
        )));
    }
    Ok(h_bernoulli)
}

/// Count of reduced positive-definite forms (a, b, c), D = b² − 4ac < 0:
/// −a < b <= a <= c, with b >= 0 when a = c.
fn imag_form_count(disc: i64) -> Result<u64> {
    if disc >= 0 {
        return Err(Error::domain("imag_form_count: need D < 0"));
    }
    let mut count = 0u64;
    let bound = isqrt((-disc) as u64 / 3) as i64;
    for a in 1..=bound.max(1) {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if a == c && b < 0 {
                continue;
            }
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_u64(d: u64) -> (u64, u64, u8, i8) {
        let fu = fundamental_unit(d).unwrap();
        (
            fu.t.to_u64().unwrap(),
            fu.u.to_u64().unwrap(),
            fu.delta,
            fu.norm,
        )
    }

    #[test]
    fn fundamental_unit_spec_examples() {
        assert_eq!(unit_u64(5), (1, 1, 1, -1));
        assert_eq!(unit_u64(7), (8, 3, 2, 1));
        assert_eq!(unit_u64(13), (3, 1, 1, -1));
        assert_eq!(unit_u64(21), (5, 1, 1, 1));
        assert_eq!(unit_u64(17), (8, 2, 1, -1));
        assert_eq!(unit_u64(2), (1, 1, 2, -1));
        assert_eq!(unit_u64(3), (2, 1, 2, 1));
        // d = 33: integral unit 23 + 4√33 stored as (46, 8, δ=1)
        assert_eq!(unit_u64(33), (46, 8, 1, 1));
        assert!(fundamental_unit(12).is_err());
    }

    #[test]
    fn unit_brute_force_minimality_small() {
        // brute force over u: first (t, u) with t² − d·u² = ±4 (δ=1) / ±1 (δ=2)
        for d in 2..=150u64 {
            if crate::arith::fundamental_discriminant(d).is_err() {
                continue;
            }
            let (t, u, delta, norm) = unit_u64(d);
            let target = if delta == 1 { 4i64 } else { 1 };
            let mut found: Option<(u64, u64, i8)> = None;
            'outer: for uu in 1..=u {
                let duu = (d * uu * uu) as i64;
                for sign in [-1i64, 1] {
                    let tt2 = duu + sign * target;
                    if tt2 < 0 {
                        continue;
                    }
                    let tt = isqrt(tt2 as u64);
                    if (tt * tt) as i64 == tt2 && (delta == 2 || (tt % 2 == uu % 2)) {
                        found = Some((tt, uu, sign as i8));
                        break 'outer;
                    }
                }
            }
            let (bt, bu, bnorm) = found.expect("brute force finds a solution");
            assert_eq!((bt, bu, bnorm), (t, u, norm), "d={d}");
        }
    }

    #[test]
    fn unit_mod_matches_exact() {
        for d in 2..=300u64 {
            if crate::arith::fundamental_discriminant(d).is_err() {
                continue;
            }
            let fu = fundamental_unit(d).unwrap();
            for p in [3u64, 5, 7] {
                for k in [1u32, 2] {
                    let ur = fundamental_unit_mod(d, p, k).unwrap();
                    let (t, u) = fu.residues(p, k).unwrap();
                    assert_eq!((ur.t_mod, ur.u_mod), (t, u), "d={d} p={p} k={k}");
                    assert_eq!(ur.delta, fu.delta);
                    assert_eq!(ur.norm, fu.norm);
                }
            }
        }
    }

    #[test]
    fn unit_mod_spec_examples() {
        let ur = fundamental_unit_mod(5, 5, 2).unwrap();
        assert_eq!((ur.t_mod, ur.u_mod), (1, 1));
        // known composite counterexample: 43 divides u(430)
        let ur = fundamental_unit_mod(430, 43, 1).unwrap();
        assert_eq!(ur.u_mod, 0);
        assert_ne!(ur.t_mod, 0);
        assert_eq!(ur.period_length, 14);
    }

    #[test]
    fn multi_modulus_pass_agrees() {
        let d = 430u64;
        let mm = unit_tu_mod(d, &[25, 43 * 43], DEFAULT_PERIOD_BOUND).unwrap();
        let r5 = fundamental_unit_mod(d, 5, 2).unwrap();
        let r43 = fundamental_unit_mod(d, 43, 2).unwrap();
        assert_eq!(mm.residues[0], (r5.t_mod, r5.u_mod));
        assert_eq!(mm.residues[1], (r43.t_mod, r43.u_mod));
        assert_eq!(mm.norm, r5.norm);
    }

    #[test]
    fn real_class_numbers() {
        assert_eq!(class_number_real(5).unwrap(), 1);
        assert_eq!(class_number_real(3).unwrap(), 1);
        assert_eq!(class_number_real(10).unwrap(), 2);
        assert_eq!(class_number_real(229).unwrap(), 3);
        assert_eq!(class_number_real(39).unwrap(), 2);
        assert_eq!(class_number_real(79).unwrap(), 3);
        assert_eq!(class_number_real(223).unwrap(), 3);
    }

    #[test]
    fn imag_class_numbers() {
        assert_eq!(class_number_imag(7).unwrap(), 1);
        assert_eq!(class_number_imag(5).unwrap(), 2);
        assert_eq!(class_number_imag(23).unwrap(), 3);
        assert_eq!(class_number_imag(13).unwrap(), 2);
        assert_eq!(class_number_imag(47).unwrap(), 5);
        // −3 and −4 excluded
        assert!(class_number_imag(1).is_err());
        assert!(class_number_imag(3).is_err());
    }

    #[test]
    fn pell_relation_range() {
        use num_bigint::BigInt;
        for d in 2..=500u64 {
            if crate::arith::fundamental_discriminant(d).is_err() {
                continue;
            }
            let fu = fundamental_unit(d).unwrap();
            let t = BigInt::from(fu.t.clone());
            let u = BigInt::from(fu.u.clone());
            let lhs = &t * &t - BigInt::from(d) * &u * &u;
            let want = BigInt::from(fu.norm as i64 * if fu.delta == 1 { 4 } else { 1 });
            assert_eq!(lhs, want, "d={d}");
            if fu.delta == 1 {
                let tb: BigInt = &t % 2;
                let ub: BigInt = &u % 2;
                assert_eq!(tb, ub, "t = u mod 2 at d={d}");
            }
        }
    }
}
