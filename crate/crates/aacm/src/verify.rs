//! One verifier per congruence family. Each computes the two sides of its
//! congruence through disjoint dependency chains — units and class numbers on
//! one side, characters/Bernoulli/L-values on the other — and returns a
//! structured verdict. Degenerate is a first-class outcome, reserved for the
//! documented 0 ≡ 0 situations (the p = 3 trivial zero and counterexample d
//! where both sides vanish).

use crate::arith::{fundamental_discriminant, mod_inv, mul_mod};
use crate::bernoulli::{
    bernoulli_mod_p, build_psi, euler_mod_p, gen_bernoulli_mod_p, QuadChar,
};
use crate::error::{Error, Result};
use crate::lp::{is_lp_unit, LpUnitStatus};
use crate::quadfield::{class_number_imag, class_number_real, fundamental_unit_mod};
use serde::Serialize;

/// Which congruence a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremTag {
    /// hu/t = B_{(p−1)/2} mod p for prime p = 1 mod 4.
    Aac,
    /// hu/t = E_{(p−3)/2}/2 mod p for prime p = 3 mod 4.
    Mordell,
    /// hu/t = δ·B_{(p−1)/2, ψ} mod p for squarefree d = pm, p > 3.
    CompositeAac,
    /// hu/t = δ·B_{1, ψ} mod 3 for d = 3m, m = 1 mod 3.
    CompositeAac3,
    /// hu/t = −δH mod 3 with H the class number of Q(√−m).
    ImagClassNumber,
    /// (A+B)/p = 2hu/t mod p over the residue/non-residue products.
    ProductSum,
    /// (A−B)/p = 4hu/t mod p.
    ProductDiff,
    /// The Wilson-style normalization A, B = ∓1 mod p behind the products.
    WilsonProducts,
    /// 2h·log_p(ε)/√D = L_p(1, χ_D) reduced mod p.
    ClassNumberFormula,
    /// Unit-coefficient divisibility p | u against the L_p(1, χ_D) unit test.
    Caacm,
}

impl std::fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TheoremTag::Aac => "aac",
            TheoremTag::Mordell => "mordell",
            TheoremTag::CompositeAac => "composite-aac",
            TheoremTag::CompositeAac3 => "composite-aac-3",
            TheoremTag::ImagClassNumber => "imag-class-number",
            TheoremTag::ProductSum => "product-sum",
            TheoremTag::ProductDiff => "product-diff",
            TheoremTag::WilsonProducts => "wilson-products",
            TheoremTag::ClassNumberFormula => "cnf-mod-p",
            TheoremTag::Caacm => "caacm",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for TheoremTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "aac" => TheoremTag::Aac,
            "mordell" => TheoremTag::Mordell,
            "composite-aac" => TheoremTag::CompositeAac,
            "composite-aac-3" => TheoremTag::CompositeAac3,
            "imag-class-number" => TheoremTag::ImagClassNumber,
            "product-sum" => TheoremTag::ProductSum,
            "product-diff" => TheoremTag::ProductDiff,
            "wilson-products" => TheoremTag::WilsonProducts,
            "cnf-mod-p" => TheoremTag::ClassNumberFormula,
            "caacm" => TheoremTag::Caacm,
            other => {
                return Err(Error::domain(format!(
                    "unknown theorem tag '{other}' (expected one of: aac, mordell, \
                     composite-aac, composite-aac-3, imag-class-number, product-sum, \
                     product-diff, wilson-products, cnf-mod-p, caacm)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Degenerate,
}

/// Both sides of a congruence mod p plus diagnostics.
/// Invariant: `Pass` exactly when lhs = rhs away from the documented 0 ≡ 0
/// degeneracies; `Degenerate` covers those.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub tag: TheoremTag,
    pub d: u64,
    pub p: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub h_mod_p: Option<u64>,
    pub verdict: Verdict,
    pub witness: String,
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] d={} p={} lhs={} rhs={} h_mod_p={} verdict={:?}{}{}",
            self.tag,
            self.d,
            self.p,
            self.lhs,
            self.rhs,
            self.h_mod_p
                .map(|h| h.to_string())
                .unwrap_or_else(|| "?".into()),
            self.verdict,
            if self.witness.is_empty() { "" } else { " — " },
            self.witness
        )
    }
}

/// h·u·t^{-1} mod p from the fast unit path (t is always a p-unit here:
/// p | d and t² − d·u² = ±4 or ±1 force gcd(t, p) = 1).
fn left_side(d: u64, p: u64) -> Result<(u64, u64, u64)> {
    let h = class_number_real(d)?;
    let ur = fundamental_unit_mod(d, p, 1)?;
    if ur.t_mod == 0 {
        return Err(Error::internal(format!("p = {p} divides t at d = {d}")));
    }
    let t_inv = mod_inv(ur.t_mod as i64, p)?;
    let lhs = mul_mod(mul_mod(h % p, ur.u_mod, p), t_inv, p);
    Ok((lhs, h, ur.u_mod))
}

fn verdict_for(lhs: u64, rhs: u64) -> Verdict {
    if lhs != rhs {
        Verdict::Fail
    } else if lhs == 0 {
        Verdict::Degenerate
    } else {
        Verdict::Pass
    }
}

/// The composite congruence hu/t = δ·B_{n,ψ} mod p for squarefree d, odd
/// p | d, with n = (p−1)/2 for p > 3 and n = 1 for p = 3 (where m = 1 mod 3
/// is required; m = 2 mod 3 is the trivial-zero degeneracy).
pub fn verify_composite_congruence(d: u64, p: u64) -> Result<VerificationReport> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::domain(format!("p = {p} must be an odd prime")));
    }
    if d % p != 0 {
        return Err(Error::domain(format!("p = {p} must divide d = {d}")));
    }
    let disc = fundamental_discriminant(d)?;
    let (lhs, h, u_mod) = left_side(d, p)?;
    let tag = if p == 3 {
        TheoremTag::CompositeAac3
    } else {
        TheoremTag::CompositeAac
    };
    if p == 3 && (d / 3) % 3 == 2 {
        return Ok(VerificationReport {
            tag,
            d,
            p,
            lhs,
            rhs: 0,
            h_mod_p: Some(h % p),
            verdict: Verdict::Degenerate,
            witness: "trivial zero: m = 2 mod 3, the congruence reads 0 = 0".into(),
        });
    }
    let psi = build_psi(d, p)?;
    let n = if p == 3 { 1 } else { ((p - 1) / 2) as u32 };
    let b = gen_bernoulli_mod_p(n, &psi, p)?.reduced;
    let rhs = mul_mod(disc.delta as u64, b, p);
    let verdict = verdict_for(lhs, rhs);
    let witness = match verdict {
        Verdict::Degenerate => format!(
            "both sides vanish; u = {} mod p, h = {} mod p",
            u_mod,
            h % p
        ),
        _ => String::new(),
    };
    Ok(VerificationReport {
        tag,
        d,
        p,
        lhs,
        rhs,
        h_mod_p: Some(h % p),
        verdict,
        witness,
    })
}

/// Classical prime case p = 1 mod 4: hu/t = B_{(p−1)/2} mod p, with the
/// ordinary-Bernoulli route cross-checked against the composite machinery
/// (ψ is principal there, so the two paths must agree).
pub fn verify_aac(p: u64) -> Result<VerificationReport> {
    if p % 4 != 1 || !crate::arith::is_prime(p) {
        return Err(Error::domain(format!("verify_aac: p = {p} must be a prime 1 mod 4")));
    }
    let (lhs, h, _) = left_side(p, p)?;
    let rhs = bernoulli_mod_p(((p - 1) / 2) as u32, p)?.reduced;
    let composite = verify_composite_congruence(p, p)?;
    if composite.rhs != rhs {
        return Err(Error::internal(format!(
            "verify_aac({p}): principal-ψ path gives {} but B_(p−1)/2 gives {rhs}",
            composite.rhs
        )));
    }
    Ok(VerificationReport {
        tag: TheoremTag::Aac,
        d: p,
        p,
        lhs,
        rhs,
        h_mod_p: Some(h % p),
        verdict: verdict_for(lhs, rhs),
        witness: String::new(),
    })
}

/// Prime case p = 3 mod 4, p > 3: hu/t = E_{(p−3)/2}/2 mod p, cross-checked
/// against δ·B_{(p−1)/2, ψ} with ψ the odd character of conductor 4.
pub fn verify_mordell(p: u64) -> Result<VerificationReport> {
    if p % 4 != 3 || p == 3 || !crate::arith::is_prime(p) {
        return Err(Error::domain(format!(
            "verify_mordell: p = {p} must be a prime 3 mod 4 exceeding 3"
        )));
    }
    let (lhs, h, _) = left_side(p, p)?;
    let e = euler_mod_p(((p - 3) / 2) as u32, p)?;
    let rhs = mul_mod(e, mod_inv(2, p)?, p);
    let composite = verify_composite_congruence(p, p)?;
    if composite.rhs != rhs {
        return Err(Error::internal(format!(
            "verify_mordell({p}): ψ-path gives {} but E/2 gives {rhs}",
            composite.rhs
        )));
    }
    Ok(VerificationReport {
        tag: TheoremTag::Mordell,
        d: p,
        p,
        lhs,
        rhs,
        h_mod_p: Some(h % p),
        verdict: verdict_for(lhs, rhs),
        witness: String::new(),
    })
}

/// d = 3m with m = 1 mod 3: hu/t = −δH mod 3 where H is the class number of
/// Q(√−m); also asserts the bridge −H = B_{1,ψ} mod 3.
pub fn verify_imag_class_congruence(d: u64) -> Result<VerificationReport> {
    if d % 3 != 0 {
        return Err(Error::domain(format!("d = {d} must be divisible by 3")));
    }
    let m = d / 3;
    if m % 3 != 1 {
        let (lhs, h, _) = left_side(d, 3)?;
        return Ok(VerificationReport {
            tag: TheoremTag::ImagClassNumber,
            d,
            p: 3,
            lhs,
            rhs: 0,
            h_mod_p: Some(h % 3),
            verdict: Verdict::Degenerate,
            witness: "m = 2 mod 3 excluded (trivial zero)".into(),
        });
    }
    let disc = fundamental_discriminant(d)?;
    let (lhs, h, _) = left_side(d, 3)?;
    let big_h = class_number_imag(m)?;
    let rhs = mul_mod(disc.delta as u64, (3 - big_h % 3) % 3, 3);
    // bridge: −H = B_{1,ψ} mod 3
    let psi = build_psi(d, 3)?;
    let b = gen_bernoulli_mod_p(1, &psi, 3)?.reduced;
    if b != (3 - big_h % 3) % 3 {
        return Err(Error::internal(format!(
            "verify_imag_class_congruence({d}): B_(1,ψ) = {b} but −H = {} mod 3",
            (3 - big_h % 3) % 3
        )));
    }
    Ok(VerificationReport {
        tag: TheoremTag::ImagClassNumber,
        d,
        p: 3,
        lhs,
        rhs,
        h_mod_p: Some(h % 3),
        verdict: verdict_for(lhs, rhs),
        witness: format!("H(Q(√−{m})) = {big_h}"),
    })
}

/// The Wilson-style product normalizations over a full period of χ_D for
/// prime p: A = −1, B = 1 mod p when p = 1 mod 4; A = B = −1 mod p when
/// p = 3 mod 4 (p > 3). Products are carried mod p².
pub fn verify_wilson_products(p: u64) -> Result<VerificationReport> {
    let (a, b) = residue_products(p)?;
    let (want_a, want_b) = if p % 4 == 1 { (p - 1, 1) } else { (p - 1, p - 1) };
    let (a_p, b_p) = (a % p, b % p);
    let pass = a_p == want_a && b_p == want_b;
    Ok(VerificationReport {
        tag: TheoremTag::WilsonProducts,
        d: p,
        p,
        lhs: a_p,
        rhs: b_p,
        h_mod_p: None,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        witness: format!("expected A = {want_a}, B = {want_b} mod p"),
    })
}

/// Products A (over χ_D(a) = 1) and B (over χ_D(b) = −1) for a, b in [1, D],
/// D the discriminant of Q(√p), carried mod p².
fn residue_products(p: u64) -> Result<(u64, u64)> {
    if p < 3 || !crate::arith::is_prime(p) {
        return Err(Error::domain(format!("p = {p} must be an odd prime")));
    }
    if p % 4 == 3 && p == 3 {
        return Err(Error::domain("p = 3 excluded (needs p > 3 in the 3 mod 4 case)"));
    }
    let disc = fundamental_discriminant(p)?.disc as u64;
    let p2 = p * p;
    let chi = QuadChar::for_real_field(p)?;
    let mut a_prod = 1u64;
    let mut b_prod = 1u64;
    for a in 1..=disc {
        match chi.eval(a as i64) {
            1 => a_prod = mul_mod(a_prod, a % p2, p2),
            -1 => b_prod = mul_mod(b_prod, a % p2, p2),
            _ => {}
        }
    }
    Ok((a_prod, b_prod))
}

/// Product congruence for prime p: (A+B)/p = 2hu/t (p = 1 mod 4) or
/// (A−B)/p = 4hu/t (p = 3 mod 4, p > 3), with A, B carried mod p² and the
/// Wilson normalizations checked first. The divisibility of A±B by p is
/// guaranteed; its failure is an internal error, never a verdict.
pub fn verify_product_congruence(p: u64) -> Result<VerificationReport> {
    let wilson = verify_wilson_products(p)?;
    if wilson.verdict != Verdict::Pass {
        return Err(Error::internal(format!(
            "product normalizations failed at p = {p}: A = {}, B = {} mod p",
            wilson.lhs, wilson.rhs
        )));
    }
    let (a, b) = residue_products(p)?;
    let p2 = p * p;
    let (tag, combined, factor) = if p % 4 == 1 {
        (TheoremTag::ProductSum, (a + b) % p2, 2u64)
    } else {
        (TheoremTag::ProductDiff, (a + p2 - b) % p2, 4u64)
    };
    if combined % p != 0 {
        return Err(Error::internal(format!(
            "A±B = {combined} not divisible by p = {p}"
        )));
    }
    let lhs = (combined / p) % p;
    let (hut, h, _) = left_side(p, p)?;
    let rhs = mul_mod(factor, hut, p);
    Ok(VerificationReport {
        tag,
        d: p,
        p,
        lhs,
        rhs,
        h_mod_p: Some(h % p),
        verdict: verdict_for(lhs, rhs),
        witness: format!("A = {a}, B = {b} mod p²"),
    })
}

/// Per-prime unit-divisibility reports for squarefree d > 2: for each odd
/// p | d, compares the indicator [p ∤ u] with the indicator [L_p(1, χ_D) is
/// a unit]. The two must agree whenever p ∤ h — except in the p = 3
/// trivial-zero case, where L_3(1, χ_D) = 0 mod 3 regardless of u because
/// the unit-log ratio picks up the factor (1 + m) = 0 mod 3.
pub fn check_caacm(d: u64) -> Result<Vec<VerificationReport>> {
    if d <= 2 {
        return Err(Error::domain("check_caacm: need squarefree d > 2"));
    }
    let f = crate::arith::factor(d)?;
    if !f.is_squarefree() {
        return Err(Error::domain(format!("check_caacm: {d} is not squarefree")));
    }
    let chi = QuadChar::for_real_field(d)?;
    let h_opt = if d <= 1_000_000 {
        Some(class_number_real(d)?)
    } else {
        None
    };
    let mut reports = Vec::new();
    for p in f.odd_primes() {
        let ur = fundamental_unit_mod(d, p, 2)?;
        let u_mod_p = ur.u_mod % p;
        let unit_status = is_lp_unit(&chi, p)?;
        let lhs = u64::from(u_mod_p != 0); // [p ∤ u]
        let rhs = u64::from(unit_status == LpUnitStatus::Unit);
        let h_mod_p = h_opt.map(|h| h % p);
        let trivial_zero = p == 3 && (d / 3) % 3 == 2;
        let verdict = if trivial_zero {
            Verdict::Degenerate
        } else if lhs == rhs {
            if lhs == 0 {
                Verdict::Degenerate // counterexample: both sides vanish
            } else {
                Verdict::Pass
            }
        } else if h_mod_p == Some(0) || h_mod_p.is_none() {
            // p | h (or h unknown) decouples p | u from the unit test
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        let witness = if trivial_zero {
            format!(
                "trivial zero at p = 3 (m = 2 mod 3): L_3(1) vanishes regardless of u; \
                 u = {u_mod_p} mod 3"
            )
        } else if lhs == 0 {
            format!(
                "counterexample: p | u (u = {} mod p², v_p(u) >= {}), L_p(1, χ_D) = 0 mod p",
                ur.u_mod,
                if ur.u_mod == 0 { 2 } else { 1 }
            )
        } else if verdict == Verdict::Fail {
            format!(
                "unit test disagrees with u-divisibility: u = {u_mod_p} mod p, \
                 L_p unit = {}, h = {:?} mod p",
                rhs == 1,
                h_mod_p
            )
        } else if lhs != rhs {
            format!("p | h explains the non-unit L-value (u = {u_mod_p} mod p)")
        } else {
            format!("conjecture holds at p = {p}: p ∤ u and L_p(1, χ_D) is a unit")
        };
        reports.push(VerificationReport {
            tag: TheoremTag::Caacm,
            d,
            p,
            lhs,
            rhs,
            h_mod_p,
            verdict,
            witness,
        });
    }
    Ok(reports)
}

/// Everything applicable to a given d: the prime specializations when d is
/// prime, the composite congruence per odd prime divisor, the imaginary
/// class-number form when 3 | d, the product congruences for prime d, the
/// class-number-formula reduction, and the unit/L-value comparison.
pub fn verify_all(d: u64) -> Result<Vec<VerificationReport>> {
    let f = crate::arith::factor(d)?;
    if !f.is_squarefree() || d < 2 {
        return Err(Error::domain(format!("d = {d} must be squarefree and > 1")));
    }
    let mut reports = Vec::new();
    let prime = crate::arith::is_prime(d);
    if prime && d > 2 {
        if d % 4 == 1 {
            reports.push(verify_aac(d)?);
        } else if d > 3 {
            reports.push(verify_mordell(d)?);
        }
        if d > 3 || d % 4 == 1 {
            reports.push(verify_product_congruence(d)?);
            reports.push(verify_wilson_products(d)?);
        }
    }
    for p in f.odd_primes() {
        reports.push(verify_composite_congruence(d, p)?);
    }
    // the imaginary-class-number form needs m = d/3 > 1 so Q(√−m) has
    // discriminant below −4
    if d % 3 == 0 && d > 3 {
        reports.push(verify_imag_class_congruence(d)?);
    }
    if d <= 1_000_000 {
        for p in f.odd_primes() {
            reports.push(crate::lp::class_number_formula_check(d, p)?);
        }
    }
    if d > 2 {
        reports.extend(check_caacm(d)?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_spec_examples() {
        let r = verify_composite_congruence(5, 5).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (1, 1, Verdict::Pass));
        let r = verify_composite_congruence(21, 3).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (2, 2, Verdict::Pass));
        let r = verify_composite_congruence(13, 13).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (9, 9, Verdict::Pass));
        // trivial zero
        let r = verify_composite_congruence(15, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Degenerate);
        // counterexample: both sides vanish at (430, 43)
        let r = verify_composite_congruence(430, 43).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (0, 0, Verdict::Degenerate));
    }

    #[test]
    fn aac_spec_examples() {
        let r = verify_aac(5).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (1, 1, Verdict::Pass));
        let r = verify_aac(13).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (9, 9, Verdict::Pass));
        let r = verify_aac(17).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(verify_aac(7).is_err());
    }

    #[test]
    fn mordell_spec_examples() {
        let r = verify_mordell(7).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (3, 3, Verdict::Pass));
        let r = verify_mordell(11).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (8, 8, Verdict::Pass));
        assert!(verify_mordell(3).is_err());
        assert!(verify_mordell(5).is_err());
    }

    #[test]
    fn imag_class_examples() {
        let r = verify_imag_class_congruence(21).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (2, 2, Verdict::Pass));
        let r = verify_imag_class_congruence(39).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (2, 2, Verdict::Pass));
        let r = verify_imag_class_congruence(15).unwrap();
        assert_eq!(r.verdict, Verdict::Degenerate);
    }

    #[test]
    fn product_spec_examples() {
        let r = verify_product_congruence(5).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (2, 2, Verdict::Pass));
        assert!(r.witness.contains("A = 4, B = 6"));
        let r = verify_product_congruence(13).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (5, 5, Verdict::Pass));
        let r = verify_product_congruence(7).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (5, 5, Verdict::Pass));
    }

    #[test]
    fn caacm_examples() {
        let rs = check_caacm(5).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].verdict, Verdict::Pass);
        assert_eq!((rs[0].lhs, rs[0].rhs), (1, 1));

        let rs = check_caacm(430).unwrap();
        assert_eq!(rs.len(), 2); // p = 5 and p = 43
        for r in &rs {
            assert_eq!(
                (r.lhs, r.rhs, r.verdict),
                (0, 0, Verdict::Degenerate),
                "p={}",
                r.p
            );
        }

        // trivial-zero d: p = 3, m = 2 mod 3 — degenerate, not a failure
        let rs = check_caacm(6).unwrap();
        assert_eq!(rs[0].verdict, Verdict::Degenerate);
        assert_eq!((rs[0].lhs, rs[0].rhs), (1, 0));
    }

    #[test]
    fn verify_all_smoke() {
        let rs = verify_all(5).unwrap();
        assert!(rs.iter().all(|r| r.verdict != Verdict::Fail));
        assert!(rs.iter().any(|r| r.tag == TheoremTag::Aac));
        assert!(rs.iter().any(|r| r.tag == TheoremTag::ProductSum));
        let rs = verify_all(430).unwrap();
        assert!(rs.iter().all(|r| r.verdict != Verdict::Fail));
        assert!(verify_all(12).is_err());
    }

    #[test]
    fn tag_round_trip() {
        for s in [
            "aac",
            "mordell",
            "composite-aac",
            "composite-aac-3",
            "imag-class-number",
            "product-sum",
            "product-diff",
            "wilson-products",
            "cnf-mod-p",
            "caacm",
        ] {
            let tag: TheoremTag = s.parse().unwrap();
            assert_eq!(tag.to_string(), s);
        }
        assert!("thm-nope".parse::<TheoremTag>().is_err());
    }
}
