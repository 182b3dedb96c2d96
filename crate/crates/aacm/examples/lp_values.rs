//! Kubota–Leopoldt L-values three ways — interpolation at 1−n, the finite
//! double series at s ≤ 0, and the log-sum at s = 1 — plus the mod-p
//! rigidity that makes the congruence machinery work.
//!
//! ```bash
//! cargo run --example lp_values
//! ```

use aacm::bernoulli::QuadChar;
use aacm::lp::{is_lp_unit, lp_interpolation, lp_one_log_sum, lp_series};

fn main() -> aacm::Result<()> {
    let (d, p) = (13u64, 13u64);
    let chi = QuadChar::for_real_field(d)?;
    let n = (p - 1) / 2;
    println!("χ_D for d = {d} (conductor {}), p = {p}:", chi.conductor());

    let interp = lp_interpolation(n as u32, &chi, p, 3)?;
    println!("  L_p(1−{n}, χ) by interpolation: {}", interp.value);
    let series = lp_series(1 - n as i64, &chi, p, 3, p * if d % p == 0 { d / p * p } else { d })?;
    println!("  L_p(1−{n}, χ) by the series:    {}", series.value);
    assert_eq!(interp.value, series.value);

    println!("\nmod-p rigidity: L_p(s, χ) is constant mod p over integer s");
    let big_f = chi.conductor(); // p | D here, so D works as F
    for s in [0i64, -1, -2, 1 - n as i64] {
        let v = lp_series(s, &chi, p, 1, big_f)?;
        println!("  s = {s:>3}: {}", v.value);
    }
    let at_one = lp_one_log_sum(&chi, p, big_f)?;
    println!("  s =   1: {}  (log-sum route)", at_one);

    println!("\nthe unit test behind the counterexample hunt:");
    for (d, p) in [(5u64, 5u64), (430, 43)] {
        let chi = QuadChar::for_real_field(d)?;
        println!("  d = {d:>4}, p = {p:>2}: L_p(1, χ_D) is {:?}", is_lp_unit(&chi, p)?);
    }
    Ok(())
}
