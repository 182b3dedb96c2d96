//! The p-adic logarithm on units and the series for log_p(ε)/√d.
//!
//! log_p kills Teichmüller roots of unity and is linear to first order on
//! principal units; for a fundamental unit ε of Q(√d) with p | d, the ratio
//! log_p(ε)/√d lives in Z_p and reduces to u/t mod p (times 1+m when p = 3).
//!
//! ```bash
//! cargo run --example padic_log
//! ```

use aacm::padic::{plog, plog_eps_over_sqrt_d, Padic};
use aacm::quadfield::fundamental_unit_mod;

fn main() -> aacm::Result<()> {
    let (p, k) = (5u64, 4u32);
    println!("log_p on units mod {p}^{k}:");
    for a in [1i64, 2, 6, 7, 26] {
        let x = Padic::new(p, k, a)?;
        println!("  log_{p}({a}) = {}", plog(&x)?);
    }
    println!("  (7 = ω(2) at p = 5, so its log vanishes)");

    println!("\nfunctional equation: log(xy) = log(x) + log(y)");
    let x = Padic::new(p, k, 2)?;
    let y = Padic::new(p, k, 13)?;
    println!("  log(2·13) = {}", plog(&(x * y))?);
    println!("  log 2 + log 13 = {}", (plog(&x)? + plog(&y)?));

    println!("\nunit-log ratio log_p(ε)/√d for p | d:");
    for (d, p, k) in [(5u64, 5u64, 3u32), (21, 3, 3), (430, 43, 2)] {
        let ur = fundamental_unit_mod(d, p, k)?;
        let ratio = plog_eps_over_sqrt_d(d, ur.t_mod, ur.u_mod, p, k)?;
        println!("  d = {d:>4}, p = {p:>2}: {ratio}   (t,u mod p^k = {}, {})", ur.t_mod, ur.u_mod);
    }
    println!("  (the zero at d = 430, p = 43 is the counterexample signature)");
    Ok(())
}
