//! Teichmüller lifts and the unit decomposition a = ω(a)·⟨a⟩.
//!
//! ω(a) is the unique (p−1)-st root of unity in Z_p congruent to a mod p;
//! raising it to (p−1)/2 recovers the Legendre symbol.
//!
//! ```bash
//! cargo run --example teichmuller
//! ```

use aacm::arith::kronecker;
use aacm::padic::{teichmuller, unit_part};

fn main() -> aacm::Result<()> {
    let (p, k) = (7u64, 4u32);
    println!("Teichmüller lifts mod {p}^{k} = {}", p.pow(k));
    println!("{:>3} {:>12} {:>12} {:>10}", "a", "ω(a)", "⟨a⟩", "ω·⟨a⟩");
    for a in 1..p {
        let w = teichmuller(a as i64, p, k)?;
        let u = unit_part(a as i64, p, k)?;
        println!(
            "{a:>3} {:>12} {:>12} {:>10}",
            w.value(),
            u.value(),
            (w * u).value()
        );
    }

    println!("\nω(a)^((p−1)/2) is the Legendre symbol (a|p):");
    let m = p.pow(k);
    for a in 1..p {
        let sign = teichmuller(a as i64, p, k)?.pow((p - 1) / 2);
        let as_int = if sign.value() == 1 { 1 } else { -1 };
        let legendre = kronecker(a as i64, p as i64);
        assert_eq!(as_int, legendre);
        println!("  a = {a}: ω^3(a) = {:>5} (≡ {as_int:>2}), (a|{p}) = {legendre:>2}", sign.value());
    }
    let _ = m;
    Ok(())
}
