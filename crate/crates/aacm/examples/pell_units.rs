//! Fundamental units by periodic continued fractions: exact big-integer
//! convergents, and the mod-p^k fast path that never materializes the unit.
//!
//! ```bash
//! cargo run --example pell_units
//! ```

use aacm::quadfield::{fundamental_unit, fundamental_unit_mod};

fn main() -> aacm::Result<()> {
    println!("{:>5} {:>14} {:>12} {:>3} {:>5}", "d", "t", "u", "δ", "N(ε)");
    for d in [2u64, 3, 5, 7, 13, 21, 33, 94, 430] {
        let fu = fundamental_unit(d)?;
        println!(
            "{d:>5} {:>14} {:>12} {:>3} {:>5}",
            fu.t.to_string(),
            fu.u.to_string(),
            fu.delta,
            fu.norm
        );
    }
    println!("(δ = 1: ε = (t+u√d)/2 with t² − du² = ±4; δ = 2: ε = t+u√d, t² − du² = ±1)");

    // For d = 9199 the unit has dozens of digits; the scanner only ever
    // needs residues, which the state machine delivers without big integers.
    let d = 9199u64;
    let fu = fundamental_unit(d)?;
    println!("\nd = {d}: u has {} decimal digits", fu.u.to_string().len());
    for p in [3u64, 7, 919] {
        let ur = fundamental_unit_mod(d, p, 2)?;
        let (t_exact, u_exact) = fu.residues(p, 2)?;
        assert_eq!((ur.t_mod, ur.u_mod), (t_exact, u_exact));
        println!(
            "  mod {p}^2: t = {:>6}, u = {:>6}  (period {} — matches the exact unit)",
            ur.t_mod, ur.u_mod, ur.period_length
        );
    }
    Ok(())
}
