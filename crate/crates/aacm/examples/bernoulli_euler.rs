//! Bernoulli numbers (exact and mod p), Euler numbers in the 1/cosh
//! convention, and generalized Bernoulli numbers for quadratic characters.
//!
//! ```bash
//! cargo run --example bernoulli_euler
//! ```

use aacm::bernoulli::{
    bernoulli_exact, bernoulli_mod_p, build_psi, euler_exact, euler_mod_p, gen_bernoulli_exact,
    gen_bernoulli_mod_p, QuadChar,
};

fn main() -> aacm::Result<()> {
    println!("exact Bernoulli numbers (x/(e^x−1) convention):");
    for n in [0u32, 1, 2, 4, 6, 8, 10, 12] {
        println!("  B_{n:<2} = {}", bernoulli_exact(n)?);
    }

    println!("\nB_n mod 13 (poles at (p−1) | n are refused):");
    for n in [0u32, 1, 2, 4, 6, 8, 10] {
        println!("  B_{n:<2} ≡ {} (mod 13)", bernoulli_mod_p(n, 13)?.reduced);
    }
    println!("  B_12 mod 13 → {}", bernoulli_mod_p(12, 13).unwrap_err());

    println!("\nEuler numbers (1/cosh convention):");
    for n in [0u32, 2, 4, 6, 8] {
        println!("  E_{n:<2} = {:>6}   ≡ {} (mod 11)", euler_exact(n)?, euler_mod_p(n, 11)?);
    }

    println!("\ngeneralized Bernoulli numbers:");
    let chi4 = QuadChar::from_fundamental_discriminant(-4)?;
    println!("  B_(1,χ_-4) = {}", gen_bernoulli_exact(1, &chi4)?);
    let chi7 = QuadChar::from_fundamental_discriminant(-7)?;
    println!("  B_(1,χ_-7) = {}  (= −H(Q(√−7)))", gen_bernoulli_exact(1, &chi7)?);
    let psi = build_psi(21, 3)?;
    println!(
        "  ψ for d = 21, p = 3 has conductor {}; B_(1,ψ) ≡ {} (mod 3)",
        psi.conductor(),
        gen_bernoulli_mod_p(1, &psi, 3)?.reduced
    );
    Ok(())
}
