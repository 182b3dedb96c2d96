//! Class numbers: real fields by cycles of reduced indefinite forms
//! (corrected by the unit norm), imaginary fields by −B_{1,χ} with a
//! form-count cross-check built in.
//!
//! ```bash
//! cargo run --example class_numbers
//! ```

use aacm::quadfield::{class_number_imag, class_number_real, unit_norm};

fn main() -> aacm::Result<()> {
    println!("real quadratic fields Q(√d):");
    println!("{:>5} {:>4} {:>6}", "d", "h", "N(ε)");
    for d in [5u64, 10, 79, 82, 145, 229, 223, 430] {
        let h = class_number_real(d)?;
        let norm = unit_norm(d, aacm::quadfield::DEFAULT_PERIOD_BOUND)?;
        println!("{d:>5} {h:>4} {norm:>6}");
    }

    println!("\nimaginary quadratic fields Q(√−m), via −B_(1,χ) = form count:");
    println!("{:>5} {:>4}", "m", "H");
    for m in [5u64, 7, 13, 23, 47, 71, 89, 191] {
        println!("{m:>5} {:>4}", class_number_imag(m)?);
    }
    Ok(())
}
