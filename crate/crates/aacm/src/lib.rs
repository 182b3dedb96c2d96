//! Exact verification of Ankeny–Artin–Chowla–Mordell (AACM) congruences on
//! real quadratic fields: Kronecker symbols, truncated p-adic arithmetic,
//! Bernoulli and Euler numbers mod p, fundamental units by continued
//! fractions, class numbers by reduced forms, and Kubota–Leopoldt p-adic
//! L-values evaluated by three independent routes.
//!
//! The congruence at the heart of it, for a squarefree d = pm with odd prime
//! p and fundamental unit ε = (δ/2)(t + u√d) of Q(√d):
//!
//! ```text
//! h·u/t ≡ δ·B_{(p−1)/2, ψ}  (mod p)
//! ```
//!
//! with h the class number and ψ the quadratic character of conductor D/p.
//! Specializations recover the classical prime congruences (Bernoulli
//! numbers for p = 1 mod 4, Euler numbers for p = 3 mod 4), and the failure
//! mode p | u is exactly the vanishing of L_p(1, χ_D) mod p — which the
//! scanner hunts for.
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --example teichmuller          # ω(a), ⟨a⟩, Legendre powers
//! cargo run --example padic_log            # log_p on units, the unit-log series
//! cargo run --example pell_units           # fundamental units, exact and mod p^k
//! cargo run --example class_numbers        # real and imaginary class numbers
//! cargo run --example bernoulli_euler      # B_n, E_n, B_{n,χ} tables
//! cargo run --example lp_values            # L_p values three ways, rigidity
//! cargo run --example verify_congruences   # the theorem verifiers on small d
//! cargo run --example counterexample_hunt  # a mini scan rediscovering d = 430
//! ```
//!
//! ## CLI
//!
//! A thin binary wraps the same library calls:
//!
//! ```bash
//! aacm verify --d 430
//! aacm scan --from 2 --to 1000000 --mode composites --out scan.jsonl
//! aacm table --kind euler --p 7 --n-max 6
//! ```

pub mod arith;
pub mod bernoulli;
pub mod cli;
pub mod error;
pub mod lp;
pub mod padic;
pub mod quadfield;
pub mod scan;
pub mod verify;

pub use error::{Error, Result};
