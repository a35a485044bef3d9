//! Inverts `(0;1;3;8;17)` in `R_56` with the closed-form method and checks it
//! against the extended Euclidean algorithm.

use psi_ldgm::inversion::{fast_inverse, predicted_pow2m};
use psi_ldgm::xi_design::{xi_poly, XiParams};

fn main() -> psi_ldgm::Result<()> {
    let params = XiParams::plain(1, 7, &[1, 3]);
    let a = xi_poly(&params)?;
    println!("a      = {a}");

    let r = fast_inverse(&params)?;
    println!("w      = {}", r.w.as_ref().expect("closed form"));
    println!("a^2    = {}  (predicted {})", a.square(), predicted_pow2m(&params));
    println!("a^-1   = {}", r.a_inv);
    println!("weight = {} (bound {})", r.weight_inv, r.bound.unwrap_or(0));

    let e = a.euclid_inverse()?;
    assert_eq!(e, r.a_inv);
    assert!(a.mul(&r.a_inv)?.is_one());
    println!("euclid agrees");
    Ok(())
}
