//! Folding is a ring homomorphism, and ψ-unitary elements square down to one.

use psi_ldgm::psi::{check_lemma1, coset_sample, is_psi_unitary, psi_map, PsiParams};
use psi_ldgm::SparsePoly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> psi_ldgm::Result<()> {
    let params = PsiParams::new(7, 3, 0)?;
    let a: SparsePoly = "56:(0;1;3;8;17)".parse()?;
    let b: SparsePoly = "56:(2;5;11)".parse()?;

    let lhs = psi_map(&a.mul(&b)?, &params)?;
    let rhs = psi_map(&a, &params)?.mul(&psi_map(&b, &params)?)?;
    println!("psi(ab) = {lhs}, psi(a)psi(b) = {rhs}");
    assert_eq!(lhs, rhs);

    println!("psi(a) = {}  unitary={}", psi_map(&a, &params)?, is_psi_unitary(&a, &params)?);
    println!("a^8 = {}", a.pow2k(3));
    assert!(check_lemma1(&a, &params)?);

    // every coset member a + (x^{2s} + 1) b keeps the property
    let half = PsiParams::new(7, 3, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let c = coset_sample(&a, &half, &mut rng)?;
        println!("coset member weight {:>2}, c^8 = 1: {}", c.weight(), c.pow2k(3).is_one());
    }
    Ok(())
}
