//! Draws cycle-free Ξ designs and shows their distance profile.

use psi_ldgm::cycles::{distance_multiset, has_length4_cycle};
use psi_ldgm::inversion::fast_inverse;
use psi_ldgm::xi_design::{goodmat, sample_cycle_free};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> psi_ldgm::Result<()> {
    let g = goodmat(1, 78, &[3, 9])?;
    println!("goodmat(1, 78, [3, 9]) = {}  sufficient={}", g.poly, g.sufficient_conditions);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (m, s) in [(0, 16), (1, 16), (1, 64), (2, 64)] {
        let g = sample_cycle_free(m, s, &mut rng, 1000, false)?;
        let d = distance_multiset(&g.poly);
        let inv = fast_inverse(&g.params)?;
        println!(
            "m={m} s={s:<3} k={:?}  a={}  distinct distances={}  W[a^-1]={}",
            g.params.k,
            g.poly,
            d.counts().len(),
            inv.weight_inv
        );
        assert!(!has_length4_cycle(&g.poly));
    }
    Ok(())
}
