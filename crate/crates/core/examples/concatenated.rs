//! Inner rate-1/2 identity-terminated code with an outer high-rate ψ-based
//! code on AWGN, decoded in two stages.

use psi_ldgm::qc_ldgm::{build_code, random_companion_blocks, QcLdgmCode};
use psi_ldgm::spa_decoder::{simulate_concatenated, ChannelPoint, StopRule};
use psi_ldgm::xi_design::goodmat;
use psi_ldgm::SparsePoly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn code_with_last(n: usize, weights: &[usize], last: SparsePoly, seed: u64) -> psi_ldgm::Result<QcLdgmCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = random_companion_blocks(n, weights, std::slice::from_ref(&last), &mut rng, 100)?;
    blocks.push(last);
    build_code(blocks)
}

fn main() -> psi_ldgm::Result<()> {
    let inner = code_with_last(1000, &[5], SparsePoly::one(1000), 1)?;
    let outer = code_with_last(100, &[3; 9], goodmat(0, 25, &[2])?.poly, 2)?;
    let rate = outer.dimension() as f64 / inner.length() as f64;
    println!("inner ({},{})  outer ({},{})  overall rate {rate}", inner.length(), inner.dimension(), outer.length(), outer.dimension());

    for ebn0_db in [2.0, 2.5, 3.0] {
        let point = ChannelPoint::Awgn { ebn0_db, rate };
        let stop = StopRule { max_frames: 20_000, min_frame_errors: 50 };
        let r = simulate_concatenated(&inner, &outer, point, stop, 9, (50, 50), 64)?;
        println!(
            "Eb/N0={ebn0_db} frames={} inner FER={:.3e} concatenated FER={:.3e}",
            r.frames,
            r.inner_fer(),
            r.concat_fer()
        );
    }
    Ok(())
}
