//! Collects undetected decoder errors on a short code and compares the
//! error patterns with the exact minimum distance.

use psi_ldgm::qc_ldgm::{build_code, random_companion_blocks};
use psi_ldgm::spa_decoder::{build_graph, simulate, ChannelPoint, SimConfig, StopRule};
use psi_ldgm::SparsePoly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn main() -> psi_ldgm::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let last = SparsePoly::one(20);
    let mut blocks = random_companion_blocks(20, &[3, 3], std::slice::from_ref(&last), &mut rng, 100)?;
    blocks.push(last);
    let code = build_code(blocks)?;
    let dmin = code.brute_force_dmin(Some(code.dimension()))?;
    assert!(dmin.exact);
    println!("weights {:?}, exact dmin {}, predicted pairs {:?}", code.block_weights(), dmin.weight, code.predicted_pairs());

    let graph = build_graph(&code);
    let stop = StopRule { max_frames: 20_000, min_frame_errors: 2000 };
    let r = simulate(&code, &graph, "small", ChannelPoint::Bsc { p: 0.08 }, stop, 3, &SimConfig::default())?;
    println!("frames {} frame errors {} undetected {}", r.frames, r.frame_errors, r.undetected);

    let mut by_shape: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    for pat in &r.undetected_patterns {
        let mut word = vec![0u8; code.length()];
        pat.iter().for_each(|&i| word[i] = 1);
        *by_shape.entry((pat.len(), code.block_support(&word))).or_default() += 1;
    }
    for ((w, blocks), c) in by_shape {
        println!("weight {w:>2} blocks {blocks:?}: {c}");
    }
    Ok(())
}
