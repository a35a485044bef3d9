//! Frame error rate of an n = 312 ψ-based code on the BSC.
//!
//! `cargo run --release --example bsc_simulation -- 0.02 0.015 0.01`

use psi_ldgm::qc_ldgm::{build_code, random_companion_blocks};
use psi_ldgm::spa_decoder::{build_graph, simulate, ChannelPoint, SimConfig, SimResult, StopRule};
use psi_ldgm::SparsePoly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> psi_ldgm::Result<()> {
    let mut points: Vec<f64> = std::env::args().skip(1).map(|v| v.parse().expect("crossover p")).collect();
    if points.is_empty() {
        points = vec![0.03, 0.025, 0.02];
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let last: SparsePoly = "312:(0;3;9;42;87)".parse()?;
    let mut blocks = random_companion_blocks(312, &[5, 5, 5], std::slice::from_ref(&last), &mut rng, 100)?;
    blocks.push(last);
    let code = build_code(blocks)?;
    let graph = build_graph(&code);

    let stop = StopRule { max_frames: 100_000, min_frame_errors: 50 };
    println!("{}", SimResult::CSV_HEADER);
    for p in points {
        let r = simulate(&code, &graph, "psi312", ChannelPoint::Bsc { p }, stop, 7, &SimConfig::default())?;
        println!("{}", r.csv_row());
    }
    Ok(())
}
