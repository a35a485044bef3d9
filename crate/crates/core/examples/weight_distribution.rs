//! Histogram of W[a^-1] over random m = 1 designs.
//!
//! `cargo run --release --example weight_distribution -- 16 20000`

use psi_ldgm::inversion::weight_distribution;

fn main() -> psi_ldgm::Result<()> {
    let mut args = std::env::args().skip(1);
    let s: usize = args.next().map_or(16, |v| v.parse().expect("s"));
    let samples: usize = args.next().map_or(5000, |v| v.parse().expect("samples"));

    let h = weight_distribution(1, s, samples, 1)?;
    println!("m=1 s={s} samples={} mean={:.2}", h.samples(), h.mean());
    for (w, c) in &h.counts {
        println!("{w:>3} {c:>7} {:>6.2}%", h.percent(*w));
    }
    Ok(())
}
