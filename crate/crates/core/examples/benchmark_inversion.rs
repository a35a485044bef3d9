//! Closed-form inversion versus Euclid, normalised to Euclid at n = 128, W = 3.
//!
//! Run with `--release`; debug timings are meaningless.

use psi_ldgm::inversion::{bench_invert, Method};

fn main() -> psi_ldgm::Result<()> {
    let ns = [128, 256, 512, 1024, 2048, 4096, 8192];
    let table = bench_invert(&ns, &[3, 5], 200, 1)?;
    println!("baseline {:.0} ns", table.baseline_ns);
    println!("{:>5} {:>2} {:>10} {:>10}", "n", "W", "euclid", "fast");
    for w in [3, 5] {
        for n in ns {
            let e = table.get(n, w, Method::Euclid).expect("row");
            let f = table.get(n, w, Method::Fast).expect("row");
            println!("{n:>5} {w:>2} {:>10.3} {:>10.4}", e.mean_time_normalized, f.mean_time_normalized);
        }
    }
    Ok(())
}
