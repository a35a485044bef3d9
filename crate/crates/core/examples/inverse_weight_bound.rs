//! Inverse-weight bound versus what a search actually finds.

use psi_ldgm::inversion::{
    fast_inverse, inverse_weight_bound, max_weight_search, KFamily, Offsets, SearchGrid, SearchMode,
};
use psi_ldgm::xi_design::XiParams;

fn main() -> psi_ldgm::Result<()> {
    for m in 0..=4 {
        println!("m={m} bound={}", inverse_weight_bound(m));
    }

    let r = fast_inverse(&XiParams::plain(2, 11, &[1, 3, 7]))?;
    println!("176:(0;1;3;7;12;25;51) -> weight {}", r.weight_inv);
    let scaled = r.a.stretch(8);
    println!("scaled by 8 in R_1408 -> weight {}", scaled.euclid_inverse()?.weight());

    let grid = SearchGrid {
        m: 2,
        s_values: (8..=64).collect(),
        k_family: KFamily::Free,
        offsets: Offsets::All,
        mode: SearchMode::Random { draws_per_s: 40, seed: 3 },
    };
    let rep = max_weight_search(&grid)?;
    println!("{grid}: max {} over {} designs", rep.max_weight, rep.evaluated);
    if let Some(p) = rep.argmax {
        println!("argmax {p}");
    }
    Ok(())
}
