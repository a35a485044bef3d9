//! Builds a ψ-based code with a weight-5 last block and reports its derived
//! parameters, then compares with an identity-terminated code of the same size.

use psi_ldgm::qc_ldgm::{build_code, random_companion_blocks, QcLdgmCode};
use psi_ldgm::SparsePoly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(name: &str, code: &QcLdgmCode) {
    let est = code.dmin_estimate();
    let cx = code.complexity();
    println!(
        "{name:<8} ({},{}) weights={:?} W[H^-1]={} ({}) d_bar={} P={} A={} C_enc={} C_dec={}",
        code.length(),
        code.dimension(),
        code.block_weights(),
        code.last_inverse().weight(),
        code.inverse_method(),
        est.d_bar,
        est.p,
        est.a,
        cx.c_enc,
        cx.c_dec
    );
}

fn main() -> psi_ldgm::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);

    let last: SparsePoly = "312:(0;3;9;42;87)".parse()?;
    let mut blocks = random_companion_blocks(312, &[5, 5, 5], std::slice::from_ref(&last), &mut rng, 100)?;
    blocks.push(last);
    let psi = build_code(blocks)?;
    report("psi", &psi);

    let id = SparsePoly::one(312);
    let mut blocks = random_companion_blocks(312, &[5, 5, 5], std::slice::from_ref(&id), &mut rng, 100)?;
    blocks.push(id);
    report("identity", &build_code(blocks)?);

    print!("{}", psi.to_text());
    Ok(())
}
