//! The folding homomorphism `ψ: R_{2^q s} -> R_{2^r s}` and ψ-unitary polynomials.
//!
//! Folding sends coefficient `a_e` to position `e mod 2^r s` and adds
//! coefficients that land on the same position, so on a sparse support it is
//! a reduction of every exponent followed by parity cancellation.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2_poly::SparsePoly;

/// `(s, q, r)` describing `ψ^{2^q s}_{2^r s}` with `0 <= r <= q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PsiParams {
    s: usize,
    q: u32,
    r: u32,
}

impl PsiParams {
    pub fn new(s: usize, q: u32, r: u32) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidParams("s must be positive".into()));
        }
        if r > q {
            return Err(Error::InvalidParams(format!("target exponent r = {r} exceeds q = {q}")));
        }
        if q >= usize::BITS || s.checked_shl(q).is_none_or(|n| n >> q != s) {
            return Err(Error::InvalidParams("ring size overflows".into()));
        }
        Ok(PsiParams { s, q, r })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `2^q s`
    pub fn source_size(&self) -> usize {
        self.s << self.q
    }

    /// `2^r s`
    pub fn target_size(&self) -> usize {
        self.s << self.r
    }

    fn check(&self, a: &SparsePoly) -> Result<()> {
        if a.n() != self.source_size() {
            return Err(Error::RingSizeMismatch { left: a.n(), right: self.source_size() });
        }
        Ok(())
    }
}

pub fn psi_map(a: &SparsePoly, params: &PsiParams) -> Result<SparsePoly> {
    params.check(a)?;
    let m = params.target_size();
    Ok(SparsePoly::from_exponents(m, a.support().iter().map(|&e| e % m)))
}

/// The elementary halving map `R_{2t} -> R_t`.
pub fn fold_once(a: &SparsePoly) -> Result<SparsePoly> {
    let n = a.n();
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("cannot halve odd ring size {n}")));
    }
    let t = n / 2;
    Ok(SparsePoly::from_exponents(t, a.support().iter().map(|&e| e % t)))
}

/// Membership in the kernel ideal `<x^{2^r s} - 1>`: every residue class
/// modulo `2^r s` must contain an even number of support exponents.
pub fn ideal_member(w: &SparsePoly, params: &PsiParams) -> Result<bool> {
    params.check(w)?;
    let m = params.target_size();
    let mut residues: Vec<usize> = w.support().iter().map(|&e| e % m).collect();
    residues.sort_unstable();
    Ok(residues
        .chunk_by(|x, y| x == y)
        .all(|run| run.len() % 2 == 0))
}

pub fn is_psi_unitary(a: &SparsePoly, params: &PsiParams) -> Result<bool> {
    Ok(psi_map(a, params)?.is_one())
}

/// Evaluates both sides of the power/fold equivalence independently:
/// `a^(2^(q-r)) == 1_n` and `ψ^{2^q s}_{2^r s}(a) == 1`. Returns `true` when
/// they agree.
pub fn check_lemma1(a: &SparsePoly, params: &PsiParams) -> Result<bool> {
    params.check(a)?;
    let lhs = a.pow2k(params.q - params.r).is_one();
    let rhs = is_psi_unitary(a, params)?;
    Ok(lhs == rhs)
}

/// `x^{2^r s} + 1`, the generator of the kernel of `ψ^{2^q s}_{2^r s}`.
pub fn ideal_generator(params: &PsiParams) -> SparsePoly {
    let n = params.source_size();
    let m = params.target_size();
    if m == n {
        // r == q: the kernel is {0}
        return SparsePoly::zero(n);
    }
    SparsePoly::from_exponents(n, [0, m])
}

/// Adds a uniformly random element of the kernel ideal to `a0`.
///
/// The ideal has dimension `n - 2^r s`, and `b(x) -> b(x)(x^{2^r s} + 1)` is a
/// bijection from polynomials of degree `< n - 2^r s`, so drawing every
/// coefficient of `b` as a fair coin gives the uniform law on the ideal.
pub fn coset_sample<R: Rng + ?Sized>(
    a0: &SparsePoly,
    params: &PsiParams,
    rng: &mut R,
) -> Result<SparsePoly> {
    params.check(a0)?;
    let n = params.source_size();
    let m = params.target_size();
    if m == n {
        return Ok(a0.clone());
    }
    let b_exps: Vec<usize> = (0..n - m).filter(|_| rng.random::<bool>()).collect();
    let w = SparsePoly::from_exponents(n, b_exps.iter().flat_map(|&e| [e, e + m]));
    a0.add(&w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> SparsePoly {
        s.parse().unwrap()
    }

    fn all_polys(n: usize) -> Vec<SparsePoly> {
        (0u32..(1 << n))
            .map(|mask| SparsePoly::from_exponents(n, (0..n).filter(|i| mask >> i & 1 == 1)))
            .collect()
    }

    #[test]
    fn fold_examples() {
        let p42 = PsiParams::new(2, 1, 0).unwrap();
        assert!(psi_map(&p("4:(0;2)"), &p42).unwrap().is_zero());
        assert!(psi_map(&p("4:(0;1;3)"), &p42).unwrap().is_one());
        let p84 = PsiParams::new(4, 1, 0).unwrap();
        assert!(psi_map(&p("8:(0;1;5)"), &p84).unwrap().is_one());
    }

    /// The full `R_4 -> R_2` table, written in coefficient order `(a_0, a_1, a_2, a_3)`.
    #[test]
    fn r4_to_r2_table() {
        let table: [(&[u8; 4], [u8; 2]); 16] = [
            (&[0, 0, 0, 0], [0, 0]),
            (&[0, 1, 0, 1], [0, 0]),
            (&[1, 0, 1, 0], [0, 0]),
            (&[1, 1, 1, 1], [0, 0]),
            (&[1, 0, 0, 0], [1, 0]),
            (&[0, 0, 1, 0], [1, 0]),
            (&[1, 1, 0, 1], [1, 0]),
            (&[0, 1, 1, 1], [1, 0]),
            (&[0, 1, 0, 0], [0, 1]),
            (&[0, 0, 0, 1], [0, 1]),
            (&[1, 1, 1, 0], [0, 1]),
            (&[1, 0, 1, 1], [0, 1]),
            (&[1, 1, 0, 0], [1, 1]),
            (&[0, 1, 1, 0], [1, 1]),
            (&[1, 0, 0, 1], [1, 1]),
            (&[0, 0, 1, 1], [1, 1]),
        ];
        let params = PsiParams::new(2, 1, 0).unwrap();
        for (src, dst) in table {
            let got = psi_map(&SparsePoly::from_dense(src), &params).unwrap();
            assert_eq!(got.to_dense(), dst.to_vec(), "ψ({src:?})");
        }
    }

    #[test]
    fn ideal_membership() {
        let s = 5;
        let params = PsiParams::new(s, 2, 1).unwrap();
        let gen = SparsePoly::from_support(4 * s, &[0, 2 * s]).unwrap();
        assert!(ideal_member(&gen, &params).unwrap());
        assert_eq!(ideal_generator(&params), gen);
        assert!(ideal_member(&SparsePoly::zero(20), &params).unwrap());
        let p84 = PsiParams::new(4, 1, 0).unwrap();
        assert!(!ideal_member(&p("8:(0;1;5)"), &p84).unwrap());
    }

    #[test]
    fn unitary_examples() {
        let p84 = PsiParams::new(4, 1, 0).unwrap();
        for s in ["8:(0;1;5)", "8:(0;3;7)", "8:(1;4;5)", "8:(3;4;7)", "8:(0;2;6)", "8:(2;4;6)"] {
            assert!(is_psi_unitary(&p(s), &p84).unwrap(), "{s}");
        }
        assert!(!is_psi_unitary(&SparsePoly::zero(8), &p84).unwrap());
        assert!(is_psi_unitary(&p("8:(0;1)"), &p84).is_ok());
        assert!(is_psi_unitary(&p("9:(0;1)"), &p84).is_err());
    }

    #[test]
    fn power_fold_examples() {
        let p84 = PsiParams::new(4, 1, 0).unwrap();
        let a = p("8:(0;1;5)");
        assert!(a.square().is_one());
        assert!(check_lemma1(&a, &p84).unwrap());
        for (s, q) in [(3, 2), (5, 3), (7, 1)] {
            for r in 0..q {
                let params = PsiParams::new(s, q, r).unwrap();
                assert!(check_lemma1(&SparsePoly::one(s << q), &params).unwrap());
            }
        }
    }

    #[test]
    fn power_fold_exhaustive_small() {
        for (s, q) in [(1, 3), (3, 2), (2, 3), (5, 1)] {
            let n = s << q;
            for a in all_polys(n) {
                for r in 0..q {
                    let params = PsiParams::new(s, q, r).unwrap();
                    assert!(check_lemma1(&a, &params).unwrap(), "a = {a}, r = {r}");
                }
            }
        }
    }

    /// `w` is in the kernel of the fold by `r` levels iff `w^(2^r) = 0`.
    #[test]
    fn kernel_equals_nilpotent_exhaustive() {
        for (s, q) in [(1, 4), (3, 2), (2, 3), (1, 3), (5, 1), (7, 1)] {
            let n: usize = s << q;
            if n > 16 {
                continue;
            }
            for w in all_polys(n) {
                for r in 1..=q {
                    let params = PsiParams::new(s, q, q - r).unwrap();
                    assert_eq!(
                        ideal_member(&w, &params).unwrap(),
                        w.pow2k(r).is_zero(),
                        "w = {w}, r = {r}"
                    );
                }
            }
        }
    }

    #[test]
    fn iteration_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let s = rng.random_range(1..40);
            let q = rng.random_range(1..6);
            let r = rng.random_range(0..=q);
            let n = s << q;
            let a = SparsePoly::from_exponents(n, (0..rng.random_range(0..20)).map(|_| rng.random_range(0..n)));
            let direct = psi_map(&a, &PsiParams::new(s, q, r).unwrap()).unwrap();
            let mut stepwise = a.clone();
            for _ in r..q {
                stepwise = fold_once(&stepwise).unwrap();
            }
            assert_eq!(direct, stepwise);
        }
    }

    #[test]
    fn homomorphism_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let s = rng.random_range(1..30);
            let q = rng.random_range(1..5);
            let r = rng.random_range(0..=q);
            let params = PsiParams::new(s, q, r).unwrap();
            let n = s << q;
            let draw = |rng: &mut ChaCha8Rng| {
                SparsePoly::from_exponents(n, (0..rng.random_range(0..12)).map(|_| rng.random_range(0..n)))
            };
            let a = draw(&mut rng);
            let b = draw(&mut rng);
            let pa = psi_map(&a, &params).unwrap();
            let pb = psi_map(&b, &params).unwrap();
            assert_eq!(psi_map(&a.add(&b).unwrap(), &params).unwrap(), pa.add(&pb).unwrap());
            assert_eq!(psi_map(&a.mul(&b).unwrap(), &params).unwrap(), pa.mul(&pb).unwrap());
        }
    }

    #[test]
    fn coset_samples_stay_in_coset() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a0 = p("56:(0;1;3;8;17)");
        let half = PsiParams::new(7, 3, 2).unwrap();
        let down = PsiParams::new(7, 3, 0).unwrap();
        let mut saw_other = false;
        for _ in 0..1000 {
            let b = coset_sample(&a0, &half, &mut rng).unwrap();
            assert_eq!(psi_map(&b, &half).unwrap(), psi_map(&a0, &half).unwrap());
            assert!(is_psi_unitary(&b, &down).unwrap());
            assert!(b.pow2k(3).is_one());
            saw_other |= b != a0;
        }
        assert!(saw_other);
        // r == q has a trivial kernel
        let id = PsiParams::new(7, 3, 3).unwrap();
        assert_eq!(coset_sample(&a0, &id, &mut rng).unwrap(), a0);
    }

    /// With `n = 2s`, every ψ-unitary polynomial of weight > 1 repeats the distance `s`.
    #[test]
    fn half_size_unitaries_have_cycles() {
        for s in 1..=8 {
            let params = PsiParams::new(s, 1, 0).unwrap();
            for a in all_polys(2 * s) {
                if a.weight() > 1 && is_psi_unitary(&a, &params).unwrap() {
                    assert!(crate::cycles::has_length4_cycle(&a), "a = {a}");
                }
            }
        }
    }
}
