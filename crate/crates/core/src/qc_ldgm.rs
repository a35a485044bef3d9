//! QC-LDGM codes with parity-check matrix `H = [H_0 | H_1 | ... | H_{N_b-1}]`.
//!
//! Check `c` touches variable `i n + (e + c) mod n` for every exponent `e` of
//! block `i`, so the syndrome of a word with block polynomials `C_i` is
//! `Σ_i h_i(x^{-1}) C_i(x)`. With an invertible last block the systematic
//! parity is `P = Σ_i g_i(x^{-1}) U_i(x)`, `g_i = h_{N_b-1}^{-1} h_i`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2_poly::SparsePoly;
use crate::inversion::{invert, Method};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcLdgmCode {
    blocks: Vec<SparsePoly>,
    last_inverse: SparsePoly,
    inverse_method: Method,
    gen_blocks: Vec<SparsePoly>,
    /// `g_i(x^{-1})`, the parity contribution of info block `i`.
    parity_polys: Vec<SparsePoly>,
}

pub fn build_code(blocks: Vec<SparsePoly>) -> Result<QcLdgmCode> {
    if blocks.len() < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 blocks, got {}", blocks.len())));
    }
    let n = blocks[0].n();
    if let Some(b) = blocks.iter().find(|b| b.n() != n) {
        return Err(Error::RingSizeMismatch { left: n, right: b.n() });
    }
    let last = blocks.last().expect("non-empty");
    let rep = match invert(last) {
        Ok(r) => r,
        Err(Error::NotInvertible { .. }) => return Err(Error::LastBlockSingular),
        Err(e) => return Err(e),
    };
    let mut gen_blocks = Vec::with_capacity(blocks.len() - 1);
    for h in &blocks[..blocks.len() - 1] {
        let g = rep.a_inv.mul(h)?;
        // H G^T = 0 blockwise: h_i + h_last g_i = 0
        assert!(h.add(&last.mul(&g)?)?.is_zero(), "generator block fails the parity identity");
        gen_blocks.push(g);
    }
    let parity_polys = gen_blocks.iter().map(|g| g.transpose()).collect();
    Ok(QcLdgmCode { blocks, last_inverse: rep.a_inv, inverse_method: rep.method, gen_blocks, parity_polys })
}

impl QcLdgmCode {
    pub fn blocks(&self) -> &[SparsePoly] {
        &self.blocks
    }

    pub fn last_inverse(&self) -> &SparsePoly {
        &self.last_inverse
    }

    pub fn inverse_method(&self) -> Method {
        self.inverse_method
    }

    pub fn gen_blocks(&self) -> &[SparsePoly] {
        &self.gen_blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].n()
    }

    pub fn length(&self) -> usize {
        self.num_blocks() * self.block_size()
    }

    pub fn dimension(&self) -> usize {
        (self.num_blocks() - 1) * self.block_size()
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.num_blocks() as u64 - 1, self.num_blocks() as u64)
    }

    pub fn block_weights(&self) -> Vec<usize> {
        self.blocks.iter().map(SparsePoly::weight).collect()
    }

    /// Systematic encoding: `info` followed by `n` parity bits.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        let (n, k) = (self.block_size(), self.dimension());
        if info.len() != k {
            return Err(Error::LengthMismatch { expected: k, got: info.len() });
        }
        let mut word = Vec::with_capacity(self.length());
        word.extend_from_slice(info);
        let mut parity = vec![0u8; n];
        for (i, pp) in self.parity_polys.iter().enumerate() {
            for (j, &bit) in info[i * n..(i + 1) * n].iter().enumerate() {
                if bit & 1 == 1 {
                    for &e in pp.support() {
                        let t = e + j;
                        parity[if t >= n { t - n } else { t }] ^= 1;
                    }
                }
            }
        }
        word.extend_from_slice(&parity);
        Ok(word)
    }

    pub fn syndrome(&self, word: &[u8]) -> Result<Vec<u8>> {
        let n = self.block_size();
        if word.len() != self.length() {
            return Err(Error::LengthMismatch { expected: self.length(), got: word.len() });
        }
        let mut s = vec![0u8; n];
        for (i, h) in self.blocks.iter().enumerate() {
            let blk = &word[i * n..(i + 1) * n];
            for (c, sc) in s.iter_mut().enumerate() {
                for &e in h.support() {
                    let t = e + c;
                    *sc ^= blk[if t >= n { t - n } else { t }] & 1;
                }
            }
        }
        Ok(s)
    }

    pub fn is_codeword(&self, word: &[u8]) -> Result<bool> {
        Ok(self.syndrome(word)?.iter().all(|&b| b == 0))
    }

    /// Codeword with `h_j(x^{-1})` in block `i` and `h_i(x^{-1})` in block `j`.
    pub fn low_weight_codeword(&self, i: usize, j: usize) -> Result<Vec<u8>> {
        let nb = self.num_blocks();
        if i >= j || j >= nb {
            return Err(Error::IndexOutOfRange(format!("need 0 <= i < j < {nb}, got ({i}, {j})")));
        }
        let n = self.block_size();
        let mut word = vec![0u8; self.length()];
        for &e in self.blocks[j].transpose().support() {
            word[i * n + e] = 1;
        }
        for &e in self.blocks[i].transpose().support() {
            word[j * n + e] = 1;
        }
        debug_assert!(self.is_codeword(&word)?);
        Ok(word)
    }

    pub fn dmin_estimate(&self) -> DminEstimate {
        DminEstimate::from_weights(self.block_size(), &self.block_weights())
    }

    /// Block pairs `(i, j)` whose pair codeword reaches the distance bound.
    pub fn predicted_pairs(&self) -> BTreeSet<(usize, usize)> {
        predicted_pairs_from_weights(&self.block_weights())
    }

    pub fn complexity(&self) -> Complexity {
        let enc: usize = self.gen_blocks.iter().map(SparsePoly::weight).sum();
        let dec: usize = self.block_weights().iter().sum();
        Complexity {
            c_enc: Ratio::from_integer(enc as u64),
            c_dec: Ratio::new(dec as u64, self.num_blocks() as u64),
        }
    }

    /// Which blocks a word touches.
    pub fn block_support(&self, word: &[u8]) -> Vec<usize> {
        let n = self.block_size();
        (0..self.num_blocks()).filter(|&i| word[i * n..(i + 1) * n].iter().any(|&b| b != 0)).collect()
    }

    /// Exact minimum distance. Info vectors are enumerated by increasing
    /// weight; since a codeword is at least as heavy as its info part, the
    /// search stops once that weight reaches the best codeword found.
    /// `max_info_weight` bounds the enumeration when `K` is large; the result
    /// is then exact only if `exact` is set.
    pub fn brute_force_dmin(&self, max_info_weight: Option<usize>) -> Result<DminSearch> {
        let k = self.dimension();
        if k <= 24 && max_info_weight.is_none() {
            return Ok(DminSearch { weight: self.gray_code_dmin(), exact: true });
        }
        let Some(cap) = max_info_weight else {
            return Err(Error::TooLarge(format!("K = {k} > 24 needs an info-weight cap")));
        };
        let n = self.block_size();
        let words = n.div_ceil(64);
        let columns: Vec<Vec<u64>> = (0..k).map(|j| self.parity_column(j, words)).collect();
        let mut best = usize::MAX;
        let mut w = 1;
        while w <= cap.min(k) && w < best {
            combinations(&columns, 0, w, &vec![0; words], w, &mut best);
            w += 1;
        }
        Ok(DminSearch { weight: best, exact: w >= best || w > k })
    }

    fn parity_column(&self, j: usize, words: usize) -> Vec<u64> {
        let n = self.block_size();
        let (blk, off) = (j / n, j % n);
        let mut col = vec![0u64; words];
        for &e in self.parity_polys[blk].support() {
            let t = (e + off) % n;
            col[t / 64] ^= 1 << (t % 64);
        }
        col
    }

    fn gray_code_dmin(&self) -> usize {
        let k = self.dimension();
        let words = self.block_size().div_ceil(64);
        let columns: Vec<Vec<u64>> = (0..k).map(|j| self.parity_column(j, words)).collect();
        let mut parity = vec![0u64; words];
        let mut info_weight = 0usize;
        let mut info = vec![false; k];
        let mut best = usize::MAX;
        for step in 1u64..(1u64 << k) {
            let j = step.trailing_zeros() as usize;
            info[j] = !info[j];
            if info[j] {
                info_weight += 1;
            } else {
                info_weight -= 1;
            }
            for (p, c) in parity.iter_mut().zip(&columns[j]) {
                *p ^= c;
            }
            let w = info_weight + parity.iter().map(|x| x.count_ones() as usize).sum::<usize>();
            best = best.min(w);
        }
        best
    }

    /// Code definition text: a `nb=<N_b> n=<n>` header and one block per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("nb={} n={}\n", self.num_blocks(), self.block_size());
        for b in &self.blocks {
            out.push_str(&format!("{b}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
        let mut nb = None;
        let mut n = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("nb", v)) => nb = v.parse::<usize>().ok(),
                Some(("n", v)) => n = v.parse::<usize>().ok(),
                _ => return Err(Error::Parse(format!("bad header field `{field}`"))),
            }
        }
        let (nb, n) = nb.zip(n).ok_or_else(|| Error::Parse(format!("header needs nb= and n=, got `{header}`")))?;
        let blocks: Vec<SparsePoly> = lines.map(SparsePoly::from_str).collect::<Result<_>>()?;
        if blocks.len() != nb {
            return Err(Error::Parse(format!("header says {nb} blocks, file has {}", blocks.len())));
        }
        if let Some(b) = blocks.iter().find(|b| b.n() != n) {
            return Err(Error::RingSizeMismatch { left: n, right: b.n() });
        }
        build_code(blocks)
    }
}

impl fmt::Display for QcLdgmCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QC-LDGM({}, {}) n={} weights={:?}", self.length(), self.dimension(), self.block_size(), self.block_weights())
    }
}

/// Minimum of `info_weight + W[parity]` over all info vectors of weight
/// `info_weight` whose first set position is at least `start`.
fn combinations(columns: &[Vec<u64>], start: usize, remaining: usize, acc: &[u64], info_weight: usize, best: &mut usize) {
    if remaining == 0 {
        let w = info_weight + acc.iter().map(|x| x.count_ones() as usize).sum::<usize>();
        *best = (*best).min(w);
        return;
    }
    for j in start..=columns.len() - remaining {
        let next: Vec<u64> = acc.iter().zip(&columns[j]).map(|(a, c)| a ^ c).collect();
        combinations(columns, j + 1, remaining - 1, &next, info_weight, best);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DminSearch {
    pub weight: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DminEstimate {
    pub d_bar: usize,
    pub p: u64,
    pub a: u64,
    pub w1: usize,
    pub w2: Option<usize>,
    pub n1: usize,
    pub n2: usize,
}

impl DminEstimate {
    pub fn from_weights(n: usize, weights: &[usize]) -> Self {
        let w1 = *weights.iter().min().expect("at least one block");
        let n1 = weights.iter().filter(|&&w| w == w1).count();
        let w2 = weights.iter().copied().filter(|&w| w > w1).min();
        let n2 = w2.map_or(0, |w2| weights.iter().filter(|&&w| w == w2).count());
        let (d_bar, p) = if n1 > 1 {
            (2 * w1, (n1 * (n1 - 1) / 2) as u64)
        } else {
            (w1 + w2.unwrap_or(w1), n2 as u64)
        };
        DminEstimate { d_bar, p, a: n as u64 * p, w1, w2, n1, n2 }
    }
}

pub fn predicted_pairs_from_weights(weights: &[usize]) -> BTreeSet<(usize, usize)> {
    let nb = weights.len();
    let pairs = (0..nb).flat_map(|i| (i + 1..nb).map(move |j| (i, j)));
    let d_bar = pairs.clone().map(|(i, j)| weights[i] + weights[j]).min();
    pairs.filter(|&(i, j)| Some(weights[i] + weights[j]) == d_bar).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Complexity {
    pub c_enc: Ratio<u64>,
    pub c_dec: Ratio<u64>,
}

/// Random blocks of the requested weights that keep the Tanner graph of
/// `existing ++ result` free of length-4 cycles. Exponents are added one at a
/// time and rejected if they create a circular distance already in use.
pub fn random_companion_blocks<R: Rng + ?Sized>(
    n: usize,
    weights: &[usize],
    existing: &[SparsePoly],
    rng: &mut R,
    max_tries: usize,
) -> Result<Vec<SparsePoly>> {
    if let Some(b) = existing.iter().find(|b| b.n() != n) {
        return Err(Error::RingSizeMismatch { left: n, right: b.n() });
    }
    'attempt: for _ in 0..max_tries {
        let mut used = vec![false; n];
        for b in existing {
            for &x in b.support() {
                for &y in b.support() {
                    if x != y {
                        used[(y + n - x) % n] = true;
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(weights.len());
        for &w in weights {
            let mut sup: Vec<usize> = vec![0];
            let mut stalls = 0;
            while sup.len() < w {
                let e = rng.random_range(1..n);
                let fresh = sup.iter().all(|&x| {
                    let (d1, d2) = ((e + n - x) % n, (x + n - e) % n);
                    d1 != d2 && !used[d1] && !used[d2]
                });
                // the new element's distances to the others must also be mutually distinct
                let mut ds: Vec<usize> = sup.iter().flat_map(|&x| [(e + n - x) % n, (x + n - e) % n]).collect();
                ds.sort_unstable();
                let distinct = ds.windows(2).all(|p| p[0] != p[1]);
                if fresh && distinct && !sup.contains(&e) {
                    for d in ds {
                        used[d] = true;
                    }
                    sup.push(e);
                } else {
                    stalls += 1;
                    if stalls > 10 * n {
                        continue 'attempt;
                    }
                }
            }
            // random rotation keeps the distance set and spreads the supports
            let block = SparsePoly::from_exponents(n, sup).shift(rng.random_range(0..n) as i64);
            out.push(block);
        }
        return Ok(out);
    }
    Err(Error::Exhausted { tries: max_tries })
}
