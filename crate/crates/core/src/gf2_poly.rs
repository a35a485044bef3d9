//! Sparse arithmetic in `R_n = GF(2)[x]/(x^n - 1)`.
//!
//! An `n x n` binary circulant matrix is identified with the polynomial whose
//! coefficient `a_j` sits in column `j` of the first row. A [`SparsePoly`]
//! stores only the sorted exponents of the non-zero coefficients, so every
//! operation costs a function of the weight rather than of `n`. The only
//! dense code path is [`SparsePoly::euclid_inverse`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Element of `R_n`, stored as its support (strictly increasing exponents in `[0, n)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparsePoly {
    n: usize,
    support: Vec<usize>,
}

/// Sorts `exps` and removes pairs of equal exponents (coefficient addition mod 2).
fn cancel_pairs(mut exps: Vec<usize>) -> Vec<usize> {
    exps.sort_unstable();
    let mut out = Vec::with_capacity(exps.len());
    let mut i = 0;
    while i < exps.len() {
        let mut j = i + 1;
        while j < exps.len() && exps[j] == exps[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(exps[i]);
        }
        i = j;
    }
    out
}

impl SparsePoly {
    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "ring size must be positive");
        SparsePoly { n, support: Vec::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, 0)
    }

    /// `x^(e mod n)`.
    pub fn monomial(n: usize, e: usize) -> Self {
        assert!(n > 0, "ring size must be positive");
        SparsePoly { n, support: vec![e % n] }
    }

    /// Sum of the monomials `x^e` over `exps`. Exponents are reduced mod `n`
    /// and repeated exponents cancel in pairs.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(n: usize, exps: I) -> Self {
        assert!(n > 0, "ring size must be positive");
        let exps = exps.into_iter().map(|e| e % n).collect();
        SparsePoly { n, support: cancel_pairs(exps) }
    }

    /// Builds a polynomial from an explicit support, rejecting exponents
    /// outside `[0, n)` and duplicates. Order is not significant.
    pub fn from_support(n: usize, support: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("ring size must be positive".into()));
        }
        let mut s = support.to_vec();
        s.sort_unstable();
        if let Some(&e) = s.iter().find(|&&e| e >= n) {
            return Err(Error::Parse(format!("exponent {e} out of range for n = {n}")));
        }
        if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Parse(format!("duplicate exponent {}", w[0])));
        }
        Ok(SparsePoly { n, support: s })
    }

    /// From a coefficient vector `(a_0, ..., a_{n-1})`; any non-zero byte is a 1.
    pub fn from_dense(coeffs: &[u8]) -> Self {
        let support = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
            .collect();
        SparsePoly { n: coeffs.len(), support }
    }

    pub fn to_dense(&self) -> Vec<u8> {
        let mut v = vec![0u8; self.n];
        for &e in &self.support {
            v[e] = 1;
        }
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Hamming weight `W[a]`.
    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.support == [0]
    }

    pub fn coefficient(&self, e: usize) -> bool {
        self.support.binary_search(&(e % self.n)).is_ok()
    }

    fn check_same_ring(&self, other: &SparsePoly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RingSizeMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_same_ring(other)?;
        let (a, b) = (&self.support, &other.support);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(SparsePoly { n: self.n, support: out })
    }

    /// Cyclic convolution: `W[a] * W[b]` exponent additions with parity cancellation.
    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_same_ring(other)?;
        let n = self.n;
        let mut exps = Vec::with_capacity(self.weight() * other.weight());
        for &x in &self.support {
            for &y in &other.support {
                let e = x + y;
                exps.push(if e >= n { e - n } else { e });
            }
        }
        Ok(SparsePoly { n, support: cancel_pairs(exps) })
    }

    /// Frobenius squaring: `e -> 2e mod n`.
    pub fn square(&self) -> SparsePoly {
        self.scale_exponents(2)
    }

    /// `a(x) -> a(x^factor)` inside the same ring, i.e. every exponent multiplied
    /// by `factor` modulo `n` (with parity cancellation when two images coincide).
    pub fn scale_exponents(&self, factor: usize) -> SparsePoly {
        let n = self.n;
        let f = factor % n;
        SparsePoly::from_exponents(n, self.support.iter().map(|&e| (e * f) % n))
    }

    /// `a^(2^k)` by `k` Frobenius squarings.
    pub fn pow2k(&self, k: u32) -> SparsePoly {
        let mut r = self.clone();
        for _ in 0..k {
            r = r.square();
        }
        r
    }

    /// Square-and-multiply exponentiation; `a^0 = 1_n`.
    pub fn pow(&self, mut e: u64) -> SparsePoly {
        let mut result = SparsePoly::one(self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    /// Cyclic shift by `j` positions (multiplication by `x^j`); `j` may be negative.
    pub fn shift(&self, j: i64) -> SparsePoly {
        let n = self.n as i64;
        let j = j.rem_euclid(n) as usize;
        let mut support: Vec<usize> = self
            .support
            .iter()
            .map(|&e| {
                let t = e + j;
                if t >= self.n {
                    t - self.n
                } else {
                    t
                }
            })
            .collect();
        support.sort_unstable();
        SparsePoly { n: self.n, support }
    }

    /// `a(x^{-1})`: the polynomial of the transposed circulant.
    pub fn transpose(&self) -> SparsePoly {
        let n = self.n;
        let mut support: Vec<usize> = self.support.iter().map(|&e| (n - e) % n).collect();
        support.sort_unstable();
        SparsePoly { n, support }
    }

    /// Embeds `a(x)` into `R_{factor*n}` as `a(x^factor)`. This is a ring
    /// homomorphism, so it preserves weights, products and inverses.
    pub fn stretch(&self, factor: usize) -> SparsePoly {
        assert!(factor > 0, "stretch factor must be positive");
        SparsePoly {
            n: self.n * factor,
            support: self.support.iter().map(|&e| e * factor).collect(),
        }
    }

    /// Inverse via the extended Euclidean algorithm on `(a, x^n + 1)` over GF(2)[x].
    pub fn euclid_inverse(&self) -> Result<SparsePoly> {
        let n = self.n;
        if self.is_zero() {
            return Err(Error::NotInvertible { n });
        }
        let words = n / 64 + 2;
        let mut r0 = DenseBinPoly::with_words(words);
        r0.set(0);
        r0.set(n);
        let mut r1 = DenseBinPoly::with_words(words);
        for &e in &self.support {
            r1.set(e);
        }
        r1.refresh_degree();
        r0.refresh_degree();
        let mut s0 = DenseBinPoly::with_words(words);
        let mut s1 = DenseBinPoly::with_words(words);
        s1.set(0);
        s1.refresh_degree();

        // invariant: s_i * a == r_i  (mod x^n + 1)
        while let Some(d1) = r1.degree {
            while let Some(d0) = r0.degree {
                if d0 < d1 {
                    break;
                }
                let sh = d0 - d1;
                r0.xor_shifted(&r1, sh);
                s0.xor_shifted(&s1, sh);
            }
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
        }
        if r0.degree != Some(0) {
            return Err(Error::NotInvertible { n });
        }
        // deg s0 < n by the Bezout degree bound; fold defensively anyway.
        let exps = s0.ones().map(|e| e % n);
        let inv = SparsePoly::from_exponents(n, exps);
        Ok(inv)
    }
}

/// Dense GF(2)[x] polynomial used transiently by the Euclidean algorithm.
struct DenseBinPoly {
    words: Vec<u64>,
    degree: Option<usize>,
}

impl DenseBinPoly {
    fn with_words(words: usize) -> Self {
        DenseBinPoly { words: vec![0; words], degree: None }
    }

    fn set(&mut self, bit: usize) {
        self.words[bit / 64] ^= 1u64 << (bit % 64);
    }

    fn refresh_degree(&mut self) {
        let top = self.degree.map_or(self.words.len() - 1, |d| d / 64);
        self.degree = self.scan_degree_from(top);
    }

    fn scan_degree_from(&self, top_word: usize) -> Option<usize> {
        let top_word = top_word.min(self.words.len() - 1);
        (0..=top_word)
            .rev()
            .find(|&i| self.words[i] != 0)
            .map(|i| i * 64 + 63 - self.words[i].leading_zeros() as usize)
    }

    /// `self ^= other * x^sh`. Only used when the result cannot grow past the
    /// allocated words.
    fn xor_shifted(&mut self, other: &DenseBinPoly, sh: usize) {
        let Some(od) = other.degree else { return };
        let ws = sh / 64;
        let bs = sh % 64;
        let last = od / 64;
        if bs == 0 {
            for i in 0..=last {
                self.words[i + ws] ^= other.words[i];
            }
        } else {
            for i in 0..=last {
                let w = other.words[i];
                self.words[i + ws] ^= w << bs;
                if i + ws + 1 < self.words.len() {
                    self.words[i + ws + 1] ^= w >> (64 - bs);
                }
            }
        }
        let new_top = match self.degree {
            Some(d) => d.max(od + sh),
            None => od + sh,
        };
        self.degree = self.scan_degree_from(new_top / 64);
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }
}

impl fmt::Display for SparsePoly {
    /// `n:(e1;e2;...;ek)`, e.g. `56:(0;1;3;8;17)`; the zero polynomial is `n:()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:(", self.n)?;
        for (i, e) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for SparsePoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n_str, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing ':' in {s:?}")))?;
        let n: usize = n_str
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad ring size {n_str:?}")))?;
        let body = rest
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected parenthesised support in {s:?}")))?;
        let mut exps = Vec::new();
        if !body.trim().is_empty() {
            for tok in body.split(';') {
                let e: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent {tok:?}")))?;
                exps.push(e);
            }
        }
        SparsePoly::from_support(n, &exps)
    }
}
