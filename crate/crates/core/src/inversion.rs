//! Closed-form inversion of Ξ matrices, inverse-weight bounds and statistics,
//! and the Euclid-vs-fast timing harness.
//!
//! For `a` in the coset `a_0 + <x^{2^{m+1} s} + 1>` of a ψ-unitary `a_0` in
//! `R_{2^{m+2} s}`,
//!
//! ```text
//! a^{-1} = (a^{2^m} + w) · a · a^2 · ... · a^{2^{m-1}},      a^{2^m} w = 1 + a^{2^{m+1}}
//! ```
//!
//! where `w` depends only on the coset. On Ξ it depends only on `m, s, c_{-1}, k_0`.

use std::collections::BTreeMap;
use std::fmt;
use std::hint::black_box;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2_poly::SparsePoly;
use crate::psi::{is_psi_unitary, PsiParams};
use crate::xi_design::{random_xi_params, xi_poly, XiParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Closed-form `w`.
    Fast,
    /// Closed form failed the identity check; `w` came from one Euclid call on the coset.
    FastCosetW,
    Euclid,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Fast => "fast",
            Method::FastCosetW => "fast-coset-w",
            Method::Euclid => "euclid",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseReport {
    pub a: SparsePoly,
    pub a_inv: SparsePoly,
    pub w: Option<SparsePoly>,
    pub method: Method,
    pub weight_inv: usize,
    pub bound: Option<u64>,
}

fn ring_size(m: u32, s: usize) -> Result<usize> {
    if s == 0 || m > 40 {
        return Err(Error::InvalidParams(format!("bad level/size m = {m}, s = {s}")));
    }
    s.checked_mul(1usize << (m + 2))
        .ok_or_else(|| Error::InvalidParams(format!("n = 2^{} * {s} overflows", m + 2)))
}

/// `w` for the Ξ coset with the given `c_{-1}` and `k_0`, in `R_{2^{m+2} s}`.
pub fn w_closed_form(m: u32, s: usize, c_minus1: usize, k0: usize) -> Result<SparsePoly> {
    let n = ring_size(m, s)?;
    if c_minus1 >= 4 || k0 == 0 || k0 >= s {
        return Err(Error::InvalidParams(format!("c_minus1 = {c_minus1}, k_0 = {k0} outside Ξ bounds for s = {s}")));
    }
    let k = k0;
    let base: Vec<usize> = if c_minus1.is_multiple_of(2) {
        vec![2 * k, 3 * k, 3 * k + s, 2 * k + 2 * s, 3 * k + 2 * s, 3 * k + 3 * s]
    } else {
        vec![
            k,
            3 * k,
            s,
            k + s,
            2 * k + s,
            3 * k + s,
            k + 2 * s,
            3 * k + 2 * s,
            3 * s,
            k + 3 * s,
            2 * k + 3 * s,
            3 * k + 3 * s,
        ]
    };
    let scale = 1usize << m;
    Ok(SparsePoly::from_exponents(n, base.into_iter().map(|e| (e % (4 * s)) * scale % n)))
}

/// `w = a_0^{-2^m} + a_0^{2^m}`, valid for every member of the coset of `a_0`.
pub fn coset_w(a0: &SparsePoly, m: u32, s: usize) -> Result<SparsePoly> {
    let n = ring_size(m, s)?;
    if a0.n() != n {
        return Err(Error::RingSizeMismatch { left: a0.n(), right: n });
    }
    let inv = a0.euclid_inverse()?;
    inv.pow2k(m).add(&a0.pow2k(m))
}

/// `a^{2^i}` for `i = 0..=m+1` by repeated squaring.
fn frobenius_chain(a: &SparsePoly, m: u32) -> Vec<SparsePoly> {
    let mut chain = Vec::with_capacity(m as usize + 2);
    chain.push(a.clone());
    for _ in 0..=m {
        let next = chain.last().expect("non-empty").square();
        chain.push(next);
    }
    chain
}

fn compose(chain: &[SparsePoly], m: u32, w: &SparsePoly) -> SparsePoly {
    let m = m as usize;
    let mut acc = chain[m].add(w).expect("same ring");
    for p in &chain[..m] {
        acc = acc.mul(p).expect("same ring");
    }
    acc
}

/// `a^{2^m} w == 1 + a^{2^{m+1}}`.
pub fn identity_holds(a: &SparsePoly, m: u32, w: &SparsePoly) -> Result<bool> {
    let chain = frobenius_chain(a, m);
    identity_holds_chain(&chain, m, w)
}

fn identity_holds_chain(chain: &[SparsePoly], m: u32, w: &SparsePoly) -> Result<bool> {
    let m = m as usize;
    let lhs = chain[m].mul(w)?;
    let rhs = chain[m + 1].add(&SparsePoly::one(w.n()))?;
    Ok(lhs == rhs)
}

/// Applies the product formula with a caller-supplied `w` and verifies the result.
pub fn fast_inverse_with_w(a: &SparsePoly, m: u32, w: &SparsePoly) -> Result<SparsePoly> {
    if a.n() != w.n() {
        return Err(Error::RingSizeMismatch { left: a.n(), right: w.n() });
    }
    let chain = frobenius_chain(a, m);
    let inv = compose(&chain, m, w);
    if !a.mul(&inv)?.is_one() {
        return Err(Error::NotInvertible { n: a.n() });
    }
    Ok(inv)
}

pub fn fast_inverse(params: &XiParams) -> Result<InverseReport> {
    let a = xi_poly(params)?;
    let (m, s) = (params.m, params.s);
    let chain = frobenius_chain(&a, m);
    let mut w = w_closed_form(m, s, params.c_minus1, params.k[0])?;
    let mut method = Method::Fast;
    if !identity_holds_chain(&chain, m, &w)? {
        w = coset_w(&a, m, s)?;
        method = Method::FastCosetW;
    }
    let a_inv = compose(&chain, m, &w);
    if !a.mul(&a_inv)?.is_one() {
        return Err(Error::NotInvertible { n: a.n() });
    }
    Ok(InverseReport {
        weight_inv: a_inv.weight(),
        bound: Some(inverse_weight_bound(m)),
        a,
        a_inv,
        w: Some(w),
        method,
    })
}

pub fn euclid_report(a: &SparsePoly) -> Result<InverseReport> {
    let a_inv = a.euclid_inverse()?;
    Ok(InverseReport { a: a.clone(), weight_inv: a_inv.weight(), a_inv, w: None, method: Method::Euclid, bound: None })
}

/// Tries to read `a` as a member of some Ξ coset and invert it in closed form.
/// Candidates for `(m, s, c_{-1}, k_0)` come from the support itself; a
/// candidate is accepted only if the defining identity for `w` holds.
pub fn recognize_and_invert(a: &SparsePoly) -> Option<InverseReport> {
    let n = a.n();
    if a.weight().is_multiple_of(2) {
        return None;
    }
    let twos = n.trailing_zeros();
    for m in 0..twos.saturating_sub(1) {
        let s = n >> (m + 2);
        if s < 2 || !is_psi_unitary(a, &PsiParams::new(s, m + 2, 0).ok()?).ok()? {
            continue;
        }
        let chain = frobenius_chain(a, m);
        let mut tried = Vec::new();
        let c_cands: Vec<usize> = a.support().iter().filter(|&&e| e % s == 0).map(|&e| (e / s) % 4).collect();
        for &c_minus1 in &c_cands {
            for &e in a.support() {
                let k0 = e % s;
                if k0 == 0 || tried.contains(&(c_minus1 % 2, k0)) {
                    continue;
                }
                tried.push((c_minus1 % 2, k0));
                let w = w_closed_form(m, s, c_minus1, k0).ok()?;
                if identity_holds_chain(&chain, m, &w).ok()? {
                    let a_inv = compose(&chain, m, &w);
                    if a.mul(&a_inv).ok()?.is_one() {
                        let bound = (a.weight() == 2 * m as usize + 3).then(|| inverse_weight_bound(m));
                        return Some(InverseReport {
                            a: a.clone(),
                            weight_inv: a_inv.weight(),
                            a_inv,
                            w: Some(w),
                            method: Method::Fast,
                            bound,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Closed form inversion when `a` is recognisably in Ξ, Euclid otherwise.
pub fn invert(a: &SparsePoly) -> Result<InverseReport> {
    match recognize_and_invert(a) {
        Some(r) => Ok(r),
        None => euclid_report(a),
    }
}

/// `a^{2^m}` predicted from the parameters (pairs at levels `i >= 2` cancel).
pub fn predicted_pow2m(params: &XiParams) -> SparsePoly {
    let (m, s, n) = (params.m, params.s, params.n());
    let scale = 1usize << m;
    let mut base = vec![
        params.c_minus1 * s,
        params.k[0] + params.c[0] * 2 * s,
        params.k[0] + s + params.d[0] * 2 * s,
    ];
    if m >= 1 {
        // second term is k_1 + 2s(1 + δ_{m,0}); the δ only matters for m = 0
        base.push(params.k[1]);
        base.push(params.k[1] + 2 * s);
    }
    SparsePoly::from_exponents(n, base.into_iter().map(|e| e * scale % n))
}

/// `a^{2^{m+1}}` predicted from the parameters.
pub fn predicted_pow2m1(params: &XiParams) -> SparsePoly {
    let (m, s, n) = (params.m, params.s, params.n());
    let scale = 2usize << m;
    let base = [
        params.c_minus1 * s,
        params.k[0] + params.c[0] * 2 * s,
        params.k[0] + s + params.d[0] * 2 * s,
    ];
    SparsePoly::from_exponents(n, base.into_iter().map(|e| e * scale % n))
}

/// Upper bound on `W[a^{-1}]` for weight-`(2m+3)` members of Ξ.
pub fn inverse_weight_bound(m: u32) -> u64 {
    match m {
        0 => 9,
        1 => 45,
        _ => {
            let m = m as u64;
            (2..=m).fold(11 * (2 * m + 3), |acc, k| acc * (2 * k + 3))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightHistogram {
    pub m: u32,
    pub s: usize,
    pub seed: u64,
    pub counts: BTreeMap<usize, u64>,
}

impl WeightHistogram {
    pub fn samples(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn mean(&self) -> f64 {
        let total: f64 = self.counts.iter().map(|(&w, &c)| w as f64 * c as f64).sum();
        total / self.samples() as f64
    }

    pub fn percent(&self, weight: usize) -> f64 {
        100.0 * self.counts.get(&weight).copied().unwrap_or(0) as f64 / self.samples() as f64
    }

    pub fn merge(&mut self, other: &WeightHistogram) {
        for (&w, &c) in &other.counts {
            *self.counts.entry(w).or_insert(0) += c;
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,count,percent\n");
        for (&w, &c) in &self.counts {
            out.push_str(&format!("{w},{c},{:.4}\n", self.percent(w)));
        }
        out
    }
}

const CHUNK: usize = 1024;

/// Inverse weights of `samples` uniformly drawn Ξ members at level `m`, size `s`.
/// Work is split into fixed chunks, each with its own stream of the seeded
/// generator, so the result does not depend on the thread count.
pub fn weight_distribution(m: u32, s: usize, samples: usize, seed: u64) -> Result<WeightHistogram> {
    if samples == 0 {
        return Err(Error::InvalidParams("samples must be at least 1".into()));
    }
    ring_size(m, s)?;
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Result<BTreeMap<usize, u64>>> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(ci as u64);
            let todo = CHUNK.min(samples - ci * CHUNK);
            let mut counts = BTreeMap::new();
            for _ in 0..todo {
                let params = random_xi_params(m, s, &mut rng)?;
                let rep = fast_inverse(&params)?;
                *counts.entry(rep.weight_inv).or_insert(0) += 1;
            }
            Ok(counts)
        })
        .collect();
    let mut hist = WeightHistogram { m, s, seed, counts: BTreeMap::new() };
    for part in parts {
        hist.merge(&WeightHistogram { m, s, seed, counts: part? });
    }
    Ok(hist)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub weight: usize,
    pub method: Method,
    pub mean_time_normalized: f64,
    pub mean_time_ns: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchTable {
    /// Mean Euclid time at `n = 128`, `W = 3`, the normalisation unit.
    pub baseline_ns: f64,
    pub rows: Vec<BenchRow>,
}

impl BenchTable {
    pub fn get(&self, n: usize, weight: usize, method: Method) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.n == n && r.weight == weight && r.method == method)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,W,method,mean_time_normalized,mean_time_ns\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.4},{:.1}\n",
                r.n, r.weight, r.method, r.mean_time_normalized, r.mean_time_ns
            ));
        }
        out
    }
}

fn level_for(n: usize, weight: usize) -> Result<(u32, usize)> {
    if weight < 3 || weight.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("weight {weight} is not 2m + 3")));
    }
    let m = (weight as u32 - 3) / 2;
    let q = 1usize << (m + 2);
    if !n.is_multiple_of(q) || n / q < 2 {
        return Err(Error::InvalidParams(format!("n = {n} is not 2^{} s with s >= 2", m + 2)));
    }
    Ok((m, n / q))
}

/// Mean seconds-in-ns per inversion for both methods on one shared random set.
fn time_cell(n: usize, weight: usize, trials: usize, rng: &mut ChaCha8Rng) -> Result<(f64, f64)> {
    let (m, s) = level_for(n, weight)?;
    let set: Vec<(XiParams, SparsePoly)> = (0..trials)
        .map(|_| {
            let p = random_xi_params(m, s, rng)?;
            let a = xi_poly(&p)?;
            Ok((p, a))
        })
        .collect::<Result<_>>()?;

    let start = Instant::now();
    for (_, a) in &set {
        black_box(black_box(a).euclid_inverse()?);
    }
    let euclid = start.elapsed().as_nanos() as f64 / trials as f64;

    let start = Instant::now();
    for (p, a) in &set {
        let a = black_box(a);
        let w = w_closed_form(p.m, p.s, p.c_minus1, p.k[0])?;
        let chain = frobenius_chain(a, p.m);
        black_box(compose(&chain, p.m, &w));
    }
    let fast = start.elapsed().as_nanos() as f64 / trials as f64;
    Ok((euclid, fast))
}

/// Times Euclid and fast inversion per `(n, W)` cell, single-threaded.
/// Times are normalised to Euclid at `n = 128`, `W = 3`, which is always measured.
pub fn bench_invert(n_list: &[usize], weight_list: &[usize], trials: usize, seed: u64) -> Result<BenchTable> {
    if trials == 0 {
        return Ok(BenchTable { baseline_ns: 0.0, rows: vec![] });
    }
    for &w in weight_list {
        for &n in n_list {
            level_for(n, w)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // warm-up, then the normalisation cell
    time_cell(128, 3, trials.min(16), &mut rng)?;
    let (baseline_ns, _) = time_cell(128, 3, trials, &mut rng)?;
    let mut rows = Vec::new();
    for &w in weight_list {
        for &n in n_list {
            let (euclid, fast) = time_cell(n, w, trials, &mut rng)?;
            for (method, t) in [(Method::Euclid, euclid), (Method::Fast, fast)] {
                rows.push(BenchRow {
                    n,
                    weight: w,
                    method,
                    mean_time_normalized: t / baseline_ns,
                    mean_time_ns: t,
                });
            }
        }
    }
    Ok(BenchTable { baseline_ns, rows })
}

/// How `k_1..k_m` relate to `k_0` in a search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KFamily {
    Free,
    /// `k_i = mult[i] * k_0`; `mult[0]` must be 1.
    Multiples(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Offsets {
    /// `c_{-1} = c_i = d_i = 0`.
    Zero,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Random { draws_per_s: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchGrid {
    pub m: u32,
    pub s_values: Vec<usize>,
    pub k_family: KFamily,
    pub offsets: Offsets,
    pub mode: SearchMode,
}

impl fmt::Display for SearchGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = (self.s_values.iter().min(), self.s_values.iter().max());
        write!(f, "m={} s=", self.m)?;
        match (lo, hi) {
            (Some(lo), Some(hi)) => write!(f, "{lo}..={hi} ({} values)", self.s_values.len())?,
            _ => write!(f, "none")?,
        }
        write!(f, " k={:?} offsets={:?} mode={:?}", self.k_family, self.offsets, self.mode)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub grid: SearchGrid,
    pub max_weight: usize,
    pub argmax: Option<XiParams>,
    pub evaluated: u64,
}

fn k_choices(m: u32, s: usize, family: &KFamily) -> Vec<Vec<usize>> {
    let len = m as usize + 1;
    match family {
        KFamily::Multiples(mult) => (1..s)
            .map(|k0| mult.iter().map(|&t| t * k0).collect::<Vec<_>>())
            .filter(|k| k.len() == len && k.iter().enumerate().all(|(i, &ki)| ki < s << i))
            .filter(|k| (1..k.len()).all(|i| !k[..i].contains(&k[i])))
            .collect(),
        KFamily::Free => {
            let mut out = vec![vec![]];
            for i in 0..len {
                let mut next = Vec::new();
                for prefix in &out {
                    for v in 1..s << i {
                        if !prefix.contains(&v) {
                            let mut t = prefix.clone();
                            t.push(v);
                            next.push(t);
                        }
                    }
                }
                out = next;
            }
            out
        }
    }
}

fn offset_choices(m: u32, offsets: Offsets) -> Vec<(usize, Vec<usize>, Vec<usize>)> {
    let len = m as usize + 1;
    if offsets == Offsets::Zero {
        return vec![(0, vec![0; len], vec![0; len])];
    }
    // mixed radix over (c_{-1}, c_0, d_0, c_1, d_1, ...)
    let radices: Vec<usize> = std::iter::once(4)
        .chain((0..len).flat_map(|i| [1usize << (len - i), 1usize << (len - i)]))
        .collect();
    let total: usize = radices.iter().product();
    (0..total)
        .map(|mut idx| {
            let mut digits = Vec::with_capacity(radices.len());
            for &r in &radices {
                digits.push(idx % r);
                idx /= r;
            }
            let c = (0..len).map(|i| digits[1 + 2 * i]).collect();
            let d = (0..len).map(|i| digits[2 + 2 * i]).collect();
            (digits[0], c, d)
        })
        .collect()
}

fn random_in_family<R: rand::Rng>(m: u32, s: usize, grid: &SearchGrid, rng: &mut R) -> Result<Option<XiParams>> {
    let mut p = random_xi_params(m, s, rng)?;
    if let KFamily::Multiples(_) = grid.k_family {
        let ks = k_choices(m, s, &grid.k_family);
        if ks.is_empty() {
            return Ok(None);
        }
        p.k = ks[rng.random_range(0..ks.len())].clone();
    }
    if grid.offsets == Offsets::Zero {
        p = XiParams::plain(m, s, &p.k);
    }
    Ok(Some(p))
}

/// Largest `W[a^{-1}]` over the grid. Parameter sets whose positions collide are skipped.
pub fn max_weight_search(grid: &SearchGrid) -> Result<SearchReport> {
    let m = grid.m;
    if let KFamily::Multiples(mult) = &grid.k_family {
        if mult.len() != m as usize + 1 || mult.first() != Some(&1) {
            return Err(Error::InvalidParams(format!("multiples {mult:?} do not fit level {m}")));
        }
    }
    let per_s: Vec<Result<(usize, Option<XiParams>, u64)>> = grid
        .s_values
        .par_iter()
        .map(|&s| {
            ring_size(m, s)?;
            let mut best = (0usize, None, 0u64);
            let consider = |p: XiParams, best: &mut (usize, Option<XiParams>, u64)| -> Result<()> {
                match fast_inverse(&p) {
                    Ok(r) => {
                        best.2 += 1;
                        if r.weight_inv > best.0 {
                            *best = (r.weight_inv, Some(p), best.2);
                        }
                        Ok(())
                    }
                    Err(Error::Collision { .. }) => Ok(()),
                    Err(e) => Err(e),
                }
            };
            match grid.mode {
                SearchMode::Exhaustive => {
                    let offs = offset_choices(m, grid.offsets);
                    for k in k_choices(m, s, &grid.k_family) {
                        for (c_minus1, c, d) in &offs {
                            let p = XiParams { m, s, k: k.clone(), c_minus1: *c_minus1, c: c.clone(), d: d.clone() };
                            consider(p, &mut best)?;
                        }
                    }
                }
                SearchMode::Random { draws_per_s, seed } => {
                    if s < 2 {
                        return Ok(best);
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(s as u64);
                    for _ in 0..draws_per_s {
                        if let Some(p) = random_in_family(m, s, grid, &mut rng)? {
                            consider(p, &mut best)?;
                        }
                    }
                }
            }
            Ok(best)
        })
        .collect();
    let mut report = SearchReport { grid: grid.clone(), max_weight: 0, argmax: None, evaluated: 0 };
    for r in per_s {
        let (w, p, count) = r?;
        report.evaluated += count;
        if w > report.max_weight {
            report.max_weight = w;
            report.argmax = p;
        }
    }
    Ok(report)
}
