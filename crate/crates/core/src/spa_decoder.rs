//! LLR sum-product decoding on the Tanner graph of a QC-LDGM code, the BSC and
//! AWGN channels, Monte Carlo simulation, and two-stage concatenated decoding.
//!
//! Conventions: positive LLR favours bit 0; AWGN maps bit 0 to `+1`;
//! `LLR == 0` decides bit 1; messages are clipped to `±38`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qc_ldgm::QcLdgmCode;

pub const LLR_CLIP: f64 = 38.0;
pub const DEFAULT_MAX_ITER: usize = 100;

/// Check-major adjacency. Edge `e` joins check `c` (with
/// `check_ptr[c] <= e < check_ptr[c+1]`) to variable `check_vars[e]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    n_vars: usize,
    check_ptr: Vec<usize>,
    check_vars: Vec<usize>,
    var_ptr: Vec<usize>,
    var_edges: Vec<usize>,
}

impl TannerGraph {
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_checks(&self) -> usize {
        self.check_ptr.len() - 1
    }

    pub fn n_edges(&self) -> usize {
        self.check_vars.len()
    }

    pub fn check_neighbors(&self, c: usize) -> &[usize] {
        &self.check_vars[self.check_ptr[c]..self.check_ptr[c + 1]]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_ptr[v + 1] - self.var_ptr[v]
    }

    pub fn syndrome_is_zero(&self, bits: &[u8]) -> bool {
        (0..self.n_checks()).all(|c| self.check_neighbors(c).iter().fold(0u8, |acc, &v| acc ^ bits[v]) == 0)
    }
}

pub fn build_graph(code: &QcLdgmCode) -> TannerGraph {
    let n = code.block_size();
    let n_vars = code.length();
    let mut check_ptr = Vec::with_capacity(n + 1);
    let mut check_vars = Vec::new();
    check_ptr.push(0);
    for c in 0..n {
        let start = check_vars.len();
        for (i, b) in code.blocks().iter().enumerate() {
            check_vars.extend(b.support().iter().map(|&e| i * n + (e + c) % n));
        }
        check_vars[start..].sort_unstable();
        check_ptr.push(check_vars.len());
    }
    let mut deg = vec![0usize; n_vars];
    for &v in &check_vars {
        deg[v] += 1;
    }
    let mut var_ptr = vec![0usize; n_vars + 1];
    for v in 0..n_vars {
        var_ptr[v + 1] = var_ptr[v] + deg[v];
    }
    let mut fill = var_ptr.clone();
    let mut var_edges = vec![0usize; check_vars.len()];
    for (e, &v) in check_vars.iter().enumerate() {
        var_edges[fill[v]] = e;
        fill[v] += 1;
    }
    TannerGraph { n_vars, check_ptr, check_vars, var_ptr, var_edges }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelPoint {
    /// Crossover probability in `[0, 0.5)`.
    Bsc { p: f64 },
    /// `Eb/N0` in dB for a code of the given rate, unit-energy antipodal symbols.
    Awgn { ebn0_db: f64, rate: f64 },
}

impl ChannelPoint {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelPoint::Bsc { p } if !(0.0..0.5).contains(&p) => {
                Err(Error::InvalidParams(format!("BSC p = {p} not in [0, 0.5)")))
            }
            ChannelPoint::Awgn { ebn0_db, rate } if !ebn0_db.is_finite() || !(rate > 0.0 && rate <= 1.0) => {
                Err(Error::InvalidParams(format!("AWGN Eb/N0 = {ebn0_db} dB, rate = {rate}")))
            }
            _ => Ok(()),
        }
    }

    pub fn sigma2(&self) -> Option<f64> {
        match *self {
            ChannelPoint::Awgn { ebn0_db, rate } => Some(1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))),
            ChannelPoint::Bsc { .. } => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ChannelPoint::Bsc { .. } => "bsc",
            ChannelPoint::Awgn { .. } => "awgn",
        }
    }

    pub fn param(&self) -> f64 {
        match *self {
            ChannelPoint::Bsc { p } => p,
            ChannelPoint::Awgn { ebn0_db, .. } => ebn0_db,
        }
    }

    pub fn transmit<R: Rng + ?Sized>(&self, codeword: &[u8], rng: &mut R) -> ChannelOutput {
        match *self {
            ChannelPoint::Bsc { p } => {
                ChannelOutput::Hard(codeword.iter().map(|&b| b ^ u8::from(rng.random_bool(p))).collect())
            }
            ChannelPoint::Awgn { .. } => {
                let sigma = self.sigma2().expect("awgn").sqrt();
                let noise = Normal::new(0.0, sigma).expect("finite sigma");
                ChannelOutput::Soft(
                    codeword.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 } + noise.sample(rng)).collect(),
                )
            }
        }
    }
}

impl fmt::Display for ChannelPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ChannelPoint::Bsc { p } => write!(f, "bsc p={p}"),
            ChannelPoint::Awgn { ebn0_db, rate } => write!(f, "awgn ebn0={ebn0_db}dB rate={rate}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChannelOutput {
    Hard(Vec<u8>),
    Soft(Vec<f64>),
}

impl ChannelOutput {
    pub fn len(&self) -> usize {
        match self {
            ChannelOutput::Hard(v) => v.len(),
            ChannelOutput::Soft(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn clip(x: f64) -> f64 {
    x.clamp(-LLR_CLIP, LLR_CLIP)
}

pub fn llr_init(received: &ChannelOutput, point: &ChannelPoint) -> Result<Vec<f64>> {
    point.validate()?;
    match (received, *point) {
        (ChannelOutput::Hard(r), ChannelPoint::Bsc { p }) => {
            let mag = clip(((1.0 - p) / p).ln());
            Ok(r.iter().map(|&b| if b == 0 { mag } else { -mag }).collect())
        }
        (ChannelOutput::Soft(y), ChannelPoint::Awgn { .. }) => {
            let s2 = point.sigma2().expect("awgn");
            Ok(y.iter().map(|&y| clip(2.0 * y / s2)).collect())
        }
        _ => Err(Error::InvalidParams(format!("received samples do not match channel {point}"))),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutput {
    pub bits: Vec<u8>,
    pub posterior: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Flooding-schedule decoder owning its message buffers.
pub struct Decoder<'g> {
    graph: &'g TannerGraph,
    max_iter: usize,
    min_sum: bool,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    scratch: Vec<f64>,
}

fn hard(llr: &[f64], out: &mut [u8]) {
    for (b, &l) in out.iter_mut().zip(llr) {
        *b = u8::from(l <= 0.0);
    }
}

impl<'g> Decoder<'g> {
    pub fn new(graph: &'g TannerGraph, max_iter: usize) -> Self {
        let e = graph.n_edges();
        Decoder { graph, max_iter, min_sum: false, v2c: vec![0.0; e], c2v: vec![0.0; e], scratch: Vec::new() }
    }

    pub fn with_min_sum(mut self, on: bool) -> Self {
        self.min_sum = on;
        self
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    pub fn decode(&mut self, llr: &[f64]) -> Result<DecodeOutput> {
        let g = self.graph;
        if llr.len() != g.n_vars {
            return Err(Error::LengthMismatch { expected: g.n_vars, got: llr.len() });
        }
        let mut bits = vec![0u8; g.n_vars];
        let mut posterior = llr.to_vec();
        hard(&posterior, &mut bits);
        if g.syndrome_is_zero(&bits) {
            return Ok(DecodeOutput { bits, posterior, iterations: 0, converged: true });
        }
        for (e, &v) in g.check_vars.iter().enumerate() {
            self.v2c[e] = llr[v];
        }
        for it in 1..=self.max_iter {
            for c in 0..g.n_checks() {
                let (lo, hi) = (g.check_ptr[c], g.check_ptr[c + 1]);
                if self.min_sum {
                    self.check_min_sum(lo, hi);
                } else {
                    self.check_tanh(lo, hi);
                }
            }
            for v in 0..g.n_vars {
                let edges = &g.var_edges[g.var_ptr[v]..g.var_ptr[v + 1]];
                let total = llr[v] + edges.iter().map(|&e| self.c2v[e]).sum::<f64>();
                posterior[v] = total;
                for &e in edges {
                    self.v2c[e] = clip(total - self.c2v[e]);
                }
            }
            hard(&posterior, &mut bits);
            if g.syndrome_is_zero(&bits) {
                return Ok(DecodeOutput { bits, posterior, iterations: it, converged: true });
            }
        }
        Ok(DecodeOutput { bits, posterior, iterations: self.max_iter, converged: false })
    }

    /// `L_out = 2 atanh(Π tanh(L_in / 2))` over the other edges, via prefix and suffix products.
    fn check_tanh(&mut self, lo: usize, hi: usize) {
        let d = hi - lo;
        self.scratch.clear();
        self.scratch.extend(self.v2c[lo..hi].iter().map(|&l| (0.5 * l).tanh()));
        let t = &self.scratch;
        let mut prefix = 1.0;
        for (out, &tk) in self.c2v[lo..hi].iter_mut().zip(t) {
            *out = prefix;
            prefix *= tk;
        }
        let mut suffix = 1.0;
        for k in (0..d).rev() {
            let prod = self.c2v[lo + k] * suffix;
            self.c2v[lo + k] = clip(2.0 * prod.atanh());
            suffix *= t[k];
        }
    }

    fn check_min_sum(&mut self, lo: usize, hi: usize) {
        let (mut min1, mut min2, mut at, mut sign) = (f64::INFINITY, f64::INFINITY, lo, 1.0f64);
        for e in lo..hi {
            let l = self.v2c[e];
            if l <= 0.0 {
                sign = -sign;
            }
            let a = l.abs();
            if a < min1 {
                min2 = min1;
                min1 = a;
                at = e;
            } else if a < min2 {
                min2 = a;
            }
        }
        for e in lo..hi {
            let s = if self.v2c[e] <= 0.0 { -sign } else { sign };
            self.c2v[e] = s * if e == at { min2 } else { min1 };
        }
    }
}

pub fn decode(graph: &TannerGraph, llr: &[f64], max_iter: usize) -> Result<DecodeOutput> {
    Decoder::new(graph, max_iter).decode(llr)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcatOutput {
    pub info: Vec<u8>,
    pub inner: DecodeOutput,
    pub outer: DecodeOutput,
}

/// Inner decode from channel LLRs, then outer decode with the inner
/// posteriors of the inner information positions as its channel LLRs.
pub fn decode_concatenated(
    inner: (&QcLdgmCode, &TannerGraph),
    outer: (&QcLdgmCode, &TannerGraph),
    llr: &[f64],
    max_iter: (usize, usize),
) -> Result<ConcatOutput> {
    let k_in = inner.0.dimension();
    if outer.0.length() != k_in {
        return Err(Error::LengthMismatch { expected: k_in, got: outer.0.length() });
    }
    let inner_out = Decoder::new(inner.1, max_iter.0).decode(llr)?;
    let prior: Vec<f64> = inner_out.posterior[..k_in].iter().map(|&l| clip(l)).collect();
    let outer_out = Decoder::new(outer.1, max_iter.1).decode(&prior)?;
    let info = outer_out.bits[..outer.0.dimension()].to_vec();
    Ok(ConcatOutput { info, inner: inner_out, outer: outer_out })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StopRule {
    pub max_frames: u64,
    pub min_frame_errors: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule { max_frames: 10_000_000, min_frame_errors: 100 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub max_iter: usize,
    pub min_sum: bool,
    /// Send the all-zero codeword instead of random information.
    pub all_zero: bool,
    /// Frames decoded in parallel between stop-rule checks.
    pub batch: usize,
    /// Keep at most this many undetected-error difference patterns.
    pub keep_patterns: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { max_iter: DEFAULT_MAX_ITER, min_sum: false, all_zero: false, batch: 256, keep_patterns: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub code_id: String,
    pub point: ChannelPoint,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    /// Frames that converged to a codeword other than the one sent.
    pub undetected: u64,
    /// Converged frames whose decision fails the code's own syndrome check (expected 0).
    pub syndrome_violations: u64,
    pub total_iters: u64,
    pub max_iter: usize,
    pub seed: u64,
    pub info_bits: usize,
    /// Support of `decoded ^ sent` for undetected errors, in frame order.
    pub undetected_patterns: Vec<Vec<usize>>,
}

impl SimResult {
    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / (self.frames as f64 * self.info_bits as f64)
    }

    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.frames as f64
    }

    pub fn avg_iters(&self) -> f64 {
        self.total_iters as f64 / self.frames as f64
    }

    pub const CSV_HEADER: &'static str =
        "code_id,channel,param,frames,bit_errors,frame_errors,undetected,BER,FER,avg_iters,max_iter,seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.6e},{:.6e},{:.3},{},{}",
            self.code_id,
            self.point.kind(),
            self.point.param(),
            self.frames,
            self.bit_errors,
            self.frame_errors,
            self.undetected,
            self.ber(),
            self.fer(),
            self.avg_iters(),
            self.max_iter,
            self.seed
        )
    }
}

struct FrameOutcome {
    bit_errors: u64,
    frame_error: bool,
    undetected: Option<Vec<usize>>,
    syndrome_violation: bool,
    iterations: usize,
}

fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

fn random_info<R: Rng + ?Sized>(k: usize, all_zero: bool, rng: &mut R) -> Vec<u8> {
    if all_zero {
        vec![0; k]
    } else {
        (0..k).map(|_| u8::from(rng.random_bool(0.5))).collect()
    }
}

/// Runs frames in fixed-size batches; frame `f` always uses stream `f` of
/// the seeded generator and outcomes are folded in frame order, so results
/// do not depend on the worker count.
pub fn simulate(
    code: &QcLdgmCode,
    graph: &TannerGraph,
    code_id: &str,
    point: ChannelPoint,
    stop: StopRule,
    seed: u64,
    cfg: &SimConfig,
) -> Result<SimResult> {
    point.validate()?;
    let k = code.dimension();
    let mut res = SimResult {
        code_id: code_id.to_string(),
        point,
        frames: 0,
        bit_errors: 0,
        frame_errors: 0,
        undetected: 0,
        syndrome_violations: 0,
        total_iters: 0,
        max_iter: cfg.max_iter,
        seed,
        info_bits: k,
        undetected_patterns: Vec::new(),
    };
    let batch = cfg.batch.max(1) as u64;
    while res.frames < stop.max_frames && res.frame_errors < stop.min_frame_errors {
        let first = res.frames;
        let last = (first + batch).min(stop.max_frames);
        let outcomes: Vec<Result<FrameOutcome>> = (first..last)
            .into_par_iter()
            .map_init(
                || Decoder::new(graph, cfg.max_iter).with_min_sum(cfg.min_sum),
                |dec, f| {
                    let mut rng = frame_rng(seed, f);
                    let info = random_info(k, cfg.all_zero, &mut rng);
                    let sent = code.encode(&info)?;
                    let rx = point.transmit(&sent, &mut rng);
                    let out = dec.decode(&llr_init(&rx, &point)?)?;
                    let bit_errors = out.bits[..k].iter().zip(&info).filter(|(a, b)| a != b).count() as u64;
                    let differs = out.bits != sent;
                    let syndrome_violation = out.converged && !code.is_codeword(&out.bits)?;
                    let undetected = (out.converged && differs).then(|| {
                        out.bits.iter().zip(&sent).enumerate().filter(|(_, (a, b))| a != b).map(|(i, _)| i).collect()
                    });
                    Ok(FrameOutcome {
                        bit_errors,
                        frame_error: bit_errors > 0,
                        undetected,
                        syndrome_violation,
                        iterations: out.iterations,
                    })
                },
            )
            .collect();
        for o in outcomes {
            let o = o?;
            res.frames += 1;
            res.bit_errors += o.bit_errors;
            res.frame_errors += u64::from(o.frame_error);
            res.syndrome_violations += u64::from(o.syndrome_violation);
            res.total_iters += o.iterations as u64;
            if let Some(pat) = o.undetected {
                res.undetected += 1;
                if res.undetected_patterns.len() < cfg.keep_patterns {
                    res.undetected_patterns.push(pat);
                }
            }
            if res.frame_errors >= stop.min_frame_errors {
                break;
            }
        }
    }
    Ok(res)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcatSimResult {
    pub point: ChannelPoint,
    pub frames: u64,
    pub info_bits: usize,
    /// Errors on the outer information positions after the inner decoder alone.
    pub inner_bit_errors: u64,
    pub inner_frame_errors: u64,
    pub concat_bit_errors: u64,
    pub concat_frame_errors: u64,
    pub seed: u64,
}

impl ConcatSimResult {
    pub fn inner_fer(&self) -> f64 {
        self.inner_frame_errors as f64 / self.frames as f64
    }

    pub fn concat_fer(&self) -> f64 {
        self.concat_frame_errors as f64 / self.frames as f64
    }

    pub fn inner_ber(&self) -> f64 {
        self.inner_bit_errors as f64 / (self.frames as f64 * self.info_bits as f64)
    }

    pub fn concat_ber(&self) -> f64 {
        self.concat_bit_errors as f64 / (self.frames as f64 * self.info_bits as f64)
    }
}

/// Paired comparison on the same received frames: the inner decision on the
/// outer information positions versus the two-stage decision. Stops once both
/// error counts reach the target, or at `max_frames`.
pub fn simulate_concatenated(
    inner: &QcLdgmCode,
    outer: &QcLdgmCode,
    point: ChannelPoint,
    stop: StopRule,
    seed: u64,
    max_iter: (usize, usize),
    batch: usize,
) -> Result<ConcatSimResult> {
    point.validate()?;
    if outer.length() != inner.dimension() {
        return Err(Error::LengthMismatch { expected: inner.dimension(), got: outer.length() });
    }
    let (gi, go) = (build_graph(inner), build_graph(outer));
    let k = outer.dimension();
    let mut res = ConcatSimResult {
        point,
        frames: 0,
        info_bits: k,
        inner_bit_errors: 0,
        inner_frame_errors: 0,
        concat_bit_errors: 0,
        concat_frame_errors: 0,
        seed,
    };
    let batch = batch.max(1) as u64;
    let done = |r: &ConcatSimResult| {
        r.frames >= stop.max_frames
            || (r.inner_frame_errors >= stop.min_frame_errors && r.concat_frame_errors >= stop.min_frame_errors)
    };
    while !done(&res) {
        let first = res.frames;
        let last = (first + batch).min(stop.max_frames);
        let outcomes: Vec<Result<(u64, u64)>> = (first..last)
            .into_par_iter()
            .map(|f| {
                let mut rng = frame_rng(seed, f);
                let info = random_info(k, false, &mut rng);
                let outer_word = outer.encode(&info)?;
                let sent = inner.encode(&outer_word)?;
                let rx = point.transmit(&sent, &mut rng);
                let out = decode_concatenated((inner, &gi), (outer, &go), &llr_init(&rx, &point)?, max_iter)?;
                let count = |d: &[u8]| d.iter().zip(&info).filter(|(a, b)| a != b).count() as u64;
                Ok((count(&out.inner.bits[..k]), count(&out.info)))
            })
            .collect();
        for o in outcomes {
            let (ie, ce) = o?;
            res.frames += 1;
            res.inner_bit_errors += ie;
            res.inner_frame_errors += u64::from(ie > 0);
            res.concat_bit_errors += ce;
            res.concat_frame_errors += u64::from(ce > 0);
            if done(&res) {
                break;
            }
        }
    }
    Ok(res)
}
