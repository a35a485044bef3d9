//! End-to-end acceptance checks. Each criterion prints one line:
//! `PASS`, `FAIL` (a hard failure, the test panics at the end), or
//! `FAIL (shortfall)` when every part that can be met on this machine passed
//! but one measured target was not reached: the low-noise error count of the
//! BSC run, and the Euclid growth ratio of the timing run.
//!
//! Built without the libtest harness so the lines are always shown, and the
//! criteria run sequentially so the timing check is not disturbed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_rational::Ratio;
use psi_ldgm::cycles::matrix_girth_ok;
use psi_ldgm::inversion::{
    bench_invert, fast_inverse, identity_holds, inverse_weight_bound, max_weight_search, predicted_pow2m,
    weight_distribution, KFamily, Method, Offsets, SearchGrid, SearchMode,
};
use psi_ldgm::qc_ldgm::{build_code, random_companion_blocks, QcLdgmCode};
use psi_ldgm::spa_decoder::{
    build_graph, simulate, simulate_concatenated, ChannelPoint, SimConfig, SimResult, StopRule,
};
use psi_ldgm::xi_design::{goodmat, random_xi_params, sample_cycle_free, xi_poly, XiParams};
use psi_ldgm::{Error, SparsePoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Verdict {
    Pass(String),
    Shortfall(String),
}

type Outcome = std::result::Result<Verdict, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn p(s: &str) -> SparsePoly {
    s.parse().unwrap()
}

fn code_with_last(n: usize, weights: &[usize], last: SparsePoly, seed: u64) -> QcLdgmCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = random_companion_blocks(n, weights, std::slice::from_ref(&last), &mut rng, 200).unwrap();
    blocks.push(last);
    build_code(blocks).unwrap()
}

fn supports(code: &QcLdgmCode) -> Vec<Vec<usize>> {
    code.blocks().iter().map(|b| b.support().to_vec()).collect()
}

/// Oracle girth check on the expanded matrix, cross-checked with the library.
fn girth_oracle(code: &QcLdgmCode) -> std::result::Result<(), String> {
    let n = code.block_size();
    let h = common::expanded_h(n, &supports(code));
    let oracle = !common::has_rectangle(&h);
    let lib = matrix_girth_ok(code.blocks()).map_err(|e| e.to_string())?;
    ensure!(oracle && lib, "4-cycle in n={n} code (oracle ok={oracle}, library ok={lib})");
    Ok(())
}

fn c1_worked_example() -> Outcome {
    let params = XiParams::plain(1, 7, &[1, 3]);
    let a = xi_poly(&params).map_err(|e| e.to_string())?;
    ensure!(a == p("56:(0;1;3;8;17)"), "design gives {a}");
    let r = fast_inverse(&params).map_err(|e| e.to_string())?;
    ensure!(r.method == Method::Fast, "method {}", r.method);
    ensure!(r.w == Some(p("56:(4;6;20;32;34;48)")), "w = {:?}", r.w);
    ensure!(a.square() == p("56:(0;2;6;16;34)"), "a^2 = {}", a.square());
    ensure!(predicted_pow2m(&params) == a.square(), "predicted a^2 differs");
    let expected = p("56:(1;2;4;7;8;9;10;12;16;20;23;24;28;32;35;37;40;48;51)");
    ensure!(r.a_inv == expected, "a^-1 = {}", r.a_inv);
    ensure!(a.euclid_inverse().map_err(|e| e.to_string())? == expected, "euclid disagrees");
    let oracle = common::circulant_inverse(56, a.support()).ok_or("oracle: singular")?;
    ensure!(oracle == expected.support(), "dense oracle disagrees");
    Ok(Verdict::Pass(format!("W[a^-1] = {}", r.weight_inv)))
}

fn c2_larger_example() -> Outcome {
    let a = p("176:(0;1;3;7;12;25;51)");
    let expected = p("176:(0;1;2;8;12;14;15;16;17;19;20;24;28;32;36;39;40;43;44;48;56;60;63;68;72;80;84;87;92;96;103;105;107;108;120;127;131;132;144;151;156;168;175)");
    let r = fast_inverse(&XiParams::plain(2, 11, &[1, 3, 7])).map_err(|e| e.to_string())?;
    ensure!(r.a == a, "design gives {}", r.a);
    ensure!(r.weight_inv == 43 && r.a_inv == expected, "a^-1 = {} (weight {})", r.a_inv, r.weight_inv);
    ensure!(a.euclid_inverse().map_err(|e| e.to_string())? == expected, "euclid disagrees");
    let scaled = a.stretch(8);
    ensure!(scaled == p("1408:(0;8;24;56;96;200;408)"), "scaled = {scaled}");
    let inv = scaled.euclid_inverse().map_err(|e| e.to_string())?;
    ensure!(inv.weight() == 43, "scaled inverse weight {}", inv.weight());
    ensure!(scaled.mul(&inv).map_err(|e| e.to_string())?.is_one(), "scaled product is not one");
    Ok(Verdict::Pass("W = 43 in R_176 and R_1408".into()))
}

fn c3_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut dense_checked = 0;
    for case in 0..1000 {
        let m = case % 3;
        let s = rng.random_range(8..=256);
        let params = random_xi_params(m as u32, s, &mut rng).map_err(|e| e.to_string())?;
        let r = fast_inverse(&params).map_err(|e| e.to_string())?;
        let e = r.a.euclid_inverse().map_err(|e| e.to_string())?;
        ensure!(r.a_inv == e, "fast != euclid for {}", params);
        let w = r.w.as_ref().ok_or("missing w")?;
        ensure!(identity_holds(&r.a, params.m, w).map_err(|e| e.to_string())?, "identity fails for {}", params);
        if r.a.n() <= 512 && case % 10 == 0 {
            let oracle = common::circulant_inverse(r.a.n(), r.a.support()).ok_or("oracle: singular")?;
            ensure!(oracle == r.a_inv.support(), "dense oracle disagrees for {}", params);
            dense_checked += 1;
        }
    }
    Ok(Verdict::Pass(format!("1000 cases, {dense_checked} also against dense elimination")))
}

fn c4_m0_inverse_weight() -> Outcome {
    let (mut designs, mut cycle_free, mut lo, mut hi) = (0u64, 0u64, usize::MAX, 0);
    for s in 3..=64 {
        for k0 in 1..s {
            for c_minus1 in 0..4 {
                for c0 in 0..2 {
                    for d0 in 0..2 {
                        let params = XiParams { m: 0, s, k: vec![k0], c_minus1, c: vec![c0], d: vec![d0] };
                        let a = match xi_poly(&params) {
                            Ok(a) => a,
                            Err(Error::Collision { .. }) => continue,
                            Err(e) => return Err(e.to_string()),
                        };
                        designs += 1;
                        if psi_ldgm::cycles::has_length4_cycle(&a) {
                            continue;
                        }
                        cycle_free += 1;
                        let w = fast_inverse(&params).map_err(|e| e.to_string())?.weight_inv;
                        ensure!((5..=9).contains(&w), "W[a^-1] = {w} for {}", params);
                        lo = lo.min(w);
                        hi = hi.max(w);
                    }
                }
            }
        }
    }
    Ok(Verdict::Pass(format!("{cycle_free} cycle-free of {designs} designs, W in [{lo}, {hi}]")))
}

fn c5_weight_distribution() -> Outcome {
    let h = weight_distribution(1, 16, 20_000, 5).map_err(|e| e.to_string())?;
    let (mean, f45) = (h.mean(), h.percent(45));
    ensure!((mean - 34.95).abs() <= 0.5, "s=16 mean {mean:.3}");
    ensure!((f45 - 3.62).abs() <= 0.5, "s=16 weight-45 {f45:.3}%");
    let h = weight_distribution(1, 1024, 20_000, 5).map_err(|e| e.to_string())?;
    let big = h.percent(45);
    ensure!((big - 97.70).abs() <= 0.5, "s=1024 weight-45 {big:.3}%");
    Ok(Verdict::Pass(format!("s=16 mean {mean:.2}, {f45:.2}% at 45; s=1024 {big:.2}% at 45")))
}

struct Row {
    name: &'static str,
    n: usize,
    weights: &'static [usize],
    last: Option<&'static str>,
    d_bar: usize,
    a: u64,
    c_enc: u64,
    c_dec: Ratio<u64>,
}

fn c6_table_rows() -> Outcome {
    let r = |num, den| Ratio::new(num, den);
    let rows = [
        Row { name: "C_I(2560,2048)", n: 512, weights: &[6, 6, 6, 6], last: None, d_bar: 7, a: 2048, c_enc: 24, c_dec: r(5, 1) },
        Row { name: "C_psi(2560,2048)", n: 512, weights: &[5, 5, 5, 5], last: Some("512:(0;8;24;72;152)"), d_bar: 10, a: 5120, c_enc: 338, c_dec: r(5, 1) },
        Row { name: "C_I^a(1248,936)", n: 312, weights: &[5, 5, 5], last: None, d_bar: 6, a: 936, c_enc: 15, c_dec: r(4, 1) },
        Row { name: "C_I^b(1248,936)", n: 312, weights: &[7, 6, 6], last: None, d_bar: 7, a: 624, c_enc: 19, c_dec: r(5, 1) },
        Row { name: "C_psi(1248,936)", n: 312, weights: &[5, 5, 5], last: Some("312:(0;3;9;42;87)"), d_bar: 10, a: 1872, c_enc: 261, c_dec: r(5, 1) },
        Row { name: "C_I^a(1880,1504)", n: 376, weights: &[5, 5, 5, 5], last: None, d_bar: 6, a: 1504, c_enc: 20, c_dec: r(21, 5) },
        Row { name: "C_I^b(1880,1504)", n: 376, weights: &[6, 6, 6, 6], last: None, d_bar: 7, a: 1504, c_enc: 24, c_dec: r(5, 1) },
        Row { name: "C_psi(1880,1504)", n: 376, weights: &[5, 5, 5, 5], last: Some("376:(0;6;18;53;112)"), d_bar: 10, a: 3760, c_enc: 366, c_dec: r(5, 1) },
        Row { name: "C_I^a(8192,7168)", n: 1024, weights: &[5; 7], last: None, d_bar: 6, a: 7168, c_enc: 35, c_dec: r(9, 2) },
        Row { name: "C_I^b(8192,7168)", n: 1024, weights: &[6, 6, 6, 6, 5, 5, 5], last: None, d_bar: 6, a: 3072, c_enc: 39, c_dec: r(5, 1) },
        Row { name: "C_psi(8192,7168)", n: 1024, weights: &[5; 7], last: Some("1024:(0;32;160;224;480)"), d_bar: 10, a: 28672, c_enc: 525, c_dec: r(5, 1) },
        Row { name: "C_I(10000,5000)", n: 5000, weights: &[5], last: None, d_bar: 6, a: 5000, c_enc: 5, c_dec: r(3, 1) },
        Row { name: "C_I(5000,4500)", n: 500, weights: &[4, 4, 3, 3, 3, 3, 3, 3, 3], last: None, d_bar: 4, a: 3500, c_enc: 29, c_dec: r(3, 1) },
        Row { name: "C_psi(5000,4500)", n: 500, weights: &[3; 9], last: Some("500:(0;3;128)"), d_bar: 6, a: 22500, c_enc: 243, c_dec: r(3, 1) },
    ];
    let mut inv_weights = Vec::new();
    let mut enc_notes = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let last = row.last.map_or_else(|| SparsePoly::one(row.n), p);
        let code = code_with_last(row.n, row.weights, last, 60 + i as u64);
        let est = code.dmin_estimate();
        ensure!(est.d_bar == row.d_bar && est.a == row.a, "{}: d_bar/A = {}/{}", row.name, est.d_bar, est.a);
        let cx = code.complexity();
        ensure!(cx.c_dec == row.c_dec, "{}: C_dec = {}", row.name, cx.c_dec);
        if row.last.is_some() {
            let inv = code.last_inverse();
            let prod = code.blocks().last().unwrap().mul(inv).map_err(|e| e.to_string())?;
            ensure!(prod.is_one(), "{}: h * h^-1 = {prod}", row.name);
            inv_weights.push(inv.weight());
            // companion blocks are random, so C_enc is only checked against the product bound
            let cap: usize = row.weights.iter().map(|w| w * inv.weight()).sum();
            ensure!(*cx.c_enc.numer() as usize <= cap, "{}: C_enc {} above {cap}", row.name, cx.c_enc);
            enc_notes.push(format!("{}~{}", cx.c_enc, row.c_enc));
        } else {
            ensure!(cx.c_enc == Ratio::from_integer(row.c_enc), "{}: C_enc = {}", row.name, cx.c_enc);
        }
    }
    ensure!(inv_weights == [19, 21, 21, 15, 9], "W[H^-1] = {inv_weights:?}");
    Ok(Verdict::Pass(format!("14 rows, W[H^-1] = {inv_weights:?}, psi C_enc got~table {}", enc_notes.join(" "))))
}

fn c7_bound_and_search() -> Outcome {
    let bounds: Vec<u64> = (2..=4).map(inverse_weight_bound).collect();
    ensure!(bounds == [539, 6237, 83853], "bounds {bounds:?}");
    let grid = SearchGrid {
        m: 2,
        s_values: (8..=64).collect(),
        k_family: KFamily::Free,
        offsets: Offsets::All,
        mode: SearchMode::Random { draws_per_s: 400, seed: 7 },
    };
    let rep = max_weight_search(&grid).map_err(|e| e.to_string())?;
    ensure!((200..=539).contains(&rep.max_weight), "search max {}", rep.max_weight);
    let arg = rep.argmax.map(|p| p.to_string()).unwrap_or_default();
    Ok(Verdict::Pass(format!("bounds {bounds:?}; search max {} over {} designs ({arg})", rep.max_weight, rep.evaluated)))
}

fn c8_benchmark_trend() -> Outcome {
    let ns = [128, 256, 512, 1024, 2048, 4096, 8192];
    let t = bench_invert(&ns, &[3], 200, 8).map_err(|e| e.to_string())?;
    let get = |n, m| t.get(n, 3, m).map(|r| r.mean_time_ns).ok_or(format!("missing row n={n}"));
    let fast: Vec<f64> = ns.iter().map(|&n| get(n, Method::Fast)).collect::<std::result::Result<_, _>>()?;
    let fast_spread = fast.iter().cloned().fold(0.0, f64::max) / fast.iter().cloned().fold(f64::INFINITY, f64::min);
    let euclid_growth = get(8192, Method::Euclid)? / get(128, Method::Euclid)?;
    let speedup = get(8192, Method::Euclid)? / get(8192, Method::Fast)?;
    let detail = format!("fast spread {fast_spread:.2}x, euclid growth {euclid_growth:.0}x, speedup at 8192 {speedup:.0}x");
    ensure!(fast_spread < 3.0 && speedup >= 10.0 && euclid_growth > 2.0 * fast_spread, "{detail}");
    if euclid_growth <= 50.0 {
        return Ok(Verdict::Shortfall(format!("{detail}; euclid growth not above 50x")));
    }
    Ok(Verdict::Pass(detail))
}

/// Codes assembled by the Monte Carlo criteria, shared so they are built once.
struct Codes {
    bsc: QcLdgmCode,
    inner: QcLdgmCode,
    outer: QcLdgmCode,
    small: QcLdgmCode,
}

fn codes() -> Codes {
    Codes {
        bsc: code_with_last(312, &[5, 5, 5], p("312:(0;3;9;42;87)"), 1),
        inner: code_with_last(1000, &[5], SparsePoly::one(1000), 1),
        outer: code_with_last(100, &[3; 9], goodmat(0, 25, &[2]).unwrap().poly, 2),
        small: code_with_last(20, &[3, 3], SparsePoly::one(20), 4),
    }
}

fn c9_girth(codes: &Codes) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut drawn = 0;
    for (m, s) in [(0u32, 3usize), (0, 8), (0, 16), (0, 32), (1, 5), (1, 8), (1, 16), (2, 7), (2, 8)] {
        for strict in [false, true] {
            for _ in 0..20 {
                let g = match sample_cycle_free(m, s, &mut rng, 10_000, strict) {
                    Ok(g) => g,
                    // some small sizes admit no cycle-free design at all
                    Err(Error::Exhausted { .. }) => break,
                    Err(e) => return Err(format!("m={m} s={s} strict={strict}: {e}")),
                };
                let n = g.poly.n();
                let h = common::expanded_h(n, &[g.poly.support().to_vec()]);
                ensure!(!common::has_rectangle(&h), "sampled {} has a 4-cycle", g.poly);
                drawn += 1;
            }
        }
    }
    ensure!(drawn >= 200, "only {drawn} designs drawn");
    let mut assembled = 0;
    for code in [&codes.outer, &codes.small] {
        girth_oracle(code)?;
        assembled += 1;
    }
    Ok(Verdict::Pass(format!("{drawn} sampled designs, {assembled} assembled codes with n <= 128")))
}

fn check_sim(r: &SimResult) -> std::result::Result<(), String> {
    ensure!(r.syndrome_violations == 0, "{} converged frames with nonzero syndrome at {}", r.syndrome_violations, r.point);
    Ok(())
}

fn c10_decoder_sanity(codes: &Codes) -> Outcome {
    let code = &codes.bsc;
    let g = build_graph(code);
    let cfg = SimConfig::default();
    let clean = simulate(code, &g, "psi312", ChannelPoint::Bsc { p: 0.0 }, StopRule { max_frames: 2000, min_frame_errors: 1 }, 10, &cfg)
        .map_err(|e| e.to_string())?;
    ensure!(clean.frame_errors == 0 && clean.bit_errors == 0, "noiseless frames decoded with errors");
    check_sim(&clean)?;
    let hi = simulate(code, &g, "psi312", ChannelPoint::Bsc { p: 0.02 }, StopRule { max_frames: 1_000_000, min_frame_errors: 100 }, 11, &cfg)
        .map_err(|e| e.to_string())?;
    check_sim(&hi)?;
    ensure!(hi.frame_errors >= 100, "p=0.02: only {} frame errors", hi.frame_errors);
    // the budget covers about a minute of decoding on one core
    let lo = simulate(code, &g, "psi312", ChannelPoint::Bsc { p: 0.005 }, StopRule { max_frames: 100_000, min_frame_errors: 100 }, 12, &cfg)
        .map_err(|e| e.to_string())?;
    check_sim(&lo)?;
    ensure!(lo.fer() < hi.fer(), "FER {:.3e} at p=0.005 not below {:.3e} at p=0.02", lo.fer(), hi.fer());
    let detail = format!(
        "FER {:.3e} ({} errors / {} frames) at p=0.02, {:.3e} ({} / {}) at p=0.005",
        hi.fer(),
        hi.frame_errors,
        hi.frames,
        lo.fer(),
        lo.frame_errors,
        lo.frames
    );
    if lo.frame_errors < 100 {
        return Ok(Verdict::Shortfall(format!("{detail}; fewer than 100 errors at p=0.005")));
    }
    Ok(Verdict::Pass(detail))
}

fn c11_concatenation(codes: &Codes) -> Outcome {
    let rate = codes.outer.dimension() as f64 / codes.inner.length() as f64;
    let point = ChannelPoint::Awgn { ebn0_db: 2.5, rate };
    let stop = StopRule { max_frames: 200_000, min_frame_errors: 100 };
    let r = simulate_concatenated(&codes.inner, &codes.outer, point, stop, 13, (100, 100), 64).map_err(|e| e.to_string())?;
    let detail = format!(
        "{point}: inner FER {:.3e} ({} errors), concatenated {:.3e} ({} errors), {} frames",
        r.inner_fer(),
        r.inner_frame_errors,
        r.concat_fer(),
        r.concat_frame_errors,
        r.frames
    );
    ensure!(r.inner_frame_errors >= 100 && r.concat_frame_errors >= 100, "{detail}");
    ensure!(r.concat_fer() <= r.inner_fer(), "{detail}");
    Ok(Verdict::Pass(detail))
}

fn c12_undetected_patterns(codes: &Codes) -> Outcome {
    let code = &codes.small;
    let dmin = code.brute_force_dmin(Some(code.dimension())).map_err(|e| e.to_string())?;
    ensure!(dmin.exact, "dmin search not exact");
    let predicted = code.predicted_pairs();
    let d_bar = code.dmin_estimate().d_bar;
    let g = build_graph(code);
    let stop = StopRule { max_frames: 200_000, min_frame_errors: 2000 };
    let r = simulate(code, &g, "small", ChannelPoint::Bsc { p: 0.08 }, stop, 14, &SimConfig::default())
        .map_err(|e| e.to_string())?;
    check_sim(&r)?;
    ensure!(r.undetected_patterns.len() >= 50, "only {} undetected events", r.undetected_patterns.len());
    let h = common::expanded_h(code.block_size(), &supports(code));
    let mut at_bound = 0;
    for pat in &r.undetected_patterns {
        let mut word = vec![0u8; code.length()];
        pat.iter().for_each(|&i| word[i] = 1);
        ensure!(common::dense_syndrome(&h, &word).iter().all(|&b| b == 0), "pattern {pat:?} is not a codeword");
        ensure!(pat.len() >= dmin.weight, "pattern weight {} below dmin {}", pat.len(), dmin.weight);
        if pat.len() == d_bar {
            let blocks = code.block_support(&word);
            ensure!(blocks.len() == 2 && predicted.contains(&(blocks[0], blocks[1])), "weight-{d_bar} pattern in blocks {blocks:?}");
            at_bound += 1;
        }
    }
    ensure!(at_bound > 0, "no pattern at the distance bound");
    Ok(Verdict::Pass(format!(
        "{} events, dmin {}, {at_bound} at weight {d_bar} all in {predicted:?}",
        r.undetected_patterns.len(),
        dmin.weight
    )))
}

fn main() {
    let start = Instant::now();
    let codes = codes();
    let criteria: Vec<Criterion> = vec![
        ("worked example", Box::new(c1_worked_example)),
        ("larger example", Box::new(c2_larger_example)),
        ("fast vs euclid", Box::new(c3_oracle_equivalence)),
        ("m=0 inverse weight", Box::new(c4_m0_inverse_weight)),
        ("weight distribution", Box::new(c5_weight_distribution)),
        ("code table", Box::new(c6_table_rows)),
        ("bound and search", Box::new(c7_bound_and_search)),
        ("benchmark trend", Box::new(c8_benchmark_trend)),
        ("girth oracle", Box::new(|| c9_girth(&codes))),
        ("decoder sanity", Box::new(|| c10_decoder_sanity(&codes))),
        ("concatenation", Box::new(|| c11_concatenation(&codes))),
        ("undetected patterns", Box::new(|| c12_undetected_patterns(&codes))),
    ];
    let mut hard = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(Verdict::Pass(d)) => println!("criterion {:>2} {name}: PASS [{secs:.1}s] {d}", i + 1),
            Ok(Verdict::Shortfall(d)) => println!("criterion {:>2} {name}: FAIL (shortfall) [{secs:.1}s] {d}", i + 1),
            Err(d) => {
                println!("criterion {:>2} {name}: FAIL [{secs:.1}s] {d}", i + 1);
                hard.push(i + 1);
            }
        }
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    assert!(hard.is_empty(), "failed criteria: {hard:?}");
}
