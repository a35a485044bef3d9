//! The Ξ family of ψ-unitary polynomials and cycle-free designs drawn from it.
//!
//! A member of level `m` lives in `R_n` with `n = 2^{m+2} s` and has support
//!
//! ```text
//! { c_{-1} s } ∪ { k_i + c_i 2^{i+1} s } ∪ { k_i + 2^i s + d_i 2^{i+1} s },  i = 0..=m
//! ```
//!
//! so its weight is `2m + 3` unless two positions coincide.

use std::fmt;

use rand::seq::index;
use rand::Rng;

use crate::cycles::has_length4_cycle;
use crate::error::{Error, Result};
use crate::gf2_poly::SparsePoly;
use crate::psi::{is_psi_unitary, PsiParams};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XiParams {
    pub m: u32,
    pub s: usize,
    pub k: Vec<usize>,
    pub c_minus1: usize,
    pub c: Vec<usize>,
    pub d: Vec<usize>,
}

impl XiParams {
    /// The `c_{-1} = c_i = d_i = 0` member with the given `k`.
    pub fn plain(m: u32, s: usize, k: &[usize]) -> Self {
        let len = m as usize + 1;
        XiParams { m, s, k: k.to_vec(), c_minus1: 0, c: vec![0; len], d: vec![0; len] }
    }

    pub fn n(&self) -> usize {
        self.s << (self.m + 2)
    }

    pub fn weight(&self) -> usize {
        2 * self.m as usize + 3
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.s == 0 {
            return bad("s must be positive".into());
        }
        if self.m > 40 || self.s.checked_shl(self.m + 2).is_none_or(|n| n >> (self.m + 2) != self.s) {
            return bad(format!("n = 2^{} * {} overflows", self.m + 2, self.s));
        }
        let len = self.m as usize + 1;
        for (name, v) in [("k", &self.k), ("c", &self.c), ("d", &self.d)] {
            if v.len() != len {
                return bad(format!("{name} has {} entries, level {} needs {len}", v.len(), self.m));
            }
        }
        if self.c_minus1 >= 4 {
            return bad(format!("c_minus1 = {} not in [0, 4)", self.c_minus1));
        }
        for i in 0..len {
            let k_lim = self.s << i;
            if self.k[i] == 0 || self.k[i] >= k_lim {
                return bad(format!("k_{i} = {} not in (0, {k_lim})", self.k[i]));
            }
            let cd_lim = 1usize << (self.m as usize + 1 - i);
            if self.c[i] >= cd_lim || self.d[i] >= cd_lim {
                return bad(format!("c_{i} = {}, d_{i} = {} not in [0, {cd_lim})", self.c[i], self.d[i]));
            }
            if self.k[..i].contains(&self.k[i]) {
                return bad(format!("k_{i} = {} repeats an earlier k", self.k[i]));
            }
        }
        Ok(())
    }

    /// Positions before reduction and cancellation, in the order
    /// `c_{-1} s, k_0 + ..., k_0 + s + ..., k_1 + ..., ...`.
    pub fn positions(&self) -> Vec<usize> {
        let n = self.n();
        let mut out = vec![(self.c_minus1 * self.s) % n];
        for i in 0..=self.m as usize {
            let block = self.s << (i + 1);
            out.push((self.k[i] + self.c[i] * block) % n);
            out.push((self.k[i] + (self.s << i) + self.d[i] * block) % n);
        }
        out
    }

    /// Flat `key=value` lines, the same shape as the CLI config file.
    pub fn to_kv(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "m={}\ns={}\nk={}\nc_minus1={}\nc={}\nd={}\n",
            self.m,
            self.s,
            join(&self.k),
            self.c_minus1,
            join(&self.c),
            join(&self.d)
        )
    }

    /// Parses the output of [`XiParams::to_kv`]. Missing `c_minus1`, `c`, `d`
    /// default to zero; other keys are ignored.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut m = None;
        let mut s = None;
        let mut k = None;
        let mut c_minus1 = 0;
        let mut c = None;
        let mut d = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{line}`")))?;
            let value = value.trim();
            match key.trim() {
                "m" => m = Some(parse_num(value)? as u32),
                "s" => s = Some(parse_num(value)?),
                "k" => k = Some(parse_list(value)?),
                "c_minus1" => c_minus1 = parse_num(value)?,
                "c" => c = Some(parse_list(value)?),
                "d" => d = Some(parse_list(value)?),
                _ => {}
            }
        }
        let m = m.ok_or_else(|| Error::Parse("missing m".into()))?;
        let s = s.ok_or_else(|| Error::Parse("missing s".into()))?;
        let k = k.ok_or_else(|| Error::Parse("missing k".into()))?;
        let len = m as usize + 1;
        let params = XiParams {
            m,
            s,
            k,
            c_minus1,
            c: c.unwrap_or_else(|| vec![0; len]),
            d: d.unwrap_or_else(|| vec![0; len]),
        };
        params.validate()?;
        Ok(params)
    }
}

impl fmt::Display for XiParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={} s={} k={:?} c_minus1={} c={:?} d={:?}",
            self.m, self.s, self.k, self.c_minus1, self.c, self.d
        )
    }
}

pub(crate) fn parse_num(v: &str) -> Result<usize> {
    v.parse().map_err(|_| Error::Parse(format!("not a non-negative integer: `{v}`")))
}

pub(crate) fn parse_list(v: &str) -> Result<Vec<usize>> {
    v.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_num(t.trim())).collect()
}

pub fn xi_poly(params: &XiParams) -> Result<SparsePoly> {
    params.validate()?;
    let a = SparsePoly::from_exponents(params.n(), params.positions());
    if a.weight() != params.weight() {
        return Err(Error::Collision { expected: params.weight(), got: a.weight() });
    }
    debug_assert!(is_psi_unitary(&a, &PsiParams::new(params.s, params.m + 2, 0)?)?);
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodMat {
    pub params: XiParams,
    pub poly: SparsePoly,
    /// `k_{i+1} > 2 k_i` for all `i` and `s > 2 k_m`.
    pub sufficient_conditions: bool,
}

pub fn sufficient_conditions(s: usize, k: &[usize]) -> bool {
    k.windows(2).all(|w| w[1] > 2 * w[0]) && k.last().is_some_and(|&km| s > 2 * km)
}

/// `(0; k_0; ...; k_m; k_0 + s; k_1 + 2s; ...; k_m + 2^m s)`.
pub fn goodmat(m: u32, s: usize, k: &[usize]) -> Result<GoodMat> {
    if k.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams(format!("k must be strictly increasing, got {k:?}")));
    }
    let params = XiParams::plain(m, s, k);
    let poly = xi_poly(&params)?;
    let ok = sufficient_conditions(s, k);
    if ok {
        assert!(!has_length4_cycle(&poly), "cycle in {poly} despite k_(i+1) > 2k_i, s > 2k_m");
    }
    Ok(GoodMat { params, poly, sufficient_conditions: ok })
}

/// Draws increasing `k` with `s > 2 k_m` (and `k_{i+1} > 2 k_i` when `strict`)
/// until the resulting design has no length-4 cycle.
pub fn sample_cycle_free<R: Rng + ?Sized>(
    m: u32,
    s: usize,
    rng: &mut R,
    max_tries: usize,
    strict: bool,
) -> Result<GoodMat> {
    let len = m as usize + 1;
    let k_max = s.saturating_sub(1) / 2;
    let feasible = if strict {
        // smallest strict chain is 1, 3, 7, ..., 2^{m+1} - 1
        m < 60 && (1usize << (m + 1)) - 1 <= k_max
    } else {
        len <= k_max
    };
    if !feasible {
        return Err(Error::Exhausted { tries: 0 });
    }
    for _ in 0..max_tries {
        let mut k: Vec<usize> = index::sample(rng, k_max, len).into_iter().map(|i| i + 1).collect();
        k.sort_unstable();
        if strict && !sufficient_conditions(s, &k) {
            continue;
        }
        let g = goodmat(m, s, &k)?;
        if !has_length4_cycle(&g.poly) {
            return Ok(g);
        }
    }
    Err(Error::Exhausted { tries: max_tries })
}

/// Uniform draw over all valid parameter sets whose positions do not collide.
pub fn random_xi_params<R: Rng + ?Sized>(m: u32, s: usize, rng: &mut R) -> Result<XiParams> {
    const MAX_TRIES: usize = 10_000;
    if s < 2 {
        return Err(Error::InvalidParams(format!("no valid k_0 for s = {s}")));
    }
    let len = m as usize + 1;
    for _ in 0..MAX_TRIES {
        let mut k = Vec::with_capacity(len);
        while k.len() < len {
            let v = rng.random_range(1..s << k.len());
            if !k.contains(&v) {
                k.push(v);
            }
        }
        let cd = |i: usize| 1usize << (len - i);
        let params = XiParams {
            m,
            s,
            k,
            c_minus1: rng.random_range(0..4),
            c: (0..len).map(|i| rng.random_range(0..cd(i))).collect(),
            d: (0..len).map(|i| rng.random_range(0..cd(i))).collect(),
        };
        match xi_poly(&params) {
            Ok(_) => return Ok(params),
            Err(Error::Collision { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Exhausted { tries: MAX_TRIES })
}

/// Class representative under shifts by multiples of `s` when `m = 0`;
/// the identity for `m > 0`.
pub fn canonical_rep(a: &SparsePoly, m: u32, s: usize) -> SparsePoly {
    if m != 0 {
        return a.clone();
    }
    (0..4)
        .map(|j| a.shift((j * s) as i64))
        .min_by(|x, y| x.support().cmp(y.support()))
        .expect("four shifts")
}
