//! Slow, independent reference implementations used only by integration tests.
//! Nothing here calls into the polynomial arithmetic of the library.

#![allow(dead_code)]

/// Dense circulant whose first row has ones at `support`.
pub fn circulant(n: usize, support: &[usize]) -> Vec<Vec<u8>> {
    (0..n)
        .map(|r| {
            let mut row = vec![0u8; n];
            for &e in support {
                row[(e + r) % n] ^= 1;
            }
            row
        })
        .collect()
}

/// First row of the inverse of the circulant with first row `support`,
/// by Gauss-Jordan elimination on bit-packed rows. `None` if singular.
pub fn circulant_inverse(n: usize, support: &[usize]) -> Option<Vec<usize>> {
    let words = n.div_ceil(64);
    let set = |v: &mut [u64], j: usize| v[j / 64] ^= 1 << (j % 64);
    let get = |v: &[u64], j: usize| v[j / 64] >> (j % 64) & 1 == 1;
    // [A | I], A row r = x^r a(x)
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|r| {
            let mut v = vec![0u64; words];
            for &e in support {
                set(&mut v, (e + r) % n);
            }
            v
        })
        .collect();
    let mut inv: Vec<Vec<u64>> = (0..n)
        .map(|r| {
            let mut v = vec![0u64; words];
            set(&mut v, r);
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| get(&a[r], col))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let (pa, pi) = (a[col].clone(), inv[col].clone());
        for r in 0..n {
            if r != col && get(&a[r], col) {
                a[r].iter_mut().zip(&pa).for_each(|(x, y)| *x ^= y);
                inv[r].iter_mut().zip(&pi).for_each(|(x, y)| *x ^= y);
            }
        }
    }
    // row 0 of A^{-1} is the first row of the inverse circulant
    Some((0..n).filter(|&j| get(&inv[0], j)).collect())
}

/// Any two rows of `h` sharing two or more columns.
pub fn has_rectangle(h: &[Vec<u8>]) -> bool {
    let cols: Vec<Vec<usize>> = h.iter().map(|r| (0..r.len()).filter(|&j| r[j] != 0).collect()).collect();
    for a in 0..cols.len() {
        for b in a + 1..cols.len() {
            let shared = cols[a].iter().filter(|j| cols[b].binary_search(j).is_ok()).count();
            if shared >= 2 {
                return true;
            }
        }
    }
    false
}

/// `[A_0 | A_1 | ... ]` with check row `c` touching `i*n + (e+c) mod n`.
pub fn expanded_h(n: usize, blocks: &[Vec<usize>]) -> Vec<Vec<u8>> {
    let mut h = vec![vec![0u8; n * blocks.len()]; n];
    for (i, b) in blocks.iter().enumerate() {
        for (c, row) in h.iter_mut().enumerate() {
            for &e in b {
                row[i * n + (e + c) % n] ^= 1;
            }
        }
    }
    h
}

pub fn dense_syndrome(h: &[Vec<u8>], word: &[u8]) -> Vec<u8> {
    h.iter().map(|r| r.iter().zip(word).fold(0u8, |acc, (a, b)| acc ^ (a & b))).collect()
}

/// Number of ways to choose two items with weights summing to the minimum
/// pair weight, counted by direct enumeration.
pub fn min_pair_sum(weights: &[usize]) -> (usize, Vec<(usize, usize)>) {
    let mut best = usize::MAX;
    let mut pairs = Vec::new();
    for i in 0..weights.len() {
        for j in i + 1..weights.len() {
            let w = weights[i] + weights[j];
            if w < best {
                best = w;
                pairs.clear();
            }
            if w == best {
                pairs.push((i, j));
            }
        }
    }
    (best, pairs)
}
