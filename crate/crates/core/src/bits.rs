//! Bitstring helpers for the shared index convention: qubit `q` of an
//! `n`-qubit register is bit `n - 1 - q` of the basis-state index.

use crate::error::{invalid, Result};

#[inline]
pub fn qubit_mask(q: usize, n: usize) -> u64 {
    1u64 << (n - 1 - q)
}

#[inline]
pub fn qubit_bit(x: u64, q: usize, n: usize) -> u8 {
    ((x >> (n - 1 - q)) & 1) as u8
}

pub fn subset_mask(qubits: &[usize], n: usize) -> u64 {
    qubits.iter().fold(0, |m, &q| m | qubit_mask(q, n))
}

pub fn format_bits(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(invalid(format!("bad bit character {other:?}"))),
        })
        .collect()
}

pub fn index_to_bits(x: u64, n: usize) -> Vec<u8> {
    (0..n).map(|q| qubit_bit(x, q, n)).collect()
}

pub fn bits_to_index(bits: &[u8]) -> u64 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
}

/// Writes `local` (bit `j` belongs to `qubits[j]`, `qubits[0]` most significant)
/// into the positions of `qubits` inside an `n`-bit index.
pub fn scatter(local: u64, qubits: &[usize], n: usize) -> u64 {
    let k = qubits.len();
    qubits.iter().enumerate().fold(0, |acc, (j, &q)| {
        if (local >> (k - 1 - j)) & 1 == 1 {
            acc | qubit_mask(q, n)
        } else {
            acc
        }
    })
}

/// All masks of Hamming weight `1..=k` on `n` bits, ordered by weight then value.
pub fn flip_masks(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for w in 1..=k.min(n) {
        let mut level: Vec<u64> = combinations(n, w)
            .into_iter()
            .map(|c| subset_mask(&c, n))
            .collect();
        level.sort_unstable();
        out.extend(level);
    }
    out
}

/// Lexicographic `r`-subsets of `0..n`.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        let mut i = r;
        while i > 0 && cur[i - 1] == n - r + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        cur[i - 1] += 1;
        for j in i..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Σ_{r=1}^{k} C(n, r): the number of neighbours within Hamming distance k.
pub fn ball_size(n: usize, k: usize) -> u64 {
    (1..=k.min(n)).map(|r| binomial(n, r)).sum()
}
