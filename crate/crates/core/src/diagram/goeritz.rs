//! Goeritz matrices, signature and determinant of classical diagrams.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Diagram, Kind, Port};
use crate::error::{Error, Result};

/// Sign of the crossing index relative to the over axis; fixed so that the
/// result does not depend on the choice of colouring.
const ETA_SIGN: i64 = -1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoeritzData {
    /// Signature in the normalization where the positive trefoil has `+2`.
    pub sigma: i64,
    pub det: BigInt,
}

/// Checkerboard phase of every crossing: corner `(c, k)` is white when
/// `(k + phase[c])` is odd.
fn phases(d: &Diagram, flip: bool) -> Vec<u8> {
    let n = d.num_crossings();
    let mut ph = vec![u8::MAX; n];
    for root in 0..n {
        if ph[root] != u8::MAX {
            continue;
        }
        ph[root] = flip as u8;
        let mut stack = vec![root];
        while let Some(c) = stack.pop() {
            for k in 0..4u8 {
                let q = d.nbr(Port::new(c, k + 1));
                let want = (k + ph[c] + 4 - q.slot) % 2;
                if ph[q.c()] == u8::MAX {
                    ph[q.c()] = want;
                    stack.push(q.c());
                } else {
                    debug_assert_eq!(ph[q.c()], want, "diagram is not planar");
                }
            }
        }
    }
    ph
}

/// Goeritz matrix (one white region dropped) and correction term for a
/// connected classical diagram.
fn goeritz(d: &Diagram, flip: bool) -> (Vec<Vec<BigInt>>, i64) {
    let (face, _) = d.faces();
    let ph = phases(d, flip);
    let mut white: Vec<usize> = Vec::new();
    let idx = |f: usize, white: &mut Vec<usize>| -> usize {
        match white.iter().position(|&w| w == f) {
            Some(i) => i,
            None => {
                white.push(f);
                white.len() - 1
            }
        }
    };
    let mut entries = Vec::new();
    let mut mu = 0i64;
    for (c, x) in d.crossings().iter().enumerate() {
        let Kind::Over(ax) = x.kind else {
            unreachable!("goeritz on singular diagram");
        };
        let w = (0..4u8).find(|&k| (k + ph[c]) % 2 == 1).unwrap();
        let eta = if ax % 2 == w % 2 { ETA_SIGN } else { -ETA_SIGN };
        let i = idx(face[c][w as usize], &mut white);
        let j = idx(face[c][(w + 2) as usize], &mut white);
        entries.push((i, j, eta));
        // The oriented smoothing merges the corners of parity first_in.
        let merged_white = (x.first_in() % 2) == (w % 2);
        if !merged_white {
            mu += eta;
        }
    }
    let m = white.len();
    let mut g = vec![vec![BigInt::zero(); m]; m];
    for (i, j, eta) in entries {
        if i != j {
            g[i][j] -= eta;
            g[j][i] -= eta;
            g[i][i] += eta;
            g[j][j] += eta;
        }
    }
    let g: Vec<Vec<BigInt>> = g.into_iter().skip(1).map(|r| r.into_iter().skip(1).collect()).collect();
    (g, mu)
}

/// Signature of a symmetric integer matrix by rational congruence.
pub fn matrix_signature(m: &[Vec<BigInt>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut sig = 0i64;
    let mut k = 0;
    while k < n {
        let piv = (k..n).find(|&i| !a[i][i].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => {
                let off = (k..n).flat_map(|i| (k..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
                let Some((i, j)) = off else { break };
                // add row/column j to row/column i
                for r in 0..n {
                    let v = a[j][r].clone();
                    a[i][r] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
                i
            }
        };
        a.swap(k, piv);
        for r in a.iter_mut() {
            r.swap(k, piv);
        }
        let p = a[k][k].clone();
        sig += if p.is_positive() { 1 } else { -1 };
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
        for i in k + 1..n {
            a[k][i] = BigRational::zero();
            a[i][k] = BigRational::zero();
        }
        k += 1;
    }
    sig
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Signature and determinant of a classical diagram.
pub fn signature_det(d: &Diagram) -> Result<GoeritzData> {
    if d.is_singular() {
        return Err(Error::InvalidParameter("goeritz form of a singular diagram".into()));
    }
    let pieces = d.pieces();
    let n_pieces = pieces.iter().filter(|p| p.num_crossings() > 0).count() as u32 + d.free_loops();
    let mut sigma = 0;
    let mut det = BigInt::one();
    for p in pieces.iter().filter(|p| p.num_crossings() > 0) {
        let (g, mu) = goeritz(p, false);
        // positive trefoil has +2 in this normalization
        sigma += mu - matrix_signature(&g);
        det *= bareiss(&g).abs();
    }
    if n_pieces > 1 {
        det = BigInt::zero();
    }
    Ok(GoeritzData { sigma, det })
}

#[cfg(test)]
pub(crate) fn signature_with_colouring(d: &Diagram, flip: bool) -> (i64, BigInt) {
    let mut s = 0;
    let mut det = BigInt::one();
    for p in d.pieces().iter().filter(|p| p.num_crossings() > 0) {
        let (g, mu) = goeritz(p, flip);
        s += mu - matrix_signature(&g);
        det *= bareiss(&g).abs();
    }
    (s, det)
}
