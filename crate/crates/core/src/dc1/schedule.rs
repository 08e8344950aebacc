//! Repetition counts for the block schedule.
//!
//! Given block lengths `a_n`, the count `m_n` is the least integer `≥ 2` with
//!
//! ```text
//! (a_n(m_n − 2) + 1) / (b_n + a_n m_n + 1) > 1 − 1/n,   b_n = Σ_{i<n} a_i m_i,
//! ```
//!
//! and `m_1 = 2`. Lengths grow roughly factorially, so everything is a `BigInt`.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// One level of a schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthRow {
    pub n: usize,
    pub a: BigInt,
    pub m: BigInt,
    /// Offset of block `n`.
    pub b: BigInt,
    /// Checkpoint `b_n + a_n m_n + 1`.
    pub c: BigInt,
}

impl LengthRow {
    /// The defining inequality, in integers: `n(a(m−2)+1) > (n−1)c`.
    pub fn inequality_holds(&self) -> bool {
        let n = BigInt::from(self.n);
        let lhs = &n * (&self.a * (&self.m - 2) + 1);
        lhs > (n - 1) * &self.c
    }
}

/// Least `m ≥ 2` satisfying the schedule inequality at level `n`.
///
/// Rearranged, the inequality reads `a·m > (n−1)(b+1) + n(2a−1)`.
pub fn minimal_repetition(n: usize, a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    if n <= 1 {
        return two;
    }
    let nb = BigInt::from(n);
    let x: BigInt = (&nb - 1) * (b + 1) + &nb * (a * 2 - 1);
    let m = x.div_floor(a) + 1;
    if m < two {
        two
    } else {
        m
    }
}

/// Rows `1..=a.len()` for the given block lengths.
pub fn schedule_lengths(a: &[BigInt]) -> Result<Vec<LengthRow>> {
    let mut rows = Vec::with_capacity(a.len());
    let mut b = BigInt::zero();
    for (i, an) in a.iter().enumerate() {
        if !an.is_positive() {
            return Err(Error::Input(format!("block length a_{} must be positive", i + 1)));
        }
        let n = i + 1;
        let m = minimal_repetition(n, an, &b);
        let c = &b + an * &m + BigInt::one();
        let next = &b + an * &m;
        rows.push(LengthRow { n, a: an.clone(), m, b: b.clone(), c });
        b = next;
    }
    Ok(rows)
}
