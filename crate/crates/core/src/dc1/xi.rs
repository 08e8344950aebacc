//! The concatenated pseudo-orbit `ξ(u) = c_{u_1,1} c_{u_2,2} …`.
//!
//! Blocks are `c_{0,n} = γ0_n^{m_n}` and `c_{1,n} = α_n γ1_n^{m_n−2} β_n`.
//! Every chain starts where the previous one ends, so each contributes all
//! but its last vertex and the final vertex of the prefix is appended once.
//! Orbits reach tens of millions of entries, so they are kept as runs.

use num::ToPrimitive;

use super::DC1Schedule;
use crate::error::{Error, Result};

/// `chain` (without its closing vertex) repeated `reps` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub level: usize,
    pub chain: Vec<usize>,
    pub reps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiOrbit {
    u: Vec<u8>,
    segments: Vec<Segment>,
    terminal: usize,
    len: u64,
    offsets: Vec<u64>,
}

pub fn build_xi<S>(u: &[u8], sched: &DC1Schedule<S>) -> Result<XiOrbit> {
    if u.is_empty() {
        return Err(Error::Input("binary prefix is empty".into()));
    }
    if u.len() > sched.rows.len() {
        return Err(Error::Input(format!(
            "prefix of length {} exceeds the {} scheduled levels",
            u.len(),
            sched.rows.len()
        )));
    }
    if let Some(i) = u.iter().position(|&s| s > 1) {
        return Err(Error::Input(format!("prefix symbol {i} is not binary")));
    }
    let mut segments = Vec::new();
    let mut offsets = vec![0u64];
    let mut len = 0u64;
    for (i, &bit) in u.iter().enumerate() {
        let (row, blk) = (&sched.rows[i], &sched.blocks.levels[i]);
        let m = row
            .m
            .to_u64()
            .ok_or_else(|| Error::Input(format!("level {} is too long to materialise", row.n)))?;
        let open = |c: &[usize]| c[..c.len() - 1].to_vec();
        let level = row.n;
        if bit == 0 {
            segments.push(Segment { level, chain: open(&blk.gamma0), reps: m });
        } else {
            segments.push(Segment { level, chain: open(&blk.alpha), reps: 1 });
            if m > 2 {
                segments.push(Segment { level, chain: open(&blk.gamma1), reps: m - 2 });
            }
            segments.push(Segment { level, chain: open(&blk.beta), reps: 1 });
        }
        len = (blk.a as u64)
            .checked_mul(m)
            .and_then(|x| x.checked_add(len))
            .ok_or_else(|| Error::Input(format!("level {level} is too long to materialise")))?;
        offsets.push(len);
    }
    let terminal = sched.blocks.levels[u.len() - 1].z_box;
    Ok(XiOrbit { u: u.to_vec(), segments, terminal, len: len + 1, offsets })
}

impl XiOrbit {
    pub fn prefix(&self) -> &[u8] {
        &self.u
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Number of entries, `b_{|u|+1} + 1`.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn terminal(&self) -> usize {
        self.terminal
    }

    /// Entry indices `[b_n, b_n + a_n m_n]` covered by block `n` (inclusive,
    /// sharing the right end with the next block).
    pub fn block_range(&self, n: usize) -> Option<(u64, u64)> {
        (n >= 1 && n < self.offsets.len()).then(|| (self.offsets[n - 1], self.offsets[n]))
    }

    /// Entries in order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.segments
            .iter()
            .flat_map(|s| (0..s.reps).flat_map(move |_| s.chain.iter().copied()))
            .chain(std::iter::once(self.terminal))
    }

    /// Entries in reverse order, terminal first.
    pub fn iter_rev(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.terminal).chain(
            self.segments
                .iter()
                .rev()
                .flat_map(|s| (0..s.reps).flat_map(move |_| s.chain.iter().rev().copied())),
        )
    }

    /// Materialised entries; only sensible for short prefixes.
    pub fn entries(&self) -> Vec<usize> {
        self.iter().collect()
    }
}
