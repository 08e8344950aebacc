//! Eventually periodic symbol sequences, the exact points of a shift space.

use std::fmt;

use crate::error::{Error, Result};

/// Agreement lengths are capped here; two sequences that agree on this many
/// leading symbols are reported at distance at most `2^-DISTANCE_CAP`.
pub const DISTANCE_CAP: u32 = 64;

/// An infinite sequence `prefix · cycle^∞` over a small alphabet.
///
/// The representation is normalised on construction (primitive cycle, no
/// prefix suffix that could be rotated into the cycle), so structural
/// equality is sequence equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolSeq {
    prefix: Vec<u8>,
    cycle: Vec<u8>,
}

impl SymbolSeq {
    pub fn new(prefix: Vec<u8>, cycle: Vec<u8>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Input("symbol sequence needs a non-empty repeating part".into()));
        }
        let mut s = SymbolSeq { prefix, cycle };
        s.normalize();
        Ok(s)
    }

    /// The constant sequence `symbol^∞`.
    pub fn constant(symbol: u8) -> Self {
        SymbolSeq { prefix: Vec::new(), cycle: vec![symbol] }
    }

    /// The purely periodic sequence `block^∞`.
    pub fn periodic(block: &[u8]) -> Result<Self> {
        Self::new(Vec::new(), block.to_vec())
    }

    fn normalize(&mut self) {
        let n = self.cycle.len();
        let primitive = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| self.cycle[i] == self.cycle[i % p]))
            .unwrap_or(n);
        self.cycle.truncate(primitive);
        while let Some(&last) = self.prefix.last() {
            if last != *self.cycle.last().unwrap() {
                break;
            }
            self.prefix.pop();
            self.cycle.rotate_right(1);
        }
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u8] {
        &self.cycle
    }

    pub fn symbol(&self, i: usize) -> u8 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// First `n` symbols.
    pub fn take(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.symbol(i)).collect()
    }

    /// Left shift by one.
    pub fn shift(&self) -> Self {
        self.shift_by(1)
    }

    pub fn shift_by(&self, n: usize) -> Self {
        if n <= self.prefix.len() {
            return SymbolSeq { prefix: self.prefix[n..].to_vec(), cycle: self.cycle.clone() };
        }
        let mut cycle = self.cycle.clone();
        let r = (n - self.prefix.len()) % cycle.len();
        cycle.rotate_left(r);
        SymbolSeq { prefix: Vec::new(), cycle }
    }

    /// Index of the first disagreement, or `None` if the sequences are equal.
    pub fn first_disagreement(&self, other: &SymbolSeq) -> Option<usize> {
        if self == other {
            return None;
        }
        // Past both prefixes the pair is periodic with period lcm of cycles.
        let bound = self.prefix.len().max(other.prefix.len())
            + num::integer::lcm(self.cycle.len(), other.cycle.len());
        (0..bound).find(|&i| self.symbol(i) != other.symbol(i))
    }

    /// Exponent `j` with `d = 2^-j`, capped at [`DISTANCE_CAP`]; equal
    /// sequences report `None` (distance zero).
    pub fn distance_exponent(&self, other: &SymbolSeq) -> Option<u32> {
        self.first_disagreement(other).map(|i| (i as u32).min(DISTANCE_CAP))
    }

    /// Preperiod and period of the orbit under the shift.
    pub fn preperiod(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn max_symbol(&self) -> u8 {
        self.prefix.iter().chain(self.cycle.iter()).copied().max().unwrap_or(0)
    }

    /// Parses `01(1)` notation: literal prefix, repeating block in parentheses.
    /// A bare word without parentheses is read as its own repetition.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let digits = |s: &str| -> Result<Vec<u8>> {
            s.chars()
                .map(|c| {
                    c.to_digit(36)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Input(format!("bad symbol {c:?} in {text:?}")))
                })
                .collect()
        };
        match text.find('(') {
            Some(open) => {
                let close = text
                    .rfind(')')
                    .filter(|&c| c == text.len() - 1 && c > open)
                    .ok_or_else(|| Error::Input(format!("unbalanced parentheses in {text:?}")))?;
                Self::new(digits(&text[..open])?, digits(&text[open + 1..close])?)
            }
            None => Self::new(Vec::new(), digits(text)?),
        }
    }
}

impl fmt::Display for SymbolSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = |s: &u8| std::char::from_digit(u32::from(*s), 36).unwrap_or('?');
        let prefix: String = self.prefix.iter().map(sym).collect();
        let cycle: String = self.cycle.iter().map(sym).collect();
        write!(f, "{prefix}({cycle})")
    }
}

impl fmt::Debug for SymbolSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolSeq({self})")
    }
}

/// Renders a word like `0110`.
pub fn word_to_string(word: &[u8]) -> String {
    word.iter()
        .map(|s| std::char::from_digit(u32::from(*s), 36).unwrap_or('?'))
        .collect()
}
