use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Total assignment to the primary inputs, bit `i` for input `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InputPattern {
    words: Vec<u64>,
    len: usize,
}

impl InputPattern {
    pub fn zeros(len: usize) -> Self {
        InputPattern { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut p = InputPattern::zeros(0);
        for b in bits {
            if p.len.is_multiple_of(64) {
                p.words.push(0);
            }
            p.len += 1;
            p.set(p.len - 1, b);
        }
        p
    }

    /// Parse a `0`/`1` string, first character = input 0.
    pub fn from_bitstring(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<bool>>>()
            .map(InputPattern::from_bools)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for pattern of {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for pattern of {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Number of differing bits. Panics on length mismatch.
    pub fn hamming(&self, other: &InputPattern) -> usize {
        assert_eq!(self.len, other.len, "hamming distance between patterns of different length");
        self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as usize).sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_bitstring(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for InputPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InputPattern({})", self.to_bitstring())
    }
}

impl fmt::Display for InputPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}
