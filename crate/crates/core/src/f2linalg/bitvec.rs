use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::F2Error;

/// A fixed-length vector over GF(2), bit-packed into 64-bit words.
///
/// Coordinate 0 is the leftmost character of the bitstring form and the most
/// significant bit of the integer-index form, so `"110"` has coordinates 0
/// and 1 set and index 6. All arithmetic is mod 2.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0u64; len.div_ceil(64)],
        }
    }

    /// The standard basis vector with a 1 in coordinate `coord`.
    pub fn basis(len: usize, coord: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(coord, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Decodes `index` as a vector of length `len`, coordinate 0 most
    /// significant. Inverse of [`BitVec::to_index`].
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= 63, "index form limited to 63 coordinates");
        assert!(index < (1u64 << len), "index out of range for length");
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, (index >> (len - 1 - i)) & 1 == 1);
        }
        v
    }

    /// Encodes the vector as an integer, coordinate 0 most significant.
    pub fn to_index(&self) -> u64 {
        assert!(self.len <= 63, "index form limited to 63 coordinates");
        let mut idx = 0u64;
        for i in 0..self.len {
            idx = (idx << 1) | u64::from(self.get(i));
        }
        idx
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "coordinate {i} out of range");
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "coordinate {i} out of range");
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_with(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// Mod-2 dot product.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot product");
        let mut acc = 0u32;
        for (w, o) in self.words.iter().zip(&other.words) {
            acc ^= (w & o).count_ones();
        }
        acc & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the first set coordinate, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Iterates over set coordinates in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            let base = wi * 64;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(base + b)
                }
            })
        })
    }

    /// Extends to length `len` with zero coordinates appended at the end.
    pub fn padded(&self, len: usize) -> BitVec {
        assert!(len >= self.len, "padded length must not shrink");
        let mut v = BitVec::zeros(len);
        for i in self.ones() {
            v.set(i, true);
        }
        v
    }

    /// The first `r` coordinates.
    pub fn prefix(&self, r: usize) -> BitVec {
        assert!(r <= self.len, "prefix longer than vector");
        let mut v = BitVec::zeros(r);
        for i in self.ones().take_while(|&i| i < r) {
            v.set(i, true);
        }
        v
    }

    /// Drops coordinate `coord`, shifting later coordinates down by one.
    pub fn without_coord(&self, coord: usize) -> BitVec {
        assert!(coord < self.len, "coordinate {coord} out of range");
        let mut v = BitVec::zeros(self.len - 1);
        for i in self.ones() {
            match i.cmp(&coord) {
                Ordering::Less => v.set(i, true),
                Ordering::Equal => {}
                Ordering::Greater => v.set(i - 1, true),
            }
        }
        v
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.random();
        }
        v.mask_tail();
        v
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl Ord for BitVec {
    /// Lexicographic over coordinates, coordinate 0 most significant; this
    /// matches the integer-index ordering when lengths agree.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                let (ra, rb) = (a.reverse_bits(), b.reverse_bits());
                if ra != rb {
                    return ra.cmp(&rb);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BitVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = F2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(F2Error::ParseBits(s.to_string())),
            }
        }
        Ok(v)
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
