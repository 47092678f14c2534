//! Dense GF(2) vectors packed into 64-bit words.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Bits::zeros(len);
        for i in ones {
            b.set(i, true);
        }
        b
    }

    pub fn from_bools(values: &[bool]) -> Self {
        Bits::from_indices(
            values.len(),
            values.iter().enumerate().filter(|(_, &v)| v).map(|(i, _)| i),
        )
    }

    /// Low `len` bits of `value`, bit i of the integer is index i.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= 64);
        let mut b = Bits::zeros(len);
        if len > 0 {
            let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            b.words[0] = value & mask;
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i & 63);
        if v {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn xor_with(&mut self, other: &Bits) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.xor_with(other);
        out
    }

    pub fn and(&self, other: &Bits) -> Bits {
        assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn or(&self, other: &Bits) -> Bits {
        assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &Bits) -> bool {
        assert_eq!(self.len, other.len);
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    pub fn ones(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// Little-endian bytes: bit i lives in byte i/8 at position i%8.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.len.div_ceil(8);
        (0..n)
            .map(|k| (self.words[k / 8] >> ((k % 8) * 8)) as u8)
            .collect()
    }

    pub fn from_bytes(len: usize, bytes: &[u8]) -> Option<Self> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        let mut b = Bits::zeros(len);
        for (k, &byte) in bytes.iter().enumerate() {
            b.words[k / 8] |= (byte as u64) << ((k % 8) * 8);
        }
        // stray bits past `len` are rejected rather than silently dropped
        if len % 8 != 0 {
            let last = *bytes.last().unwrap();
            if last >> (len % 8) != 0 {
                return None;
            }
        }
        Some(b)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }

    pub fn from_hex(len: usize, s: &str) -> Option<Self> {
        let bytes = hex::decode(s).ok()?;
        Bits::from_bytes(len, &bytes)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "Bits({s})")
    }
}
