use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};

/// An ordered set of distinct ASCII symbols. Symbol `i` maps to index `i`.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    lookup: [u8; 128],
}

const UNMAPPED: u8 = u8::MAX;

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Self> {
        let bytes = symbols.as_bytes();
        if !symbols.is_ascii() {
            return Err(invalid(format!("alphabet {symbols:?} is not ASCII")));
        }
        if bytes.len() < 2 {
            return Err(invalid("alphabet needs at least two symbols"));
        }
        if bytes.len() >= UNMAPPED as usize {
            return Err(invalid("alphabet too large"));
        }
        let mut lookup = [UNMAPPED; 128];
        for (i, &b) in bytes.iter().enumerate() {
            if lookup[b as usize] != UNMAPPED {
                return Err(invalid(format!("duplicate symbol {:?} in alphabet", b as char)));
            }
            lookup[b as usize] = i as u8;
        }
        Ok(Self { symbols: bytes.to_vec(), lookup })
    }

    /// `{A, C, G, T}`.
    pub fn dna() -> Self {
        Self::new("ACGT").expect("static alphabet")
    }

    /// `{0, 1}`.
    pub fn binary() -> Self {
        Self::new("01").expect("static alphabet")
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn index_of(&self, symbol: u8) -> Option<u8> {
        match self.lookup.get(symbol as usize) {
            Some(&i) if i != UNMAPPED => Some(i),
            _ => None,
        }
    }

    pub fn symbol(&self, index: u8) -> u8 {
        self.symbols[index as usize]
    }

    /// Encodes every character or fails on the first one outside the alphabet.
    pub fn encode(&self, text: &str) -> Result<Vec<u8>> {
        text.bytes()
            .map(|b| {
                self.index_of(b)
                    .ok_or_else(|| invalid(format!("symbol {:?} not in alphabet {self}", b as char)))
            })
            .collect()
    }

    /// Upper-cases and drops anything outside the alphabet (ambiguity codes,
    /// gaps, whitespace).
    pub fn encode_lossy(&self, text: &[u8]) -> Vec<u8> {
        text.iter()
            .filter_map(|b| self.index_of(b.to_ascii_uppercase()).or_else(|| self.index_of(*b)))
            .collect()
    }

    pub fn decode(&self, indices: &[u8]) -> String {
        indices.iter().map(|&i| self.symbol(i) as char).collect()
    }

    /// `size^len`, the number of strings of length `len`.
    pub fn power(&self, len: usize) -> usize {
        self.size().pow(len as u32)
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Self::dna()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(std::str::from_utf8(&self.symbols).expect("ascii"))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({self})")
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Alphabet::new(&s).map_err(serde::de::Error::custom)
    }
}
