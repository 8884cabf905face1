use crate::seq::ALPHABET;
use crate::{Error, Result};

const NO_CODE: u8 = u8::MAX;

static BLOSUM62_TEXT: &str = include_str!("../../data/BLOSUM62");

/// A symmetric integer substitution matrix in NCBI text layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionMatrix {
    name: String,
    letters: Vec<u8>,
    index: [u8; 256],
    scores: Vec<i32>,
}

impl SubstitutionMatrix {
    /// The bundled BLOSUM62 matrix.
    pub fn blosum62() -> Self {
        Self::parse_ncbi("BLOSUM62", BLOSUM62_TEXT.as_bytes()).expect("bundled BLOSUM62 is valid")
    }

    /// Parses an NCBI-format matrix: `#` comments, a header row of letters, then
    /// one row per letter. The matrix must be square, symmetric, and cover the
    /// residue alphabet.
    pub fn parse_ncbi(name: &str, input: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(input).map_err(|e| Error::Matrix(e.to_string()))?;
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Matrix("empty matrix file".into()))?;
        let letters: Vec<u8> = header
            .split_whitespace()
            .map(|tok| match tok.as_bytes() {
                [c] => Ok(c.to_ascii_uppercase()),
                _ => Err(Error::Matrix(format!("bad column label '{tok}'"))),
            })
            .collect::<Result<_>>()?;
        let n = letters.len();
        let mut index = [NO_CODE; 256];
        for (i, &c) in letters.iter().enumerate() {
            if index[c as usize] != NO_CODE {
                return Err(Error::Matrix(format!("duplicate column '{}'", c as char)));
            }
            index[c as usize] = i as u8;
            index[c.to_ascii_lowercase() as usize] = i as u8;
        }

        let mut scores = vec![0i32; n * n];
        let mut seen = vec![false; n];
        for line in lines {
            let mut toks = line.split_whitespace();
            let label = toks.next().unwrap_or_default();
            let row = match label.as_bytes() {
                [c] if index[*c as usize] != NO_CODE => index[*c as usize] as usize,
                _ => return Err(Error::Matrix(format!("bad row label '{label}'"))),
            };
            let vals: Vec<i32> = toks
                .map(|t| t.parse().map_err(|_| Error::Matrix(format!("bad score '{t}'"))))
                .collect::<Result<_>>()?;
            if vals.len() != n {
                return Err(Error::Matrix(format!(
                    "row '{label}' has {} scores, expected {n}",
                    vals.len()
                )));
            }
            scores[row * n..(row + 1) * n].copy_from_slice(&vals);
            seen[row] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::Matrix(format!("missing row '{}'", letters[i] as char)));
        }
        for i in 0..n {
            for j in 0..i {
                if scores[i * n + j] != scores[j * n + i] {
                    return Err(Error::Matrix(format!(
                        "not symmetric at ({}, {})",
                        letters[i] as char, letters[j] as char
                    )));
                }
            }
        }
        if let Some(&c) = ALPHABET.iter().find(|&&c| index[c as usize] == NO_CODE) {
            return Err(Error::Matrix(format!("residue '{}' not covered", c as char)));
        }
        Ok(SubstitutionMatrix {
            name: name.to_string(),
            letters,
            index,
            scores,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn size(&self) -> usize {
        self.letters.len()
    }

    /// Row index of residue `b`. Panics if `b` is not in the matrix.
    #[inline]
    pub fn code(&self, b: u8) -> usize {
        let c = self.index[b as usize];
        assert!(c != NO_CODE, "residue '{}' not in {}", b as char, self.name);
        c as usize
    }

    #[inline]
    pub fn score_codes(&self, a: usize, b: usize) -> i32 {
        self.scores[a * self.letters.len() + b]
    }

    /// Scores of code `a` against every code.
    #[inline]
    pub fn row(&self, a: usize) -> &[i32] {
        let n = self.letters.len();
        &self.scores[a * n..(a + 1) * n]
    }

    #[inline]
    pub fn score(&self, a: u8, b: u8) -> i32 {
        self.score_codes(self.code(a), self.code(b))
    }

    /// Encodes a residue string as matrix row indices.
    pub fn encode(&self, seq: &[u8]) -> Vec<u8> {
        seq.iter().map(|&b| self.code(b) as u8).collect()
    }
}

impl Default for SubstitutionMatrix {
    fn default() -> Self {
        Self::blosum62()
    }
}
