//! Words over an ordered alphabet and homogeneous rational polynomials.
//!
//! Everything downstream (subspaces, reduction operators, the Koszul
//! complex) lives over the basis `X^(m)` of words of a fixed length `m`,
//! ordered lexicographically by the alphabet order. Words of different
//! lengths are never compared.

use std::cmp::Ordering;
use std::fmt;

use num::BigRational;
use num::Zero;

use crate::error::KoszulError;

/// The ordered generator set `X`. The list order is the total order used
/// everywhere downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: Vec<S>) -> Result<Self, KoszulError> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(KoszulError::Input("alphabet must not be empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() {
                return Err(KoszulError::Input("generator names must be non-empty".into()));
            }
            if symbols[..i].contains(s) {
                return Err(KoszulError::Input(format!("duplicate generator name `{s}`")));
            }
        }
        if symbols.len() > u8::MAX as usize {
            return Err(KoszulError::Input("too many generators".into()));
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, idx: usize) -> &str {
        &self.symbols[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    /// All words of length `m`, in descending order.
    pub fn words_desc(&self, m: usize) -> Vec<Word> {
        let d = self.len();
        let total = d.checked_pow(m as u32).expect("word space too large");
        let mut out = Vec::with_capacity(total);
        // Enumerate ascending by base-d value, which is ascending lex for
        // fixed length, then reverse.
        let mut letters = vec![0u8; m];
        loop {
            out.push(Word::from_letters(letters.clone()));
            let mut i = m;
            loop {
                if i == 0 {
                    out.reverse();
                    return out;
                }
                i -= 1;
                if (letters[i] as usize) + 1 < d {
                    letters[i] += 1;
                    for l in &mut letters[i + 1..] {
                        *l = 0;
                    }
                    break;
                }
            }
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.letters()
            .iter()
            .map(|&l| self.symbols[l as usize].as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn format_poly(&self, f: &HomogPoly) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in f.terms().iter().enumerate() {
            let (sign, abs) = if c < &BigRational::zero() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if i == 0 {
                if sign == "-" {
                    out.push_str("-");
                }
            } else {
                out.push_str(&format!(" {} ", sign));
            }
            let one = abs == BigRational::from_integer(1.into());
            if one && !w.is_empty() {
                out.push_str(&self.format_word(w));
            } else if w.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                out.push_str(&format!("{}*{}", abs, self.format_word(w)));
            }
        }
        out
    }
}

/// A monomial: a sequence of indices into the alphabet. The empty word is
/// permitted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<u8>) -> Self {
        Word { letters }
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        Word {
            letters: indices.iter().map(|&i| i as u8).collect(),
        }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Prefix of length `k` and the remaining suffix.
    pub fn split(&self, k: usize) -> Result<(Word, Word), KoszulError> {
        if k > self.len() {
            return Err(KoszulError::Input(format!(
                "cannot split word of length {} at {}",
                self.len(),
                k
            )));
        }
        Ok((
            Word::from_letters(self.letters[..k].to_vec()),
            Word::from_letters(self.letters[k..].to_vec()),
        ))
    }

    pub fn subword(&self, start: usize, len: usize) -> Word {
        Word::from_letters(self.letters[start..start + len].to_vec())
    }
}

/// Lexicographic comparison induced by the alphabet order; total on each
/// `X^(m)`. Words of different lengths are incomparable.
pub fn compare_words(a: &Word, b: &Word) -> Result<Ordering, KoszulError> {
    if a.len() != b.len() {
        return Err(KoszulError::IncomparableLengths {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.letters.cmp(&b.letters))
}

/// A homogeneous linear combination of equal-length words with nonzero
/// rational coefficients, kept sorted descending so `lm`/`lc` are O(1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogPoly {
    degree: usize,
    terms: Vec<(Word, BigRational)>,
}

impl HomogPoly {
    pub fn zero(degree: usize) -> Self {
        HomogPoly {
            degree,
            terms: Vec::new(),
        }
    }

    pub fn monomial(w: Word) -> Self {
        HomogPoly {
            degree: w.len(),
            terms: vec![(w, BigRational::from_integer(1.into()))],
        }
    }

    pub fn from_terms(
        degree: usize,
        terms: Vec<(Word, BigRational)>,
    ) -> Result<Self, KoszulError> {
        for (w, _) in &terms {
            if w.len() != degree {
                return Err(KoszulError::Input(format!(
                    "term of length {} in polynomial of degree {}",
                    w.len(),
                    degree
                )));
            }
        }
        let mut p = HomogPoly { degree, terms };
        p.normalize();
        Ok(p)
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Word, BigRational)> = Vec::with_capacity(self.terms.len());
        for (w, c) in self.terms.drain(..) {
            match out.last_mut() {
                Some((lw, lc)) if *lw == w => *lc += c,
                _ => out.push((w, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        self.terms = out;
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(Word, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(lm(f), lc(f))` for a nonzero polynomial.
    pub fn leading(&self) -> Result<(&Word, &BigRational), KoszulError> {
        self.terms
            .first()
            .map(|(w, c)| (w, c))
            .ok_or(KoszulError::NoLeadingTerm)
    }

    pub fn coeff(&self, w: &Word) -> BigRational {
        // Terms are sorted descending.
        match self.terms.binary_search_by(|(tw, _)| w.cmp(tw)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn add(&self, other: &HomogPoly) -> HomogPoly {
        debug_assert_eq!(self.degree, other.degree);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        let mut p = HomogPoly {
            degree: self.degree,
            terms,
        };
        p.normalize();
        p
    }

    pub fn sub(&self, other: &HomogPoly) -> HomogPoly {
        self.add(&other.scale(&-BigRational::from_integer(1.into())))
    }

    pub fn scale(&self, c: &BigRational) -> HomogPoly {
        if c.is_zero() {
            return HomogPoly::zero(self.degree);
        }
        HomogPoly {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(w, k)| (w.clone(), k * c))
                .collect(),
        }
    }

    pub fn add_scaled(&self, c: &BigRational, other: &HomogPoly) -> HomogPoly {
        self.add(&other.scale(c))
    }

    /// Monic rescaling; errors on the zero polynomial.
    pub fn monic(&self) -> Result<HomogPoly, KoszulError> {
        let (_, lc) = self.leading()?;
        let inv = BigRational::from_integer(1.into()) / lc.clone();
        Ok(self.scale(&inv))
    }

    /// Is this polynomial a single word with coefficient one?
    pub fn is_word(&self, w: &Word) -> bool {
        self.terms.len() == 1
            && self.terms[0].0 == *w
            && self.terms[0].1 == BigRational::from_integer(1.into())
    }
}

/// Multiplies out coefficients and concatenates words; degree adds.
pub fn tensor_expand(u: &HomogPoly, v: &HomogPoly) -> HomogPoly {
    let mut terms = Vec::with_capacity(u.terms.len() * v.terms.len());
    for (uw, uc) in &u.terms {
        for (vw, vc) in &v.terms {
            terms.push((uw.concat(vw), uc * vc));
        }
    }
    let mut p = HomogPoly {
        degree: u.degree + v.degree,
        terms,
    };
    p.normalize();
    p
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "[{l}]")?;
        }
        Ok(())
    }
}
