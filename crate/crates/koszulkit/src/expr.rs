//! Parser for relation expressions.
//!
//! Grammar: terms `c*g1*g2*...*gk` joined by `+`/`-`, where `c` is an
//! optional integer or `p/q` rational and the `gi` are generator names
//! from the alphabet. Whitespace is insignificant.
//!
//! Example: `x2*x1*x1 - 2*x1*x2*x1 + x1*x1*x2`.

use num::bigint::BigInt;
use num::BigRational;
use num::One;

use crate::error::KoszulError;
use crate::word::{Alphabet, HomogPoly, Word};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Slash,
    Int(BigInt),
    Ident(String),
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, KoszulError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                tokens.push((col, Token::Plus));
                i += 1;
            }
            '-' => {
                tokens.push((col, Token::Minus));
                i += 1;
            }
            '*' => {
                tokens.push((col, Token::Star));
                i += 1;
            }
            '/' => {
                tokens.push((col, Token::Slash));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits.parse::<BigInt>().map_err(|e| KoszulError::Parse {
                    col,
                    msg: e.to_string(),
                })?;
                tokens.push((col, Token::Int(n)));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push((col, Token::Ident(chars[start..i].iter().collect())));
            }
            other => {
                return Err(KoszulError::Parse {
                    col,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(tokens)
}

/// Parses a homogeneous polynomial over `alphabet`. All terms must have
/// the same length.
pub fn parse_poly(alphabet: &Alphabet, input: &str) -> Result<HomogPoly, KoszulError> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(KoszulError::Parse {
            col: 1,
            msg: "empty expression".into(),
        });
    }
    let mut terms: Vec<(Word, BigRational)> = Vec::new();
    let mut pos = 0;
    let mut first = true;
    while pos < tokens.len() {
        // Sign.
        let mut sign = BigRational::one();
        match &tokens[pos].1 {
            Token::Plus => {
                if first {
                    return Err(KoszulError::Parse {
                        col: tokens[pos].0,
                        msg: "expression may not start with `+`".into(),
                    });
                }
                pos += 1;
            }
            Token::Minus => {
                sign = -sign;
                pos += 1;
            }
            _ if first => {}
            _ => {
                return Err(KoszulError::Parse {
                    col: tokens[pos].0,
                    msg: "expected `+` or `-` between terms".into(),
                })
            }
        }
        first = false;
        let (word, coeff, next) = parse_term(alphabet, &tokens, pos)?;
        pos = next;
        terms.push((word, sign * coeff));
    }
    let degree = terms
        .first()
        .map(|(w, _)| w.len())
        .unwrap_or(0);
    for (w, _) in &terms {
        if w.len() != degree {
            return Err(KoszulError::Parse {
                col: 1,
                msg: format!(
                    "non-homogeneous expression: terms of lengths {} and {}",
                    degree,
                    w.len()
                ),
            });
        }
    }
    HomogPoly::from_terms(degree, terms)
}

fn parse_term(
    alphabet: &Alphabet,
    tokens: &[(usize, Token)],
    mut pos: usize,
) -> Result<(Word, BigRational, usize), KoszulError> {
    let end_err = |tokens: &[(usize, Token)]| KoszulError::Parse {
        col: tokens.last().map(|(c, _)| *c + 1).unwrap_or(1),
        msg: "unexpected end of expression".into(),
    };
    if pos >= tokens.len() {
        return Err(end_err(tokens));
    }
    let mut coeff = BigRational::one();
    let mut letters: Vec<usize> = Vec::new();
    let mut saw_factor = false;
    loop {
        match &tokens[pos].1 {
            Token::Int(n) => {
                if saw_factor {
                    return Err(KoszulError::Parse {
                        col: tokens[pos].0,
                        msg: "coefficient must come first in a term".into(),
                    });
                }
                let mut c = BigRational::from_integer(n.clone());
                // Optional `/q`.
                if pos + 1 < tokens.len() && tokens[pos + 1].1 == Token::Slash {
                    match tokens.get(pos + 2) {
                        Some((_, Token::Int(q))) => {
                            if q == &BigInt::from(0) {
                                return Err(KoszulError::Parse {
                                    col: tokens[pos + 2].0,
                                    msg: "zero denominator".into(),
                                });
                            }
                            c /= BigRational::from_integer(q.clone());
                            pos += 2;
                        }
                        _ => {
                            return Err(KoszulError::Parse {
                                col: tokens[pos + 1].0,
                                msg: "expected denominator after `/`".into(),
                            })
                        }
                    }
                }
                coeff = c;
                saw_factor = true;
                pos += 1;
            }
            Token::Ident(name) => {
                let idx = alphabet.index_of(name).ok_or_else(|| KoszulError::Parse {
                    col: tokens[pos].0,
                    msg: format!("unknown generator `{name}`"),
                })?;
                letters.push(idx);
                saw_factor = true;
                pos += 1;
            }
            _ => {
                return Err(KoszulError::Parse {
                    col: tokens[pos].0,
                    msg: "expected coefficient or generator".into(),
                })
            }
        }
        // A `*` continues the term.
        if pos < tokens.len() && tokens[pos].1 == Token::Star {
            pos += 1;
            if pos >= tokens.len() {
                return Err(end_err(tokens));
            }
            continue;
        }
        break;
    }
    if !saw_factor {
        return Err(KoszulError::Parse {
            col: tokens[pos - 1].0,
            msg: "empty term".into(),
        });
    }
    Ok((Word::from_indices(&letters), coeff, pos))
}
