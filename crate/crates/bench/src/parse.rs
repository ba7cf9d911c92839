//! Polynomial text format.
//!
//! ```text
//! # comment
//! dense highest-first
//! 1 0 -2
//! ```
//!
//! The first non-comment line is the header: `dense lowest-first`,
//! `dense highest-first` or `sparse`. Dense bodies list every coefficient;
//! sparse bodies list `exponent:coefficient` pairs. Coefficients are
//! integers, dyadics written `m*2^e`, or decimals. Decimals that are not
//! dyadic are kept as exact rationals and approximated on demand.

use std::collections::BTreeMap;

use anewdsc::poly::{CoefficientSource, DecimalRational};
use anewdsc::{BitstreamPolynomial, CoefficientOracle, Dyadic, ExactPolynomial};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    LowestFirst,
    HighestFirst,
    Sparse,
}

#[derive(Debug, Clone)]
pub enum Coefficient {
    Exact(Dyadic),
    Decimal(DecimalRational),
}

impl Coefficient {
    fn is_zero(&self) -> bool {
        matches!(self, Coefficient::Exact(d) if d.is_zero())
    }
}

/// A parsed polynomial, lowest degree first.
#[derive(Debug, Clone)]
pub struct PolySpec {
    pub coeffs: Vec<Coefficient>,
}

impl PolySpec {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn from_integers(coeffs: &[BigInt]) -> Self {
        PolySpec {
            coeffs: coeffs.iter().map(|c| Coefficient::Exact(Dyadic::from(c))).collect(),
        }
    }

    /// Exact dyadic coefficients, if no decimal needs approximation.
    pub fn exact(&self) -> Option<ExactPolynomial> {
        self.coeffs
            .iter()
            .map(|c| match c {
                Coefficient::Exact(d) => Some(d.clone()),
                Coefficient::Decimal(_) => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(ExactPolynomial::new)
    }

    /// Integer coefficients, if all coefficients are integers.
    pub fn integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| match c {
                Coefficient::Exact(d) => d.to_bigint(),
                Coefficient::Decimal(_) => None,
            })
            .collect()
    }

    pub fn into_oracle(self) -> Box<dyn CoefficientOracle> {
        if let Some(p) = self.exact() {
            return Box::new(p);
        }
        let sources = self
            .coeffs
            .into_iter()
            .map(|c| -> Box<dyn CoefficientSource> {
                match c {
                    Coefficient::Exact(d) => Box::new(d),
                    Coefficient::Decimal(r) => Box::new(r),
                }
            })
            .collect();
        Box::new(BitstreamPolynomial::new(sources))
    }
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        msg: msg.into(),
    }
}

fn coefficient(tok: &Token<'_>, text: &str) -> Result<Coefficient, ParseError> {
    if let Ok(d) = Dyadic::parse_exact(text) {
        return Ok(Coefficient::Exact(d));
    }
    DecimalRational::parse(text)
        .map(Coefficient::Decimal)
        .ok_or_else(|| err(tok.line, tok.col, format!("malformed coefficient `{text}`")))
}

pub fn parse_poly(text: &str) -> Result<PolySpec, ParseError> {
    let mut layout = None;
    let mut tokens = Vec::new();
    let mut last = (1, 1);
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if layout.is_none() {
            let words: Vec<&str> = line.split_whitespace().collect();
            layout = Some(match words.as_slice() {
                ["dense", "lowest-first"] => Layout::LowestFirst,
                ["dense", "highest-first"] => Layout::HighestFirst,
                ["sparse"] => Layout::Sparse,
                _ => {
                    let col = raw.len() - raw.trim_start().len() + 1;
                    return Err(err(
                        i + 1,
                        col,
                        "expected header `dense lowest-first`, `dense highest-first` or `sparse`",
                    ));
                }
            });
            continue;
        }
        let mut offset = 0;
        for word in line.split_whitespace() {
            let at = line[offset..].find(word).unwrap() + offset;
            offset = at + word.len();
            tokens.push(Token {
                text: word,
                line: i + 1,
                col: at + 1,
            });
        }
        last = (i + 1, raw.len() + 1);
    }
    let Some(layout) = layout else {
        return Err(err(1, 1, "empty input"));
    };
    if tokens.is_empty() {
        return Err(err(last.0, last.1, "no coefficients"));
    }
    let coeffs = match layout {
        Layout::LowestFirst | Layout::HighestFirst => {
            let mut c = tokens
                .iter()
                .map(|t| coefficient(t, t.text))
                .collect::<Result<Vec<_>, _>>()?;
            let lead = match layout {
                Layout::HighestFirst => &tokens[0],
                _ => tokens.last().unwrap(),
            };
            if layout == Layout::HighestFirst {
                c.reverse();
            }
            if c.len() < 2 {
                return Err(err(lead.line, lead.col, "degree 0 polynomial"));
            }
            if c.last().unwrap().is_zero() {
                return Err(err(lead.line, lead.col, "zero leading coefficient"));
            }
            c
        }
        Layout::Sparse => {
            let mut terms = BTreeMap::new();
            for t in &tokens {
                let (e, c) = t
                    .text
                    .split_once(':')
                    .ok_or_else(|| err(t.line, t.col, "expected `exponent:coefficient`"))?;
                let e: usize = e
                    .parse()
                    .map_err(|_| err(t.line, t.col, format!("bad exponent `{e}`")))?;
                let c = coefficient(t, c)?;
                if terms.insert(e, (c, t)).is_some() {
                    return Err(err(t.line, t.col, format!("exponent {e} given twice")));
                }
            }
            // drop explicit zero terms, then check what remains
            terms.retain(|_, (c, _)| !c.is_zero());
            let Some((&deg, _)) = terms.last_key_value() else {
                let t = &tokens[0];
                return Err(err(t.line, t.col, "zero leading coefficient"));
            };
            if deg == 0 {
                let t = terms[&0].1;
                return Err(err(t.line, t.col, "degree 0 polynomial"));
            }
            let mut c = vec![Coefficient::Exact(Dyadic::zero()); deg + 1];
            for (e, (v, _)) in terms {
                c[e] = v;
            }
            c
        }
    };
    Ok(PolySpec { coeffs })
}

/// Dense lowest-first text for integer coefficients.
pub fn format_integers(coeffs: &[BigInt]) -> String {
    let body: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    format!("dense lowest-first\n{}\n", body.join(" "))
}
