//! Entropy and Shannon-Fano codes over explicit finite distributions.
//!
//! Probabilities are held as exact rationals. Decimal text such as `0.1` is
//! parsed exactly (as `1/10`), so code lengths `⌈log2(1/p)⌉` never suffer
//! from floating-point rounding. Only the entropy itself is a float.

use std::collections::{HashMap, HashSet};
use std::io::Read;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::bits::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Allowed absolute deviation of the probability sum from 1.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    entries: Vec<(String, BigRational)>,
}

fn sum_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64))
}

/// Parses `num/den` or an unsigned decimal with optional exponent.
pub fn parse_probability(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::InvalidDistribution(format!("cannot parse probability {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits_ok = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(bad());
    }
    if exp.unsigned_abs() > 400 {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    Ok(if scale >= 0 {
        BigRational::from_integer(digits * Pow::pow(&ten, scale as u32))
    } else {
        BigRational::new(digits, Pow::pow(&ten, (-scale) as u32))
    })
}

impl Distribution {
    pub fn new(entries: Vec<(String, BigRational)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDistribution("no symbols".into()));
        }
        let mut seen = HashSet::new();
        for (symbol, p) in &entries {
            if !seen.insert(symbol.as_str()) {
                return Err(Error::InvalidDistribution(format!("duplicate symbol {symbol:?}")));
            }
            if !p.is_positive() {
                return Err(Error::InvalidDistribution(format!(
                    "probability of {symbol:?} must be positive, got {p}"
                )));
            }
        }
        let sum: BigRational = entries.iter().map(|(_, p)| p.clone()).sum();
        if (sum.clone() - BigRational::one()).abs() > sum_tolerance() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {}, not 1",
                sum.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(Distribution { entries })
    }

    pub fn from_f64<S: Into<String>>(entries: impl IntoIterator<Item = (S, f64)>) -> Result<Self> {
        let entries = entries
            .into_iter()
            .map(|(s, p)| {
                let s = s.into();
                BigRational::from_float(p)
                    .map(|r| (s.clone(), r))
                    .ok_or_else(|| Error::InvalidDistribution(format!("probability of {s:?} is not finite")))
            })
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(entries)
    }

    pub fn from_text<S: Into<String>, T: AsRef<str>>(entries: impl IntoIterator<Item = (S, T)>) -> Result<Self> {
        let entries = entries
            .into_iter()
            .map(|(s, p)| Ok((s.into(), parse_probability(p.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(entries)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("no symbols".into()));
        }
        let p = BigRational::new(BigInt::one(), BigInt::from(n));
        Distribution::new((0..n).map(|i| (format!("s{i}"), p.clone())).collect())
    }

    /// Reads CSV with header `symbol,probability`.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let headers = reader.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "symbol" || &headers[1] != "probability" {
            return Err(Error::InvalidDistribution(
                "expected header `symbol,probability`".into(),
            ));
        }
        let mut entries = Vec::new();
        for record in reader.records() {
            let record = record?;
            entries.push((record[0].to_string(), parse_probability(&record[1])?));
        }
        Distribution::new(entries)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        Distribution::read_csv(std::fs::File::open(path)?)
    }

    pub fn entries(&self) -> &[(String, BigRational)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Entropy in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct EntropyValue(pub f64);

impl EntropyValue {
    pub fn bits(self) -> f64 {
        self.0
    }
}

/// H(p) = -Σ p log2 p.
pub fn entropy(d: &Distribution) -> EntropyValue {
    let h: f64 = d
        .entries
        .iter()
        .map(|(_, p)| {
            let p = p.to_f64().expect("probabilities are finite");
            -p * p.log2()
        })
        .sum();
    // -0.0 for the degenerate distribution
    EntropyValue(h + 0.0)
}

/// Smallest `l` with `2^-l <= p`, i.e. `⌈log2(1/p)⌉`.
pub fn shannon_fano_length(p: &BigRational) -> usize {
    assert!(p.is_positive());
    let num = p.numer().magnitude();
    let den = p.denom().magnitude();
    if num >= den {
        return 0;
    }
    // 2^l * num >= den
    let mut l = (den.bits() - num.bits()) as usize;
    l = l.saturating_sub(1);
    while (num << l) < *den {
        l += 1;
    }
    l
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeBook {
    entries: Vec<(String, BitString)>,
}

impl CodeBook {
    pub fn new(entries: Vec<(String, BitString)>) -> Self {
        CodeBook { entries }
    }

    pub fn entries(&self) -> &[(String, BitString)] {
        &self.entries
    }

    pub fn codeword(&self, symbol: &str) -> Option<&BitString> {
        self.entries.iter().find(|(s, _)| s == symbol).map(|(_, c)| c)
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.entries.iter().map(|(_, c)| c.len()).collect()
    }
}

/// Adds one to a fixed-width binary number; false on overflow.
fn increment(code: &mut BitString) -> bool {
    let mut bits = code.as_slice().to_vec();
    for bit in bits.iter_mut().rev() {
        if *bit {
            *bit = false;
        } else {
            *bit = true;
            *code = BitString::from_bits(bits);
            return true;
        }
    }
    false
}

/// Canonical prefix code with Shannon-Fano lengths `⌈log2(1/p)⌉`.
///
/// Symbols are ordered by (length, input position) and given consecutive
/// codewords, each shifted left when the length grows. The returned book
/// lists symbols in input order.
pub fn shannon_fano(d: &Distribution) -> Result<CodeBook> {
    let lengths: Vec<usize> = d.entries.iter().map(|(_, p)| shannon_fano_length(p)).collect();
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| (lengths[i], i));

    let mut words = vec![BitString::new(); lengths.len()];
    let mut code: Option<BitString> = None;
    for &i in &order {
        let next = match code.take() {
            None => BitString::from_bits(vec![false; lengths[i]]),
            Some(mut c) => {
                if !increment(&mut c) {
                    return Err(Error::InvalidDistribution(
                        "code lengths overflow the Kraft budget".into(),
                    ));
                }
                while c.len() < lengths[i] {
                    c.push(false);
                }
                c
            }
        };
        words[i] = next.clone();
        code = Some(next);
    }
    Ok(CodeBook::new(
        d.entries
            .iter()
            .map(|(s, _)| s.clone())
            .zip(words)
            .collect(),
    ))
}

/// Σ p_s |codeword(s)|, evaluated exactly and rounded once.
pub fn expected_length(c: &CodeBook, d: &Distribution) -> Result<f64> {
    let book: HashMap<&str, usize> = c.entries.iter().map(|(s, w)| (s.as_str(), w.len())).collect();
    if book.len() != d.len() || c.entries.len() != d.len() {
        return Err(Error::SymbolMismatch(format!(
            "codebook has {} symbols, distribution has {}",
            c.entries.len(),
            d.len()
        )));
    }
    let mut total = BigRational::zero();
    for (symbol, p) in &d.entries {
        let len = book
            .get(symbol.as_str())
            .ok_or_else(|| Error::SymbolMismatch(format!("{symbol:?} has no codeword")))?;
        total += p * BigRational::from_integer(BigInt::from(*len));
    }
    Ok(total.to_f64().unwrap_or(f64::NAN))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KraftCheck {
    pub sum: Dyadic,
    pub satisfied: bool,
}

pub fn kraft_check(c: &CodeBook) -> KraftCheck {
    let sum: Dyadic = c
        .entries
        .iter()
        .map(|(_, w)| Dyadic::pow2_neg(w.len() as u32))
        .sum();
    let satisfied = sum <= Dyadic::one();
    KraftCheck { sum, satisfied }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixCheck {
    pub prefix_free: bool,
    /// First `(shorter, longer)` pair found scanning entries in book order.
    pub violation: Option<(BitString, BitString)>,
}

/// Checks that no codeword is a prefix of another. Two symbols sharing one
/// codeword also count as a violation.
pub fn prefix_free_check(c: &CodeBook) -> PrefixCheck {
    let words: Vec<&BitString> = c.entries.iter().map(|(_, w)| w).collect();
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let pair = if a.is_prefix_of(b) {
                Some(((*a).clone(), (*b).clone()))
            } else if b.is_prefix_of(a) {
                Some(((*b).clone(), (*a).clone()))
            } else {
                None
            };
            if pair.is_some() {
                return PrefixCheck {
                    prefix_free: false,
                    violation: pair,
                };
            }
        }
    }
    PrefixCheck {
        prefix_free: true,
        violation: None,
    }
}
