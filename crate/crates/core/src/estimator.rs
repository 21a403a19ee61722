//! LZ78 as a computable upper bound on description length.
//!
//! Code layout, bit-exact:
//!
//! ```text
//! [ input length: 32 bits, big-endian ]
//! [ token 1 ][ token 2 ] ...
//! ```
//!
//! Token `t` (1-based) is its phrase index in `⌈log2 t⌉` bits (none for
//! `t = 1`), then the 8 literal bits when the token has a literal. Only the
//! last token may omit the literal, which happens when the input ends
//! exactly on a known phrase. The decoder infers that case from the length
//! header. Byte-oriented output pads the stream with zero bits to a byte
//! boundary.

use std::collections::HashMap;

use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};

const HEADER_BITS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lz78Token {
    /// Phrase reference; 0 is the empty phrase.
    pub index: u32,
    pub literal: Option<u8>,
}

/// Bits needed for the index of token `t` (1-based).
fn index_width(t: usize) -> usize {
    if t <= 1 {
        0
    } else {
        (usize::BITS - (t - 1).leading_zeros()) as usize
    }
}

/// Greedy longest-match parse.
pub fn lz78_parse(x: &[u8]) -> Vec<Lz78Token> {
    // (phrase index, next byte) -> child phrase index
    let mut trie: HashMap<(u32, u8), u32> = HashMap::new();
    let mut tokens = Vec::new();
    let mut next_phrase = 1u32;
    let mut i = 0;
    while i < x.len() {
        let mut node = 0u32;
        while i < x.len() {
            match trie.get(&(node, x[i])) {
                Some(&child) => {
                    node = child;
                    i += 1;
                }
                None => break,
            }
        }
        if i == x.len() {
            tokens.push(Lz78Token {
                index: node,
                literal: None,
            });
            break;
        }
        trie.insert((node, x[i]), next_phrase);
        next_phrase += 1;
        tokens.push(Lz78Token {
            index: node,
            literal: Some(x[i]),
        });
        i += 1;
    }
    tokens
}

/// Exact code size for a token list.
pub fn encoded_size(tokens: &[Lz78Token]) -> usize {
    HEADER_BITS
        + tokens
            .iter()
            .enumerate()
            .map(|(i, t)| index_width(i + 1) + if t.literal.is_some() { 8 } else { 0 })
            .sum::<usize>()
}

fn check_len(x: &[u8]) -> Result<()> {
    if x.len() > u32::MAX as usize {
        return Err(Error::InputTooLong(x.len()));
    }
    Ok(())
}

pub fn lz78_encode(x: &[u8]) -> Result<BitString> {
    check_len(x)?;
    let tokens = lz78_parse(x);
    let mut out = BitString::with_capacity(encoded_size(&tokens));
    out.push_uint(x.len() as u64, HEADER_BITS);
    for (i, token) in tokens.iter().enumerate() {
        out.push_uint(token.index as u64, index_width(i + 1));
        if let Some(b) = token.literal {
            out.push_uint(b as u64, 8);
        }
    }
    Ok(out)
}

/// Decodes a code, returning the bytes and the number of bits read.
fn decode_prefix(code: &BitString) -> Result<(Vec<u8>, usize)> {
    let truncated = |what: &str| Error::MalformedCode(format!("truncated {what}"));
    let len = code.read_uint(0, HEADER_BITS).ok_or_else(|| truncated("header"))? as usize;
    let mut cursor = HEADER_BITS;
    let mut out: Vec<u8> = Vec::with_capacity(len);
    // phrase k is out[start..start + len]
    let mut phrases: Vec<(usize, usize)> = vec![(0, 0)];
    let mut t = 1;
    while out.len() < len {
        let width = index_width(t);
        let index = code.read_uint(cursor, width).ok_or_else(|| truncated("index"))? as usize;
        cursor += width;
        if index >= phrases.len() {
            return Err(Error::MalformedCode(format!(
                "token {t} references phrase {index}, only {} exist",
                phrases.len()
            )));
        }
        let (start, plen) = phrases[index];
        let remaining = len - out.len();
        if plen > remaining {
            return Err(Error::MalformedCode(format!(
                "token {t} overshoots the declared length {len}"
            )));
        }
        let begin = out.len();
        out.extend_from_within(start..start + plen);
        if plen < remaining {
            let byte = code.read_uint(cursor, 8).ok_or_else(|| truncated("literal"))? as u8;
            cursor += 8;
            out.push(byte);
            phrases.push((begin, plen + 1));
        }
        t += 1;
    }
    Ok((out, cursor))
}

/// Inverse of [`lz78_encode`]. Trailing bits are an error.
pub fn lz78_decode(code: &BitString) -> Result<Vec<u8>> {
    let (out, used) = decode_prefix(code)?;
    if used != code.len() {
        return Err(Error::MalformedCode(format!(
            "{} trailing bits after the last token",
            code.len() - used
        )));
    }
    Ok(out)
}

/// The code packed into bytes, zero-padded to a byte boundary.
pub fn lz78_encode_bytes(x: &[u8]) -> Result<Vec<u8>> {
    Ok(lz78_encode(x)?.to_padded_bytes())
}

/// Decodes a byte-padded code; padding must be fewer than 8 zero bits.
pub fn lz78_decode_bytes(bytes: &[u8]) -> Result<Vec<u8>> {
    let code = BitString::from_bytes(bytes);
    let (out, used) = decode_prefix(&code)?;
    let padding = code.len() - used;
    if padding >= 8 || code.as_slice()[used..].iter().any(|&b| b) {
        return Err(Error::MalformedCode(format!(
            "expected fewer than 8 zero padding bits, found {padding} bits"
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EstimateReport {
    pub input_bytes: u64,
    pub encoded_bits: u64,
    pub phrase_count: u64,
    pub upper_bound_bits: u64,
}

/// `|lz78_encode(x)| + c_dec`.
pub fn k_upper_bound(x: &[u8], c_dec: u64) -> Result<EstimateReport> {
    check_len(x)?;
    let tokens = lz78_parse(x);
    let encoded_bits = encoded_size(&tokens) as u64;
    Ok(EstimateReport {
        input_bytes: x.len() as u64,
        encoded_bits,
        phrase_count: tokens.len() as u64,
        upper_bound_bits: encoded_bits + c_dec,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub bound_x: EstimateReport,
    pub bound_y: EstimateReport,
    /// `bound_x - bound_y` in bits.
    pub difference: i64,
    /// `bound_x / bound_y`.
    pub ratio: f64,
}

pub fn compare_information(x: &[u8], y: &[u8], c_dec: u64) -> Result<Comparison> {
    let bound_x = k_upper_bound(x, c_dec)?;
    let bound_y = k_upper_bound(y, c_dec)?;
    Ok(Comparison {
        bound_x,
        bound_y,
        difference: bound_x.upper_bound_bits as i64 - bound_y.upper_bound_bits as i64,
        ratio: bound_x.upper_bound_bits as f64 / bound_y.upper_bound_bits as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_bytes;
    use proptest::prelude::*;

    fn tok(index: u32, literal: Option<u8>) -> Lz78Token {
        Lz78Token { index, literal }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            lz78_parse(b"AAAA"),
            vec![tok(0, Some(b'A')), tok(1, Some(b'A')), tok(1, None)]
        );
        assert!(lz78_parse(b"").is_empty());
        assert_eq!(lz78_parse(b"AB"), vec![tok(0, Some(b'A')), tok(0, Some(b'B'))]);
        assert_eq!(
            lz78_parse(b"ABABABA"),
            vec![
                tok(0, Some(b'A')),
                tok(0, Some(b'B')),
                tok(1, Some(b'B')),
                tok(3, Some(b'A')),
            ]
        );
    }

    #[test]
    fn encode_examples() {
        let e = lz78_encode(b"").unwrap();
        assert_eq!(e, BitString::from_uint(0, 32));
        let e = lz78_encode(b"AAAA").unwrap();
        assert_eq!(e.len(), 51);
        // header 4, then A, then 1|A, then 01
        let mut expected = BitString::from_uint(4, 32);
        expected.push_uint(0x41, 8);
        expected.push_uint(1, 1);
        expected.push_uint(0x41, 8);
        expected.push_uint(1, 2);
        assert_eq!(e, expected);
    }

    #[test]
    fn decode_examples() {
        assert_eq!(lz78_decode(&lz78_encode(b"AB").unwrap()).unwrap(), b"AB");
        assert!(lz78_decode(&BitString::from_uint(0, 32)).unwrap().is_empty());
        let full = lz78_encode(b"hello hello").unwrap();
        let mut cut = full.clone();
        cut.truncate(full.len() - 3);
        assert!(matches!(lz78_decode(&cut), Err(Error::MalformedCode(_))));
        let mut header_only = BitString::new();
        header_only.push_uint(5, 20);
        assert!(lz78_decode(&header_only).is_err());
        let mut trailing = full.clone();
        trailing.push(false);
        assert!(lz78_decode(&trailing).is_err());
    }

    #[test]
    fn decode_rejects_bad_references_and_overshoot() {
        // length 1, token 1 = 'A', token 2 would need index 1 but length is reached
        let mut code = BitString::from_uint(1, 32);
        code.push_uint(0x41, 8);
        assert_eq!(lz78_decode(&code).unwrap(), b"A");
        // length 2; token 2 references phrase 1 ("A") with no literal: "AA"
        let mut code = BitString::from_uint(2, 32);
        code.push_uint(0x41, 8);
        code.push_uint(1, 1);
        assert_eq!(lz78_decode(&code).unwrap(), b"AA");
        // length 3; token 3 index 3 does not exist yet
        let mut code = BitString::from_uint(4, 32);
        code.push_uint(0x41, 8);
        code.push_uint(0, 1);
        code.push_uint(0x42, 8);
        code.push_uint(3, 2);
        assert!(lz78_decode(&code).is_err());
        // length 4: "A", "AA", then a reference to "AA" with one byte left
        let mut code = BitString::from_uint(4, 32);
        code.push_uint(0x41, 8);
        code.push_uint(1, 1);
        code.push_uint(0x41, 8);
        code.push_uint(2, 2);
        assert!(matches!(lz78_decode(&code), Err(Error::MalformedCode(m)) if m.contains("overshoots")));
    }

    #[test]
    fn padded_bytes() {
        for input in [&b""[..], b"A", b"AAAA", b"abracadabra"] {
            let packed = lz78_encode_bytes(input).unwrap();
            assert_eq!(packed.len(), lz78_encode(input).unwrap().len().div_ceil(8));
            assert_eq!(lz78_decode_bytes(&packed).unwrap(), input);
        }
        let mut packed = lz78_encode_bytes(b"AAAA").unwrap();
        *packed.last_mut().unwrap() |= 1;
        assert!(lz78_decode_bytes(&packed).is_err());
        let mut packed = lz78_encode_bytes(b"AB").unwrap();
        packed.push(0);
        assert!(lz78_decode_bytes(&packed).is_err());
    }

    #[test]
    fn upper_bounds() {
        assert_eq!(k_upper_bound(b"", 0).unwrap().upper_bound_bits, 32);
        assert_eq!(k_upper_bound(b"", 17).unwrap().upper_bound_bits, 49);
        let r = k_upper_bound(b"AAAA", 0).unwrap();
        assert_eq!((r.input_bytes, r.encoded_bits, r.phrase_count), (4, 51, 3));
        let runs = vec![b'A'; 4096];
        let noise = seeded_bytes(1, 4096);
        let a = k_upper_bound(&runs, 0).unwrap().upper_bound_bits as f64;
        let b = k_upper_bound(&noise, 0).unwrap().upper_bound_bits as f64;
        assert!(a / b < 0.05, "{a} / {b}");
        let ab: Vec<u8> = b"AB".repeat(2048);
        assert!(k_upper_bound(&ab, 0).unwrap().upper_bound_bits < b as u64);
    }

    #[test]
    fn comparisons() {
        let c = compare_information(b"some text", b"some text", 5).unwrap();
        assert_eq!((c.difference, c.ratio), (0, 1.0));
        let c = compare_information(b"", b"", 0).unwrap();
        assert_eq!(c.difference, 0);
    }

    proptest! {
        #[test]
        fn roundtrip_and_accounting(x in prop::collection::vec(any::<u8>(), 0..600)) {
            let code = lz78_encode(&x).unwrap();
            prop_assert_eq!(lz78_decode(&code).unwrap(), x.clone());
            let report = k_upper_bound(&x, 0).unwrap();
            prop_assert_eq!(report.encoded_bits as usize, code.len());
            prop_assert!(report.phrase_count <= report.input_bytes);
        }

        #[test]
        fn roundtrip_small_alphabet(x in prop::collection::vec(0u8..3, 0..2000)) {
            prop_assert_eq!(lz78_decode(&lz78_encode(&x).unwrap()).unwrap(), x);
        }
    }
}
