use ait_core::corpus::{english_sample, random_like};
use ait_core::estimator::{compare_information, k_upper_bound, lz78_decode, lz78_encode, lz78_parse};
use ait_core::rng::{seeded_bytes, XorShift64Star, DEFAULT_SEED};

/// Greedy longest-match parse written against a phrase list, no trie.
fn naive_parse(x: &[u8]) -> Vec<(usize, Option<u8>)> {
    let mut phrases: Vec<Vec<u8>> = vec![Vec::new()];
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < x.len() {
        let (idx, len) = phrases
            .iter()
            .enumerate()
            .filter(|(_, p)| x[pos..].starts_with(p))
            .max_by_key(|(_, p)| p.len())
            .map(|(i, p)| (i, p.len()))
            .unwrap();
        if pos + len == x.len() {
            out.push((idx, None));
            break;
        }
        let mut phrase = phrases[idx].clone();
        phrase.push(x[pos + len]);
        out.push((idx, Some(x[pos + len])));
        phrases.push(phrase);
        pos += len + 1;
    }
    out
}

fn ceil_log2(t: usize) -> usize {
    (usize::BITS - (t - 1).leading_zeros()) as usize
}

fn corpora() -> Vec<Vec<u8>> {
    let mut rng = XorShift64Star::new(5);
    let mut v: Vec<Vec<u8>> = vec![
        Vec::new(),
        b"A".to_vec(),
        b"AAAA".to_vec(),
        b"AB".repeat(300),
        english_sample()[..600].to_vec(),
        vec![0u8; 1000],
    ];
    for len in [1, 2, 3, 7, 64, 257] {
        v.push(rng.bytes(len));
    }
    for _ in 0..20 {
        let alphabet = 1 + rng.below(3);
        let len = rng.below(200) as usize;
        v.push((0..len).map(|_| b'a' + rng.below(alphabet) as u8).collect());
    }
    v
}

#[test]
fn parse_matches_naive_oracle() {
    for x in corpora() {
        let got: Vec<(usize, Option<u8>)> =
            lz78_parse(&x).iter().map(|t| (t.index as usize, t.literal)).collect();
        assert_eq!(got, naive_parse(&x));
    }
}

#[test]
fn roundtrip_and_exact_size() {
    for x in corpora() {
        let code = lz78_encode(&x).unwrap();
        assert_eq!(lz78_decode(&code).unwrap(), x);
        let expected: usize = 32
            + naive_parse(&x)
                .iter()
                .enumerate()
                .map(|(i, (_, lit))| ceil_log2(i + 1) + if lit.is_some() { 8 } else { 0 })
                .sum::<usize>();
        assert_eq!(code.len(), expected);
        let r = k_upper_bound(&x, 7).unwrap();
        assert_eq!(r.encoded_bits as usize, expected);
        assert_eq!(r.upper_bound_bits, r.encoded_bits + 7);
        assert!(r.phrase_count <= r.input_bytes);
    }
}

#[test]
fn malformed_codes_rejected() {
    let code = lz78_encode(b"hello world").unwrap();
    for cut in [0, 10, 31, code.len() - 1] {
        let mut short = code.clone();
        short.truncate(cut);
        assert!(lz78_decode(&short).is_err(), "cut at {cut}");
    }
    let mut long = code.clone();
    long.push(false);
    assert!(lz78_decode(&long).is_err());
}

#[test]
fn demos() {
    let repeated = k_upper_bound(&[b'A'; 4096], 0).unwrap().upper_bound_bits as f64;
    let random = k_upper_bound(&seeded_bytes(DEFAULT_SEED, 4096), 0).unwrap().upper_bound_bits as f64;
    assert!(repeated / random < 0.05);
    let ab = k_upper_bound(&b"AB".repeat(2048), 0).unwrap().upper_bound_bits as f64;
    assert!(ab < random);

    let text = english_sample();
    let c = compare_information(text, &random_like(text, DEFAULT_SEED), 0).unwrap();
    assert!(c.ratio <= 0.8, "ratio {}", c.ratio);
    let same = compare_information(text, text, 3).unwrap();
    assert_eq!((same.difference, same.ratio), (0, 1.0));
    assert_eq!(compare_information(b"", b"", 0).unwrap().difference, 0);
}
