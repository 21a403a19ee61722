//! Structure functions over finite-set models of `{0,1}^n`.
//!
//! A model is a nonempty set `S ⊆ {0,1}^n`, described to machine A by its
//! indicator bitmap: bit `i` of the `2^n`-bit string is set when the `i`-th
//! `n`-bit string in lexicographic order belongs to `S`. For a string `x`
//!
//! ```text
//! h_x(α) = min { log2 |S| : x ∈ S, K_A(bitmap(S)) ≤ α }
//! ```
//!
//! is found by brute force over all `2^(2^n) - 1` sets. Exact mode covers
//! `n ≤ 3`, where every bitmap's complexity is known by enumerating machine
//! A up to the literal bound `2^(n+1) + 2`. At `n = 4` that bound is 34
//! bits, out of reach, so a bounded mode searches up to a smaller limit and
//! falls back to literal programs, flagging every point above the limit as
//! an upper bound.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitString;
use crate::complexity::{enumerate_machine, kolmogorov, ComplexityIndex, SearchConfig};
use crate::error::{Error, Result};
use crate::machines::{Machine, MachineId};

pub const EXACT_MAX_N: usize = 3;
pub const BOUNDED_MAX_N: usize = 4;
pub const DEFAULT_SLACK: usize = 8;
pub const DEFAULT_BOUNDED_LIMIT: usize = 20;

/// A nonempty subset of `{0,1}^n`, stored as its bitmap with member 0 in
/// the most significant position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelSet {
    n: usize,
    mask: u64,
}

fn universe_size(n: usize) -> usize {
    1 << n
}

fn member_index(x: &BitString) -> usize {
    x.read_uint(0, x.len()).expect("short string") as usize
}

impl ModelSet {
    pub fn new(n: usize, members: impl IntoIterator<Item = BitString>) -> Result<Self> {
        if n > 6 {
            return Err(Error::Scale(format!("model sets over {{0,1}}^{n} are not supported")));
        }
        let size = universe_size(n);
        let mut mask = 0u64;
        for m in members {
            if m.len() != n {
                return Err(Error::InvalidArgument(format!("member {m} is not {n} bits long")));
            }
            mask |= 1 << (size - 1 - member_index(&m));
        }
        if mask == 0 {
            return Err(Error::InvalidArgument("model sets must be nonempty".into()));
        }
        Ok(ModelSet { n, mask })
    }

    pub fn from_bitmap(bitmap: &BitString) -> Result<Self> {
        let size = bitmap.len();
        if !size.is_power_of_two() || size > 64 {
            return Err(Error::InvalidArgument(format!(
                "bitmap length {size} is not 2^n for n <= 6"
            )));
        }
        let mask = bitmap.read_uint(0, size).expect("length checked");
        if mask == 0 {
            return Err(Error::InvalidArgument("model sets must be nonempty".into()));
        }
        Ok(ModelSet {
            n: size.trailing_zeros() as usize,
            mask,
        })
    }

    pub fn singleton(x: &BitString) -> Result<Self> {
        ModelSet::new(x.len(), [x.clone()])
    }

    pub fn full(n: usize) -> Result<Self> {
        ModelSet::new(n, BitString::all_of_length(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        self.mask.count_ones() as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: &BitString) -> bool {
        x.len() == self.n && self.mask >> (universe_size(self.n) - 1 - member_index(x)) & 1 == 1
    }

    /// Members in lexicographic order.
    pub fn members(&self) -> Vec<BitString> {
        BitString::all_of_length(self.n).filter(|m| self.contains(m)).collect()
    }

    /// Position of `x` among the members in lexicographic order.
    pub fn rank_of(&self, x: &BitString) -> Option<u64> {
        if !self.contains(x) {
            return None;
        }
        let above = universe_size(self.n) - member_index(x);
        Some((self.mask >> above).count_ones() as u64)
    }

    pub fn bitmap_encode(&self) -> BitString {
        BitString::from_uint(self.mask, universe_size(self.n))
    }

    /// `⌈log2 |S|⌉`.
    pub fn index_bits(&self) -> usize {
        let size = self.len();
        (u64::BITS - (size - 1).leading_zeros()) as usize
    }

    pub fn log2_size(&self) -> f64 {
        (self.len() as f64).log2()
    }
}

impl Serialize for ModelSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.bitmap_encode())
    }
}

/// Indicator bitmap of `s`.
pub fn bitmap_encode(s: &ModelSet) -> BitString {
    s.bitmap_encode()
}

/// K_A of every bitmap over `{0,1}^n`, found by one enumeration.
#[derive(Debug, Clone)]
pub struct BitmapComplexity {
    n: usize,
    limit: usize,
    /// Indexed by mask; `None` when no program within `limit` prints it.
    k: Vec<Option<u32>>,
}

impl BitmapComplexity {
    pub fn build(n: usize, limit: usize, config: &SearchConfig) -> Result<Self> {
        if n > BOUNDED_MAX_N {
            return Err(Error::Scale(format!(
                "bitmaps over {{0,1}}^{n} have 2^{} bits; at most n = {BOUNDED_MAX_N} is supported",
                universe_size(n)
            )));
        }
        let table = enumerate_machine(&Machine::plain(MachineId::A)?, limit, config)?;
        let index = ComplexityIndex::from_table(&table);
        let size = universe_size(n);
        let mut k = vec![None; 1 << size];
        for (output, witness) in index.iter() {
            if output.len() == size {
                let mask = output.read_uint(0, size).expect("length checked") as usize;
                k[mask] = Some(witness.len() as u32);
            }
        }
        Ok(BitmapComplexity { n, limit, k })
    }

    /// Literal program length for any `2^n`-bit bitmap on machine A.
    pub fn literal_bits(n: usize) -> usize {
        2 * universe_size(n) + 2
    }

    pub fn is_complete(&self) -> bool {
        self.limit >= Self::literal_bits(self.n)
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Exact K, if it is at most the search limit.
    pub fn exact(&self, s: &ModelSet) -> Option<usize> {
        self.k[s.mask as usize].map(|v| v as usize)
    }

    /// Exact K, or the literal upper bound when it is above the limit.
    pub fn effective(&self, mask: u64) -> usize {
        self.k[mask as usize]
            .map(|v| v as usize)
            .unwrap_or_else(|| Self::literal_bits(self.n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructurePoint {
    pub alpha: usize,
    /// `log2 |S|` of the witness; `None` encodes +∞.
    pub h: Option<f64>,
    pub set_size: Option<u64>,
    pub witness: Option<ModelSet>,
    /// False when the point relies on literal upper bounds.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureCurve {
    pub x: BitString,
    pub n: usize,
    pub alpha_max: usize,
    pub search_limit: usize,
    pub exact: bool,
    pub points: Vec<StructurePoint>,
}

impl StructureCurve {
    pub fn point(&self, alpha: usize) -> Option<&StructurePoint> {
        self.points.get(alpha)
    }

    /// Smallest alpha with finite h.
    pub fn min_alpha(&self) -> Option<usize> {
        self.points.iter().find(|p| p.h.is_some()).map(|p| p.alpha)
    }

    /// Rows `alpha<TAB>h<TAB>witness-bitmap`, `inf` and `-` for +∞.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            match (p.h, p.witness) {
                (Some(h), Some(w)) => out.push_str(&format!("{}\t{}\t{}\n", p.alpha, h, w.bitmap_encode())),
                _ => out.push_str(&format!("{}\tinf\t-\n", p.alpha)),
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StructureOptions {
    /// Search limit for bitmap complexities; defaults to the literal bound
    /// in exact mode and [`DEFAULT_BOUNDED_LIMIT`] in bounded mode.
    pub limit: Option<usize>,
    pub allow_bounded: bool,
    pub search: SearchConfig,
}

impl StructureOptions {
    fn resolve_limit(&self, n: usize) -> Result<usize> {
        if n > BOUNDED_MAX_N {
            return Err(Error::Scale(format!(
                "structure functions are limited to n <= {BOUNDED_MAX_N}, got n = {n}"
            )));
        }
        if n > EXACT_MAX_N && !self.allow_bounded {
            return Err(Error::Scale(format!(
                "exact mode supports n <= {EXACT_MAX_N}; request bounded mode for n = {n}"
            )));
        }
        let literal = BitmapComplexity::literal_bits(n);
        Ok(match self.limit {
            Some(l) => l,
            None if n <= EXACT_MAX_N => literal,
            None => DEFAULT_BOUNDED_LIMIT,
        })
    }
}

/// Best witness per alpha: minimum of (set size, bitmap) over candidates.
type Best = Vec<Option<(u32, u64)>>;

fn fold_candidates(best: &mut Best, masks: impl Iterator<Item = u64>, k: &BitmapComplexity) {
    for mask in masks {
        let key = (mask.count_ones(), mask);
        let slot = &mut best[k.effective(mask)];
        if slot.is_none_or(|cur| key < cur) {
            *slot = Some(key);
        }
    }
}

fn merge_best(mut a: Best, b: Best) -> Best {
    for (x, y) in a.iter_mut().zip(b) {
        if let Some(y) = y {
            if x.is_none_or(|cur| y < cur) {
                *x = Some(y);
            }
        }
    }
    a
}

fn curve_from_best(x: &BitString, k: &BitmapComplexity, best: Best, alpha_max: usize) -> StructureCurve {
    let n = x.len();
    let mut points = Vec::with_capacity(alpha_max + 1);
    let mut running: Option<(u32, u64)> = None;
    for (alpha, candidate) in best.into_iter().enumerate().take(alpha_max + 1) {
        if let Some(c) = candidate {
            if running.is_none_or(|cur| c < cur) {
                running = Some(c);
            }
        }
        let witness = running.map(|(_, mask)| ModelSet { n, mask });
        points.push(StructurePoint {
            alpha,
            h: witness.map(|w| w.log2_size()),
            set_size: witness.map(|w| w.len()),
            witness,
            exact: alpha <= k.limit() || k.is_complete(),
        });
    }
    StructureCurve {
        x: x.clone(),
        n,
        alpha_max,
        search_limit: k.limit(),
        exact: k.is_complete(),
        points,
    }
}

/// Masks of every set over `{0,1}^n` that contains `x`.
fn candidate_masks(x: &BitString) -> impl Iterator<Item = u64> + Clone {
    let size = universe_size(x.len());
    let bit = 1u64 << (size - 1 - member_index(x));
    let all = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
    // Enumerate the other members as a submask of the complement.
    let rest = all & !bit;
    let count = 1u64 << rest.count_ones();
    (0..count).map(move |i| bit | deposit(i, rest))
}

/// Scatters the low bits of `value` into the set positions of `mask`.
fn deposit(mut value: u64, mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if value & 1 == 1 {
            out |= low;
        }
        value >>= 1;
        m &= m - 1;
    }
    out
}

pub(crate) fn curve_with(
    x: &BitString,
    k: &BitmapComplexity,
    masks: impl Iterator<Item = u64>,
) -> StructureCurve {
    let alpha_max = k.effective(ModelSet::singleton(x).expect("n checked").mask);
    let mut best: Best = vec![None; BitmapComplexity::literal_bits(x.len()) + 1];
    fold_candidates(&mut best, masks, k);
    curve_from_best(x, k, best, alpha_max)
}

fn check_x(x: &BitString, n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::InvalidArgument(format!("string {x} is not {n} bits long")));
    }
    Ok(())
}

/// The curve for `x` from precomputed bitmap complexities.
pub fn structure_curve(x: &BitString, k: &BitmapComplexity, workers: usize) -> Result<StructureCurve> {
    check_x(x, k.n)?;
    if workers <= 1 {
        return Ok(curve_with(x, k, candidate_masks(x)));
    }
    let alpha_max = k.effective(ModelSet::singleton(x)?.mask);
    let width = BitmapComplexity::literal_bits(x.len()) + 1;
    let masks: Vec<u64> = candidate_masks(x).collect();
    let chunk = masks.len().div_ceil(workers * 4).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start workers: {e}")))?;
    let best = pool.install(|| {
        masks
            .par_chunks(chunk)
            .map(|part| {
                let mut best = vec![None; width];
                fold_candidates(&mut best, part.iter().copied(), k);
                best
            })
            .reduce(|| vec![None; width], merge_best)
    });
    Ok(curve_from_best(x, k, best, alpha_max))
}

/// h_x(α) for α = 0 ..= K_A(bitmap({x})).
pub fn structure_function(x: &BitString, n: usize, options: &StructureOptions) -> Result<StructureCurve> {
    check_x(x, n)?;
    let limit = options.resolve_limit(n)?;
    let k = BitmapComplexity::build(n, limit, &options.search)?;
    structure_curve(x, &k, options.search.workers)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TwoPartReport {
    pub model_bits: usize,
    pub data_bits: usize,
    pub total: usize,
    pub index: u64,
}

/// Model cost K_A(bitmap(S)) plus the index of `x` inside `S`.
pub fn two_part_code(x: &BitString, s: &ModelSet, config: &SearchConfig) -> Result<TwoPartReport> {
    let index = s.rank_of(x).ok_or_else(|| Error::NotAMember { x: x.to_string() })?;
    let bitmap = s.bitmap_encode();
    let model = kolmogorov(&bitmap, MachineId::A, BitmapComplexity::literal_bits(s.n()), config)?;
    let model_bits = model.exact_bits();
    let data_bits = s.index_bits();
    Ok(TwoPartReport {
        model_bits,
        data_bits,
        total: model_bits + data_bits,
        index,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MssReport {
    pub alpha_star: usize,
    pub h_at: f64,
    pub set_size: u64,
    pub witness: ModelSet,
    /// Equal to `alpha_star`.
    pub sophistication: usize,
    pub slack_used: usize,
    pub k_x: usize,
}

/// Least alpha with `alpha + h(alpha) <= k_x + slack`.
pub fn mss_from_curve(curve: &StructureCurve, k_x: usize, slack: usize) -> Result<MssReport> {
    let bound = k_x + slack;
    curve
        .points
        .iter()
        .find_map(|p| {
            let size = p.set_size?;
            // alpha + log2(size) <= bound  <=>  size <= 2^(bound - alpha)
            let budget = bound.checked_sub(p.alpha)?;
            let fits = budget >= 64 || size <= 1u64 << budget;
            fits.then(|| MssReport {
                alpha_star: p.alpha,
                h_at: p.h.expect("finite when a set exists"),
                set_size: size,
                witness: p.witness.expect("finite when a set exists"),
                sophistication: p.alpha,
                slack_used: slack,
                k_x,
            })
        })
        .ok_or(Error::NoSufficientStatistic { bound })
}

fn exact_k_of(x: &BitString, config: &SearchConfig) -> Result<usize> {
    Ok(kolmogorov(x, MachineId::A, MachineId::A.literal_program_len(x), config)?.exact_bits())
}

pub fn minimal_sufficient_statistic(
    x: &BitString,
    n: usize,
    slack: usize,
    options: &StructureOptions,
) -> Result<MssReport> {
    let curve = structure_function(x, n, options)?;
    mss_from_curve(&curve, exact_k_of(x, &options.search)?, slack)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RandomnessLabel {
    /// Cheap model, large set: x looks like a typical member of a simple set.
    PositiveSenseCandidate,
    /// The model absorbs nearly all of K(x).
    NegativeSenseCandidate,
    Structured,
    /// No alpha met the sufficiency condition at this slack.
    Unresolved,
}

impl fmt::Display for RandomnessLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RandomnessLabel::PositiveSenseCandidate => "positive-sense-candidate",
            RandomnessLabel::NegativeSenseCandidate => "negative-sense-candidate",
            RandomnessLabel::Structured => "structured",
            RandomnessLabel::Unresolved => "unresolved",
        })
    }
}

/// Heuristic cut-offs for [`randomness_report`]. The curve is the real output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LabelThresholds {
    /// alpha_star may exceed the curve's first finite alpha by this much.
    pub positive_alpha_window: usize,
    /// h_at must be at least n minus this.
    pub positive_h_margin: usize,
    /// alpha_star at least k_x minus this marks a negative-sense candidate.
    pub negative_k_margin: usize,
}

impl Default for LabelThresholds {
    fn default() -> Self {
        LabelThresholds {
            positive_alpha_window: 2,
            positive_h_margin: 1,
            negative_k_margin: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomnessReport {
    pub k_x: usize,
    pub alpha_star: Option<usize>,
    pub h_at: Option<f64>,
    pub label: RandomnessLabel,
    pub thresholds: LabelThresholds,
    pub curve: StructureCurve,
}

/// Labels are checked in order positive, negative, structured.
pub fn classify(
    curve: &StructureCurve,
    k_x: usize,
    mss: Option<&MssReport>,
    thresholds: &LabelThresholds,
) -> RandomnessLabel {
    let (Some(mss), Some(min_alpha)) = (mss, curve.min_alpha()) else {
        return RandomnessLabel::Unresolved;
    };
    let cheap = mss.alpha_star <= min_alpha + thresholds.positive_alpha_window;
    let large = mss.h_at >= curve.n.saturating_sub(thresholds.positive_h_margin) as f64;
    if cheap && large {
        RandomnessLabel::PositiveSenseCandidate
    } else if mss.alpha_star >= k_x.saturating_sub(thresholds.negative_k_margin) {
        RandomnessLabel::NegativeSenseCandidate
    } else {
        RandomnessLabel::Structured
    }
}

pub fn randomness_report(
    x: &BitString,
    n: usize,
    slack: usize,
    options: &StructureOptions,
    thresholds: &LabelThresholds,
) -> Result<RandomnessReport> {
    let curve = structure_function(x, n, options)?;
    let k_x = exact_k_of(x, &options.search)?;
    let mss = match mss_from_curve(&curve, k_x, slack) {
        Ok(m) => Some(m),
        Err(Error::NoSufficientStatistic { .. }) => None,
        Err(e) => return Err(e),
    };
    let label = classify(&curve, k_x, mss.as_ref(), thresholds);
    Ok(RandomnessReport {
        k_x,
        alpha_star: mss.map(|m| m.alpha_star),
        h_at: mss.map(|m| m.h_at),
        label,
        thresholds: *thresholds,
        curve,
    })
}
