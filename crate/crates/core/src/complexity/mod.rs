//! Kolmogorov complexity and universal probability by exhaustive search.
//!
//! All quantities are relative to one of the reference machines and a
//! search limit `L`. Because the machines are total, enumerating every
//! program of length at most `L` decides the question completely: a report
//! with no witness certifies `K > L`, not merely that the search gave up.
//!
//! Probabilities are exact [`Dyadic`] partial sums over the enumerated
//! programs. They are non-decreasing in `L` and bounded by the Kraft sum.

mod cache;
mod enumerate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::bits::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::machines::{Machine, MachineId};

pub use cache::{load_table, read_table, save_table, write_table};
pub use enumerate::{enumerate_halting, ProgramTable, SearchConfig, DEFAULT_WORK_BUDGET};

pub(crate) use enumerate::enumerate_machine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// Every shorter program was checked; the value is the true minimum.
    Exact,
    /// A program of this length is known, shorter ones were not ruled out.
    UpperBound,
    /// No program of length at most this many bits produces the target.
    NoProgramWithin(usize),
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Exact => f.write_str("Exact"),
            Status::UpperBound => f.write_str("UpperBound"),
            Status::NoProgramWithin(_) => f.write_str("NoProgramWithin"),
        }
    }
}

impl Serialize for Status {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplexityReport {
    /// Witness length in bits; `None` exactly when no witness was found.
    pub value_bits: Option<usize>,
    pub witness: Option<BitString>,
    pub status: Status,
    pub search_limit: usize,
}

impl ComplexityReport {
    fn exact(witness: BitString, search_limit: usize) -> Self {
        ComplexityReport {
            value_bits: Some(witness.len()),
            witness: Some(witness),
            status: Status::Exact,
            search_limit,
        }
    }

    fn missing(search_limit: usize) -> Self {
        ComplexityReport {
            value_bits: None,
            witness: None,
            status: Status::NoProgramWithin(search_limit),
            search_limit,
        }
    }

    pub fn upper_bound(witness: BitString, search_limit: usize) -> Self {
        ComplexityReport {
            value_bits: Some(witness.len()),
            witness: Some(witness),
            status: Status::UpperBound,
            search_limit,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.status == Status::Exact
    }

    /// The value, panicking unless the report is exact.
    pub fn exact_bits(&self) -> usize {
        assert!(self.is_exact(), "expected an exact report, got {:?}", self.status);
        self.value_bits.expect("exact reports carry a value")
    }
}

/// Shortest program per output, built from one [`ProgramTable`].
///
/// Tables are in shortlex order, so the first program seen for an output
/// is the (length, lexicographic) minimal witness.
#[derive(Debug, Clone)]
pub struct ComplexityIndex {
    limit: usize,
    shortest: HashMap<BitString, BitString>,
}

impl ComplexityIndex {
    pub fn from_table(table: &ProgramTable) -> Self {
        let mut shortest = HashMap::new();
        for (program, output) in table.entries() {
            shortest.entry(output.clone()).or_insert_with(|| program.clone());
        }
        ComplexityIndex {
            limit: table.limit(),
            shortest,
        }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn report(&self, x: &BitString) -> ComplexityReport {
        match self.shortest.get(x) {
            Some(p) => ComplexityReport::exact(p.clone(), self.limit),
            None => ComplexityReport::missing(self.limit),
        }
    }

    pub fn k(&self, x: &BitString) -> Option<usize> {
        self.shortest.get(x).map(BitString::len)
    }

    /// Every distinct output with its minimal witness.
    pub fn iter(&self) -> impl Iterator<Item = (&BitString, &BitString)> {
        self.shortest.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbabilityAccumulator {
    pub partial_sum: Dyadic,
    pub limit: usize,
}

fn require_plain(machine: MachineId) -> Result<Machine> {
    if machine.accepts_aux() {
        return Err(Error::InvalidArgument(
            "use the conditional operations for machine Acond".into(),
        ));
    }
    Machine::plain(machine)
}

fn shortest_on(machine: &Machine, x: &BitString, limit: usize, config: &SearchConfig) -> Result<ComplexityReport> {
    let table = enumerate_machine(machine, limit, config)?;
    Ok(table
        .entries()
        .iter()
        .find(|(_, out)| out == x)
        .map(|(p, _)| ComplexityReport::exact(p.clone(), limit))
        .unwrap_or_else(|| ComplexityReport::missing(limit)))
}

/// K_M(x) on machine A or B, searching programs up to `limit` bits.
pub fn kolmogorov(
    x: &BitString,
    machine: MachineId,
    limit: usize,
    config: &SearchConfig,
) -> Result<ComplexityReport> {
    shortest_on(&require_plain(machine)?, x, limit, config)
}

/// Like [`kolmogorov`], but falls back to the literal program as an
/// upper bound when nothing is found within `limit`.
pub fn kolmogorov_or_literal(
    x: &BitString,
    machine: MachineId,
    limit: usize,
    config: &SearchConfig,
) -> Result<ComplexityReport> {
    let report = kolmogorov(x, machine, limit, config)?;
    Ok(if report.witness.is_some() {
        report
    } else {
        ComplexityReport::upper_bound(literal_program(machine, x), limit)
    })
}

/// The program that emits `x` one bit at a time and halts.
pub fn literal_program(machine: MachineId, x: &BitString) -> BitString {
    use crate::machines::Instruction;
    let table = machine.table();
    let word = |i: Instruction| {
        table
            .codewords()
            .iter()
            .find(|c| c.instruction == Some(i))
            .map(|c| c.bits())
            .expect("every machine has OUT and HALT")
    };
    let (zero, one, halt) = (word(Instruction::Out0), word(Instruction::Out1), word(Instruction::Halt));
    let mut p = BitString::new();
    for bit in x.iter() {
        p.extend_from(if bit { &one } else { &zero });
    }
    p.extend_from(&halt);
    p
}

fn probability_of(table: &ProgramTable, x: &BitString) -> ProbabilityAccumulator {
    let partial_sum = table
        .entries()
        .iter()
        .filter(|(_, out)| out == x)
        .map(|(p, _)| Dyadic::pow2_neg(p.len() as u32))
        .sum();
    ProbabilityAccumulator {
        partial_sum,
        limit: table.limit(),
    }
}

/// Σ 2^-|p| over halting programs `p` with `|p| <= limit` and `M(p) = x`.
pub fn algorithmic_probability(
    x: &BitString,
    machine: MachineId,
    limit: usize,
    config: &SearchConfig,
) -> Result<ProbabilityAccumulator> {
    let table = enumerate_machine(&require_plain(machine)?, limit, config)?;
    Ok(probability_of(&table, x))
}

/// Σ 2^-|p| over every halting program with `|p| <= limit`.
pub fn kraft_sum(machine: MachineId, limit: usize, config: &SearchConfig) -> Result<ProbabilityAccumulator> {
    let table = enumerate_machine(&require_plain(machine)?, limit, config)?;
    Ok(table_kraft_sum(&table))
}

pub fn table_kraft_sum(table: &ProgramTable) -> ProbabilityAccumulator {
    ProbabilityAccumulator {
        partial_sum: table
            .entries()
            .iter()
            .map(|(p, _)| Dyadic::pow2_neg(p.len() as u32))
            .sum(),
        limit: table.limit(),
    }
}

/// K(x/y): shortest Acond program printing `x` with `y` as auxiliary input.
pub fn conditional_kolmogorov(
    x: &BitString,
    y: &BitString,
    limit: usize,
    config: &SearchConfig,
) -> Result<ComplexityReport> {
    shortest_on(&Machine::conditional(y), x, limit, config)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoReport {
    /// K(x/ε) on Acond.
    pub k_x: ComplexityReport,
    pub k_x_given_y: ComplexityReport,
    /// `k_x - k_x_given_y`, when both searches found a witness.
    pub information: Option<i64>,
}

/// I(y:x) = K(x) - K(x/y), with both terms measured on Acond.
pub fn mutual_information(
    y: &BitString,
    x: &BitString,
    limit: usize,
    config: &SearchConfig,
) -> Result<InfoReport> {
    let k_x = conditional_kolmogorov(x, &BitString::new(), limit, config)?;
    let k_x_given_y = conditional_kolmogorov(x, y, limit, config)?;
    let information = match (k_x.value_bits, k_x_given_y.value_bits) {
        (Some(a), Some(b)) => Some(a as i64 - b as i64),
        _ => None,
    };
    Ok(InfoReport {
        k_x,
        k_x_given_y,
        information,
    })
}

/// K for every `n`-bit string from a single enumeration to `limit`.
pub fn complexity_table(
    machine: MachineId,
    n: usize,
    limit: usize,
    config: &SearchConfig,
) -> Result<BTreeMap<BitString, ComplexityReport>> {
    if n >= 32 {
        return Err(Error::Scale(format!("refusing to tabulate 2^{n} strings")));
    }
    let table = enumerate_machine(&require_plain(machine)?, limit, config)?;
    let index = ComplexityIndex::from_table(&table);
    Ok(BitString::all_of_length(n).map(|x| {
        let r = index.report(&x);
        (x, r)
    }).collect())
}

/// Longest literal program over all `n`-bit strings; a limit at least this
/// large makes every entry of `complexity_table` exact.
pub fn literal_bound(machine: MachineId, n: usize) -> usize {
    let all_ones = BitString::from_bits(vec![true; n]);
    let all_zeros = BitString::from_bits(vec![false; n]);
    machine
        .literal_program_len(&all_ones)
        .max(machine.literal_program_len(&all_zeros))
}

/// |{x ∈ {0,1}^n : K(x) < m}| from an exact table.
pub fn count_compressible_in(table: &BTreeMap<BitString, ComplexityReport>, m: usize) -> Result<u64> {
    let mut count = 0;
    for (x, report) in table {
        if !report.is_exact() {
            return Err(Error::InvalidArgument(format!(
                "complexity of {x} is not exact at limit {}",
                report.search_limit
            )));
        }
        if report.exact_bits() < m {
            count += 1;
        }
    }
    Ok(count)
}

pub fn count_compressible(machine: MachineId, m: usize, n: usize, config: &SearchConfig) -> Result<u64> {
    let table = complexity_table(machine, n, literal_bound(machine, n), config)?;
    count_compressible_in(&table, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn kolmogorov_examples() {
        let r = kolmogorov(&bs(""), MachineId::A, 4, &cfg()).unwrap();
        assert_eq!((r.value_bits, r.witness.clone(), r.status), (Some(2), Some(bs("00")), Status::Exact));
        let r = kolmogorov(&bs("1"), MachineId::A, 8, &cfg()).unwrap();
        assert_eq!((r.exact_bits(), r.witness.unwrap()), (4, bs("1000")));
        let r = kolmogorov(&bs("1010"), MachineId::A, 12, &cfg()).unwrap();
        assert_eq!((r.exact_bits(), r.witness.unwrap()), (8, bs("10011100")));
        let r = kolmogorov(&bs("10101010"), MachineId::A, 18, &cfg()).unwrap();
        assert_eq!((r.exact_bits(), r.witness.unwrap()), (10, bs("1001111100")));
    }

    #[test]
    fn missing_and_anytime() {
        let r = kolmogorov(&bs("1010"), MachineId::A, 7, &cfg()).unwrap();
        assert_eq!(r.status, Status::NoProgramWithin(7));
        assert!(r.witness.is_none() && r.value_bits.is_none());
        let r = kolmogorov_or_literal(&bs("1010"), MachineId::A, 7, &cfg()).unwrap();
        assert_eq!(r.status, Status::UpperBound);
        assert_eq!(r.witness, Some(bs("1001100100")));
        assert!(kolmogorov(&bs("1"), MachineId::Acond, 8, &cfg()).is_err());
    }

    #[test]
    fn probability_examples() {
        let p = algorithmic_probability(&bs(""), MachineId::A, 4, &cfg()).unwrap();
        assert_eq!(p.partial_sum, Dyadic::new(5u32, 4));
        let p = algorithmic_probability(&bs("1"), MachineId::A, 2, &cfg()).unwrap();
        assert!(p.partial_sum.is_zero());
    }

    #[test]
    fn kraft_examples() {
        assert_eq!(kraft_sum(MachineId::A, 4, &cfg()).unwrap().partial_sum, Dyadic::new(7u32, 4));
        assert_eq!(kraft_sum(MachineId::A, 2, &cfg()).unwrap().partial_sum, Dyadic::pow2_neg(2));
        assert_eq!(kraft_sum(MachineId::B, 1, &cfg()).unwrap().partial_sum, Dyadic::pow2_neg(1));
    }

    #[test]
    fn conditional_examples() {
        let r = conditional_kolmogorov(&bs(""), &bs("1011"), 6, &cfg()).unwrap();
        assert_eq!((r.exact_bits(), r.witness.unwrap()), (3, bs("000")));
        let r = conditional_kolmogorov(&bs("111"), &bs("111"), 9, &cfg()).unwrap();
        assert_eq!((r.exact_bits(), r.witness.unwrap()), (6, bs("100000")));
        let r = conditional_kolmogorov(&bs("111"), &bs(""), 15, &cfg()).unwrap();
        assert_eq!(r.exact_bits(), 12);
    }

    #[test]
    fn information_examples() {
        let i = mutual_information(&bs("111"), &bs("111"), 15, &cfg()).unwrap();
        assert_eq!(i.k_x.exact_bits(), 12);
        assert_eq!(i.k_x_given_y.exact_bits(), 6);
        assert_eq!(i.information, Some(6));
        for x in ["", "0", "1101"] {
            let i = mutual_information(&bs(""), &bs(x), 15, &cfg()).unwrap();
            assert_eq!(i.information, Some(0));
        }
        let i = mutual_information(&bs("0110"), &bs(""), 6, &cfg()).unwrap();
        assert_eq!((i.k_x.exact_bits(), i.k_x_given_y.exact_bits(), i.information), (3, 3, Some(0)));
    }

    #[test]
    fn table_examples() {
        let t = complexity_table(MachineId::A, 2, 8, &cfg()).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.values().all(|r| r.exact_bits() == 6));
        let t = complexity_table(MachineId::A, 1, 4, &cfg()).unwrap();
        assert_eq!(t[&bs("0")].exact_bits(), 4);
        assert_eq!(t[&bs("1")].exact_bits(), 4);
        let t = complexity_table(MachineId::A, 0, 2, &cfg()).unwrap();
        assert_eq!(t[&bs("")].exact_bits(), 2);
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_compressible(MachineId::A, 6, 2, &cfg()).unwrap(), 0);
        assert_eq!(count_compressible(MachineId::A, 7, 2, &cfg()).unwrap(), 4);
        assert_eq!(count_compressible(MachineId::A, 1, 0, &cfg()).unwrap(), 0);
        let partial = complexity_table(MachineId::A, 3, 6, &cfg()).unwrap();
        assert!(count_compressible_in(&partial, 4).is_err());
    }

    #[test]
    fn literal_programs_run() {
        for m in [MachineId::A, MachineId::B] {
            for x in BitString::all_up_to(5) {
                let p = literal_program(m, &x);
                assert_eq!(p.len(), m.literal_program_len(&x));
                let out = Machine::plain(m).unwrap().run(&p, &Default::default());
                assert_eq!(out.output(), Some(&x));
            }
        }
        assert_eq!(literal_bound(MachineId::B, 6), 19);
        assert_eq!(literal_bound(MachineId::A, 8), 18);
    }
}
