//! Bit-exact interpreters for the three reference prefix machines.
//!
//! Each machine reads its program left to right, one codeword at a time,
//! and only ever appends to its output. There are no jumps, so every
//! program terminates after at most `|p| / shortest codeword` instructions.
//! A program is exactly the bits consumed up to and including the final
//! `HALT`, which makes each machine's halting domain prefix-free.
//!
//! | codeword | A      | B      | Acond  |
//! |----------|--------|--------|--------|
//! | HALT     | `00`   | `0`    | `000`  |
//! | OUT0     | `01`   | `10`   | `001`  |
//! | OUT1     | `10`   | `110`  | `010`  |
//! | DBL      | `11`   | `111`  | `011`  |
//! | CPYALL   |        |        | `100`  |
//! | CPY1     |        |        | `101`  |
//!
//! Acond's `110` and `111` are invalid and reject the program.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::bits::BitString;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MachineId {
    A,
    B,
    Acond,
}

impl MachineId {
    pub const ALL: [MachineId; 3] = [MachineId::A, MachineId::B, MachineId::Acond];

    pub fn name(self) -> &'static str {
        match self {
            MachineId::A => "A",
            MachineId::B => "B",
            MachineId::Acond => "Acond",
        }
    }

    pub fn table(self) -> &'static OpcodeTable {
        match self {
            MachineId::A => &TABLE_A,
            MachineId::B => &TABLE_B,
            MachineId::Acond => &TABLE_ACOND,
        }
    }

    pub fn accepts_aux(self) -> bool {
        self == MachineId::Acond
    }

    /// Length of the shortest program that prints `x` verbatim, one OUT
    /// instruction per bit followed by HALT. An upper bound on K(x).
    pub fn literal_program_len(self, x: &BitString) -> usize {
        let table = self.table();
        let out0 = table.codeword_len(Instruction::Out0);
        let out1 = table.codeword_len(Instruction::Out1);
        let ones = x.count_ones();
        ones * out1 + (x.len() - ones) * out0 + table.codeword_len(Instruction::Halt)
    }
}

impl fmt::Display for MachineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MachineId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(MachineId::A),
            "B" | "b" => Ok(MachineId::B),
            "Acond" | "acond" | "ACOND" => Ok(MachineId::Acond),
            other => Err(Error::InvalidArgument(format!(
                "unknown machine {other:?}; expected A, B or Acond"
            ))),
        }
    }
}

impl Serialize for MachineId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instruction {
    Halt,
    Out0,
    Out1,
    Dbl,
    CpyAll,
    Cpy1,
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Instruction::Halt => "HALT",
            Instruction::Out0 => "OUT0",
            Instruction::Out1 => "OUT1",
            Instruction::Dbl => "DBL",
            Instruction::CpyAll => "CPYALL",
            Instruction::Cpy1 => "CPY1",
        })
    }
}

/// One row of an opcode table. `instruction` is `None` for codewords that
/// decode to an invalid instruction.
#[derive(Debug, Clone, Copy)]
pub struct Codeword {
    pub code: u8,
    pub len: u8,
    pub instruction: Option<Instruction>,
}

impl Codeword {
    pub fn bits(&self) -> BitString {
        BitString::from_uint(self.code as u64, self.len as usize)
    }
}

#[derive(Debug)]
pub struct OpcodeTable {
    codewords: &'static [Codeword],
    max_len: u8,
    min_len: u8,
}

const fn cw(code: u8, len: u8, instruction: Option<Instruction>) -> Codeword {
    Codeword {
        code,
        len,
        instruction,
    }
}

static TABLE_A: OpcodeTable = OpcodeTable {
    codewords: &[
        cw(0b00, 2, Some(Instruction::Halt)),
        cw(0b01, 2, Some(Instruction::Out0)),
        cw(0b10, 2, Some(Instruction::Out1)),
        cw(0b11, 2, Some(Instruction::Dbl)),
    ],
    max_len: 2,
    min_len: 2,
};

static TABLE_B: OpcodeTable = OpcodeTable {
    codewords: &[
        cw(0b0, 1, Some(Instruction::Halt)),
        cw(0b10, 2, Some(Instruction::Out0)),
        cw(0b110, 3, Some(Instruction::Out1)),
        cw(0b111, 3, Some(Instruction::Dbl)),
    ],
    max_len: 3,
    min_len: 1,
};

static TABLE_ACOND: OpcodeTable = OpcodeTable {
    codewords: &[
        cw(0b000, 3, Some(Instruction::Halt)),
        cw(0b001, 3, Some(Instruction::Out0)),
        cw(0b010, 3, Some(Instruction::Out1)),
        cw(0b011, 3, Some(Instruction::Dbl)),
        cw(0b100, 3, Some(Instruction::CpyAll)),
        cw(0b101, 3, Some(Instruction::Cpy1)),
        cw(0b110, 3, None),
        cw(0b111, 3, None),
    ],
    max_len: 3,
    min_len: 3,
};

impl OpcodeTable {
    pub fn codewords(&self) -> &'static [Codeword] {
        self.codewords
    }

    pub fn shortest_codeword(&self) -> usize {
        self.min_len as usize
    }

    pub fn codeword_len(&self, instruction: Instruction) -> usize {
        self.codewords
            .iter()
            .find(|c| c.instruction == Some(instruction))
            .map(|c| c.len as usize)
            .unwrap_or_else(|| panic!("{instruction} is not in this table"))
    }

    fn lookup(&self, code: u8, len: u8) -> Option<&Codeword> {
        self.codewords.iter().find(|c| c.len == len && c.code == code)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeError {
    /// The remaining bits do not complete any codeword.
    OutOfBits,
    /// A complete codeword was read but it names no instruction.
    InvalidOpcode { cursor: usize },
}

/// Decodes the instruction starting at `cursor`, returning it with the
/// cursor just past its codeword.
pub fn decode_next(
    machine: MachineId,
    program: &BitString,
    cursor: usize,
) -> std::result::Result<(Instruction, usize), DecodeError> {
    let table = machine.table();
    let mut code = 0u8;
    for len in 1..=table.max_len {
        let bit = program
            .get(cursor + len as usize - 1)
            .ok_or(DecodeError::OutOfBits)?;
        code = (code << 1) | bit as u8;
        if let Some(entry) = table.lookup(code, len) {
            let next = cursor + len as usize;
            return entry
                .instruction
                .map(|i| (i, next))
                .ok_or(DecodeError::InvalidOpcode { cursor: next });
        }
    }
    unreachable!("opcode tables are complete prefix codes")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepLimits {
    pub max_output_bits: usize,
}

impl StepLimits {
    pub const DEFAULT_MAX_OUTPUT_BITS: usize = 1 << 20;

    pub fn new(max_output_bits: usize) -> Result<Self> {
        if max_output_bits == 0 {
            return Err(Error::InvalidArgument(
                "max_output_bits must be at least 1".into(),
            ));
        }
        Ok(StepLimits { max_output_bits })
    }
}

impl Default for StepLimits {
    fn default() -> Self {
        StepLimits {
            max_output_bits: Self::DEFAULT_MAX_OUTPUT_BITS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExecutionOutcome {
    /// HALT executed with every program bit consumed.
    HaltedExact { output: BitString, ops_executed: usize },
    /// HALT executed with bits left over; `bits_consumed < |p|`.
    HaltedEarly { bits_consumed: usize },
    /// The program ended before HALT, mid-codeword, on an invalid opcode,
    /// or a CPY1 read past the end of the auxiliary input.
    OutOfBits,
    OutputCapExceeded,
}

impl ExecutionOutcome {
    pub fn output(&self) -> Option<&BitString> {
        match self {
            ExecutionOutcome::HaltedExact { output, .. } => Some(output),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ExecutionOutcome::HaltedExact { .. })
    }
}

/// Why a non-HALT instruction could not be applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    AuxExhausted,
    CapExceeded,
}

/// A machine together with its auxiliary input (empty for A and B).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    id: MachineId,
    aux: BitString,
}

impl Machine {
    pub fn new(id: MachineId, aux: Option<&BitString>) -> Result<Self> {
        match (id.accepts_aux(), aux) {
            (true, Some(aux)) => Ok(Machine {
                id,
                aux: aux.clone(),
            }),
            (false, None) => Ok(Machine {
                id,
                aux: BitString::new(),
            }),
            (true, None) => Err(Error::InvalidArgument(format!(
                "machine {id} requires an auxiliary input"
            ))),
            (false, Some(_)) => Err(Error::InvalidArgument(format!(
                "machine {id} does not take an auxiliary input"
            ))),
        }
    }

    pub fn plain(id: MachineId) -> Result<Self> {
        Machine::new(id, None)
    }

    pub fn conditional(aux: &BitString) -> Self {
        Machine {
            id: MachineId::Acond,
            aux: aux.clone(),
        }
    }

    pub fn id(&self) -> MachineId {
        self.id
    }

    /// The auxiliary input, or `None` for machines that take none.
    pub fn aux(&self) -> Option<&BitString> {
        self.id.accepts_aux().then_some(&self.aux)
    }

    /// Applies one non-HALT instruction to the output.
    pub fn apply(
        &self,
        instruction: Instruction,
        output: &mut BitString,
        aux_cursor: &mut usize,
        limits: &StepLimits,
    ) -> std::result::Result<(), Fault> {
        let grown = match instruction {
            Instruction::Halt => return Ok(()),
            Instruction::Out0 | Instruction::Out1 | Instruction::Cpy1 => output.len() + 1,
            Instruction::Dbl => output.len() * 2,
            Instruction::CpyAll => output.len() + self.aux.len(),
        };
        if instruction == Instruction::Cpy1 && *aux_cursor >= self.aux.len() {
            return Err(Fault::AuxExhausted);
        }
        if grown > limits.max_output_bits {
            return Err(Fault::CapExceeded);
        }
        match instruction {
            Instruction::Out0 => output.push(false),
            Instruction::Out1 => output.push(true),
            Instruction::Dbl => output.double(),
            Instruction::CpyAll => output.extend_from(&self.aux),
            Instruction::Cpy1 => {
                output.push(self.aux.get(*aux_cursor).expect("checked above"));
                *aux_cursor += 1;
            }
            Instruction::Halt => {}
        }
        Ok(())
    }

    pub fn run(&self, program: &BitString, limits: &StepLimits) -> ExecutionOutcome {
        let mut cursor = 0;
        let mut aux_cursor = 0;
        let mut output = BitString::new();
        let mut ops = 0;
        loop {
            let (instruction, next) = match decode_next(self.id, program, cursor) {
                Ok(decoded) => decoded,
                Err(_) => return ExecutionOutcome::OutOfBits,
            };
            cursor = next;
            ops += 1;
            if instruction == Instruction::Halt {
                return if cursor == program.len() {
                    ExecutionOutcome::HaltedExact {
                        output,
                        ops_executed: ops,
                    }
                } else {
                    ExecutionOutcome::HaltedEarly {
                        bits_consumed: cursor,
                    }
                };
            }
            match self.apply(instruction, &mut output, &mut aux_cursor, limits) {
                Ok(()) => {}
                Err(Fault::AuxExhausted) => return ExecutionOutcome::OutOfBits,
                Err(Fault::CapExceeded) => return ExecutionOutcome::OutputCapExceeded,
            }
        }
    }
}

/// Runs `program` on `machine`. `aux` must be present exactly when the
/// machine is Acond.
pub fn run(
    machine: MachineId,
    program: &BitString,
    limits: &StepLimits,
    aux: Option<&BitString>,
) -> Result<ExecutionOutcome> {
    Ok(Machine::new(machine, aux)?.run(program, limits))
}

/// Domain membership: whether `candidate` is a halting program, together
/// with the outcome that decided it.
pub fn is_valid_program(
    machine: MachineId,
    candidate: &BitString,
    limits: &StepLimits,
    aux: Option<&BitString>,
) -> Result<(bool, ExecutionOutcome)> {
    let outcome = run(machine, candidate, limits, aux)?;
    Ok((outcome.is_exact(), outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    fn run_plain(m: MachineId, p: &str) -> ExecutionOutcome {
        run(m, &bs(p), &StepLimits::default(), None).unwrap()
    }

    #[test]
    fn run_examples() {
        assert_eq!(
            run_plain(MachineId::A, "1000"),
            ExecutionOutcome::HaltedExact {
                output: bs("1"),
                ops_executed: 2
            }
        );
        assert_eq!(run_plain(MachineId::A, "11"), ExecutionOutcome::OutOfBits);
        assert_eq!(
            run_plain(MachineId::A, "0011"),
            ExecutionOutcome::HaltedEarly { bits_consumed: 2 }
        );
        let out = run(
            MachineId::Acond,
            &bs("100000"),
            &StepLimits::default(),
            Some(&bs("101")),
        )
        .unwrap();
        assert_eq!(out.output(), Some(&bs("101")));
    }

    #[test]
    fn decode_examples() {
        assert_eq!(
            decode_next(MachineId::B, &bs("110010"), 0),
            Ok((Instruction::Out1, 3))
        );
        assert_eq!(
            decode_next(MachineId::A, &bs("01"), 0),
            Ok((Instruction::Out0, 2))
        );
        assert_eq!(
            decode_next(MachineId::B, &bs("11"), 0),
            Err(DecodeError::OutOfBits)
        );
        assert_eq!(
            decode_next(MachineId::Acond, &bs("111"), 0),
            Err(DecodeError::InvalidOpcode { cursor: 3 })
        );
        assert_eq!(
            decode_next(MachineId::A, &bs("0110"), 2),
            Ok((Instruction::Out1, 4))
        );
        assert_eq!(
            decode_next(MachineId::A, &bs("01"), 2),
            Err(DecodeError::OutOfBits)
        );
    }

    #[test]
    fn validity_examples() {
        let l = StepLimits::default();
        assert!(is_valid_program(MachineId::A, &bs("00"), &l, None).unwrap().0);
        let (ok, outcome) = is_valid_program(MachineId::A, &bs("0000"), &l, None).unwrap();
        assert!(!ok);
        assert_eq!(outcome, ExecutionOutcome::HaltedEarly { bits_consumed: 2 });
        let (ok, outcome) = is_valid_program(MachineId::B, &bs("0"), &l, None).unwrap();
        assert!(ok);
        assert_eq!(outcome.output(), Some(&BitString::new()));
    }

    #[test]
    fn aux_presence_is_checked() {
        let l = StepLimits::default();
        assert!(run(MachineId::Acond, &bs("000"), &l, None).is_err());
        assert!(run(MachineId::A, &bs("00"), &l, Some(&bs(""))).is_err());
        assert!(run(MachineId::Acond, &bs("000"), &l, Some(&bs(""))).is_ok());
    }

    #[test]
    fn conditional_copy_semantics() {
        let m = Machine::conditional(&bs("10"));
        let l = StepLimits::default();
        // CPY1 CPY1 HALT
        assert_eq!(m.run(&bs("101101000"), &l).output(), Some(&bs("10")));
        // CPY1 CPY1 CPY1 runs past the end of aux
        assert_eq!(m.run(&bs("101101101000"), &l), ExecutionOutcome::OutOfBits);
        // CPYALL CPY1 DBL HALT: "10" + "1" doubled
        assert_eq!(m.run(&bs("100101011000"), &l).output(), Some(&bs("101101")));
        // invalid opcode rejects the program
        assert_eq!(m.run(&bs("110000"), &l), ExecutionOutcome::OutOfBits);
    }

    #[test]
    fn output_cap() {
        let l = StepLimits::new(4).unwrap();
        // OUT1 DBL DBL HALT -> 4 bits, fits
        assert!(Machine::plain(MachineId::A).unwrap().run(&bs("10111100"), &l).is_exact());
        // one more DBL overflows
        assert_eq!(
            Machine::plain(MachineId::A).unwrap().run(&bs("1011111100"), &l),
            ExecutionOutcome::OutputCapExceeded
        );
        assert!(StepLimits::new(0).is_err());
    }

    #[test]
    fn tables_are_prefix_free() {
        for m in MachineId::ALL {
            let words: Vec<BitString> = m.table().codewords().iter().map(|c| c.bits()).collect();
            for (i, a) in words.iter().enumerate() {
                for (j, b) in words.iter().enumerate() {
                    if i != j {
                        assert!(!a.is_prefix_of(b), "{m}: {a} prefixes {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn literal_lengths() {
        assert_eq!(MachineId::A.literal_program_len(&bs("101")), 8);
        assert_eq!(MachineId::B.literal_program_len(&bs("101")), 9);
        assert_eq!(MachineId::Acond.literal_program_len(&bs("")), 3);
    }
}
