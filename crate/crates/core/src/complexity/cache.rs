//! Text cache for program tables.
//!
//! ```text
//! machine=A limit=4 aux=-
//! 00<TAB>
//! 0100<TAB>0
//! ```
//!
//! One `program<TAB>output` line per entry in shortlex program order. `aux`
//! is `-` for machines without auxiliary input, otherwise its bits (empty
//! for ε). Loading re-runs every hundredth entry, starting with the first,
//! and rejects the file if any sampled program disagrees.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::machines::{Machine, MachineId, StepLimits};

use super::ProgramTable;

const SAMPLE_STRIDE: usize = 100;

pub fn write_table<W: Write>(table: &ProgramTable, mut out: W) -> Result<()> {
    let aux = match table.aux() {
        Some(a) => a.to_string(),
        None => "-".to_string(),
    };
    writeln!(out, "machine={} limit={} aux={}", table.machine(), table.limit(), aux)?;
    for (program, output) in table.entries() {
        writeln!(out, "{program}\t{output}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_table(table: &ProgramTable, path: impl AsRef<Path>) -> Result<()> {
    write_table(table, BufWriter::new(File::create(path)?))
}

fn header_field<'a>(field: Option<&'a str>, key: &str) -> Result<&'a str> {
    field
        .and_then(|f| f.strip_prefix(key))
        .and_then(|f| f.strip_prefix('='))
        .ok_or_else(|| Error::Cache(format!("header is missing {key}=")))
}

fn parse_bits(s: &str, line: usize) -> Result<BitString> {
    s.parse()
        .map_err(|e| Error::Cache(format!("line {line}: {e}")))
}

pub fn read_table<R: Read>(input: R, limits: &StepLimits) -> Result<ProgramTable> {
    let mut lines = BufReader::new(input).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Cache("empty file".into()))??;
    let mut fields = header.split(' ');
    let machine: MachineId = header_field(fields.next(), "machine")?
        .parse()
        .map_err(|_| Error::Cache(format!("bad machine in header {header:?}")))?;
    let limit: usize = header_field(fields.next(), "limit")?
        .parse()
        .map_err(|_| Error::Cache(format!("bad limit in header {header:?}")))?;
    let aux = match header_field(fields.next(), "aux")? {
        "-" => None,
        bits => Some(parse_bits(bits, 1)?),
    };
    if fields.next().is_some() {
        return Err(Error::Cache(format!("unexpected header fields in {header:?}")));
    }
    let machine_instance = Machine::new(machine, aux.as_ref())
        .map_err(|e| Error::Cache(e.to_string()))?;

    let mut entries: Vec<(BitString, BitString)> = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        let (p, o) = line
            .split_once('\t')
            .ok_or_else(|| Error::Cache(format!("line {lineno}: expected program<TAB>output")))?;
        let program = parse_bits(p, lineno)?;
        let output = parse_bits(o, lineno)?;
        if program.len() > limit {
            return Err(Error::Cache(format!("line {lineno}: program longer than limit {limit}")));
        }
        if let Some((prev, _)) = entries.last() {
            if prev >= &program {
                return Err(Error::Cache(format!("line {lineno}: entries out of order")));
            }
        }
        entries.push((program, output));
    }

    for (program, output) in entries.iter().step_by(SAMPLE_STRIDE) {
        let outcome = machine_instance.run(program, limits);
        if outcome.output() != Some(output) {
            return Err(Error::Cache(format!(
                "sampled program {program} does not reproduce output {output:?}"
            )));
        }
    }

    Ok(ProgramTable {
        machine,
        aux,
        limit,
        entries,
        cap_exceeded: 0,
    })
}

pub fn load_table(path: impl AsRef<Path>, limits: &StepLimits) -> Result<ProgramTable> {
    read_table(File::open(path)?, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::complexity::{enumerate_halting, SearchConfig};

    fn text(table: &ProgramTable) -> String {
        let mut buf = Vec::new();
        write_table(table, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn format_is_exact() {
        let t = enumerate_halting(MachineId::A, 4, None, &SearchConfig::default()).unwrap();
        assert_eq!(text(&t), "machine=A limit=4 aux=-\n00\t\n0100\t0\n1000\t1\n1100\t\n");
        let t = enumerate_halting(MachineId::Acond, 3, Some(&bs("")), &SearchConfig::default()).unwrap();
        assert_eq!(text(&t), "machine=Acond limit=3 aux=\n000\t\n");
    }

    #[test]
    fn roundtrip() {
        for (m, aux) in [(MachineId::A, None), (MachineId::B, None), (MachineId::Acond, Some(bs("10")))] {
            let t = enumerate_halting(m, 12, aux.as_ref(), &SearchConfig::default()).unwrap();
            let loaded = read_table(text(&t).as_bytes(), &StepLimits::default()).unwrap();
            assert_eq!(loaded, t);
        }
    }

    #[test]
    fn rejects_tampering() {
        let limits = StepLimits::default();
        // first entry is always sampled
        assert!(read_table("machine=A limit=4 aux=-\n00\t1\n".as_bytes(), &limits).is_err());
        assert!(read_table("machine=A limit=4 aux=-\n0100\t0\n00\t\n".as_bytes(), &limits).is_err());
        assert!(read_table("machine=A limit=2 aux=-\n0100\t0\n".as_bytes(), &limits).is_err());
        assert!(read_table("machine=Q limit=2 aux=-\n".as_bytes(), &limits).is_err());
        assert!(read_table("machine=A limit=2 aux=1\n".as_bytes(), &limits).is_err());
        assert!(read_table("machine=A limit=2\n".as_bytes(), &limits).is_err());
        assert!(read_table("".as_bytes(), &limits).is_err());
    }
}
