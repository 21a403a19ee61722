use std::io::Read;
use std::path::PathBuf;

use ait_core::corpus::english_sample;
use ait_core::rng::seeded_bytes;
use ait_core::BitString;
use clap::{Args, ValueEnum};

use crate::CliError;

/// A bit string given inline, read from a file, or as hex.
#[derive(Debug, Args)]
pub struct BitsArg {
    /// Bits as '0'/'1' text (may be empty)
    #[arg(long, conflicts_with = "file")]
    pub string: Option<String>,
    /// File holding '0'/'1' text; surrounding whitespace is ignored
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Read --string or --file as hexadecimal, four bits per digit
    #[arg(long)]
    pub hex: bool,
}

pub fn parse_bits(text: &str, hex: bool) -> Result<BitString, CliError> {
    let text = text.trim();
    if !hex {
        return text.parse().map_err(CliError::Core);
    }
    let mut out = BitString::new();
    for c in text.chars() {
        let digit = c
            .to_digit(16)
            .ok_or_else(|| CliError::Usage(format!("'{c}' is not a hex digit")))?;
        out.push_uint(digit as u64, 4);
    }
    Ok(out)
}

impl BitsArg {
    pub fn read(&self) -> Result<BitString, CliError> {
        match (&self.string, &self.file) {
            (Some(s), _) => parse_bits(s, self.hex),
            (None, Some(path)) => parse_bits(&std::fs::read_to_string(path).map_err(io)?, self.hex),
            (None, None) => Err(CliError::Usage("one of --string or --file is required".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Sample {
    English,
}

/// Raw bytes from a path, inline text, a bundled sample, seeded noise, or stdin.
#[derive(Debug, Args)]
pub struct BytesArg {
    /// Input file; '-' or no source at all reads standard input
    #[arg(long, group = "source")]
    pub file: Option<PathBuf>,
    /// Inline text (UTF-8 bytes, or hex with --hex)
    #[arg(long, group = "source")]
    pub string: Option<String>,
    /// Bundled corpus
    #[arg(long, value_enum, group = "source")]
    pub sample: Option<Sample>,
    /// This many seeded uniform random bytes (see --seed)
    #[arg(long, group = "source")]
    pub random: Option<usize>,
    /// Treat --string, --file or standard input as hexadecimal text
    #[arg(long)]
    pub hex: bool,
}

pub fn io(e: std::io::Error) -> CliError {
    CliError::Core(e.into())
}

fn unhex(raw: &[u8]) -> Result<Vec<u8>, CliError> {
    let text: Vec<u8> = raw.iter().copied().filter(|b| !b.is_ascii_whitespace()).collect();
    hex::decode(text).map_err(|e| CliError::Usage(format!("bad hex input: {e}")))
}

pub fn read_stdin() -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    std::io::stdin().read_to_end(&mut buf).map_err(io)?;
    Ok(buf)
}

impl BytesArg {
    pub fn read(&self, seed: u64) -> Result<Vec<u8>, CliError> {
        if let Some(Sample::English) = self.sample {
            return Ok(english_sample().to_vec());
        }
        if let Some(n) = self.random {
            return Ok(seeded_bytes(seed, n));
        }
        let raw = match (&self.string, &self.file) {
            (Some(s), _) => s.as_bytes().to_vec(),
            (None, Some(p)) if p.as_os_str() != "-" => std::fs::read(p).map_err(io)?,
            _ => read_stdin()?,
        };
        if self.hex {
            unhex(&raw)
        } else {
            Ok(raw)
        }
    }
}
