use std::fmt::Write as _;
use std::path::Path;

use ait_core::complexity::{
    algorithmic_probability, complexity_table, conditional_kolmogorov, enumerate_halting, kolmogorov, kraft_sum,
    literal_bound, load_table, mutual_information, save_table, table_kraft_sum, ComplexityIndex,
    ComplexityReport, ProgramTable, SearchConfig,
};
use ait_core::estimator::{compare_information, k_upper_bound, lz78_decode_bytes, lz78_encode_bytes, EstimateReport};
use ait_core::machines::MachineId;
use ait_core::rng::seeded_bytes;
use ait_core::shannon::{entropy as shannon_entropy, expected_length, kraft_check, prefix_free_check, shannon_fano, Distribution};
use ait_core::structure::{
    mss_from_curve, randomness_report, structure_function, two_part_code, LabelThresholds, ModelSet,
    MssReport, StructureCurve, StructureOptions,
};
use ait_core::{BitString, Dyadic};
use serde_json::{json, Value};

use crate::input::{io, parse_bits, read_stdin};
use crate::{CliError, Output, StructArg};

type Res = Result<Output, CliError>;

fn report_json(r: &ComplexityReport) -> Value {
    json!({
        "k": r.value_bits,
        "witness": r.witness.as_ref().map(|w| w.to_string()),
        "status": r.status.to_string(),
    })
}

fn report_tsv(r: &ComplexityReport) -> String {
    let k = r.value_bits.map_or("-".to_string(), |v| v.to_string());
    let w = r.witness.as_ref().map_or("-".to_string(), |w| w.to_string());
    format!("{k}\t{w}\t{}", r.status)
}

fn dyadic_json(d: &Dyadic) -> Value {
    json!({ "fraction": d.to_fraction_string(), "decimal": d.to_f64() })
}

pub fn k(machine: MachineId, x: &BitString, limit: Option<usize>, cfg: &SearchConfig, tsv: bool) -> Res {
    let limit = limit.unwrap_or_else(|| machine.literal_program_len(x));
    let r = kolmogorov(x, machine, limit, cfg)?;
    Ok(if tsv {
        Output::Text(report_tsv(&r) + "\n")
    } else {
        Output::Json(report_json(&r))
    })
}

pub fn ktable(machine: MachineId, n: usize, limit: Option<usize>, cfg: &SearchConfig, tsv: bool) -> Res {
    let limit = limit.unwrap_or_else(|| literal_bound(machine, n));
    let table = complexity_table(machine, n, limit, cfg)?;
    if tsv {
        let mut out = String::new();
        for (x, r) in &table {
            let _ = writeln!(out, "{x}\t{}", report_tsv(r));
        }
        return Ok(Output::Text(out));
    }
    let entries: Vec<Value> = table
        .iter()
        .map(|(x, r)| {
            let mut v = json!({ "x": x.to_string() });
            if let (Value::Object(dst), Value::Object(src)) = (&mut v, report_json(r)) {
                dst.extend(src);
            }
            v
        })
        .collect();
    Ok(Output::Json(json!({
        "machine": machine.name(),
        "n": n,
        "limit": limit,
        "entries": entries,
    })))
}

pub fn prob(machine: MachineId, x: &BitString, limit: usize, cfg: &SearchConfig, tsv: bool) -> Res {
    let p = algorithmic_probability(x, machine, limit, cfg)?.partial_sum;
    Ok(if tsv {
        Output::Text(format!("{}\t{}\n", p.to_fraction_string(), p.to_f64()))
    } else {
        Output::Json(json!({
            "x": x.to_string(),
            "limit": limit,
            "probability": p.to_fraction_string(),
            "decimal": p.to_f64(),
            "neg_log2": -p.log2(),
        }))
    })
}

pub fn kraft(machine: MachineId, limit: usize, cfg: &SearchConfig, tsv: bool) -> Res {
    let s = kraft_sum(machine, limit, cfg)?.partial_sum;
    Ok(if tsv {
        Output::Text(format!("{}\t{}\n", s.to_fraction_string(), s.to_f64()))
    } else {
        Output::Json(json!({
            "machine": machine.name(),
            "limit": limit,
            "sum": s.to_fraction_string(),
            "decimal": s.to_f64(),
        }))
    })
}

fn cond_limit(x: &BitString, limit: Option<usize>) -> usize {
    limit.unwrap_or_else(|| MachineId::Acond.literal_program_len(x))
}

pub fn cond(x: &BitString, given: &str, limit: Option<usize>, cfg: &SearchConfig, tsv: bool) -> Res {
    let y = parse_bits(given, false)?;
    let r = conditional_kolmogorov(x, &y, cond_limit(x, limit), cfg)?;
    Ok(if tsv {
        Output::Text(report_tsv(&r) + "\n")
    } else {
        Output::Json(report_json(&r))
    })
}

pub fn info(x: &BitString, given: &str, limit: Option<usize>, cfg: &SearchConfig, tsv: bool) -> Res {
    let y = parse_bits(given, false)?;
    let r = mutual_information(&y, x, cond_limit(x, limit), cfg)?;
    Ok(if tsv {
        let i = r.information.map_or("-".to_string(), |v| v.to_string());
        Output::Text(format!("{}\t{}\t{i}\n", report_tsv(&r.k_x), report_tsv(&r.k_x_given_y)))
    } else {
        Output::Json(json!({
            "k_x": report_json(&r.k_x),
            "k_x_given_y": report_json(&r.k_x_given_y),
            "information": r.information,
        }))
    })
}

pub fn entropy(dist: &Path, tsv: bool) -> Res {
    let d = Distribution::load_csv(dist)?;
    let h = shannon_entropy(&d).bits();
    Ok(if tsv {
        Output::Text(format!("{h}\n"))
    } else {
        Output::Json(json!({ "entropy_bits": h }))
    })
}

pub fn sfcode(dist: &Path, tsv: bool) -> Res {
    let d = Distribution::load_csv(dist)?;
    let code = shannon_fano(&d)?;
    if tsv {
        let mut out = String::new();
        for (symbol, word) in code.entries() {
            let _ = writeln!(out, "{symbol}\t{word}");
        }
        return Ok(Output::Text(out));
    }
    let kraft = kraft_check(&code);
    let prefix = prefix_free_check(&code);
    let codewords: Vec<Value> = code
        .entries()
        .iter()
        .zip(d.entries())
        .map(|((symbol, word), (_, p))| {
            json!({
                "symbol": symbol,
                "probability": p.to_string(),
                "length": word.len(),
                "codeword": word.to_string(),
            })
        })
        .collect();
    Ok(Output::Json(json!({
        "codewords": codewords,
        "entropy_bits": shannon_entropy(&d).bits(),
        "expected_length": expected_length(&code, &d)?,
        "kraft_sum": dyadic_json(&kraft.sum),
        "kraft_satisfied": kraft.satisfied,
        "prefix_free": prefix.prefix_free,
        "violation": prefix.violation.map(|(a, b)| [a.to_string(), b.to_string()]),
    })))
}

fn structure_inputs(s: &StructArg, cfg: &SearchConfig) -> Result<(BitString, usize, StructureOptions), CliError> {
    let x = s.x.read()?;
    let n = s.n.unwrap_or(x.len());
    let options = StructureOptions {
        limit: s.limit,
        allow_bounded: s.bounded,
        search: *cfg,
    };
    Ok((x, n, options))
}

fn curve_json(c: &StructureCurve) -> Value {
    let points: Vec<Value> = c
        .points
        .iter()
        .map(|p| {
            json!({
                "alpha": p.alpha,
                "h": p.h,
                "bitmap": p.witness.map(|w| w.bitmap_encode().to_string()),
                "exact": p.exact,
            })
        })
        .collect();
    json!({
        "x": c.x.to_string(),
        "n": c.n,
        "alpha_max": c.alpha_max,
        "search_limit": c.search_limit,
        "exact": c.exact,
        "points": points,
    })
}

pub fn structfn(s: &StructArg, cfg: &SearchConfig, tsv: bool) -> Res {
    let (x, n, options) = structure_inputs(s, cfg)?;
    let curve = structure_function(&x, n, &options)?;
    Ok(if tsv {
        Output::Text(curve.to_tsv())
    } else {
        Output::Json(curve_json(&curve))
    })
}

fn mss_json(m: &MssReport) -> Value {
    json!({
        "alpha_star": m.alpha_star,
        "h_at": m.h_at,
        "set_size": m.set_size,
        "witness": m.witness.bitmap_encode().to_string(),
        "sophistication": m.sophistication,
        "k_x": m.k_x,
        "slack": m.slack_used,
    })
}

pub fn mss(s: &StructArg, slack: usize, cfg: &SearchConfig, tsv: bool) -> Res {
    let (x, n, options) = structure_inputs(s, cfg)?;
    let curve = structure_function(&x, n, &options)?;
    let k_x = kolmogorov(&x, MachineId::A, MachineId::A.literal_program_len(&x), cfg)?.exact_bits();
    let m = mss_from_curve(&curve, k_x, slack)?;
    Ok(if tsv {
        Output::Text(format!("{}\t{}\t{}\n", m.alpha_star, m.h_at, m.witness.bitmap_encode()))
    } else {
        Output::Json(mss_json(&m))
    })
}

pub fn randreport(s: &StructArg, slack: usize, t: [usize; 3], cfg: &SearchConfig, tsv: bool) -> Res {
    let (x, n, options) = structure_inputs(s, cfg)?;
    let thresholds = LabelThresholds {
        positive_alpha_window: t[0],
        positive_h_margin: t[1],
        negative_k_margin: t[2],
    };
    let r = randomness_report(&x, n, slack, &options, &thresholds)?;
    if tsv {
        let a = r.alpha_star.map_or("-".to_string(), |v| v.to_string());
        let mut out = format!("# k_x={} alpha_star={a} label={}\n", r.k_x, r.label);
        out.push_str(&r.curve.to_tsv());
        return Ok(Output::Text(out));
    }
    Ok(Output::Json(json!({
        "k_x": r.k_x,
        "alpha_star": r.alpha_star,
        "h_at": r.h_at,
        "label": r.label.to_string(),
        "thresholds": {
            "positive_alpha_window": thresholds.positive_alpha_window,
            "positive_h_margin": thresholds.positive_h_margin,
            "negative_k_margin": thresholds.negative_k_margin,
        },
        "curve": curve_json(&r.curve),
    })))
}

pub fn twopart(x: &BitString, set: &BitString, cfg: &SearchConfig, tsv: bool) -> Res {
    let s = ModelSet::from_bitmap(set)?;
    let r = two_part_code(x, &s, cfg)?;
    Ok(if tsv {
        Output::Text(format!("{}\t{}\t{}\t{}\n", r.model_bits, r.data_bits, r.total, r.index))
    } else {
        Output::Json(json!({
            "model_bits": r.model_bits,
            "data_bits": r.data_bits,
            "total": r.total,
            "index": r.index,
        }))
    })
}

fn write_or_stdout(bytes: Vec<u8>, out: Option<&Path>) -> Res {
    match out {
        Some(path) => {
            std::fs::write(path, &bytes).map_err(io)?;
            Ok(Output::Text(String::new()))
        }
        None => Ok(Output::Bytes(bytes)),
    }
}

pub fn lz_encode(x: &[u8], hex_out: bool, out: Option<&Path>) -> Res {
    let code = lz78_encode_bytes(x)?;
    let bytes = if hex_out { (hex::encode(code) + "\n").into_bytes() } else { code };
    write_or_stdout(bytes, out)
}

pub fn lz_decode(file: Option<&Path>, hex_in: bool, out: Option<&Path>) -> Res {
    let raw = match file {
        Some(p) if p.as_os_str() != "-" => std::fs::read(p).map_err(io)?,
        _ => read_stdin()?,
    };
    let code = if hex_in {
        let text: Vec<u8> = raw.into_iter().filter(|b| !b.is_ascii_whitespace()).collect();
        hex::decode(text).map_err(|e| CliError::Usage(format!("bad hex input: {e}")))?
    } else {
        raw
    };
    write_or_stdout(lz78_decode_bytes(&code)?, out)
}

fn estimate_json(r: &EstimateReport) -> Value {
    json!({
        "input_bytes": r.input_bytes,
        "encoded_bits": r.encoded_bits,
        "phrase_count": r.phrase_count,
        "upper_bound_bits": r.upper_bound_bits,
    })
}

fn estimate_tsv(r: &EstimateReport) -> String {
    format!("{}\t{}\t{}\t{}", r.input_bytes, r.encoded_bits, r.phrase_count, r.upper_bound_bits)
}

pub fn estimate(x: &[u8], c_dec: u64, tsv: bool) -> Res {
    let r = k_upper_bound(x, c_dec)?;
    Ok(if tsv {
        Output::Text(estimate_tsv(&r) + "\n")
    } else {
        Output::Json(estimate_json(&r))
    })
}

pub fn compare(x: &[u8], against: Option<&Path>, seed: u64, c_dec: u64, tsv: bool) -> Res {
    let y = match against {
        Some(p) => std::fs::read(p).map_err(io)?,
        None => seeded_bytes(seed, x.len()),
    };
    let c = compare_information(x, &y, c_dec)?;
    Ok(if tsv {
        Output::Text(format!(
            "{}\t{}\t{}\t{}\n",
            estimate_tsv(&c.bound_x),
            estimate_tsv(&c.bound_y),
            c.difference,
            c.ratio
        ))
    } else {
        Output::Json(json!({
            "bound_x": estimate_json(&c.bound_x),
            "bound_y": estimate_json(&c.bound_y),
            "difference": c.difference,
            "ratio": c.ratio,
        }))
    })
}

pub fn enumerate(
    machine: MachineId,
    given: Option<&str>,
    limit: Option<usize>,
    save: Option<&Path>,
    load: Option<&Path>,
    cfg: &SearchConfig,
    tsv: bool,
) -> Res {
    let table: ProgramTable = match load {
        Some(path) => {
            let t = load_table(path, &cfg.limits)?;
            if let Some(l) = limit {
                if l != t.limit() {
                    return Err(CliError::Usage(format!("cache holds limit {}, not {l}", t.limit())));
                }
            }
            t
        }
        None => {
            let aux = given.map(|g| parse_bits(g, false)).transpose()?;
            let limit = limit.expect("clap requires --limit without --load");
            enumerate_halting(machine, limit, aux.as_ref(), cfg)?
        }
    };
    if let Some(path) = save {
        save_table(&table, path)?;
    }
    if tsv {
        let mut out = String::new();
        for (p, o) in table.entries() {
            let _ = writeln!(out, "{p}\t{o}");
        }
        return Ok(Output::Text(out));
    }
    let distinct = ComplexityIndex::from_table(&table).iter().count();
    let entries: Vec<[String; 2]> = table
        .entries()
        .iter()
        .map(|(p, o)| [p.to_string(), o.to_string()])
        .collect();
    Ok(Output::Json(json!({
        "machine": table.machine().name(),
        "aux": table.aux().map(|a| a.to_string()),
        "limit": table.limit(),
        "halting_programs": table.len(),
        "distinct_outputs": distinct,
        "kraft_sum": dyadic_json(&table_kraft_sum(&table).partial_sum),
        "entries": entries,
    })))
}
