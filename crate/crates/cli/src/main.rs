use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cyclocorr::diffset::{orbit_with_group, Family};
use cyclocorr::{
    hall_primes, is_prime, multiplier_group, verify_family, BinarySequence, CorrelationSpectrum,
    FamilyDescriptor, FamilyVerification, SupportSet,
};
use rayon::prelude::*;
use serde_json::{json, Value};

/// Cyclotomic difference-set sequences: generation, correlation, multipliers, verification.
#[derive(Parser)]
#[command(name = "cyclocorr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the characteristic sequence of a family member or one of its conjugates.
    Generate {
        family: Family,
        q: u64,
        /// Conjugate index (0..2 for paley/twinprime, 0..6 for hall).
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Primitive root override (hall only).
        #[arg(long)]
        alpha: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Cross-correlation of two sequences, or autocorrelation of one.
    /// Arguments are 0/1 strings or paths to files holding one.
    Correlate {
        a: String,
        b: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Multiplier group and decimation orbit of a support set such as "N=15: 0,1,2,4,5,8,10".
    Multipliers {
        support: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check predicted spectra against direct computation for every admissible q in a range.
    Verify {
        family: Family,
        /// Inclusive range "a..b" (or a single q).
        range: Option<String>,
        #[arg(long = "range", value_name = "A..B", conflicts_with = "range")]
        range_flag: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<cyclocorr::Error> for Failure {
    fn from(e: cyclocorr::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate {
            family,
            q,
            index,
            alpha,
            format,
        } => generate(family, q, index, alpha, format),
        Command::Correlate { a, b, format } => correlate(&a, b.as_deref(), format),
        Command::Multipliers { support, format } => multipliers(&support, format),
        Command::Verify {
            family,
            range,
            range_flag,
            format,
        } => match range.or(range_flag) {
            Some(r) => verify(family, &r, format),
            None => Err(Failure::Usage("verify needs a range a..b".into())),
        },
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Mismatch(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn json_line(v: &Value) -> String {
    format!(
        "{}\n",
        serde_json::to_string_pretty(v).expect("json values serialize")
    )
}

fn list(xs: impl IntoIterator<Item = impl ToString>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn generate(
    family: Family,
    q: u64,
    index: usize,
    alpha: Option<u64>,
    format: Format,
) -> Result<String, Failure> {
    if alpha.is_some() && family != Family::Hall {
        return Err(Failure::Usage("--alpha only applies to hall".into()));
    }
    let desc = FamilyDescriptor::new(family, q, alpha)?;
    let conjugates = desc.conjugates();
    let support = conjugates.get(index).cloned().ok_or_else(|| {
        Failure::Usage(format!(
            "index {index} out of range; {family} has {} conjugates",
            conjugates.len()
        ))
    })?;
    let s = support.characteristic_sequence();
    let p = desc.parameters();
    let x = desc.hall_parameter().map(|x| x.x());
    Ok(match format {
        Format::Text => {
            let mut out = format!("{s}\nv={} k={} lambda={}\n", p.v, p.k, p.lambda);
            if let Some(x) = x {
                writeln!(out, "x={x} alpha={}", desc.alpha().expect("hall")).unwrap();
            }
            writeln!(out, "support {support}").unwrap();
            out
        }
        Format::Json => json_line(&json!({
            "family": family,
            "q": q,
            "index": index,
            "x": x,
            "alpha": desc.alpha(),
            "v": p.v,
            "k": p.k,
            "lambda": p.lambda,
            "sequence": s,
            "support": support.members(),
        })),
        Format::Csv => {
            let mut out = String::from("i,bit\n");
            for (i, &b) in s.bits().iter().enumerate() {
                writeln!(out, "{i},{}", u8::from(b)).unwrap();
            }
            out
        }
    })
}

/// A literal 0/1 string, or else a file containing one (whitespace ignored).
fn read_sequence(arg: &str) -> Result<BinarySequence, Failure> {
    let literal = !arg.is_empty() && arg.bytes().all(|c| c == b'0' || c == b'1');
    let text = if literal {
        arg.to_string()
    } else {
        let raw = fs::read_to_string(arg).map_err(|e| {
            Failure::Usage(format!("{arg}: not a bitstring and not readable ({e})"))
        })?;
        raw.chars().filter(|c| !c.is_whitespace()).collect()
    };
    Ok(text.parse()?)
}

fn histogram_text(spectrum: &CorrelationSpectrum) -> String {
    let entries = spectrum.histogram().iter().map(|(v, c)| format!("{v}:{c}"));
    format!("{{{}}}", list(entries))
}

fn correlate(a: &str, b: Option<&str>, format: Format) -> Result<String, Failure> {
    let s = read_sequence(a)?;
    let t = b.map(read_sequence).transpose()?;
    let spectrum = match &t {
        Some(t) => s.correlation_spectrum(t)?,
        None => s.autocorrelation_spectrum(),
    };
    // nonzero shifts all -1, as for is_perfect
    let perfect = t
        .is_none()
        .then(|| spectrum.values()[1..].iter().all(|&v| v == -1));
    Ok(match format {
        Format::Text => {
            let mut out = format!("period {}\n", s.period());
            for (w, v) in spectrum.values().iter().enumerate() {
                writeln!(out, "{w} {v}").unwrap();
            }
            writeln!(out, "histogram {}", histogram_text(&spectrum)).unwrap();
            if let Some(p) = perfect {
                writeln!(out, "perfect: {p}").unwrap();
            }
            out
        }
        Format::Json => {
            let mut v = json!({
                "period": s.period(),
                "kind": if t.is_some() { "cross" } else { "auto" },
                "spectrum": spectrum,
            });
            if let Some(p) = perfect {
                v["perfect"] = json!(p);
            }
            json_line(&v)
        }
        Format::Csv => {
            let mut out = String::from("w,value\n");
            for (w, v) in spectrum.values().iter().enumerate() {
                writeln!(out, "{w},{v}").unwrap();
            }
            out
        }
    })
}

fn multipliers(text: &str, format: Format) -> Result<String, Failure> {
    let d: SupportSet = text.parse()?;
    let group = multiplier_group(&d);
    let orbit = orbit_with_group(&d, &group);
    Ok(match format {
        Format::Text => {
            let mut out = format!(
                "N={} |M|={} orbit={}\nM {}\n",
                d.modulus(),
                group.order(),
                orbit.len(),
                list(group.members())
            );
            for c in &orbit {
                writeln!(out, "r={} {}", c.representative, c.support).unwrap();
            }
            out
        }
        Format::Json => json_line(&json!({
            "modulus": d.modulus(),
            "multipliers": group.members(),
            "order": group.order(),
            "orbit_size": orbit.len(),
            "orbit": orbit
                .iter()
                .map(|c| json!({"representative": c.representative, "support": c.support.members()}))
                .collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("representative,support\n");
            for c in &orbit {
                let members = c.support.members().iter().map(usize::to_string);
                writeln!(
                    out,
                    "{},{}",
                    c.representative,
                    members.collect::<Vec<_>>().join(" ")
                )
                .unwrap();
            }
            out
        }
    })
}

fn parse_range(text: &str) -> Result<RangeInclusive<u64>, Failure> {
    let bad = || Failure::Usage(format!("bad range {text:?}; expected a..b"));
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (text, text),
    };
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn admissible(family: Family, range: RangeInclusive<u64>) -> Vec<u64> {
    match family {
        Family::Paley => range.filter(|&q| q % 4 == 3 && is_prime(q)).collect(),
        Family::TwinPrime => range.filter(|&q| is_prime(q) && is_prime(q + 2)).collect(),
        Family::Hall => hall_primes(*range.end())
            .into_iter()
            .filter(|q| range.contains(q))
            .collect(),
    }
}

fn verify(family: Family, range_text: &str, format: Format) -> Result<String, Failure> {
    let range = parse_range(range_text)?;
    let qs = admissible(family, range.clone());
    if qs.is_empty() {
        return Err(Failure::Usage(format!(
            "no admissible q for {family} in {}..{}",
            range.start(),
            range.end()
        )));
    }
    let results: Vec<FamilyVerification> = qs
        .par_iter()
        .map(|&q| verify_family(&FamilyDescriptor::new(family, q, None)?))
        .collect::<Result<_, _>>()?;
    let passed = results.iter().filter(|r| r.passed()).count();
    let all_passed = passed == results.len();

    let out = match format {
        Format::Text => {
            let mut out = String::new();
            for r in &results {
                let d = &r.descriptor;
                write!(out, "{family} q={}", d.q()).unwrap();
                if let Some(x) = d.hall_parameter() {
                    write!(out, " x={}", x.x()).unwrap();
                }
                writeln!(
                    out,
                    " orbit={}/{} perfect={} values={{{}}} status={}",
                    r.orbit_size,
                    r.expected_orbit_size,
                    r.all_perfect,
                    list(r.value_set()),
                    if r.passed() { "pass" } else { "fail" }
                )
                .unwrap();
                for report in &r.reports {
                    writeln!(out, "  {report}").unwrap();
                }
            }
            writeln!(out, "{passed} of {} pass", results.len()).unwrap();
            out
        }
        Format::Json => json_line(&json!({
            "family": family,
            "range": [range.start(), range.end()],
            "passed": passed,
            "total": results.len(),
            "status": if all_passed { "pass" } else { "fail" },
            "results": results.iter().map(FamilyVerification::to_json).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("q,pair,mismatches,distinct,status\n");
            for r in &results {
                for report in &r.reports {
                    writeln!(
                        out,
                        "{},{}-{},{},{},{}",
                        r.descriptor.q(),
                        report.pair.0,
                        report.pair.1,
                        report.mismatches(),
                        report.distinct_values(),
                        report.status()
                    )
                    .unwrap();
                }
            }
            out
        }
    };
    if all_passed {
        return Ok(out);
    }
    let failed = results.iter().find(|r| !r.passed()).expect("a failure");
    let q = failed.descriptor.q();
    let detail = match failed.first_diff() {
        Some((report, d)) => format!(
            "first diff: q={q} pair=[{},{}] w={} predicted={} computed={}",
            report.pair.0, report.pair.1, d.w, d.predicted, d.computed
        ),
        None => format!(
            "first failure: q={q} orbit={}/{} conjugates_match={} perfect={}",
            failed.orbit_size,
            failed.expected_orbit_size,
            failed.orbit_matches_conjugates,
            failed.all_perfect
        ),
    };
    // keep stdout parseable in json/csv modes
    match format {
        Format::Text => Err(Failure::Mismatch(format!("{out}{detail}\n"))),
        _ => {
            eprintln!("{detail}");
            Err(Failure::Mismatch(out))
        }
    }
}
