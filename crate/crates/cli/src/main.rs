mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use cubring::arith::{fmt_rational, is_disc};
use cubring::bridge::Context;
use cubring::counting::{class_numbers_in, zeta_coefficients, Budget};
use cubring::quad::picard_group;
use cubring::report::{run_checks, Check, CheckRecord};
use cubring::Rational;

use config::{CommonArgs, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "cubring", version, about = "Class numbers of cubic rings and the identities between them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print h(Δ) and ĥ(Δ) for 0 < |Δ| <= max
    Table {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the named checks (or `all`) over the configured range
    Verify {
        #[arg(required = true, num_args = 1..)]
        checks: Vec<String>,
        #[command(flatten)]
        common: CommonArgs,
        /// Perturb the first record at this discriminant
        #[arg(long, hide = true, allow_hyphen_values = true)]
        inject_fault: Option<i64>,
    },
    /// Print the first `max` Dirichlet coefficients of the four zeta functions
    Zeta {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print the Picard group of the quadratic order of discriminant DISC as JSON
    DumpPic {
        #[arg(value_name = "DISC", allow_hyphen_values = true)]
        discriminant: i64,
        #[command(flatten)]
        common: CommonArgs,
    },
}

enum Status {
    Pass,
    Mismatch,
}

fn output(cfg: &RunConfig) -> Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Runs `f` on contiguous chunks of `deltas` in parallel and concatenates
/// the results in chunk order.
fn sharded<T: Send>(deltas: &[i64], shards: usize, f: impl Fn(&[i64]) -> Result<Vec<T>> + Sync) -> Result<Vec<T>> {
    if deltas.is_empty() {
        return Ok(Vec::new());
    }
    let size = deltas.len().div_ceil(shards);
    let parts: Vec<Vec<T>> = deltas.par_chunks(size).map(&f).collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

fn cmd_table(cfg: &RunConfig) -> Result<Status> {
    let budget = Budget::new(cfg.budget);
    let deltas = cfg.deltas()?;
    let rows: Vec<(i64, Rational, Rational)> = sharded(&deltas, cfg.shards, |chunk| {
        let t = class_numbers_in(chunk[0], chunk[chunk.len() - 1], &budget)?;
        Ok(t.entries.into_iter().map(|(d, (h, hh))| (d, h, hh)).collect())
    })?;
    let mut w = output(cfg)?;
    match cfg.format {
        Format::Csv => {
            writeln!(w, "delta,h,hhat")?;
            for (d, h, hh) in &rows {
                writeln!(w, "{d},{},{}", fmt_rational(h), fmt_rational(hh))?;
            }
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(d, h, hh)| json!({"delta": d, "h": fmt_rational(h), "hhat": fmt_rational(hh)}))
                .collect();
            writeln!(w, "{}", serde_json::to_string_pretty(&v)?)?;
        }
    }
    w.flush()?;
    Ok(Status::Pass)
}

fn parse_checks(names: &[String]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in names {
        if n == "all" {
            out.extend(Check::ALL);
        } else {
            out.push(n.parse::<Check>()?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn inject(records: &mut [CheckRecord], delta: i64) -> Result<()> {
    let Some(r) = records.iter_mut().find(|r| r.delta == delta && !r.informational) else {
        bail!("no record at {delta} to perturb");
    };
    r.lhs += Rational::from_integer(1);
    r.pass = r.lhs == r.rhs;
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, names: &[String], fault: Option<i64>) -> Result<Status> {
    let checks = parse_checks(names)?;
    let ctx = Context::new(Budget::new(cfg.budget));
    let deltas = cfg.deltas()?;
    let mut records = Vec::new();
    for check in checks {
        records.extend(sharded(&deltas, cfg.shards, |chunk| Ok(run_checks(check, chunk, &cfg.primes, &ctx)?))?);
    }
    if let Some(d) = fault {
        inject(&mut records, d)?;
    }
    let mut w = output(cfg)?;
    match cfg.format {
        Format::Csv => {
            writeln!(w, "check,delta,lhs,rhs,pass,informational")?;
            for r in &records {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    r.check,
                    r.delta,
                    fmt_rational(&r.lhs),
                    fmt_rational(&r.rhs),
                    r.pass,
                    r.informational
                )?;
            }
        }
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&records)?)?,
    }
    w.flush()?;
    let failures = records.iter().filter(|r| r.is_failure()).count();
    let info = records.iter().filter(|r| r.informational).count();
    eprintln!("{} records, {failures} failures, {info} informational", records.len());
    match records.iter().find(|r| r.is_failure()) {
        Some(r) => {
            eprintln!("counterexample: {r}");
            Ok(Status::Mismatch)
        }
        None => Ok(Status::Pass),
    }
}

fn cmd_zeta(cfg: &RunConfig) -> Result<Status> {
    let z = zeta_coefficients(cfg.max, &Budget::new(cfg.budget))?;
    let mut w = output(cfg)?;
    match cfg.format {
        Format::Csv => {
            writeln!(w, "n,zeta_plus,zeta_minus,zhat_plus,zhat_minus")?;
            for n in 1..=cfg.max as usize {
                let c = z.at(n).map(|r| fmt_rational(&r));
                writeln!(w, "{n},{}", c.join(","))?;
            }
        }
        Format::Json => {
            let v: Vec<_> = (1..=cfg.max as usize)
                .map(|n| {
                    let [a, b, c, d] = z.at(n).map(|r| fmt_rational(&r));
                    json!({"n": n, "zeta_plus": a, "zeta_minus": b, "zhat_plus": c, "zhat_minus": d})
                })
                .collect();
            writeln!(w, "{}", serde_json::to_string_pretty(&v)?)?;
        }
    }
    w.flush()?;
    Ok(Status::Pass)
}

fn cmd_dump_pic(cfg: &RunConfig, disc: i64) -> Result<Status> {
    if !is_disc(disc) {
        bail!("{disc} is not a discriminant");
    }
    if disc.abs() > cfg.budget {
        bail!("|{disc}| exceeds the budget {}", cfg.budget);
    }
    let g = picard_group(disc)?;
    let v = json!({
        "disc": disc,
        "order": g.order(),
        "reps": g.reps.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "table": g.table,
        "inverse": g.inverse,
        "torsion3": g.torsion3(),
    });
    let mut w = output(cfg)?;
    writeln!(w, "{}", serde_json::to_string_pretty(&v)?)?;
    w.flush()?;
    Ok(Status::Pass)
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Table { common } => cmd_table(&RunConfig::resolve(&common)?),
        Command::Verify { checks, common, inject_fault } => {
            cmd_verify(&RunConfig::resolve(&common)?, &checks, inject_fault)
        }
        Command::Zeta { common } => cmd_zeta(&RunConfig::resolve(&common)?),
        Command::DumpPic { discriminant, common } => cmd_dump_pic(&RunConfig::resolve(&common)?, discriminant),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn all_expands_and_dedups() {
        let names = ["on".to_string(), "all".to_string()];
        assert_eq!(parse_checks(&names).unwrap(), Check::ALL.to_vec());
    }
}
