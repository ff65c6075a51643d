//! Command-line front end: configuration, report emission and the
//! `verify-all` matrix.

pub mod config;
pub mod emit;
pub mod spaces;

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;

use tadpole_core::{build_model, verify, BaseSpec, DeltaRule, VariantFlags, VerificationReport};

use config::{parse_config, EmitFormat, RunArgs, RunConfig};
use emit::MatrixRow;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "tadpole", version, about = "Check the Q7 Chern class identity on a base")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the identity for one base and line bundle
    Verify(RunArgs),
    /// Run the full matrix of bases, degrees and delta rules
    VerifyAll {
        /// Include P4 in the matrix
        #[arg(long)]
        with_p4: bool,
        #[arg(long, value_enum, default_value_t = EmitFormat::Table)]
        emit: EmitFormat,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Euler characteristic of a named test space
    Chi {
        /// e.g. quadric-P3, blowup-pt-P2, nodal-quartic-P3, P4
        #[arg(long)]
        space: String,
    },
}

/// Exit status plus whatever should be printed.
#[derive(Debug)]
pub struct Outcome {
    pub code: u8,
    pub output: String,
}

pub fn load_config(args: &RunArgs) -> Result<RunConfig> {
    let text = match &args.config {
        Some(path) => Some(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?),
        None => None,
    };
    parse_config(args, text.as_deref())
}

pub fn run_verify(config: &RunConfig) -> Result<VerificationReport> {
    let model = build_model(config.base, config.l_degree)?;
    Ok(verify(&model, &config.variant)?)
}

/// Bases and degrees of the `verify-all` matrix, in output order.
pub fn matrix_configs(with_p4: bool) -> Vec<(BaseSpec, u32, DeltaRule)> {
    let mut bases = Vec::new();
    let top = if with_p4 { 4 } else { 3 };
    for n in 1..=top {
        let mut ls = vec![1, 2, n + 1];
        ls.dedup();
        for l in ls {
            bases.push((BaseSpec::Projective(n), l));
        }
    }
    for d in 1..=4 {
        bases.push((BaseSpec::Formal(d), 1));
    }
    bases
        .into_iter()
        .flat_map(|(b, l)| [DeltaRule::DefinitionSd, DeltaRule::Printed].map(|r| (b, l, r)))
        .collect()
}

/// Runs the matrix in parallel; rows come back in `matrix_configs` order.
/// Definition-sd rows are expected to pass and printed rows to fail.
pub fn run_matrix(with_p4: bool) -> Result<Vec<MatrixRow>> {
    matrix_configs(with_p4)
        .into_par_iter()
        .map(|(base, l, rule)| {
            let model = build_model(base, l)?;
            let report = verify(&model, &VariantFlags::with_delta_rule(rule))?;
            Ok(MatrixRow {
                base: base.to_string(),
                l_degree: report.config.l_degree,
                delta_rule: rule,
                lhs_chi: report.lhs.chi.to_string(),
                rhs_chi: report.rhs.chi.to_string(),
                verdict: if report.passed() { "pass" } else { "fail" }.to_string(),
                expected: match rule {
                    DeltaRule::DefinitionSd => "pass",
                    DeltaRule::Printed => "fail",
                }
                .to_string(),
            })
        })
        .collect()
}

fn deliver(text: String, out: Option<&Path>) -> Result<String> {
    match out {
        Some(path) => {
            let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            f.write_all(text.as_bytes())?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Executes a parsed command. `Err` means a usage or configuration problem.
pub fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Verify(args) => {
            let config = load_config(&args)?;
            let report = run_verify(&config)?;
            let code = if report.passed() { EXIT_PASS } else { EXIT_FAIL };
            let output = deliver(emit::report(&report, config.emit), config.out.as_deref())?;
            Ok(Outcome { code, output })
        }
        Command::VerifyAll { with_p4, emit, out } => {
            let rows = run_matrix(with_p4)?;
            let code = if rows.iter().all(MatrixRow::as_expected) { EXIT_PASS } else { EXIT_FAIL };
            let output = deliver(emit::matrix(&rows, emit), out.as_deref())?;
            Ok(Outcome { code, output })
        }
        Command::Chi { space } => {
            let chi = spaces::chi(&space)?;
            Ok(Outcome {
                code: EXIT_PASS,
                output: format!("chi({space}) = {chi}\n"),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_shape() {
        let m = matrix_configs(false);
        // P1: 1,2  P2: 1,2,3  P3: 1,2,4  formal 1..4, two rules each
        assert_eq!(m.len(), (2 + 3 + 3 + 4) * 2);
        assert_eq!(m[0], (BaseSpec::Projective(1), 1, DeltaRule::DefinitionSd));
        assert_eq!(m[1], (BaseSpec::Projective(1), 1, DeltaRule::Printed));
        assert_eq!(matrix_configs(true).len(), m.len() + 6);
    }

    #[test]
    fn verify_p1_json() {
        let cli = Cli::try_parse_from(["tadpole", "verify", "--base", "P1", "--L", "1", "--emit", "json"]).unwrap();
        let out = execute(cli).unwrap();
        assert_eq!(out.code, EXIT_PASS);
        let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
        assert_eq!(v["lhs"]["chi"], 12);
        assert_eq!(v["rhs"]["chi"], 12);
        assert_eq!(v["verdict"], "pass");
    }

    #[test]
    fn printed_fails() {
        let cli = Cli::try_parse_from(["tadpole", "verify", "--base", "P1", "--variant", "printed", "--emit", "csv"]).unwrap();
        let out = execute(cli).unwrap();
        assert_eq!(out.code, EXIT_FAIL);
        assert!(out.output.starts_with("degree,lhs,rhs,equal\n0,"));
    }

    #[test]
    fn table_mentions_everything() {
        let cli = Cli::try_parse_from(["tadpole", "verify", "--base", "P3"]).unwrap();
        let out = execute(cli).unwrap().output;
        assert!(out.contains("chi(Y) = 24"));
        assert!(out.contains("rhs    = chi(2D1 + D2 + 2O - S1 - S2) = 24"), "{out}");
        assert!(out.contains("chi_o(D1)"));
        assert!(out.ends_with("verdict: PASS\n"));
    }

    #[test]
    fn formal_table_has_no_orientifold_section() {
        let cli = Cli::try_parse_from(["tadpole", "verify", "--base", "formal:2"]).unwrap();
        let out = execute(cli).unwrap().output;
        assert!(!out.contains("orientifold form"));
        assert!(out.contains("2       -36*L^2 + 12*L*c1  -36*L^2 + 12*L*c1  yes"), "{out}");
    }

    #[test]
    fn bad_base_is_config_error() {
        let cli = Cli::try_parse_from(["tadpole", "verify", "--base", "P7"]).unwrap();
        assert!(execute(cli).is_err());
    }
}
