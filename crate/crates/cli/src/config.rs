use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;

use tadpole_core::q7::MAX_BASE_DIM;
use tadpole_core::{BaseSpec, DeltaRule, FiberTables, FibrationTable, VariantFlags};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmitFormat {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantArg {
    Sd,
    Printed,
}

impl From<VariantArg> for DeltaRule {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Sd => DeltaRule::DefinitionSd,
            VariantArg::Printed => DeltaRule::Printed,
        }
    }
}

/// Flags shared by `verify` and `verify-all`. Unset flags fall back to the
/// configuration file, then to the defaults.
#[derive(Args, Clone, Debug, Default)]
pub struct RunArgs {
    /// P0..P4 or formal:1..formal:4
    #[arg(long)]
    pub base: Option<String>,
    /// Degree of L on projective bases
    #[arg(long = "L", value_name = "INT")]
    pub l_degree: Option<i64>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    #[arg(long, value_enum)]
    pub emit: Option<EmitFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub base: BaseSpec,
    pub l_degree: u32,
    pub variant: VariantFlags,
    pub emit: EmitFormat,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            base: BaseSpec::Projective(3),
            l_degree: 1,
            variant: VariantFlags::default(),
            emit: EmitFormat::Table,
            out: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind")]
enum FileBase {
    #[serde(rename = "Pn")]
    Projective { n: i64 },
    #[serde(rename = "formal")]
    Formal { dim: i64 },
}

#[derive(Debug, Deserialize)]
struct FileL {
    degree: i64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    base: Option<FileBase>,
    #[serde(rename = "L")]
    l: Option<FileL>,
    variant: Option<VariantArg>,
    emit: Option<EmitFormat>,
    out: Option<PathBuf>,
    /// Upstairs component name to `[[stratum, fiber chi], ...]`.
    fiber_tables: Option<BTreeMap<String, Vec<(String, i64)>>>,
}

fn check_dim(kind: &str, d: i64) -> Result<u32> {
    match u32::try_from(d) {
        Ok(d) if d <= MAX_BASE_DIM => Ok(d),
        _ => bail!("{kind} dimension {d} outside 0..={MAX_BASE_DIM}"),
    }
}

fn check_l(l: i64) -> Result<u32> {
    match u32::try_from(l) {
        Ok(l) if l >= 1 => Ok(l),
        _ => bail!("degree of L must be a positive integer, got {l}"),
    }
}

/// Merges flags over an optional JSON configuration (given as text).
pub fn parse_config(args: &RunArgs, file: Option<&str>) -> Result<RunConfig> {
    let file: FileConfig = match file {
        Some(text) => serde_json::from_str(text).context("invalid configuration file")?,
        None => FileConfig::default(),
    };
    let mut config = RunConfig::default();

    if let Some(b) = &file.base {
        config.base = match *b {
            FileBase::Projective { n } => BaseSpec::Projective(check_dim("projective", n)?),
            FileBase::Formal { dim } => {
                let d = check_dim("formal", dim)?;
                if d == 0 {
                    bail!("formal base dimension must be at least 1");
                }
                BaseSpec::Formal(d)
            }
        };
    }
    if let Some(l) = &file.l {
        config.l_degree = check_l(l.degree)?;
    }
    if let Some(v) = file.variant {
        config.variant.delta_rule = v.into();
    }
    if let Some(e) = file.emit {
        config.emit = e;
    }
    config.out = file.out;
    if let Some(tables) = file.fiber_tables {
        let mut over = BTreeMap::new();
        for (name, chain) in tables {
            let t = FibrationTable::new(chain).with_context(|| format!("fiber table for `{name}`"))?;
            over.insert(name, t);
        }
        config.variant.fiber_tables = FiberTables::Override(over);
    }

    if let Some(b) = &args.base {
        config.base = b.parse().map_err(|e| anyhow::anyhow!("--base: {e}"))?;
    }
    if let Some(l) = args.l_degree {
        config.l_degree = check_l(l)?;
    }
    if let Some(v) = args.variant {
        config.variant.delta_rule = v.into();
    }
    if let Some(e) = args.emit {
        config.emit = e;
    }
    if let Some(o) = &args.out {
        config.out = Some(o.clone());
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(base: Option<&str>, l: Option<i64>) -> RunArgs {
        RunArgs {
            base: base.map(str::to_string),
            l_degree: l,
            ..Default::default()
        }
    }

    #[test]
    fn defaults() {
        let c = parse_config(&RunArgs::default(), None).unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.base, BaseSpec::Projective(3));
        assert_eq!(c.variant.delta_rule, DeltaRule::DefinitionSd);
    }

    #[test]
    fn flags() {
        let mut a = args(Some("P1"), Some(1));
        a.emit = Some(EmitFormat::Json);
        let c = parse_config(&a, None).unwrap();
        assert_eq!((c.base, c.l_degree, c.emit), (BaseSpec::Projective(1), 1, EmitFormat::Json));
        assert_eq!(c.variant.delta_rule, DeltaRule::DefinitionSd);

        let c = parse_config(&args(Some("formal:3"), None), None).unwrap();
        assert_eq!(c.base, BaseSpec::Formal(3));

        assert!(parse_config(&args(Some("P9"), None), None).is_err());
        assert!(parse_config(&args(Some("P2"), Some(0)), None).is_err());
    }

    #[test]
    fn file_then_flags() {
        let file = r#"{"base": {"kind": "formal", "dim": 2}, "L": {"degree": 3}, "variant": "printed", "emit": "csv"}"#;
        let c = parse_config(&RunArgs::default(), Some(file)).unwrap();
        assert_eq!(c.base, BaseSpec::Formal(2));
        assert_eq!(c.l_degree, 3);
        assert_eq!(c.variant.delta_rule, DeltaRule::Printed);
        assert_eq!(c.emit, EmitFormat::Csv);

        let mut a = args(Some("P2"), None);
        a.variant = Some(VariantArg::Sd);
        let c = parse_config(&a, Some(file)).unwrap();
        assert_eq!(c.base, BaseSpec::Projective(2));
        assert_eq!(c.l_degree, 3);
        assert_eq!(c.variant.delta_rule, DeltaRule::DefinitionSd);
    }

    #[test]
    fn file_errors() {
        assert!(parse_config(&RunArgs::default(), Some(r#"{"base": {"kind": "Pn", "n": 7}}"#)).is_err());
        assert!(parse_config(&RunArgs::default(), Some(r#"{"base": {"kind": "formal", "dim": 0}}"#)).is_err());
        assert!(parse_config(&RunArgs::default(), Some(r#"{"bogus": 1}"#)).is_err());
        assert!(parse_config(&RunArgs::default(), Some("not json")).is_err());
    }

    #[test]
    fn fiber_table_override_from_file() {
        let file = r#"{"fiber_tables": {"D1~": [["B", 2], ["D1", 3], ["S1", 3]]}}"#;
        let c = parse_config(&RunArgs::default(), Some(file)).unwrap();
        assert!(matches!(c.variant.fiber_tables, FiberTables::Override(ref m) if m.contains_key("D1~")));
    }
}
