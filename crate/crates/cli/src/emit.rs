//! Report rendering. All output is deterministic: maps are ordered and no
//! timestamps or paths are embedded.

use std::fmt::Write;

use serde::Serialize;
use tadpole_core::{DeltaRule, VerificationReport};

use crate::config::EmitFormat;

fn rule_name(r: DeltaRule) -> &'static str {
    match r {
        DeltaRule::DefinitionSd => "definition-sd",
        DeltaRule::Printed => "printed",
    }
}

pub fn report(r: &VerificationReport, format: EmitFormat) -> String {
    match format {
        EmitFormat::Json => json(r),
        EmitFormat::Csv => csv(r),
        EmitFormat::Table => table(r),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn csv(r: &VerificationReport) -> String {
    let mut s = String::from("degree,lhs,rhs,equal\n");
    for (d, l, rh, eq) in r.degree_rows() {
        writeln!(s, "{d},{l},{rh},{eq}").unwrap();
    }
    s
}

/// `2O + 2D1 - S1 + ...` in stratum order.
fn cf_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    for (i, (name, c)) in r.rhs.cf.terms().enumerate() {
        let sign = match (i, c < 0) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        };
        let abs = c.abs();
        if abs == 1 {
            write!(s, "{sign}{name}").unwrap();
        } else {
            write!(s, "{sign}{abs}{name}").unwrap();
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn table(r: &VerificationReport) -> String {
    let mut s = String::new();
    let l = r.config.l_degree.map_or(String::new(), |l| format!(", L = O({l})"));
    writeln!(s, "Q7 fibration over {}{l}", r.config.base).unwrap();
    writeln!(
        s,
        "variant: {}, {} fiber tables",
        rule_name(r.variant.delta_rule),
        r.variant.fiber_tables
    )
    .unwrap();
    writeln!(s).unwrap();

    let rows = r.degree_rows();
    let wl = rows.iter().map(|x| x.1.len()).max().unwrap_or(0).max(3);
    let wr = rows.iter().map(|x| x.2.len()).max().unwrap_or(0).max(3);
    writeln!(s, "{:<6}  {:<wl$}  {:<wr$}  equal", "degree", "lhs", "rhs").unwrap();
    for (d, lh, rh, eq) in &rows {
        writeln!(s, "{d:<6}  {lh:<wl$}  {rh:<wr$}  {}", if *eq { "yes" } else { "NO" }).unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s, "chi(Y) = {}", r.lhs.chi).unwrap();
    writeln!(s, "rhs    = chi({}) = {}", cf_text(r), r.rhs.chi).unwrap();

    writeln!(s).unwrap();
    writeln!(s, "strata:").unwrap();
    for (name, st) in &r.strata {
        let tag = if st.empty { "  (empty)" } else { "" };
        writeln!(s, "  {name:<3} codim {}  chi = {}{tag}", st.codim, st.chi).unwrap();
    }

    if let Some(o) = &r.orientifold {
        writeln!(s).unwrap();
        writeln!(s, "orientifold form:").unwrap();
        for (name, v) in &o.chi_o {
            writeln!(s, "  chi_o({name}) = {v}").unwrap();
        }
        writeln!(
            s,
            "  2chi(O) + sum chi_o = 2*{} + {} = {} ({})",
            o.chi_orientifold,
            o.total - 2 * o.chi_orientifold,
            o.total,
            if o.matches_rhs { "matches" } else { "does not match" }
        )
        .unwrap();
    }

    if !r.notes.is_empty() {
        writeln!(s).unwrap();
        writeln!(s, "notes:").unwrap();
        for n in &r.notes {
            writeln!(s, "  - {n}").unwrap();
        }
    }
    writeln!(s).unwrap();
    writeln!(s, "verdict: {}", if r.passed() { "PASS" } else { "FAIL" }).unwrap();
    s
}

/// One row of the `verify-all` matrix.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixRow {
    pub base: String,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l_degree: Option<u32>,
    pub delta_rule: DeltaRule,
    pub lhs_chi: String,
    pub rhs_chi: String,
    pub verdict: String,
    pub expected: String,
}

impl MatrixRow {
    pub fn as_expected(&self) -> bool {
        self.verdict == self.expected
    }
}

pub fn matrix(rows: &[MatrixRow], format: EmitFormat) -> String {
    match format {
        EmitFormat::Json => json(&rows),
        EmitFormat::Csv => {
            let mut s = String::from("base,L,delta_rule,lhs_chi,rhs_chi,verdict,expected\n");
            for r in rows {
                let l = r.l_degree.map_or(String::new(), |l| l.to_string());
                writeln!(
                    s,
                    "{},{l},{},{},{},{},{}",
                    r.base,
                    rule_name(r.delta_rule),
                    r.lhs_chi,
                    r.rhs_chi,
                    r.verdict,
                    r.expected
                )
                .unwrap();
            }
            s
        }
        EmitFormat::Table => {
            let mut s = String::new();
            let wc = rows.iter().map(|r| r.lhs_chi.len().max(r.rhs_chi.len())).max().unwrap_or(0).max(6);
            writeln!(
                s,
                "{:<9} {:<3} {:<13} {:<wc$}  {:<wc$}  verdict  expected",
                "base", "L", "delta", "chi(Y)", "rhs"
            )
            .unwrap();
            for r in rows {
                let l = r.l_degree.map_or("-".to_string(), |l| l.to_string());
                writeln!(
                    s,
                    "{:<9} {l:<3} {:<13} {:<wc$}  {:<wc$}  {:<7}  {}{}",
                    r.base,
                    rule_name(r.delta_rule),
                    r.lhs_chi,
                    r.rhs_chi,
                    r.verdict,
                    r.expected,
                    if r.as_expected() { "" } else { "  <-- unexpected" }
                )
                .unwrap();
            }
            let ok = rows.iter().filter(|r| r.as_expected()).count();
            writeln!(s, "\n{ok}/{} rows as expected", rows.len()).unwrap();
            s
        }
    }
}
