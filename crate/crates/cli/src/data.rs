//! Embedded expected values.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use svzeta::associator::ProductTerm;
use svzeta::Composition;

pub const DIMS: &str = include_str!("../data/dims.txt");
pub const IDENTITIES: &str = include_str!("../data/identities.txt");

/// Row names in table order.
pub const DIM_ROWS: [&str; 4] = ["dimH", "dimL", "dimHsv", "dimLsv"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Erratum {
    pub row: String,
    pub n: usize,
    pub printed: i64,
    pub corrected: i64,
}

/// Printed dimension tables for N = 1..=20 with their known errata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedTables {
    pub rows: BTreeMap<String, Vec<i64>>,
    pub errata: Vec<Erratum>,
}

impl PrintedTables {
    /// Printed value with errata applied.
    pub fn corrected(&self, row: &str, n: usize) -> Option<i64> {
        let printed = *self.rows.get(row)?.get(n.checked_sub(1)?)?;
        Some(
            self.errata
                .iter()
                .find(|e| e.row == row && e.n == n)
                .map_or(printed, |e| e.corrected),
        )
    }

    pub fn erratum(&self, row: &str, n: usize) -> Option<&Erratum> {
        self.errata.iter().find(|e| e.row == row && e.n == n)
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty())
}

pub fn parse_tables(text: &str) -> Result<PrintedTables> {
    let mut rows = BTreeMap::new();
    let mut errata = Vec::new();
    for (lineno, line) in data_lines(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        let ctx = || format!("dimension data line {lineno}");
        match fields.as_slice() {
            ["erratum", row, n, printed, corrected] => errata.push(Erratum {
                row: row.to_string(),
                n: n.parse().with_context(ctx)?,
                printed: printed.parse().with_context(ctx)?,
                corrected: corrected.parse().with_context(ctx)?,
            }),
            [row, values] => {
                let values = values
                    .split_whitespace()
                    .map(|v| v.parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .with_context(ctx)?;
                rows.insert(row.to_string(), values);
            }
            _ => bail!("dimension data line {lineno}: unexpected layout"),
        }
    }
    let tables = PrintedTables { rows, errata };
    for e in &tables.errata {
        let printed = tables
            .rows
            .get(&e.row)
            .and_then(|r| r.get(e.n.wrapping_sub(1)))
            .ok_or_else(|| anyhow!("erratum for unknown cell {} N={}", e.row, e.n))?;
        if *printed != e.printed {
            bail!("erratum for {} N={} does not match the table", e.row, e.n);
        }
    }
    Ok(tables)
}

pub fn printed_tables() -> Result<PrintedTables> {
    parse_tables(DIMS)
}

/// ζ_sv(lhs) = Σ q Π ζ(c) with its tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub lhs: Composition,
    pub weight: usize,
    pub tolerance: f64,
    pub relative: bool,
    pub rhs: Vec<ProductTerm>,
}

impl Identity {
    pub fn describe(&self) -> String {
        let mut s = format!("zsv({}) =", self.lhs);
        for (k, (q, fs)) in self.rhs.iter().enumerate() {
            let factors: Vec<String> = fs.iter().map(|c| format!("z({c})")).collect();
            let sign = if q < &BigRational::from_integer(0.into()) { "-" } else { "+" };
            if k > 0 || sign == "-" {
                s.push_str(&format!(" {sign}"));
            }
            s.push_str(&format!(" {}*{}", q.abs(), factors.join("*")));
        }
        s
    }
}

pub fn parse_identities(text: &str) -> Result<Vec<Identity>> {
    data_lines(text)
        .map(|(lineno, line)| {
            let ctx = || format!("identity data line {lineno}");
            let fields: Vec<&str> = line.split('\t').collect();
            let [lhs, weight, tol, kind, terms] = fields.as_slice() else {
                bail!("identity data line {lineno}: expected 5 fields");
            };
            let relative = match *kind {
                "rel" => true,
                "abs" => false,
                other => bail!("identity data line {lineno}: unknown tolerance kind {other}"),
            };
            let rhs = terms
                .split_whitespace()
                .map(|t| {
                    let (q, factors) = t.split_once(':').ok_or_else(|| anyhow!("bad term {t}"))?;
                    let q: BigInt = q.parse().with_context(|| format!("bad coefficient {q}"))?;
                    let factors = factors
                        .split('|')
                        .map(|c| c.parse::<Composition>().map_err(anyhow::Error::from))
                        .collect::<Result<Vec<_>>>()?;
                    Ok((BigRational::from_integer(q), factors))
                })
                .collect::<Result<Vec<_>>>()
                .with_context(ctx)?;
            Ok(Identity {
                lhs: lhs.parse().with_context(ctx)?,
                weight: weight.parse().with_context(ctx)?,
                tolerance: tol.parse().with_context(ctx)?,
                relative,
                rhs,
            })
        })
        .collect()
}

pub fn identities() -> Result<Vec<Identity>> {
    parse_identities(IDENTITIES)
}
