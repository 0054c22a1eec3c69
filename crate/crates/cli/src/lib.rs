//! Commands behind the `svzeta` binary. Each command renders its whole
//! output to a string before anything is printed.

pub mod data;
pub mod suites;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Serialize;
use svzeta::associator::SingleValued;
use svzeta::fmodel::{dims, f_lyndon_words, hoffman_lyndon_words, sv_u, FWord};
use svzeta::numerics::{format_sig17, mzv_value_nested_sum, MzvCache, MzvEvaluator, MzvValue};
use svzeta::polylog::{complex_series, eval_l, eval_sv_l, PathSpec};
use svzeta::{Composition, MzvExpr, Word};

use crate::suites::{Bound, Check};

/// Largest weight for which sv-table includes symbolic coefficients without `--slow`.
pub const SYMBOLIC_DEFAULT_MAX: usize = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub target_err: f64,
    pub cache: Option<PathBuf>,
    pub format: Format,
    pub slow: bool,
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_err > 0.0) {
            bail!("--prec must be positive, got {}", self.target_err);
        }
        Ok(())
    }

    fn evaluator(&self) -> Result<MzvEvaluator> {
        let cache = match &self.cache {
            Some(path) => MzvCache::load_or_empty(path)
                .with_context(|| format!("loading cache {}", path.display()))?,
            None => MzvCache::new(),
        };
        Ok(MzvEvaluator::with_cache(cache, self.target_err))
    }

    fn save(&self, evaluator: &MzvEvaluator) -> Result<()> {
        if let Some(path) = &self.cache {
            evaluator
                .cache()
                .store(path)
                .with_context(|| format!("writing cache {}", path.display()))?;
        }
        Ok(())
    }
}

fn csv_string<F: FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<()>>(f: F) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    f(&mut w)?;
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn json_string<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

#[derive(Serialize)]
struct SymbolicTerm {
    coeff: String,
    composition: Vec<u32>,
}

#[derive(Serialize)]
struct SvRecord {
    composition: Vec<u32>,
    word: String,
    symbolic: Option<Vec<SymbolicTerm>>,
    numeric: f64,
    abs_err: f64,
}

fn symbolic_terms(e: &MzvExpr) -> Vec<SymbolicTerm> {
    e.to_pairs()
        .into_iter()
        .map(|(q, composition)| SymbolicTerm {
            coeff: q.to_string(),
            composition,
        })
        .collect()
}

fn join(parts: &[u32]) -> String {
    parts
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// ζ_sv for every convergent composition of weight ≤ `weight_max`,
/// ordered by weight and then lexicographically.
pub fn cmd_sv_table(cfg: &Config, weight_max: usize) -> Result<String> {
    let mut comps = Vec::new();
    for weight in 2..=weight_max {
        comps.extend(
            Composition::all_of_weight(weight)
                .into_iter()
                .filter(Composition::is_convergent),
        );
    }
    let records = if comps.is_empty() {
        Vec::new()
    } else {
        let symbolic =
            (weight_max <= SYMBOLIC_DEFAULT_MAX || cfg.slow).then_some(weight_max);
        let sv = SingleValued::new(symbolic, weight_max)?;
        let mut records = Vec::with_capacity(comps.len());
        for c in &comps {
            let v = sv.zeta_sv(c)?;
            if v.abs_err > cfg.target_err {
                bail!(
                    "ζ_sv({c}): error bound {:e} exceeds --prec {:e}",
                    v.abs_err,
                    cfg.target_err
                );
            }
            records.push(SvRecord {
                composition: c.parts().to_vec(),
                word: v.word.to_string(),
                symbolic: v.symbolic.as_ref().map(symbolic_terms),
                numeric: v.numeric,
                abs_err: v.abs_err,
            });
        }
        records
    };
    let render_symbolic = |r: &SvRecord| match &r.symbolic {
        None => String::new(),
        Some(terms) => {
            let e = MzvExpr::from_terms(terms.iter().map(|t| {
                let w = if t.composition.is_empty() {
                    Word::EMPTY
                } else {
                    Composition::new(t.composition.clone()).unwrap().to_word()
                };
                (w, t.coeff.parse().unwrap())
            }));
            e.render()
        }
    };
    match cfg.format {
        Format::Json => json_string(&records),
        Format::Csv => csv_string(|w| {
            w.write_record(["composition", "word", "symbolic", "numeric", "abs_err"])?;
            for r in &records {
                w.write_record([
                    join(&r.composition),
                    r.word.clone(),
                    render_symbolic(r),
                    format_sig17(r.numeric),
                    format_sig17(r.abs_err),
                ])?;
            }
            Ok(())
        }),
        Format::Text => Ok(records
            .iter()
            .map(|r| {
                let sym = render_symbolic(r);
                let sym = if sym.is_empty() { "-".to_string() } else { sym };
                format!(
                    "zsv({})\t{}\t{}\t{} ± {:.1e}\n",
                    join(&r.composition),
                    r.word,
                    sym,
                    format_sig17(r.numeric),
                    r.abs_err
                )
            })
            .collect()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    PaperIdentities,
    Dims,
    Polylog,
    All,
}

/// Run a suite; the flag is true when every check passed.
pub fn cmd_verify(cfg: &Config, suite: Suite) -> Result<(String, bool)> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::PaperIdentities | Suite::All) {
        checks.extend(suites::paper_identities(cfg.slow)?);
    }
    if matches!(suite, Suite::Dims | Suite::All) {
        checks.extend(suites::dims_suite()?);
    }
    if matches!(suite, Suite::Polylog | Suite::All) {
        checks.extend(suites::polylog_suite()?);
    }
    if suite == Suite::All {
        checks.extend(suites::associator_suite()?);
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok((render_checks(cfg.format, &checks)?, passed))
}

pub fn render_checks(format: Format, checks: &[Check]) -> Result<String> {
    let relation = |c: &Check| match c.bound {
        Bound::Below => "<=",
        Bound::Above => ">",
    };
    match format {
        Format::Json => json_string(&checks),
        Format::Csv => csv_string(|w| {
            w.write_record(["suite", "check", "residual", "bound", "tolerance", "passed"])?;
            for c in checks {
                w.write_record([
                    c.suite.clone(),
                    c.name.clone(),
                    format!("{:e}", c.residual),
                    relation(c).to_string(),
                    format!("{:e}", c.tolerance),
                    c.passed.to_string(),
                ])?;
            }
            Ok(())
        }),
        Format::Text => {
            let mut s: String = checks
                .iter()
                .map(|c| {
                    format!(
                        "{}  [{}] {}: residual {:.3e} {} {:.0e}\n",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.suite,
                        c.name,
                        c.residual,
                        relation(c),
                        c.tolerance
                    )
                })
                .collect();
            let failed = checks.iter().filter(|c| !c.passed).count();
            s.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
            Ok(s)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    HalfSplit,
    NestedSum,
}

#[derive(Serialize)]
struct MzvRecord {
    composition: Vec<u32>,
    value: f64,
    abs_err: f64,
    method: String,
    terms_used: usize,
}

impl From<&MzvValue> for MzvRecord {
    fn from(v: &MzvValue) -> Self {
        MzvRecord {
            composition: v.composition.parts().to_vec(),
            value: v.value,
            abs_err: v.abs_err,
            method: v.method.clone(),
            terms_used: v.terms_used,
        }
    }
}

/// ζ(composition) to the configured accuracy.
pub fn cmd_mzv(cfg: &Config, composition: &str, method: Method) -> Result<String> {
    let c: Composition = composition.parse()?;
    let (v, ev) = match method {
        Method::HalfSplit => {
            let ev = cfg.evaluator()?;
            let mut v = ev.value(&c)?;
            // the cached record drops the method tag; report what produced it
            if v.method == "cache" {
                v.method = "half-split".into();
                v.terms_used = svzeta::numerics::power_series_table().terms();
            }
            (v, Some(ev))
        }
        Method::NestedSum => (mzv_value_nested_sum(&c, cfg.target_err, 1 << 26)?, None),
    };
    if let Some(ev) = &ev {
        cfg.save(ev)?;
    }
    let rec = MzvRecord::from(&v);
    match cfg.format {
        Format::Json => json_string(&rec),
        Format::Csv => csv_string(|w| {
            w.write_record(["composition", "value", "abs_err", "method", "terms_used"])?;
            w.write_record([
                join(&rec.composition),
                format_sig17(rec.value),
                format_sig17(rec.abs_err),
                rec.method.clone(),
                rec.terms_used.to_string(),
            ])?;
            Ok(())
        }),
        Format::Text => Ok(format!(
            "z({}) = {} ± {:.1e}  [{}, {} terms]\n",
            c,
            format_sig17(v.value),
            v.abs_err,
            v.method,
            v.terms_used
        )),
    }
}

/// Lyndon words of the given weight over {3 < 2}, or over f3 < f5 < … .
pub fn cmd_lyndon(cfg: &Config, weight: u32, f_alphabet: bool) -> Result<String> {
    let words: Vec<String> = if f_alphabet {
        f_lyndon_words(weight).iter().map(FWord::to_string).collect()
    } else {
        hoffman_lyndon_words(weight).iter().map(|w| join(w)).collect()
    };
    match cfg.format {
        Format::Json => json_string(&words),
        Format::Csv => csv_string(|w| {
            w.write_record(["word"])?;
            for x in &words {
                w.write_record([x])?;
            }
            Ok(())
        }),
        Format::Text => Ok(words.iter().map(|w| format!("{w}\n")).collect()),
    }
}

#[derive(Serialize)]
struct FTerm {
    coeff: String,
    word: String,
}

/// sv on the f-alphabet.
pub fn cmd_fsv(cfg: &Config, fword: &str) -> Result<String> {
    let w: FWord = fword.parse()?;
    let e = sv_u(&w);
    let terms: Vec<FTerm> = e
        .terms()
        .map(|(w, q)| FTerm {
            coeff: q.to_string(),
            word: w.to_string(),
        })
        .collect();
    match cfg.format {
        Format::Json => json_string(&terms),
        Format::Csv => csv_string(|wr| {
            wr.write_record(["coeff", "word"])?;
            for t in &terms {
                wr.write_record([&t.coeff, &t.word])?;
            }
            Ok(())
        }),
        Format::Text => Ok(format!("{e}\n")),
    }
}

#[derive(Serialize)]
struct PolylogRecord {
    word: String,
    z: [f64; 2],
    value: [f64; 2],
}

/// Parse "re,im" or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| {
        p.parse::<f64>()
            .with_context(|| format!("cannot parse {p:?} as a number"))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => bail!("expected \"re,im\", got {s:?}"),
    }
}

/// Parse a path "re,im;re,im;…".
pub fn parse_path(s: &str) -> Result<PathSpec> {
    let vertices = s
        .split(';')
        .map(parse_complex)
        .collect::<Result<Vec<_>>>()?;
    Ok(PathSpec::new(vertices)?)
}

/// L_w(z) or, with `single_valued`, 𝓛_w(z).
pub fn cmd_polylog(
    cfg: &Config,
    word: &str,
    z: &str,
    path: Option<&str>,
    single_valued: bool,
) -> Result<String> {
    let w: Word = word.parse()?;
    let z = parse_complex(z)?;
    let path = match path {
        Some(p) => parse_path(p)?,
        None => PathSpec::principal(z)?,
    };
    let order = w.len().max(1);
    let frame = if single_valued {
        let sv = SingleValued::new(None, order)?;
        eval_sv_l(z, &path, &complex_series(&sv.numeric().series))?
    } else {
        eval_l(z, &path, order)?
    };
    let v = frame.coeff(&w)?;
    let rec = PolylogRecord {
        word: w.to_string(),
        z: [z.re, z.im],
        value: [v.re, v.im],
    };
    match cfg.format {
        Format::Json => json_string(&rec),
        Format::Csv => csv_string(|wr| {
            wr.write_record(["word", "z_re", "z_im", "value_re", "value_im"])?;
            wr.write_record([
                rec.word.clone(),
                format_sig17(z.re),
                format_sig17(z.im),
                format_sig17(v.re),
                format_sig17(v.im),
            ])?;
            Ok(())
        }),
        Format::Text => Ok(format!(
            "{}_{}({}, {}) = {} + {}i\n",
            if single_valued { "svL" } else { "L" },
            rec.word,
            format_sig17(z.re),
            format_sig17(z.im),
            format_sig17(v.re),
            format_sig17(v.im)
        )),
    }
}

/// Dimension table for N = 1..=n_max.
pub fn cmd_dims(format: Format, n_max: usize) -> Result<String> {
    let t = dims(n_max)?;
    let rows = t.rows();
    match format {
        Format::Csv => csv_string(|w| {
            w.write_record(["N", "dimH", "dimL", "dimHsv", "dimLsv"])?;
            for r in &rows {
                w.write_record(r.iter().map(|x| x.to_string()))?;
            }
            Ok(())
        }),
        Format::Json => {
            #[derive(Serialize)]
            #[allow(non_snake_case)]
            struct Row {
                N: String,
                dimH: String,
                dimL: String,
                dimHsv: String,
                dimLsv: String,
            }
            let rows: Vec<Row> = rows
                .iter()
                .map(|r| Row {
                    N: r[0].to_string(),
                    dimH: r[1].to_string(),
                    dimL: r[2].to_string(),
                    dimHsv: r[3].to_string(),
                    dimLsv: r[4].to_string(),
                })
                .collect();
            json_string(&rows)
        }
        Format::Text => {
            let mut s = String::from("N\tdimH\tdimL\tdimHsv\tdimLsv\n");
            for r in &rows {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                s.push_str(&cells.join("\t"));
                s.push('\n');
            }
            Ok(s)
        }
    }
}
