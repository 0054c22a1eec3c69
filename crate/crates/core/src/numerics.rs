//! Floating-point multiple zeta values.
//!
//! The default method splits the straight path from 0 to 1 at 1/2:
//!
//! ζ(w) = Σ_{w = uv} L_u(1/2) · L_{v*}(1/2)
//!
//! where `v*` is `v` reversed with e0 and e1 exchanged (the image of the
//! segment [1/2, 1] under t ↦ 1 - t). For convergent `w` every factor begins
//! with e1, so it is a power series Σ c_k z^k with nonnegative coefficients
//! and converges like 2^-k. The nested-sum method evaluates the defining
//! series directly with an integral tail bound; it is slow to converge and
//! serves as an independent check.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::{Arc, LazyLock, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mzvsym::MzvExpr;
use crate::ring::rational_to_f64;
use crate::words::{Composition, Letter, Word};

const EPS: f64 = f64::EPSILON;

/// Power-series coefficients c_k (k = 0..terms) of L_w(z) for words starting with e1.
///
/// L_{e1}(z) = -log(1 - z) = Σ z^k / k; appending e0 divides c_k by k;
/// appending e1 replaces c_m by (Σ_{n<m} c_n) / m.
pub struct PowerSeriesTable {
    terms: usize,
    table: RwLock<HashMap<Word, Arc<Vec<f64>>>>,
}

impl PowerSeriesTable {
    pub fn new(terms: usize) -> Self {
        PowerSeriesTable {
            terms,
            table: RwLock::new(HashMap::new()),
        }
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn coefficients(&self, w: &Word) -> Arc<Vec<f64>> {
        assert_eq!(w.first(), Some(Letter::E1), "power series needs a leading e1");
        if let Some(c) = self.table.read().unwrap().get(w) {
            return c.clone();
        }
        let k = self.terms;
        let coeffs = if w.len() == 1 {
            let mut c = vec![0.0; k + 1];
            for (i, ci) in c.iter_mut().enumerate().skip(1) {
                *ci = 1.0 / i as f64;
            }
            c
        } else {
            let parent = self.coefficients(&w.prefix(w.len() - 1));
            let mut c = vec![0.0; k + 1];
            match w.last().unwrap() {
                Letter::E0 => {
                    for i in 1..=k {
                        c[i] = parent[i] / i as f64;
                    }
                }
                Letter::E1 => {
                    let mut running = 0.0;
                    for i in 1..=k {
                        running += parent[i - 1];
                        c[i] = running / i as f64;
                    }
                }
            }
            c
        };
        let coeffs = Arc::new(coeffs);
        self.table
            .write()
            .unwrap()
            .entry(*w)
            .or_insert(coeffs)
            .clone()
    }

    /// Rigorous bound on Σ_{k > n} c_k |z|^k, using c_k ≤ (1 + ln k)^{|w|-1} / k.
    pub fn tail_bound(weight: usize, n: usize, r: f64) -> f64 {
        let m = weight.saturating_sub(1) as i32;
        let lk = |k: usize| 1.0 + (k as f64).ln();
        let first = lk(n + 1).powi(m) * r.powi(n as i32 + 1) / (n + 1) as f64;
        let ratio = r * (lk(n + 2) / lk(n + 1)).powi(m);
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        first / (1.0 - ratio)
    }

    /// L_w(z) for |z| < 1 with an error bound, using `n` terms (at most the table size).
    pub fn evaluate(&self, w: &Word, z: Complex64, n: usize) -> (Complex64, f64) {
        let n = n.min(self.terms);
        let c = self.coefficients(w);
        let len = w.len() as f64;
        let mut power = Complex64::new(1.0, 0.0);
        let mut terms = Vec::with_capacity(n);
        // first-order relative error of c_k z^k: L(k+2) from the coefficient
        // recursion, 3k from the powers, 3 for the product
        let mut term_err = 0.0;
        for (k, ck) in c.iter().enumerate().take(n + 1).skip(1) {
            power *= z;
            let t = power * ck;
            term_err += (len * (k as f64 + 2.0) + 3.0 * k as f64 + 3.0) * t.norm();
            terms.push(t);
        }
        // smallest terms first; each addition contributes at most 2 EPS |partial|
        let mut sum = Complex64::new(0.0, 0.0);
        let mut partials = 0.0;
        for t in terms.iter().rev() {
            sum += t;
            partials += sum.norm();
        }
        let rounding = 1.01 * EPS * (term_err + 2.0 * partials);
        (sum, Self::tail_bound(w.len(), n, z.norm()) + rounding)
    }
}

static HALF_TABLE: LazyLock<PowerSeriesTable> = LazyLock::new(|| PowerSeriesTable::new(320));

/// Shared table of power-series coefficients (320 terms).
pub fn power_series_table() -> &'static PowerSeriesTable {
    &HALF_TABLE
}

/// Reverse and exchange e0 ↔ e1.
pub fn path_dual(w: &Word) -> Word {
    w.reversed().swapped()
}

/// ζ(w) for a convergent word by splitting at 1/2, using the full coefficient
/// table so the value does not depend on the requested accuracy. Returns
/// value, error bound, terms used.
pub fn half_split_zeta(w: &Word) -> (f64, f64, usize) {
    assert!(w.is_convergent());
    let table = power_series_table();
    let half = Complex64::new(0.5, 0.0);
    let n = table.terms();
    let eval = |u: &Word| -> (f64, f64) {
        if u.is_empty() {
            (1.0, 0.0)
        } else {
            let (v, e) = table.evaluate(u, half, n);
            (v.re, e)
        }
    };
    let mut value = 0.0;
    let mut err = 0.0;
    for (u, v) in w.deconcatenations() {
        let (p, ep) = eval(&u);
        let (q, eq) = eval(&path_dual(&v));
        value += p * q;
        err += p.abs() * eq + q.abs() * ep + ep * eq + 2.0 * EPS * (p * q).abs();
    }
    err += EPS * (w.len() as f64 + 1.0) * value.abs();
    (value, err, n)
}

/// One evaluated MZV.
#[derive(Clone, Debug, PartialEq)]
pub struct MzvValue {
    pub composition: Composition,
    pub value: f64,
    pub abs_err: f64,
    pub method: String,
    pub terms_used: usize,
}

fn check_request(c: &Composition, target: f64) -> Result<()> {
    if !c.is_convergent() {
        return Err(Error::Divergent(c.to_string()));
    }
    if !(target > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target error must be positive, got {target}"
        )));
    }
    Ok(())
}

/// ζ(n1, ..., nr) = Σ_{0<k1<...<kr} 1/(k1^n1 ... kr^nr) to absolute error `target_err`.
pub fn mzv_value(c: &Composition, target_err: f64) -> Result<MzvValue> {
    check_request(c, target_err)?;
    let (value, abs_err, terms) = half_split_zeta(&c.to_word());
    if abs_err > target_err {
        return Err(Error::Precision {
            what: format!("ζ({c})"),
            target: target_err,
            achieved: abs_err,
        });
    }
    Ok(MzvValue {
        composition: c.clone(),
        value,
        abs_err: abs_err.max(f64::MIN_POSITIVE),
        method: "half-split".into(),
        terms_used: terms,
    })
}

/// ∫_K^∞ (1 + ln x)^m x^{-n} dx in closed form.
fn log_power_tail(m: u32, n: u32, k: f64) -> f64 {
    let a = (n - 1) as f64;
    let l = 1.0 + k.ln();
    let mut sum = 0.0;
    let mut falling = 1.0;
    for i in 0..=m {
        sum += falling * l.powi((m - i) as i32) / a.powi(i as i32 + 1);
        falling *= (m - i) as f64;
    }
    sum * k.powf(-a)
}

/// Direct truncated nested sum S_i(k) = Σ_{j≤k} S_{i-1}(j-1) j^{-n_i}, with a
/// ×10 inflated integral tail bound on the outermost sum.
pub fn mzv_value_nested_sum(
    c: &Composition,
    target_err: f64,
    max_terms: usize,
) -> Result<MzvValue> {
    check_request(c, target_err)?;
    let parts = c.parts();
    let m = (parts.len() - 1) as u32;
    let n = *parts.last().unwrap();
    let bound = |k: usize| 10.0 * log_power_tail(m, n, k as f64);
    let mut k = 1000usize;
    while bound(k) > target_err && k < max_terms {
        k = (k * 2).min(max_terms);
    }
    let tail = bound(k);
    if tail > target_err {
        return Err(Error::Precision {
            what: format!("ζ({c}) by nested sum"),
            target: target_err,
            achieved: tail,
        });
    }
    // prev[j] = S_{i-1}(j)
    let mut prev = vec![1.0f64; k + 1];
    prev[0] = 1.0;
    let mut first = true;
    for &p in parts {
        let mut cur = vec![0.0f64; k + 1];
        let mut acc = 0.0;
        for j in 1..=k {
            let base = if first { 1.0 } else { prev[j - 1] };
            acc += base * (j as f64).powi(-(p as i32));
            cur[j] = acc;
        }
        prev = cur;
        first = false;
    }
    let value = prev[k];
    let abs_err = tail + 4.0 * (k as f64) * EPS * value.abs();
    if abs_err > target_err {
        return Err(Error::Precision {
            what: format!("ζ({c}) by nested sum"),
            target: target_err,
            achieved: abs_err,
        });
    }
    Ok(MzvValue {
        composition: c.clone(),
        value,
        abs_err,
        method: "nested-sum".into(),
        terms_used: k,
    })
}

/// Render with 17 significant digits, shortest form that keeps them.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{:.16e}", x);
    let (mant, exp) = s.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let negative = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if negative { "-" } else { "" };
    if (-5..17).contains(&exp) {
        let out = if exp >= 0 {
            let e = exp as usize;
            if digits.len() <= e + 1 {
                format!("{}{}", digits, "0".repeat(e + 1 - digits.len()))
            } else {
                format!("{}.{}", &digits[..e + 1], &digits[e + 1..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        };
        format!("{sign}{out}")
    } else {
        let rest = &digits[1..];
        if rest.is_empty() {
            format!("{sign}{}e{exp}", &digits[..1])
        } else {
            format!("{sign}{}.{}e{exp}", &digits[..1], rest)
        }
    }
}

/// In-memory table of evaluated MZVs with a text file form.
#[derive(Debug, Default)]
pub struct MzvCache {
    records: RwLock<BTreeMap<Composition, MzvValue>>,
}

impl MzvCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.records.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, c: &Composition) -> Option<MzvValue> {
        self.records.read().unwrap().get(c).cloned()
    }

    pub fn insert(&self, v: MzvValue) {
        self.records
            .write()
            .unwrap()
            .insert(v.composition.clone(), v);
    }

    pub fn records(&self) -> Vec<MzvValue> {
        self.records.read().unwrap().values().cloned().collect()
    }

    /// One record per line: `n1,...,nr<TAB>value<TAB>abs_err`; `#` lines are comments.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let cache = MzvCache::new();
        let bad = |line: usize, reason: &str| Error::CacheFormat {
            path: path.display().to_string(),
            line,
            reason: reason.to_string(),
        };
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(bad(lineno, "expected 3 tab-separated fields"));
            }
            let composition: Composition = fields[0]
                .parse()
                .map_err(|_| bad(lineno, "malformed composition"))?;
            if !composition.is_convergent() {
                return Err(bad(lineno, "composition is not convergent"));
            }
            let value: f64 = fields[1]
                .parse()
                .map_err(|_| bad(lineno, "malformed value"))?;
            let abs_err: f64 = fields[2]
                .parse()
                .map_err(|_| bad(lineno, "malformed abs_err"))?;
            if !(abs_err > 0.0) || !value.is_finite() {
                return Err(bad(lineno, "abs_err must be positive and value finite"));
            }
            cache.insert(MzvValue {
                composition,
                value,
                abs_err,
                method: "cache".into(),
                terms_used: 0,
            });
        }
        Ok(cache)
    }

    /// Load, or start empty when the file does not exist.
    pub fn load_or_empty(path: &Path) -> Result<Self> {
        if path.exists() {
            Self::load(path)
        } else {
            Ok(Self::new())
        }
    }

    /// Atomic write: a temporary file in the same directory, then rename.
    pub fn store(&self, path: &Path) -> Result<()> {
        let mut text = String::from("# composition\tvalue\tabs_err\n");
        for r in self.records() {
            text.push_str(&format!(
                "{}\t{}\t{}\n",
                r.composition,
                format_sig17(r.value),
                format_sig17(r.abs_err)
            ));
        }
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
        let file_name = path
            .file_name()
            .ok_or_else(|| Error::InvalidArgument(format!("bad cache path {}", path.display())))?
            .to_string_lossy()
            .to_string();
        let tmp = match dir {
            Some(d) => d.join(format!(".{file_name}.tmp{}", std::process::id())),
            None => Path::new(&format!(".{file_name}.tmp{}", std::process::id())).to_path_buf(),
        };
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Evaluates MZVs and symbolic expressions through a cache.
pub struct MzvEvaluator {
    cache: MzvCache,
    target_err: f64,
}

impl MzvEvaluator {
    pub fn new(target_err: f64) -> Self {
        Self::with_cache(MzvCache::new(), target_err)
    }

    pub fn with_cache(cache: MzvCache, target_err: f64) -> Self {
        MzvEvaluator { cache, target_err }
    }

    pub fn cache(&self) -> &MzvCache {
        &self.cache
    }

    pub fn target_err(&self) -> f64 {
        self.target_err
    }

    pub fn value(&self, c: &Composition) -> Result<MzvValue> {
        if let Some(v) = self.cache.get(c) {
            if v.abs_err <= self.target_err {
                return Ok(v);
            }
        }
        let v = mzv_value(c, self.target_err)?;
        self.cache.insert(v.clone());
        Ok(v)
    }

    /// Σ coeff · ζ with the accumulated error bound.
    pub fn eval(&self, a: &MzvExpr) -> Result<(f64, f64)> {
        let mut value = 0.0;
        let mut err = 0.0;
        for (w, q) in a.terms() {
            let c = rational_to_f64(q);
            if w.is_empty() {
                value += c;
                err += EPS * c.abs();
                continue;
            }
            let v = self.value(&w.to_composition()?)?;
            value += c * v.value;
            err += c.abs() * v.abs_err + 2.0 * EPS * (c * v.value).abs();
        }
        Ok((value, err))
    }
}

/// Evaluate an expression with a fresh evaluator.
pub fn eval_expr(a: &MzvExpr, target_err: f64) -> Result<(f64, f64)> {
    MzvEvaluator::new(target_err).eval(a)
}
