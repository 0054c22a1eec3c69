//! Verification suites behind `svzeta verify`.

use anyhow::Result;
use num_complex::Complex64;
use serde::Serialize;
use svzeta::associator::{
    build_z_numeric, build_z_symbolic, deligne_w, e1_prime, e1_prime_residual, SingleValued,
    NUMERIC_TARGET,
};
use svzeta::fmodel::dims;
use svzeta::numerics::MzvEvaluator;
use svzeta::polylog::{
    bloch_wigner, check_single_valued, complex_series, eval_sv_l, plain_path_difference, PathSpec,
};
use svzeta::{Coeff, Composition, NCSeries, Word};

use crate::data::{identities, printed_tables, DIM_ROWS};

/// Whether a residual must stay below or rise above its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Below,
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl Check {
    pub fn below(suite: &str, name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            suite: suite.into(),
            name: name.into(),
            residual,
            tolerance,
            bound: Bound::Below,
            passed: residual <= tolerance,
        }
    }

    pub fn above(suite: &str, name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Check {
            suite: suite.into(),
            name: name.into(),
            residual,
            tolerance: threshold,
            bound: Bound::Above,
            passed: residual > threshold,
        }
    }
}

/// The three displayed weight-11 and weight-13 identities plus ζ_sv(5,3).
/// Weight-13 checks run only with `slow`.
pub fn paper_identities(slow: bool) -> Result<Vec<Check>> {
    let ids = identities()?;
    let order = ids
        .iter()
        .filter(|id| slow || id.weight <= 11)
        .map(|id| id.weight)
        .max()
        .unwrap_or(1);
    let sv = SingleValued::new(None, order)?;
    let ev = MzvEvaluator::new(1e-12);
    let mut out = Vec::new();
    for id in ids.iter().filter(|id| id.weight <= order) {
        let r = sv.verify_identity(&id.lhs, &id.rhs, &ev)?;
        let residual = if id.relative {
            r.residual / r.rhs.abs()
        } else {
            r.residual
        };
        out.push(Check::below("paper-identities", id.describe(), residual, id.tolerance));
    }
    Ok(out)
}

/// Computed dimensions against the printed tables with errata applied.
pub fn dims_suite() -> Result<Vec<Check>> {
    let tables = printed_tables()?;
    let t = dims(20)?;
    let computed = [&t.dim_h, &t.dim_l, &t.dim_hsv, &t.dim_lsv];
    let mut out = Vec::new();
    for (row, values) in DIM_ROWS.iter().zip(computed) {
        let mut mismatches = 0.0;
        for n in 1..=20 {
            let expect = tables.corrected(row, n).map(num_bigint::BigInt::from);
            if expect.as_ref() != Some(&values[n]) {
                mismatches += 1.0;
            }
        }
        let errata = tables.errata.iter().filter(|e| e.row == *row).count();
        let name = if errata > 0 {
            format!("{row} N=1..20 ({errata} printed cells corrected)")
        } else {
            format!("{row} N=1..20")
        };
        out.push(Check::below("dims", name, mismatches, 0.0));
    }
    Ok(out)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The principal path to z followed by a small loop once around `p`.
fn loop_around(z: Complex64, p: Complex64) -> Result<PathSpec> {
    let u = (z - p) / (z - p).norm() * 0.3;
    let i = c(0.0, 1.0);
    let mut vertices = PathSpec::principal(z)?.vertices().to_vec();
    vertices.extend([p + u, p + u * i, p - u, p - u * i, p + u, z]);
    Ok(PathSpec::new(vertices)?)
}

/// Paths to z that differ from the principal one by a loop around 0 and a loop around 1.
pub fn detours(z: Complex64) -> Result<(PathSpec, PathSpec)> {
    Ok((loop_around(z, c(0.0, 0.0))?, loop_around(z, c(1.0, 0.0))?))
}

/// Boundary values, single-valuedness and the limit at 1.
pub fn polylog_suite() -> Result<Vec<Check>> {
    const S: &str = "polylog";
    let w6 = complex_series(&deligne_w(&build_z_numeric(6, NUMERIC_TARGET)?)?.series);
    let w4 = w6.truncated(4);
    let e0: Word = "0".parse()?;
    let e1: Word = "1".parse()?;
    let e1e0: Word = "10".parse()?;
    let mut out = Vec::new();
    for z in [c(0.5, 0.5), c(-0.3, 0.7), c(1.5, -0.4)] {
        let f = eval_sv_l(z, &PathSpec::principal(z)?, &w4)?;
        let log_z2 = 2.0 * z.norm().ln();
        let log_1z2 = 2.0 * (c(1.0, 0.0) - z).norm().ln();
        out.push(Check::below(
            S,
            format!("svL_e0({z}) = log|z|^2"),
            (f.coeff(&e0)? - log_z2).norm(),
            1e-9,
        ));
        out.push(Check::below(
            S,
            format!("svL_e1({z}) = -log|1-z|^2"),
            (f.coeff(&e1)? + log_1z2).norm(),
            1e-9,
        ));
        let bw = c(-0.5 * log_z2 * log_1z2, 2.0 * bloch_wigner(z)?);
        out.push(Check::below(
            S,
            format!("svL_e1e0({z}) = 2i D(z) - 2 log|z| log|1-z|"),
            (f.coeff(&e1e0)? - bw).norm(),
            1e-9,
        ));
    }
    let z = c(0.5, 0.5);
    let straight = PathSpec::principal(z)?;
    let (around0, around1) = detours(z)?;
    for (label, path) in [("0", &around0), ("1", &around1)] {
        let worst = (1..=4)
            .flat_map(Word::all_of_length)
            .map(|w| check_single_valued(&w, z, &straight, path, &w4))
            .collect::<svzeta::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.push(Check::below(
            S,
            format!("svL path independence, loop around {label}, weight <= 4"),
            worst,
            1e-6,
        ));
    }
    out.push(Check::above(
        S,
        "plain L_e0 changes along the loop around 0",
        plain_path_difference(&e0, z, &straight, &around0)?,
        1e-3,
    ));
    out.push(Check::above(
        S,
        "plain L_e1e0 changes along the loop around 1",
        plain_path_difference(&e1e0, z, &straight, &around1)?,
        1e-3,
    ));
    let near_one = c(1.0 - 1e-12, 0.0);
    let f = eval_sv_l(near_one, &PathSpec::principal(near_one)?, &w6)?;
    let worst = (1..=6)
        .flat_map(Word::all_of_length)
        .filter(|w| w.is_convergent())
        .map(|w| (*f.series.coeff(&w) - *w6.coeff(&w)).norm())
        .fold(0.0, f64::max);
    out.push(Check::below(
        S,
        "svL(1 - 1e-12) = W, convergent words of weight <= 6",
        worst,
        1e-4,
    ));
    Ok(out)
}

/// ζ_sv(2) = 0, ζ_sv(2n+1) = 2ζ(2n+1) and the e1′ fixed point.
pub fn associator_suite() -> Result<Vec<Check>> {
    const S: &str = "associator";
    let mut out = Vec::new();
    let sym = deligne_w(&build_z_symbolic(8))?;
    let zeta2 = sym.series.coeff(&"10".parse()?);
    out.push(Check::below(
        S,
        "zsv(2) is the zero symbol",
        if zeta2.is_zero() { 0.0 } else { 1.0 },
        0.0,
    ));
    let sv = SingleValued::new(None, 11)?;
    let ev = MzvEvaluator::new(1e-12);
    for n in [3u32, 5, 7, 9, 11] {
        let comp = Composition::new(vec![n])?;
        let ratio = sv.zeta_sv(&comp)?.numeric / ev.value(&comp)?.value;
        out.push(Check::below(
            S,
            format!("zsv({n}) / z({n}) = 2"),
            (ratio - 2.0).abs(),
            1e-8,
        ));
    }
    let z8 = build_z_symbolic(8);
    let residual = e1_prime_residual(&z8, &e1_prime(&deligne_w(&z8)?)?)?;
    let nonzero = residual.terms().count();
    out.push(Check::below(
        S,
        "e1' fixed point, symbolic, N = 8 (nonzero coefficients)",
        nonzero as f64,
        0.0,
    ));
    let z10 = build_z_numeric(10, NUMERIC_TARGET)?;
    let residual: NCSeries<_> = e1_prime_residual(&z10, &e1_prime(&deligne_w(&z10)?)?)?;
    out.push(Check::below(
        S,
        "e1' fixed point, numeric, N = 10 (max |coefficient|)",
        residual.max_norm(|b| b.mid.norm()),
        1e-8,
    ));
    Ok(out)
}
