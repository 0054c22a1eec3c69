//! Multiple polylogarithms from the KZ equation and their single-valued versions.
//!
//! L(z) solves dL = L · (e0/z + e1/(1-z)) dz, so for w = u a the coefficient
//! satisfies L_w' = L_u · ω_a with ω_0 = 1/z, ω_1 = 1/(1-z). At the tangential
//! base point L ~ exp(e0 log z). With this ordering L_{e1 e0^{n-1}}(z) = Li_n(z)
//! and L(1) = Z on the regularized coefficients.
//!
//! The single-valued series is 𝓛(z) = L̃(z̄)|_{e1 → e1′} · L(z) where L̃ reverses
//! words and e1′ = W e1 W^{-1}.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mzvsym::Regularizer;
use crate::numerics::power_series_table;
use crate::ring::Ball;
use crate::series::{substitute_e1, NCSeries};
use crate::words::{Letter, Word};

/// Taylor degree per integration step.
const TAYLOR_DEGREE: usize = 48;
/// Step length as a fraction of the distance to the nearest singularity.
const STEP_FRACTION: f64 = 1.0 / 3.0;
/// Largest start point on the real axis for the power-series initial values.
const START_MAX: f64 = 0.25;
/// Segments closer than this to 0 or 1 are rejected.
const MIN_CLEARANCE: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (a - p).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * t - p).norm()
}

/// Piecewise-linear path 0 → v1 → … → vn, leaving 0 along the positive real axis.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    vertices: Vec<Complex64>,
}

impl PathSpec {
    pub fn new(vertices: Vec<Complex64>) -> Result<Self> {
        let Some(&first) = vertices.first() else {
            return Err(Error::InvalidPath("path has no vertices".into()));
        };
        if first.im != 0.0 || !(first.re > 0.0 && first.re < 1.0) {
            return Err(Error::InvalidPath(format!(
                "first vertex {first} must lie in (0, 1) on the real axis"
            )));
        }
        if vertices.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidPath("non-finite vertex".into()));
        }
        for pair in vertices.windows(2) {
            for s in [c(0.0, 0.0), c(1.0, 0.0)] {
                if segment_distance(pair[0], pair[1], s) < MIN_CLEARANCE {
                    return Err(Error::InvalidPath(format!(
                        "segment {} → {} passes through {}",
                        pair[0], pair[1], s.re
                    )));
                }
            }
        }
        Ok(PathSpec { vertices })
    }

    /// Path realizing the principal branch: straight from 0 when possible,
    /// over the upper half plane for real z outside (0, 1).
    pub fn principal(z: Complex64) -> Result<Self> {
        check_point(z)?;
        let s = c(START_MAX, 0.0);
        if z.im == 0.0 {
            if z.re > 0.0 && z.re < 1.0 {
                return PathSpec::new(vec![z]);
            }
            if z.re < 0.0 {
                return PathSpec::new(vec![s, c(0.0, START_MAX), z]);
            }
            return PathSpec::new(vec![s, c(0.5, 0.5), z]);
        }
        PathSpec::new(vec![s, z])
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn end(&self) -> Complex64 {
        *self.vertices.last().unwrap()
    }

    /// Mirror image in the real axis.
    pub fn conjugate(&self) -> Self {
        PathSpec {
            vertices: self.vertices.iter().map(|v| v.conj()).collect(),
        }
    }
}

fn check_point(z: Complex64) -> Result<()> {
    if z == c(0.0, 0.0) || z == c(1.0, 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "polylogarithms need z outside {{0, 1}}, got {z}"
        )));
    }
    Ok(())
}

/// Value of the generating series at the end of a path.
#[derive(Clone, Debug, PartialEq)]
pub struct PolylogFrame {
    pub z: Complex64,
    pub order: usize,
    pub series: NCSeries<Complex64>,
    /// Estimated absolute error per coefficient.
    pub err_estimate: f64,
}

impl PolylogFrame {
    pub fn coeff(&self, w: &Word) -> Result<Complex64> {
        if w.len() > self.order {
            return Err(Error::WeightExceedsOrder {
                weight: w.len(),
                order: self.order,
            });
        }
        Ok(*self.series.coeff(w))
    }
}

/// Series at a real point 0 < s ≤ 1/2 from power series and shuffle regularization.
fn initial_values(s: f64, order: usize) -> (Vec<Complex64>, f64) {
    let table = power_series_table();
    let z = c(s, 0.0);
    let n = table.terms();
    let leaf = move |w: &Word| {
        let (v, e) = table.evaluate(w, z, n);
        Ball::new(v, e)
    };
    let reg = Regularizer::new(Ball::real(s.ln(), s.ln().abs() * f64::EPSILON), None, leaf);
    let count = (1usize << (order + 1)) - 1;
    let mut values = Vec::with_capacity(count);
    let mut err: f64 = 0.0;
    for i in 0..count {
        let b = reg.value(&Word::from_index(i));
        err = err.max(b.rad);
        values.push(b.mid);
    }
    (values, err)
}

/// One Taylor step of length h (complex) from the point p. Coefficients are
/// kept scaled by h^k so they stay bounded near the singularities.
fn taylor_step(values: &mut [Complex64], p: Complex64, h: Complex64) -> f64 {
    let m = TAYLOR_DEGREE;
    let count = values.len();
    let mut coeffs = vec![c(0.0, 0.0); count * (m + 1)];
    let r0 = h / p;
    let r1 = h / (c(1.0, 0.0) - p);
    let mut estimate: f64 = 0.0;
    for i in 0..count {
        let base = i * (m + 1);
        coeffs[base] = values[i];
        if i == 0 {
            continue;
        }
        let w = Word::from_index(i);
        let parent = Word::from_bits(w.len() - 1, w.bits() >> 1).index() * (m + 1);
        // (p + t) L_w' = L_u  or  (1 - p - t) L_w' = L_u
        for k in 0..m {
            let b_u = coeffs[parent + k];
            let b_w = coeffs[base + k] * k as f64;
            let scale = 1.0 / (k + 1) as f64;
            coeffs[base + k + 1] = if w.bits() & 1 == 0 {
                (b_u - b_w) * r0 * scale
            } else {
                (b_u + b_w) * r1 * scale
            };
        }
        let mut acc = c(0.0, 0.0);
        let mut magnitude = 0.0;
        for k in (0..=m).rev() {
            acc += coeffs[base + k];
            magnitude += coeffs[base + k].norm();
        }
        let tail = coeffs[base + m].norm() + coeffs[base + m - 1].norm();
        estimate = estimate.max(tail + 4.0 * m as f64 * f64::EPSILON * magnitude);
        values[i] = acc;
    }
    estimate
}

fn integrate_segment(values: &mut [Complex64], from: Complex64, to: Complex64) -> f64 {
    let mut p = from;
    let mut err = 0.0;
    loop {
        let remaining = to - p;
        let dist = remaining.norm();
        if dist == 0.0 {
            break;
        }
        let clearance = p.norm().min((c(1.0, 0.0) - p).norm());
        let step = (clearance * STEP_FRACTION).min(dist);
        let h = if step >= dist {
            remaining
        } else {
            remaining * (step / dist)
        };
        err += taylor_step(values, p, h);
        p = if step >= dist { to } else { p + h };
    }
    err
}

/// L(z) continued along `path` (which must end at z), truncated at `order`.
pub fn eval_l(z: Complex64, path: &PathSpec, order: usize) -> Result<PolylogFrame> {
    check_point(z)?;
    let end = path.end();
    if (end - z).norm() > 1e-14 * (1.0 + z.norm()) {
        return Err(Error::InvalidPath(format!("path ends at {end}, not at {z}")));
    }
    let first = path.vertices()[0];
    let s = first.re.min(START_MAX);
    let (mut values, mut err) = initial_values(s, order);
    let mut prev = c(s, 0.0);
    for &v in path.vertices() {
        err += integrate_segment(&mut values, prev, v);
        prev = v;
    }
    Ok(PolylogFrame {
        z,
        order,
        series: NCSeries::from_fn(order, |w| values[w.index()]),
        err_estimate: err,
    })
}

/// Numeric W converted to complex coefficients.
pub fn complex_series(s: &NCSeries<Ball>) -> NCSeries<Complex64> {
    s.map(|b| b.mid)
}

/// 𝓛(z) = L̃(z̄)|_{e1 → W e1 W^{-1}} · L(z), with L(z̄) taken along the mirrored path.
pub fn eval_sv_l(
    z: Complex64,
    path: &PathSpec,
    w: &NCSeries<Complex64>,
) -> Result<PolylogFrame> {
    let order = w.order();
    let l = eval_l(z, path, order)?;
    let lbar = eval_l(z.conj(), &path.conjugate(), order)?;
    let twisted = substitute_e1(&lbar.series.reversed(), w)?;
    let series = twisted.mul(&l.series)?;
    let terms = (order + 1) as f64;
    let err_estimate = terms
        * (l.err_estimate * twisted.max_norm(|x| x.norm())
            + lbar.err_estimate * terms * l.series.max_norm(|x| x.norm()));
    Ok(PolylogFrame {
        z,
        order,
        series,
        err_estimate,
    })
}

/// Bloch–Wigner dilogarithm D(z) = Im(Li2(z)) + arg(1 - z) log|z|.
pub fn bloch_wigner(z: Complex64) -> Result<f64> {
    let path = PathSpec::principal(z)?;
    let l = eval_l(z, &path, 2)?;
    let li2 = l.coeff(&Word::from_bits(2, 0b10))?;
    Ok(li2.im + (c(1.0, 0.0) - z).arg() * z.norm().ln())
}

/// |𝓛_w along path_a − 𝓛_w along path_b|.
pub fn check_single_valued(
    word: &Word,
    z: Complex64,
    path_a: &PathSpec,
    path_b: &PathSpec,
    w: &NCSeries<Complex64>,
) -> Result<f64> {
    let a = eval_sv_l(z, path_a, w)?;
    let b = eval_sv_l(z, path_b, w)?;
    Ok((a.coeff(word)? - b.coeff(word)?).norm())
}

/// Same comparison for the plain, multivalued L_w.
pub fn plain_path_difference(
    word: &Word,
    z: Complex64,
    path_a: &PathSpec,
    path_b: &PathSpec,
) -> Result<f64> {
    let order = word.len().max(1);
    let a = eval_l(z, path_a, order)?;
    let b = eval_l(z, path_b, order)?;
    Ok((a.coeff(word)? - b.coeff(word)?).norm())
}

/// Largest |L(u ш v) − L(u) L(v)| over the frame.
pub fn group_like_defect(frame: &PolylogFrame) -> f64 {
    frame.series.group_like_defect(|x| x.norm())
}

/// Letter differential e0/z + e1/(1 - z) as a series of the given order.
pub fn kz_form(z: Complex64, order: usize) -> NCSeries<Complex64> {
    NCSeries::from_terms(
        order,
        [
            (Word::letter_word(Letter::E0), c(1.0, 0.0) / z),
            (Word::letter_word(Letter::E1), c(1.0, 0.0) / (c(1.0, 0.0) - z)),
        ],
    )
}
