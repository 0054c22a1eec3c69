//! Linearized Ihara operator on depth-graded generating series.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::associator::SingleValued;
use crate::error::{Error, Result};
use crate::numerics::MzvEvaluator;
use crate::ring::Coeff;
use crate::words::Composition;

/// Polynomial in commuting x1, …, x_depth with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthPoly {
    depth: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl DepthPoly {
    pub fn zero(depth: usize) -> Self {
        assert!(depth >= 1, "depth must be at least 1");
        DepthPoly {
            depth,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(depth: usize, q: BigRational) -> Self {
        let mut p = Self::zero(depth);
        p.add_term(vec![0; depth], q);
        p
    }

    pub fn one(depth: usize) -> Self {
        Self::constant(depth, BigRational::from_integer(1.into()))
    }

    /// x_i, 1-based.
    pub fn variable(depth: usize, i: usize) -> Self {
        assert!((1..=depth).contains(&i), "variable index out of range");
        let mut e = vec![0; depth];
        e[i - 1] = 1;
        let mut p = Self::zero(depth);
        p.add_term(e, BigRational::from_integer(1.into()));
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, BigRational)>>(
        depth: usize,
        terms: I,
    ) -> Result<Self> {
        let mut p = Self::zero(depth);
        for (e, q) in terms {
            if e.len() != depth {
                return Err(Error::DepthMismatch {
                    expected: depth,
                    found: e.len(),
                });
            }
            p.add_term(e, q);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, q: BigRational) {
        let entry = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *entry += q;
        if Coeff::is_zero(entry) {
            self.terms.remove(&e);
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn check_depth(&self, other: &Self) -> Result<()> {
        if self.depth != other.depth {
            return Err(Error::DepthMismatch {
                expected: self.depth,
                found: other.depth,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_depth(other)?;
        let mut out = self.clone();
        for (e, q) in &other.terms {
            out.add_term(e.clone(), q.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&BigRational::from_integer((-1).into())))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut out = Self::zero(self.depth);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * q);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_depth(other)?;
        let mut out = Self::zero(self.depth);
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, p * q);
            }
        }
        Ok(out)
    }

    fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(self.depth);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// p(images[0], …, images[depth-1]); all images share one target depth.
    pub fn compose(&self, images: &[DepthPoly]) -> Result<Self> {
        if images.len() != self.depth {
            return Err(Error::DepthMismatch {
                expected: self.depth,
                found: images.len(),
            });
        }
        let target = images[0].depth;
        for im in images {
            if im.depth != target {
                return Err(Error::DepthMismatch {
                    expected: target,
                    found: im.depth,
                });
            }
        }
        let mut out = Self::zero(target);
        for (e, q) in &self.terms {
            let mut term = Self::constant(target, q.clone());
            for (im, &k) in images.iter().zip(e) {
                term = term.mul(&im.pow(k)?)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Evaluate at rational points.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.depth {
            return Err(Error::DepthMismatch {
                expected: self.depth,
                found: point.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (e, q) in &self.terms {
            let mut t = q.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl fmt::Display for DepthPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let one = BigRational::from_integer(BigInt::from(1));
        // highest degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (k, (e, q)) in terms.into_iter().enumerate() {
            let neg = q.is_negative();
            if k > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, k)
                    }
                })
                .collect();
            let c = q.abs();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c == one {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{c}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

fn expect_depth(p: &DepthPoly, depth: usize) -> Result<()> {
    if p.depth != depth {
        return Err(Error::DepthMismatch {
            expected: depth,
            found: p.depth,
        });
    }
    Ok(())
}

fn x(depth: usize, i: usize) -> DepthPoly {
    DepthPoly::variable(depth, i)
}

/// f ∘̲ g = f(x1)g(x2) + f(x2 - x1)(g(x1) - g(x2)) for f, g of depth 1.
pub fn lin_ihara_11(f: &DepthPoly, g: &DepthPoly) -> Result<DepthPoly> {
    expect_depth(f, 1)?;
    expect_depth(g, 1)?;
    let d = 2;
    let f_x1 = f.compose(&[x(d, 1)])?;
    let f_x21 = f.compose(&[x(d, 2).sub(&x(d, 1))?])?;
    let g_x1 = g.compose(&[x(d, 1)])?;
    let g_x2 = g.compose(&[x(d, 2)])?;
    f_x1.mul(&g_x2)?.add(&f_x21.mul(&g_x1.sub(&g_x2)?)?)
}

/// f ∘̲ g = f(x1)g(x2,x3) + f(x2-x1)(g(x1,x3) - g(x2,x3)) + f(x3-x2)(g(x1,x2) - g(x1,x3))
/// for f of depth 1 and g of depth 2.
pub fn lin_ihara_12(f: &DepthPoly, g: &DepthPoly) -> Result<DepthPoly> {
    expect_depth(f, 1)?;
    expect_depth(g, 2)?;
    let d = 3;
    let f_at = |p: DepthPoly| f.compose(&[p]);
    let g_at = |i: usize, j: usize| g.compose(&[x(d, i), x(d, j)]);
    let t1 = f_at(x(d, 1))?.mul(&g_at(2, 3)?)?;
    let t2 = f_at(x(d, 2).sub(&x(d, 1))?)?.mul(&g_at(1, 3)?.sub(&g_at(2, 3)?)?)?;
    let t3 = f_at(x(d, 3).sub(&x(d, 2))?)?.mul(&g_at(1, 2)?.sub(&g_at(1, 3)?)?)?;
    t1.add(&t2)?.add(&t3)
}

/// One row of the depth-one comparison ζ_sv(n) vs (1 - (-1)^n) ζ(n).
#[derive(Clone, Debug, PartialEq)]
pub struct Depth1Row {
    pub n: u32,
    pub sv_value: f64,
    pub expected: f64,
    pub residual: f64,
    pub abs_err: f64,
    /// Whether symbolic ζ_sv(n) is the zero expression, when available.
    pub symbolic_zero: Option<bool>,
}

/// Compare ζ_sv(n) with (1 - (-1)^n) ζ(n) for 2 ≤ n ≤ n_max.
pub fn depth1_sv_check(
    n_max: u32,
    sv: &SingleValued,
    evaluator: &MzvEvaluator,
) -> Result<Vec<Depth1Row>> {
    if n_max as usize > sv.order() {
        return Err(Error::WeightExceedsOrder {
            weight: n_max as usize,
            order: sv.order(),
        });
    }
    (2..=n_max)
        .map(|n| {
            let c = Composition::new(vec![n])?;
            let v = sv.zeta_sv(&c)?;
            let z = evaluator.value(&c)?;
            let factor = if n % 2 == 1 { 2.0 } else { 0.0 };
            let expected = factor * z.value;
            Ok(Depth1Row {
                n,
                sv_value: v.numeric,
                expected,
                residual: (v.numeric - expected).abs(),
                abs_err: v.abs_err + factor * z.abs_err,
                symbolic_zero: v.symbolic.as_ref().map(|s| s.is_zero()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn ihara_11_examples() {
        let one = DepthPoly::one(1);
        let x1 = DepthPoly::variable(1, 1);
        assert_eq!(lin_ihara_11(&one, &one).unwrap(), DepthPoly::one(2));
        assert_eq!(lin_ihara_11(&x1, &one).unwrap(), DepthPoly::variable(2, 1));
        // x1x2 - (x2 - x1)^2
        let r = lin_ihara_11(&x1, &x1).unwrap();
        assert_eq!(r.to_string(), "-x1^2 + 3*x1*x2 - x2^2");
    }

    #[test]
    fn ihara_12_examples() {
        let one1 = DepthPoly::one(1);
        let x1 = DepthPoly::variable(1, 1);
        let g = DepthPoly::from_terms(2, [(vec![2, 1], q(1)), (vec![0, 3], q(-2))]).unwrap();
        // f = 1 telescopes to g(x1, x2)
        let expect = g
            .compose(&[DepthPoly::variable(3, 1), DepthPoly::variable(3, 2)])
            .unwrap();
        assert_eq!(lin_ihara_12(&one1, &g).unwrap(), expect);
        assert_eq!(
            lin_ihara_12(&x1, &DepthPoly::one(2)).unwrap(),
            DepthPoly::variable(3, 1)
        );
    }

    #[test]
    fn depth_mismatch() {
        let p1 = DepthPoly::one(1);
        let p2 = DepthPoly::one(2);
        assert_eq!(
            lin_ihara_11(&p1, &p2),
            Err(Error::DepthMismatch { expected: 1, found: 2 })
        );
        assert!(lin_ihara_12(&p1, &p1).is_err());
        assert!(p1.add(&p2).is_err());
    }
}
