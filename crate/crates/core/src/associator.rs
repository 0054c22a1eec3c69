//! Drinfeld's associator Z, Deligne's associator W and single-valued MZVs.
//!
//! Z = Σ_w ζ(w) w with shuffle-regularized coefficients. W is the unique
//! series with W ∘ σZ = Z, where ∘ is the Ihara action; its coefficients are
//! the single-valued MZVs ζ_sv(w).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::mzvsym::{regularize, MzvExpr, Regularizer};
use crate::numerics::{half_split_zeta, mzv_value, MzvEvaluator};
use crate::ring::{rational_to_f64, Ball, Coeff};
use crate::series::{conjugated_e1, ihara_act, ihara_solve, NCSeries};
use crate::words::{Composition, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssociatorKind {
    Z,
    SigmaZ,
    W,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Associator<R> {
    pub series: NCSeries<R>,
    pub kind: AssociatorKind,
}

impl<R: Coeff> Associator<R> {
    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn coeff(&self, w: &Word) -> Result<&R> {
        if w.len() > self.order() {
            return Err(Error::WeightExceedsOrder {
                weight: w.len(),
                order: self.order(),
            });
        }
        Ok(self.series.coeff(w))
    }

    pub fn sigma(&self) -> Self {
        Associator {
            series: self.series.sigma_twist(),
            kind: AssociatorKind::SigmaZ,
        }
    }
}

/// Z with coefficients regularize(w).
pub fn build_z_symbolic(order: usize) -> Associator<MzvExpr> {
    Associator {
        series: NCSeries::from_fn(order, regularize),
        kind: AssociatorKind::Z,
    }
}

/// Default error target for the convergent coefficients of numeric Z.
pub const NUMERIC_TARGET: f64 = 1e-12;

/// Z with ball coefficients: convergent words from the half-split evaluator,
/// divergent ones through the regularization recursion.
pub fn build_z_numeric(order: usize, target_err: f64) -> Result<Associator<Ball>> {
    if !(target_err > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target error must be positive, got {target_err}"
        )));
    }
    let leaf = |w: &Word| {
        let (v, e, _) = half_split_zeta(w);
        Ball::real(v, e)
    };
    let reg = Regularizer::new(Ball::zero(), Some(Ball::zero()), leaf);
    let z = NCSeries::from_fn(order, |w| reg.value(w));
    if let Some((w, c)) = z
        .terms()
        .find(|(w, c)| w.is_convergent() && !(c.rad <= target_err))
    {
        return Err(Error::Precision {
            what: format!("ζ({w})"),
            target: target_err,
            achieved: c.rad,
        });
    }
    Ok(Associator {
        series: z,
        kind: AssociatorKind::Z,
    })
}

/// W = ihara_solve(σZ, Z).
pub fn deligne_w<R: Coeff>(z: &Associator<R>) -> Result<Associator<R>> {
    if z.kind != AssociatorKind::Z {
        return Err(Error::InvalidArgument(
            "deligne_w expects Drinfeld's associator".into(),
        ));
    }
    let w = ihara_solve(&z.series.sigma_twist(), &z.series)?;
    Ok(Associator {
        series: w,
        kind: AssociatorKind::W,
    })
}

/// e1′ = W e1 W^{-1}.
pub fn e1_prime<R: Coeff>(w: &Associator<R>) -> Result<NCSeries<R>> {
    if w.order() < 1 {
        return Err(Error::InvalidArgument("e1' needs order at least 1".into()));
    }
    conjugated_e1(&w.series)
}

/// Z(-e0,-e1′) e1′ Z(-e0,-e1′)^{-1} - Z e1 Z^{-1}.
pub fn e1_prime_residual<R: Coeff>(z: &Associator<R>, e1p: &NCSeries<R>) -> Result<NCSeries<R>> {
    let n = z.order();
    let e0 = NCSeries::letter(n, Letter::E0);
    let twisted = z.series.sigma_twist().substitute(&e0, e1p)?;
    let lhs = twisted.mul(e1p)?.mul(&twisted.inverse()?)?;
    lhs.sub(&conjugated_e1(&z.series)?)
}

/// W ∘ σZ - Z.
pub fn fixed_point_residual<R: Coeff>(
    w: &Associator<R>,
    z: &Associator<R>,
) -> Result<NCSeries<R>> {
    ihara_act(&w.series, &z.series.sigma_twist())?.sub(&z.series)
}

/// Magnitude bound for a ball: |mid| + rad.
pub fn ball_bound(b: &Ball) -> f64 {
    b.mid.norm() + b.rad
}

/// ζ_sv of one word.
#[derive(Clone, Debug, PartialEq)]
pub struct SvValue {
    pub word: Word,
    /// Coefficient of the word in symbolic W, when W was built to that weight.
    pub symbolic: Option<MzvExpr>,
    pub numeric: f64,
    pub abs_err: f64,
}

impl SvValue {
    pub fn composition(&self) -> Option<Composition> {
        self.word.to_composition().ok()
    }
}

/// Residual of a numeric identity ζ_sv(lhs) = Σ q Π ζ(c).
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub abs_err: f64,
}

/// One product term of an identity right-hand side.
pub type ProductTerm = (BigRational, Vec<Composition>);

/// Symbolic and numeric W built together.
pub struct SingleValued {
    symbolic: Option<Associator<MzvExpr>>,
    numeric: Associator<Ball>,
}

impl SingleValued {
    /// Build numeric W to `numeric_order` and, when given, symbolic W to `symbolic_order`.
    pub fn new(symbolic_order: Option<usize>, numeric_order: usize) -> Result<Self> {
        let numeric = deligne_w(&build_z_numeric(numeric_order, NUMERIC_TARGET)?)?;
        let symbolic = match symbolic_order {
            Some(n) => Some(deligne_w(&build_z_symbolic(n))?),
            None => None,
        };
        Ok(SingleValued { symbolic, numeric })
    }

    pub fn from_parts(symbolic: Option<Associator<MzvExpr>>, numeric: Associator<Ball>) -> Self {
        SingleValued { symbolic, numeric }
    }

    pub fn symbolic(&self) -> Option<&Associator<MzvExpr>> {
        self.symbolic.as_ref()
    }

    pub fn numeric(&self) -> &Associator<Ball> {
        &self.numeric
    }

    pub fn order(&self) -> usize {
        self.numeric.order()
    }

    /// ζ_sv(w) for any word, divergent ones included.
    pub fn zeta_sv_word(&self, w: &Word) -> Result<SvValue> {
        let b = self.numeric.coeff(w)?;
        let symbolic = match &self.symbolic {
            Some(s) if w.len() <= s.order() => Some(s.series.coeff(w).clone()),
            _ => None,
        };
        Ok(SvValue {
            word: *w,
            symbolic,
            numeric: b.mid.re,
            abs_err: b.rad + b.mid.im.abs(),
        })
    }

    pub fn zeta_sv(&self, c: &Composition) -> Result<SvValue> {
        if !c.is_convergent() {
            return Err(Error::Divergent(c.to_string()));
        }
        self.zeta_sv_word(&c.to_word())
    }

    /// |ζ_sv(lhs) - Σ q Π ζ(c)| with the right side from the MZV evaluator.
    pub fn verify_identity(
        &self,
        lhs: &Composition,
        rhs: &[ProductTerm],
        evaluator: &MzvEvaluator,
    ) -> Result<IdentityResidual> {
        let sv = self.zeta_sv(lhs)?;
        let (rhs_value, rhs_err) = eval_products(rhs, evaluator)?;
        Ok(IdentityResidual {
            lhs: sv.numeric,
            rhs: rhs_value,
            residual: (sv.numeric - rhs_value).abs(),
            abs_err: sv.abs_err + rhs_err,
        })
    }
}

/// Σ q Π ζ(c) with a first-order error bound.
pub fn eval_products(rhs: &[ProductTerm], evaluator: &MzvEvaluator) -> Result<(f64, f64)> {
    let mut value = 0.0;
    let mut err = 0.0;
    for (q, factors) in rhs {
        let mut prod = Ball::from_rational(q);
        for c in factors {
            let v = evaluator.value(c)?;
            prod = prod.times(&Ball::real(v.value, v.abs_err));
        }
        value += prod.mid.re;
        err += prod.rad + f64::EPSILON * prod.mid.norm();
    }
    Ok((value, err))
}

/// ζ(c) as a numeric ball, for single compositions.
pub fn zeta_ball(c: &Composition, target_err: f64) -> Result<Ball> {
    let v = mzv_value(c, target_err)?;
    Ok(Ball::real(v.value, v.abs_err))
}

/// Evaluate a symbolic coefficient and compare with the numeric one.
pub fn symbolic_numeric_gap(sv: &SvValue, evaluator: &MzvEvaluator) -> Result<Option<(f64, f64)>> {
    let Some(expr) = &sv.symbolic else {
        return Ok(None);
    };
    let (v, e) = evaluator.eval(expr)?;
    Ok(Some(((v - sv.numeric).abs(), e + sv.abs_err)))
}

/// Exact rational helper for tests and data files.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Largest |coefficient| bound over a ball series.
pub fn max_ball_norm(s: &NCSeries<Ball>) -> f64 {
    s.max_norm(ball_bound)
}

/// Numeric W coefficient as a complex number.
pub fn numeric_coeff(w: &Associator<Ball>, word: &Word) -> Result<Complex64> {
    Ok(w.coeff(word)?.mid)
}

/// Rational-valued series to balls.
pub fn to_balls(s: &NCSeries<BigRational>) -> NCSeries<Ball> {
    s.map(|q| Ball::real(rational_to_f64(q), 0.0))
}
