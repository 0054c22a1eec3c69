//! Truncated non-commutative power series in e0, e1.
//!
//! Coefficients are stored densely, indexed by [`Word::index`], for every word
//! of weight at most the truncation order. Binary operations require equal
//! orders; use [`NCSeries::truncated`] or [`NCSeries::extended`] to convert
//! explicitly.

use num_bigint::BigInt;
use num_rational::BigRational;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ring::Coeff;
use crate::words::{shuffle_counts, Letter, Word};

/// Above this many target coefficients, products are computed in parallel.
const PAR_THRESHOLD: usize = 2048;

fn series_len(order: usize) -> usize {
    (1usize << (order + 1)) - 1
}

#[derive(Clone, PartialEq, Debug)]
pub struct NCSeries<R> {
    order: usize,
    coeffs: Vec<R>,
}

impl<R: Coeff> NCSeries<R> {
    pub fn zero(order: usize) -> Self {
        NCSeries {
            order,
            coeffs: vec![R::zero(); series_len(order)],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = R::one();
        s
    }

    /// The series consisting of the single letter `l`.
    pub fn letter(order: usize, l: Letter) -> Self {
        Self::from_terms(order, [(Word::letter_word(l), R::one())])
    }

    /// Terms of weight above `order` are dropped.
    pub fn from_terms<I: IntoIterator<Item = (Word, R)>>(order: usize, terms: I) -> Self {
        let mut s = Self::zero(order);
        for (w, c) in terms {
            if w.len() <= order {
                s.coeffs[w.index()].accumulate(&c);
            }
        }
        s
    }

    pub fn from_fn<F: Fn(&Word) -> R + Sync + Send>(order: usize, f: F) -> Self {
        let coeffs = (0..series_len(order))
            .into_par_iter()
            .map(|i| f(&Word::from_index(i)))
            .collect();
        NCSeries { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, w: &Word) -> &R {
        assert!(
            w.len() <= self.order,
            "word {w} beyond truncation order {}",
            self.order
        );
        &self.coeffs[w.index()]
    }

    pub fn set_coeff(&mut self, w: &Word, c: R) {
        assert!(w.len() <= self.order);
        self.coeffs[w.index()] = c;
    }

    pub fn constant(&self) -> &R {
        &self.coeffs[0]
    }

    /// Nonzero coefficients in word order.
    pub fn terms(&self) -> impl Iterator<Item = (Word, &R)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Word::from_index(i), c))
    }

    /// Nonzero coefficients of the given weight.
    pub fn weight_part(&self, weight: usize) -> Vec<(Word, R)> {
        if weight > self.order {
            return Vec::new();
        }
        Word::all_of_length(weight)
            .filter_map(|w| {
                let c = &self.coeffs[w.index()];
                (!c.is_zero()).then(|| (w, c.clone()))
            })
            .collect()
    }

    /// Drop all coefficients above `order` (which must not exceed the current order).
    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order);
        NCSeries {
            order,
            coeffs: self.coeffs[..series_len(order)].to_vec(),
        }
    }

    /// Same series viewed at a higher order, with zero coefficients above the old one.
    pub fn extended(&self, order: usize) -> Self {
        assert!(order >= self.order);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(series_len(order), R::zero());
        NCSeries { order, coeffs }
    }

    pub fn map<S: Coeff, F: Fn(&R) -> S + Sync + Send>(&self, f: F) -> NCSeries<S> {
        NCSeries {
            order: self.order,
            coeffs: self.coeffs.par_iter().map(f).collect(),
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(NCSeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.plus(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(NCSeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.minus(b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.negated())
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.times(c))
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let (a, b) = (&self.coeffs, &other.coeffs);
        let coeff_at = |i: usize| {
            let w = Word::from_index(i);
            let mut acc = R::zero();
            for j in 0..=w.len() {
                let (u, v) = w.split_at(j);
                acc.accumulate_product(&a[u.index()], &b[v.index()]);
            }
            acc
        };
        let n = series_len(self.order);
        let coeffs = if n > PAR_THRESHOLD {
            (0..n).into_par_iter().map(coeff_at).collect()
        } else {
            (0..n).map(coeff_at).collect()
        };
        Ok(NCSeries {
            order: self.order,
            coeffs,
        })
    }

    /// Multiplicative inverse; the constant coefficient must be invertible.
    pub fn inverse(&self) -> Result<Self> {
        let c_inv = self.constant().recip().ok_or(Error::NonUnit)?;
        let unit = c_inv.is_one();
        let a = &self.coeffs;
        let mut b = vec![R::zero(); a.len()];
        b[0] = c_inv.clone();
        for len in 1..=self.order {
            let start = (1usize << len) - 1;
            let computed: Vec<R> = (0..(1usize << len))
                .into_par_iter()
                .map(|bits| {
                    let w = Word::from_bits(len, bits as u64);
                    let mut acc = R::zero();
                    for j in 1..=len {
                        let (u, v) = w.split_at(j);
                        acc.accumulate_product(&a[u.index()], &b[v.index()]);
                    }
                    if unit {
                        acc.negated()
                    } else {
                        acc.times(&c_inv).negated()
                    }
                })
                .collect();
            b[start..start + computed.len()].clone_from_slice(&computed);
        }
        Ok(NCSeries {
            order: self.order,
            coeffs: b,
        })
    }

    /// Coefficient of w becomes (-1)^|w| times the coefficient of reversed w.
    pub fn antipode(&self) -> Self {
        NCSeries::from_fn(self.order, |w| {
            self.coeffs[w.reversed().index()].signed_by_parity(w.len())
        })
    }

    /// Reversal of words, without signs.
    pub fn reversed(&self) -> Self {
        NCSeries::from_fn(self.order, |w| self.coeffs[w.reversed().index()].clone())
    }

    /// e_i ↦ -e_i together with conjugation of the coefficients.
    pub fn sigma_twist(&self) -> Self {
        NCSeries::from_fn(self.order, |w| {
            self.coeffs[w.index()].conj().signed_by_parity(w.len())
        })
    }

    /// Exact group-like test: constant 1 and A(u)A(v) = A(u ш v) for all
    /// nonempty u, v with |u| + |v| ≤ order.
    pub fn is_group_like(&self) -> bool {
        if !self.constant().is_one() {
            return false;
        }
        let n = self.order;
        let a = &self.coeffs;
        (1..series_len(n)).into_par_iter().all(|iu| {
            let u = Word::from_index(iu);
            (iu..series_len(n - u.len().min(n))).all(|iv| {
                let v = Word::from_index(iv);
                if v.is_empty() || u.len() + v.len() > n {
                    return true;
                }
                let lhs = a[iu].times(&a[iv]);
                let mut rhs = R::zero();
                for &(w, c) in shuffle_counts(u, v).iter() {
                    let cw = &a[w.index()];
                    if !cw.is_zero() {
                        rhs.accumulate(&cw.scaled(&BigRational::from_integer(BigInt::from(c))));
                    }
                }
                lhs == rhs
            })
        })
    }

    /// Largest `norm(A(u)A(v) - A(u ш v))` over all pairs, for floating rings.
    pub fn group_like_defect<F: Fn(&R) -> f64 + Sync + Send>(&self, norm: F) -> f64 {
        let n = self.order;
        let a = &self.coeffs;
        let base = norm(&self.constant().minus(&R::one()));
        (1..series_len(n))
            .into_par_iter()
            .map(|iu| {
                let u = Word::from_index(iu);
                let mut worst = 0.0f64;
                for iv in iu..series_len(n - u.len()) {
                    let v = Word::from_index(iv);
                    let mut rhs = R::zero();
                    for &(w, c) in shuffle_counts(u, v).iter() {
                        rhs.accumulate(&a[w.index()].scaled(&BigRational::from_integer(c.into())));
                    }
                    worst = worst.max(norm(&a[iu].times(&a[iv]).minus(&rhs)));
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
            .max(base)
    }

    /// Largest coefficient norm.
    pub fn max_norm<F: Fn(&R) -> f64 + Sync + Send>(&self, norm: F) -> f64 {
        self.coeffs.par_iter().map(norm).reduce(|| 0.0, f64::max)
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant().is_zero() {
            return Err(Error::InvalidArgument(
                "exp needs a series without constant term".into(),
            ));
        }
        let mut term = NCSeries::one(self.order);
        let mut acc = NCSeries::one(self.order);
        for k in 1..=self.order {
            term = term
                .mul(self)?
                .scale(&R::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(k))));
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant().is_one() {
            return Err(Error::NonUnit);
        }
        let x = self.sub(&NCSeries::one(self.order))?;
        let mut power = NCSeries::one(self.order);
        let mut acc = NCSeries::zero(self.order);
        for k in 1..=self.order {
            power = power.mul(&x)?;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale(&R::from_rational(&BigRational::new(
                BigInt::from(sign),
                BigInt::from(k),
            ))))?;
        }
        Ok(acc)
    }

    /// Commutator `[self, other]`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Replace e0 by `x0` and e1 by `x1` in every word; both images must have
    /// zero constant term.
    pub fn substitute(&self, x0: &Self, x1: &Self) -> Result<Self> {
        self.check_order(x0)?;
        self.check_order(x1)?;
        if !x0.constant().is_zero() || !x1.constant().is_zero() {
            return Err(Error::InvalidArgument(
                "substituted letters must have zero constant term".into(),
            ));
        }
        let n = self.order;
        let x0_is_letter = *x0 == NCSeries::letter(n, Letter::E0);
        // level k: one series of order n - k per prefix u of length k, holding
        // S_u = Σ_v G(uv) X_v
        let mut level: Vec<Vec<R>> = (0..(1usize << n))
            .into_par_iter()
            .map(|bits| vec![self.coeffs[Word::from_bits(n, bits as u64).index()].clone()])
            .collect();
        for k in (0..n).rev() {
            let m = n - k;
            let next = level;
            let prefixes = 1usize << k;
            let build = |bits: usize| {
                let u = Word::from_bits(k, bits as u64);
                let s0 = &next[2 * bits];
                let s1 = &next[2 * bits + 1];
                let parallel = prefixes == 1;
                let mut out = if x0_is_letter {
                    let mut out = vec![R::zero(); series_len(m)];
                    for (i, c) in s0.iter().enumerate() {
                        out[Word::from_index(i).prepend(Letter::E0).index()] = c.clone();
                    }
                    out
                } else {
                    product_nonconst(&x0.coeffs, s0, m, parallel)
                };
                add_assign_vec(&mut out, &product_nonconst(&x1.coeffs, s1, m, parallel));
                out[0] = self.coeffs[u.index()].clone();
                out
            };
            level = if prefixes > 1 {
                (0..prefixes).into_par_iter().map(build).collect()
            } else {
                (0..prefixes).map(build).collect()
            };
        }
        Ok(NCSeries {
            order: n,
            coeffs: level.pop().unwrap(),
        })
    }
}

fn add_assign_vec<R: Coeff>(out: &mut [R], add: &[R]) {
    for (o, a) in out.iter_mut().zip(add) {
        if !a.is_zero() {
            o.accumulate(a);
        }
    }
}

/// `(x · s)` up to weight `m`, where `x` has zero constant term and `s` is
/// stored to order `m - 1`.
fn product_nonconst<R: Coeff>(x: &[R], s: &[R], m: usize, parallel: bool) -> Vec<R> {
    let coeff_at = |i: usize| {
        let w = Word::from_index(i);
        let mut acc = R::zero();
        for j in 1..=w.len() {
            let (u, v) = w.split_at(j);
            acc.accumulate_product(&x[u.index()], &s[v.index()]);
        }
        acc
    };
    let n = series_len(m);
    if parallel && n > PAR_THRESHOLD {
        (0..n).into_par_iter().map(coeff_at).collect()
    } else {
        (0..n).map(coeff_at).collect()
    }
}

/// `A e1 A^{-1}`.
pub fn conjugated_e1<R: Coeff>(a: &NCSeries<R>) -> Result<NCSeries<R>> {
    let e1 = NCSeries::letter(a.order(), Letter::E1);
    a.mul(&e1)?.mul(&a.inverse()?)
}

/// `G(e0, A e1 A^{-1})`.
pub fn substitute_e1<R: Coeff>(g: &NCSeries<R>, a: &NCSeries<R>) -> Result<NCSeries<R>> {
    g.check_order(a)?;
    let e0 = NCSeries::letter(g.order(), Letter::E0);
    g.substitute(&e0, &conjugated_e1(a)?)
}

/// Ihara action `F ∘ G = G(e0, F e1 F^{-1}) F`.
pub fn ihara_act<R: Coeff>(f: &NCSeries<R>, g: &NCSeries<R>) -> Result<NCSeries<R>> {
    substitute_e1(g, f)?.mul(f)
}

/// The unique `F` with `F ∘ G = H`, from `F = G(e0, F e1 F^{-1})^{-1} H`.
///
/// The weight-k part of the right-hand side only involves `F` up to weight
/// k - 1, so the k-th pass runs at order k and fixes the weight-k part.
pub fn ihara_solve<R: Coeff>(g: &NCSeries<R>, h: &NCSeries<R>) -> Result<NCSeries<R>> {
    g.check_order(h)?;
    if g.constant().recip().is_none() || h.constant().recip().is_none() {
        return Err(Error::NonUnit);
    }
    let n = g.order();
    let mut f = NCSeries::one(0);
    for k in 1..=n {
        let fk = f.extended(k);
        let gk = g.truncated(k);
        let hk = h.truncated(k);
        f = substitute_e1(&gk, &fk)?.inverse()?.mul(&hk)?;
    }
    Ok(if n == 0 { NCSeries::one(0) } else { f })
}

/// Random exact series for property tests.
pub mod random {
    use super::*;
    use rand::Rng;

    fn small_rational<G: Rng>(rng: &mut G) -> BigRational {
        let num: i64 = rng.gen_range(-4..=4);
        let den: i64 = rng.gen_range(1..=3);
        BigRational::new(num.into(), den.into())
    }

    fn random_bracket<G: Rng>(rng: &mut G, order: usize, weight: usize) -> NCSeries<BigRational> {
        if weight == 1 {
            let l = if rng.gen_bool(0.5) { Letter::E0 } else { Letter::E1 };
            return NCSeries::letter(order, l);
        }
        let left = rng.gen_range(1..weight);
        let a = random_bracket(rng, order, left);
        let b = random_bracket(rng, order, weight - left);
        a.bracket(&b).unwrap()
    }

    /// Random rational Lie element: a combination of random nested brackets
    /// of e0, e1 of every weight up to `order`.
    pub fn lie_element<G: Rng>(rng: &mut G, order: usize) -> NCSeries<BigRational> {
        let mut acc = NCSeries::zero(order);
        for weight in 1..=order {
            for _ in 0..2 {
                let c = small_rational(rng);
                let b = random_bracket(rng, order, weight).scale(&c);
                acc = acc.add(&b).unwrap();
            }
        }
        acc
    }

    /// Exponential of a random Lie element; group-like by construction.
    pub fn group_like<G: Rng>(rng: &mut G, order: usize) -> NCSeries<BigRational> {
        lie_element(rng, order).exp().unwrap()
    }

    /// Random series with constant term 1 (not group-like in general).
    pub fn unit_series<G: Rng>(rng: &mut G, order: usize) -> NCSeries<BigRational> {
        let mut s = NCSeries::from_fn(order, |_| BigRational::from_integer(0.into()));
        for i in 1..series_len(order) {
            if rng.gen_bool(0.5) {
                s.coeffs[i] = small_rational(rng);
            }
        }
        s.coeffs[0] = <BigRational as Coeff>::one();
        s
    }
}
