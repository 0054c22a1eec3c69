//! Formal shuffle-regularized MZV symbols.
//!
//! An [`MzvExpr`] is a rational linear combination of symbols ζ(w) for
//! convergent words w (plus the unit ζ(∅) = 1). Products expand through the
//! shuffle product, which maps convergent words to convergent words, so the
//! convergent words form a basis closed under multiplication.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::ring::Coeff;
use crate::words::{shuffle_counts, Letter, Word};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct MzvExpr {
    terms: BTreeMap<Word, BigRational>,
}

impl MzvExpr {
    /// The symbol ζ(w). Panics unless `w` is convergent or empty.
    pub fn symbol(w: Word) -> Self {
        assert!(
            w.is_empty() || w.is_convergent(),
            "ζ({w}) is not a convergent symbol"
        );
        let mut terms = BTreeMap::new();
        terms.insert(w, BigRational::one());
        MzvExpr { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, BigRational)>>(iter: I) -> Self {
        let mut acc: HashMap<Word, BigRational> = HashMap::new();
        for (w, c) in iter {
            assert!(w.is_empty() || w.is_convergent());
            *acc.entry(w).or_insert_with(BigRational::zero) += c;
        }
        MzvExpr {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_homogeneous_of_weight(&self, weight: usize) -> bool {
        self.terms.keys().all(|w| w.len() == weight)
    }

    /// Rendering `"2*z(2,2) - 4*z(1,3)"`, terms in word order; `"0"` when empty.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            let term = if w.is_empty() {
                magnitude.to_string()
            } else {
                let comp = w.to_composition().map(|c| c.to_string()).unwrap_or_default();
                format!("{magnitude}*z({comp})")
            };
            match (i, c.is_negative()) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&term);
        }
        out
    }

    /// `(coefficient, composition)` pairs for serialization.
    pub fn to_pairs(&self) -> Vec<(BigRational, Vec<u32>)> {
        self.terms
            .iter()
            .map(|(w, c)| {
                let parts = w
                    .to_composition()
                    .map(|c| c.parts().to_vec())
                    .unwrap_or_default();
                (c.clone(), parts)
            })
            .collect()
    }

    fn from_acc(acc: HashMap<Word, BigRational>) -> Self {
        MzvExpr {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

/// ζ(u)·ζ(v) = ζ(u ш v), extended bilinearly.
pub fn mzv_mul(a: &MzvExpr, b: &MzvExpr) -> MzvExpr {
    if a.terms.is_empty() || b.terms.is_empty() {
        return MzvExpr::default();
    }
    let mut acc: HashMap<Word, BigInt> = HashMap::new();
    let mut denoms: HashMap<BigInt, HashMap<Word, BigInt>> = HashMap::new();
    for (u, x) in &a.terms {
        for (v, y) in &b.terms {
            let xy = x * y;
            let (num, den) = (xy.numer().clone(), xy.denom().clone());
            let target = if den == BigInt::from(1) {
                &mut acc
            } else {
                denoms.entry(den).or_default()
            };
            for &(w, c) in shuffle_counts(*u, *v).iter() {
                *target.entry(w).or_insert_with(|| BigInt::from(0)) += &num * BigInt::from(c);
            }
        }
    }
    let mut out: HashMap<Word, BigRational> = acc
        .into_iter()
        .map(|(w, n)| (w, BigRational::from_integer(n)))
        .collect();
    for (den, part) in denoms {
        for (w, n) in part {
            *out.entry(w).or_insert_with(BigRational::zero) += BigRational::new(n, den.clone());
        }
    }
    MzvExpr::from_acc(out)
}

impl Coeff for MzvExpr {
    fn zero() -> Self {
        MzvExpr::default()
    }
    fn one() -> Self {
        MzvExpr::symbol(Word::EMPTY)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.accumulate(other);
        out
    }
    fn negated(&self) -> Self {
        MzvExpr {
            terms: self.terms.iter().map(|(w, c)| (*w, -c)).collect(),
        }
    }
    fn times(&self, other: &Self) -> Self {
        mzv_mul(self, other)
    }
    fn from_rational(q: &BigRational) -> Self {
        MzvExpr::from_terms([(Word::EMPTY, q.clone())])
    }
    fn conj(&self) -> Self {
        sigma_on_expr(self)
    }
    fn scaled(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return MzvExpr::default();
        }
        MzvExpr {
            terms: self.terms.iter().map(|(w, c)| (*w, c * q)).collect(),
        }
    }
    fn accumulate(&mut self, other: &Self) {
        for (w, c) in &other.terms {
            match self.terms.get_mut(w) {
                Some(e) => {
                    *e += c;
                    if e.is_zero() {
                        self.terms.remove(w);
                    }
                }
                None => {
                    self.terms.insert(*w, c.clone());
                }
            }
        }
    }
}

/// Conjugation on MZV symbols: the identity, since every ζ(w) is real.
pub fn sigma_on_expr(a: &MzvExpr) -> MzvExpr {
    a.clone()
}

impl fmt::Debug for MzvExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for MzvExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Values assigned to the divergent letters and to admissible words when
/// extending a function on words to a shuffle homomorphism.
///
/// Leading `e0`s are always stripped (value `e0_value`); trailing `e1`s are
/// stripped only when `e1_value` is set. Everything else is a leaf and is
/// looked up with `leaf`.
pub struct Regularizer<R, F> {
    e0_value: R,
    e1_value: Option<R>,
    leaf: F,
    memo: RwLock<HashMap<Word, R>>,
}

impl<R: Coeff, F: Fn(&Word) -> R + Sync> Regularizer<R, F> {
    pub fn new(e0_value: R, e1_value: Option<R>, leaf: F) -> Self {
        Regularizer {
            e0_value,
            e1_value,
            leaf,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn value(&self, w: &Word) -> R {
        if let Some(v) = self.memo.read().unwrap().get(w) {
            return v.clone();
        }
        let v = self.compute(w);
        self.memo.write().unwrap().insert(*w, v.clone());
        v
    }

    fn power_over_factorial(x: &R, k: usize) -> R {
        let mut acc = R::one();
        for i in 1..=k {
            acc = acc
                .times(x)
                .scaled(&BigRational::new(BigInt::from(1), BigInt::from(i)));
        }
        acc
    }

    fn compute(&self, w: &Word) -> R {
        if w.is_empty() {
            return R::one();
        }
        let k = w.leading_e0();
        if k > 0 {
            if k == w.len() {
                return Self::power_over_factorial(&self.e0_value, k);
            }
            // e0 ш e0^{k-1} v = k e0^k v + Σ_p e0^{k-1} v[..p] e0 v[p..]
            let v = w.suffix_from(k);
            let head = Word::e0_power(k - 1);
            let mut acc = self.e0_value.times(&self.value(&head.concat(&v)));
            for p in 1..=v.len() {
                let (a, b) = v.split_at(p);
                let x = head.concat(&a).push(Letter::E0).concat(&b);
                acc = acc.minus(&self.value(&x));
            }
            return acc.scaled(&BigRational::new(BigInt::from(1), BigInt::from(k)));
        }
        if let Some(e1_value) = &self.e1_value {
            let m = w.trailing_e1();
            if m > 0 {
                if m == w.len() {
                    return Self::power_over_factorial(e1_value, m);
                }
                // (u e1^{m-1}) ш e1 = m u e1^m + Σ_p u[..p] e1 u[p..] e1^{m-1}
                let u = w.prefix(w.len() - m);
                let tail = Word::e1_power(m - 1);
                let mut acc = e1_value.times(&self.value(&u.concat(&tail)));
                for p in 0..u.len() {
                    let (a, b) = u.split_at(p);
                    let x = a.push(Letter::E1).concat(&b).concat(&tail);
                    acc = acc.minus(&self.value(&x));
                }
                return acc.scaled(&BigRational::new(BigInt::from(1), BigInt::from(m)));
            }
        }
        (self.leaf)(w)
    }
}

type SymbolLeaf = fn(&Word) -> MzvExpr;

static SYMBOLIC: LazyLock<Regularizer<MzvExpr, SymbolLeaf>> = LazyLock::new(|| {
    Regularizer::new(
        MzvExpr::zero(),
        Some(MzvExpr::zero()),
        (|w: &Word| MzvExpr::symbol(*w)) as SymbolLeaf,
    )
});

/// ζ^ш(w) in the convergent-word basis, normalized by ζ^ш(e0) = ζ^ш(e1) = 0.
pub fn regularize(w: &Word) -> MzvExpr {
    SYMBOLIC.value(w)
}

/// Sum of |coefficients|, used for error propagation.
pub fn l1_norm(a: &MzvExpr) -> BigRational {
    a.terms.values().map(|c| c.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::shuffle;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn z(s: &str) -> MzvExpr {
        MzvExpr::symbol(w(s))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn unit_law() {
        assert_eq!(mzv_mul(&MzvExpr::one(), &z("10")), z("10"));
    }

    #[test]
    fn zeta2_squared() {
        let p = mzv_mul(&z("10"), &z("10"));
        assert_eq!(p, MzvExpr::from_terms([(w("1010"), int(2)), (w("1100"), int(4))]));
        assert_eq!(p.render(), "2*z(2,2) + 4*z(1,3)");
    }

    /// All C(|a|+|b|, |a|) interleavings, by choosing the positions of `a`.
    fn brute_interleavings(a: &str, b: &str) -> Vec<String> {
        let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
        let n = a.len() + b.len();
        (0u32..(1 << n))
            .filter(|m| m.count_ones() as usize == a.len())
            .map(|m| {
                let (mut i, mut j) = (0, 0);
                (0..n)
                    .map(|p| {
                        if m >> p & 1 == 1 {
                            i += 1;
                            a[i - 1]
                        } else {
                            j += 1;
                            b[j - 1]
                        }
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn zeta2_zeta3_mass() {
        let p = mzv_mul(&z("10"), &z("100"));
        let all = brute_interleavings("10", "100");
        assert_eq!(all.len(), 10);
        let mut oracle: BTreeMap<Word, BigRational> = BTreeMap::new();
        for s in all {
            *oracle.entry(w(&s)).or_insert_with(|| int(0)) += int(1);
        }
        // 3 distinct words: 11000 (x6), 10100 (x3), 10010 (x1)
        assert_eq!(p, MzvExpr::from_terms(oracle));
        assert_eq!(p.num_terms(), 3);
        let mass: BigRational = p.terms().map(|(_, c)| c.clone()).sum();
        assert_eq!(mass, int(10));
        assert!(p.is_homogeneous_of_weight(5));
    }

    #[test]
    fn regularize_examples() {
        assert_eq!(regularize(&w("10")), z("10"));
        assert!(regularize(&w("1")).is_zero());
        assert!(regularize(&w("0")).is_zero());
        assert_eq!(regularize(&w("01")), z("10").negated());
        assert!(regularize(&Word::EMPTY).is_one());
    }

    #[test]
    fn regularize_is_shuffle_homomorphism_small() {
        for a in 0..(1 << 4) - 1 {
            for b in 0..(1 << 3) - 1 {
                let (u, v) = (Word::from_index(a), Word::from_index(b));
                let lhs: MzvExpr = shuffle(&u, &v)
                    .terms()
                    .fold(MzvExpr::zero(), |acc, (x, c)| acc.plus(&regularize(x).scaled(c)));
                let rhs = mzv_mul(&regularize(&u), &regularize(&v));
                assert_eq!(lhs, rhs, "u={u} v={v}");
            }
        }
    }

    #[test]
    fn sigma_is_identity() {
        let e = z("100101000").scaled(&BigRational::new(3.into(), 7.into()));
        assert_eq!(sigma_on_expr(&e), e);
    }

    #[test]
    fn render_zero_and_rational() {
        assert_eq!(MzvExpr::zero().render(), "0");
        let e = z("100").scaled(&BigRational::new((-3).into(), 7.into()));
        assert_eq!(e.render(), "-3/7*z(3)");
        let f = MzvExpr::from_terms([
            (Word::EMPTY, BigRational::new(1.into(), 2.into())),
            (w("100"), int(-2)),
        ]);
        assert_eq!(f.render(), "1/2 - 2*z(3)");
    }
}
