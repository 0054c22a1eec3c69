//! The f-alphabet model Q⟨f3, f5, f7, …⟩ ⊗ Q[f2] and the dimension generating functions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::ring::Coeff;
use crate::words::{lyndon_words, shuffle_sequences};

/// f_{i1} … f_{in} · f2^k with odd indices ≥ 3.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FWord {
    f2_exponent: u32,
    indices: Vec<u32>,
}

impl FWord {
    pub fn new(indices: Vec<u32>, f2_exponent: u32) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i < 3 || i % 2 == 0) {
            return Err(Error::InvalidArgument(format!(
                "f-indices must be odd and at least 3, got {bad}"
            )));
        }
        Ok(FWord {
            f2_exponent,
            indices,
        })
    }

    pub fn unit() -> Self {
        Self::default()
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn f2_exponent(&self) -> u32 {
        self.f2_exponent
    }

    pub fn weight(&self) -> u32 {
        self.indices.iter().sum::<u32>() + 2 * self.f2_exponent
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_unit(&self) -> bool {
        self.indices.is_empty() && self.f2_exponent == 0
    }

    pub fn reversed(&self) -> Self {
        let mut indices = self.indices.clone();
        indices.reverse();
        FWord {
            f2_exponent: self.f2_exponent,
            indices,
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut indices = self.indices.clone();
        indices.extend_from_slice(&other.indices);
        FWord {
            f2_exponent: self.f2_exponent + other.f2_exponent,
            indices,
        }
    }

    fn odd_part(indices: &[u32]) -> Self {
        FWord {
            f2_exponent: 0,
            indices: indices.to_vec(),
        }
    }
}

impl fmt::Display for FWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        for i in &self.indices {
            write!(f, "f{i}")?;
        }
        match self.f2_exponent {
            0 => Ok(()),
            1 => write!(f, "f2"),
            k => write!(f, "f2^{k}"),
        }
    }
}

/// Accepts "3,5,7", "f3f5f7", "f3f5f2^2" and "1" for the unit.
impl FromStr for FWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse f-word {s:?}"));
        if s.is_empty() || s == "1" {
            return Ok(FWord::unit());
        }
        if !s.starts_with('f') {
            let indices = s
                .split(',')
                .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return FWord::new(indices, 0);
        }
        let mut indices = Vec::new();
        let mut f2 = 0;
        for part in s.split('f').skip(1) {
            let (num, exp) = match part.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let i: u32 = num.parse().map_err(|_| bad())?;
            if i == 2 {
                f2 += exp;
            } else if exp == 1 && f2 == 0 {
                indices.push(i);
            } else {
                return Err(bad());
            }
        }
        FWord::new(indices, f2)
    }
}

/// Finite rational combination of f-words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FExpr {
    terms: BTreeMap<FWord, BigRational>,
}

impl FExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: FWord) -> Self {
        let mut e = Self::zero();
        e.add_term(w, BigRational::from_integer(1.into()));
        e
    }

    pub fn add_term(&mut self, w: FWord, q: BigRational) {
        let entry = self.terms.entry(w.clone()).or_insert_with(BigRational::zero);
        *entry += q;
        if Coeff::is_zero(entry) {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, q) in &other.terms {
            out.add_term(w.clone(), q.clone());
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * q);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FWord, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &FWord) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Left multiplication by a single letter f_a.
    pub fn prepend(&self, a: u32) -> Result<Self> {
        let head = FWord::new(vec![a], 0)?;
        let mut out = Self::zero();
        for (w, q) in &self.terms {
            out.add_term(head.concat(w), q.clone());
        }
        Ok(out)
    }

    /// Bilinear shuffle product; f2 powers multiply.
    pub fn shuffle(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, p) in &self.terms {
            for (v, q) in &other.terms {
                for (w, n) in shuffle_words(u, v) {
                    out.add_term(w, p * q * BigRational::from_integer(n.into()));
                }
            }
        }
        out
    }
}

impl fmt::Display for FExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            if k > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            write!(f, "{}*{}", q.abs(), w)?;
        }
        Ok(())
    }
}

/// u ш v with multiplicities.
pub fn shuffle_words(u: &FWord, v: &FWord) -> Vec<(FWord, u64)> {
    shuffle_sequences(&u.indices, &v.indices)
        .into_iter()
        .map(|(w, n)| {
            (
                FWord {
                    f2_exponent: u.f2_exponent + v.f2_exponent,
                    indices: w,
                },
                n,
            )
        })
        .collect()
}

/// All splits f_{i1}…f_{ik} ⊗ f_{ik+1}…f_{in}; the f2 power goes to the right factor.
pub fn deconcat_coproduct(w: &FWord) -> Vec<(FWord, FWord)> {
    let n = w.indices.len();
    (0..=n)
        .map(|k| {
            let left = FWord::odd_part(&w.indices[..k]);
            let mut right = FWord::odd_part(&w.indices[k..]);
            right.f2_exponent = w.f2_exponent;
            (left, right)
        })
        .collect()
}

/// sv(w) = Σ_{uv=w} u ш ṽ; words containing f2 map to 0.
pub fn sv_u(w: &FWord) -> FExpr {
    let mut out = FExpr::zero();
    if w.f2_exponent > 0 {
        return out;
    }
    for (u, v) in deconcat_coproduct(w) {
        for (x, n) in shuffle_words(&u, &v.reversed()) {
            out.add_term(x, BigRational::from_integer(n.into()));
        }
    }
    out
}

/// sv extended linearly.
pub fn sv_expr(a: &FExpr) -> FExpr {
    let mut out = FExpr::zero();
    for (w, q) in a.terms() {
        out = out.add(&sv_u(w).scale(q));
    }
    out
}

/// Dimensions by weight N = 0..=n_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimTable {
    /// dim H_N, from Σ dim H_N t^N = 1/(1 - t² - t³).
    pub dim_h: Vec<BigInt>,
    /// ℓ_N = dim L_N, from Π (1 - t^n)^{-ℓ_n} = 1/(1 - t² - t³); entry 0 is 0.
    pub dim_l: Vec<BigInt>,
    /// dim H^sv_N, from Π_{n odd} (1 - t^n)^{-ℓ_n}.
    pub dim_hsv: Vec<BigInt>,
    /// ℓ_N for odd N, 0 for even N.
    pub dim_lsv: Vec<BigInt>,
}

impl DimTable {
    pub fn n_max(&self) -> usize {
        self.dim_h.len() - 1
    }

    /// Rows (N, dimH, dimL, dimHsv, dimLsv) for N = 1..=n_max.
    pub fn rows(&self) -> Vec<[BigInt; 5]> {
        (1..=self.n_max())
            .map(|n| {
                [
                    BigInt::from(n),
                    self.dim_h[n].clone(),
                    self.dim_l[n].clone(),
                    self.dim_hsv[n].clone(),
                    self.dim_lsv[n].clone(),
                ]
            })
            .collect()
    }
}

/// Series of Π (1 - t^n)^{-e_n} through t^{len-1}, via the log-derivative
/// recurrence m h_m = Σ_j b_j h_{m-j} with b_j = Σ_{n | j} n e_n.
fn euler_product(exponents: &[BigInt], len: usize) -> Vec<BigInt> {
    let b: Vec<BigInt> = (0..len)
        .map(|j| {
            (1..=j)
                .filter(|n| j % n == 0)
                .map(|n| BigInt::from(n) * &exponents[n])
                .sum()
        })
        .collect();
    let mut h = vec![BigInt::from(0); len];
    h[0] = BigInt::from(1);
    for m in 1..len {
        let s: BigInt = (1..=m).map(|j| &b[j] * &h[m - j]).sum();
        h[m] = s / BigInt::from(m);
    }
    h
}

/// Exact dimension table for weights 0..=n_max.
pub fn dims(n_max: usize) -> Result<DimTable> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("dims needs n_max ≥ 1".into()));
    }
    let len = n_max + 1;
    let mut d = vec![BigInt::from(0); len];
    d[0] = BigInt::from(1);
    for n in 2..len {
        d[n] = &d[n - 2] + if n >= 3 { d[n - 3].clone() } else { BigInt::from(0) };
    }
    // a_m = coefficients of t P'/P: m d_m = Σ_{j=1}^m a_j d_{m-j}
    let mut a = vec![BigInt::from(0); len];
    for m in 1..len {
        let s: BigInt = (1..m).map(|j| &a[j] * &d[m - j]).sum();
        a[m] = BigInt::from(m) * &d[m] - s;
    }
    // a_m = Σ_{n | m} n ℓ_n
    let mut l = vec![BigInt::from(0); len];
    for m in 1..len {
        let s: BigInt = (1..m)
            .filter(|n| m % n == 0)
            .map(|n| BigInt::from(n) * &l[n])
            .sum();
        l[m] = (&a[m] - s) / BigInt::from(m);
    }
    let odd: Vec<BigInt> = (0..len)
        .map(|n| if n % 2 == 1 { l[n].clone() } else { BigInt::from(0) })
        .collect();
    let hsv = euler_product(&odd, len);
    Ok(DimTable {
        dim_h: d,
        dim_l: l,
        dim_hsv: hsv,
        dim_lsv: odd,
    })
}

/// Hoffman-Lyndon words of weight n over {3 < 2}.
pub fn hoffman_lyndon_words(n: u32) -> Vec<Vec<u32>> {
    lyndon_words(&[3, 2], n)
}

/// Lyndon words of weight n over f3 < f5 < f7 < …, graded by index.
pub fn f_lyndon_words(n: u32) -> Vec<FWord> {
    let alphabet: Vec<u32> = (3..=n.max(3)).step_by(2).collect();
    lyndon_words(&alphabet, n)
        .into_iter()
        .map(|w| FWord::odd_part(&w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fw(s: &str) -> FWord {
        s.parse().unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(fw("3,5").to_string(), "f3f5");
        assert_eq!(fw("f3f5"), fw("3,5"));
        assert_eq!(fw("f3f2^2").f2_exponent(), 2);
        assert_eq!(fw("f3f2^2").weight(), 7);
        assert_eq!(fw("1"), FWord::unit());
        assert!("4".parse::<FWord>().is_err());
        assert!("f2f3".parse::<FWord>().is_err());
    }

    #[test]
    fn coproduct_examples() {
        let c = deconcat_coproduct(&fw("3"));
        assert_eq!(c, vec![(FWord::unit(), fw("3")), (fw("3"), FWord::unit())]);
        assert_eq!(deconcat_coproduct(&fw("3,5")).len(), 3);
        let f2 = FWord::new(vec![], 1).unwrap();
        assert_eq!(deconcat_coproduct(&f2), vec![(FWord::unit(), f2.clone())]);
    }

    #[test]
    fn sv_closed_forms() {
        assert_eq!(sv_u(&fw("3")).to_string(), "2*f3");
        assert_eq!(sv_u(&fw("3,5")).to_string(), "2*f3f5 + 2*f5f3");
        assert_eq!(
            sv_u(&fw("3,5,7")).to_string(),
            "2*f3f5f7 + 2*f3f7f5 + 2*f7f3f5 + 2*f7f5f3"
        );
        assert!(sv_u(&fw("f3f2")).is_zero());
    }

    #[test]
    fn dims_match_generating_functions() {
        let t = dims(20).unwrap();
        assert_eq!(
            t.dim_h,
            big(&[1, 0, 1, 1, 1, 2, 2, 3, 4, 5, 7, 9, 12, 16, 21, 28, 37, 49, 65, 86, 114])
        );
        assert_eq!(
            t.dim_l[1..],
            big(&[0, 1, 1, 0, 1, 0, 1, 1, 1, 1, 2, 2, 3, 3, 4, 5, 7, 8, 11, 13])[..]
        );
        assert_eq!(t.dim_hsv[20], BigInt::from(23));
        assert_eq!(t.dim_l[17], BigInt::from(7));
        assert_eq!(t.dim_h[12], BigInt::from(12));
        assert!(dims(0).is_err());
    }

    #[test]
    fn lyndon_counts() {
        let t = dims(20).unwrap();
        for n in 1..=20u32 {
            let l = &t.dim_l[n as usize];
            assert_eq!(BigInt::from(hoffman_lyndon_words(n).len()), *l, "{n}");
            // f2 is the extra generator in weight 2
            let f_count = f_lyndon_words(n).len() + usize::from(n == 2);
            assert_eq!(BigInt::from(f_count), *l, "{n}");
        }
    }
}
