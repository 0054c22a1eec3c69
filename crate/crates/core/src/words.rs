//! Words in the letters e0, e1, compositions, shuffles and Lyndon words.
//!
//! A [`Word`] is a bit string: letter `e0` is `0`, letter `e1` is `1`, and
//! the first letter is the most significant of the `len` low bits. The text
//! form is the same bit string, so `e1 e0 e0` is `"100"`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::ring::Coeff;

pub const MAX_WEIGHT: usize = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// dz/z
    E0,
    /// dz/(1-z)
    E1,
}

impl Letter {
    pub fn bit(self) -> u64 {
        match self {
            Letter::E0 => 0,
            Letter::E1 => 1,
        }
    }

    pub fn from_bit(bit: u64) -> Self {
        if bit & 1 == 0 {
            Letter::E0
        } else {
            Letter::E1
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            Letter::E0 => Letter::E1,
            Letter::E1 => Letter::E0,
        }
    }
}

/// A word in {e0, e1}. Ordered by length, then lexicographically with e0 < e1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len, self.bits).cmp(&(other.len, other.bits))
    }
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn from_bits(len: usize, bits: u64) -> Self {
        assert!(len <= MAX_WEIGHT, "word longer than {MAX_WEIGHT}");
        debug_assert!(len == 64 || bits >> len == 0);
        Word {
            len: len as u8,
            bits,
        }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        letters.iter().fold(Word::EMPTY, |w, &l| w.push(l))
    }

    pub fn letter_word(l: Letter) -> Self {
        Word::from_bits(1, l.bit())
    }

    /// `e0^n`
    pub fn e0_power(n: usize) -> Self {
        Word::from_bits(n, 0)
    }

    /// `e1^n`
    pub fn e1_power(n: usize) -> Self {
        Word::from_bits(n, if n == 0 { 0 } else { (1u64 << n) - 1 })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn weight(&self) -> usize {
        self.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Position in the dense index: all words of length < n come first, then
    /// words of length n in lexicographic order.
    pub fn index(&self) -> usize {
        ((1usize << self.len) - 1) + self.bits as usize
    }

    pub fn from_index(index: usize) -> Self {
        let len = (usize::BITS - (index + 1).leading_zeros() - 1) as usize;
        Word::from_bits(len, (index + 1 - (1usize << len)) as u64)
    }

    pub fn letter(&self, i: usize) -> Letter {
        assert!(i < self.len());
        Letter::from_bit(self.bits >> (self.len() - 1 - i))
    }

    pub fn first(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.letter(0))
    }

    pub fn last(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| Letter::from_bit(self.bits))
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(move |i| self.letter(i))
    }

    pub fn push(&self, l: Letter) -> Self {
        Word::from_bits(self.len() + 1, (self.bits << 1) | l.bit())
    }

    pub fn prepend(&self, l: Letter) -> Self {
        Word::from_bits(self.len() + 1, (l.bit() << self.len) | self.bits)
    }

    pub fn concat(&self, other: &Word) -> Self {
        Word::from_bits(
            self.len() + other.len(),
            (self.bits << other.len) | other.bits,
        )
    }

    /// First `j` letters.
    pub fn prefix(&self, j: usize) -> Self {
        assert!(j <= self.len());
        Word::from_bits(j, self.bits >> (self.len() - j))
    }

    /// Letters from position `j` on.
    pub fn suffix_from(&self, j: usize) -> Self {
        assert!(j <= self.len());
        let n = self.len() - j;
        let mask = if n == 0 { 0 } else { (1u64 << n) - 1 };
        Word::from_bits(n, self.bits & mask)
    }

    pub fn split_at(&self, j: usize) -> (Word, Word) {
        (self.prefix(j), self.suffix_from(j))
    }

    pub fn reversed(&self) -> Self {
        let mut bits = 0u64;
        for i in 0..self.len() {
            bits |= ((self.bits >> i) & 1) << (self.len() - 1 - i);
        }
        Word::from_bits(self.len(), bits)
    }

    /// Exchange e0 and e1.
    pub fn swapped(&self) -> Self {
        let mask = if self.len == 0 { 0 } else { (1u64 << self.len) - 1 };
        Word::from_bits(self.len(), !self.bits & mask)
    }

    /// Number of e1 letters.
    pub fn depth(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn leading_e0(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        let shifted = self.bits << (64 - self.len());
        (shifted.leading_zeros() as usize).min(self.len())
    }

    pub fn trailing_e1(&self) -> usize {
        (self.bits.trailing_ones() as usize).min(self.len())
    }

    /// Nonempty, begins with e1 and ends with e0.
    pub fn is_convergent(&self) -> bool {
        self.first() == Some(Letter::E1) && self.last() == Some(Letter::E0)
    }

    /// All `|w| + 1` splits `w = u v`, shortest prefix first.
    pub fn deconcatenations(&self) -> Vec<(Word, Word)> {
        (0..=self.len()).map(|j| self.split_at(j)).collect()
    }

    /// All words of the given length in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        (0..(1u64 << len)).map(move |b| Word::from_bits(len, b))
    }

    pub fn to_composition(&self) -> Result<Composition> {
        Composition::from_word(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            f.write_str(if l == Letter::E0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > MAX_WEIGHT {
            return Err(Error::ParseWord(s.to_string()));
        }
        s.chars().try_fold(Word::EMPTY, |w, c| match c {
            '0' => Ok(w.push(Letter::E0)),
            '1' => Ok(w.push(Letter::E1)),
            _ => Err(Error::ParseWord(s.to_string())),
        })
    }
}

/// A tuple `(n1, ..., nr)` of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::ParseComposition(format!("{parts:?}")));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn is_convergent(&self) -> bool {
        self.0.last().is_some_and(|&n| n >= 2)
    }

    /// `e1 e0^{n1-1} ... e1 e0^{nr-1}`
    pub fn to_word(&self) -> Word {
        self.0.iter().fold(Word::EMPTY, |w, &n| {
            w.push(Letter::E1).concat(&Word::e0_power(n as usize - 1))
        })
    }

    pub fn from_word(w: &Word) -> Result<Self> {
        if w.first() != Some(Letter::E1) {
            return Err(Error::NoComposition(w.to_string()));
        }
        let mut parts = Vec::new();
        for l in w.letters() {
            match l {
                Letter::E1 => parts.push(1),
                Letter::E0 => *parts.last_mut().unwrap() += 1,
            }
        }
        Ok(Composition(parts))
    }

    /// All compositions of `weight`, in lexicographic order of parts.
    pub fn all_of_weight(weight: usize) -> Vec<Composition> {
        fn rec(rest: usize, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if rest == 0 {
                out.push(Composition(cur.clone()));
                return;
            }
            for p in 1..=rest {
                cur.push(p as u32);
                rec(rest - p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if weight > 0 {
            rec(weight, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseComposition(s.to_string());
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Composition(Vec::new()));
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts).map_err(|_| bad())
    }
}

/// Finite linear combination of words with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WordSum {
    terms: std::collections::BTreeMap<Word, BigRational>,
}

impl WordSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: Word) -> Self {
        let mut s = Self::zero();
        s.add_term(w, BigRational::from_integer(1.into()));
        s
    }

    pub fn add_term(&mut self, w: Word, c: BigRational) {
        let e = self.terms.entry(w).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn coeff(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_coefficient(&self) -> BigRational {
        self.terms.values().sum()
    }

    /// Bilinear shuffle product.
    pub fn shuffle(&self, other: &WordSum) -> WordSum {
        let mut out = WordSum::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                for &(w, c) in shuffle_counts(*u, *v).iter() {
                    out.add_term(w, a * b * BigRational::from_integer(BigInt::from(c)));
                }
            }
        }
        out
    }
}

impl FromIterator<(Word, BigRational)> for WordSum {
    fn from_iter<I: IntoIterator<Item = (Word, BigRational)>>(iter: I) -> Self {
        let mut s = WordSum::zero();
        for (w, c) in iter {
            s.add_term(w, c);
        }
        s
    }
}

/// Shuffle product of two words, as a [`WordSum`].
pub fn shuffle(u: &Word, v: &Word) -> WordSum {
    shuffle_counts(*u, *v)
        .iter()
        .map(|&(w, c)| (w, BigRational::from_integer(BigInt::from(c))))
        .collect()
}

/// Uncached shuffle: every word of `u ш v` with its multiplicity, sorted by word.
pub fn shuffle_uncached(u: Word, v: Word) -> Vec<(Word, u64)> {
    let (m, n) = (u.len(), v.len());
    // row[j] holds the shuffle of u[i..] and v[j..]
    let mut next: Vec<HashMap<u64, u64>> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut h = HashMap::new();
        h.insert(v.suffix_from(j).bits(), 1);
        next.push(h);
    }
    for i in (0..m).rev() {
        let a = u.letter(i).bit();
        let mut row: Vec<HashMap<u64, u64>> = vec![HashMap::new(); n + 1];
        let mut h = HashMap::new();
        h.insert(u.suffix_from(i).bits(), 1);
        row[n] = h;
        for j in (0..n).rev() {
            let b = v.letter(j).bit();
            let len = (m - i) + (n - j) - 1;
            let mut h: HashMap<u64, u64> = HashMap::new();
            for (&w, &c) in &next[j] {
                *h.entry((a << len) | w).or_insert(0) += c;
            }
            for (&w, &c) in &row[j + 1] {
                *h.entry((b << len) | w).or_insert(0) += c;
            }
            row[j] = h;
        }
        next = row;
    }
    let mut out: Vec<(Word, u64)> = next[0]
        .iter()
        .map(|(&bits, &c)| (Word::from_bits(m + n, bits), c))
        .collect();
    out.sort_unstable();
    out
}

struct ShuffleCache {
    max_weight: std::sync::atomic::AtomicUsize,
    table: RwLock<HashMap<(Word, Word), Arc<[(Word, u64)]>>>,
}

static SHUFFLE_CACHE: LazyLock<ShuffleCache> = LazyLock::new(|| ShuffleCache {
    max_weight: std::sync::atomic::AtomicUsize::new(16),
    table: RwLock::new(HashMap::new()),
});

/// Set the largest combined weight whose shuffles are memoized.
pub fn set_shuffle_cache_weight(max_weight: usize) {
    SHUFFLE_CACHE
        .max_weight
        .store(max_weight, std::sync::atomic::Ordering::Relaxed);
}

/// Memoized shuffle with multiplicities. Commutative, so keyed on the sorted pair.
pub fn shuffle_counts(u: Word, v: Word) -> Arc<[(Word, u64)]> {
    if u.is_empty() || v.is_empty() {
        return Arc::from(vec![(u.concat(&v), 1)]);
    }
    let key = if u <= v { (u, v) } else { (v, u) };
    let cap = SHUFFLE_CACHE
        .max_weight
        .load(std::sync::atomic::Ordering::Relaxed);
    if u.len() + v.len() > cap {
        return Arc::from(shuffle_uncached(key.0, key.1));
    }
    if let Some(hit) = SHUFFLE_CACHE.table.read().unwrap().get(&key) {
        return hit.clone();
    }
    let computed: Arc<[(Word, u64)]> = Arc::from(shuffle_uncached(key.0, key.1));
    SHUFFLE_CACHE
        .table
        .write()
        .unwrap()
        .entry(key)
        .or_insert(computed)
        .clone()
}

/// Shuffle of two sequences over an arbitrary alphabet, with multiplicities.
pub fn shuffle_sequences<T: Clone + Ord>(a: &[T], b: &[T]) -> Vec<(Vec<T>, u64)> {
    use std::collections::BTreeMap;
    fn rec<T: Clone + Ord>(
        a: &[T],
        b: &[T],
        prefix: &mut Vec<T>,
        out: &mut BTreeMap<Vec<T>, u64>,
    ) {
        if a.is_empty() || b.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(a);
            w.extend_from_slice(b);
            *out.entry(w).or_insert(0) += 1;
            return;
        }
        prefix.push(a[0].clone());
        rec(&a[1..], b, prefix, out);
        prefix.pop();
        prefix.push(b[0].clone());
        rec(a, &b[1..], prefix, out);
        prefix.pop();
    }
    let mut out = BTreeMap::new();
    rec(a, b, &mut Vec::new(), &mut out);
    out.into_iter().collect()
}

/// Lyndon test for a word over an ordered alphabet; `rank` maps each letter to
/// its position in the ordering.
pub fn is_lyndon<T: Copy, F: Fn(T) -> usize>(word: &[T], rank: F) -> bool {
    if word.is_empty() {
        return false;
    }
    let ranks: Vec<usize> = word.iter().map(|&t| rank(t)).collect();
    (1..ranks.len()).all(|i| ranks[..] < ranks[i..])
}

/// Lyndon words of total weight `weight` over `alphabet`, where `alphabet`
/// lists the letters in increasing order and each letter is its own positive
/// weight. The result is sorted lexicographically for that ordering.
///
/// With `alphabet = [3, 2]` this enumerates the Hoffman-Lyndon words for the
/// ordering 3 < 2.
pub fn lyndon_words(alphabet: &[u32], weight: u32) -> Vec<Vec<u32>> {
    assert!(alphabet.iter().all(|&a| a > 0), "letter weights must be positive");
    let rank = |x: u32| alphabet.iter().position(|&a| a == x).unwrap();
    // generate in lexicographic order: depth-first, letters tried in alphabet order
    fn rec(
        alphabet: &[u32],
        rest: u32,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        rank: &dyn Fn(u32) -> usize,
    ) {
        if rest == 0 {
            if is_lyndon(cur, rank) {
                out.push(cur.clone());
            }
            return;
        }
        for &a in alphabet {
            if a <= rest {
                cur.push(a);
                rec(alphabet, rest - a, cur, out, rank);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if weight > 0 {
        rec(alphabet, weight, &mut Vec::new(), &mut out, &rank);
    }
    out
}
