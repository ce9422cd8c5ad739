//! Words over the two-letter alphabet `{a, b}` and the shuffle Hopf algebra
//! they span over the rationals.
//!
//! A [`WordPoly`] is a finite rational combination of words. The commutative
//! product is the shuffle [`WordPoly::shuffle`]; [`WordPoly::concat`] is the
//! non-commutative concatenation product. Text format: words are strings over
//! `a`/`b` with `1` for the empty word, polynomials print as
//! `2*aa + 2*ab`, `-3*aa`, `1/2*1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Longest word a [`Word`] can hold.
pub const MAX_WORD_LEN: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    fn bit(self) -> u64 {
        match self {
            Letter::A => 0,
            Letter::B => 1,
        }
    }

    fn from_bit(bit: u64) -> Letter {
        if bit & 1 == 0 {
            Letter::A
        } else {
            Letter::B
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }
}

/// A word packed into a bit string: letter `i` sits at bit `len - 1 - i`, so
/// words of equal length compare lexicographically with `a < b`. Words are
/// ordered by length first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn empty() -> Word {
        Word::EMPTY
    }

    pub fn letter(l: Letter) -> Word {
        Word {
            len: 1,
            bits: l.bit(),
        }
    }

    pub fn from_letters(letters: &[Letter]) -> Word {
        assert!(letters.len() <= MAX_WORD_LEN, "word too long");
        letters.iter().fold(Word::EMPTY, |w, &l| w.push(l))
    }

    /// `a^n`
    pub fn power(l: Letter, n: usize) -> Word {
        assert!(n <= MAX_WORD_LEN, "word too long");
        Word::from_letters(&vec![l; n])
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn at(&self, i: usize) -> Letter {
        debug_assert!(i < self.len());
        Letter::from_bit(self.bits >> (self.len() - 1 - i))
    }

    pub fn first(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.at(0))
    }

    pub fn last(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.at(self.len() - 1))
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator + '_ {
        (0..self.len()).map(move |i| self.at(i))
    }

    /// Appends a letter on the right.
    pub fn push(self, l: Letter) -> Word {
        assert!(self.len() < MAX_WORD_LEN, "word too long");
        Word {
            len: self.len + 1,
            bits: (self.bits << 1) | l.bit(),
        }
    }

    /// Prepends a letter on the left.
    pub fn prepend(self, l: Letter) -> Word {
        assert!(self.len() < MAX_WORD_LEN, "word too long");
        Word {
            len: self.len + 1,
            bits: self.bits | (l.bit() << self.len),
        }
    }

    pub fn concat(self, other: Word) -> Word {
        assert!(self.len() + other.len() <= MAX_WORD_LEN, "word too long");
        Word {
            len: self.len + other.len,
            bits: (self.bits << other.len) | other.bits,
        }
    }

    /// The first `i` letters.
    pub fn prefix(&self, i: usize) -> Word {
        debug_assert!(i <= self.len());
        Word {
            len: i as u8,
            bits: self.bits >> (self.len() - i),
        }
    }

    /// Everything after the first `i` letters.
    pub fn suffix(&self, i: usize) -> Word {
        debug_assert!(i <= self.len());
        let len = self.len() - i;
        Word {
            len: len as u8,
            bits: self.bits & low_mask(len),
        }
    }

    pub fn reversed(&self) -> Word {
        Word::from_letters(&self.letters().rev().collect::<Vec<_>>())
    }

    /// Inserts `l` so that it becomes the letter at position `pos`.
    pub fn insert(&self, pos: usize, l: Letter) -> Word {
        self.prefix(pos).push(l).concat(self.suffix(pos))
    }

    pub fn count(&self, l: Letter) -> usize {
        let ones = (self.bits & low_mask(self.len())).count_ones() as usize;
        match l {
            Letter::B => ones,
            Letter::A => self.len() - ones,
        }
    }

    /// Length of the maximal run of `l` at the start.
    pub fn leading(&self, l: Letter) -> usize {
        self.letters().take_while(|&c| c == l).count()
    }

    /// Length of the maximal run of `l` at the end.
    pub fn trailing(&self, l: Letter) -> usize {
        self.letters().rev().take_while(|&c| c == l).count()
    }

    pub fn classify(&self) -> WordClass {
        classify(self)
    }

    /// All words of length `n`, in lexicographic order.
    pub fn all_of_len(n: usize) -> impl Iterator<Item = Word> {
        assert!(n <= 20, "enumeration limited to short words");
        (0..(1u64 << n)).map(move |bits| Word { len: n as u8, bits })
    }

    /// Position of the word in the order of [`Word::all_up_to`].
    pub fn dense_index(&self) -> usize {
        ((1usize << self.len) - 1) + self.bits as usize
    }

    /// Inverse of [`Word::dense_index`].
    pub fn from_dense_index(i: usize) -> Word {
        let len = (usize::BITS - 1 - (i + 1).leading_zeros()) as u8;
        Word { len, bits: (i + 1 - (1usize << len)) as u64 }
    }

    /// All words of length at most `n`, shortest first.
    pub fn all_up_to(n: usize) -> impl Iterator<Item = Word> {
        (0..=n).flat_map(Word::all_of_len)
    }
}

fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "1" || s == "∅" {
            return Ok(Word::EMPTY);
        }
        if s.is_empty() {
            return Err(Error::Parse("empty word text; use `1` for the empty word".into()));
        }
        if s.len() > MAX_WORD_LEN {
            return Err(Error::WordTooLong(s.len()));
        }
        let mut w = Word::EMPTY;
        for c in s.chars() {
            w = w.push(match c {
                'a' => Letter::A,
                'b' => Letter::B,
                other => return Err(Error::Parse(format!("unexpected letter `{other}` in word `{s}`"))),
            });
        }
        Ok(w)
    }
}

/// Membership in the distinguished word sets: `PlusPlus` words start with `a`
/// and end with `b`, `PlusOnly` words start with `a` but end with `a`. The
/// empty word is `PlusPlus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordClass {
    PlusPlus,
    PlusOnly,
    Other,
}

pub fn classify(w: &Word) -> WordClass {
    match (w.first(), w.last()) {
        (None, _) => WordClass::PlusPlus,
        (Some(Letter::A), Some(Letter::B)) => WordClass::PlusPlus,
        (Some(Letter::A), _) => WordClass::PlusOnly,
        _ => WordClass::Other,
    }
}

pub fn in_w_plus(w: &Word) -> bool {
    classify(w) != WordClass::Other
}

pub fn in_w_plus_plus(w: &Word) -> bool {
    classify(w) == WordClass::PlusPlus
}

pub fn concat(u: Word, v: Word) -> Word {
    u.concat(v)
}

/// Multiset of shuffles of two words, as word -> multiplicity.
pub fn shuffle_words(u: Word, v: Word) -> BTreeMap<Word, u64> {
    let (n, m) = (u.len(), v.len());
    assert!(n + m <= MAX_WORD_LEN, "word too long");
    // row[j] holds the shuffles of u[i..] and v[j..]; sweep i downward.
    let mut row: Vec<HashMap<Word, u64>> = (0..=m)
        .map(|j| HashMap::from([(v.suffix(j), 1u64)]))
        .collect();
    for i in (0..n).rev() {
        let ui = u.at(i);
        let mut next: Vec<HashMap<Word, u64>> = vec![HashMap::new(); m + 1];
        next[m] = HashMap::from([(u.suffix(i), 1u64)]);
        for j in (0..m).rev() {
            let vj = v.at(j);
            let mut acc: HashMap<Word, u64> = HashMap::new();
            for (w, c) in &row[j] {
                *acc.entry(w.prepend(ui)).or_default() += c;
            }
            for (w, c) in &next[j + 1] {
                *acc.entry(w.prepend(vj)).or_default() += c;
            }
            next[j] = acc;
        }
        row = next;
    }
    row.swap_remove(0).into_iter().collect()
}

/// The `n + 1` prefix/suffix splits of `w`, from `(∅, w)` to `(w, ∅)`.
pub fn coproduct(w: &Word) -> Vec<(Word, Word)> {
    (0..=w.len()).map(|i| (w.prefix(i), w.suffix(i))).collect()
}

/// `(-1)^n` times the reversal of `w`.
pub fn antipode(w: &Word) -> WordPoly {
    let sign = if w.len().is_multiple_of(2) { 1 } else { -1 };
    WordPoly::term(w.reversed(), BigRational::from_integer(sign.into()))
}

pub fn counit(w: &Word) -> BigRational {
    if w.is_empty() {
        BigRational::one()
    } else {
        BigRational::zero()
    }
}

/// A sequence of positive integers; the empty sequence is allowed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Composition> {
        if parts.contains(&0) {
            return Err(Error::Parse(format!("composition parts must be positive: {parts:?}")));
        }
        Ok(Composition(parts))
    }

    pub fn empty() -> Composition {
        Composition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The series at 1 converges iff the last part is at least 2.
    pub fn is_convergent(&self) -> bool {
        self.0.last().is_none_or(|&r| r >= 2)
    }

    /// All compositions of `r` (ordered, positive parts).
    pub fn all_of_weight(r: u32) -> Vec<Composition> {
        if r == 0 {
            return vec![Composition::empty()];
        }
        let mut out = Vec::new();
        for first in 1..=r {
            for rest in Composition::all_of_weight(r - first) {
                let mut parts = vec![first];
                parts.extend_from_slice(rest.parts());
                out.push(Composition(parts));
            }
        }
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Accepts `2 3`, `2,3` or `(2,3)`.
    fn from_str(s: &str) -> Result<Composition> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad composition part `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

/// `a b^{t1} a b^{t2} ... a b^{tk}` ↦ `(1+t1, ..., 1+tk)`.
pub fn lambda_map(w: &Word) -> Result<Composition> {
    if !in_w_plus(w) {
        return Err(Error::NotInWPlus(w.to_string()));
    }
    let mut parts: Vec<u32> = Vec::with_capacity(w.count(Letter::A));
    for l in w.letters() {
        match l {
            Letter::A => parts.push(1),
            Letter::B => *parts.last_mut().expect("starts with a") += 1,
        }
    }
    Ok(Composition(parts))
}

pub fn lambda_inverse(c: &Composition) -> Word {
    let mut w = Word::EMPTY;
    for &r in c.parts() {
        w = w.push(Letter::A);
        for _ in 1..r {
            w = w.push(Letter::B);
        }
    }
    w
}

/// A finite rational linear combination of words; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct WordPoly {
    terms: BTreeMap<Word, BigRational>,
}

impl WordPoly {
    pub fn zero() -> WordPoly {
        WordPoly::default()
    }

    /// The empty word, the unit for both products.
    pub fn one() -> WordPoly {
        WordPoly::from(Word::EMPTY)
    }

    pub fn term(w: Word, c: BigRational) -> WordPoly {
        let mut p = WordPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn letter(l: Letter) -> WordPoly {
        WordPoly::from(Word::letter(l))
    }

    /// `x·a + y·b`
    pub fn linear(x: i64, y: i64) -> WordPoly {
        let mut p = WordPoly::zero();
        p.add_term(Word::letter(Letter::A), BigRational::from_integer(x.into()));
        p.add_term(Word::letter(Letter::B), BigRational::from_integer(y.into()));
        p
    }

    pub fn add_term(&mut self, w: Word, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &WordPoly, scale: &BigRational) {
        if scale.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(*w, c * scale);
        }
    }

    pub fn coeff(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &BigRational) -> WordPoly {
        let mut out = WordPoly::zero();
        out.add_scaled(self, s);
        out
    }

    /// Applies a word-to-polynomial map and extends linearly.
    pub fn map_words(&self, mut f: impl FnMut(&Word) -> WordPoly) -> WordPoly {
        let mut out = WordPoly::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&f(w), c);
        }
        out
    }

    /// True when every word satisfies `pred`.
    pub fn supported_on(&self, pred: impl Fn(&Word) -> bool) -> bool {
        self.terms.keys().all(pred)
    }

    pub fn shuffle(&self, other: &WordPoly) -> WordPoly {
        let mut out = WordPoly::zero();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                let c = cu * cv;
                for (w, mult) in shuffle_words(*u, *v) {
                    out.add_term(w, &c * BigInt::from(mult));
                }
            }
        }
        out
    }

    pub fn concat(&self, other: &WordPoly) -> WordPoly {
        let mut out = WordPoly::zero();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                out.add_term(u.concat(*v), cu * cv);
            }
        }
        out
    }

    /// n-th concatenation power.
    pub fn concat_pow(&self, n: usize) -> WordPoly {
        (0..n).fold(WordPoly::one(), |acc, _| acc.concat(self))
    }

    /// n-th shuffle power.
    pub fn shuffle_pow(&self, n: usize) -> WordPoly {
        (0..n).fold(WordPoly::one(), |acc, _| acc.shuffle(self))
    }

    pub fn antipode(&self) -> WordPoly {
        self.map_words(antipode)
    }

    pub fn counit(&self) -> BigRational {
        self.coeff(&Word::EMPTY)
    }

    /// Coproduct as a sparse tensor `(left, right) -> coefficient`.
    pub fn coproduct(&self) -> Tensor {
        let mut out = Tensor::new();
        for (w, c) in &self.terms {
            for (l, r) in coproduct(w) {
                add_tensor_term(&mut out, (l, r), c.clone());
            }
        }
        out
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigRational {
        self.terms.values().map(|c| c.abs()).fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Element of `H ⊗ H` in the word basis.
pub type Tensor = BTreeMap<(Word, Word), BigRational>;

fn add_tensor_term(t: &mut Tensor, key: (Word, Word), c: BigRational) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(key).or_insert_with(BigRational::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&key);
    }
}

/// Componentwise shuffle on `H ⊗ H`.
pub fn tensor_shuffle(x: &Tensor, y: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for ((l1, r1), c1) in x {
        for ((l2, r2), c2) in y {
            let left = shuffle_words(*l1, *l2);
            let right = shuffle_words(*r1, *r2);
            for (l, ml) in &left {
                for (r, mr) in &right {
                    add_tensor_term(&mut out, (*l, *r), c1 * c2 * BigInt::from(ml * mr));
                }
            }
        }
    }
    out
}

impl From<Word> for WordPoly {
    fn from(w: Word) -> WordPoly {
        WordPoly::term(w, BigRational::one())
    }
}

impl Add for &WordPoly {
    type Output = WordPoly;
    fn add(self, rhs: &WordPoly) -> WordPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for WordPoly {
    type Output = WordPoly;
    fn add(mut self, rhs: WordPoly) -> WordPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&WordPoly> for WordPoly {
    fn add_assign(&mut self, rhs: &WordPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(*w, c.clone());
        }
    }
}

impl Sub for &WordPoly {
    type Output = WordPoly;
    fn sub(self, rhs: &WordPoly) -> WordPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigRational::one());
        out
    }
}

impl Sub for WordPoly {
    type Output = WordPoly;
    fn sub(self, rhs: WordPoly) -> WordPoly {
        &self - &rhs
    }
}

impl Neg for &WordPoly {
    type Output = WordPoly;
    fn neg(self) -> WordPoly {
        self.scale(&-BigRational::one())
    }
}

impl Neg for WordPoly {
    type Output = WordPoly;
    fn neg(self) -> WordPoly {
        -&self
    }
}

/// `*` on polynomials is the shuffle product.
impl Mul for &WordPoly {
    type Output = WordPoly;
    fn mul(self, rhs: &WordPoly) -> WordPoly {
        self.shuffle(rhs)
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for WordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{}*{w}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WordPoly({self})")
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

impl FromStr for WordPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<WordPoly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial text".into()));
        }
        if s == "0" {
            return Ok(WordPoly::zero());
        }
        // Split into signed chunks at top-level + and - separators.
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut negative = false;
        let mut cur = String::new();
        for ch in s.chars() {
            match ch {
                '+' | '-' => {
                    if !cur.trim().is_empty() {
                        chunks.push((negative, std::mem::take(&mut cur)));
                        negative = false;
                    }
                    if ch == '-' {
                        negative = !negative;
                    }
                    cur.clear();
                }
                c => cur.push(c),
            }
        }
        if cur.trim().is_empty() {
            return Err(Error::Parse(format!("dangling sign in `{s}`")));
        }
        chunks.push((negative, cur));

        let mut out = WordPoly::zero();
        for (neg, chunk) in chunks {
            let chunk = chunk.trim();
            let (coef, word) = match chunk.rsplit_once('*') {
                Some((c, w)) => (parse_rational(c)?, w.trim().parse::<Word>()?),
                None => (BigRational::one(), chunk.parse::<Word>()?),
            };
            out.add_term(word, if neg { -coef } else { coef });
        }
        Ok(out)
    }
}

/// `l^{*n} = n!·l^n`, the n-th shuffle power of a single letter.
pub fn letter_shuffle_power(l: Letter, n: usize) -> WordPoly {
    let fact: BigInt = (1..=n as u64).map(BigInt::from).product();
    WordPoly::term(Word::power(l, n), BigRational::from_integer(fact))
}

/// Rewrites `h` as `Σ_j h_j * b^{*j}` with every `h_j` supported on words
/// starting with `a` (or empty). Returned as `j -> h_j`.
pub fn regularize_b(h: &WordPoly) -> BTreeMap<usize, WordPoly> {
    let mut memo = HashMap::new();
    let mut out: BTreeMap<usize, WordPoly> = BTreeMap::new();
    for (w, c) in h.iter() {
        for (j, p) in strip_leading_b(*w, &mut memo) {
            out.entry(j).or_default().add_scaled(&p, c);
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Rewrites `h` as `Σ_i h_i * a^{*i}` with every `h_i` supported on words not
/// ending in `a`. Words starting with `a` stay so.
pub fn regularize_trailing_a(h: &WordPoly) -> BTreeMap<usize, WordPoly> {
    let mut memo = HashMap::new();
    let mut out: BTreeMap<usize, WordPoly> = BTreeMap::new();
    for (w, c) in h.iter() {
        for (i, p) in strip_trailing_a(*w, &mut memo) {
            out.entry(i).or_default().add_scaled(&p, c);
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

type Decomposition = BTreeMap<usize, WordPoly>;

/// For `w = b^n w'` with `w'` in W+: `b * (b^{n-1} w') = n·w + (insertions of b
/// into w')`, so `w = (1/n)(b * u − Σ_{p ≥ n} insert(u, p, b))` with `u = b^{n-1}w'`.
fn strip_leading_b(w: Word, memo: &mut HashMap<Word, Decomposition>) -> Decomposition {
    if let Some(d) = memo.get(&w) {
        return d.clone();
    }
    let n = w.leading(Letter::B);
    let result = if n == 0 {
        BTreeMap::from([(0, WordPoly::from(w))])
    } else {
        let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
        let u = w.suffix(1);
        let mut acc: Decomposition = BTreeMap::new();
        for (j, p) in strip_leading_b(u, memo) {
            acc.entry(j + 1).or_default().add_scaled(&p, &inv_n);
        }
        for pos in n..=u.len() {
            let v = u.insert(pos, Letter::B);
            for (j, p) in strip_leading_b(v, memo) {
                acc.entry(j).or_default().add_scaled(&p, &-inv_n.clone());
            }
        }
        acc.retain(|_, p| !p.is_zero());
        acc
    };
    memo.insert(w, result.clone());
    result
}

/// Mirror of [`strip_leading_b`] for a trailing run of `a`.
fn strip_trailing_a(w: Word, memo: &mut HashMap<Word, Decomposition>) -> Decomposition {
    if let Some(d) = memo.get(&w) {
        return d.clone();
    }
    let m = w.trailing(Letter::A);
    let result = if m == 0 {
        BTreeMap::from([(0, WordPoly::from(w))])
    } else {
        let inv_m = BigRational::new(BigInt::one(), BigInt::from(m));
        let u = w.prefix(w.len() - 1);
        let mut acc: Decomposition = BTreeMap::new();
        for (i, p) in strip_trailing_a(u, memo) {
            acc.entry(i + 1).or_default().add_scaled(&p, &inv_m);
        }
        // Positions 0..=len(u)-(m-1)-1 put the new a before the last non-a letter.
        let keep = u.len() + 1 - m;
        for pos in 0..keep {
            let v = u.insert(pos, Letter::A);
            for (i, p) in strip_trailing_a(v, memo) {
                acc.entry(i).or_default().add_scaled(&p, &-inv_m.clone());
            }
        }
        acc.retain(|_, p| !p.is_zero());
        acc
    };
    memo.insert(w, result.clone());
    result
}

/// `h = Σ_{i,j} h_{ij} * a^{*i} * b^{*j}` with every `h_{ij}` supported on W++.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ABPolynomial {
    pub coeffs: BTreeMap<(usize, usize), WordPoly>,
}

impl ABPolynomial {
    /// Re-expands the shuffle-polynomial form back into `H`.
    pub fn expand(&self) -> WordPoly {
        let mut out = WordPoly::zero();
        for (&(i, j), h) in &self.coeffs {
            let mono = letter_shuffle_power(Letter::A, i).shuffle(&letter_shuffle_power(Letter::B, j));
            out += &h.shuffle(&mono);
        }
        out
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&WordPoly> {
        self.coeffs.get(&(i, j))
    }
}

/// Strips trailing `a`s first, then leading `b`s.
pub fn regularize_ab(h: &WordPoly) -> ABPolynomial {
    let mut coeffs: BTreeMap<(usize, usize), WordPoly> = BTreeMap::new();
    for (i, hi) in regularize_trailing_a(h) {
        for (j, hij) in regularize_b(&hi) {
            debug_assert!(hij.supported_on(in_w_plus_plus));
            coeffs.entry((i, j)).or_default().add_scaled(&hij, &BigRational::one());
        }
    }
    coeffs.retain(|_, p| !p.is_zero());
    ABPolynomial { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn p(s: &str) -> WordPoly {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn word_basics() {
        let x = w("aab");
        assert_eq!(x.len(), 3);
        assert_eq!(x.to_string(), "aab");
        assert_eq!(x.prefix(1), w("a"));
        assert_eq!(x.suffix(1), w("ab"));
        assert_eq!(x.reversed(), w("baa"));
        assert_eq!(x.insert(1, Letter::B), w("abab"));
        assert_eq!(x.leading(Letter::A), 2);
        assert_eq!(x.trailing(Letter::B), 1);
        assert_eq!(Word::EMPTY.to_string(), "1");
        assert!("abc".parse::<Word>().is_err());
        assert!(w("aa") < w("ab") && w("b") < w("aa"));
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(&p("a") * &p("b"), p("ab + ba"));
        assert_eq!(&p("b") * &p("b"), p("2*bb"));
        assert_eq!(&p("ab") * &p("a"), p("aba + 2*aab"));
        assert_eq!(&p("1") * &p("ab"), p("ab"));
    }

    #[test]
    fn shuffle_matches_brute_force_enumeration() {
        // Enumerate S_{n,m} as the n-subsets of positions taken by u.
        fn brute(u: Word, v: Word) -> BTreeMap<Word, u64> {
            let (n, m) = (u.len(), v.len());
            let mut out = BTreeMap::new();
            for mask in 0u32..(1 << (n + m)) {
                if mask.count_ones() as usize != n {
                    continue;
                }
                let (mut i, mut j) = (0, 0);
                let mut letters = Vec::new();
                for pos in 0..n + m {
                    if mask >> pos & 1 == 1 {
                        letters.push(u.at(i));
                        i += 1;
                    } else {
                        letters.push(v.at(j));
                        j += 1;
                    }
                }
                *out.entry(Word::from_letters(&letters)).or_insert(0) += 1;
            }
            out
        }
        for u in Word::all_up_to(3) {
            for v in Word::all_up_to(3) {
                assert_eq!(shuffle_words(u, v), brute(u, v), "{u} * {v}");
            }
        }
    }

    #[test]
    fn dense_index_follows_enumeration_order() {
        for (i, w) in Word::all_up_to(6).enumerate() {
            assert_eq!(w.dense_index(), i);
            assert_eq!(Word::from_dense_index(i), w);
        }
    }

    #[test]
    fn concat_examples() {
        assert_eq!(concat(w("ab"), w("a")), w("aba"));
        assert_eq!(concat(Word::EMPTY, w("ab")), w("ab"));
        assert_eq!(concat(w("a"), w("bb")), w("abb"));
    }

    #[test]
    fn coproduct_examples() {
        assert_eq!(
            coproduct(&w("ab")),
            vec![(Word::EMPTY, w("ab")), (w("a"), w("b")), (w("ab"), Word::EMPTY)]
        );
        assert_eq!(coproduct(&Word::EMPTY), vec![(Word::EMPTY, Word::EMPTY)]);
        assert_eq!(
            coproduct(&w("aab")),
            vec![
                (Word::EMPTY, w("aab")),
                (w("a"), w("ab")),
                (w("aa"), w("b")),
                (w("aab"), Word::EMPTY)
            ]
        );
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(antipode(&w("ab")), p("ba"));
        assert_eq!(antipode(&w("a")), p("-a"));
        assert_eq!(antipode(&w("aab")), p("-baa"));
    }

    #[test]
    fn antipode_axiom_up_to_length_6() {
        for x in Word::all_up_to(6) {
            let mut total = WordPoly::zero();
            for (l, r) in coproduct(&x) {
                total += &antipode(&l).shuffle(&WordPoly::from(r));
            }
            let expected = WordPoly::one().scale(&counit(&x));
            assert_eq!(total, expected, "antipode axiom at {x}");
        }
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_map(&w("ab")).unwrap().parts(), &[2]);
        assert_eq!(lambda_map(&w("aa")).unwrap().parts(), &[1, 1]);
        assert_eq!(lambda_map(&w("aabb")).unwrap().parts(), &[1, 3]);
        assert!(lambda_map(&Word::EMPTY).unwrap().is_empty());
        assert!(matches!(lambda_map(&w("ba")), Err(Error::NotInWPlus(_))));
    }

    #[test]
    fn lambda_round_trips_up_to_length_8() {
        for x in Word::all_up_to(8).filter(in_w_plus) {
            let c = lambda_map(&x).unwrap();
            assert_eq!(c.weight() as usize, x.len());
            assert_eq!(lambda_inverse(&c), x);
        }
        for r in 0..=8 {
            for c in Composition::all_of_weight(r) {
                assert_eq!(lambda_map(&lambda_inverse(&c)).unwrap(), c);
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&w("ab")), WordClass::PlusPlus);
        assert_eq!(classify(&w("aa")), WordClass::PlusOnly);
        assert_eq!(classify(&w("ba")), WordClass::Other);
        assert_eq!(classify(&Word::EMPTY), WordClass::PlusPlus);
    }

    #[test]
    fn regularize_b_examples() {
        assert_eq!(regularize_b(&p("ab")), BTreeMap::from([(0, p("ab"))]));
        assert_eq!(regularize_b(&p("b")), BTreeMap::from([(1, p("1"))]));
        assert_eq!(regularize_b(&p("ba")), BTreeMap::from([(0, p("-ab")), (1, p("a"))]));
    }

    #[test]
    fn regularize_ab_examples() {
        let r = regularize_ab(&p("ab"));
        assert_eq!(r.coeffs, BTreeMap::from([((0, 0), p("ab"))]));
        let r = regularize_ab(&p("a"));
        assert_eq!(r.coeffs, BTreeMap::from([((1, 0), p("1"))]));
        let r = regularize_ab(&p("aa"));
        assert_eq!(r.coeffs, BTreeMap::from([((2, 0), WordPoly::term(Word::EMPTY, q(1, 2)))]));
    }

    #[test]
    fn regularizations_round_trip_up_to_length_5() {
        for x in Word::all_up_to(5) {
            let h = WordPoly::from(x);
            let dec = regularize_b(&h);
            let mut back = WordPoly::zero();
            for (j, hj) in &dec {
                assert!(hj.supported_on(in_w_plus), "{x}: coefficient {hj} not in H+");
                back += &hj.shuffle(&letter_shuffle_power(Letter::B, *j));
            }
            assert_eq!(back, h, "regularize_b round trip at {x}");

            let ab = regularize_ab(&h);
            for hij in ab.coeffs.values() {
                assert!(hij.supported_on(in_w_plus_plus), "{x}: coefficient {hij} not in H++");
            }
            assert_eq!(ab.expand(), h, "regularize_ab round trip at {x}");
        }
    }

    #[test]
    fn plus_and_plus_plus_are_closed_under_shuffle() {
        let words: Vec<Word> = Word::all_up_to(4).collect();
        for u in &words {
            for v in &words {
                let s = WordPoly::from(*u).shuffle(&WordPoly::from(*v));
                if in_w_plus(u) && in_w_plus(v) {
                    assert!(s.supported_on(in_w_plus));
                }
                if in_w_plus_plus(u) && in_w_plus_plus(v) {
                    assert!(s.supported_on(in_w_plus_plus));
                }
            }
        }
    }

    #[test]
    fn text_format_round_trips() {
        for s in ["2*aa + 2*ab", "-3*aa", "1/2*1", "-aab + aba", "0", "-1/3*b + 7*abba"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("ab - ab"), WordPoly::zero());
        assert_eq!(p("aba - aab").to_string(), "-aab + aba");
        assert!("2*ac".parse::<WordPoly>().is_err());
        assert!("ab +".parse::<WordPoly>().is_err());
    }

    #[test]
    fn composition_parsing() {
        assert_eq!("2 3".parse::<Composition>().unwrap().parts(), &[2, 3]);
        assert_eq!("(1,3)".parse::<Composition>().unwrap().parts(), &[1, 3]);
        assert!("0 2".parse::<Composition>().is_err());
        assert!(!"2 1".parse::<Composition>().unwrap().is_convergent());
        assert_eq!(Composition::all_of_weight(4).len(), 8);
    }
}
