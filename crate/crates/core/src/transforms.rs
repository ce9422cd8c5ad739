//! The letter substitutions `σ`, `τ`, `σ'`, the composites `box` and `nabla`
//! built from them, and the closed-form coefficient families for
//! `box(a b^{r-1})` and `nabla(a b^{r-1})`.

use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::words::{coproduct, Composition, Letter, Word, WordPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    /// `a ↦ b`, `b ↦ a`, word order reversed.
    Sigma,
    /// `a ↦ a + b`, `b ↦ -a`, word order reversed.
    Tau,
    /// `a ↦ -a`, `b ↦ a + b`, word order kept.
    SigmaPrime,
}

impl TransformKind {
    pub fn reverses(self) -> bool {
        !matches!(self, TransformKind::SigmaPrime)
    }

    /// Image of a single letter as `x·a + y·b`.
    pub fn letter_image(self, l: Letter) -> (i64, i64) {
        match (self, l) {
            (TransformKind::Sigma, Letter::A) => (0, 1),
            (TransformKind::Sigma, Letter::B) => (1, 0),
            (TransformKind::Tau, Letter::A) => (1, 1),
            (TransformKind::Tau, Letter::B) => (-1, 0),
            (TransformKind::SigmaPrime, Letter::A) => (-1, 0),
            (TransformKind::SigmaPrime, Letter::B) => (1, 1),
        }
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<TransformKind> {
        match s.to_ascii_lowercase().as_str() {
            "sigma" => Ok(TransformKind::Sigma),
            "tau" => Ok(TransformKind::Tau),
            "sigmaprime" | "sigma-prime" | "sigma'" => Ok(TransformKind::SigmaPrime),
            other => Err(Error::Parse(format!("unknown transform `{other}`"))),
        }
    }
}

pub fn transform_word(kind: TransformKind, w: &Word) -> WordPoly {
    let images = |l: Letter| {
        let (x, y) = kind.letter_image(l);
        WordPoly::linear(x, y)
    };
    let mut out = WordPoly::one();
    if kind.reverses() {
        for l in w.letters().rev() {
            out = out.concat(&images(l));
        }
    } else {
        for l in w.letters() {
            out = out.concat(&images(l));
        }
    }
    out
}

pub fn apply_transform(kind: TransformKind, h: &WordPoly) -> WordPoly {
    h.map_words(|w| transform_word(kind, w))
}

fn coproduct_composite(h: &WordPoly, kind: TransformKind) -> WordPoly {
    h.map_words(|w| {
        let mut out = WordPoly::zero();
        for (prefix, suffix) in coproduct(w) {
            out += &WordPoly::from(prefix).shuffle(&transform_word(kind, &suffix));
        }
        out
    })
}

/// `shuffle ∘ (id ⊗ σ) ∘ Δ`
pub fn box_op(h: &WordPoly) -> WordPoly {
    coproduct_composite(h, TransformKind::Sigma)
}

/// `shuffle ∘ (id ⊗ τ) ∘ Δ`
pub fn nabla(h: &WordPoly) -> WordPoly {
    coproduct_composite(h, TransformKind::Tau)
}

fn a_pow(n: usize) -> WordPoly {
    WordPoly::from(Word::power(Letter::A, n))
}

fn signed(p: WordPoly, negative: bool) -> WordPoly {
    if negative {
        -p
    } else {
        p
    }
}

/// `2 a^{r-1}(a+b) + Σ_{1≤j≤r-2} a^j (a+b)^{r-j}`
pub fn box_closed_form(r: usize) -> Result<WordPoly> {
    if r < 2 {
        return Err(Error::Precondition(format!("closed form needs r >= 2, got {r}")));
    }
    let a_plus_b = WordPoly::linear(1, 1);
    let mut out = a_pow(r - 1).concat(&a_plus_b).scale(&BigRational::from_integer(2.into()));
    for j in 1..=r - 2 {
        out += &a_pow(j).concat(&a_plus_b.concat_pow(r - j));
    }
    Ok(out)
}

/// `(-1)^{r+1} 3 a^r + Σ_{1≤j≤r-2} (-1)^{j+1} a^j (b-a)^{r-j}`
pub fn nabla_closed_form(r: usize) -> Result<WordPoly> {
    if r < 2 {
        return Err(Error::Precondition(format!("closed form needs r >= 2, got {r}")));
    }
    let b_minus_a = WordPoly::linear(-1, 1);
    let mut out = signed(a_pow(r).scale(&BigRational::from_integer(3.into())), r.is_multiple_of(2));
    for j in 1..=r - 2 {
        out += &signed(a_pow(j).concat(&b_minus_a.concat_pow(r - j)), j % 2 == 0);
    }
    Ok(out)
}

fn sign(exp: usize) -> i64 {
    if exp.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Which branch of the coefficient case analysis a word or composition hits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientCase {
    /// `a^r`, or the all-ones composition.
    AllA,
    /// `a^{r-1} b`, or `(1, …, 1, 2)`.
    APowB,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoefficientRule {
    /// Number of leading `a`s (resp. index of the first part ≥ 2).
    pub j: usize,
    /// Number of `a`s (resp. depth).
    pub k: usize,
    pub case: CoefficientCase,
}

impl CoefficientRule {
    fn values(&self, r: usize) -> (i64, i64) {
        let r_i = r as i64;
        match self.case {
            CoefficientCase::AllA => (r_i, sign(r + 1) * (r_i + 1)),
            CoefficientCase::APowB => (r_i, sign(r) * (r_i - 2)),
            CoefficientCase::Generic => (self.j as i64, sign(self.k + 1) * self.j as i64),
        }
    }
}

pub fn word_rule(w: &Word) -> CoefficientRule {
    let r = w.len();
    let case = if w.count(Letter::A) == r {
        CoefficientCase::AllA
    } else if r >= 1 && w.leading(Letter::A) == r - 1 && w.last() == Some(Letter::B) {
        CoefficientCase::APowB
    } else {
        CoefficientCase::Generic
    };
    CoefficientRule {
        j: w.leading(Letter::A),
        k: w.count(Letter::A),
        case,
    }
}

/// `(c(w), c±(w))`: the coefficient of `w` in `box(a b^{r-1})` and in
/// `nabla(a b^{r-1})` where `r = |w|`.
pub fn lemma9_coeffs(w: &Word) -> Result<(i64, i64)> {
    if w.len() < 2 {
        return Err(Error::Precondition(format!("word `{w}` must have length >= 2")));
    }
    Ok(word_rule(w).values(w.len()))
}

pub fn composition_rule(m: &Composition) -> CoefficientRule {
    let parts = m.parts();
    let k = parts.len();
    let case = if parts.iter().all(|&p| p == 1) {
        CoefficientCase::AllA
    } else if parts.last() == Some(&2) && parts[..k - 1].iter().all(|&p| p == 1) {
        CoefficientCase::APowB
    } else {
        CoefficientCase::Generic
    };
    let j = match case {
        CoefficientCase::AllA => m.weight() as usize,
        _ => parts.iter().position(|&p| p >= 2).map_or(k, |i| i + 1),
    };
    CoefficientRule { j, k, case }
}

/// `(b(m), b±(m))`, the weights of `L_m(1/2)` and `L_m(ρ^{±1})` in the
/// depth-one zeta formulas.
pub fn theorem10_weights(m: &Composition) -> Result<(i64, i64)> {
    let r = m.weight() as usize;
    if r < 2 {
        return Err(Error::Precondition(format!("composition {m} must have weight >= 2")));
    }
    Ok(composition_rule(m).values(r))
}

/// Number of `i ∈ 1..=r` with `n ∈ C_i`, where
/// `C_i = {0 < n_1 < … < n_i ≤ n_{i+1} ≤ … ≤ n_r}` and `C_r = C_{r-1}`.
pub fn cor12_weight(n: &[u64]) -> Result<u32> {
    let r = n.len();
    if r < 2 {
        return Err(Error::Precondition("tuple must have length >= 2".into()));
    }
    if n[0] == 0 || n.windows(2).any(|p| p[0] > p[1]) {
        return Err(Error::Precondition(format!("{n:?} is not a nondecreasing positive tuple")));
    }
    let in_cone = |i: usize| n[..i].windows(2).all(|p| p[0] < p[1]);
    let count = (1..r).filter(|&i| in_cone(i)).count() + usize::from(in_cone(r - 1));
    Ok(count as u32)
}

/// Internal: the bar involution `a ↦ -a`, `b ↦ b` (concatenation morphism).
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn bar(h: &WordPoly) -> WordPoly {
    h.map_words(|w| {
        let s = sign(w.count(Letter::A));
        WordPoly::term(*w, BigRational::from_integer(s.into()))
    })
}

/// `Σ_w coeff(w)·w` over all words of length `r`.
pub fn sum_over_words(r: usize, coeff: impl Fn(&Word) -> i64) -> WordPoly {
    let mut out = WordPoly::zero();
    for w in Word::all_of_len(r) {
        out.add_term(w, BigRational::from_integer(coeff(&w).into()));
    }
    out
}
