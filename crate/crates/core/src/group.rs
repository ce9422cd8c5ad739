//! Truncated noncommutative power series in `a`, `b` with rational
//! coefficients: a finite-order model of the group of grouplike series, its
//! Lie algebra, and the coefficient pairing with word polynomials.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::transforms::{transform_word, TransformKind};
use crate::words::{shuffle_words, Letter, Word, WordPoly};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 6;

/// Coefficients are stored densely, indexed by [`Word::dense_index`], as
/// integer numerators over one common positive denominator kept in lowest
/// terms, so products avoid a gcd per coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct NcSeries {
    order: usize,
    num: Vec<BigInt>,
    den: BigInt,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Row `w` lists `(index of u, coefficient of u in T(w))`; the letter images
/// have integer coefficients.
type TransformTable = Vec<Vec<(usize, BigInt)>>;
type TableCache = Mutex<HashMap<(TransformKind, usize), Arc<TransformTable>>>;

fn transform_table(kind: TransformKind, order: usize) -> Arc<TransformTable> {
    static TABLES: OnceLock<TableCache> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.lock().expect("table lock").get(&(kind, order)) {
        return Arc::clone(t);
    }
    let table: TransformTable = Word::all_up_to(order)
        .map(|w| {
            transform_word(kind, &w)
                .iter()
                .map(|(u, c)| {
                    debug_assert!(c.is_integer());
                    (u.dense_index(), c.to_integer())
                })
                .collect()
        })
        .collect();
    let table = Arc::new(table);
    tables.lock().expect("table lock").insert((kind, order), Arc::clone(&table));
    table
}

fn dense_len(order: usize) -> usize {
    (1usize << (order + 1)) - 1
}

impl NcSeries {
    pub fn zero(order: usize) -> NcSeries {
        assert!(order <= 20, "series order {order} is too large for a dense model");
        NcSeries { order, num: vec![BigInt::zero(); dense_len(order)], den: BigInt::one() }
    }

    pub fn one(order: usize) -> NcSeries {
        NcSeries::term(Word::empty(), BigRational::one(), order)
    }

    /// Terms of length above `order` are dropped.
    pub fn term(w: Word, c: BigRational, order: usize) -> NcSeries {
        NcSeries::from_terms(order, [(w, c)])
    }

    pub fn letter(l: Letter, order: usize) -> NcSeries {
        NcSeries::term(Word::letter(l), BigRational::one(), order)
    }

    /// Sums the given terms, dropping words longer than `order`.
    pub fn from_terms(order: usize, terms: impl IntoIterator<Item = (Word, BigRational)>) -> NcSeries {
        let terms: Vec<(Word, BigRational)> = terms.into_iter().filter(|(w, _)| w.len() <= order).collect();
        let mut out = NcSeries::zero(order);
        out.den = terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        for (w, c) in terms {
            out.num[w.dense_index()] += c.numer() * (&out.den / c.denom());
        }
        out.normalize();
        out
    }

    /// Fails if `h` has words longer than `order`.
    pub fn from_poly(h: &WordPoly, order: usize) -> Result<NcSeries> {
        if let Some(w) = h.words().find(|w| w.len() > order) {
            return Err(Error::OrderOverflow { len: w.len(), order });
        }
        Ok(NcSeries::from_terms(order, h.iter().map(|(w, c)| (*w, c.clone()))))
    }

    pub fn to_poly(&self) -> WordPoly {
        let mut p = WordPoly::zero();
        for (w, c) in self.iter() {
            p.add_term(w, c);
        }
        p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn normalize(&mut self) {
        let g = self.num.iter().fold(self.den.clone(), |g, n| if n.is_zero() { g } else { g.gcd(n) });
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
        } else if !g.is_one() {
            for n in &mut self.num {
                *n /= &g;
            }
            self.den /= &g;
        }
    }

    fn rescaled(mut self, num: &BigInt, den: &BigInt) -> NcSeries {
        for n in &mut self.num {
            *n *= num;
        }
        self.den *= den;
        if self.den.is_negative() {
            self.den = -&self.den;
            for n in &mut self.num {
                *n = -&*n;
            }
        }
        self.normalize();
        self
    }

    pub fn coeff(&self, w: &Word) -> BigRational {
        if w.len() > self.order {
            return BigRational::zero();
        }
        BigRational::new(self.num[w.dense_index()].clone(), self.den.clone())
    }

    pub fn constant(&self) -> BigRational {
        self.coeff(&Word::empty())
    }

    /// Nonzero terms in word order.
    pub fn iter(&self) -> impl Iterator<Item = (Word, BigRational)> + '_ {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_zero())
            .map(|(i, n)| (Word::from_dense_index(i), BigRational::new(n.clone(), self.den.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn degree_part(&self, d: usize) -> NcSeries {
        let mut out = self.clone();
        for (i, n) in out.num.iter_mut().enumerate() {
            if Word::from_dense_index(i).len() != d {
                n.set_zero();
            }
        }
        out.normalize();
        out
    }

    pub fn scale(&self, s: &BigRational) -> NcSeries {
        self.clone().rescaled(s.numer(), s.denom())
    }

    /// Truncated concatenation product.
    pub fn mul(&self, other: &NcSeries) -> NcSeries {
        let order = self.order.min(other.order);
        let mut out = NcSeries::zero(order);
        for (i, x) in self.num.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let u = Word::from_dense_index(i);
            if u.len() > order {
                continue;
            }
            let room = order - u.len();
            for (j, y) in other.num[..dense_len(room)].iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                out.num[u.concat(Word::from_dense_index(j)).dense_index()] += x * y;
            }
        }
        out.den = &self.den * &other.den;
        out.normalize();
        out
    }

    /// `exp(x)` for `x` with zero constant term.
    pub fn exp(&self) -> Result<NcSeries> {
        if !self.num[0].is_zero() {
            return Err(Error::Precondition(format!("exp needs zero constant term, got {}", self.constant())));
        }
        let mut out = NcSeries::one(self.order);
        let mut power = NcSeries::one(self.order);
        for n in 1..=self.order {
            power = power.mul(self).rescaled(&BigInt::one(), &BigInt::from(n));
            out = &out + &power;
        }
        Ok(out)
    }

    fn require_unit(&self) -> Result<NcSeries> {
        if self.num[0] != self.den {
            return Err(Error::NonUnitConstant(self.constant().to_string()));
        }
        let mut y = self.clone();
        y.num[0].set_zero();
        y.normalize();
        Ok(y)
    }

    /// `log(g) = Σ (-1)^{n+1} (g-1)^n / n` for `g` with constant term 1.
    pub fn log(&self) -> Result<NcSeries> {
        let y = self.require_unit()?;
        let mut out = NcSeries::zero(self.order);
        let mut power = NcSeries::one(self.order);
        for n in 1..=self.order {
            power = power.mul(&y);
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out = &out + &power.clone().rescaled(&BigInt::from(sign), &BigInt::from(n));
        }
        Ok(out)
    }

    /// `g^{-1} = Σ (-(g-1))^n`.
    pub fn inv(&self) -> Result<NcSeries> {
        let y = -&self.require_unit()?;
        let mut out = NcSeries::one(self.order);
        let mut power = NcSeries::one(self.order);
        for _ in 1..=self.order {
            power = power.mul(&y);
            out = &out + &power;
        }
        Ok(out)
    }

    pub fn bracket(&self, other: &NcSeries) -> NcSeries {
        &self.mul(other) - &other.mul(self)
    }

    /// The map on series dual to the word map on polynomials:
    /// `⟨T(g), w⟩ = ⟨g, T(w)⟩`.
    pub fn transform(&self, kind: TransformKind) -> NcSeries {
        let table = transform_table(kind, self.order);
        let mut out = NcSeries::zero(self.order);
        for (o, row) in out.num.iter_mut().zip(table.iter()) {
            for (u, c) in row {
                *o += c * &self.num[*u];
            }
        }
        out.den = self.den.clone();
        out.normalize();
        out
    }

    /// The word map applied termwise to `g`. Also an anti-automorphism, but
    /// the pairing dualities hold for [`NcSeries::transform`], not this.
    pub fn word_map(&self, kind: TransformKind) -> NcSeries {
        let mut terms = Vec::new();
        for (i, n) in self.num.iter().enumerate().filter(|(_, n)| !n.is_zero()) {
            for (u, cu) in transform_word(kind, &Word::from_dense_index(i)).iter() {
                terms.push((*u, cu * n));
            }
        }
        NcSeries::from_terms(self.order, terms).rescaled(&BigInt::one(), &self.den)
    }

    /// `⟨g,u⟩⟨g,v⟩ = ⟨g,u*v⟩` for all nonempty `u`, `v` with `|u|+|v| ≤ order`,
    /// and constant term 1.
    pub fn is_grouplike(&self) -> bool {
        // With g = n/d: n_u n_v = d · Σ c_w n_w.
        self.num[0] == self.den && self.shuffle_check(|nu, nv, nuv| nu * nv == &self.den * nuv)
    }

    /// Zero constant term and `⟨x, u*v⟩ = 0` for nonempty `u`, `v`.
    pub fn is_primitive(&self) -> bool {
        self.num[0].is_zero() && self.shuffle_check(|_, _, nuv| nuv.is_zero())
    }

    fn shuffle_check(&self, ok: impl Fn(&BigInt, &BigInt, &BigInt) -> bool) -> bool {
        for u in Word::all_up_to(self.order.saturating_sub(1)).filter(|w| !w.is_empty()) {
            for v in Word::all_up_to(self.order - u.len()).filter(|w| !w.is_empty()) {
                let mut nuv = BigInt::zero();
                for (w, n) in shuffle_words(u, v) {
                    nuv += &self.num[w.dense_index()] * BigInt::from(n);
                }
                if !ok(&self.num[u.dense_index()], &self.num[v.dense_index()], &nuv) {
                    return false;
                }
            }
        }
        true
    }
}

impl Default for NcSeries {
    fn default() -> Self {
        NcSeries::zero(0)
    }
}

impl fmt::Debug for NcSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcSeries[N={}]({})", self.order, self.to_poly())
    }
}

impl fmt::Display for NcSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.to_poly(), self.order + 1)
    }
}

impl Add for &NcSeries {
    type Output = NcSeries;
    fn add(self, rhs: &NcSeries) -> NcSeries {
        let order = self.order.min(rhs.order);
        let mut out = NcSeries::zero(order);
        let (ls, rs) = if self.den == rhs.den {
            (BigInt::one(), BigInt::one())
        } else {
            (rhs.den.clone(), self.den.clone())
        };
        for (i, o) in out.num.iter_mut().enumerate() {
            *o = &self.num[i] * &ls + &rhs.num[i] * &rs;
        }
        out.den = &self.den * &ls;
        out.normalize();
        out
    }
}

impl Sub for &NcSeries {
    type Output = NcSeries;
    fn sub(self, rhs: &NcSeries) -> NcSeries {
        self + &(-rhs)
    }
}

impl Neg for &NcSeries {
    type Output = NcSeries;
    fn neg(self) -> NcSeries {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &NcSeries {
    type Output = NcSeries;
    fn mul(self, rhs: &NcSeries) -> NcSeries {
        NcSeries::mul(self, rhs)
    }
}

pub fn nc_mul(g: &NcSeries, h: &NcSeries) -> Result<NcSeries> {
    if g.order != h.order {
        return Err(Error::Precondition(format!("orders differ: {} vs {}", g.order, h.order)));
    }
    Ok(g.mul(h))
}

pub fn nc_exp(x: &NcSeries) -> Result<NcSeries> {
    x.exp()
}

pub fn nc_log(g: &NcSeries) -> Result<NcSeries> {
    g.log()
}

pub fn nc_inv(g: &NcSeries) -> Result<NcSeries> {
    g.inv()
}

/// `Σ_w coeff(h, w)·coeff(g, w)`.
pub fn pair(h: &WordPoly, g: &NcSeries) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for (w, c) in h.iter() {
        if w.len() > g.order {
            return Err(Error::OrderOverflow { len: w.len(), order: g.order });
        }
        total += c * &g.num[w.dense_index()];
    }
    Ok(total / BigRational::from_integer(g.den.clone()))
}

pub fn series_transform(kind: TransformKind, g: &NcSeries) -> NcSeries {
    g.transform(kind)
}

/// `Π_i exp(t_i·ℓ_i)` for `len` seeded random letters and rationals.
pub fn random_grouplike_of_length(order: usize, seed: u64, len: usize) -> NcSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = NcSeries::one(order);
    for _ in 0..len {
        let letter = if rng.gen_bool(0.5) { Letter::A } else { Letter::B };
        let mut num: i64 = rng.gen_range(-3..=3);
        if num == 0 {
            num = 1;
        }
        let den: i64 = rng.gen_range(1..=3);
        let x = NcSeries::term(Word::letter(letter), BigRational::new(num.into(), den.into()), order);
        g = g.mul(&x.exp().expect("zero constant"));
    }
    g
}

/// A grouplike element with a seeded number of factors (2 to 6).
pub fn random_grouplike(order: usize, seed: u64) -> NcSeries {
    let len = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15).gen_range(2..=6);
    random_grouplike_of_length(order, seed, len)
}

fn require_grouplike(g: &NcSeries) -> Result<()> {
    if g.is_grouplike() {
        Ok(())
    } else {
        Err(Error::NotGrouplike(g.order))
    }
}

/// `g = p·k` with `σ(p) = p`, `σ(k) = k^{-1}`, solved degree by degree: the
/// lowest-degree part of `log(exp(-x)·g·exp(-y))` is split by `(1±σ)/2`.
pub fn pk_decompose(g: &NcSeries) -> Result<(NcSeries, NcSeries)> {
    require_grouplike(g)?;
    let n = g.order;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut x = NcSeries::zero(n);
    let mut y = NcSeries::zero(n);
    for d in 1..=n {
        let defect = (-&x).exp()?.mul(g).mul(&(-&y).exp()?).log()?.degree_part(d);
        let s = defect.transform(TransformKind::Sigma);
        x = &x + &(&defect + &s).scale(&half);
        y = &y + &(&defect - &s).scale(&half);
    }
    Ok((x.exp()?, y.exp()?))
}

/// `g = exp(q)·exp(τq)·exp(l)` with `(τ²-τ+1)q = 0` and `τl = -l`, solved
/// degree by degree with `e_l = (τ²-τ+1)/3` and `(1+τ)^{-1} = (2-τ)/3` on the
/// complement. Returns `(q, exp(l))`.
pub fn ql_decompose(g: &NcSeries) -> Result<(NcSeries, NcSeries)> {
    require_grouplike(g)?;
    let n = g.order;
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let tau = |s: &NcSeries| s.transform(TransformKind::Tau);
    let mut q = NcSeries::zero(n);
    let mut l = NcSeries::zero(n);
    for d in 1..=n {
        let q0 = q.exp()?.mul(&tau(&q).exp()?);
        let defect = q0.inv()?.mul(g).mul(&(-&l).exp()?).log()?.degree_part(d);
        let t1 = tau(&defect);
        let t2 = tau(&t1);
        let l_part = (&(&t2 - &t1) + &defect).scale(&third);
        let q_part = &defect - &l_part;
        let q_step = (&q_part.scale(&int(2)) - &tau(&q_part)).scale(&third);
        q = &q + &q_step;
        l = &l + &l_part;
    }
    Ok((q, l.exp()?))
}

/// `exp(q)·exp(τq)`, the Q-part of a Q·L decomposition.
pub fn q_element(q: &NcSeries) -> Result<NcSeries> {
    Ok(q.exp()?.mul(&q.transform(TransformKind::Tau).exp()?))
}
