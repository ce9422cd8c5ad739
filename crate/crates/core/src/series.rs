//! Rigorous evaluation of multiple polylogarithms
//! `L_{r_1..r_k}(z) = Σ_{0<n_1<…<n_k} n_1^{-r_1}…n_k^{-r_k} z^{n_k}` (and
//! variants with `≤` constraints) at `z ∈ {1/2, -1, ρ, ρ̄}`.
//!
//! All sums run as a layered dynamic program over fixed-width integers: layer
//! `j` holds `A_j(n)`, the sum over admissible `(n_1..n_j)` with `n_j = n`, and
//! reads the running prefix sums of layer `j-1`. Every quantity is positive and
//! every division rounds down, so each `A_j(n)` is a lower bound with error at
//! most `j` units. The layers do not depend on `z`; only the final accumulation
//! does (a shift at `1/2`, residues mod 2 or 6 on the circle).

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::{
    log2_at_scale, pi_at_scale, pow10, sqrt3_at_scale, ApproxComplex, ApproxReal, EvalPoint,
};
use crate::words::{lambda_map, regularize_ab, regularize_b, Composition, Word, WordPoly};

/// Default ceiling on the truncation point of a single series.
pub const DEFAULT_MAX_TERMS: u64 = 100_000_000;

#[derive(Debug, Clone)]
pub struct EvalOptions {
    /// Largest truncation `N` a single series may use before giving up.
    pub max_terms: u64,
    /// Worker threads for evaluating the words of a polynomial.
    pub threads: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_terms: DEFAULT_MAX_TERMS,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

/// Exponents with a strict (`<`) or weak (`≤`) constraint before each index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationalIndex {
    exponents: Vec<u32>,
    strict: Vec<bool>,
}

impl RelationalIndex {
    pub fn new(exponents: Vec<u32>, strict: Vec<bool>) -> Result<RelationalIndex> {
        if exponents.is_empty() || exponents.len() != strict.len() {
            return Err(Error::Precondition("relational index needs k >= 1 exponents and k flags".into()));
        }
        if exponents.contains(&0) {
            return Err(Error::Precondition("exponents must be positive".into()));
        }
        if !strict[0] {
            return Err(Error::Precondition("first constraint is always 0 < n_1".into()));
        }
        Ok(RelationalIndex { exponents, strict })
    }

    pub fn from_composition(c: &Composition) -> Result<RelationalIndex> {
        RelationalIndex::new(c.parts().to_vec(), vec![true; c.depth()])
    }

    pub fn depth(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn strict_flags(&self) -> &[bool] {
        &self.strict
    }

    pub fn last_exponent(&self) -> u32 {
        *self.exponents.last().expect("nonempty")
    }

    pub fn all_strict(&self) -> bool {
        self.strict.iter().all(|&s| s)
    }

    pub fn weight(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

impl fmt::Display for RelationalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("0")?;
        for (i, (&r, &s)) in self.exponents.iter().zip(&self.strict).enumerate() {
            let rel = if s { "<" } else { "<=" };
            write!(f, "{rel}n{}^{r}", i + 1)?;
        }
        Ok(())
    }
}

/// Truncation and working precision for one series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalPlan {
    pub n_terms: u64,
    pub point: EvalPoint,
    pub scale_bits: u32,
    /// Proven upper bound on the omitted tail.
    pub tail_bound: BigRational,
}

/// A value together with the largest truncation used to produce it.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub value: ApproxComplex,
    pub terms_used: u64,
}

pub fn eps_for_digits(digits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(pow10(digits)))
}

fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn factorial(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// `⌈log2(1/eps)⌉`, at least 0.
fn bits_for_eps(eps: &BigRational) -> u32 {
    let q = eps.denom().bits() as i64 - eps.numer().bits() as i64 + 1;
    q.max(0) as u32
}

/// Summand bound at `1/2`: `T(n) ≤ w·(n+k)^{k-1} / ((k-1)!·n^{r_k})`, which
/// counts admissible prefixes and bounds each product by 1.
fn half_tail(k: u64, r_last: u32, weight: u64, n: u64) -> BigRational {
    let m = n + 1;
    let u = BigRational::new(
        BigInt::from(weight) * BigInt::from(m + k).pow((k - 1) as u32),
        factorial(k - 1) * BigInt::from(m).pow(r_last),
    );
    // Successive ratio for n > N is at most ((N+k+2)/(N+k+1))^{k-1}/2.
    let theta = ratio(BigInt::from(m + k + 1).pow((k - 1) as u32), BigInt::from(m + k).pow((k - 1) as u32))
        / BigRational::from_integer(BigInt::from(2));
    let geometric = BigRational::one() - theta;
    if !geometric.is_positive() {
        return BigRational::from_integer(BigInt::from(u64::MAX));
    }
    u / (BigRational::from_integer(BigInt::one() << m) * geometric)
}

/// Upper bound for `ln N` in rational form: `⌈log2 N⌉·0.6932`.
fn ln_upper(n: u64) -> BigRational {
    let bits = 64 - (n.max(2) - 1).leading_zeros();
    ratio(BigInt::from(bits) * 6932, 10_000)
}

/// Tail on `|z| = 1`: with `T(n) ≤ c·(1+ln n)^m / n^r` (`m = k-1`, `c = 1/m!`
/// for strict prefixes, else 1) and `N ≥ e^{m/r}` so the bound decreases,
/// `Σ_{n>N} T(n) ≤ c·N^{-p}·Σ_{i≤m} m!/(m-i)!·(1+ln N)^{m-i}/p^{i+1}`, `p = r-1`.
fn circle_tail(idx: &RelationalIndex, point: EvalPoint, n: u64) -> BigRational {
    let k = idx.depth() as u64;
    let r = idx.last_exponent();
    if k == 1 && point == EvalPoint::MinusOne {
        // Alternating with decreasing terms.
        return ratio(1, BigInt::from(n + 1).pow(r));
    }
    let m = k - 1;
    let p = BigInt::from(r - 1);
    let one_plus_l = BigRational::one() + ln_upper(n);
    let mut sum = BigRational::zero();
    for i in 0..=m {
        let falling = factorial(m) / factorial(m - i);
        let term = BigRational::from_integer(falling) * num_traits::pow(one_plus_l.clone(), (m - i) as usize)
            / BigRational::from_integer(p.pow(i as u32 + 1));
        sum += term;
    }
    let c = if idx.all_strict() { ratio(1, factorial(m)) } else { BigRational::one() };
    c * sum / BigRational::from_integer(BigInt::from(n).pow(r - 1))
}

fn circle_min_terms(idx: &RelationalIndex) -> u64 {
    let m = (idx.depth() - 1) as f64;
    let r = idx.last_exponent() as f64;
    ((m / r).exp().ceil() as u64).max(2)
}

/// Smallest `N ≥ lo` with `bound(N) ≤ target`, assuming `bound` is
/// eventually decreasing; `None` when even `2^62` is not enough.
fn search_terms(lo: u64, target: &BigRational, bound: impl Fn(u64) -> BigRational) -> Option<u64> {
    let mut hi = lo.max(1);
    while &bound(hi) > target {
        if hi >= 1 << 62 {
            return None;
        }
        hi = hi.saturating_mul(2);
    }
    let mut low = lo.max(1);
    if &bound(low) <= target {
        return Some(low);
    }
    while hi - low > 1 {
        let mid = low + (hi - low) / 2;
        if &bound(mid) <= target {
            hi = mid;
        } else {
            low = mid;
        }
    }
    Some(hi)
}

fn check_circle(idx: &RelationalIndex, point: EvalPoint) -> Result<()> {
    if point.on_unit_circle() && idx.last_exponent() < 2 {
        return Err(Error::Precondition(format!(
            "series {idx} at {point} has trailing exponent 1 and converges only conditionally"
        )));
    }
    Ok(())
}

/// Rounding error of the DP in units of the last place.
fn rounding_ulps(depth: u64, n_terms: u64, point: EvalPoint) -> u64 {
    match point {
        EvalPoint::Half => depth + n_terms + 1,
        _ => depth * n_terms + 1,
    }
}

fn plan_with(
    idx: &RelationalIndex,
    point: EvalPoint,
    eps: &BigRational,
    weight: u64,
    opts: &EvalOptions,
) -> Result<EvalPlan> {
    check_circle(idx, point)?;
    let k = idx.depth() as u64;
    let target = eps / BigRational::from_integer(BigInt::from(2));
    let found = match point {
        EvalPoint::Half => search_terms(2 * k, &target, |n| half_tail(k, idx.last_exponent(), weight, n)),
        _ => search_terms(circle_min_terms(idx), &target, |n| circle_tail(idx, point, n)),
    };
    let digits = bits_for_eps(eps) * 3 / 10;
    let n_terms = match found {
        Some(n) if n <= opts.max_terms => n,
        other => {
            return Err(Error::PrecisionUnreachable {
                digits,
                required: other.unwrap_or(u64::MAX),
                cap: opts.max_terms,
            })
        }
    };
    let tail_bound = match point {
        EvalPoint::Half => half_tail(k, idx.last_exponent(), weight, n_terms),
        _ => circle_tail(idx, point, n_terms),
    };
    let ulps = rounding_ulps(k.max(weight), n_terms, point);
    let scale_bits = bits_for_eps(eps) + 32 + (64 - ulps.leading_zeros());
    Ok(EvalPlan { n_terms, point, scale_bits, tail_bound })
}

/// Truncation point and working precision certifying `digits` digits.
pub fn truncation_bound(idx: &RelationalIndex, point: EvalPoint, digits: u32) -> Result<EvalPlan> {
    plan_with(idx, point, &eps_for_digits(digits), 1, &EvalOptions::default())
}

/// Fixed-width little-endian unsigned arithmetic for the DP inner loop.
mod limbs {
    use num_bigint::BigUint;

    pub fn pow2(scale: u32, len: usize) -> Vec<u64> {
        let mut v = vec![0u64; len];
        v[(scale / 64) as usize] = 1 << (scale % 64);
        v
    }

    /// Returns true on overflow out of the top limb.
    pub fn add_assign(dst: &mut [u64], src: &[u64]) -> bool {
        let mut carry = false;
        for (d, &s) in dst.iter_mut().zip(src) {
            let (s1, c1) = d.overflowing_add(s);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            *d = s2;
            carry = c1 || c2;
        }
        carry
    }

    pub fn mul_assign(x: &mut [u64], m: u64) -> bool {
        let mut carry: u128 = 0;
        for d in x.iter_mut() {
            let t = (*d as u128) * (m as u128) + carry;
            *d = t as u64;
            carry = t >> 64;
        }
        carry != 0
    }

    /// Floor division by a nonzero `d`.
    pub fn div_assign(x: &mut [u64], d: u64) {
        let top = match x.iter().rposition(|&v| v != 0) {
            Some(t) => t,
            None => return,
        };
        let d128 = d as u128;
        let mut rem: u128 = 0;
        for v in x[..=top].iter_mut().rev() {
            let cur = (rem << 64) | *v as u128;
            *v = (cur / d128) as u64;
            rem = cur % d128;
        }
    }

    pub fn to_biguint(x: &[u64]) -> BigUint {
        let digits: Vec<u32> = x.iter().flat_map(|&v| [v as u32, (v >> 32) as u32]).collect();
        BigUint::new(digits)
    }
}

/// `n^r` as a list of factors that each fit in a `u64`.
fn power_chunks(n: u64, r: u32, out: &mut Vec<u64>) {
    out.clear();
    if n == 1 {
        return;
    }
    let mut cur: u64 = 1;
    for _ in 0..r {
        match cur.checked_mul(n) {
            Some(v) => cur = v,
            None => {
                out.push(cur);
                cur = n;
            }
        }
    }
    out.push(cur);
}

fn headroom_bits(depth: usize, n_terms: u64, weight: u64) -> u32 {
    let h = 2.0 + (n_terms.max(1) as f64).ln();
    (depth as f64 * h.log2()).ceil() as u32 + (64 - weight.leading_zeros()) + 8
}

fn limb_count(scale: u32, extra: u32) -> usize {
    ((scale + extra) / 64 + 1) as usize
}

/// Runs the layered DP for `idx` and hands `(n, A_k(n))` to `sink`.
/// Returns true if any fixed-width addition overflowed.
fn run_layers(
    idx: &RelationalIndex,
    n_terms: u64,
    scale: u32,
    len: usize,
    mut sink: impl FnMut(u64, &[u64]) -> bool,
) -> bool {
    let k = idx.depth();
    let one = limbs::pow2(scale, len);
    let mut prefix = vec![0u64; k * len];
    let mut cur = vec![0u64; k * len];
    let mut chunks = Vec::with_capacity(8);
    let mut overflow = false;
    for n in 1..=n_terms {
        for j in 0..k {
            let (before, rest) = cur.split_at_mut(j * len);
            let a = &mut rest[..len];
            if j == 0 {
                a.copy_from_slice(&one);
            } else {
                a.copy_from_slice(&prefix[(j - 1) * len..j * len]);
                if !idx.strict[j] {
                    overflow |= limbs::add_assign(a, &before[(j - 1) * len..]);
                }
            }
            power_chunks(n, idx.exponents[j], &mut chunks);
            for &d in &chunks {
                limbs::div_assign(a, d);
            }
        }
        for j in 0..k - 1 {
            overflow |= limbs::add_assign(&mut prefix[j * len..(j + 1) * len], &cur[j * len..(j + 1) * len]);
        }
        overflow |= sink(n, &cur[(k - 1) * len..]);
    }
    overflow
}

/// Fixed-width accumulation of the last layer, by point.
enum Accumulator {
    Half(BigUint),
    Cycle { period: usize, sums: Vec<Vec<u64>> },
}

impl Accumulator {
    fn new(point: EvalPoint, len: usize) -> Accumulator {
        match point {
            EvalPoint::Half => Accumulator::Half(BigUint::zero()),
            EvalPoint::MinusOne => Accumulator::Cycle { period: 2, sums: vec![vec![0; len]; 2] },
            EvalPoint::Rho | EvalPoint::RhoBar => Accumulator::Cycle { period: 6, sums: vec![vec![0; len]; 6] },
        }
    }

    fn unit(len: usize) -> Accumulator {
        Accumulator::Cycle { period: 1, sums: vec![vec![0; len]] }
    }

    fn push(&mut self, n: u64, a: &[u64]) -> bool {
        match self {
            Accumulator::Half(acc) => {
                *acc += limbs::to_biguint(a) >> n;
                false
            }
            Accumulator::Cycle { period, sums } => {
                let slot = (n % *period as u64) as usize;
                limbs::add_assign(&mut sums[slot], a)
            }
        }
    }

    /// Combines the sub-sums into a value whose radius covers the given
    /// rounding error (in ulps of `scale`) and the tail.
    fn finish(self, point: Option<EvalPoint>, scale: u32, err_ulps: u64, tail: &BigRational) -> ApproxComplex {
        let tail_ulps = (tail * BigRational::from_integer(BigInt::one() << scale)).ceil().to_integer();
        let tail_ulps = tail_ulps.to_biguint().unwrap_or_default();
        let err = BigUint::from(err_ulps);
        let out = match self {
            Accumulator::Half(acc) => {
                ApproxComplex::real(ApproxReal::from_parts(BigInt::from(acc), err, scale))
            }
            Accumulator::Cycle { period: 1, sums } => ApproxComplex::real(ApproxReal::from_parts(
                BigInt::from(limbs::to_biguint(&sums[0])),
                err,
                scale,
            )),
            Accumulator::Cycle { sums, .. } => {
                let table = point.expect("cycle point").power_table();
                let mut x = BigInt::zero();
                let mut y = BigInt::zero();
                for (j, s) in sums.iter().enumerate() {
                    let (j, s) = (j % 6, BigInt::from(limbs::to_biguint(s)));
                    let (x2, yj) = table[j];
                    x += &s * x2;
                    y += &s * yj;
                }
                // |x2_j|/2 ≤ 1 and |y_j| ≤ 1, so each part inherits at most the total error.
                let re = ApproxReal::from_parts(x, &err * 2u32, scale)
                    .div_integer(&BigInt::from(2))
                    .expect("nonzero");
                let im = if y.is_zero() && matches!(point, Some(EvalPoint::MinusOne)) {
                    ApproxReal::zero(scale)
                } else {
                    let half_sqrt3 = sqrt3_at_scale(scale).div_integer(&BigInt::from(2)).expect("nonzero");
                    &ApproxReal::from_parts(y, err, scale) * &half_sqrt3
                };
                ApproxComplex::new(re, im)
            }
        };
        let tail_only_real = matches!(point, None | Some(EvalPoint::Half) | Some(EvalPoint::MinusOne));
        let im = if tail_only_real { out.im } else { out.im.widen(&tail_ulps) };
        ApproxComplex::new(out.re.widen(&tail_ulps), im)
    }
}

/// Evaluates `L_idx(point)` with radius at most `eps`.
pub fn polylog_eps(idx: &RelationalIndex, point: EvalPoint, eps: &BigRational, opts: &EvalOptions) -> Result<Evaluated> {
    let plan = plan_with(idx, point, eps, 1, opts)?;
    let k = idx.depth() as u64;
    let mut scale = plan.scale_bits;
    let mut extra = headroom_bits(idx.depth(), plan.n_terms, 1);
    for _ in 0..4 {
        let len = limb_count(scale, extra);
        let mut acc = Accumulator::new(point, len);
        let overflow = run_layers(idx, plan.n_terms, scale, len, |n, a| acc.push(n, a));
        if overflow {
            extra += 64;
            continue;
        }
        let err = rounding_ulps(k, plan.n_terms, point);
        let value = acc.finish(Some(point), scale, err, &plan.tail_bound);
        if value.re.radius() <= *eps && value.im.radius() <= *eps {
            return Ok(Evaluated { value, terms_used: plan.n_terms });
        }
        scale += 16;
    }
    Err(Error::PrecisionNotCertified { digits: bits_for_eps(eps) * 3 / 10, radius: "unbounded".into() })
}

/// `L_idx(point)` to `digits` decimal digits.
pub fn polylog(idx: &RelationalIndex, point: EvalPoint, digits: u32) -> Result<ApproxComplex> {
    Ok(polylog_eps(idx, point, &eps_for_digits(digits), &EvalOptions::default())?.value)
}

/// `L_w(point)` for `w` in W+; the empty word gives exactly 1.
pub fn polylog_word(w: &Word, point: EvalPoint, digits: u32) -> Result<ApproxComplex> {
    Ok(polylog_word_eps(w, point, &eps_for_digits(digits), &EvalOptions::default())?.value)
}

pub fn polylog_word_eps(w: &Word, point: EvalPoint, eps: &BigRational, opts: &EvalOptions) -> Result<Evaluated> {
    if w.is_empty() {
        return Ok(Evaluated { value: ApproxComplex::one(0), terms_used: 0 });
    }
    let c = lambda_map(w)?;
    polylog_eps(&RelationalIndex::from_composition(&c)?, point, eps, opts)
}

/// `(L_a(z), L_b(z)) = (-log(1-z), log z)` on the principal branch.
pub fn letter_logs(point: EvalPoint, scale: u32) -> (ApproxComplex, ApproxComplex) {
    match point {
        EvalPoint::Half => {
            let l = log2_at_scale(scale);
            (ApproxComplex::real(l.clone()), ApproxComplex::real(-&l))
        }
        EvalPoint::MinusOne => {
            let l = log2_at_scale(scale);
            (ApproxComplex::real(-&l), ApproxComplex::imag(pi_at_scale(scale)))
        }
        EvalPoint::Rho | EvalPoint::RhoBar => {
            let third = pi_at_scale(scale).div_integer(&BigInt::from(3)).expect("nonzero");
            let third = if point == EvalPoint::Rho { third } else { -&third };
            (ApproxComplex::imag(third.clone()), ApproxComplex::imag(third))
        }
    }
}

/// Upper bound for `|L_a|`, `|L_b|` used to split the error budget.
fn letter_log_bound(point: EvalPoint) -> f64 {
    match point {
        EvalPoint::Half => 0.7,
        EvalPoint::MinusOne => 3.2,
        EvalPoint::Rho | EvalPoint::RhoBar => 1.1,
    }
}

/// One summand `c·L_w·L_a^i·L_b^j` of a regularized polynomial.
struct Item {
    word: Word,
    coeff: BigRational,
    i: usize,
    j: usize,
}

fn regularized_items(h: &WordPoly, point: EvalPoint) -> Vec<Item> {
    let mut items = Vec::new();
    if point == EvalPoint::Half {
        for (j, hj) in regularize_b(h) {
            for (w, c) in hj.iter() {
                items.push(Item { word: *w, coeff: c.clone(), i: 0, j });
            }
        }
    } else {
        for (&(i, j), hij) in &regularize_ab(h).coeffs {
            for (w, c) in hij.iter() {
                items.push(Item { word: *w, coeff: c.clone(), i, j });
            }
        }
    }
    items
}

fn evaluate_words(words: &[Word], point: EvalPoint, eps: &BigRational, opts: &EvalOptions) -> Result<Vec<Evaluated>> {
    let threads = opts.threads.max(1).min(words.len().max(1));
    if threads <= 1 || point == EvalPoint::Half {
        return words.iter().map(|w| polylog_word_eps(w, point, eps, opts)).collect();
    }
    let mut results: Vec<Option<Result<Evaluated>>> = (0..words.len()).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots = std::sync::Mutex::new(&mut results);
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= words.len() {
                    break;
                }
                let r = polylog_word_eps(&words[i], point, eps, opts);
                slots.lock().expect("poisoned")[i] = Some(r);
            });
        }
    });
    results.into_iter().map(|r| r.expect("every slot filled")).collect()
}

/// `L_h(point)` for any `h`, with `L_b = log z` substituted in closed form and,
/// on the unit circle, trailing `a`s rewritten through `L_a = -log(1-z)` so
/// that every summed series has trailing exponent at least 2.
pub fn polylog_helem(h: &WordPoly, point: EvalPoint, digits: u32) -> Result<ApproxComplex> {
    Ok(polylog_helem_eps(h, point, &eps_for_digits(digits), &EvalOptions::default())?.value)
}

pub fn polylog_helem_eps(h: &WordPoly, point: EvalPoint, eps: &BigRational, opts: &EvalOptions) -> Result<Evaluated> {
    let items = regularized_items(h, point);
    if items.is_empty() {
        return Ok(Evaluated { value: ApproxComplex::zero(0), terms_used: 0 });
    }
    let m = letter_log_bound(point);
    let mut budget = 0.0f64;
    for it in &items {
        if !it.word.is_empty() {
            budget += it.coeff.abs().to_f64().unwrap_or(f64::MAX) * m.powi((it.i + it.j) as i32);
        }
    }
    let mut words: Vec<Word> = items.iter().map(|it| it.word).filter(|w| !w.is_empty()).collect();
    words.sort();
    words.dedup();

    let mut word_eps = eps / BigRational::from_integer(BigInt::from((4.0 * budget.max(1.0)).ceil() as u64));
    for _ in 0..3 {
        let evaluated = evaluate_words(&words, point, &word_eps, opts)?;
        let terms_used = evaluated.iter().map(|e| e.terms_used).max().unwrap_or(0);
        let values: HashMap<Word, ApproxComplex> =
            words.iter().copied().zip(evaluated.into_iter().map(|e| e.value)).collect();

        let scale = values.values().map(|v| v.re.scale()).max().unwrap_or(0).max(bits_for_eps(eps) + 40);
        let (la, lb) = letter_logs(point, scale);
        let max_i = items.iter().map(|it| it.i).max().unwrap_or(0);
        let max_j = items.iter().map(|it| it.j).max().unwrap_or(0);
        let la_pows: Vec<ApproxComplex> = (0..=max_i as u32).map(|e| la.powi(e)).collect();
        let lb_pows: Vec<ApproxComplex> = (0..=max_j as u32).map(|e| lb.powi(e)).collect();

        let mut total = ApproxComplex::zero(scale);
        for it in &items {
            let base = if it.word.is_empty() { ApproxComplex::one(scale) } else { values[&it.word].clone() };
            let term = &(&base * &la_pows[it.i]) * &lb_pows[it.j];
            // b^{*j} has L-value L_b^j and a^{*i} has L_a^i; the items already
            // carry the coefficients of those shuffle powers.
            total = &total + &term.scale_by_rational(&it.coeff);
        }
        if total.re.radius() <= *eps && total.im.radius() <= *eps {
            return Ok(Evaluated { value: total, terms_used });
        }
        word_eps /= BigRational::from_integer(BigInt::from(1000));
    }
    Err(Error::PrecisionNotCertified { digits: bits_for_eps(eps) * 3 / 10, radius: "budget exhausted".into() })
}

/// `Σ_{0<n_1≤…≤n_r} a(n)·2^{-n_r}/(n_1…n_r)` with the cone-count weight `a`
/// folded into the DP: a strict-prefix accumulator `A` and a weighted
/// accumulator `W` for prefixes whose first equality fixed the weight.
pub fn relational_sum_cor12(r: usize, digits: u32) -> Result<ApproxReal> {
    Ok(cor12_eps(r, &eps_for_digits(digits), &EvalOptions::default())?.0)
}

fn cor12_error_ulps(r: usize) -> u64 {
    let (mut ea, mut ew) = (1u64, 0u64);
    for l in 1..r - 1 {
        ew += l as u64 * ea + 1;
        ea += 1;
    }
    ew + r as u64 * ea + 1
}

pub fn cor12_eps(r: usize, eps: &BigRational, opts: &EvalOptions) -> Result<(ApproxReal, u64)> {
    if r < 2 {
        return Err(Error::Precondition(format!("weighted cone sum needs r >= 2, got {r}")));
    }
    let shape = RelationalIndex::new(vec![1; r], {
        let mut f = vec![false; r];
        f[0] = true;
        f
    })?;
    let plan = plan_with(&shape, EvalPoint::Half, eps, r as u64, opts)?;
    let n_terms = plan.n_terms;
    let err_ulps = cor12_error_ulps(r) + n_terms + 1;
    let mut scale = plan.scale_bits + (64 - cor12_error_ulps(r).leading_zeros());
    let mut extra = headroom_bits(r, n_terms, r as u64 * r as u64);
    for _ in 0..4 {
        let len = limb_count(scale, extra);
        let layers = r - 1;
        let one = limbs::pow2(scale, len);
        let mut a = vec![vec![0u64; len]; layers];
        let mut w = vec![vec![0u64; len]; layers];
        let mut pa = vec![vec![0u64; len]; layers];
        let mut pw = vec![vec![0u64; len]; layers];
        let mut acc = BigUint::zero();
        let mut tmp = vec![0u64; len];
        let mut overflow = false;
        for n in 1..=n_terms {
            a[0].copy_from_slice(&one);
            limbs::div_assign(&mut a[0], n);
            for l in 1..layers {
                // A_{l+1}(n) = PA_l(n-1)/n
                let (lo, hi) = a.split_at_mut(l);
                hi[0].copy_from_slice(&pa[l - 1]);
                limbs::div_assign(&mut hi[0], n);
                // W_{l+1}(n) = (PW_l(n) + l·A_l(n))/n, PW_l(n) = PW_l(n-1) + W_l(n)
                let (wlo, whi) = w.split_at_mut(l);
                whi[0].copy_from_slice(&pw[l - 1]);
                overflow |= limbs::add_assign(&mut whi[0], &wlo[l - 1]);
                tmp.copy_from_slice(&lo[l - 1]);
                overflow |= limbs::mul_assign(&mut tmp, l as u64);
                overflow |= limbs::add_assign(&mut whi[0], &tmp);
                limbs::div_assign(&mut whi[0], n);
            }
            for l in 0..layers {
                overflow |= limbs::add_assign(&mut pa[l], &a[l]);
                overflow |= limbs::add_assign(&mut pw[l], &w[l]);
            }
            // F(n) = (PW_{r-1}(n) + r·PA_{r-1}(n))/n
            tmp.copy_from_slice(&pa[layers - 1]);
            overflow |= limbs::mul_assign(&mut tmp, r as u64);
            overflow |= limbs::add_assign(&mut tmp, &pw[layers - 1]);
            limbs::div_assign(&mut tmp, n);
            acc += limbs::to_biguint(&tmp) >> n;
        }
        if overflow {
            extra += 64;
            continue;
        }
        let value = Accumulator::Half(acc).finish(None, scale, err_ulps, &plan.tail_bound).re;
        if value.radius() <= *eps {
            return Ok((value, n_terms));
        }
        scale += 16;
    }
    Err(Error::PrecisionNotCertified { digits: bits_for_eps(eps) * 3 / 10, radius: "unbounded".into() })
}

/// `Σ_{n_k ≤ N}` of the series at `z = 1` plus the unit-circle tail bound;
/// the low-precision ground truth for convergent compositions.
pub fn direct_partial_sum(idx: &RelationalIndex, n_terms: u64, scale: u32) -> Result<ApproxReal> {
    if idx.last_exponent() < 2 {
        return Err(Error::Divergent(format!("{idx}")));
    }
    let n_terms = n_terms.max(circle_min_terms(idx));
    // The z = 1 tail uses the same absolute bound as ρ.
    let tail = circle_tail(idx, EvalPoint::Rho, n_terms);
    let mut extra = headroom_bits(idx.depth(), n_terms, 1);
    loop {
        let len = limb_count(scale, extra);
        let mut acc = Accumulator::unit(len);
        if run_layers(idx, n_terms, scale, len, |n, a| acc.push(n, a)) {
            extra += 64;
            continue;
        }
        let err = rounding_ulps(idx.depth() as u64, n_terms, EvalPoint::Rho);
        return Ok(acc.finish(None, scale, err, &tail).re);
    }
}

/// Exact partial sum `Σ_{n_k ≤ n_max}` by enumerating all index tuples; at
/// `ρ^{±1}` the imaginary part is returned as its coefficient of `√3/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteSum {
    pub re: BigRational,
    pub im_sqrt3_half: BigRational,
}

pub fn brute_force_partial(idx: &RelationalIndex, point: EvalPoint, n_max: u64) -> BruteSum {
    fn walk(
        idx: &RelationalIndex,
        depth: usize,
        prev: u64,
        prod: &BigRational,
        n_max: u64,
        out: &mut Vec<(u64, BigRational)>,
    ) {
        let start = if depth == 0 || idx.strict[depth] { prev + 1 } else { prev.max(1) };
        for n in start..=n_max {
            let p = prod / BigRational::from_integer(BigInt::from(n).pow(idx.exponents[depth]));
            if depth + 1 == idx.depth() {
                out.push((n, p));
            } else {
                walk(idx, depth + 1, n, &p, n_max, out);
            }
        }
    }
    let mut terms = Vec::new();
    walk(idx, 0, 0, &BigRational::one(), n_max, &mut terms);
    let mut re = BigRational::zero();
    let mut im = BigRational::zero();
    for (n, t) in terms {
        match point {
            EvalPoint::Half => re += t / BigRational::from_integer(BigInt::one() << n),
            _ => {
                let (x2, y) = point.power_table()[(n % 6) as usize];
                re += &t * ratio(x2, 2);
                im += t * BigRational::from_integer(BigInt::from(y));
            }
        }
    }
    BruteSum { re, im_sqrt3_half: im }
}

/// Certified tail after `n` terms, as used by the evaluator.
pub fn tail_after(idx: &RelationalIndex, point: EvalPoint, n: u64) -> Result<BigRational> {
    check_circle(idx, point)?;
    Ok(match point {
        EvalPoint::Half => half_tail(idx.depth() as u64, idx.last_exponent(), 1, n),
        _ => circle_tail(idx, point, n),
    })
}
