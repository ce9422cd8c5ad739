//! Multiple zeta values by every supported route: the direct defining sum,
//! `ζ(h) = L_{box(h)}(1/2)`, `ζ±(h) = L_{∇(h)}(ρ^{±1})`, the depth-one
//! formulas at `1/2`, `-1` and `ρ`, and shuffle regularization.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::{pi_at_scale, ApproxComplex, ApproxReal, EvalPoint};
use crate::series::{
    cor12_eps, direct_partial_sum, eps_for_digits, polylog_eps, polylog_helem_eps, tail_after,
    EvalOptions, Evaluated, RelationalIndex,
};
use crate::transforms::{box_op, nabla, theorem10_weights};
use crate::words::{in_w_plus_plus, lambda_inverse, lambda_map, regularize_ab, Composition, Word, WordPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Direct,
    Thm7Half,
    Thm7Rho,
    Thm7RhoBar,
    Thm10,
    Cor12,
    Cor21,
    Lemma20MinusOne,
    Lemma20Rho,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::Direct,
        Method::Thm7Half,
        Method::Thm7Rho,
        Method::Thm7RhoBar,
        Method::Thm10,
        Method::Cor12,
        Method::Cor21,
        Method::Lemma20MinusOne,
        Method::Lemma20Rho,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Thm7Half => "thm7-half",
            Method::Thm7Rho => "thm7-rho",
            Method::Thm7RhoBar => "thm7-rhobar",
            Method::Thm10 => "thm10",
            Method::Cor12 => "cor12",
            Method::Cor21 => "cor21",
            Method::Lemma20MinusOne => "lemma20-minus-one",
            Method::Lemma20Rho => "lemma20-rho",
        }
    }

    /// Point whose series the method sums, if a single one.
    pub fn point(self) -> Option<EvalPoint> {
        match self {
            Method::Direct => None,
            Method::Thm7Half | Method::Thm10 | Method::Cor12 | Method::Cor21 => Some(EvalPoint::Half),
            Method::Thm7Rho | Method::Lemma20Rho => Some(EvalPoint::Rho),
            Method::Thm7RhoBar => Some(EvalPoint::RhoBar),
            Method::Lemma20MinusOne => Some(EvalPoint::MinusOne),
        }
    }

    /// Methods summing on the unit circle, whose cost is polynomial in `10^digits`.
    pub fn is_circle(self) -> bool {
        matches!(self, Method::Thm7Rho | Method::Thm7RhoBar | Method::Lemma20Rho)
    }

    pub fn depth_one_only(self) -> bool {
        matches!(self, Method::Thm10 | Method::Cor12 | Method::Cor21 | Method::Lemma20MinusOne | Method::Lemma20Rho)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Method> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Method::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown method `{s}`")))
    }
}

/// Sign selecting `ζ+` (at `ρ`, `ψ+(a) = iπ`) or `ζ-` (at `ρ̄`, `ψ-(a) = -iπ`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmSign {
    Plus,
    Minus,
}

impl PmSign {
    pub fn point(self) -> EvalPoint {
        match self {
            PmSign::Plus => EvalPoint::Rho,
            PmSign::Minus => EvalPoint::RhoBar,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZetaInput {
    Composition(Composition),
    Word(Word),
    Poly(WordPoly),
}

impl ZetaInput {
    pub fn to_poly(&self) -> WordPoly {
        match self {
            ZetaInput::Composition(c) => WordPoly::from(lambda_inverse(c)),
            ZetaInput::Word(w) => WordPoly::from(*w),
            ZetaInput::Poly(p) => p.clone(),
        }
    }

    /// The composition this input denotes, when it is a single word in W+.
    pub fn as_composition(&self) -> Option<Composition> {
        match self {
            ZetaInput::Composition(c) => Some(c.clone()),
            ZetaInput::Word(w) => lambda_map(w).ok(),
            ZetaInput::Poly(p) => {
                let mut it = p.iter();
                match (it.next(), it.next()) {
                    (Some((w, c)), None) if c.is_one() => lambda_map(w).ok(),
                    _ => None,
                }
            }
        }
    }
}

impl fmt::Display for ZetaInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZetaInput::Composition(c) => write!(f, "{c}"),
            ZetaInput::Word(w) => write!(f, "{w}"),
            ZetaInput::Poly(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ZetaRequest {
    pub input: ZetaInput,
    pub method: Method,
    pub digits: u32,
}

#[derive(Debug, Clone)]
pub struct ZetaResult {
    pub value: ApproxComplex,
    pub method: Method,
    pub terms_used: u64,
    pub elapsed: Duration,
}

impl ZetaResult {
    pub fn real(&self) -> &ApproxReal {
        &self.value.re
    }
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Largest composition weight accepted (the box expansion has up to
    /// `2^weight` words).
    pub max_weight: u32,
    /// Largest digit count accepted by the unit-circle methods.
    pub rho_digit_cap: u32,
    pub eval: EvalOptions,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { max_weight: 12, rho_digit_cap: 8, eval: EvalOptions::default() }
    }
}

fn require_convergent(c: &Composition) -> Result<()> {
    if c.is_empty() || !c.is_convergent() {
        return Err(Error::Divergent(c.to_string()));
    }
    Ok(())
}

fn check_weight(weight: u32, cfg: &EngineConfig) -> Result<()> {
    if weight > cfg.max_weight {
        return Err(Error::Precondition(format!("weight {weight} exceeds the configured cap {}", cfg.max_weight)));
    }
    Ok(())
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Partial sum of the defining series up to `n_k ≤ n_cutoff` plus the
/// certified tail; low-precision ground truth.
pub fn zeta_direct_oracle(c: &Composition, n_cutoff: u64) -> Result<ApproxReal> {
    require_convergent(c)?;
    let idx = RelationalIndex::from_composition(c)?;
    let scale = 64 + (64 - (n_cutoff.max(1) * c.depth() as u64).leading_zeros());
    direct_partial_sum(&idx, n_cutoff, scale)
}

fn direct_eps(c: &Composition, eps: &BigRational, cfg: &EngineConfig) -> Result<(ApproxReal, u64)> {
    require_convergent(c)?;
    let idx = RelationalIndex::from_composition(c)?;
    let half = eps / int(2);
    let mut n: u64 = 16;
    while tail_after(&idx, EvalPoint::Rho, n)? > half {
        if n > cfg.eval.max_terms {
            return Err(Error::PrecisionUnreachable {
                digits: digits_of(eps),
                required: n,
                cap: cfg.eval.max_terms,
            });
        }
        n *= 2;
    }
    let bits = eps.denom().bits() as u32 + 40;
    let v = direct_partial_sum(&idx, n, bits)?;
    Ok((v, n))
}

fn digits_of(eps: &BigRational) -> u32 {
    (eps.denom().bits() as f64 / std::f64::consts::LOG2_10).floor() as u32
}

/// `ζ(c) = L_{box(λ⁻¹ c)}(1/2)`.
pub fn zeta_conv(c: &Composition, digits: u32) -> Result<ApproxReal> {
    Ok(zeta_conv_eps(c, &eps_for_digits(digits), &EngineConfig::default())?.value.re)
}

pub fn zeta_conv_eps(c: &Composition, eps: &BigRational, cfg: &EngineConfig) -> Result<Evaluated> {
    require_convergent(c)?;
    check_weight(c.weight(), cfg)?;
    let h = box_op(&WordPoly::from(lambda_inverse(c)));
    polylog_helem_eps(&h, EvalPoint::Half, eps, &cfg.eval)
}

/// Regularized `ζ(h)`: `ψ(a) = ψ(b) = 0` keeps only the W++ part of the
/// shuffle-polynomial form of `h`.
pub fn zeta_reg(h: &WordPoly, digits: u32) -> Result<ApproxReal> {
    Ok(zeta_reg_eps(h, &eps_for_digits(digits), &EngineConfig::default())?.value.re)
}

pub fn zeta_reg_eps(h: &WordPoly, eps: &BigRational, cfg: &EngineConfig) -> Result<Evaluated> {
    let reg = regularize_ab(h);
    match reg.get(0, 0) {
        None => Ok(Evaluated { value: ApproxComplex::zero(0), terms_used: 0 }),
        Some(h00) => {
            check_weight(h00.max_len() as u32, cfg)?;
            polylog_helem_eps(&box_op(h00), EvalPoint::Half, eps, &cfg.eval)
        }
    }
}

/// Regularized `ζ±(h)` with `ψ±(a) = ±iπ`, `ψ±(b) = 0`.
pub fn zeta_pm(h: &WordPoly, digits: u32, sign: PmSign) -> Result<ApproxComplex> {
    Ok(zeta_pm_eps(h, &eps_for_digits(digits), sign, &EngineConfig::default())?.value)
}

pub fn zeta_pm_eps(h: &WordPoly, eps: &BigRational, sign: PmSign, cfg: &EngineConfig) -> Result<Evaluated> {
    let reg = regularize_ab(h);
    let parts: Vec<(usize, &WordPoly)> =
        reg.coeffs.iter().filter(|((_, j), _)| *j == 0).map(|(&(i, _), p)| (i, p)).collect();
    if parts.is_empty() {
        return Ok(Evaluated { value: ApproxComplex::zero(0), terms_used: 0 });
    }
    let max_i = parts.iter().map(|(i, _)| *i).max().unwrap_or(0) as u32;
    // Each coefficient is multiplied by π^i ≤ 4^i.
    let budget = parts.iter().map(|(i, _)| 4f64.powi(*i as i32)).sum::<f64>();
    let part_eps = eps / int((4.0 * budget).ceil() as i64);
    let scale = eps.denom().bits() as u32 + 40 + 2 * max_i;
    let pi = pi_at_scale(scale);
    let unit = match sign {
        PmSign::Plus => ApproxComplex::imag(pi),
        PmSign::Minus => ApproxComplex::imag(-&pi),
    };
    let mut total = ApproxComplex::zero(scale);
    let mut terms = 0;
    for (i, p) in parts {
        check_weight(p.max_len() as u32, cfg)?;
        let z = polylog_helem_eps(&box_op(p), EvalPoint::Half, &part_eps, &cfg.eval)?;
        terms = terms.max(z.terms_used);
        total = &total + &(&z.value * &unit.powi(i as u32));
    }
    Ok(Evaluated { value: total, terms_used: terms })
}

fn check_rho_digits(method: Method, digits: u32, cfg: &EngineConfig) -> Result<()> {
    if method.is_circle() && digits > cfg.rho_digit_cap {
        return Err(Error::Precondition(format!(
            "{method} converges polynomially; at most {} digits are supported",
            cfg.rho_digit_cap
        )));
    }
    Ok(())
}

/// `2^m / (2^m - 1)` with `m = r - 1`.
fn cor21_factor(r: u32) -> BigRational {
    let p = BigInt::one() << (r - 1);
    BigRational::new(p.clone(), p - 1)
}

fn scaled(e: Evaluated, factor: &BigRational) -> Evaluated {
    Evaluated { value: e.value.scale_by_rational(factor), terms_used: e.terms_used }
}

/// `a(a+b)^{r-1}` summed as one relational series `0 < n_1 ≤ … ≤ n_r`.
fn cor21_index(r: u32) -> Result<RelationalIndex> {
    let mut strict = vec![false; r as usize];
    strict[0] = true;
    RelationalIndex::new(vec![1; r as usize], strict)
}

/// The expanded-word route for the same formula: `a(a+b)^{r-1}` as a sum of words.
pub fn cor21_expanded(r: u32, digits: u32) -> Result<ApproxReal> {
    if r < 2 {
        return Err(Error::Precondition(format!("r must be at least 2, got {r}")));
    }
    let eps = eps_for_digits(digits) / int(4);
    let word = WordPoly::letter(crate::words::Letter::A).concat(&WordPoly::linear(1, 1).concat_pow(r as usize - 1));
    let v = polylog_helem_eps(&word, EvalPoint::Half, &eps, &EvalOptions::default())?;
    Ok(v.value.re.scale_by_rational(&cor21_factor(r)))
}

fn zeta_r_eps(r: u32, method: Method, eps: &BigRational, cfg: &EngineConfig) -> Result<Evaluated> {
    if r < 2 {
        return Err(Error::Precondition(format!("r must be at least 2, got {r}")));
    }
    check_weight(r, cfg)?;
    let single = Composition::new(vec![r])?;
    let depth_one = RelationalIndex::from_composition(&single)?;
    match method {
        Method::Direct => {
            let (v, n) = direct_eps(&single, eps, cfg)?;
            Ok(Evaluated { value: ApproxComplex::real(v), terms_used: n })
        }
        Method::Thm7Half => zeta_conv_eps(&single, eps, cfg),
        Method::Thm7Rho | Method::Thm7RhoBar => {
            let h = nabla(&WordPoly::from(lambda_inverse(&single)));
            polylog_helem_eps(&h, method.point().expect("circle"), eps, &cfg.eval)
        }
        Method::Thm10 => {
            let comps = Composition::all_of_weight(r);
            let weights: Vec<i64> =
                comps.iter().map(|m| theorem10_weights(m).map(|w| w.0)).collect::<Result<_>>()?;
            let l1: i64 = weights.iter().map(|w| w.abs()).sum();
            let term_eps = eps / int(2 * l1.max(1));
            let mut total = ApproxComplex::zero(0);
            let mut terms = 0;
            for (m, w) in comps.iter().zip(weights) {
                if w == 0 {
                    continue;
                }
                let v = polylog_eps(&RelationalIndex::from_composition(m)?, EvalPoint::Half, &term_eps, &cfg.eval)?;
                terms = terms.max(v.terms_used);
                total = &total + &v.value.scale_by_rational(&int(w));
            }
            Ok(Evaluated { value: total, terms_used: terms })
        }
        Method::Cor12 => {
            let (v, n) = cor12_eps(r as usize, eps, &cfg.eval)?;
            Ok(Evaluated { value: ApproxComplex::real(v), terms_used: n })
        }
        Method::Cor21 => {
            let v = polylog_eps(&cor21_index(r)?, EvalPoint::Half, &(eps / int(4)), &cfg.eval)?;
            Ok(scaled(v, &cor21_factor(r)))
        }
        Method::Lemma20MinusOne => {
            // ζ(r) = -L_r(-1) / (1 - 2^{1-r})
            let p = BigInt::one() << (r - 1);
            let factor = -BigRational::new(p.clone(), p - 1);
            let v = polylog_eps(&depth_one, EvalPoint::MinusOne, &(eps / int(4)), &cfg.eval)?;
            Ok(scaled(v, &factor))
        }
        Method::Lemma20Rho => {
            // ζ(r) = (L_r(ρ) + L_r(ρ̄)) / ((1 - 2^{1-r})(1 - 3^{1-r})) = 2·Re L_r(ρ) / (…)
            let p2 = BigInt::one() << (r - 1);
            let p3 = BigInt::from(3).pow(r - 1);
            let factor = BigRational::new(BigInt::from(2) * &p2 * &p3, (&p2 - 1) * (&p3 - 1));
            let v = polylog_eps(&depth_one, EvalPoint::Rho, &(eps / int(24)), &cfg.eval)?;
            let re = v.value.re.scale_by_rational(&factor);
            Ok(Evaluated { value: ApproxComplex::real(re), terms_used: v.terms_used })
        }
    }
}

/// `ζ(r)` by one of the depth-one formulas.
pub fn zeta_r(r: u32, method: Method, digits: u32) -> Result<ZetaResult> {
    compute(
        &ZetaRequest {
            input: ZetaInput::Composition(Composition::new(vec![r])?),
            method,
            digits,
        },
        &EngineConfig::default(),
    )
}

/// Runs a request and certifies the result to the requested digits.
pub fn compute(req: &ZetaRequest, cfg: &EngineConfig) -> Result<ZetaResult> {
    let start = Instant::now();
    check_rho_digits(req.method, req.digits, cfg)?;
    let eps = eps_for_digits(req.digits);
    let comp = req.input.as_composition();
    let evaluated = match (&comp, req.method) {
        (Some(c), m) if m.depth_one_only() => {
            if c.depth() != 1 {
                return Err(Error::Precondition(format!("{m} needs a depth-one composition, got {c}")));
            }
            require_convergent(c)?;
            zeta_r_eps(c.parts()[0], m, &eps, cfg)?
        }
        (None, m) if m.depth_one_only() || m == Method::Direct => {
            return Err(Error::Precondition(format!("{m} needs a single convergent word")));
        }
        (Some(c), Method::Direct) => {
            let (v, n) = direct_eps(c, &eps, cfg)?;
            Evaluated { value: ApproxComplex::real(v), terms_used: n }
        }
        (_, Method::Thm7Half) => {
            let h = req.input.to_poly();
            if let ZetaInput::Composition(c) = &req.input {
                require_convergent(c)?;
            }
            check_weight(h.max_len() as u32, cfg)?;
            polylog_helem_eps(&box_op(&h), EvalPoint::Half, &eps, &cfg.eval)?
        }
        (_, Method::Thm7Rho | Method::Thm7RhoBar) => {
            let h = req.input.to_poly();
            if let ZetaInput::Composition(c) = &req.input {
                require_convergent(c)?;
            }
            check_weight(h.max_len() as u32, cfg)?;
            polylog_helem_eps(&nabla(&h), req.method.point().expect("circle"), &eps, &cfg.eval)?
        }
        (_, m) => unreachable!("method {m} handled above"),
    };
    let value = evaluated.value;
    if !value.certifies(req.digits) {
        return Err(Error::PrecisionNotCertified { digits: req.digits, radius: value.re.bound_string() });
    }
    Ok(ZetaResult { value, method: req.method, terms_used: evaluated.terms_used, elapsed: start.elapsed() })
}

/// True when `h` only has words in W++, so no regularization is involved.
pub fn is_convergent_poly(h: &WordPoly) -> bool {
    h.supported_on(in_w_plus_plus)
}

/// Residual `|x - y|` upper bound as an `f64`, for diagnostics.
pub fn residual(x: &ApproxReal, y: &ApproxReal) -> f64 {
    (x.midpoint() - y.midpoint()).abs().to_f64().unwrap_or(f64::INFINITY)
}

/// Whether `x` and `y` agree within their combined radii.
pub fn agree(x: &ApproxReal, y: &ApproxReal) -> bool {
    x.overlaps(y)
}

pub fn is_zero_enclosed(x: &ApproxReal) -> bool {
    x.overlaps(&ApproxReal::zero(x.scale())) || x.mid().is_zero()
}
