//! Invariant suites behind `polyzeta verify`.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::group::{pair, pk_decompose, q_element, ql_decompose, random_grouplike, NcSeries};
use crate::numerics::{const_log2, const_pi, ApproxReal, EvalPoint};
use crate::series::{polylog, RelationalIndex};
use crate::transforms::{apply_transform, box_closed_form, box_op, nabla, nabla_closed_form, TransformKind};
use crate::words::{
    antipode, coproduct, in_w_plus, in_w_plus_plus, lambda_inverse, lambda_map, regularize_ab, regularize_b,
    Composition, Letter, Word, WordPoly,
};
use crate::zeta::{agree, zeta_conv, zeta_direct_oracle, zeta_r, zeta_reg, Method};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    fn from_result(name: impl Into<String>, r: Result<(bool, String)>) -> Check {
        match r {
            Ok((passed, detail)) => Check::new(name, passed, detail),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: &'static str,
    /// Noun used in the summary line, e.g. "identity suites".
    pub unit: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.checks.len()
    }

    pub fn summary(&self) -> String {
        let verdict = if self.all_passed() { "PASS" } else { "FAIL" };
        format!("{verdict} {}/{} {}", self.passed(), self.checks.len(), self.unit)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "  {verdict} {}: {}", c.name, c.detail)?;
        }
        write!(f, "{}", self.summary())
    }
}

fn sweep(words: impl Iterator<Item = Word>, mut ok: impl FnMut(&Word) -> bool) -> (bool, String) {
    let mut count = 0;
    for w in words {
        count += 1;
        if !ok(&w) {
            return (false, format!("fails at `{w}`"));
        }
    }
    (true, format!("{count} cases"))
}

/// Exact identities of the word algebra and the transforms, over all words of
/// length at most `max_len`.
pub fn algebra_suite(max_len: usize) -> SuiteReport {
    let words = || Word::all_up_to(max_len);
    let tau = |h: &WordPoly| apply_transform(TransformKind::Tau, h);
    let sigma = |h: &WordPoly| apply_transform(TransformKind::Sigma, h);
    let checks = vec![
        {
            let (ok, detail) = sweep(words(), |u| {
                Word::all_up_to(max_len - u.len()).all(|v| {
                    let (pu, pv) = (WordPoly::from(*u), WordPoly::from(v));
                    pu.shuffle(&pv) == pv.shuffle(&pu)
                })
            });
            Check::new("shuffle is commutative", ok, detail)
        },
        {
            let (ok, detail) = sweep(words(), |w| {
                let mut conv = WordPoly::zero();
                for (l, r) in coproduct(w) {
                    conv += &antipode(&l).shuffle(&WordPoly::from(r));
                }
                conv == if w.is_empty() { WordPoly::one() } else { WordPoly::zero() }
            });
            Check::new("antipode axiom", ok, detail)
        },
        {
            let (ok, detail) = sweep(words().filter(in_w_plus), |w| {
                lambda_map(w).map(|c| lambda_inverse(&c) == *w).unwrap_or(false)
            });
            Check::new("lambda bijection", ok, detail)
        },
        {
            let (ok, detail) = sweep(words(), |w| {
                let h = WordPoly::from(*w);
                let b_form = regularize_b(&h);
                let mut back = WordPoly::zero();
                for (j, hj) in &b_form {
                    back += &hj.shuffle(&crate::words::letter_shuffle_power(Letter::B, *j));
                }
                let ab = regularize_ab(&h);
                back == h && ab.expand() == h && ab.coeffs.values().all(|p| p.supported_on(in_w_plus_plus))
            });
            Check::new("regularization round trips", ok, detail)
        },
        {
            let (ok, detail) = sweep(words(), |w| {
                let h = WordPoly::from(*w);
                sigma(&sigma(&h)) == h && tau(&tau(&tau(&h))) == antipode(w)
            });
            Check::new("sigma^2 = id, tau^3 = antipode", ok, detail)
        },
        {
            let ok = (2..=max_len.max(2)).all(|r| {
                let h = WordPoly::from(lambda_inverse(&Composition::new(vec![r as u32]).expect("positive")));
                box_closed_form(r).map(|c| c == box_op(&h)).unwrap_or(false)
                    && nabla_closed_form(r).map(|c| c == nabla(&h)).unwrap_or(false)
            });
            Check::new("closed forms of box/nabla on a b^(r-1)", ok, format!("r = 2..={}", max_len.max(2)))
        },
    ];
    SuiteReport { suite: "algebra", unit: "algebra checks", checks }
}

fn real_check(name: String, x: &ApproxReal, y: &ApproxReal) -> Check {
    let residual = (x.midpoint() - y.midpoint()).abs();
    let radii = x.radius() + y.radius();
    Check::new(
        name,
        agree(x, y),
        format!(
            "residual {} <= radii {}",
            crate::numerics::format_bound(&residual),
            crate::numerics::format_bound(&radii)
        ),
    )
}

/// Numeric identities among zeta values of weight at most `max_weight`,
/// certified to `digits` digits.
pub fn numeric_suite(max_weight: u32, digits: u32) -> SuiteReport {
    let mut checks = Vec::new();
    let max_weight = max_weight.max(2);
    // Euler's relation for zeta(2).
    checks.push(Check::from_result("zeta(2) = 2 L_2(1/2) + log^2 2", (|| {
        let z = zeta_conv(&Composition::new(vec![2])?, digits)?;
        let l = polylog(&RelationalIndex::new(vec![2], vec![true])?, EvalPoint::Half, digits + 2)?.re;
        let lg = const_log2(digits + 2);
        let rhs = &l.mul_integer(&2.into()) + &(&lg * &lg);
        let c = real_check(String::new(), &z, &rhs);
        Ok((c.passed, c.detail))
    })()));
    checks.push(Check::from_result("zeta(2) = pi^2/6", (|| {
        let z = zeta_conv(&Composition::new(vec![2])?, digits)?;
        let pi = const_pi(digits + 2);
        let rhs = (&pi * &pi).div_integer(&6.into())?;
        let c = real_check(String::new(), &z, &rhs);
        Ok((c.passed, c.detail))
    })()));
    for r in 2..=max_weight {
        let base = zeta_r(r, Method::Thm7Half, digits);
        for m in [Method::Thm10, Method::Cor12, Method::Cor21] {
            let name = format!("zeta({r}): {} = {}", Method::Thm7Half, m);
            checks.push(Check::from_result(name, (|| {
                let x = base.as_ref().map_err(|e| crate::Error::Precondition(e.to_string()))?;
                let y = zeta_r(r, m, digits)?;
                let c = real_check(String::new(), x.real(), y.real());
                Ok((c.passed, c.detail))
            })()));
        }
    }
    for r in 2..=max_weight {
        for c in Composition::all_of_weight(r).into_iter().filter(|c| c.is_convergent()) {
            checks.push(Check::from_result(format!("zeta{c} vs direct sum"), (|| {
                let x = zeta_conv(&c, digits)?;
                let y = zeta_direct_oracle(&c, 20_000)?;
                let chk = real_check(String::new(), &x, &y);
                Ok((chk.passed, chk.detail))
            })()));
        }
    }
    let convergent: Vec<Word> = Word::all_up_to(max_weight as usize - 2).filter(|w| !w.is_empty() && in_w_plus_plus(w)).collect();
    for u in &convergent {
        for v in &convergent {
            if u > v || u.len() + v.len() > max_weight as usize {
                continue;
            }
            checks.push(Check::from_result(format!("zeta({u}) zeta({v}) = zeta({u} * {v})"), (|| {
                let zu = zeta_reg(&WordPoly::from(*u), digits + 2)?;
                let zv = zeta_reg(&WordPoly::from(*v), digits + 2)?;
                let prod = zeta_reg(&WordPoly::from(*u).shuffle(&WordPoly::from(*v)), digits)?;
                let c = real_check(String::new(), &(&zu * &zv), &prod);
                Ok((c.passed, c.detail))
            })()));
        }
    }
    checks.push(Check::from_result("zeta(ba) = -zeta(2)", (|| {
        let x = zeta_reg(&"ba".parse()?, digits)?;
        let y = zeta_conv(&Composition::new(vec![2])?, digits)?;
        let c = real_check(String::new(), &x, &-&y);
        Ok((c.passed, c.detail))
    })()));
    SuiteReport { suite: "numeric", unit: "numeric identities", checks }
}

const GROUP_SUITES: [&str; 7] = [
    "box duality <box h, g> = <h, g sigma(g)>",
    "nabla duality <nabla h, g> = <h, g tau(g)>",
    "symmetric square <box h, g> = <h, p^2>",
    "Q-part <nabla h, g> = <h, Q tau(Q)>",
    "sigma^2 = id",
    "tau^3 = inverse",
    "P.K and Q.L round trips",
];

fn group_trial(seed: u64, order: usize, max_len: usize) -> Result<[bool; 7]> {
    let g = random_grouplike(order, seed);
    let sigma = |s: &NcSeries| s.transform(TransformKind::Sigma);
    let tau = |s: &NcSeries| s.transform(TransformKind::Tau);
    let gs = g.mul(&sigma(&g));
    let gt = g.mul(&tau(&g));
    let (p, k) = pk_decompose(&g)?;
    let (q, l) = ql_decompose(&g)?;
    let q0 = q_element(&q)?;
    let p2 = p.mul(&p);
    let q0t = q0.mul(&tau(&q0));
    let mut out = [true; 7];
    for w in Word::all_up_to(max_len) {
        let h = WordPoly::from(w);
        let bh = box_op(&h);
        let nh = nabla(&h);
        out[0] &= pair(&bh, &g)? == pair(&h, &gs)?;
        out[1] &= pair(&nh, &g)? == pair(&h, &gt)?;
        out[2] &= pair(&bh, &g)? == pair(&h, &p2)?;
        out[3] &= pair(&nh, &g)? == pair(&h, &q0t)?;
    }
    out[4] = sigma(&sigma(&g)) == g;
    out[5] = tau(&tau(&tau(&g))) == g.inv()?;
    let q_alg = {
        let t1 = tau(&q);
        &(&tau(&t1) - &t1) + &q
    };
    out[6] = p.mul(&k) == g
        && sigma(&p) == p
        && sigma(&k) == k.inv()?
        && sigma(&gs) == gs
        && q0.mul(&l) == g
        && q_alg.is_zero()
        && tau(&l) == l.inv()?
        && q.constant().is_zero()
        && q.is_primitive()
        && g.log()?.is_primitive();
    Ok(out)
}

/// The seven exact group-model suites over `trials` seeded grouplikes at
/// `order`, pairing against all words of length below `order`.
pub fn group_suite(seed: u64, trials: u64, order: usize) -> SuiteReport {
    let max_len = order.saturating_sub(1).max(1);
    let results: Vec<(u64, Result<[bool; 7]>)> = std::thread::scope(|s| {
        let handles: Vec<_> = (seed..seed + trials)
            .map(|sd| s.spawn(move || (sd, group_trial(sd, order, max_len))))
            .collect();
        handles.into_iter().map(|h| h.join().expect("group trial panicked")).collect()
    });
    let mut failures: [Option<String>; 7] = Default::default();
    for (sd, r) in results {
        match r {
            Ok(flags) => {
                for (i, ok) in flags.iter().enumerate() {
                    if !ok && failures[i].is_none() {
                        failures[i] = Some(format!("fails for seed {sd}"));
                    }
                }
            }
            Err(e) => {
                for f in failures.iter_mut().filter(|f| f.is_none()) {
                    *f = Some(format!("seed {sd}: {e}"));
                }
            }
        }
    }
    let checks = GROUP_SUITES
        .iter()
        .zip(failures)
        .map(|(name, fail)| match fail {
            None => Check::new(*name, true, format!("{trials} grouplikes at order {order}, exact")),
            Some(detail) => Check::new(*name, false, detail),
        })
        .collect();
    SuiteReport { suite: "group", unit: "lemma suites", checks }
}
