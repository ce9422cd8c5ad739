//! Acceptance criteria 1-11. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use polyzeta::cli::verify::group_suite;
use polyzeta::numerics::{const_log2, const_pi, ApproxReal, EvalPoint};
use polyzeta::series::{eps_for_digits, polylog, polylog_helem, relational_sum_cor12, RelationalIndex};
use polyzeta::transforms::{apply_transform, cor12_weight, TransformKind};
use polyzeta::words::{in_w_plus, in_w_plus_plus, Composition, Word, WordPoly};
use polyzeta::zeta::{
    agree, zeta_conv, zeta_conv_eps, zeta_direct_oracle, zeta_pm, zeta_r, zeta_reg, EngineConfig, Method, PmSign,
};
use polyzeta::Result;

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn ten_pow_neg(d: u32) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(10).pow(d))
}

fn comp(parts: &[u32]) -> Composition {
    Composition::new(parts.to_vec()).unwrap()
}

fn within(x: &ApproxReal, y: &ApproxReal, digits: u32) -> bool {
    x.distance_upper(y) <= ten_pow_neg(digits)
}

fn timed(limit: Duration, start: Instant, ok: bool, detail: String) -> (bool, String) {
    let t = start.elapsed();
    (ok && t < limit, format!("{detail}; {:.2?} (limit {:?})", t, limit))
}

fn pi_squared_over_6(digits: u32) -> Result<ApproxReal> {
    let pi = const_pi(digits + 5);
    (&pi * &pi).div_integer(&6.into())
}

fn c1_zeta2_anchor() -> Outcome {
    let start = Instant::now();
    let z = zeta_conv(&comp(&[2]), 30)?;
    let t = start.elapsed();
    let ok = within(&z, &pi_squared_over_6(30)?, 30) && t < Duration::from_secs(1);
    Ok((ok, format!("zeta(2) = {}; {t:.2?} (limit 1s)", z.to_decimal(30)?)))
}

fn c2_euler() -> Outcome {
    let z = zeta_conv(&comp(&[2]), 30)?;
    let l2 = polylog(&RelationalIndex::new(vec![2], vec![true])?, EvalPoint::Half, 32)?.re;
    let lg = const_log2(32);
    let rhs = &l2.mul_integer(&2.into()) + &(&lg * &lg);
    Ok((within(&z, &rhs, 30), format!("|diff| <= {}", polyzeta::numerics::format_bound(&z.distance_upper(&rhs)))))
}

fn c3_method_agreement() -> Outcome {
    let start = Instant::now();
    let methods = [Method::Thm7Half, Method::Thm10, Method::Cor12, Method::Cor21, Method::Lemma20MinusOne];
    let mut ok = true;
    let mut notes = Vec::new();
    for r in 2..=6u32 {
        let mut values = Vec::new();
        for m in methods {
            match zeta_r(r, m, 30) {
                Ok(v) => values.push((m, v.value.re)),
                Err(e) => {
                    ok = false;
                    notes.push(format!("zeta({r}) {m}: {e}"));
                }
            }
        }
        for (i, (mi, vi)) in values.iter().enumerate() {
            for (mj, vj) in &values[i + 1..] {
                if !agree(vi, vj) {
                    ok = false;
                    notes.push(format!("zeta({r}) {mi} vs {mj} disagree"));
                }
            }
        }
    }
    let detail = if notes.is_empty() { "all pairs agree".to_string() } else { notes.join("; ") };
    Ok(timed(Duration::from_secs(30), start, ok, detail))
}

fn c4_zeta5() -> Outcome {
    let cases: [(&[u64], u32); 5] = [
        (&[1, 1, 2, 3, 4], 1),
        (&[1, 2, 2, 3, 4], 2),
        (&[1, 2, 3, 3, 4], 3),
        (&[1, 2, 3, 4, 4], 5),
        (&[1, 2, 3, 4, 5], 5),
    ];
    let mut ok = true;
    for (n, want) in cases {
        ok &= cor12_weight(n)? == want;
    }
    // The four-sum expansion, summed independently as relational polylogs.
    let digits = 25;
    let sums = [
        (vec![2, 1, 1, 1], vec![true, false, false, false], 1),
        (vec![1, 2, 1, 1], vec![true, true, false, false], 2),
        (vec![1, 1, 2, 1], vec![true, true, true, false], 3),
        (vec![1, 1, 1, 1, 1], vec![true, true, true, true, false], 5),
    ];
    let mut expansion = ApproxReal::zero(0);
    for (e, s, c) in sums {
        let v = polylog(&RelationalIndex::new(e, s)?, EvalPoint::Half, digits + 3)?.re;
        expansion = &expansion + &v.mul_integer(&BigInt::from(c));
    }
    let z = zeta_conv(&comp(&[5]), digits)?;
    let r = relational_sum_cor12(5, digits)?;
    ok &= within(&z, &r, digits) && within(&z, &expansion, digits);
    Ok((ok, format!("weights {{1,2,3,5}} match; cor12 sum = {}", r.to_decimal(digits)?)))
}

fn c5_shuffle() -> Outcome {
    let words: Vec<Word> = Word::all_up_to(4).filter(|w| !w.is_empty() && in_w_plus_plus(w)).collect();
    let mut count = 0;
    for u in &words {
        for v in &words {
            if u.len() + v.len() > 6 {
                continue;
            }
            let (pu, pv) = (WordPoly::from(*u), WordPoly::from(*v));
            let lhs = &zeta_reg(&pu, 22)? * &zeta_reg(&pv, 22)?;
            let rhs = zeta_reg(&pu.shuffle(&pv), 20)?;
            if !agree(&lhs, &rhs) {
                return Ok((false, format!("zeta({u}) zeta({v}) != zeta({u} * {v})")));
            }
            count += 1;
        }
    }
    Ok((true, format!("{count} pairs")))
}

fn c6_oracle() -> Outcome {
    let mut count = 0;
    let mut worst = BigRational::zero();
    for r in 2..=4 {
        for c in Composition::all_of_weight(r).into_iter().filter(|c| c.is_convergent()) {
            let x = zeta_conv(&c, 20)?;
            let y = zeta_direct_oracle(&c, 100_000)?;
            if !agree(&x, &y) {
                return Ok((false, format!("zeta{c} outside the oracle bound")));
            }
            worst = worst.max(y.radius());
            count += 1;
        }
    }
    let z13 = zeta_conv(&comp(&[1, 3]), 20)?;
    let pi = const_pi(25);
    let pi4 = (&(&pi * &pi) * &(&pi * &pi)).div_integer(&360.into())?;
    let ok = within(&z13, &pi4, 20) && z13.to_decimal(10)? == "0.2705808084";
    Ok((ok, format!("{count} compositions, oracle radius <= {}", polyzeta::numerics::format_bound(&worst))))
}

fn c7_regularization() -> Outcome {
    let z2 = zeta_conv(&comp(&[2]), 20)?;
    let zba = zeta_reg(&"ba".parse()?, 20)?;
    let mut ok = within(&zba, &-&z2, 20);
    let pi = const_pi(22);
    for (sign, s) in [(PmSign::Plus, 1), (PmSign::Minus, -1)] {
        let v = zeta_pm(&"a".parse()?, 20, sign)?;
        ok &= v.re.is_exact() && v.re.mid().is_zero();
        ok &= agree(&v.im, &pi.mul_integer(&s.into()));
        let sq = &v * &v;
        ok &= agree(&sq.re, &z2.mul_integer(&(-6).into())) && agree(&sq.im, &ApproxReal::zero(sq.im.scale()));
    }
    Ok((ok, "zeta(ba) = -zeta(2); zeta±(a) = ±i pi; square = -6 zeta(2)".into()))
}

fn sigma_prime_sweep(digits: u32) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for w in Word::all_up_to(4).filter(|w| !w.is_empty() && in_w_plus(w)) {
        let h = WordPoly::from(w);
        let lhs = polylog_helem(&h, EvalPoint::MinusOne, digits);
        let rhs = polylog_helem(&apply_transform(TransformKind::SigmaPrime, &h), EvalPoint::Half, digits);
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if within(&l.re, &r.re, digits) && within(&l.im, &r.im, digits) => count += 1,
            (Ok(_), Ok(_)) => failures.push(format!("{w}: values differ")),
            (Err(e), _) | (_, Err(e)) => failures.push(format!("{w}: {e}")),
        }
    }
    let detail = if failures.is_empty() {
        format!("{count} words")
    } else {
        format!("{count} words agree; {} fail: {}", failures.len(), failures.join("; "))
    };
    Ok((failures.is_empty(), detail))
}

fn c8_sigma_prime() -> Outcome {
    sigma_prime_sweep(25)
}

fn c9_rho_path() -> Outcome {
    // Closed form: L_{aa}(ρ) = L_a(ρ)^2/2 with L_a(ρ) = iπ/3 exactly.
    let l11 = polylog_helem(&"aa".parse()?, EvalPoint::Rho, 30)?;
    let closed = l11.scale_by_rational(&BigRational::from_integer((-3).into()));
    let pi6 = pi_squared_over_6(30)?;
    let mut ok = agree(&closed.re, &pi6) && agree(&closed.im, &ApproxReal::zero(closed.im.scale()));
    let start = Instant::now();
    let mut notes = Vec::new();
    for r in [2u32, 3] {
        for m in [Method::Thm7Rho, Method::Thm7RhoBar] {
            let reference = zeta_conv(&comp(&[r]), 10)?;
            let (pass, note) = match polyzeta::zeta::compute(
                &polyzeta::zeta::ZetaRequest {
                    input: polyzeta::zeta::ZetaInput::Composition(comp(&[r])),
                    method: m,
                    digits: 5,
                },
                &EngineConfig::default(),
            ) {
                Ok(v) => (
                    agree(&v.value.re, &reference) && within(&v.value.re, &reference, 5),
                    format!("zeta({r}) {m} = {} ({} terms)", v.value.re.to_decimal(5)?, v.terms_used),
                ),
                Err(e) => (false, format!("zeta({r}) {m}: {e}")),
            };
            ok &= pass;
            notes.push(note);
        }
    }
    Ok(timed(Duration::from_secs(300), start, ok, notes.join("; ")))
}

fn c10_group() -> Outcome {
    let start = Instant::now();
    let report = group_suite(1, 20, 6);
    Ok(timed(Duration::from_secs(10), start, report.all_passed(), report.summary()))
}

fn c11_scaling() -> Outcome {
    let cfg = EngineConfig::default();
    let c = comp(&[3]);
    let digits = [10u32, 20, 30, 40, 50];
    let mut points = Vec::new();
    let mut t50 = Duration::ZERO;
    for d in digits {
        let start = Instant::now();
        let v = zeta_conv_eps(&c, &eps_for_digits(d), &cfg)?;
        if d == 50 {
            t50 = start.elapsed();
        }
        points.push((d as f64, v.terms_used as f64));
    }
    let n = points.len() as f64;
    let (sx, sy): (f64, f64) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let slope = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / points.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    let ok = slope <= 3.5 && t50 < Duration::from_secs(5);
    let ns: Vec<String> = points.iter().map(|(_, y)| format!("{y}")).collect();
    Ok((ok, format!("N = [{}] for digits {digits:?}; slope {slope:.3} terms/digit; 50 digits in {t50:.2?}", ns.join(", "))))
}

fn supplementary_sigma_prime_low_precision() -> Outcome {
    sigma_prime_sweep(3)
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("zeta(2) anchor against pi^2/6", c1_zeta2_anchor),
        ("zeta(2) = 2 L_2(1/2) + log^2 2", c2_euler),
        ("depth-one method cross-agreement, r = 2..6, 30 digits", c3_method_agreement),
        ("zeta(5) weighted-cone expansion", c4_zeta5),
        ("shuffle relation, |u|+|v| <= 6, 20 digits", c5_shuffle),
        ("agreement with direct summation, weight <= 4", c6_oracle),
        ("regularized values", c7_regularization),
        ("values at -1 against sigma' at 1/2, 25 digits", c8_sigma_prime),
        ("rho path for zeta(2), zeta(3)", c9_rho_path),
        ("group model identities, order 6, 20 grouplikes", c10_group),
        ("linear growth of truncation in digits", c11_scaling),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        println!("{} {:>2}: {name} -- {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
        if !ok {
            failed.push(i + 1);
        }
    }
    let (ok, detail) = supplementary_sigma_prime_low_precision().unwrap_or_else(|e| (false, format!("error: {e}")));
    println!("{} {:>2}: values at -1 against sigma' at 1/2, 3 digits (supplementary) -- {detail}", if ok { "PASS" } else { "FAIL" }, "8s");
    if !ok {
        failed.push(0);
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
