//! Acceptance suite: ten criteria checked at exact equality.
//!
//! Runs without the libtest harness so that each criterion prints exactly
//! one `pass`/`FAIL` line; the process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use fresco_core::chgvar::{push_presentation, rank1_adapt, theta_push, ThetaOperators};
use fresco_core::classify3::{case4p_delta, gamma3, normal_form_rank3, pi_ij, CaseTag, ParamName};
use fresco_core::fresco::{
    bernstein_polynomial, default_order, delta, dual_twisted, find_generator, fundamental_invariants, is_isomorphic,
    jh_factorize, jh_factorize_with, realize, semisimple_part, sharp_filtration_index, ss_depth,
};
use fresco_core::linalg::{q_nullspace, q_rank, svec_coeff, QMat, SVec};
use fresco_core::series::{int, rat};
use fresco_core::{AbModule, ChangeOfVariable, FrescoPresentation, Scalar, TruncSeries};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn poly(rng: &mut ChaCha8Rng, deg: usize, order: usize) -> TruncSeries {
    let mut c = vec![int(1)];
    for _ in 0..deg {
        c.push(int(rng.gen_range(-3..=3)));
    }
    TruncSeries::from_slice(&c, order)
}

/// Random presentation with `S_j = 1 + O(b)` of degree `deg`; `S_k = 1` unless `last`.
fn random_pres(rng: &mut ChaCha8Rng, lambdas: Vec<Scalar>, deg: usize, last: bool) -> FrescoPresentation {
    let k = lambdas.len();
    let n = default_order(&lambdas);
    let s = (0..k)
        .map(|j| if j + 1 < k || last { poly(rng, deg, n) } else { TruncSeries::one(n) })
        .collect();
    FrescoPresentation::new(lambdas, s, n).expect("valid presentation")
}

fn chain(l1: Scalar, ps: &[i64]) -> Vec<Scalar> {
    let mut out = vec![l1];
    for p in ps {
        let next = out.last().unwrap() + int(p - 1);
        out.push(next);
    }
    out
}

/// The rank-3 pool shared by criteria 1 and 2.
fn gamma_pool() -> Vec<FrescoPresentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..20)
        .map(|_| {
            let p1 = rng.gen_range(2..=4);
            let p2 = rng.gen_range(2..=4);
            let l1 = if rng.gen_bool(0.5) { rat(7, 2) } else { rat(10, 3) };
            random_pres(&mut rng, chain(l1, &[p1, p2]), 2, false)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let mut checks = 0;
    for p in gamma_pool() {
        let g = gamma3(&p).map_err(|e| e.to_string())?;
        let (p1, p2) = (p.p(1), p.p(2));
        let weight = (&p1 - int(1)) * (&p2 - int(1)) * (&p1 + &p2 - int(1));
        for tau in [rat(1, 2), int(-1), int(3)] {
            let pushed = push_presentation(&p, &ChangeOfVariable::quadratic(tau.clone())).map_err(|e| e.to_string())?;
            let diff = gamma3(&pushed).map_err(|e| e.to_string())? - &g;
            ensure(diff == -(&weight * &tau), || {
                format!("p = ({p1}, {p2}), τ = {tau}: difference {diff}, expected {}", -(&weight * &tau))
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} (presentation, τ) pairs"))
}

fn criterion_2() -> Outcome {
    let cv = ChangeOfVariable::from_terms(&[(1, int(1)), (3, int(1))]).unwrap();
    let mut checks = 0;
    for p in gamma_pool() {
        let pushed = push_presentation(&p, &cv).map_err(|e| e.to_string())?;
        ensure(gamma3(&pushed) == gamma3(&p), || "γ changed under a + a^3".into())?;
        ensure(pushed.s(1).coeff(1) == p.s(1).coeff(1), || {
            format!("T1'(0) = {} but S1'(0) = {}", pushed.s(1).coeff(1), p.s(1).coeff(1))
        })?;
        checks += 1;
    }
    Ok(format!("{checks} presentations"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 8;
    for _ in 0..10 {
        let t2 = rat(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        let t3 = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        let mu = rat(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let cv = ChangeOfVariable::from_terms(&[(1, int(1)), (2, t2.clone()), (3, t3)]).unwrap();
        let s = rank1_adapt(&mu, &cv, n).map_err(|e| e.to_string())?;
        let first = &t2 * &mu * (&mu - int(1));
        ensure(s.coeff(1) == &first, || format!("S'(0) = {} for θ2 = {t2}, μ = {mu}", s.coeff(1)))?;
        // Direct check in E_μ with the operators α = θ(a), β = b·θ'(a).
        let e = AbModule::new(vec![vec![TruncSeries::monomial(1, mu.clone(), n)]]).unwrap();
        let ops = ThetaOperators::new(&e, &cv);
        let mut acc: SVec = vec![TruncSeries::zero(n)];
        let mut power: SVec = vec![TruncSeries::one(n)];
        for m in 0..=n {
            acc = acc.iter().zip(&power).map(|(x, y)| x + &y.scale(s.coeff(m))).collect();
            power = ops.beta(&power);
        }
        let lhs = ops.alpha(&acc);
        let rhs = ops.beta(&acc);
        ensure((&lhs[0] - &rhs[0].scale(&mu)).is_zero(), || {
            format!("(α − μβ)·S_μ(β)·e ≠ 0 for θ2 = {t2}, μ = {mu}")
        })?;
    }
    Ok("10 (θ, μ) pairs".into())
}

fn random_cv(rng: &mut ChaCha8Rng) -> ChangeOfVariable {
    let chis = [int(1), int(2), int(-1), rat(1, 2), int(3)];
    let chi = chis.choose(rng).unwrap().clone();
    ChangeOfVariable::from_terms(&[
        (1, chi),
        (2, int(rng.gen_range(-2..=2))),
        (3, int(rng.gen_range(-2..=2))),
    ])
    .unwrap()
}

fn random_lambdas(rng: &mut ChaCha8Rng, k: usize) -> Vec<Scalar> {
    let classes = [rat(1, 2), rat(1, 3), rat(2, 3)];
    if k >= 2 && rng.gen_bool(0.3) {
        // two classes, the smaller representative first
        let split = rng.gen_range(1..k);
        let mut out = chain(rat(1, 3) + int(rng.gen_range(0..=2)), &vec![2; split - 1]);
        let tail = chain(rat(1, 2) + int(rng.gen_range(0..=2)), &vec![2; k - split - 1]);
        out.extend(tail);
        return out;
    }
    let l1 = classes.choose(rng).unwrap() + int(rng.gen_range(0..=3));
    let ps: Vec<i64> = (1..k).map(|_| rng.gen_range(0..=3)).collect();
    chain(l1, &ps)
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut non_unimodular = 0;
    for i in 0..20 {
        let k = 1 + i % 4;
        let lambdas = random_lambdas(&mut rng, k);
        let p = random_pres(&mut rng, lambdas, 2, true);
        let n = p.order() + k * k + 2;
        let fr = realize(&p.padded(n));
        let before = bernstein_polynomial(&fr, false).map_err(|e| e.to_string())?;
        if k == 1 {
            ensure(before.render("z") == format!("z + {}", fresco_core::series::fmt_scalar(p.lambda(1))), || {
                format!("rank 1 Bernstein polynomial {before}")
            })?;
        }
        for _ in 0..5 {
            let cv = random_cv(&mut rng);
            if !cv.is_unimodular() {
                non_unimodular += 1;
            }
            let after = bernstein_polynomial(&theta_push(&fr, &cv).map_err(|e| e.to_string())?, false)
                .map_err(|e| e.to_string())?;
            ensure(after == before, || format!("θ = {cv}: {before} became {after}"))?;
        }
    }
    Ok(format!("100 pushes, {non_unimodular} non-unimodular"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pushed_checks = 0;
    let mut structure_checks = 0;
    for i in 0..50 {
        let k = 1 + i % 4;
        let lambdas = random_lambdas(&mut rng, k);
        let p = random_pres(&mut rng, lambdas, 3, true);
        let n = p.order();
        let fr = realize(&p.padded(n + k * k + 2));
        let back = jh_factorize(&fr).map_err(|e| e.to_string())?;
        ensure(back.order() >= n && back.truncate(n) == p, || format!("round trip failed on\n{p}"))?;
        if i % 5 == 0 {
            let cv = random_cv(&mut rng);
            let pushed = theta_push(&fr, &cv).map_err(|e| e.to_string())?;
            let inv = fundamental_invariants(&pushed).map_err(|e| e.to_string())?;
            ensure(inv == p.lambdas(), || format!("invariants changed under θ = {cv}"))?;
            // δ and d are only defined for [λ]-primitive frescos
            let primitive = p.lambdas().iter().all(|l| (l - p.lambda(1)).is_integer());
            if primitive {
                let a = (delta(&fr), ss_depth(&fr));
                let b = (delta(&pushed), ss_depth(&pushed));
                ensure(a == b, || format!("(δ, d) {a:?} became {b:?} under θ = {cv}"))?;
                structure_checks += 1;
            }
            pushed_checks += 1;
        }
    }
    ensure(structure_checks > 0, || "no primitive sample for (δ, d)".into())?;
    Ok(format!("50 round trips, {pushed_checks} pushed, {structure_checks} (δ, d) comparisons"))
}

/// `dim Ker(a − μb)` on `E/b^M E`, keeping only the part seen modulo `b^{M−2k}`.
fn brute_force_kernel_dim(p: &FrescoPresentation, mu: &Scalar, m: usize) -> usize {
    let k = p.rank();
    let top = m - 1;
    let fr = realize(&p.padded(top));
    let dim = k * m;
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(dim);
    for e in 0..m {
        for i in 0..k {
            let mut v: SVec = vec![TruncSeries::zero(top); k];
            v[i] = TruncSeries::monomial(e, Scalar::one(), top);
            let w = fr.module.apply_a_minus(mu, &v);
            cols.push((0..m).flat_map(|d| svec_coeff(&w, d)).collect());
        }
    }
    let mat: QMat = (0..dim).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let keep = k * (m - 2 * k);
    let projected: QMat = q_nullspace(&mat, dim).into_iter().map(|v| v[..keep].to_vec()).collect();
    if projected.is_empty() {
        0
    } else {
        q_rank(&projected)
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checks = 0;
    for i in 0..12 {
        let k = 2 + i % 2;
        let l1 = [rat(1, 2), rat(1, 3), rat(5, 4)].choose(&mut rng).unwrap() + int(rng.gen_range(1..=3));
        let ps: Vec<i64> = (1..k).map(|_| rng.gen_range(0..=3)).collect();
        let p = random_pres(&mut rng, chain(l1, &ps), 2, false);
        let fr = realize(&p.padded(p.order() + k * k + 2));
        let ss = semisimple_part(&fr).map_err(|e| e.to_string())?;
        let mu = p.lambda(k) + int(k as i64 - 1);
        let m = default_order(p.lambdas());
        let brute = brute_force_kernel_dim(&p, &mu, m);
        ensure(ss.rank() == brute, || {
            format!("semisimple rank {} but brute-force kernel {brute} on\n{p}", ss.rank())
        })?;
        checks += 1;
    }
    let theme = FrescoPresentation::new(
        vec![rat(5, 2), rat(7, 2)],
        vec![TruncSeries::from_ints(&[1, 0, 1], 12), TruncSeries::one(12)],
        12,
    )
    .unwrap();
    let fr = realize(&theme.padded(18));
    ensure(delta(&fr) == Ok(1), || format!("theme: δ = {:?}", delta(&fr)))?;
    let ss = FrescoPresentation::standard(vec![rat(5, 2), rat(7, 2)], 12).unwrap();
    let fr = realize(&ss.padded(18));
    ensure(delta(&fr) == Ok(2), || format!("α = 0: δ = {:?}", delta(&fr)))?;
    Ok(format!("{checks} brute-force comparisons, theme and α = 0 examples"))
}

fn curated() -> Vec<(CaseTag, FrescoPresentation)> {
    let mk = |l1: Scalar, ps: &[i64], s1: &[i64], s2: &[i64]| {
        let l = chain(l1, ps);
        let n = default_order(&l);
        FrescoPresentation::new(
            l,
            vec![TruncSeries::from_ints(s1, n), TruncSeries::from_ints(s2, n), TruncSeries::one(n)],
            n,
        )
        .unwrap()
    };
    let case1 = {
        let l = vec![rat(1, 3), rat(1, 2), rat(5, 2)];
        let n = default_order(&l);
        FrescoPresentation::new(
            l,
            vec![
                TruncSeries::from_ints(&[1, 2, 1, 1], n),
                TruncSeries::from_ints(&[1, 1, 3], n),
                TruncSeries::one(n),
            ],
            n,
        )
        .unwrap()
    };
    vec![
        (CaseTag::C1, case1),
        (CaseTag::C2, mk(rat(7, 2), &[3, 2], &[1, 2, 0, 3], &[1, 0, 4])),
        (CaseTag::C3, mk(rat(7, 2), &[3, 2], &[1, 2, 0, 0, 0, 6], &[1, 0, 4])),
        (CaseTag::C4, mk(rat(1, 3), &[3, 1], &[1, 2, 0, 5], &[1, 7])),
        (CaseTag::C4p, mk(rat(1, 3), &[3, 1], &[1, 2, 0, 5, 1], &[1])),
        (CaseTag::C5, mk(rat(10, 3), &[2, 0], &[1, 1, 3, 0, 0, 1], &[1, 1])),
        (CaseTag::C6, mk(rat(1, 2), &[1, 3], &[1, 2], &[1, 0, 0, 5])),
        (CaseTag::C6p, mk(rat(1, 2), &[1, 3], &[1, 0, 0, 0, 4], &[1, 0, 0, 5])),
        (CaseTag::C6pp, mk(rat(1, 2), &[1, 1], &[1, 2], &[1, 3])),
        (CaseTag::C6ppp, mk(rat(1, 2), &[1, 1], &[1, 2, 5], &[1, 2])),
        (CaseTag::C7, mk(rat(3, 2), &[1, 0], &[1, 3, 1], &[1])),
        (CaseTag::C8, mk(rat(7, 2), &[0, 3], &[1, 2, 0, 5], &[1, 0, 0, 4])),
        (CaseTag::C8p, mk(rat(7, 2), &[0, 1], &[1, 2], &[1, 3])),
        (CaseTag::C8pp, mk(rat(7, 2), &[0, 0], &[1, 2, 0, 1], &[1, 0, 1])),
    ]
}

fn criterion_7() -> Outcome {
    let list = curated();
    for (tag, p) in &list {
        let nf = normal_form_rank3(p).map_err(|e| format!("case {tag}: {e}"))?;
        ensure(nf.case_tag == *tag, || format!("expected {tag}, got {}", nf.case_tag))?;
        let iso = is_isomorphic(p, &nf.presentation).map_err(|e| e.to_string())?;
        ensure(iso.is_isomorphic(), || format!("case {tag}: normal form not confirmed ({iso:?})"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut relations = 0;
    while relations < 5 {
        let p1 = rng.gen_range(2..=4);
        let l1 = [rat(1, 3), rat(1, 2), rat(3, 4)].choose(&mut rng).unwrap() + int(rng.gen_range(0..=2));
        let l = chain(l1, &[p1, 1]);
        let n = default_order(&l);
        let mut s1 = poly(&mut rng, p1 as usize + 1, n);
        s1.set(p1 as usize, int(rng.gen_range(1..=4)));
        let p = FrescoPresentation::new(l, vec![s1, TruncSeries::one(n), TruncSeries::one(n)], n).unwrap();
        let nf = normal_form_rank3(&p).map_err(|e| e.to_string())?;
        let alpha = nf.param(ParamName::Alpha).cloned().unwrap_or_else(Scalar::zero);
        if nf.case_tag != CaseTag::C4p || alpha.is_zero() {
            continue;
        }
        let gamma = nf.param(ParamName::Gamma).cloned().unwrap();
        let d = case4p_delta(&p).map_err(|e| e.to_string())?;
        ensure(&alpha * &gamma == int(p1 - 1) * &d, || {
            format!("αγ = {} but (p1−1)δ = {}", &alpha * &gamma, int(p1 - 1) * &d)
        })?;
        relations += 1;
    }
    Ok(format!("{} cases confirmed, 5 relations", list.len()))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let k = 3;
    let n = 14;
    let p = random_pres(&mut rng, chain(rat(5, 2), &[2, 1]), 3, false).padded(n);
    let m = realize(&p).module;
    for _ in 0..100 {
        let v: SVec = (0..k)
            .map(|_| {
                let shift = rng.gen_range(0..=3);
                let mut c = vec![int(0); shift];
                c.extend((0..4).map(|_| int(rng.gen_range(-3..=3))));
                TruncSeries::from_slice(&c, n)
            })
            .collect();
        let Some(nu) = sharp_filtration_index(&v) else { continue };
        let av = m.apply_a(&v);
        let bv: SVec = m.apply_b(&v).iter().map(|x| x.truncate(n)).collect();
        let mut akv = v.clone();
        for _ in 0..k {
            akv = m.apply_a(&akv);
        }
        for (what, w, gain) in [("a", &av, 1), ("b", &bv, k), ("a^k", &akv, 2 * k - 1)] {
            if let Some(x) = sharp_filtration_index(w) {
                ensure(x >= nu + gain, || format!("index({what}·v) = {x} < {nu} + {gain}"))?;
            }
        }
    }
    Ok("100 vectors".into())
}

fn criterion_9() -> Outcome {
    let n = 10;
    for (l, d) in [(rat(3, 2), int(5)), (rat(1, 3), rat(7, 2)), (int(2), int(-1))] {
        let e = realize(&FrescoPresentation::standard(vec![l.clone()], n).unwrap());
        let dual = find_generator(&dual_twisted(&e.module, &d)).map_err(|e| e.to_string())?;
        let got = jh_factorize(&dual).map_err(|e| e.to_string())?;
        let want = FrescoPresentation::standard(vec![&d - &l], got.order()).unwrap();
        let iso = is_isomorphic(&got, &want).map_err(|e| e.to_string())?;
        ensure(iso.is_isomorphic(), || format!("dual of E_{l} at δ = {d}: {iso:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let lambdas = random_lambdas(&mut rng, 2);
        let p = random_pres(&mut rng, lambdas, 3, false);
        let d = p.lambda(2) + int(3);
        let k = 2;
        let fr = realize(&p.padded(p.order() + 2 * (k * k + 2)));
        let twice = dual_twisted(&dual_twisted(&fr.module, &d), &d);
        let back = find_generator(&twice).map_err(|e| e.to_string())?;
        let q = jh_factorize_with(&back, p.lambdas()).map_err(|e| e.to_string())?;
        let iso = is_isomorphic(&p, &q.truncate(p.order())).map_err(|e| e.to_string())?;
        ensure(iso.is_isomorphic(), || format!("double dual not isomorphic: {iso:?}\n{p}"))?;
    }
    Ok("3 rank-1 duals, 10 double duals".into())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut exponents = std::collections::BTreeSet::new();
    let mut samples = 0;
    while samples < 10 {
        let ps: Vec<i64> = (0..3).map(|_| rng.gen_range(2..=3)).collect();
        let l1 = [rat(1, 2), rat(1, 3)].choose(&mut rng).unwrap() + int(1);
        let p = random_pres(&mut rng, chain(l1, &ps), 1, false);
        let before = pi_ij(&p, 1, 2).map_err(|e| e.to_string())?;
        if before.is_zero() {
            continue;
        }
        for tau in [int(1), int(-2)] {
            let pushed = push_presentation(&p, &ChangeOfVariable::quadratic(tau.clone())).map_err(|e| e.to_string())?;
            let after = pi_ij(&pushed, 1, 2).map_err(|e| e.to_string())?;
            ensure(after == before, || format!("τ = {tau}: π changed from {before} to {after}"))?;
        }
        for xi in [int(2), int(3)] {
            let pushed = push_presentation(&p, &ChangeOfVariable::scaling(xi.clone())).map_err(|e| e.to_string())?;
            let ratio = pi_ij(&pushed, 1, 2).map_err(|e| e.to_string())? / &before;
            let w = fresco_core::chgvar::weight_exponent(&xi, &ratio)
                .ok_or_else(|| format!("ratio {ratio} is not a power of {xi}"))?;
            exponents.insert(w);
        }
        samples += 1;
    }
    ensure(exponents.len() == 1, || format!("exponents differ: {exponents:?}"))?;
    Ok(format!("10 presentations, exponent {}", exponents.iter().next().unwrap()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("gamma transformation law", criterion_1),
        ("higher-order stability", criterion_2),
        ("rank-one adaptation", criterion_3),
        ("Bernstein invariance", criterion_4),
        ("JH round trip and covariance", criterion_5),
        ("semi-simple part against brute force", criterion_6),
        ("rank-3 classification", criterion_7),
        ("sharp filtration", criterion_8),
        ("duality", criterion_9),
        ("pi quasi-invariance", criterion_10),
    ];
    let results: Vec<(Outcome, f64)> = criteria
        .iter()
        .map(|(_, f)| {
            let t = Instant::now();
            let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
            (r, t.elapsed().as_secs_f64())
        })
        .collect();
    let mut failed = 0;
    for (i, ((name, _), (r, secs))) in criteria.iter().zip(&results).enumerate() {
        match r {
            Ok(detail) => println!("criterion {:>2} pass  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
