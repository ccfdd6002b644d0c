//! Change of variable `θ_*` on modules, the rank-one adaptation and the
//! quasi-invariance probe.

use num_traits::{One, Zero};

use crate::ahat::ChangeOfVariable;
use crate::classify3::{alpha2, gamma3, pi_ij};
use crate::error::{FrescoError, Result};
use crate::fresco::{jh_factorize_with, realize, AbModule, Fresco, FrescoPresentation};
use crate::linalg::{q_inverse, q_mat_vec, smat_from_columns, svec_coeff, svec_truncate, svec_unit, QMat, SVec};
use crate::series::{dot, fmt_scalar, int, Scalar, TruncSeries};

/// `p(a + c·b)·v` for a polynomial given by its coefficients, by Horner's rule.
fn apply_poly_shifted(module: &AbModule, coeffs: &[Scalar], c: &Scalar, v: &[TruncSeries]) -> SVec {
    let mut w: SVec = v.iter().map(|x| x.scale(coeffs.last().expect("nonempty"))).collect();
    for t in coeffs.iter().rev().skip(1) {
        w = module.apply_a_affine(&w, c, Some((t, v)));
    }
    w
}

fn apply_poly(module: &AbModule, coeffs: &[Scalar], v: &[TruncSeries]) -> SVec {
    apply_poly_shifted(module, coeffs, &Scalar::zero(), v)
}

/// Operators `α = θ(a)` and `β = b·θ'(a)` on a module.
pub struct ThetaOperators<'a> {
    module: &'a AbModule,
    theta: Vec<Scalar>,
    theta_prime: Vec<Scalar>,
}

impl<'a> ThetaOperators<'a> {
    pub fn new(module: &'a AbModule, cv: &ChangeOfVariable) -> Self {
        let d = cv.degree();
        let theta: Vec<Scalar> = (0..=d).map(|m| cv.coeff(m)).collect();
        let theta_prime: Vec<Scalar> = (1..=d).map(|m| cv.coeff(m) * int(m as i64)).collect();
        ThetaOperators {
            module,
            theta,
            theta_prime,
        }
    }

    pub fn alpha(&self, v: &[TruncSeries]) -> SVec {
        apply_poly(self.module, &self.theta, v)
    }

    /// `β·v`, kept at the order of `v`.
    pub fn beta(&self, v: &[TruncSeries]) -> SVec {
        let n = crate::linalg::svec_order(v);
        let w = apply_poly(self.module, &self.theta_prime, v);
        w.iter().map(|x| x.shift_up(1).truncate(n)).collect()
    }
}

/// `θ_*(E)` written on the same basis over `ℚ[[β]]`, with the generator carried along.
///
/// A vector is re-expanded as `Σ c_i(β)·e_i` by peeling: `β^n·e_i` has
/// leading term `b^n·θ'(A(0))^n·e_i`, so each power of `b` is matched in turn.
/// No precision is lost.
pub fn theta_push(fr: &Fresco, cv: &ChangeOfVariable) -> Result<Fresco> {
    let k = fr.rank();
    let n = fr.order();
    let module = fr.module.truncate(n);
    let ops = ThetaOperators::new(&module, cv);
    // powers[m][i] = b^{−m}·β^m·e_i at order n − m, using a·b^m = b^m·(a + m·b):
    // β^{m+1}·e_i = b^{m+1}·θ'(a + m·b)·powers[m][i].
    let mut powers: Vec<Vec<SVec>> = vec![(0..k).map(|i| svec_unit(k, i, n)).collect()];
    for m in 1..=n {
        let shift = int(m as i64 - 1);
        let next = powers[m - 1]
            .iter()
            .map(|v| {
                let w = svec_truncate(v, n - m);
                apply_poly_shifted(&module, &ops.theta_prime, &shift, &w)
            })
            .collect();
        powers.push(next);
    }
    let mut lead_inv: Vec<QMat> = Vec::with_capacity(n + 1);
    for pm in &powers {
        let cols: Vec<Vec<Scalar>> = pm.iter().map(|v| svec_coeff(v, 0)).collect();
        let mat: QMat = (0..k).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        lead_inv.push(q_inverse(&mat).ok_or_else(|| {
            FrescoError::UnsupportedShape("θ'(a) is not invertible modulo b on this module".into())
        })?);
    }
    // Coefficient `m` of what is left is only needed at step `m`.
    let peel = |v: &[TruncSeries]| -> SVec {
        let v = svec_truncate(v, n);
        let mut coords = vec![vec![Scalar::zero(); n + 1]; k];
        for m in 0..=n {
            let rest: Vec<Scalar> = (0..k)
                .map(|r| {
                    let used = dot((0..m).flat_map(|mm| (0..k).map(move |i| (mm, i))).map(|(mm, i)| {
                        (&coords[i][mm], powers[mm][i][r].coeff(m - mm))
                    }));
                    v[r].coeff(m) - used
                })
                .collect();
            for (i, ci) in q_mat_vec(&lead_inv[m], &rest).into_iter().enumerate() {
                coords[i][m] = ci;
            }
        }
        coords.into_iter().map(TruncSeries::from_coeffs).collect()
    };
    let cols: Vec<SVec> = (0..k).map(|j| peel(&ops.alpha(&svec_unit(k, j, n)))).collect();
    Ok(Fresco {
        module: AbModule::new(smat_from_columns(&cols))?,
        generator: peel(&fr.generator),
    })
}

/// Module-only form of [`theta_push`].
pub fn theta_push_module(module: &AbModule, cv: &ChangeOfVariable) -> Result<AbModule> {
    let fr = Fresco {
        module: module.clone(),
        generator: svec_unit(module.rank(), 0, module.order()),
    };
    Ok(theta_push(&fr, cv)?.module)
}

/// `T` with `α·e_μ = μ·β·T(β)·e_μ` in `E_μ`.
pub fn rank1_t(mu: &Scalar, cv: &ChangeOfVariable, order: usize) -> Result<TruncSeries> {
    let e = AbModule::new(vec![vec![TruncSeries::monomial(1, mu.clone(), order + 1)]])?;
    let pushed = theta_push_module(&e, cv)?;
    if mu.is_zero() {
        return Ok(TruncSeries::one(order));
    }
    Ok(pushed.a_matrix()[0][0].shift_down(1)?.scale(&mu.recip()).truncate(order))
}

/// `S_μ` with `S_μ(0) = 1` and `(α − μβ)·S_μ(β)·e_μ = 0`, from
/// `(n+1)·s_{n+1} = −μ·Σ_{j=1}^{n+1} s_{n+1−j}·t_j`.
pub fn rank1_adapt(mu: &Scalar, cv: &ChangeOfVariable, order: usize) -> Result<TruncSeries> {
    let t = rank1_t(mu, cv, order)?;
    let mut s = vec![Scalar::one()];
    for n in 0..order {
        let acc = (1..=n + 1).fold(Scalar::zero(), |acc, j| acc + &s[n + 1 - j] * t.coeff(j));
        s.push(-mu * acc / int(n as i64 + 1));
    }
    Ok(TruncSeries::from_coeffs(s))
}

/// `(λ+q)(λ+q+1)⋯(λ+q+p−1)`, the scalar with `a^p·b^q·e_λ = c·b^{p+q}·e_λ`.
pub fn a_pow_b_pow_on_e_lambda(lambda: &Scalar, p: usize, q: usize) -> Scalar {
    crate::ahat::rising(&(lambda + int(q as i64)), p)
}

/// `θ_*` at the level of presentations: realize, push, factorize.
///
/// The module is realized with `k² + 2` extra orders so that the result is
/// certified at the order of `pres`.
pub fn push_presentation(pres: &FrescoPresentation, cv: &ChangeOfVariable) -> Result<FrescoPresentation> {
    let k = pres.rank();
    let n = pres.order();
    let fr = realize(&pres.padded(n + k * k + 2));
    let pushed = theta_push(&fr, cv)?;
    let out = jh_factorize_with(&pushed, pres.lambdas())?;
    if out.order() < n {
        return Err(FrescoError::OrderTooSmall {
            needed: n,
            have: out.order(),
            what: "pushed presentation".into(),
        });
    }
    Ok(out.truncate(n))
}

/// Parameter functions understood by the probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Gamma,
    Alpha2,
    Pi(usize, usize),
}

impl Param {
    pub fn eval(&self, pres: &FrescoPresentation) -> Result<Scalar> {
        match self {
            Param::Gamma => gamma3(pres),
            Param::Alpha2 => alpha2(pres),
            Param::Pi(i, j) => pi_ij(pres, *i, *j),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Param::Gamma => "gamma".into(),
            Param::Alpha2 => "alpha2".into(),
            Param::Pi(i, j) => format!("pi_{i},{j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub before: Scalar,
    pub after: Scalar,
    pub difference: Scalar,
    /// `after / before` when `before ≠ 0`.
    pub ratio: Option<Scalar>,
    /// `w` with `ratio = χ(θ)^w`, searched among small integers when `χ(θ) ≠ ±1`.
    pub exponent: Option<i64>,
}

impl ProbeReport {
    pub fn render(&self, name: &str) -> String {
        let mut out = format!(
            "{name} before = {}\n{name} after = {}\ndifference = {}\n",
            fmt_scalar(&self.before),
            fmt_scalar(&self.after),
            fmt_scalar(&self.difference)
        );
        if let Some(r) = &self.ratio {
            out.push_str(&format!("ratio = {}\n", fmt_scalar(r)));
        }
        if let Some(w) = self.exponent {
            out.push_str(&format!("exponent = {w}\n"));
        }
        out
    }
}

/// Evaluates `f` on `pres` and on its push-forward by `θ`.
pub fn quasi_invariance_probe(f: &Param, pres: &FrescoPresentation, cv: &ChangeOfVariable) -> Result<ProbeReport> {
    let before = f.eval(pres)?;
    let after = f.eval(&push_presentation(pres, cv)?)?;
    let difference = &after - &before;
    let ratio = (!before.is_zero()).then(|| &after / &before);
    let exponent = ratio.as_ref().and_then(|r| weight_exponent(&cv.chi(), r));
    Ok(ProbeReport {
        before,
        after,
        difference,
        ratio,
        exponent,
    })
}

/// `w ∈ [−64, 64]` with `chi^w = r`, if `chi ≠ ±1` and one exists.
pub fn weight_exponent(chi: &Scalar, r: &Scalar) -> Option<i64> {
    if chi.abs().is_one() || chi.is_zero() {
        return None;
    }
    (-64i64..=64).find(|&w| {
        let p = if w >= 0 {
            num_traits::pow(chi.clone(), w as usize)
        } else {
            num_traits::pow(chi.recip(), (-w) as usize)
        };
        &p == r
    })
}

use num_traits::Signed;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fresco::{bernstein_polynomial, fundamental_invariants};
    use crate::series::rat;
    use proptest::prelude::*;

    fn ser(c: &[i64], n: usize) -> TruncSeries {
        TruncSeries::from_ints(c, n)
    }

    #[test]
    fn identity_push_is_trivial() {
        let p = FrescoPresentation::new(
            vec![rat(1, 2), rat(3, 2)],
            vec![ser(&[1, 2, 1], 8), ser(&[1], 8)],
            8,
        )
        .unwrap();
        let fr = realize(&p);
        assert_eq!(theta_push(&fr, &ChangeOfVariable::identity()).unwrap(), fr);
    }

    #[test]
    fn rank_one_push_keeps_the_class() {
        for cv in [
            ChangeOfVariable::quadratic(rat(1, 2)),
            ChangeOfVariable::from_terms(&[(1, int(2)), (3, int(-1))]).unwrap(),
        ] {
            // The generator e becomes S_μ(β)^{-1}·e' with (α − μβ)·e' = 0.
            let mu = rat(7, 3);
            let p = FrescoPresentation::standard(vec![mu.clone()], 8).unwrap();
            let out = push_presentation(&p, &cv).unwrap();
            assert_eq!(out.lambdas(), p.lambdas());
            let s_mu = rank1_adapt(&mu, &cv, 8).unwrap();
            assert_eq!(out.s(1), &s_mu.invert().unwrap());
        }
    }

    #[test]
    fn rank_one_first_coefficients() {
        let (t2, mu) = (rat(3, 2), rat(5, 3));
        let cv = ChangeOfVariable::quadratic(t2.clone());
        let s = rank1_adapt(&mu, &cv, 6).unwrap();
        let t = rank1_t(&mu, &cv, 6).unwrap();
        assert_eq!(t.coeff(0), &int(1));
        assert_eq!(t.coeff(1), &(&t2 * (int(1) - &mu)));
        assert_eq!(s.coeff(1), &(&t2 * &mu * (&mu - int(1))));
        assert!(rank1_adapt(&mu, &ChangeOfVariable::identity(), 6).unwrap().is_one());
    }

    #[test]
    fn rank_one_adaptation_kills_the_twisted_element() {
        let mu = rat(-2, 5);
        let n = 8;
        let cv = ChangeOfVariable::from_terms(&[(1, int(1)), (2, int(2)), (3, rat(-1, 3))]).unwrap();
        let s = rank1_adapt(&mu, &cv, n).unwrap();
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
        let diff: SVec = lhs.iter().zip(&rhs).map(|(x, y)| x - &y.scale(&mu)).collect();
        assert!(diff[0].is_zero());
    }

    #[test]
    fn closed_form_action_matches_module_action() {
        let lambda = rat(3, 4);
        let n = 10;
        let e = AbModule::new(vec![vec![TruncSeries::monomial(1, lambda.clone(), n)]]).unwrap();
        for (p, q) in [(1, 0), (2, 1), (3, 2), (0, 4)] {
            let mut v = vec![TruncSeries::monomial(q, int(1), n)];
            for _ in 0..p {
                v = e.apply_a(&v);
            }
            let expect = TruncSeries::monomial(p + q, a_pow_b_pow_on_e_lambda(&lambda, p, q), n);
            assert_eq!(v[0], expect);
        }
    }

    #[test]
    fn scaling_rule_on_rank_two() {
        // θ = ξ·a sends S_j(b) to S_j(b/ξ).
        let xi = int(3);
        let p = FrescoPresentation::new(
            vec![rat(1, 2), rat(5, 2)],
            vec![ser(&[1, 2, 0, 5], 8), ser(&[1], 8)],
            8,
        )
        .unwrap();
        let out = push_presentation(&p, &ChangeOfVariable::scaling(xi.clone())).unwrap();
        let expect: Vec<Scalar> = (0..=8)
            .map(|e| p.s(1).coeff(e) / num_traits::pow(xi.clone(), e))
            .collect();
        assert_eq!(out.s(1).coeffs(), &expect[..]);
    }

    fn cv_strategy() -> impl Strategy<Value = ChangeOfVariable> {
        (prop_oneof![Just(1i64), Just(2), Just(-1)], -2i64..=2, -2i64..=2).prop_map(|(c1, c2, c3)| {
            ChangeOfVariable::from_terms(&[(1, int(c1)), (2, int(c2)), (3, int(c3))]).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        #[test]
        fn push_keeps_relation_and_bernstein(cv in cv_strategy(), c in proptest::collection::vec(-2i64..=2, 4)) {
            let p = FrescoPresentation::new(
                vec![rat(1, 3), rat(4, 3), rat(1, 2)],
                vec![ser(&[1, c[0], c[1]], 10), ser(&[1, c[2], 0, c[3]], 10), ser(&[1], 10)],
                10,
            ).unwrap();
            let fr = realize(&p);
            let pushed = theta_push(&fr, &cv).unwrap();
            let m = &pushed.module;
            let v: SVec = vec![ser(&[1, c[0]], 10), ser(&[c[1], 1], 10), ser(&[0, 0, 1], 10)];
            let lhs: SVec = m.apply_a(&m.apply_b(&v)).iter().zip(m.apply_b(&m.apply_a(&v)))
                .map(|(x, y)| x - &y).collect();
            prop_assert_eq!(svec_truncate(&lhs, 10), svec_truncate(&m.apply_b(&m.apply_b(&v)), 10));
            prop_assert_eq!(bernstein_polynomial(&pushed, false).unwrap(), bernstein_polynomial(&fr, false).unwrap());
            prop_assert_eq!(fundamental_invariants(&pushed).unwrap(), p.lambdas().to_vec());
        }

        #[test]
        fn push_composes(c1 in cv_strategy(), c2 in cv_strategy()) {
            let p = FrescoPresentation::new(
                vec![rat(1, 2), rat(3, 2)],
                vec![ser(&[1, 1, 2], 12), ser(&[1], 12)],
                12,
            ).unwrap();
            let fr = realize(&p);
            let twice = theta_push(&theta_push(&fr, &c1).unwrap(), &c2).unwrap();
            let once = theta_push(&fr, &c2.compose(&c1)).unwrap();
            let a = jh_factorize_with(&twice, p.lambdas()).unwrap();
            let b = jh_factorize_with(&once, p.lambdas()).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
