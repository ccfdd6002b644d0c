//! Rank-3 normal forms, the parameter `γ`, the rank-2 parameter `α` and the
//! rank-`k` combinations `π_{i,j}`.
//!
//! After the presentation is reduced onto its versal support, the remaining
//! freedom is a change of basis
//! `ε_3 = e_3 + X·e_2 + Y·e_1`, `ε_2 = e_2 + T·e_1`, `ε_1 = e_1`,
//! which keeps `S_2` and replaces `S_1` by `Σ_1` when
//!
//! ```text
//! (λ_2−λ_3)·b·X + b²·X' = 0
//! (λ_1−λ_3)·b·Y + b²·Y' = S_2·T − X·S_1
//! (λ_1−λ_2)·b·T + b²·T' = Σ_1 − S_1
//! ```
//!
//! These are linear in `(X, Y, T, Σ_1)`. Each case fixes the exponents that
//! `Σ_1` may use; the coefficients are found by one linear solve and checked
//! to be unique.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{FrescoError, Result};
use crate::fresco::{
    is_isomorphic, jh_factorize_with, jh_submodule, quotient, realize, reduce_to_versal, submodule_action, Fresco,
    FrescoPresentation, IsoOutcome,
};
use crate::linalg::{q_nullspace, q_solve, svec_unit, QMat};
use crate::series::{as_nonneg_integer, fmt_scalar, int, Scalar, TruncSeries};

/// The fourteen rank-3 cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseTag {
    C1,
    C2,
    C3,
    C4,
    C4p,
    C5,
    C6,
    C6p,
    C6pp,
    C6ppp,
    C7,
    C8,
    C8p,
    C8pp,
}

impl CaseTag {
    pub const ALL: [CaseTag; 14] = [
        CaseTag::C1,
        CaseTag::C2,
        CaseTag::C3,
        CaseTag::C4,
        CaseTag::C4p,
        CaseTag::C5,
        CaseTag::C6,
        CaseTag::C6p,
        CaseTag::C6pp,
        CaseTag::C6ppp,
        CaseTag::C7,
        CaseTag::C8,
        CaseTag::C8p,
        CaseTag::C8pp,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CaseTag::C1 => "1",
            CaseTag::C2 => "2",
            CaseTag::C3 => "3",
            CaseTag::C4 => "4",
            CaseTag::C4p => "4'",
            CaseTag::C5 => "5",
            CaseTag::C6 => "6",
            CaseTag::C6p => "6'",
            CaseTag::C6pp => "6''",
            CaseTag::C6ppp => "6'''",
            CaseTag::C7 => "7",
            CaseTag::C8 => "8",
            CaseTag::C8p => "8'",
            CaseTag::C8pp => "8''",
        }
    }

    /// Shape of the normal form.
    pub fn template(self) -> &'static str {
        match self {
            CaseTag::C1 => "(a - λ1 b)(1 + γ b)^-1 (a - λ2 b) S2^-1 (a - λ3 b)",
            CaseTag::C2 => "(a - λ1 b)(1 + γ b + α b^p1)^-1 (a - λ2 b)(1 + β b^p2)^-1 (a - λ3 b)",
            CaseTag::C3 => "(a - λ1 b)(1 + γ b)^-1 (a - λ2 b)(1 + β b^p2)^-1 (a - λ3 b)",
            CaseTag::C4 => "(a - λ1 b)(1 + α b^p1)^-1 (a - λ2 b)(1 + β b)^-1 (a - λ2 b)",
            CaseTag::C4p => "(a - λ1 b)(1 + γ b + α b^p1)^-1 (a - λ2 b)(a - λ2 b)",
            CaseTag::C5 => "(a - λ1 b)(1 + γ b + α b^p1)^-1 (a - λ2 b)(a - (λ2 - 1) b)",
            CaseTag::C6 => "(a - λ1 b)(1 + α b)^-1 (a - λ1 b)(1 + β b^p2)^-1 (a - λ3 b)",
            CaseTag::C6p => "(a - λ1 b)(1 + δ b^(p2+1))^-1 (a - λ1 b)(1 + β b^p2)^-1 (a - λ3 b)",
            CaseTag::C6pp => "(a - λ1 b)(1 + α b)^-1 (a - λ1 b)(1 + β b)^-1 (a - λ3 b)",
            CaseTag::C6ppp => "(a - λ1 b)(1 + α b + δ b^2)^-1 (a - λ1 b)(1 + α b)^-1 (a - λ1 b)",
            CaseTag::C7 => "(a - λ1 b)(1 + γ b)^-1 (a - λ1 b)(a - (λ1 - 1) b)",
            CaseTag::C8 => "(a - λ1 b)(1 + γ b)^-1 (a - (λ1 - 1) b)(1 + β b^p2)^-1 (a - λ3 b)",
            CaseTag::C8p => "(a - λ1 b)(a - (λ1 - 1) b)(1 + β b)^-1 (a - (λ1 - 1) b)",
            CaseTag::C8pp => "(a - λ1 b)(1 + γ b)^-1 (a - (λ1 - 1) b)(a - (λ1 - 2) b)",
        }
    }

    pub fn parse(s: &str) -> Option<CaseTag> {
        CaseTag::ALL.into_iter().find(|t| t.label() == s)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamName {
    Gamma,
    Alpha,
    Beta,
    Delta,
}

impl ParamName {
    pub fn symbol(self) -> &'static str {
        match self {
            ParamName::Gamma => "γ",
            ParamName::Alpha => "α",
            ParamName::Beta => "β",
            ParamName::Delta => "δ",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank3NormalForm {
    pub case_tag: CaseTag,
    pub lambdas: Vec<Scalar>,
    pub p1: Scalar,
    pub p2: Scalar,
    pub params: BTreeMap<ParamName, Scalar>,
    /// The normal-form presentation itself.
    pub presentation: FrescoPresentation,
}

impl Rank3NormalForm {
    pub fn lambda1(&self) -> &Scalar {
        &self.lambdas[0]
    }

    pub fn param(&self, name: ParamName) -> Option<&Scalar> {
        self.params.get(&name)
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "case {}\nλ1 = {}\np1 = {}\np2 = {}\n",
            self.case_tag,
            fmt_scalar(&self.lambdas[0]),
            fmt_scalar(&self.p1),
            fmt_scalar(&self.p2)
        );
        for (name, v) in &self.params {
            out.push_str(&format!("{} = {}\n", name.symbol(), fmt_scalar(v)));
        }
        out.push_str(&format!("form {}\n", self.case_tag.template()));
        out
    }
}

/// Case tag and the exponents allowed in `Σ_1` beyond the constant term.
fn case_of(p1: &Scalar, p2: &Scalar, alpha: &Scalar, beta: &Scalar) -> Result<(CaseTag, Vec<usize>)> {
    let Some(p1) = p1.is_integer().then(|| as_nonneg_integer(p1)).flatten() else {
        if !p1.is_integer() {
            // A single leading class: γ is free exactly when p_2 = 1.
            let z = if p2 == &int(1) { vec![] } else { vec![1] };
            return Ok((CaseTag::C1, z));
        }
        return Err(FrescoError::UnsupportedShape("p1 must be a natural number".into()));
    };
    let p2 = as_nonneg_integer(p2).ok_or_else(|| {
        FrescoError::UnsupportedShape("λ1 is congruent to λ2 but not to λ3; reorder so that the pair is λ2, λ3".into())
    })?;
    let out = match (p1, p2) {
        (p1, p2) if p1 >= 2 && p2 >= 2 => {
            if alpha.is_zero() {
                (CaseTag::C3, vec![1])
            } else {
                (CaseTag::C2, vec![1, p1])
            }
        }
        (p1, 1) if p1 >= 2 => {
            if beta.is_zero() {
                (CaseTag::C4p, vec![1, p1])
            } else {
                (CaseTag::C4, vec![p1])
            }
        }
        (p1, 0) if p1 >= 2 => (CaseTag::C5, vec![1, p1]),
        (1, p2) if p2 >= 2 => {
            if alpha.is_zero() {
                (CaseTag::C6p, vec![p2 + 1])
            } else {
                (CaseTag::C6, vec![1])
            }
        }
        (1, 1) => {
            if alpha == beta {
                (CaseTag::C6ppp, vec![1, 2])
            } else {
                (CaseTag::C6pp, vec![1])
            }
        }
        (1, 0) => (CaseTag::C7, vec![1]),
        // the b^p2 term of S_1 is absorbed by X = σ·b^(p2−1)
        (0, p2) if p2 >= 2 => (CaseTag::C8, vec![1]),
        (0, 1) => (CaseTag::C8p, vec![]),
        (0, 0) => (CaseTag::C8pp, vec![1]),
        _ => unreachable!("all pairs of natural numbers are covered"),
    };
    Ok(out)
}

/// `Σ_1` supported on `{0} ∪ z` with the same module as `(λ; S_1, S_2)`,
/// keeping `S_2`. Fails if no such `Σ_1` exists or if it is not unique.
pub fn solve_sigma(pres: &FrescoPresentation, z: &[usize]) -> Result<TruncSeries> {
    if pres.rank() != 3 {
        return Err(FrescoError::UnsupportedShape("rank 3 expected".into()));
    }
    let n = pres.order();
    let l = pres.lambdas();
    let (s1, s2) = (pres.s(1), pres.s(2));
    // unknowns: X_0..X_n, Y_0..Y_n, T_0..T_n, then z
    let (ix, iy, it, iz) = (0, n + 1, 2 * (n + 1), 3 * (n + 1));
    let cols = iz + z.len();
    let mut rows: QMat = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    let l23 = &l[1] - &l[2];
    let l13 = &l[0] - &l[2];
    let l12 = &l[0] - &l[1];
    for m in 0..=n {
        // (@) at b^m
        if m >= 1 {
            let mut r = vec![Scalar::zero(); cols];
            r[ix + m - 1] = &l23 + int(m as i64 - 1);
            rows.push(r);
            rhs.push(Scalar::zero());
        }
        // Y-equation at b^m: (λ1−λ3+m−1)·Y_{m−1} − Σ S2_i·T_{m−i} + Σ X_i·S1_{m−i} = 0
        let mut r = vec![Scalar::zero(); cols];
        if m >= 1 {
            r[iy + m - 1] = &l13 + int(m as i64 - 1);
        }
        for i in 0..=m {
            r[it + m - i] -= s2.coeff(i);
            r[ix + i] += s1.coeff(m - i);
        }
        rows.push(r);
        rhs.push(Scalar::zero());
        // T-equation at b^m: (λ1−λ2+m−1)·T_{m−1} − [m ∈ z]·z_m = −S1_m
        if m >= 1 {
            let mut r = vec![Scalar::zero(); cols];
            r[it + m - 1] = &l12 + int(m as i64 - 1);
            if let Some(pos) = z.iter().position(|&q| q == m) {
                r[iz + pos] = -Scalar::one();
            }
            rows.push(r);
            rhs.push(-s1.coeff(m));
        }
    }
    let sol = q_solve(&rows, &rhs).ok_or_else(|| {
        FrescoError::UnsupportedShape(format!("no normal form with support {z:?} at order {n}"))
    })?;
    let free = q_nullspace(&rows, cols);
    if free.iter().any(|v| v[iz..].iter().any(|c| !c.is_zero())) {
        return Err(FrescoError::UnsupportedShape(format!(
            "normal form with support {z:?} is not unique at order {n}"
        )));
    }
    let mut sigma = TruncSeries::one(n);
    for (pos, &q) in z.iter().enumerate() {
        if q <= n {
            sigma.set(q, sol[iz + pos].clone());
        }
    }
    Ok(sigma)
}

fn check_rank(pres: &FrescoPresentation, k: usize) -> Result<()> {
    if pres.rank() != k {
        return Err(FrescoError::UnsupportedShape(format!(
            "rank {k} expected, got {}",
            pres.rank()
        )));
    }
    Ok(())
}

fn coeff_at(s: &TruncSeries, e: &Scalar) -> Scalar {
    match as_nonneg_integer(e) {
        Some(e) if e >= 1 => s.get(e).cloned().unwrap_or_else(Scalar::zero),
        _ => Scalar::zero(),
    }
}

/// Normal form of a rank-3 presentation, confirmed by [`is_isomorphic`].
pub fn normal_form_rank3(pres: &FrescoPresentation) -> Result<Rank3NormalForm> {
    check_rank(pres, 3)?;
    let p1 = pres.p(1);
    let p2 = pres.p(2);
    if p1.is_integer() && !p2.is_integer() {
        return Err(FrescoError::UnsupportedShape(
            "λ1 is congruent to λ2 but not to λ3; reorder so that the pair is λ2, λ3".into(),
        ));
    }
    let reduced = reduce_to_versal(pres)?;
    let alpha = coeff_at(reduced.s(1), &p1);
    let beta = coeff_at(reduced.s(2), &p2);
    let (tag, z) = case_of(&p1, &p2, &alpha, &beta)?;
    let sigma = solve_sigma(&reduced, &z)?;
    let n = reduced.order();
    let s2 = reduced.s(2).clone();
    let normal = FrescoPresentation::new(pres.lambdas().to_vec(), vec![sigma.clone(), s2, TruncSeries::one(n)], n)?;
    let mut params = BTreeMap::new();
    let pi1 = as_nonneg_integer(&p1);
    let pi2 = as_nonneg_integer(&p2);
    let get = |e: usize| sigma.get(e).cloned().unwrap_or_else(Scalar::zero);
    match tag {
        CaseTag::C1 | CaseTag::C3 | CaseTag::C7 | CaseTag::C8 | CaseTag::C8pp => {
            params.insert(ParamName::Gamma, get(1));
        }
        CaseTag::C2 | CaseTag::C4p | CaseTag::C5 => {
            params.insert(ParamName::Gamma, get(1));
            params.insert(ParamName::Alpha, get(pi1.expect("integral")));
        }
        CaseTag::C4 => {
            params.insert(ParamName::Alpha, get(pi1.expect("integral")));
        }
        CaseTag::C6 | CaseTag::C6pp => {
            params.insert(ParamName::Alpha, get(1));
        }
        CaseTag::C6p => {
            params.insert(ParamName::Delta, get(pi2.expect("integral") + 1));
        }
        CaseTag::C6ppp => {
            params.insert(ParamName::Alpha, get(1));
            params.insert(ParamName::Delta, get(2));
        }
        CaseTag::C8p => {}
    }
    if matches!(
        tag,
        CaseTag::C2 | CaseTag::C3 | CaseTag::C4 | CaseTag::C6 | CaseTag::C6p | CaseTag::C6pp | CaseTag::C8 | CaseTag::C8p
    ) {
        params.insert(ParamName::Beta, beta);
    }
    match is_isomorphic(pres, &normal)? {
        IsoOutcome::Isomorphic { .. } => {}
        IsoOutcome::NotIsomorphic { reason } => {
            return Err(FrescoError::UnsupportedShape(format!(
                "normal form does not match the input: {reason}"
            )))
        }
        IsoOutcome::Inconclusive { order } => {
            return Err(FrescoError::OrderTooSmall {
                needed: order + 1,
                have: order,
                what: "confirming the normal form".into(),
            })
        }
    }
    Ok(Rank3NormalForm {
        case_tag: tag,
        lambdas: pres.lambdas().to_vec(),
        p1,
        p2,
        params,
        presentation: normal,
    })
}

/// The alternative form of case (4'): `Σ_1 = 1 + α·b^{p_1} + δ·b^{p_1+1}`; returns `δ`.
pub fn case4p_delta(pres: &FrescoPresentation) -> Result<Scalar> {
    check_rank(pres, 3)?;
    let p1 = as_nonneg_integer(&pres.p(1)).filter(|&p| p >= 2);
    let (Some(p1), true) = (p1, pres.p(2) == int(1)) else {
        return Err(FrescoError::UnsupportedShape("needs p1 ≥ 2 and p2 = 1".into()));
    };
    let reduced = reduce_to_versal(pres)?;
    if !coeff_at(reduced.s(2), &int(1)).is_zero() {
        return Err(FrescoError::UnsupportedShape("needs β = 0".into()));
    }
    let sigma = solve_sigma(&reduced, &[p1, p1 + 1])?;
    Ok(sigma.get(p1 + 1).cloned().unwrap_or_else(Scalar::zero))
}

/// `γ = (p_2−1)·S_1'(0) − (p_1−1)·S_2'(0)`.
pub fn gamma3(pres: &FrescoPresentation) -> Result<Scalar> {
    check_rank(pres, 3)?;
    let c1 = pres.s(1).get(1).cloned().unwrap_or_else(Scalar::zero);
    let c2 = pres.s(2).get(1).cloned().unwrap_or_else(Scalar::zero);
    Ok((pres.p(2) - int(1)) * c1 - (pres.p(1) - int(1)) * c2)
}

/// Presentation of `F_{h+2}/F_{h−1}` computed from the realized module, `h` 1-based.
pub fn subquotient3(pres: &FrescoPresentation, h: usize) -> Result<FrescoPresentation> {
    let k = pres.rank();
    if h == 0 || h + 2 > k {
        return Err(FrescoError::IndexOutOfRange(format!("h = {h} for rank {k}")));
    }
    let n = pres.order();
    let hi = n + 10;
    let fr = realize(&pres.padded(hi));
    let top = h + 2;
    let prefix = Fresco {
        module: submodule_action(&fr.module, &jh_submodule(k, top, hi))?,
        generator: svec_unit(top, top - 1, hi),
    };
    let sub = quotient(&prefix, &jh_submodule(top, h - 1, hi))?;
    Ok(jh_factorize_with(&sub, &pres.lambdas()[h - 1..top])?.truncate(n))
}

/// `(p_j−1)(p_{j+1}−1)(p_j+p_{j+1}−1)·γ_i − (p_i−1)(p_{i+1}−1)(p_i+p_{i+1}−1)·γ_j`.
pub fn pi_ij(pres: &FrescoPresentation, i: usize, j: usize) -> Result<Scalar> {
    let k = pres.rank();
    if i == 0 || j == 0 || i.max(j) + 2 > k {
        return Err(FrescoError::IndexOutOfRange(format!(
            "need 1 ≤ i, j ≤ k − 2 = {}, got ({i}, {j})",
            k as i64 - 2
        )));
    }
    let weight = |h: usize| {
        let (a, b) = (pres.p(h), pres.p(h + 1));
        (&a - int(1)) * (&b - int(1)) * (a + b - int(1))
    };
    let gi = gamma3(&subquotient3(pres, i)?)?;
    let gj = gamma3(&subquotient3(pres, j)?)?;
    Ok(weight(j) * gi - weight(i) * gj)
}

/// Coefficient of `b^{p_1}` in the reduced presentation; `0` when `p_1 ∉ ℕ*`.
pub fn alpha2(pres: &FrescoPresentation) -> Result<Scalar> {
    check_rank(pres, 2)?;
    let p1 = pres.p(1);
    match as_nonneg_integer(&p1) {
        Some(p) if p >= 1 && p1.is_integer() => {
            let reduced = reduce_to_versal(pres)?;
            Ok(reduced.s(1).get(p).cloned().unwrap_or_else(Scalar::zero))
        }
        _ => Ok(Scalar::zero()),
    }
}

/// Exponents allowed in `Σ_1` for each case, exposed for reporting.
pub fn sigma_support(tag: CaseTag, p1: usize, p2: usize) -> BTreeSet<usize> {
    let v: Vec<usize> = match tag {
        CaseTag::C1 | CaseTag::C3 | CaseTag::C6 | CaseTag::C6pp | CaseTag::C7 | CaseTag::C8 | CaseTag::C8pp => vec![1],
        CaseTag::C2 | CaseTag::C4p | CaseTag::C5 => vec![1, p1],
        CaseTag::C4 => vec![p1],
        CaseTag::C6p => vec![p2 + 1],
        CaseTag::C6ppp => vec![1, 2],
        CaseTag::C8p => vec![],
    };
    v.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn ser(c: &[i64], n: usize) -> TruncSeries {
        TruncSeries::from_ints(c, n)
    }

    fn pres3(l1: Scalar, p1: i64, p2: i64, s1: &[i64], s2: &[i64]) -> FrescoPresentation {
        let l2 = &l1 + int(p1 - 1);
        let l3 = &l2 + int(p2 - 1);
        let n = crate::fresco::default_order(&[l1.clone(), l2.clone(), l3.clone()]);
        FrescoPresentation::new(vec![l1, l2, l3], vec![ser(s1, n), ser(s2, n), ser(&[1], n)], n).unwrap()
    }

    #[test]
    fn gamma_direct() {
        let p = pres3(rat(7, 2), 3, 2, &[1, 5], &[1, 2]);
        assert_eq!(gamma3(&p).unwrap(), int(5 - 2 * 2));
    }

    #[test]
    fn case_two_keeps_gamma_alpha_beta() {
        let p = pres3(rat(7, 2), 3, 2, &[1, 2, 0, 3, 1, 1], &[1, 0, 4]);
        let nf = normal_form_rank3(&p).unwrap();
        assert_eq!(nf.case_tag, CaseTag::C2);
        assert_eq!(nf.param(ParamName::Gamma), Some(&int(2)));
        assert_eq!(nf.param(ParamName::Alpha), Some(&int(3)));
        assert_eq!(nf.param(ParamName::Beta), Some(&int(4)));
    }

    #[test]
    fn non_integral_gap_is_case_one() {
        let l = vec![rat(1, 3), rat(1, 2), rat(5, 2)];
        let p = FrescoPresentation::new(l, vec![ser(&[1, 7, 1], 12), ser(&[1, 0, 0, 2], 12), ser(&[1], 12)], 12).unwrap();
        let nf = normal_form_rank3(&p).unwrap();
        assert_eq!(nf.case_tag, CaseTag::C1);
        assert_eq!(nf.param(ParamName::Gamma), Some(&int(7)));
    }

    #[test]
    fn case_eight_absorbs_the_b_p2_term() {
        let p = pres3(rat(7, 2), 0, 3, &[1, 2, 0, 5], &[1, 0, 0, 4]);
        let nf = normal_form_rank3(&p).unwrap();
        assert_eq!(nf.case_tag, CaseTag::C8);
        assert_eq!(nf.param(ParamName::Gamma), Some(&int(2)));
        assert_eq!(nf.param(ParamName::Delta), None);
        assert_eq!(nf.presentation.s(1), &ser(&[1, 2], p.order()));
        let other = pres3(rat(7, 2), 0, 3, &[1, 3], &[1, 0, 0, 4]);
        assert!(is_isomorphic(&p, &other).unwrap().is_not_isomorphic());
    }

    #[test]
    fn misordered_pair_is_rejected() {
        let l = vec![rat(1, 3), rat(4, 3), rat(1, 2)];
        let p = FrescoPresentation::new(l, vec![ser(&[1], 10); 3], 10).unwrap();
        assert!(matches!(normal_form_rank3(&p), Err(FrescoError::UnsupportedShape(_))));
    }

    #[test]
    fn gamma_normalization_identity() {
        // R_1'(0) = S_1'(0) − (p_1−1)/(p_2−1)·S_2'(0) once S_2 is reduced.
        let p = pres3(rat(10, 3), 2, 3, &[1, 4, 1], &[1, 6, 0, 1]);
        let r = reduce_to_versal(&p).unwrap();
        assert_eq!(r.s(2).coeff(1), &int(0));
        let expect = int(4) - rat(1, 2) * int(6);
        assert_eq!(r.s(1).coeff(1), &expect);
        assert_eq!(gamma3(&r).unwrap(), gamma3(&p).unwrap());
    }

    #[test]
    fn pi_from_subquotients_matches_direct() {
        let l = vec![rat(1, 2), rat(5, 2), rat(9, 2), rat(11, 2)];
        let n = 14;
        let s = vec![ser(&[1, 2], n), ser(&[1, -1], n), ser(&[1, 3], n), ser(&[1], n)];
        let p = FrescoPresentation::new(l.clone(), s.clone(), n).unwrap();
        for h in 1..=2 {
            let sub = subquotient3(&p, h).unwrap();
            let direct =
                FrescoPresentation::new(l[h - 1..h + 2].to_vec(), vec![s[h - 1].clone(), s[h].clone(), ser(&[1], n)], n)
                    .unwrap();
            assert_eq!(gamma3(&sub).unwrap(), gamma3(&direct).unwrap());
        }
        // p = (3, 3, 2): weights 2·2·5 = 20 and 2·1·4 = 8; γ_1 = 2·2 − 2·(−1) = 6, γ_2 = 1·(−1) − 2·3 = −7
        assert_eq!(pi_ij(&p, 1, 2).unwrap(), int(8 * 6 - 20 * -7));
        assert_eq!(pi_ij(&p, 2, 1).unwrap(), -pi_ij(&p, 1, 2).unwrap());
        assert_eq!(pi_ij(&p, 1, 1).unwrap(), int(0));
        assert!(matches!(pi_ij(&p, 1, 3), Err(FrescoError::IndexOutOfRange(_))));
    }

    #[test]
    fn alpha_examples() {
        let n = 10;
        let theme = FrescoPresentation::new(vec![rat(1, 2), rat(5, 2)], vec![ser(&[1, 0, 0, 5], n), ser(&[1], n)], n).unwrap();
        assert_eq!(alpha2(&theme).unwrap(), int(5));
        let ss = FrescoPresentation::standard(vec![rat(1, 2), rat(5, 2)], n).unwrap();
        assert_eq!(alpha2(&ss).unwrap(), int(0));
        let mixed = FrescoPresentation::standard(vec![rat(1, 3), rat(1, 2)], n).unwrap();
        assert_eq!(alpha2(&mixed).unwrap(), int(0));
    }
}
