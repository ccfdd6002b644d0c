//! Support sets `Y(λ_j, …, λ_k)` and reduction of a presentation onto them.

use std::collections::BTreeSet;

use num_traits::Zero;

use super::{apply_factors, realize, FrescoPresentation};
use crate::error::{FrescoError, Result};
use crate::linalg::{svec_unit, SVec};
use crate::series::{as_nonneg_integer, int, Scalar, TruncSeries};

/// `{0 … k−j−1} ∪ {p_j + ⋯ + p_{j+l} ≥ k−j : l < l_j}`, `j` 1-based, where
/// `l_j` counts the consecutive integral `p`'s from `p_j` on.
pub fn y_support(lambdas: &[Scalar], j: usize) -> BTreeSet<usize> {
    let k = lambdas.len();
    let mut out: BTreeSet<usize> = (0..k - j).collect();
    if j == k {
        out.insert(0);
        return out;
    }
    let mut sum = Scalar::zero();
    for idx in j..k {
        // p_idx = λ_{idx+1} − λ_idx + 1 (1-based)
        let p = &lambdas[idx] - &lambdas[idx - 1] + int(1);
        if !p.is_integer() {
            break;
        }
        sum += p;
        if let Some(s) = as_nonneg_integer(&sum) {
            if s >= k - j {
                out.insert(s);
            }
        }
    }
    out
}

/// Isomorphic presentation with every `S_j` supported on `Y(λ_j, …, λ_k)`.
pub fn reduce_to_versal(pres: &FrescoPresentation) -> Result<FrescoPresentation> {
    Ok(reduce_to_versal_with_generator(pres)?.0)
}

/// As [`reduce_to_versal`], also returning the new generator in the standard
/// basis of `realize(pres)`.
pub fn reduce_to_versal_with_generator(pres: &FrescoPresentation) -> Result<(FrescoPresentation, SVec)> {
    let k = pres.rank();
    let n = pres.order();
    if k == 1 {
        let out = pres.with_series(vec![TruncSeries::one(n)])?;
        return Ok((out, svec_unit(1, 0, n)));
    }
    let (tail, psi_tail) = reduce_to_versal_with_generator(&pres.tail())?;
    let module = realize(pres).module;
    let lambdas = pres.lambdas();
    let mut phi: SVec = vec![TruncSeries::zero(n)];
    phi.extend(psi_tail);
    let image = apply_factors(&module, &lambdas[1..], tail.series(), &phi)?;
    if image[1..].iter().any(|x| !x.is_zero()) {
        return Err(FrescoError::ResonanceAtTruncation {
            order: n,
            what: "lift of the reduced quotient generator".into(),
        });
    }
    let mut r = image[0].clone();
    let mut chi = TruncSeries::zero(n);
    let support = y_support(lambdas, 1);
    for q in (k - 1)..=r.order() {
        if support.contains(&q) || r.coeff(q).is_zero() {
            continue;
        }
        let m = q + 1 - k;
        let mut probe = svec_unit(k, 0, n);
        probe[0] = TruncSeries::monomial(m, int(1), n);
        let w = apply_factors(&module, &lambdas[1..], tail.series(), &probe)?;
        let lead = w[0].coeff(q).clone();
        debug_assert_eq!(
            lead,
            (2..=k).fold(int(1), |acc, h| acc
                * (&lambdas[0] + int((m + k - h) as i64) - &lambdas[h - 1]))
        );
        if lead.is_zero() {
            return Err(FrescoError::ResonanceAtTruncation {
                order: n,
                what: format!("elimination of b^{q}"),
            });
        }
        let c = r.coeff(q) / lead;
        chi = &chi + &TruncSeries::monomial(m, c.clone(), n);
        r = &r - &w[0].scale(&c);
    }
    if r.coeff(0).is_zero() {
        return Err(FrescoError::NotAGenerator("first quotient image vanishes modulo b".into()));
    }
    let s1 = r.scale(&r.coeff(0).recip());
    let mut s = vec![s1];
    s.extend(tail.series().iter().cloned());
    let out = FrescoPresentation::new(lambdas.to_vec(), s, n)?;
    phi[0] = &phi[0] - &chi;
    Ok((out, phi))
}
