//! Semi-simple part `S_1(E)`, its rank `δ` and the length `d` of the
//! semi-simple filtration.

use super::{class_rep, fundamental_invariants, kernel_k, quotient, Fresco, Submodule};
use crate::error::{FrescoError, Result};
use crate::linalg::{q_nullspace, svec_coeff, svec_is_zero, svec_order, svec_truncate, QMat, SVec};
use crate::series::{int, TruncSeries};

/// `S_1(E)`: the normal hull of `ℚ[[b]]·K_μ` for `μ = max_j(λ_j + j − 1)`.
pub fn semisimple_part(fr: &Fresco) -> Result<Submodule> {
    let lambdas = fundamental_invariants(fr)?;
    let rep = class_rep(&lambdas[0]);
    if lambdas.iter().any(|l| class_rep(l) != rep) {
        return Err(FrescoError::NotPrimitive);
    }
    let mu = lambdas
        .iter()
        .enumerate()
        .map(|(j, l)| l + int(j as i64))
        .max()
        .expect("positive rank");
    let kernel = kernel_k(fr, &mu)?;
    Ok(Submodule::new(normal_hull(kernel.generators)?))
}

/// Smallest normal submodule containing the span of `vs`.
///
/// Whenever the constant terms are dependent, the matching combination is
/// divisible by `b` and replaces one of its members after division.
pub fn normal_hull(mut vs: Vec<SVec>) -> Result<Vec<SVec>> {
    loop {
        vs.retain(|v| !svec_is_zero(v));
        if vs.is_empty() {
            return Ok(vs);
        }
        let order = vs.iter().map(|v| svec_order(v)).min().expect("nonempty");
        vs = vs.iter().map(|v| svec_truncate(v, order)).collect();
        let k = vs[0].len();
        let c0: QMat = (0..k)
            .map(|i| vs.iter().map(|v| svec_coeff(v, 0)[i].clone()).collect())
            .collect();
        let null = q_nullspace(&c0, vs.len());
        let Some(c) = null.into_iter().next() else {
            return Ok(vs);
        };
        let i0 = c.iter().rposition(|x| !num_traits::Zero::is_zero(x)).expect("nonzero");
        let mut w: SVec = vec![TruncSeries::zero(order); k];
        for (ci, v) in c.iter().zip(&vs) {
            w = w.iter().zip(v).map(|(x, y)| x + &y.scale(ci)).collect();
        }
        if svec_is_zero(&w) {
            vs.remove(i0);
            continue;
        }
        if order == 0 {
            return Err(FrescoError::OrderTooSmall {
                needed: 1,
                have: 0,
                what: "normal hull".into(),
            });
        }
        vs[i0] = w.iter().map(|x| x.shift_down(1)).collect::<Result<SVec>>()?;
    }
}

/// `δ(E)`, the rank of the semi-simple part.
pub fn delta(fr: &Fresco) -> Result<usize> {
    Ok(semisimple_part(fr)?.rank())
}

/// `d(E)`: number of steps `E → E/S_1(E) → …` until nothing is left.
pub fn ss_depth(fr: &Fresco) -> Result<usize> {
    let mut cur = fr.clone();
    let mut d = 0;
    while cur.rank() > 0 {
        let s = semisimple_part(&cur)?;
        if s.rank() == 0 {
            return Err(FrescoError::ResonanceAtTruncation {
                order: cur.order(),
                what: "semi-simple part".into(),
            });
        }
        if s.rank() == cur.rank() {
            return Ok(d + 1);
        }
        cur = quotient(&cur, &s)?;
        d += 1;
    }
    Ok(d)
}
