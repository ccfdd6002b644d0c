//! Isomorphism test between two presentations.
//!
//! `E_1 ≅ E_2` exactly when `E_1` has a generator `g` with `P_2·g = 0`, where
//! `P_2` is the annihilator written by the second presentation. Writing
//! `g = S_k·h`, the condition is linear in `h`, so the candidates form the
//! kernel of a ℚ-linear map on `E_1/b^{M+1}E_1`. If no kernel vector is a
//! generator modulo `b`, the modules are certainly not isomorphic; otherwise
//! the candidate is confirmed by factorizing `(E_1, g)`.

use super::{apply_factors_inv, jh_factorize_with, realize, Fresco, FrescoPresentation};
use crate::error::Result;
use num_traits::One;

use crate::linalg::{q_nullspace, q_rank, smat_coeff, svec_coeff, svec_unit, QMat, SVec};
use crate::series::{dot, int, Scalar, TruncSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// `witness` generates the first module and is killed by the second annihilator.
    Isomorphic { witness: SVec, order: usize },
    NotIsomorphic { reason: String },
    /// No separation and no confirmed witness up to `order`.
    Inconclusive { order: usize },
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic { .. })
    }

    pub fn is_not_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::NotIsomorphic { .. })
    }
}

const ROUNDS: usize = 4;

/// Compares two presentations up to the smaller of their orders; series are
/// read as polynomials when more terms are needed.
pub fn is_isomorphic(p1: &FrescoPresentation, p2: &FrescoPresentation) -> Result<IsoOutcome> {
    if p1.rank() != p2.rank() {
        return Ok(IsoOutcome::NotIsomorphic {
            reason: format!("ranks differ: {} and {}", p1.rank(), p2.rank()),
        });
    }
    if p1.lambdas() != p2.lambdas() {
        return Ok(IsoOutcome::NotIsomorphic {
            reason: "fundamental invariants differ".into(),
        });
    }
    let k = p1.rank();
    let n = p1.order().min(p2.order());
    let target = p2.truncate(n);
    let step = k * k + k + 2;
    let mut last = n;
    for round in 1..=ROUNDS {
        let m = n + step * round;
        let hi = m + k + 2;
        last = hi;
        let fr = realize(&p1.padded(hi));
        let a0 = smat_coeff(fr.module.a_matrix(), 0);
        let rank_a0 = q_rank(&a0);
        let outside = |h: &[Scalar]| {
            let mut aug = a0.clone();
            for (row, x) in aug.iter_mut().zip(h) {
                row.push(x.clone());
            }
            q_rank(&aug) > rank_a0
        };
        let cols = operator_columns(&fr, p2, hi)?;
        let low = candidate_kernel(&cols, k, m);
        let high = candidate_kernel(&cols, k, hi);
        let gens_low = low.iter().filter(|h| outside(&svec_coeff(h, 0))).count();
        let Some(h) = high.iter().find(|h| outside(&svec_coeff(h, 0))) else {
            return Ok(IsoOutcome::NotIsomorphic {
                reason: "no generator of the first module is killed by the second annihilator".into(),
            });
        };
        if gens_low == 0 {
            continue;
        }
        let s_k = p2.s(k).padded(hi);
        let g: SVec = h.iter().map(|x| x * &s_k).collect();
        let candidate = Fresco {
            module: fr.module.clone(),
            generator: g.clone(),
        };
        let Ok(found) = jh_factorize_with(&candidate, p2.lambdas()) else {
            continue;
        };
        if found.order() >= n && found.truncate(n) == target {
            return Ok(IsoOutcome::Isomorphic {
                witness: g.iter().map(|x| x.truncate(n)).collect(),
                order: n,
            });
        }
    }
    Ok(IsoOutcome::Inconclusive { order: last })
}

/// Columns of `L = (a−λ_1 b)S_1⁻¹ ⋯ (a−λ_k b)` on `E_1/b^{m+1}E_1`, indexed by `(e, i)`
/// for the basis vector `b^e·e_i`.
///
/// `L·b^e = b^e·L^{(e)}` where `L^{(e)}` has every `λ_j` lowered by `e`, and
/// `L^{(e)}` is a polynomial of degree `k` in `e`, so `k + 1` evaluations
/// determine every column.
fn operator_columns(fr: &Fresco, p2: &FrescoPresentation, m: usize) -> Result<Vec<SVec>> {
    let k = fr.rank();
    let module = fr.module.truncate(m);
    let mut s: Vec<TruncSeries> = p2.series().iter().map(|x| x.padded(m)).collect();
    s[k - 1] = TruncSeries::one(m);
    let s_inv = s.iter().map(TruncSeries::invert).collect::<Result<Vec<_>>>()?;
    let nodes: Vec<Vec<SVec>> = (0..=k)
        .map(|t| {
            let lambdas: Vec<Scalar> = p2.lambdas().iter().map(|l| l - int(t as i64)).collect();
            (0..k)
                .map(|i| apply_factors_inv(&module, &lambdas, &s_inv, &svec_unit(k, i, m)))
                .collect()
        })
        .collect();
    let mut cols = Vec::with_capacity(k * (m + 1));
    for e in 0..=m {
        let weights = lagrange_weights(k, e);
        for i in 0..k {
            let v: SVec = (0..k)
                .map(|r| {
                    let coeffs = (0..=m - e)
                        .map(|d| dot(weights.iter().zip(&nodes).map(|(w, node)| (w, node[i][r].coeff(d)))))
                        .collect();
                    TruncSeries::from_coeffs(coeffs).shift_up(e)
                })
                .collect();
            cols.push(v);
        }
    }
    Ok(cols)
}

/// `ℓ_t(e)` for the Lagrange basis on the nodes `0 … k`.
fn lagrange_weights(k: usize, e: usize) -> Vec<Scalar> {
    let e = int(e as i64);
    (0..=k)
        .map(|t| {
            let mut w = Scalar::one();
            for s in (0..=k).filter(|&s| s != t) {
                w = w * (&e - int(s as i64)) / int(t as i64 - s as i64);
            }
            w
        })
        .collect()
}

/// Basis of `{h mod b^{m+1} : L·h ≡ 0}`, from columns built at order `≥ m`.
fn candidate_kernel(cols: &[SVec], k: usize, m: usize) -> Vec<SVec> {
    let dim = k * (m + 1);
    let mat: QMat = (0..=m)
        .flat_map(|d| (0..k).map(move |r| (d, r)))
        .map(|(d, r)| cols[..dim].iter().map(|c| c[r].coeff(d).clone()).collect())
        .collect();
    q_nullspace(&mat, dim)
        .into_iter()
        .map(|x| {
            (0..k)
                .map(|i| TruncSeries::from_coeffs((0..=m).map(|e| x[e * k + i].clone()).collect()))
                .collect()
        })
        .filter(|v: &SVec| v.iter().any(|s| !s.is_zero()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fresco::apply_factors;
    use crate::series::rat;

    #[test]
    fn interpolated_columns_match_direct_application() {
        let p = FrescoPresentation::new(
            vec![rat(1, 2), rat(5, 2), rat(7, 2)],
            vec![
                TruncSeries::from_ints(&[1, 2, -1], 8),
                TruncSeries::from_ints(&[1, 0, 3], 8),
                TruncSeries::one(8),
            ],
            8,
        )
        .unwrap();
        let m = 8;
        let fr = realize(&p);
        let cols = operator_columns(&fr, &p, m).unwrap();
        for e in 0..=m {
            for i in 0..3 {
                let v: SVec = svec_unit(3, i, m).iter().map(|x| x.shift_up(e).truncate(m)).collect();
                let direct = apply_factors(&fr.module.truncate(m), p.lambdas(), p.series(), &v).unwrap();
                let direct: SVec = direct.iter().map(|x| x.truncate(m)).collect();
                let got: SVec = cols[e * 3 + i].iter().map(|x| x.truncate(m)).collect();
                assert_eq!(got, direct, "column (e = {e}, i = {i})");
            }
        }
    }
}
