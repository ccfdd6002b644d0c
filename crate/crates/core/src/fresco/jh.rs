//! Companion basis, saturation, Bernstein polynomial, kernels `K_μ` and the
//! Jordan–Hölder factorization.

use num_traits::{One, Zero};

use super::{class_rep, quotient, AbModule, Fresco, FrescoPresentation, Submodule};
use crate::error::{FrescoError, Result};
use crate::linalg::{
    q_charpoly, q_inverse, q_mat_vec, q_minpoly, q_nullspace, q_rank, q_rref, smat_coeff, smat_from_columns,
    smat_solve, svec_coeff, svec_order, svec_truncate, Poly, QMat, SMat, SVec,
};
use crate::series::{as_nonneg_integer, fmt_scalar, int, Scalar, TruncSeries};

/// Basis `f_j = a^j·g` and the coefficients of `a^k·g = Σ T_j·f_j`.
#[derive(Clone, Debug)]
pub struct Companion {
    /// Columns `f_0 … f_{k−1}`.
    pub basis: SMat,
    pub t: Vec<TruncSeries>,
}

pub fn companion(fr: &Fresco) -> Result<Companion> {
    let k = fr.rank();
    let order = fr.order();
    let mut cols: Vec<SVec> = vec![svec_truncate(&fr.generator, order)];
    for _ in 0..k {
        let next = fr.module.apply_a(cols.last().expect("nonempty"));
        cols.push(next);
    }
    let top = cols.pop().expect("k + 1 vectors");
    let basis = smat_from_columns(&cols);
    if q_rank(&smat_coeff(&basis, 0)) < k {
        return Err(FrescoError::NotAGenerator(
            "g, a·g, …, a^{k-1}·g are dependent modulo b".into(),
        ));
    }
    let t = smat_solve(&basis, &[top])?.remove(0);
    for (j, tj) in t.iter().enumerate() {
        if let Some(v) = tj.valuation() {
            if v < k - j {
                return Err(FrescoError::BadAnnihilatorShape(format!(
                    "T_{j} has b-valuation {v} < {}",
                    k - j
                )));
            }
        }
    }
    Ok(Companion { basis, t })
}

/// Matrix `M` with `a·ε = b·M·ε` on the saturation basis `ε_j = b^{−j}·a^j·g`.
pub(crate) fn saturation_matrix(comp: &Companion) -> Result<SMat> {
    let k = comp.t.len();
    let order = comp.t.iter().map(TruncSeries::order).min().unwrap_or(0);
    if order < k {
        return Err(FrescoError::OrderTooSmall {
            needed: k,
            have: order,
            what: "saturation".into(),
        });
    }
    let n = order - k;
    let mut m = vec![vec![TruncSeries::zero(n); k]; k];
    for j in 0..k {
        m[j][j] = TruncSeries::constant(-int(j as i64), n);
        if j + 1 < k {
            m[j + 1][j] = TruncSeries::one(n);
        }
    }
    for i in 0..k {
        let extra = comp.t[i].shift_down(k - i)?.truncate(n);
        m[i][k - 1] = &m[i][k - 1] + &extra;
    }
    Ok(m)
}

/// Saturation `E^♯` on the basis `b^{−j}·a^j·g`; its `a`-matrix is `b·M`.
pub fn saturation(fr: &Fresco) -> Result<AbModule> {
    let m = saturation_matrix(&companion(fr)?)?;
    AbModule::new(
        m.iter()
            .map(|row| row.iter().map(|x| x.shift_up(1)).collect())
            .collect(),
    )
}

/// Characteristic polynomial of `−b⁻¹·a` on `E^♯/b·E^♯` (minimal polynomial if asked).
pub fn bernstein_polynomial(fr: &Fresco, minimal: bool) -> Result<Poly> {
    let m0 = residue(fr)?;
    let neg: QMat = m0.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    Ok(if minimal { q_minpoly(&neg) } else { q_charpoly(&neg) })
}

fn residue(fr: &Fresco) -> Result<QMat> {
    let m = saturation_matrix(&companion(fr)?)?;
    Ok(smat_coeff(&m, 0))
}

/// `(λ_1 … λ_k)` in principal order, read off the Bernstein roots:
/// the roots are `k − (λ_j + j)`.
pub fn fundamental_invariants(fr: &Fresco) -> Result<Vec<Scalar>> {
    let k = fr.rank();
    let roots = bernstein_polynomial(fr, false)?.rational_roots()?;
    let mut values: Vec<Scalar> = roots.iter().map(|r| int(k as i64) - r).collect();
    values.sort_by(|x, y| (class_rep(x), x).cmp(&(class_rep(y), y)));
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(j, v)| v - int(j as i64 + 1))
        .collect())
}

/// Basis over ℚ of `K_μ = Ker(a − μ·b)` in `E`, in echelon form by valuation.
///
/// Solved in the saturation, where `(M_0 + m − μ)·x_m = −Σ_{n<m} M_{m−n}·x_n`
/// is a recursion away from resonances, under the constraint that the
/// coordinate on `ε_j` be divisible by `b^j`.
pub fn kernel_k(fr: &Fresco, mu: &Scalar) -> Result<Submodule> {
    let k = fr.rank();
    let comp = companion(fr)?;
    let m = saturation_matrix(&comp)?;
    let n = m.iter().flatten().map(TruncSeries::order).min().unwrap_or(0);
    let mcoef: Vec<QMat> = (0..=n).map(|i| smat_coeff(&m, i)).collect();
    let eig = q_charpoly(&mcoef[0]).rational_roots().unwrap_or_default();
    let last_res = eig.iter().filter_map(|e| as_nonneg_integer(&(mu - e))).max();
    let l = last_res.unwrap_or(0).max(k.saturating_sub(1));
    if l > n {
        return Err(FrescoError::OrderTooSmall {
            needed: fr.order() + l - n,
            have: fr.order(),
            what: format!("Ker(a - {}·b)", fmt_scalar(mu)),
        });
    }
    let shifted = |step: usize| -> QMat {
        let mut x = mcoef[0].clone();
        for (i, row) in x.iter_mut().enumerate() {
            row[i] += int(step as i64) - mu;
        }
        x
    };
    // Unknowns x_0 … x_l, k scalars each.
    let cols = k * (l + 1);
    let mut sys: QMat = Vec::new();
    for step in 0..=l {
        let diag = shifted(step);
        for i in 0..k {
            let mut row = vec![Scalar::zero(); cols];
            for nn in 0..=step {
                let blk = if nn == step { &diag } else { &mcoef[step - nn] };
                for j in 0..k {
                    row[nn * k + j] = blk[i][j].clone();
                }
            }
            sys.push(row);
        }
    }
    for step in 0..=l {
        for j in (step + 1)..k {
            let mut row = vec![Scalar::zero(); cols];
            row[step * k + j] = Scalar::one();
            sys.push(row);
        }
    }
    let null = q_nullspace(&sys, cols);
    let mut vectors = Vec::new();
    for sol in null {
        let mut xs: Vec<Vec<Scalar>> = (0..=l).map(|s| sol[s * k..(s + 1) * k].to_vec()).collect();
        for step in (l + 1)..=n {
            let mut rhs = vec![Scalar::zero(); k];
            for (nn, x) in xs.iter().enumerate() {
                let y = q_mat_vec(&mcoef[step - nn], x);
                for (r, v) in rhs.iter_mut().zip(y) {
                    *r -= v;
                }
            }
            let inv = q_inverse(&shifted(step)).expect("non-resonant step");
            xs.push(q_mat_vec(&inv, &rhs));
        }
        // v = Σ_j f_j · x_j / b^j
        let mut v: SVec = vec![TruncSeries::zero(n); k];
        for j in 0..k {
            let xj = TruncSeries::from_coeffs(xs.iter().map(|x| x[j].clone()).collect()).shift_down(j)?;
            for (i, vi) in v.iter_mut().enumerate() {
                *vi = &*vi + &(&comp.basis[i][j] * &xj);
            }
        }
        vectors.push(v);
    }
    Ok(Submodule::new(echelon_by_valuation(vectors)))
}

/// Reduced echelon form of ℚ-independent vectors, leading positions ordered
/// by (power of `b`, coordinate).
pub fn echelon_by_valuation(vs: Vec<SVec>) -> Vec<SVec> {
    if vs.is_empty() {
        return vs;
    }
    let k = vs[0].len();
    let order = vs.iter().map(|v| svec_order(v)).min().unwrap_or(0);
    let mut rows: QMat = vs
        .iter()
        .map(|v| (0..=order).flat_map(|e| svec_coeff(v, e)).collect())
        .collect();
    let rank = q_rref(&mut rows).len();
    rows.truncate(rank);
    rows.into_iter()
        .map(|r| {
            (0..k)
                .map(|i| TruncSeries::from_coeffs((0..=order).map(|e| r[e * k + i].clone()).collect()))
                .collect()
        })
        .collect()
}

/// Principal Jordan–Hölder presentation of `(E, g)`.
///
/// The certified order of the result is lower than the module's: each level
/// of the recursion loses `2r − 1` orders at rank `r`, `k² − 1` in total.
pub fn jh_factorize(fr: &Fresco) -> Result<FrescoPresentation> {
    let lambdas = fundamental_invariants(fr)?;
    jh_factorize_with(fr, &lambdas)
}

/// As [`jh_factorize`] with the fundamental invariants supplied.
pub fn jh_factorize_with(fr: &Fresco, lambdas: &[Scalar]) -> Result<FrescoPresentation> {
    let s = jh_series(fr, lambdas)?;
    let order = s.iter().map(TruncSeries::order).min().unwrap_or(0);
    FrescoPresentation::new(lambdas.to_vec(), s, order)
}

fn jh_series(fr: &Fresco, lambdas: &[Scalar]) -> Result<Vec<TruncSeries>> {
    let k = fr.rank();
    let kernel = kernel_k(fr, &lambdas[0])?;
    let psi = kernel
        .generators
        .into_iter()
        .find(|v| v.iter().any(TruncSeries::is_unit))
        .ok_or_else(|| FrescoError::ResonanceAtTruncation {
            order: fr.order(),
            what: format!("a rank-one submodule for λ = {}", fmt_scalar(&lambdas[0])),
        })?;
    let (x, mut out) = if k == 1 {
        (fr.generator.clone(), Vec::new())
    } else {
        let q = quotient(fr, &Submodule::new(vec![psi.clone()]))?;
        let tail = jh_series(&q, &lambdas[1..])?;
        let x = super::apply_factors(&fr.module, &lambdas[1..], &tail, &fr.generator)?;
        (x, tail)
    };
    // x = u·ψ
    let pivot = psi.iter().position(TruncSeries::is_unit).expect("unit coordinate");
    let order = svec_order(&x).min(svec_order(&psi));
    let u = &x[pivot].truncate(order) * &psi[pivot].truncate(order).invert()?;
    for (xi, pi) in x.iter().zip(&psi) {
        if !(&xi.truncate(order) - &(&u * pi)).is_zero() {
            return Err(FrescoError::ResonanceAtTruncation {
                order: fr.order(),
                what: "lift to the first Jordan–Hölder term".into(),
            });
        }
    }
    if u.coeff(0).is_zero() {
        return Err(FrescoError::NotAGenerator("image in the first quotient vanishes modulo b".into()));
    }
    let s1 = u.scale(&u.coeff(0).recip());
    let mut s = vec![s1];
    s.append(&mut out);
    Ok(s)
}
