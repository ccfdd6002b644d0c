//! Twisted duality and generator search.

use super::{AbModule, Fresco};
use crate::error::{FrescoError, Result};
use crate::linalg::{q_mat_vec, q_rank, smat_coeff, svec_unit, QMat};
use crate::series::{Scalar, TruncSeries};

/// `Hom(E, E_δ)` on the dual basis: `A* = δ·b·Id − Aᵗ`.
pub fn dual_twisted(module: &AbModule, delta: &Scalar) -> AbModule {
    let k = module.rank();
    let n = module.order();
    let a = module.a_matrix();
    let dual = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let mut x = -&a[j][i];
                    if i == j {
                        x = &x + &TruncSeries::monomial(1, delta.clone(), n);
                    }
                    x
                })
                .collect()
        })
        .collect();
    AbModule::new(dual).expect("square matrix")
}

/// First basis vector `e_i` that generates: `e_i, A(0)e_i, …` span `E/bE`.
pub fn find_generator(module: &AbModule) -> Result<Fresco> {
    let k = module.rank();
    let n = module.order();
    let a0 = smat_coeff(module.a_matrix(), 0);
    for i in 0..k {
        let mut v: Vec<Scalar> = svec_unit(k, i, 0).iter().map(|x| x.coeff(0).clone()).collect();
        let mut krylov: QMat = Vec::with_capacity(k);
        for _ in 0..k {
            krylov.push(v.clone());
            v = q_mat_vec(&a0, &v);
        }
        if q_rank(&krylov) == k {
            return Ok(Fresco {
                module: module.clone(),
                generator: svec_unit(k, i, n),
            });
        }
    }
    Err(FrescoError::NotAGenerator("no basis vector is cyclic modulo b".into()))
}
