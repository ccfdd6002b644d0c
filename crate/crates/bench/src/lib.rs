//! Fixed inputs shared by the benchmarks in `benches/`.

use fresco_core::fresco::default_order;
use fresco_core::series::{int, rat};
use fresco_core::{ChangeOfVariable, FrescoPresentation, Scalar, TruncSeries};

/// `λ_{j+1} = λ_j + p_j − 1` starting from `l1`.
pub fn chain(l1: Scalar, ps: &[i64]) -> Vec<Scalar> {
    let mut out = vec![l1];
    for p in ps {
        let next = out.last().expect("nonempty") + int(p - 1);
        out.push(next);
    }
    out
}

/// Presentation at the default order with the given `S_1 … S_{k−1}` and `S_k = 1`.
pub fn presentation(lambdas: Vec<Scalar>, s: &[&[i64]]) -> FrescoPresentation {
    let n = default_order(&lambdas);
    let mut series: Vec<TruncSeries> = s.iter().map(|c| TruncSeries::from_ints(c, n)).collect();
    series.push(TruncSeries::one(n));
    FrescoPresentation::new(lambdas, series, n).expect("valid fixture")
}

pub fn rank3() -> FrescoPresentation {
    presentation(chain(rat(7, 2), &[3, 2]), &[&[1, 2, 0, 3, 1], &[1, 0, 4]])
}

pub fn rank4() -> FrescoPresentation {
    presentation(chain(rat(7, 3), &[3, 3, 2]), &[&[1, 2, -3], &[1, -1, 2], &[1, 3, 1]])
}

/// `θ(a) = a/2 − 2a² + a³`, not unimodular.
pub fn theta() -> ChangeOfVariable {
    ChangeOfVariable::from_terms(&[(1, rat(1, 2)), (2, int(-2)), (3, int(1))]).expect("valid θ")
}
