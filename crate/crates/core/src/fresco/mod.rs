//! Frescos as concrete truncated modules.
//!
//! An [`AbModule`] is a free `ℚ[[b]]`-module with basis `e_1 … e_k` on which
//! `b` acts by multiplication and `a` acts by `a·v = A·v + b²·v'`, so the
//! relation `a·b − b·a = b²` holds by construction. Every module here is kept
//! in this canonical form; a change of variable re-expresses its result in
//! the same shape (see `chgvar`).

mod dual;
mod iso;
mod jh;
mod ss;
mod versal;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::ahat::AhatElement;
use crate::error::{FrescoError, Result};
use crate::linalg::{
    q_rank, q_rref, smat_from_columns, smat_order, smat_solve, svec_order, svec_truncate, svec_unit,
    QMat, SMat, SVec,
};
use crate::series::{as_nonneg_integer, fmt_scalar, int, parse_scalar, Scalar, SeriesAccumulator, TruncSeries};

pub use dual::{dual_twisted, find_generator};
pub use iso::{is_isomorphic, IsoOutcome};
pub use jh::{
    bernstein_polynomial, companion, fundamental_invariants, jh_factorize, jh_factorize_with, kernel_k, saturation,
    Companion,
};
pub use ss::{delta, semisimple_part, ss_depth};
pub use versal::{reduce_to_versal, reduce_to_versal_with_generator, y_support};

/// Representative of `x` mod ℤ in `(0, 1]`.
pub fn class_rep(x: &Scalar) -> Scalar {
    x - (x.ceil() - Scalar::one())
}

/// `ceil(max λ − min λ) + 3k + 4`.
pub fn default_order(lambdas: &[Scalar]) -> usize {
    let k = lambdas.len();
    let spread = match (lambdas.iter().max(), lambdas.iter().min()) {
        (Some(hi), Some(lo)) => as_nonneg_integer(&(hi - lo).ceil()).unwrap_or(0),
        _ => 0,
    };
    spread + 3 * k + 4
}

/// `(λ_1 … λ_k; S_1 … S_k)` encoding `(a−λ_1 b)S_1⁻¹ ⋯ (a−λ_k b)S_k⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrescoPresentation {
    lambdas: Vec<Scalar>,
    s: Vec<TruncSeries>,
    order: usize,
}

impl FrescoPresentation {
    /// Checks `S_j(0) = 1`, contiguous classes in increasing order of their
    /// representative in `(0, 1]`, and `λ_j + j` non-decreasing inside a class.
    pub fn new(lambdas: Vec<Scalar>, s: Vec<TruncSeries>, order: usize) -> Result<Self> {
        let k = lambdas.len();
        if k == 0 {
            return Err(FrescoError::InvalidPresentation("rank must be positive".into()));
        }
        if s.len() != k {
            return Err(FrescoError::InvalidPresentation(format!(
                "{} lambdas but {} series",
                k,
                s.len()
            )));
        }
        for (j, sj) in s.iter().enumerate() {
            if sj.order() < order {
                return Err(FrescoError::InvalidPresentation(format!(
                    "S_{} has order {} below {order}",
                    j + 1,
                    sj.order()
                )));
            }
            if !sj.coeff(0).is_one() {
                return Err(FrescoError::InvalidPresentation(format!("S_{}(0) must be 1", j + 1)));
            }
        }
        for j in 1..k {
            let (r0, r1) = (class_rep(&lambdas[j - 1]), class_rep(&lambdas[j]));
            if r1 < r0 {
                return Err(FrescoError::InvalidPresentation(format!(
                    "class of λ_{} comes before the class of λ_{}",
                    j + 1,
                    j
                )));
            }
            if r1 == r0 && &lambdas[j] + int(1) < lambdas[j - 1] {
                return Err(FrescoError::InvalidPresentation(format!(
                    "λ_{} + {} < λ_{} + {} inside one class",
                    j + 1,
                    j + 1,
                    j,
                    j
                )));
            }
        }
        let s = s.into_iter().map(|x| x.truncate(order)).collect();
        Ok(FrescoPresentation { lambdas, s, order })
    }

    /// All `S_j = 1`.
    pub fn standard(lambdas: Vec<Scalar>, order: usize) -> Result<Self> {
        let k = lambdas.len();
        Self::new(lambdas, vec![TruncSeries::one(order); k], order)
    }

    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn lambdas(&self) -> &[Scalar] {
        &self.lambdas
    }

    pub fn lambda(&self, j: usize) -> &Scalar {
        &self.lambdas[j - 1]
    }

    pub fn series(&self) -> &[TruncSeries] {
        &self.s
    }

    /// `S_j`, 1-based.
    pub fn s(&self, j: usize) -> &TruncSeries {
        &self.s[j - 1]
    }

    /// `p_j = λ_{j+1} − λ_j + 1`, 1-based.
    pub fn p(&self, j: usize) -> Scalar {
        &self.lambdas[j] - &self.lambdas[j - 1] + int(1)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        FrescoPresentation {
            lambdas: self.lambdas.clone(),
            s: self.s.iter().map(|x| x.truncate(order)).collect(),
            order,
        }
    }

    /// Reads the series as polynomials and extends them with zeros.
    pub fn padded(&self, order: usize) -> Self {
        FrescoPresentation {
            lambdas: self.lambdas.clone(),
            s: self.s.iter().map(|x| x.padded(order)).collect(),
            order,
        }
    }

    /// Same λ's, new series (re-validated).
    pub fn with_series(&self, s: Vec<TruncSeries>) -> Result<Self> {
        let order = s.iter().map(TruncSeries::order).min().unwrap_or(self.order);
        Self::new(self.lambdas.clone(), s, order)
    }

    /// `ceil(spread) + 3k + 4` for these λ's.
    pub fn default_order(&self) -> usize {
        default_order(&self.lambdas)
    }

    /// Presentation of `E/F_1`: drops `λ_1` and `S_1`.
    pub fn tail(&self) -> Self {
        FrescoPresentation {
            lambdas: self.lambdas[1..].to_vec(),
            s: self.s[1..].to_vec(),
            order: self.order,
        }
    }

    /// Parses the text format
    ///
    /// ```text
    /// rank 2 order 8
    /// lambdas 5/2 7/2
    /// S 1 0:1 2:5
    /// ```
    ///
    /// Missing `S j` lines mean `S_j = 1`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| FrescoError::Parse("empty presentation".into()))?
            .split_whitespace()
            .collect();
        let (k, order) = match header.as_slice() {
            ["rank", k, "order", n] => (
                k.parse::<usize>()
                    .map_err(|_| FrescoError::Parse(format!("bad rank {k:?}")))?,
                n.parse::<usize>()
                    .map_err(|_| FrescoError::Parse(format!("bad order {n:?}")))?,
            ),
            _ => return Err(FrescoError::Parse("first line must be `rank k order N`".into())),
        };
        let lam_line: Vec<&str> = lines
            .next()
            .ok_or_else(|| FrescoError::Parse("missing `lambdas` line".into()))?
            .split_whitespace()
            .collect();
        if lam_line.first() != Some(&"lambdas") {
            return Err(FrescoError::Parse("second line must start with `lambdas`".into()));
        }
        let lambdas = lam_line[1..]
            .iter()
            .map(|t| parse_scalar(t))
            .collect::<Result<Vec<_>>>()?;
        if lambdas.len() != k {
            return Err(FrescoError::Parse(format!("expected {k} lambdas, got {}", lambdas.len())));
        }
        let mut s: Vec<Option<TruncSeries>> = vec![None; k];
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.first() != Some(&"S") || toks.len() < 2 {
                return Err(FrescoError::Parse(format!("unexpected line {line:?}")));
            }
            let j: usize = toks[1]
                .parse()
                .map_err(|_| FrescoError::Parse(format!("bad index in {line:?}")))?;
            if j == 0 || j > k {
                return Err(FrescoError::Parse(format!("S index {j} out of 1..={k}")));
            }
            if s[j - 1].is_some() {
                return Err(FrescoError::Parse(format!("S {j} given twice")));
            }
            s[j - 1] = Some(TruncSeries::parse_sparse(toks[2..].iter().copied(), order)?);
        }
        let s = s
            .into_iter()
            .map(|x| x.unwrap_or_else(|| TruncSeries::one(order)))
            .collect();
        Self::new(lambdas, s, order)
    }

    /// Inverse of [`FrescoPresentation::parse`].
    pub fn render(&self) -> String {
        let mut out = format!("rank {} order {}\nlambdas", self.rank(), self.order);
        for l in &self.lambdas {
            out.push(' ');
            out.push_str(&fmt_scalar(l));
        }
        out.push('\n');
        for (j, sj) in self.s.iter().enumerate() {
            out.push_str(&format!("S {} {}\n", j + 1, sj.to_sparse()));
        }
        out
    }
}

impl fmt::Display for FrescoPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Free module of rank `k` over `ℚ[[b]]` with `a·v = A·v + b²·v'`.
///
/// Column `j` of `A` holds the coordinates of `a·e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbModule {
    a: SMat,
}

impl AbModule {
    pub fn new(a: SMat) -> Result<Self> {
        let k = a.len();
        if a.iter().any(|row| row.len() != k) {
            return Err(FrescoError::InvalidPresentation("matrix of a must be square".into()));
        }
        let order = smat_order(&a);
        Ok(AbModule {
            a: a.into_iter().map(|r| svec_truncate(&r, order)).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn order(&self) -> usize {
        smat_order(&self.a)
    }

    pub fn a_matrix(&self) -> &SMat {
        &self.a
    }

    /// Matrix of `b`, always `b·Id`.
    pub fn b_matrix(&self) -> SMat {
        let k = self.rank();
        let n = self.order();
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            TruncSeries::monomial(1, Scalar::one(), n)
                        } else {
                            TruncSeries::zero(n)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        AbModule {
            a: self.a.iter().map(|r| svec_truncate(r, order)).collect(),
        }
    }

    /// `a·v`.
    pub fn apply_a(&self, v: &[TruncSeries]) -> SVec {
        self.apply_a_affine(v, &Scalar::zero(), None)
    }

    /// `b·v`; the order grows by one.
    pub fn apply_b(&self, v: &[TruncSeries]) -> SVec {
        v.iter().map(|x| x.shift_up(1)).collect()
    }

    /// `(a − c·b)·v`.
    pub fn apply_a_minus(&self, c: &Scalar, v: &[TruncSeries]) -> SVec {
        self.apply_a_affine(v, &-c, None)
    }

    /// `(a + c·b)·v + t·y` in one pass.
    pub(crate) fn apply_a_affine(&self, v: &[TruncSeries], c: &Scalar, extra: Option<(&Scalar, &[TruncSeries])>) -> SVec {
        let order = smat_order(&self.a).min(svec_order(v));
        let one = Scalar::one();
        (0..self.rank())
            .map(|r| {
                let mut acc = SeriesAccumulator::new(order);
                for (x, y) in self.a[r].iter().zip(v) {
                    acc.add_product(x, y);
                }
                acc.add_scaled(&one, &v[r].derive(), 2);
                acc.add_scaled(c, &v[r], 1);
                if let Some((t, y)) = extra {
                    acc.add_scaled(t, &y[r], 0);
                }
                acc.finish()
            })
            .collect()
    }

    /// Action of an element of Â, term by term (`a^i b^ν` applies `b^ν` first).
    pub fn apply_element(&self, x: &AhatElement, v: &[TruncSeries]) -> SVec {
        let order = svec_order(v).min(self.order()).min(x.order());
        let v = svec_truncate(v, order);
        let max_i = x.terms().map(|(&(i, _), _)| i).max().unwrap_or(0);
        let mut out = vec![TruncSeries::zero(order); self.rank()];
        for i in 0..=max_i {
            // Σ_ν c_{iν}·b^ν·v, then a^i.
            let mut w = vec![TruncSeries::zero(order); self.rank()];
            for (&(ii, nu), c) in x.terms() {
                if ii == i {
                    for (wj, vj) in w.iter_mut().zip(&v) {
                        *wj = &*wj + &vj.shift_up(nu).scale(c);
                    }
                }
            }
            for _ in 0..i {
                w = self.apply_a(&w);
            }
            out = out.iter().zip(&w).map(|(o, x)| o + x).collect();
        }
        out
    }
}

/// A module with a chosen generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fresco {
    pub module: AbModule,
    pub generator: SVec,
}

impl Fresco {
    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn order(&self) -> usize {
        self.module.order().min(svec_order(&self.generator))
    }

    pub fn truncate(&self, order: usize) -> Self {
        Fresco {
            module: self.module.truncate(order),
            generator: svec_truncate(&self.generator, order),
        }
    }
}

/// `ℚ[[b]]`-submodule given by generators in the ambient basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    pub generators: Vec<SVec>,
    pub normal: bool,
}

impl Submodule {
    /// Records whether the generators stay independent modulo `b`.
    pub fn new(generators: Vec<SVec>) -> Self {
        let normal = generators.is_empty() || {
            let c: QMat = generators.iter().map(|g| crate::linalg::svec_coeff(g, 0)).collect();
            q_rank(&c) == generators.len()
        };
        Submodule { generators, normal }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

/// Standard realization: `a·e_j = λ_j·b·e_j + S_{j−1}·e_{j−1}`, generator `S_k·e_k`.
pub fn realize(pres: &FrescoPresentation) -> Fresco {
    let k = pres.rank();
    let n = pres.order();
    let mut a = vec![vec![TruncSeries::zero(n); k]; k];
    for j in 0..k {
        a[j][j] = TruncSeries::monomial(1, pres.lambdas[j].clone(), n);
        if j > 0 {
            a[j - 1][j] = pres.s[j - 1].clone();
        }
    }
    let mut generator = svec_unit(k, k - 1, n);
    generator[k - 1] = pres.s[k - 1].clone();
    Fresco {
        module: AbModule { a },
        generator,
    }
}

/// `(a − λ_1 b)(a − λ_2 b)⋯(a − λ_k b)` in canonical form.
pub fn bernstein_element(pres: &FrescoPresentation) -> AhatElement {
    bernstein_element_of(pres.lambdas(), pres.order())
}

pub fn bernstein_element_of(lambdas: &[Scalar], order: usize) -> AhatElement {
    let a = AhatElement::a(order);
    let b = AhatElement::b(order);
    lambdas
        .iter()
        .fold(AhatElement::one(order), |acc, l| &acc * &(&a - &b.scale(l)))
}

/// `(a−λ_1 b)S_1⁻¹ ⋯ (a−λ_k b)S_k⁻¹ · v`, applied right to left.
pub fn apply_presentation(module: &AbModule, pres: &FrescoPresentation, v: &[TruncSeries]) -> Result<SVec> {
    apply_factors(module, pres.lambdas(), pres.series(), v)
}

pub(crate) fn apply_factors(
    module: &AbModule,
    lambdas: &[Scalar],
    s: &[TruncSeries],
    v: &[TruncSeries],
) -> Result<SVec> {
    let inverses = s.iter().map(TruncSeries::invert).collect::<Result<Vec<_>>>()?;
    Ok(apply_factors_inv(module, lambdas, &inverses, v))
}

/// As [`apply_factors`] with the inverses `S_j⁻¹` supplied.
pub(crate) fn apply_factors_inv(module: &AbModule, lambdas: &[Scalar], s_inv: &[TruncSeries], v: &[TruncSeries]) -> SVec {
    let mut w: SVec = v.to_vec();
    for (l, inv) in lambdas.iter().zip(s_inv).rev() {
        w = w.iter().map(|x| x * inv).collect();
        w = module.apply_a_minus(l, &w);
    }
    w
}

/// Module, generator image and new basis after passing to `E/F`.
///
/// The new ambient basis is `[F | e_i for non-pivot i]`, pivots taken from
/// the constant terms of the generators of `F`.
pub fn quotient(fr: &Fresco, sub: &Submodule) -> Result<Fresco> {
    let (full, r) = adapted_basis(&fr.module, sub)?;
    let k = fr.rank();
    let gen = smat_solve(&full.1, &[fr.generator.clone()])?.remove(0);
    let a: SMat = (r..k).map(|i| (r..k).map(|j| full.0[i][j].clone()).collect()).collect();
    Ok(Fresco {
        module: AbModule::new(a)?,
        generator: gen[r..].to_vec(),
    })
}

/// Restriction of `a` to a normal submodule, in the basis of its generators.
pub fn submodule_action(module: &AbModule, sub: &Submodule) -> Result<AbModule> {
    let (full, r) = adapted_basis(module, sub)?;
    AbModule::new((0..r).map(|i| (0..r).map(|j| full.0[i][j].clone()).collect()).collect())
}

/// Matrix of `a` in the basis `[F | complement]` and that basis; checks `a·F ⊂ F`.
fn adapted_basis(module: &AbModule, sub: &Submodule) -> Result<((SMat, SMat), usize)> {
    let k = module.rank();
    let r = sub.rank();
    let c0: QMat = sub.generators.iter().map(|g| crate::linalg::svec_coeff(g, 0)).collect();
    let mut red = c0.clone();
    let pivots = q_rref(&mut red);
    if pivots.len() < r {
        return Err(FrescoError::NotNormal("generators are dependent modulo b".into()));
    }
    let order = sub
        .generators
        .iter()
        .map(|g| svec_order(g))
        .min()
        .unwrap_or(usize::MAX)
        .min(module.order());
    let mut cols: Vec<SVec> = sub.generators.iter().map(|g| svec_truncate(g, order)).collect();
    cols.extend((0..k).filter(|i| !pivots.contains(i)).map(|i| svec_unit(k, i, order)));
    let basis = smat_from_columns(&cols);
    let images: Vec<SVec> = cols.iter().map(|c| module.apply_a(c)).collect();
    let coords = smat_solve(&basis, &images)?;
    let x = smat_from_columns(&coords);
    for i in r..k {
        for j in 0..r {
            if !x[i][j].is_zero() {
                return Err(FrescoError::NotNormal("submodule is not stable under a".into()));
            }
        }
    }
    Ok(((x, basis), r))
}

/// `F_j = span(e_1 … e_j)` in the standard basis.
pub fn jh_submodule(k: usize, j: usize, order: usize) -> Submodule {
    Submodule::new((0..j).map(|i| svec_unit(k, i, order)).collect())
}

/// Prefix presentation `E[Λ]` for the smallest classes `cls` (representatives
/// are normalised to `(0, 1]`); the last series of the prefix is `1`.
pub fn primitive_part(pres: &FrescoPresentation, cls: &[Scalar]) -> Result<FrescoPresentation> {
    let mut present: Vec<Scalar> = Vec::new();
    for l in pres.lambdas() {
        let r = class_rep(l);
        if present.last() != Some(&r) {
            present.push(r);
        }
    }
    let wanted: BTreeSet<Scalar> = cls.iter().map(class_rep).collect();
    let wanted: Vec<Scalar> = wanted.into_iter().collect();
    if wanted.is_empty() || wanted.len() > present.len() || present[..wanted.len()] != wanted[..] {
        return Err(FrescoError::ClassNotSmallest);
    }
    let m = pres.lambdas().iter().filter(|l| wanted.contains(&class_rep(l))).count();
    let mut s: Vec<TruncSeries> = pres.series()[..m].to_vec();
    s[m - 1] = TruncSeries::one(pres.order());
    FrescoPresentation::new(pres.lambdas()[..m].to_vec(), s, pres.order())
}

/// Largest `ν` with `v ∈ Φ_ν = b^n F_{k−h} + b^{n+1} E` (`ν = nk + h`) for a
/// vector in the standard basis; `None` for the zero vector.
pub fn sharp_filtration_index(v: &[TruncSeries]) -> Option<usize> {
    let k = v.len();
    v.iter()
        .enumerate()
        .filter_map(|(j, x)| x.valuation().map(|val| val * k + (k - 1 - j)))
        .min()
}
