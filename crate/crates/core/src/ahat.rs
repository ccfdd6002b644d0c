//! The algebra Â of series `Σ P_ν(a)·b^ν` with `a·b − b·a = b²`.
//!
//! Elements are kept in a-left canonical form `Σ c·a^i·b^ν` and truncated by
//! total degree `i + ν ≤ N`. The commutation relation is homogeneous for the
//! total degree, so truncated products are exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{FrescoError, Result};
use crate::series::{int, push_term, Scalar, TruncSeries};

/// `x (x+1) ⋯ (x+n−1)`.
pub fn rising(x: &Scalar, n: usize) -> Scalar {
    (0..n).fold(Scalar::one(), |acc, i| acc * (x + int(i as i64)))
}

fn binomial(n: usize, k: usize) -> Scalar {
    (0..k).fold(Scalar::one(), |acc, i| acc * int((n - i) as i64) / int((i + 1) as i64))
}

/// Coefficients of `b^ν·a^j = Σ_l c_l·a^l·b^{ν+j−l}`, indexed by `l`.
pub fn b_pow_a_pow(nu: usize, j: usize) -> Vec<Scalar> {
    let nu = int(nu as i64);
    (0..=j)
        .map(|l| {
            let c = binomial(j, l) * rising(&nu, j - l);
            if (j - l) % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

/// Coefficients of `a^i·b^ν = Σ_l c_l·b^{ν+i−l}·a^l`, indexed by `l`.
pub fn a_pow_b_pow(i: usize, nu: usize) -> Vec<Scalar> {
    let nu = int(nu as i64);
    (0..=i).map(|l| binomial(i, l) * rising(&nu, i - l)).collect()
}

/// Truncated element of Â in a-left canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AhatElement {
    order: usize,
    terms: BTreeMap<(usize, usize), Scalar>,
}

impl AhatElement {
    pub fn zero(order: usize) -> Self {
        AhatElement {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, 0, Scalar::one(), order)
    }

    pub fn scalar(c: Scalar, order: usize) -> Self {
        Self::monomial(0, 0, c, order)
    }

    pub fn a(order: usize) -> Self {
        Self::monomial(1, 0, Scalar::one(), order)
    }

    pub fn b(order: usize) -> Self {
        Self::monomial(0, 1, Scalar::one(), order)
    }

    /// `c·a^i·b^ν`, dropped if beyond the order.
    pub fn monomial(i: usize, nu: usize, c: Scalar, order: usize) -> Self {
        let mut x = Self::zero(order);
        x.add_term(i, nu, c);
        x
    }

    /// `Σ s_ν·b^ν`; known up to the smaller of the two orders.
    pub fn from_b_series(s: &TruncSeries, order: usize) -> Self {
        let order = order.min(s.order());
        let mut x = Self::zero(order);
        for (nu, c) in s.coeffs().iter().enumerate().take(order + 1) {
            x.add_term(0, nu, c.clone());
        }
        x
    }

    /// `Σ s_i·a^i`; known up to the smaller of the two orders.
    pub fn from_a_series(s: &TruncSeries, order: usize) -> Self {
        let order = order.min(s.order());
        let mut x = Self::zero(order);
        for (i, c) in s.coeffs().iter().enumerate().take(order + 1) {
            x.add_term(i, 0, c.clone());
        }
        x
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Nonzero terms `((i, ν), c)` for `c·a^i·b^ν`.
    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: usize, nu: usize) -> Scalar {
        self.terms.get(&(i, nu)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of `a`, `None` for zero.
    pub fn a_degree(&self) -> Option<usize> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        AhatElement {
            order,
            terms: self
                .terms
                .iter()
                .filter(|(&(i, nu), _)| i + nu <= order)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, i: usize, nu: usize, c: Scalar) {
        if i + nu > self.order || c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, nu)).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, nu));
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.order);
        for (&(i, nu), x) in &self.terms {
            out.add_term(i, nu, x * c);
        }
        out
    }

    /// `x·y − y·x`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// b-left form `Σ_n u_n(b)·a^n`, as series indexed by the power of `a`.
    pub fn to_b_left(&self) -> Vec<TruncSeries> {
        let n = self.order;
        let mut out = vec![TruncSeries::zero(n); n + 1];
        for (&(i, nu), c) in &self.terms {
            for (l, w) in a_pow_b_pow(i, nu).into_iter().enumerate() {
                let e = nu + i - l;
                if e <= n {
                    let cur = out[l].coeff(e) + c * w;
                    out[l].set(e, cur);
                }
            }
        }
        out
    }

    /// Inverse of [`AhatElement::to_b_left`]: `Σ_n u_n(b)·a^n` in canonical form.
    pub fn from_b_left(parts: &[TruncSeries], order: usize) -> Self {
        let mut out = Self::zero(order);
        for (j, u) in parts.iter().enumerate() {
            for (nu, c) in u.coeffs().iter().enumerate() {
                if c.is_zero() || nu + j > order {
                    continue;
                }
                for (l, w) in b_pow_a_pow(nu, j).into_iter().enumerate() {
                    out.add_term(l, nu + j - l, c * w);
                }
            }
        }
        out
    }

    /// Stable rendering: terms by total degree, then decreasing power of `a`.
    pub fn render(&self) -> String {
        let mut keys: Vec<&(usize, usize)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(i, nu)| (i + nu, std::cmp::Reverse(i)));
        let mut out = String::new();
        for &(i, nu) in keys {
            let mut factors = Vec::new();
            match i {
                0 => {}
                1 => factors.push("a".to_string()),
                _ => factors.push(format!("a^{i}")),
            }
            match nu {
                0 => {}
                1 => factors.push("b".to_string()),
                _ => factors.push(format!("b^{nu}")),
            }
            push_term(&mut out, &self.terms[&(i, nu)], &factors.join("·"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for AhatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &AhatElement {
    type Output = AhatElement;
    fn add(self, rhs: &AhatElement) -> AhatElement {
        let mut out = self.truncate(self.order.min(rhs.order));
        for (&(i, nu), c) in &rhs.terms {
            out.add_term(i, nu, c.clone());
        }
        out
    }
}

impl Sub for &AhatElement {
    type Output = AhatElement;
    fn sub(self, rhs: &AhatElement) -> AhatElement {
        self + &(-rhs)
    }
}

impl Neg for &AhatElement {
    type Output = AhatElement;
    fn neg(self) -> AhatElement {
        self.scale(&int(-1))
    }
}

impl Mul for &AhatElement {
    type Output = AhatElement;
    fn mul(self, rhs: &AhatElement) -> AhatElement {
        let order = self.order.min(rhs.order);
        let mut out = AhatElement::zero(order);
        for (&(i, nu), x) in &self.terms {
            for (&(j, mu), y) in &rhs.terms {
                if i + nu + j + mu > order {
                    continue;
                }
                let xy = x * y;
                // a^i (b^ν a^j) b^μ
                for (l, w) in b_pow_a_pow(nu, j).into_iter().enumerate() {
                    out.add_term(i + l, nu + j - l + mu, &xy * w);
                }
            }
        }
        out
    }
}

impl Add for AhatElement {
    type Output = AhatElement;
    fn add(self, rhs: AhatElement) -> AhatElement {
        &self + &rhs
    }
}

impl Sub for AhatElement {
    type Output = AhatElement;
    fn sub(self, rhs: AhatElement) -> AhatElement {
        &self - &rhs
    }
}

impl Mul for AhatElement {
    type Output = AhatElement;
    fn mul(self, rhs: AhatElement) -> AhatElement {
        &self * &rhs
    }
}

impl Neg for AhatElement {
    type Output = AhatElement;
    fn neg(self) -> AhatElement {
        -&self
    }
}

/// Polynomial change of variable `θ(a) = Σ θ_m·a^m` with `θ(0) = 0`, `θ'(0) ≠ 0`.
///
/// The stored coefficients are exact: terms above the stored order are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangeOfVariable {
    theta: TruncSeries,
}

impl ChangeOfVariable {
    pub fn new(theta: TruncSeries) -> Result<Self> {
        if theta.order() == 0 {
            return Err(FrescoError::InvalidChangeOfVariable("θ needs a linear term".into()));
        }
        if !theta.coeff(0).is_zero() {
            return Err(FrescoError::InvalidChangeOfVariable("θ(0) must be 0".into()));
        }
        if theta.coeff(1).is_zero() {
            return Err(FrescoError::InvalidChangeOfVariable("θ'(0) must be nonzero".into()));
        }
        let degree = theta
            .coeffs()
            .iter()
            .rposition(|c| !c.is_zero())
            .expect("linear term is nonzero");
        Ok(ChangeOfVariable {
            theta: theta.truncate(degree),
        })
    }

    /// `θ` from `(exponent, coefficient)` pairs.
    pub fn from_terms(terms: &[(usize, Scalar)]) -> Result<Self> {
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(1).max(1);
        let mut s = TruncSeries::zero(deg);
        for (e, c) in terms {
            let cur = s.coeff(*e) + c;
            s.set(*e, cur);
        }
        Self::new(s)
    }

    pub fn identity() -> Self {
        Self::scaling(Scalar::one())
    }

    /// `θ(a) = ξ·a`.
    pub fn scaling(xi: Scalar) -> Self {
        Self::from_terms(&[(1, xi)]).expect("nonzero scaling")
    }

    /// `θ(a) = a + τ·a²`.
    pub fn quadratic(tau: Scalar) -> Self {
        Self::from_terms(&[(1, Scalar::one()), (2, tau)]).expect("unimodular")
    }

    /// Coefficient of `a^m`.
    pub fn coeff(&self, m: usize) -> Scalar {
        self.theta.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn degree(&self) -> usize {
        self.theta.order()
    }

    /// `χ(θ) = θ'(0)`.
    pub fn chi(&self) -> Scalar {
        self.theta.coeff(1).clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.chi().is_one()
    }

    /// `θ` as a series of the given order (padded or truncated).
    pub fn theta_at(&self, order: usize) -> TruncSeries {
        self.theta.padded(order)
    }

    /// `θ'` as a series of the given order.
    pub fn derivative_at(&self, order: usize) -> TruncSeries {
        self.theta.derive().padded(order)
    }

    /// `self ∘ inner`, exact.
    pub fn compose(&self, inner: &ChangeOfVariable) -> ChangeOfVariable {
        let deg = self.degree() * inner.degree();
        let outer = self.theta.padded(deg);
        let inner = inner.theta.padded(deg);
        Self::new(outer.compose(&inner).expect("inner vanishes at 0")).expect("composite is a change of variable")
    }

    /// Compositional inverse truncated at degree `order`.
    pub fn inverse(&self, order: usize) -> ChangeOfVariable {
        let rev = self
            .theta
            .padded(order.max(1))
            .reversion()
            .expect("change of variable is invertible");
        Self::new(rev).expect("inverse is a change of variable")
    }

    /// Splits `θ = (χ·a) ∘ φ` with `φ = θ/χ` unimodular; returns `(χ, φ)`.
    pub fn factor_scaling(&self) -> (Scalar, ChangeOfVariable) {
        let chi = self.chi();
        let phi = Self::new(self.theta.scale(&chi.recip())).expect("unimodular part");
        (chi, phi)
    }

    /// `theta e:c …` line body.
    pub fn to_sparse(&self) -> String {
        self.theta.to_sparse()
    }
}

impl fmt::Display for ChangeOfVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (e, c) in self.theta.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = if e == 1 { "a".to_string() } else { format!("a^{e}") };
            push_term(&mut out, c, &mono);
        }
        f.write_str(&out)
    }
}

/// `Θ`: `a ↦ θ(a)`, `b ↦ b·θ'(a)`, a ring morphism of Â.
pub fn theta_morphism(cv: &ChangeOfVariable, x: &AhatElement) -> AhatElement {
    let n = x.order();
    let alpha = AhatElement::from_a_series(&cv.theta_at(n), n);
    let beta = &AhatElement::b(n) * &AhatElement::from_a_series(&cv.derivative_at(n), n);
    let max_i = x.terms.keys().map(|k| k.0).max().unwrap_or(0);
    let max_nu = x.terms.keys().map(|k| k.1).max().unwrap_or(0);
    let mut alpha_pow = vec![AhatElement::one(n)];
    for _ in 0..max_i {
        alpha_pow.push(alpha_pow.last().expect("nonempty") * &alpha);
    }
    let mut beta_pow = vec![AhatElement::one(n)];
    for _ in 0..max_nu {
        beta_pow.push(beta_pow.last().expect("nonempty") * &beta);
    }
    let mut out = AhatElement::zero(n);
    for (&(i, nu), c) in &x.terms {
        out = &out + &(&alpha_pow[i] * &beta_pow[nu]).scale(c);
    }
    out
}

/// `η`: the anti-automorphism with `η(a) = a`, `η(b) = −b`.
pub fn eta_morphism(x: &AhatElement) -> AhatElement {
    let n = x.order();
    let mut out = AhatElement::zero(n);
    for (&(i, nu), c) in &x.terms {
        let sign = if nu % 2 == 1 { -c.clone() } else { c.clone() };
        let reversed = &AhatElement::monomial(0, nu, sign, n) * &AhatElement::monomial(i, 0, Scalar::one(), n);
        out = &out + &reversed;
    }
    out
}

/// Monic annihilator `P = a^k − Σ_{j<k} T_j(b)·a^j` (coefficients on the left).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicAnnihilator {
    t: Vec<TruncSeries>,
}

impl MonicAnnihilator {
    /// Checks the fresco shape `val(T_j) ≥ k − j`.
    pub fn new(t: Vec<TruncSeries>) -> Result<Self> {
        let k = t.len();
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
        Ok(MonicAnnihilator { t })
    }

    pub fn rank(&self) -> usize {
        self.t.len()
    }

    pub fn coefficients(&self) -> &[TruncSeries] {
        &self.t
    }

    /// `P` in canonical form, at most at the order of its coefficients.
    pub fn to_element(&self, order: usize) -> AhatElement {
        let order = self.t.iter().map(TruncSeries::order).fold(order, usize::min);
        let mut parts: Vec<TruncSeries> = self.t.iter().map(|s| -s.truncate(order)).collect();
        parts.push(TruncSeries::one(order));
        AhatElement::from_b_left(&parts, order)
    }
}

/// Remainder of `u` modulo the left ideal `Â·P`: returns `v` of a-degree
/// below `k` with `u − v ∈ Â·P`, at the smaller of the orders of `u` and `P`.
///
/// Works in b-left form: `a^n ≡ R_n = Σ_{j<k} R_{n,j}(b)·a^j` with
/// `R_k = Σ T_j·a^j` and `R_{n+1}` from `a·r(b)·a^j = r·a^{j+1} + b²·r'·a^j`.
pub fn reduce_mod_annihilator(u: &AhatElement, p: &MonicAnnihilator) -> AhatElement {
    let k = p.rank();
    let n = p.t.iter().map(TruncSeries::order).fold(u.order(), usize::min);
    let parts = u.truncate(n).to_b_left();
    let t: Vec<TruncSeries> = p.t.iter().map(|s| s.truncate(n)).collect();
    let mut v: Vec<TruncSeries> = (0..k)
        .map(|j| parts.get(j).cloned().unwrap_or_else(|| TruncSeries::zero(n)))
        .collect();
    let mut r = t.clone();
    for un in parts.iter().skip(k) {
        if !un.is_zero() {
            for (vj, rj) in v.iter_mut().zip(&r) {
                *vj = &*vj + &(un * rj);
            }
        }
        // r ← a·r
        let top = r[k - 1].clone();
        let mut next: Vec<TruncSeries> = (0..k)
            .map(|j| r[j].derive().shift_up(2).truncate(n))
            .collect();
        for j in 1..k {
            next[j] = &next[j] + &r[j - 1];
        }
        for (nj, tj) in next.iter_mut().zip(&t) {
            *nj = &*nj + &(&top * tj);
        }
        r = next;
    }
    AhatElement::from_b_left(&v, n)
}
