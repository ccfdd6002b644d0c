//! Exact truncated power series in one variable over the rationals.
//!
//! A [`TruncSeries`] of order `N` stores the coefficients of `x^0 … x^N`.
//! Binary operations return the smaller of the two orders; nothing is ever
//! re-extended implicitly, use [`TruncSeries::padded`] to declare that the
//! missing coefficients are zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{FrescoError, Result};

/// Exact rational number; the coefficient field of every computation.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn rat(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || FrescoError::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(FrescoError::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Scalar::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Scalar::from_integer(p))
        }
    }
}

/// Renders `p/q`, or `p` for integers.
pub fn fmt_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `Some(n)` when `x` is the non-negative integer `n`.
pub fn as_nonneg_integer(x: &Scalar) -> Option<usize> {
    if x.is_integer() && !x.is_negative() {
        x.numer().to_usize()
    } else {
        None
    }
}

/// `Some(n)` when `x` is an integer.
pub fn as_integer(x: &Scalar) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

/// Formal power series truncated at a fixed order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    coeffs: Vec<Scalar>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![Scalar::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Scalar::one(), order)
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c·x^e`, or zero when `e` exceeds the order.
    pub fn monomial(e: usize, c: Scalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        if e <= order {
            s.coeffs[e] = c;
        }
        s
    }

    /// Takes ownership of `coeffs`; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        TruncSeries { coeffs }
    }

    /// Series whose first coefficients are `coeffs` and the rest zero, at `order`.
    pub fn from_slice(coeffs: &[Scalar], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (i, c) in coeffs.iter().enumerate().take(order + 1) {
            s.coeffs[i] = c.clone();
        }
        s
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        let v: Vec<Scalar> = coeffs.iter().map(|&c| int(c)).collect();
        Self::from_slice(&v, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^i`. Panics beyond the order.
    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.coeffs.get(i)
    }

    pub fn set(&mut self, i: usize, c: Scalar) {
        self.coeffs[i] = c;
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Equal to `1` at this order.
    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` if zero at this order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Drops coefficients above `order` (no-op if already shorter).
    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        TruncSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    /// Declares every coefficient above the current order to be zero.
    pub fn padded(&self, order: usize) -> Self {
        Self::from_slice(&self.coeffs, order)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|x| mul_q(x, c)).collect(),
        }
    }

    /// `x^s · self`; the order grows by `s` because the product is known further.
    pub fn shift_up(&self, s: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); s];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncSeries { coeffs }
    }

    /// `self / x^s`, requiring valuation at least `s`; the order drops by `s`.
    pub fn shift_down(&self, s: usize) -> Result<Self> {
        if s > self.order() {
            return Err(FrescoError::OrderTooSmall {
                needed: s,
                have: self.order(),
                what: format!("division by x^{s}"),
            });
        }
        if self.coeffs[..s].iter().any(|c| !c.is_zero()) {
            return Err(FrescoError::UnsupportedShape(format!(
                "series not divisible by x^{s}"
            )));
        }
        Ok(TruncSeries {
            coeffs: self.coeffs[s..].to_vec(),
        })
    }

    /// Multiplicative inverse at the same order.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(FrescoError::NotAUnit);
        }
        let n = self.order();
        let c0inv = self.coeffs[0].recip();
        let mut out: Vec<Scalar> = Vec::with_capacity(n + 1);
        out.push(c0inv.clone());
        for i in 1..=n {
            let acc = dot((1..=i).map(|j| (&self.coeffs[j], &out[i - j])));
            out.push(-mul_q(&acc, &c0inv));
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// Formal derivative, order `N - 1` (zero of order 0 for a constant).
    pub fn derive(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        TruncSeries {
            coeffs: (1..=n).map(|i| mul_q(&self.coeffs[i], &int(i as i64))).collect(),
        }
    }

    /// Solves `x·Y' − m·Y = R` coefficientwise, `(i − m)·y_i = r_i`.
    ///
    /// When `m` is a non-negative integer within the order the free
    /// coefficient `y_m` is set to zero, and `r_m` must vanish.
    pub fn solve_euler(m: &Scalar, r: &TruncSeries) -> Result<TruncSeries> {
        let mut y = Vec::with_capacity(r.order() + 1);
        for (i, ri) in r.coeffs.iter().enumerate() {
            let d = int(i as i64) - m;
            if d.is_zero() {
                if !ri.is_zero() {
                    return Err(FrescoError::Obstruction {
                        m: i,
                        coeff: ri.clone(),
                        context: format!("b·Y' - {}·Y = R", fmt_scalar(m)),
                    });
                }
                y.push(Scalar::zero());
            } else {
                y.push(ri / d);
            }
        }
        Ok(TruncSeries { coeffs: y })
    }

    /// `self(inner(x))` for `inner(0) = 0`, at the smaller order.
    pub fn compose(&self, inner: &TruncSeries) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(FrescoError::UnsupportedShape(
                "inner series of a composition must vanish at 0".into(),
            ));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::zero(n);
        for c in self.coeffs[..=n].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Compositional inverse of a series with `f(0) = 0`, `f'(0) ≠ 0`, by
    /// Lagrange inversion: `[x^n] g = (1/n)·[w^{n-1}] (w/f(w))^n`.
    pub fn reversion(&self) -> Result<Self> {
        let n = self.order();
        if !self.coeffs[0].is_zero() || n == 0 || self.coeffs[1].is_zero() {
            return Err(FrescoError::UnsupportedShape(
                "reversion needs f(0) = 0 and f'(0) ≠ 0".into(),
            ));
        }
        // f(w)/w, then its inverse w/f(w), known to order n - 1.
        let quotient = self.shift_down(1)?;
        let h = quotient.invert()?;
        let mut out = Self::zero(n);
        let mut power = Self::one(n - 1);
        for k in 1..=n {
            power = &power * &h;
            out.coeffs[k] = power.coeffs[k - 1].clone() / int(k as i64);
        }
        Ok(out)
    }

    /// Sparse rendering `e:c …`, nonzero terms only (`0:0` for zero).
    pub fn to_sparse(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| format!("{e}:{}", fmt_scalar(c)))
            .collect();
        if parts.is_empty() {
            "0:0".to_string()
        } else {
            parts.join(" ")
        }
    }

    /// Parses `e:c` tokens into a series of the given order; omitted exponents are zero.
    pub fn parse_sparse<'a, I: IntoIterator<Item = &'a str>>(tokens: I, order: usize) -> Result<Self> {
        let mut s = Self::zero(order);
        for tok in tokens {
            let (e, c) = tok
                .split_once(':')
                .ok_or_else(|| FrescoError::Parse(format!("expected exponent:coefficient, got {tok:?}")))?;
            let e: usize = e
                .trim()
                .parse()
                .map_err(|_| FrescoError::Parse(format!("bad exponent in {tok:?}")))?;
            let c = parse_scalar(c)?;
            if e > order {
                if c.is_zero() {
                    continue;
                }
                return Err(FrescoError::Parse(format!(
                    "exponent {e} exceeds order {order}"
                )));
            }
            s.coeffs[e] += c;
        }
        Ok(s)
    }

    /// Human-readable rendering in the variable `var`, e.g. `1 + 3/2·b^2 + O(b^5)`.
    pub fn display_in(&self, var: &str) -> String {
        let mut out = String::new();
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            push_term(&mut out, c, &mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        out.push_str(&format!(" + O({var}^{})", self.order() + 1));
        out
    }
}

/// Appends `± |c|·mono` to a sum being rendered.
pub(crate) fn push_term(out: &mut String, c: &Scalar, mono: &str) {
    let neg = c.is_negative();
    let abs = c.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if mono.is_empty() {
        out.push_str(&fmt_scalar(&abs));
    } else if abs.is_one() {
        out.push_str(mono);
    } else {
        out.push_str(&fmt_scalar(&abs));
        out.push('·');
        out.push_str(mono);
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("b"))
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let n = self.order().min(rhs.order());
        TruncSeries {
            coeffs: (0..=n).map(|i| add_q(&self.coeffs[i], &rhs.coeffs[i])).collect(),
        }
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        let n = self.order().min(rhs.order());
        TruncSeries {
            coeffs: (0..=n).map(|i| add_q(&self.coeffs[i], &-&rhs.coeffs[i])).collect(),
        }
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Greatest common divisor, taking Euclidean remainders while the operands
/// differ much in size (the binary algorithm is slow in that regime).
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    loop {
        if a < b {
            std::mem::swap(&mut a, &mut b);
        }
        if b.is_zero() {
            return a;
        }
        if let (Some(x), Some(y)) = (a.to_u64(), b.to_u64()) {
            return BigInt::from(x.gcd(&y));
        }
        if a.bits() > b.bits() + 16 || b.bits() <= 64 {
            a %= &b;
        } else {
            return a.gcd(&b);
        }
    }
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_one() {
        return b.clone();
    }
    if b.is_one() {
        return a.clone();
    }
    a / gcd(a, b) * b
}

/// `num/den` in lowest terms, `den ≠ 0`.
pub fn ratio(num: BigInt, den: BigInt) -> Scalar {
    if num.is_zero() {
        return Scalar::zero();
    }
    let g = gcd(&num, &den);
    let (mut n, mut d) = if g.is_one() { (num, den) } else { (num / &g, den / &g) };
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    Scalar::new_raw(n, d)
}

/// Sum of two reduced rationals.
pub fn add_q(x: &Scalar, y: &Scalar) -> Scalar {
    if x.is_zero() {
        return y.clone();
    }
    if y.is_zero() {
        return x.clone();
    }
    if x.denom() == y.denom() {
        return ratio(x.numer() + y.numer(), x.denom().clone());
    }
    let g = gcd(x.denom(), y.denom());
    let (dx, dy) = (x.denom() / &g, y.denom() / &g);
    ratio(x.numer() * &dy + y.numer() * &dx, dx * y.denom())
}

/// Product of two reduced rationals by cross-cancellation.
pub fn mul_q(x: &Scalar, y: &Scalar) -> Scalar {
    if x.is_zero() || y.is_zero() {
        return Scalar::zero();
    }
    let g1 = gcd(x.numer(), y.denom());
    let g2 = gcd(y.numer(), x.denom());
    Scalar::new_raw(
        (x.numer() / &g1) * (y.numer() / &g2),
        (x.denom() / &g2) * (y.denom() / &g1),
    )
}

/// `Σ x·y` with a single normalization at the end.
pub fn dot<'a>(terms: impl IntoIterator<Item = (&'a Scalar, &'a Scalar)>) -> Scalar {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (x, y) in terms {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let d = x.denom() * y.denom();
        let g = gcd(&den, &d);
        let (da, db) = (&d / &g, &den / &g);
        num = num * &da + x.numer() * y.numer() * db;
        den *= da;
    }
    ratio(num, den)
}

/// Integer numerators over a common denominator.
fn over_common_denominator(c: &[Scalar]) -> (Vec<BigInt>, BigInt) {
    let den = c
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| lcm(&acc, x.denom()));
    let nums = c.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (nums, den)
}

/// Sum of products and scaled shifts of series, kept as integers over one
/// denominator and normalized once by [`SeriesAccumulator::finish`].
pub struct SeriesAccumulator {
    num: Vec<BigInt>,
    den: BigInt,
    order: usize,
}

impl SeriesAccumulator {
    pub fn new(order: usize) -> Self {
        SeriesAccumulator {
            num: vec![BigInt::zero(); order + 1],
            den: BigInt::one(),
            order,
        }
    }

    /// Brings the accumulator to a denominator divisible by `d`; returns the
    /// factor by which terms over `d` must be multiplied.
    fn align(&mut self, d: &BigInt) -> BigInt {
        let g = gcd(&self.den, d);
        let up = d / &g;
        if !up.is_one() {
            for c in self.num.iter_mut().filter(|c| !c.is_zero()) {
                *c *= &up;
            }
            self.den *= &up;
        }
        &self.den / d
    }

    fn lower_order(&mut self, n: usize) {
        if n < self.order {
            self.order = n;
            self.num.truncate(n + 1);
        }
    }

    /// Adds `x·y`.
    pub fn add_product(&mut self, x: &TruncSeries, y: &TruncSeries) {
        self.lower_order(x.order().min(y.order()));
        let n = self.order;
        if x.is_zero() || y.is_zero() {
            return;
        }
        let (xs, dx) = over_common_denominator(&x.coeffs[..=n]);
        let (ys, dy) = over_common_denominator(&y.coeffs[..=n]);
        let f = self.align(&(dx * dy));
        for (i, xi) in xs.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let xi = xi * &f;
            for (j, yj) in ys[..=n - i].iter().enumerate() {
                if !yj.is_zero() {
                    self.num[i + j] += &xi * yj;
                }
            }
        }
    }

    /// Adds `c·b^shift·x`; the order drops to `x.order() + shift` if smaller.
    pub fn add_scaled(&mut self, c: &Scalar, x: &TruncSeries, shift: usize) {
        self.lower_order(x.order() + shift);
        if c.is_zero() || shift > self.order {
            return;
        }
        let top = self.order - shift;
        let (xs, dx) = over_common_denominator(&x.coeffs[..=top]);
        let f = self.align(&(dx * c.denom())) * c.numer();
        for (i, xi) in xs.iter().enumerate() {
            if !xi.is_zero() {
                self.num[i + shift] += xi * &f;
            }
        }
    }

    pub fn finish(self) -> TruncSeries {
        let den = self.den;
        TruncSeries {
            coeffs: self.num.into_iter().map(|c| ratio(c, den.clone())).collect(),
        }
    }
}

/// `Σ x·y` over pairs of series, at the smallest order involved.
pub fn series_dot<'a>(pairs: impl IntoIterator<Item = (&'a TruncSeries, &'a TruncSeries)>, order: usize) -> TruncSeries {
    let mut acc = SeriesAccumulator::new(order);
    for (x, y) in pairs {
        acc.add_product(x, y);
    }
    acc.finish()
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let n = self.order().min(rhs.order());
        series_dot([(self, rhs)], n)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TruncSeries {
            type Output = TruncSeries;
            fn $m(self, rhs: TruncSeries) -> TruncSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&TruncSeries> for TruncSeries {
            type Output = TruncSeries;
            fn $m(self, rhs: &TruncSeries) -> TruncSeries {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        -&self
    }
}


#[cfg(test)]
mod arithmetic_props {
    use super::*;
    use proptest::prelude::*;

    fn big() -> impl Strategy<Value = BigInt> {
        (any::<i64>(), any::<u64>(), 0u32..3).prop_map(|(hi, lo, w)| {
            (BigInt::from(hi) << (64 * w)) + BigInt::from(lo)
        })
    }

    fn scalar() -> impl Strategy<Value = Scalar> {
        (big(), big()).prop_filter_map("nonzero denominator", |(n, d)| (!d.is_zero()).then(|| Scalar::new(n, d)))
    }

    proptest! {
        #[test]
        fn gcd_agrees_with_the_reference(a in big(), b in big()) {
            prop_assert_eq!(gcd(&a, &b), a.gcd(&b));
        }

        #[test]
        fn fast_operations_agree_with_the_reference(x in scalar(), y in scalar()) {
            prop_assert_eq!(add_q(&x, &y), &x + &y);
            prop_assert_eq!(mul_q(&x, &y), &x * &y);
            prop_assert_eq!(dot([(&x, &y), (&y, &y)]), &x * &y + &y * &y);
        }

        #[test]
        fn ratio_is_normalized(n in big(), d in big()) {
            prop_assume!(!d.is_zero());
            prop_assert_eq!(ratio(n.clone(), d.clone()), Scalar::new(n, d));
        }
    }
}
