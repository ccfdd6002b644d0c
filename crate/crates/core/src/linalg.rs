//! Exact linear algebra: rational matrices, rational polynomials, and
//! matrices of truncated series.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{FrescoError, Result};
use crate::series::{dot, gcd, int, push_term, ratio, series_dot, Scalar, TruncSeries};

/// Row-major rational matrix.
pub type QMat = Vec<Vec<Scalar>>;
/// Vector of series (coordinates in a module basis).
pub type SVec = Vec<TruncSeries>;
/// Row-major matrix of series; column `j` holds the image of basis vector `j`.
pub type SMat = Vec<Vec<TruncSeries>>;

pub fn q_zero(rows: usize, cols: usize) -> QMat {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn q_identity(n: usize) -> QMat {
    let mut m = q_zero(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

pub fn q_mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let inner = b.len();
    let mut out = q_zero(n, m);
    for i in 0..n {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

pub fn q_mat_vec(a: &QMat, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            dot(row.iter().zip(v))
        })
        .collect()
}

/// Integer multiple of a rational row, divided by the gcd of its entries.
fn primitive_row(row: &[Scalar]) -> Vec<BigInt> {
    let den = row
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| &acc / gcd(&acc, x.denom()) * x.denom());
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter().filter(|x| !x.is_zero()) {
        g = gcd(&g, x);
        if g.is_one() {
            return;
        }
    }
    if !g.is_zero() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
///
/// Elimination runs on primitive integer rows; entries are turned back into
/// rationals once at the end.
pub fn q_rref(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut z: Vec<Vec<BigInt>> = m.iter().map(|r| primitive_row(r)).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !z[i][c].is_zero()) else {
            continue;
        };
        z.swap(r, p);
        let pivot_row = std::mem::take(&mut z[r]);
        let pv = &pivot_row[c];
        for (i, row) in z.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let g = gcd(pv, &row[c]);
            let (fp, fr) = (pv / &g, &row[c] / &g);
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if y.is_zero() {
                    if !x.is_zero() {
                        *x *= &fp;
                    }
                } else {
                    *x = &*x * &fp - &fr * y;
                }
            }
            make_primitive(row);
        }
        z[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    for (i, row) in z.iter().enumerate() {
        match pivots.get(i) {
            Some(&c) => {
                let pv = row[c].clone();
                m[i] = row.iter().map(|x| ratio(x.clone(), pv.clone())).collect();
            }
            None => m[i] = vec![Scalar::zero(); cols],
        }
    }
    pivots
}

pub fn q_rank(m: &QMat) -> usize {
    let mut m = m.clone();
    q_rref(&mut m).len()
}

/// Basis of `{x : m·x = 0}`.
pub fn q_nullspace(m: &QMat, cols: usize) -> Vec<Vec<Scalar>> {
    let mut r = m.clone();
    let pivots = q_rref(&mut r);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Scalar::zero(); cols];
            x[f] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -r[row][f].clone();
            }
            x
        })
        .collect()
}

/// One solution of `m·x = rhs`, or `None` when inconsistent.
pub fn q_solve(m: &QMat, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: QMat = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = q_rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn q_inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let mut aug: QMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let pivots = q_rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Characteristic polynomial `det(z·I − m)` by Faddeev–LeVerrier.
pub fn q_charpoly(m: &QMat) -> Poly {
    let n = m.len();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut mk = q_zero(n, n);
    for k in 1..=n {
        // M_k = m·M_{k-1} + c_{n-k+1}·I
        let mut next = q_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let prod = q_mul(m, &mk);
        let tr = (0..n).fold(Scalar::zero(), |acc, i| acc + &prod[i][i]);
        coeffs[n - k] = -tr / int(k as i64);
    }
    Poly::new(coeffs)
}

/// Minimal polynomial: the first linear dependency among `I, m, m², …`.
pub fn q_minpoly(m: &QMat) -> Poly {
    let n = m.len();
    let flatten = |x: &QMat| -> Vec<Scalar> { x.iter().flatten().cloned().collect() };
    let mut powers = vec![flatten(&q_identity(n))];
    let mut current = q_identity(n);
    for _ in 1..=n {
        current = q_mul(&current, m);
        let target = flatten(&current);
        // Solve Σ c_i·m^i = m^d over i < d.
        let sys: QMat = (0..n * n)
            .map(|row| powers.iter().map(|p| p[row].clone()).collect())
            .collect();
        if let Some(c) = q_solve(&sys, &target) {
            let mut coeffs: Vec<Scalar> = c.into_iter().map(|x| -x).collect();
            coeffs.push(Scalar::one());
            return Poly::new(coeffs);
        }
        powers.push(target);
    }
    q_charpoly(m)
}

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Scalar::zero());
        }
        Poly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * z + c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Poly::new(out)
    }

    /// `∏ (z − r)` over the given roots.
    pub fn from_roots(roots: &[Scalar]) -> Poly {
        roots.iter().fold(Poly::new(vec![Scalar::one()]), |acc, r| {
            acc.mul(&Poly::new(vec![-r.clone(), Scalar::one()]))
        })
    }

    /// Divides by `(z − r)`, assuming `r` is a root.
    fn deflate(&self, r: &Scalar) -> Poly {
        let n = self.degree();
        let mut out = vec![Scalar::zero(); n];
        let mut carry = Scalar::zero();
        for i in (1..=n).rev() {
            carry = &carry * r + &self.coeffs[i];
            out[i - 1] = carry.clone();
        }
        Poly::new(out)
    }

    /// All roots with multiplicity, provided the polynomial splits over ℚ.
    pub fn rational_roots(&self) -> Result<Vec<Scalar>> {
        let mut p = self.clone();
        let mut roots = Vec::new();
        while p.degree() > 0 {
            if p.coeffs[0].is_zero() {
                roots.push(Scalar::zero());
                p = p.deflate(&Scalar::zero());
                continue;
            }
            let ints = p.integer_coeffs();
            let lead = ints.last().expect("nonempty").abs();
            let constant = ints[0].abs();
            let mut found = None;
            'search: for q in divisors(&lead)? {
                for num in divisors(&constant)? {
                    for sign in [1i64, -1] {
                        let cand = Scalar::new(num.clone() * sign, q.clone());
                        if p.eval(&cand).is_zero() {
                            found = Some(cand);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(r) => {
                    p = p.deflate(&r);
                    roots.push(r);
                }
                None => {
                    return Err(FrescoError::UnsupportedShape(
                        "polynomial has non-rational roots".into(),
                    ))
                }
            }
        }
        roots.sort();
        Ok(roots)
    }

    fn integer_coeffs(&self) -> Vec<BigInt> {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coeffs
            .iter()
            .map(|c| (c * Scalar::from_integer(l.clone())).to_integer())
            .collect()
    }

    /// Rendering in the variable `z`, highest degree first, e.g. `z^2 + 5·z + 6`.
    pub fn render(&self, var: &str) -> String {
        let mut out = String::new();
        for (e, c) in self.coeffs.iter().enumerate().rev() {
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
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("z"))
    }
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n
        .to_u64()
        .filter(|&n| n <= 1_000_000_000_000)
        .ok_or_else(|| FrescoError::UnsupportedShape("coefficients too large for rational root search".into()))?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

// ---------------------------------------------------------------------------
// Series vectors and matrices.

pub fn svec_zero(k: usize, order: usize) -> SVec {
    vec![TruncSeries::zero(order); k]
}

pub fn svec_unit(k: usize, i: usize, order: usize) -> SVec {
    let mut v = svec_zero(k, order);
    v[i] = TruncSeries::one(order);
    v
}

pub fn svec_order(v: &[TruncSeries]) -> usize {
    v.iter().map(TruncSeries::order).min().unwrap_or(usize::MAX)
}

pub fn svec_add(u: &[TruncSeries], v: &[TruncSeries]) -> SVec {
    u.iter().zip(v).map(|(x, y)| x + y).collect()
}

pub fn svec_sub(u: &[TruncSeries], v: &[TruncSeries]) -> SVec {
    u.iter().zip(v).map(|(x, y)| x - y).collect()
}

pub fn svec_scale(v: &[TruncSeries], c: &Scalar) -> SVec {
    v.iter().map(|x| x.scale(c)).collect()
}

pub fn svec_mul_series(v: &[TruncSeries], s: &TruncSeries) -> SVec {
    v.iter().map(|x| x * s).collect()
}

pub fn svec_truncate(v: &[TruncSeries], order: usize) -> SVec {
    v.iter().map(|x| x.truncate(order)).collect()
}

pub fn svec_padded(v: &[TruncSeries], order: usize) -> SVec {
    v.iter().map(|x| x.padded(order)).collect()
}

pub fn svec_shift_up(v: &[TruncSeries], s: usize) -> SVec {
    v.iter().map(|x| x.shift_up(s)).collect()
}

pub fn svec_shift_down(v: &[TruncSeries], s: usize) -> Result<SVec> {
    v.iter().map(|x| x.shift_down(s)).collect()
}

pub fn svec_is_zero(v: &[TruncSeries]) -> bool {
    v.iter().all(TruncSeries::is_zero)
}

/// Minimum valuation over the coordinates, `None` for the zero vector.
pub fn svec_valuation(v: &[TruncSeries]) -> Option<usize> {
    v.iter().filter_map(TruncSeries::valuation).min()
}

/// Coefficient vector of `b^n`.
pub fn svec_coeff(v: &[TruncSeries], n: usize) -> Vec<Scalar> {
    v.iter()
        .map(|x| x.get(n).cloned().unwrap_or_else(Scalar::zero))
        .collect()
}

pub fn smat_identity(k: usize, order: usize) -> SMat {
    (0..k).map(|i| svec_unit(k, i, order)).collect()
}

pub fn smat_order(m: &SMat) -> usize {
    m.iter().map(|r| svec_order(r)).min().unwrap_or(usize::MAX)
}

pub fn smat_vec(m: &SMat, v: &[TruncSeries]) -> SVec {
    let order = smat_order(m).min(svec_order(v));
    m.iter().map(|row| series_dot(row.iter().zip(v), order)).collect()
}

pub fn smat_mul(a: &SMat, b: &SMat) -> SMat {
    let cols = b.first().map_or(0, Vec::len);
    let bt: SMat = (0..cols).map(|j| b.iter().map(|r| r[j].clone()).collect()).collect();
    let prod_t: SMat = bt.iter().map(|col| smat_vec(a, col)).collect();
    smat_transpose(&prod_t)
}

pub fn smat_transpose(m: &SMat) -> SMat {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn smat_column(m: &SMat, j: usize) -> SVec {
    m.iter().map(|r| r[j].clone()).collect()
}

pub fn smat_from_columns(cols: &[SVec]) -> SMat {
    smat_transpose(&cols.to_vec())
}

/// Coefficient matrix of `b^n`.
pub fn smat_coeff(m: &SMat, n: usize) -> QMat {
    m.iter().map(|r| svec_coeff(r, n)).collect()
}

/// Solves `m·X = rhs` (columns of `rhs`) for `m` invertible over the series ring,
/// i.e. with invertible constant-term matrix. Pivots on units.
pub fn smat_solve(m: &SMat, rhs: &[SVec]) -> Result<Vec<SVec>> {
    let n = m.len();
    let order = smat_order(m).min(rhs.iter().map(|v| svec_order(v)).min().unwrap_or(usize::MAX));
    let mut a: SMat = m.iter().map(|r| svec_truncate(r, order)).collect();
    let mut b: Vec<SVec> = (0..n)
        .map(|i| rhs.iter().map(|v| v[i].truncate(order)).collect())
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| a[i][c].is_unit())
            .ok_or_else(|| FrescoError::NotAGenerator("matrix is singular modulo b".into()))?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].invert()?;
        a[c] = a[c].iter().map(|x| x * &inv).collect();
        b[c] = b[c].iter().map(|x| x * &inv).collect();
        let prow = a[c].clone();
        let brow = b[c].clone();
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            a[i] = a[i].iter().zip(&prow).map(|(x, y)| x - &(&f * y)).collect();
            b[i] = b[i].iter().zip(&brow).map(|(x, y)| x - &(&f * y)).collect();
        }
    }
    Ok((0..rhs.len())
        .map(|j| (0..n).map(|i| b[i][j].clone()).collect())
        .collect())
}

pub fn smat_inverse(m: &SMat) -> Result<SMat> {
    let n = m.len();
    let order = smat_order(m);
    let cols = smat_solve(m, &smat_identity(n, order))?;
    Ok(smat_from_columns(&cols))
}
