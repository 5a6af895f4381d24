//! Exact integer polynomials, characteristic polynomials and real roots.
//!
//! The characteristic polynomial is computed with Berkowitz's division-free
//! algorithm over big integers. Real roots of a real-rooted polynomial are
//! isolated exactly: the square-free factors come from Yun's algorithm, and
//! roots of each factor are bracketed by the roots of its derivative and
//! refined by bisection with exact sign evaluation at dyadic points.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::graph::Graph;
use crate::{Error, Result};

/// Largest graph accepted by [`charpoly`].
pub const CHARPOLY_MAX_NODES: usize = 64;

/// Polynomial with exact integer coefficients, stored in ascending degree.
///
/// The zero polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds from ascending coefficients, dropping trailing zeros.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    /// Builds from small ascending coefficients.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    /// The constant `c`.
    pub fn constant(c: i64) -> Self {
        IntPolynomial::from_i64(&[c])
    }

    /// `c x^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::from(c);
        IntPolynomial::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Ascending coefficients.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients as `i64` when they all fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        IntPolynomial::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    /// `p(x) * x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigInt) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        IntPolynomial::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    /// Approximate value at `x` (Horner in `f64`).
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Exact sign of `p(x)` for a finite `x`.
    pub fn sign_at(&self, x: f64) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let (m, e) = decompose(x);
        let value = if e >= 0 {
            let xv = m << (e as usize);
            self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &xv + c)
        } else {
            // p(m / 2^s) * 2^(s d) = sum c_i m^i 2^(s (d - i)).
            let s = (-e) as usize;
            let mut acc = BigInt::zero();
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                acc = if k == 0 { c.clone() } else { acc * &m + (c << (s * k)) };
            }
            acc
        };
        match value.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// Gcd of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        IntPolynomial { coeffs: self.coeffs.iter().map(|x| x / &c).collect() }
    }

    fn pseudo_rem(&self, divisor: &Self) -> Self {
        let mut r = self.clone();
        let db = divisor.deg();
        let lb = divisor.leading();
        while !r.is_zero() && r.deg() >= db {
            let k = r.deg() - db;
            let lr = r.leading();
            r = r.scale(&lb).sub(&divisor.scale(&lr).shift(k)).primitive();
        }
        r
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.deg() < b.deg() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a
    }

    /// Quotient of an exact division by `divisor`. Returns `None` when the
    /// division leaves a remainder or needs fractions.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let mut r = self.clone();
        if r.is_zero() {
            return Some(r);
        }
        let db = divisor.deg();
        if r.deg() < db {
            return None;
        }
        let lb = divisor.leading();
        let mut q = vec![BigInt::zero(); r.deg() - db + 1];
        while !r.is_zero() && r.deg() >= db {
            let k = r.deg() - db;
            let (c, rem) = r.leading().div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            r = r.sub(&divisor.scale(&c).shift(k));
            q[k] = c;
        }
        r.is_zero().then(|| IntPolynomial::new(q))
    }

    /// Square-free decomposition `p = c * prod f_i^i` (Yun); returns the
    /// non-constant primitive factors with their multiplicities.
    pub fn square_free_factors(&self) -> Vec<(IntPolynomial, usize)> {
        let f = self.primitive();
        if f.deg() == 0 {
            return Vec::new();
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0).expect("gcd divides f");
        let mut c = fp.exact_div(&a0).expect("gcd divides f'");
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.deg() > 0 {
            let a = b.gcd(&d);
            b = b.exact_div(&a).expect("gcd divides b");
            c = d.exact_div(&a).expect("gcd divides d");
            d = c.sub(&b.derivative());
            if a.deg() > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// All real roots with multiplicity, ascending, for a polynomial whose
    /// roots are all real (e.g. a characteristic polynomial of a symmetric
    /// matrix). Fails if a root bracket turns out empty, which means some
    /// roots are not real.
    pub fn real_roots(&self) -> Result<Vec<f64>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("the zero polynomial has no finite root set".into()));
        }
        let mut roots = Vec::new();
        for (factor, mult) in self.square_free_factors() {
            let r = simple_real_roots(&factor)?;
            for x in r {
                roots.extend(core::iter::repeat_n(x, mult));
            }
        }
        roots.sort_by(f64::total_cmp);
        Ok(roots)
    }
}

fn decompose(x: f64) -> (BigInt, i32) {
    assert!(x.is_finite());
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut m, mut e) =
        if exp_bits == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp_bits - 1075) };
    while m & 1 == 0 && e < 0 {
        m >>= 1;
        e += 1;
    }
    let m = BigInt::from(m);
    (if x < 0.0 { -m } else { m }, e)
}

fn cauchy_bound(p: &IntPolynomial) -> f64 {
    let lead = p.leading().abs().to_f64().unwrap_or(f64::MAX);
    let max = p.coeffs[..p.deg()]
        .iter()
        .map(|c| c.abs().to_f64().unwrap_or(f64::MAX))
        .fold(0.0, f64::max);
    // Round up to a power of two so the endpoints are exact.
    let b = 1.0 + max / lead;
    libm::exp2(libm::ceil(libm::log2(b)))
}

fn simple_real_roots(p: &IntPolynomial) -> Result<Vec<f64>> {
    let d = p.deg();
    match d {
        0 => return Ok(Vec::new()),
        1 => {
            let c0 = p.coeffs[0].to_f64().unwrap_or(f64::NAN);
            let c1 = p.coeffs[1].to_f64().unwrap_or(f64::NAN);
            return Ok(vec![-c0 / c1]);
        }
        _ => {}
    }
    let crit = simple_real_roots(&p.derivative())?;
    if crit.len() != d - 1 {
        return Err(Error::InvalidArgument("polynomial has non-real roots".into()));
    }
    let bound = cauchy_bound(p);
    let mut ends = Vec::with_capacity(d + 1);
    ends.push(-bound);
    ends.extend(crit);
    ends.push(bound);
    ends.windows(2).map(|w| bisect(p, w[0], w[1])).collect()
}

fn bisect(p: &IntPolynomial, mut lo: f64, mut hi: f64) -> Result<f64> {
    let s_lo = p.sign_at(lo);
    if s_lo == Ordering::Equal {
        return Ok(lo);
    }
    let s_hi = p.sign_at(hi);
    if s_hi == Ordering::Equal {
        return Ok(hi);
    }
    if s_lo == s_hi {
        return Err(Error::InvalidArgument("polynomial has non-real roots".into()));
    }
    for _ in 0..2100 {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * libm::fabs(lo).max(1.0) {
            break;
        }
        match p.sign_at(mid) {
            Ordering::Equal => return Ok(mid),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(lo + (hi - lo) / 2.0)
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Exact characteristic polynomial `det(A - x I)` of the adjacency matrix.
///
/// Sign convention: `det(A - x I) = (-1)^n det(x I - A)`, so the leading
/// coefficient is `(-1)^n`. Uses Berkowitz's algorithm on leading principal
/// submatrices; `O(n^2 m)` big-integer operations.
pub fn charpoly(g: &Graph) -> Result<IntPolynomial> {
    let n = g.node_count();
    if n > CHARPOLY_MAX_NODES {
        return Err(Error::TooLarge { nodes: n, max: CHARPOLY_MAX_NODES });
    }
    // Coefficients of det(x I - A_r), highest degree first. Diagonal is zero.
    let mut p: Vec<BigInt> = vec![BigInt::one(), BigInt::zero()];
    for r in 1..n {
        // Toeplitz column: 1, -a_rr, -R C, -R M C, ..., -R M^(r-1) C.
        let mut col = Vec::with_capacity(r + 2);
        col.push(BigInt::one());
        col.push(BigInt::zero());
        // v = M^k C restricted to indices < r; C_i = A[i][r].
        let mut v: Vec<BigInt> =
            (0..r).map(|i| BigInt::from(u8::from(g.has_edge(i, r)))).collect();
        for k in 0..r {
            let rv: BigInt = g.neighbors(r).iter().take_while(|&&j| j < r).map(|&j| &v[j]).sum();
            col.push(-rv);
            if k + 1 < r {
                v = (0..r)
                    .map(|i| g.neighbors(i).iter().take_while(|&&j| j < r).map(|&j| &v[j]).sum())
                    .collect();
            }
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, pj) in p.iter().enumerate().take(i + 1) {
                if pj.is_zero() || col[i - j].is_zero() {
                    continue;
                }
                *slot += &col[i - j] * pj;
            }
        }
        p = next;
    }
    p.reverse();
    let mut out = IntPolynomial::new(p);
    if n % 2 == 1 {
        out = out.neg();
    }
    Ok(out)
}

/// Renders the polynomial's coefficients as decimal strings (ascending).
pub fn coefficient_strings(p: &IntPolynomial) -> Vec<String> {
    use alloc::string::ToString;
    p.coeffs.iter().map(ToString::to_string).collect()
}
