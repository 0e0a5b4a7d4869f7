//! Truncated formal power series over exact rationals.
//!
//! Coefficients are stored plain: index `n` holds `[x^n] f`. Generating
//! functions of the shape `Σ h(n) x^n / (D(n) n!)` are produced with
//! [`series_from_table`] and read back with [`TruncatedSeries::coeff_den`].
//! Binary operations on series of different truncation orders truncate to the
//! shorter one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinat::{big, factorial};
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A denominator sequence `D(n)` used to normalise generalised exponential
/// generating functions.
#[derive(Clone)]
pub struct DenominatorSequence {
    name: String,
    eval: Arc<dyn Fn(usize) -> BigInt + Send + Sync>,
}

impl DenominatorSequence {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(usize) -> BigInt + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    /// `D(n) = 1` for all `n`.
    pub fn unit() -> Self {
        Self::new("1", |_| BigInt::one())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, n: usize) -> BigInt {
        (self.eval)(n)
    }

    /// `D(n) · n!`, the full normaliser of the `n`th coefficient.
    pub fn normaliser(&self, n: usize) -> BigInt {
        self.eval(n) * factorial(n)
    }
}

impl fmt::Debug for DenominatorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("DenominatorSequence")
            .field(&self.name)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

/// Builds `Σ_{n ≤ T} h(n) x^n / (D(n) n!)`.
pub fn series_from_table(
    h: &[Rational],
    den: &DenominatorSequence,
    order: usize,
) -> Result<TruncatedSeries> {
    if h.len() <= order {
        return Err(Error::MissingTableEntry(h.len()));
    }
    let coeffs = (0..=order)
        .map(|n| &h[n] / big(&den.normaliser(n)))
        .collect();
    Ok(TruncatedSeries { coeffs })
}

impl TruncatedSeries {
    /// Series with the given coefficients; the truncation order is `len - 1`.
    /// An empty vector is read as the zero series of order 0.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        Self { coeffs }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(
            values
                .iter()
                .map(|&v| Rational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c · x^k`, truncated.
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn x(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    /// `e^x` truncated at `order`.
    pub fn exp_x(order: usize) -> Self {
        Self::new(
            (0..=order)
                .map(|n| Rational::new(BigInt::one(), factorial(n)))
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Result<&Rational> {
        self.coeffs.get(n).ok_or(Error::Truncation {
            index: n,
            order: self.order(),
        })
    }

    /// Reads `h(n) = [x^n] f · D(n) · n!`.
    pub fn coeff_den(&self, n: usize, den: &DenominatorSequence) -> Result<Rational> {
        Ok(self.coeff(n)? * big(&den.normaliser(n)))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self::new(self.coeffs[..=order].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `f(c·x)`.
    pub fn dilate(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &p);
            p = &p * c;
        }
        Self::new(out)
    }

    /// `f(x^k)`, keeping the same truncation order.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1, "substitute_power needs k >= 1");
        let mut out = Self::zero(self.order());
        for (n, a) in self.coeffs.iter().enumerate() {
            if n * k > self.order() {
                break;
            }
            out.coeffs[n * k] = a.clone();
        }
        out
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, a)| a * Rational::from_integer(n.into()))
                .collect(),
        )
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let order = self.order().min(other.order());
        Self::new(
            (0..=order)
                .map(|n| f(&self.coeffs[n], &other.coeffs[n]))
                .collect(),
        )
    }

    /// Cauchy product truncated at the smaller order.
    pub fn multiply(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Precondition("reciprocal requires f(0) != 0".into()));
        }
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..=self.order() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &out[n - k];
            }
            out.push(-acc * &inv0);
        }
        Ok(Self::new(out))
    }

    pub fn divide(&self, other: &Self) -> Result<Self> {
        Ok(self.multiply(&other.reciprocal()?))
    }

    /// `self ∘ f`, i.e. `g(f(x))` with `g = self`. Horner evaluation.
    pub fn compose(&self, f: &Self) -> Result<Self> {
        if !f.coeffs[0].is_zero() {
            return Err(Error::Precondition("composition requires f(0)=0".into()));
        }
        let order = self.order().min(f.order());
        let f = f.truncate(order);
        let mut acc = Self::zero(order);
        for a in self.coeffs[..=order].iter().rev() {
            acc = acc.multiply(&f);
            acc.coeffs[0] += a;
        }
        Ok(acc)
    }

    /// Formal logarithm; needs constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Precondition(format!(
                "log requires constant term 1, found {}",
                self.coeffs[0]
            )));
        }
        let order = self.order();
        let mut g = vec![Rational::zero(); order + 1];
        // n g_n = n f_n - sum_{k=1}^{n-1} k g_k f_{n-k}
        for n in 1..=order {
            let mut acc = Rational::from_integer(n.into()) * &self.coeffs[n];
            for (k, gk) in g.iter().enumerate().take(n).skip(1) {
                acc -= Rational::from_integer(k.into()) * gk * &self.coeffs[n - k];
            }
            g[n] = acc / Rational::from_integer(n.into());
        }
        Ok(Self::new(g))
    }

    /// Formal exponential; needs constant term 0.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition(format!(
                "exp requires constant term 0, found {}",
                self.coeffs[0]
            )));
        }
        let order = self.order();
        let mut h = vec![Rational::zero(); order + 1];
        h[0] = Rational::one();
        // n h_n = sum_{k=1}^n k f_k h_{n-k}
        for n in 1..=order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += Rational::from_integer(k.into()) * &self.coeffs[k] * &h[n - k];
                }
            }
            h[n] = acc / Rational::from_integer(n.into());
        }
        Ok(Self::new(h))
    }

    /// `f^q = exp(q · log f)`; needs constant term 1.
    pub fn pow_rational(&self, q: &Rational) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Precondition(format!(
                "rational power requires constant term 1, found {}",
                self.coeffs[0]
            )));
        }
        self.log()?.scale(q).exp()
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        self.multiply(rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::new(self.coeffs.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = a.abs();
            match n {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if n == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{n}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hyperbolic {
    Sinh,
    Cosh,
    /// `sech(s·x)^{1/s}`.
    SechPow,
}

/// sinh and cosh from factorial tables; `sech(s·x)^{1/s}` as
/// `cosh(s·x)^{-1/s}`.
pub fn hyperbolic(kind: Hyperbolic, s: usize, order: usize) -> Result<TruncatedSeries> {
    let parity_series = |parity: usize| {
        TruncatedSeries::new(
            (0..=order)
                .map(|n| {
                    if n % 2 == parity {
                        Rational::new(BigInt::one(), factorial(n))
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        )
    };
    match kind {
        Hyperbolic::Sinh => Ok(parity_series(1)),
        Hyperbolic::Cosh => Ok(parity_series(0)),
        Hyperbolic::SechPow => {
            if s == 0 {
                return Err(Error::InvalidParameter("sech power needs s >= 1".into()));
            }
            let s_r = Rational::from_integer(s.into());
            parity_series(0).dilate(&s_r).pow_rational(&(-s_r.recip()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{int, rat};

    fn ints(v: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_ints(v)
    }

    fn rats(v: &[(i64, i64)]) -> TruncatedSeries {
        TruncatedSeries::new(v.iter().map(|&(a, b)| rat(a, b)).collect())
    }

    #[test]
    fn table_exponential_and_geometric() {
        let unit = DenominatorSequence::unit();
        let ones = vec![int(1); 4];
        assert_eq!(
            series_from_table(&ones, &unit, 3).unwrap(),
            rats(&[(1, 1), (1, 1), (1, 2), (1, 6)])
        );
        let facts: Vec<_> = (0..3).map(|n| big(&factorial(n))).collect();
        assert_eq!(
            series_from_table(&facts, &unit, 2).unwrap(),
            ints(&[1, 1, 1])
        );
        // Bell numbers 1, 1, 2, 5 counted by listing set partitions of [0..3]
        let bell = [1, 1, 2, 5].map(int).to_vec();
        assert_eq!(
            series_from_table(&bell, &unit, 3).unwrap(),
            rats(&[(1, 1), (1, 1), (1, 1), (5, 6)])
        );
    }

    #[test]
    fn table_missing_value_is_an_error() {
        let err = series_from_table(&[int(1)], &DenominatorSequence::unit(), 2).unwrap_err();
        assert!(matches!(err, Error::MissingTableEntry(1)));
    }

    #[test]
    fn products() {
        assert_eq!(&ints(&[1, 1, 0]) * &ints(&[1, -1, 0]), ints(&[1, 0, -1]));
        let e = TruncatedSeries::exp_x(8);
        let e_neg = e.dilate(&int(-1));
        assert_eq!(&e * &e_neg, TruncatedSeries::one(8));
        let a = rats(&[(0, 1), (1, 1), (0, 1), (1, 6), (0, 1)]);
        let b = rats(&[(1, 1), (0, 1), (-1, 2), (0, 1), (0, 1)]);
        assert_eq!(&a * &b, rats(&[(0, 1), (1, 1), (0, 1), (-1, 3), (0, 1)]));
    }

    #[test]
    fn mixed_truncation_takes_minimum() {
        let p = &ints(&[1, 1, 1, 1]) * &ints(&[1, 1]);
        assert_eq!(p.order(), 1);
        assert_eq!((&ints(&[1, 2, 3]) + &ints(&[1])).order(), 0);
    }

    #[test]
    fn composition() {
        let e = TruncatedSeries::exp_x(4);
        let em1 = &e - &TruncatedSeries::one(4);
        // Bell numbers 1,1,2,5,15 from listing partitions
        let bell = rats(&[(1, 1), (1, 1), (1, 1), (5, 6), (15, 24)]);
        assert_eq!(e.compose(&em1).unwrap(), bell);
        let g = ints(&[3, -1, 4, 1, -5]);
        assert_eq!(g.compose(&TruncatedSeries::x(4)).unwrap(), g);
        let geo = ints(&[1, 1, 1, 1, 1]);
        let x2 = ints(&[0, 0, 1, 0, 0]);
        assert_eq!(geo.compose(&x2).unwrap(), ints(&[1, 0, 1, 0, 1]));
        let err = geo.compose(&ints(&[1, 1, 0, 0, 0])).unwrap_err();
        assert!(err.to_string().contains("composition requires f(0)=0"));
    }

    #[test]
    fn log_and_exp() {
        assert_eq!(
            ints(&[1, 1, 0, 0]).log().unwrap(),
            rats(&[(0, 1), (1, 1), (-1, 2), (1, 3)])
        );
        assert_eq!(
            ints(&[0, 1, 0]).exp().unwrap(),
            rats(&[(1, 1), (1, 1), (1, 2)])
        );
        let f = ints(&[1, 1, 1, 0, 0, 0, 0]);
        assert_eq!(f.log().unwrap().exp().unwrap(), f);
        assert!(ints(&[2, 1]).log().is_err());
        assert!(ints(&[1, 1]).exp().is_err());
    }

    #[test]
    fn rational_powers() {
        // binomial series of (1+2x)^{-1/2}: C(-1/2, n) 2^n = 1, -1, 3/2
        let f = ints(&[1, 2, 0]);
        assert_eq!(
            f.pow_rational(&rat(-1, 2)).unwrap(),
            rats(&[(1, 1), (-1, 1), (3, 2)])
        );
        assert_eq!(
            ints(&[1, 5, -3, 2]).pow_rational(&int(0)).unwrap(),
            TruncatedSeries::one(3)
        );
        let root = ints(&[1, 1, 0, 0, 0, 0]).pow_rational(&rat(1, 2)).unwrap();
        assert_eq!(&root * &root, ints(&[1, 1, 0, 0, 0, 0]));
        assert!(ints(&[3, 1]).pow_rational(&rat(1, 2)).is_err());
    }

    #[test]
    fn denominator_reads() {
        let unit = DenominatorSequence::unit();
        assert_eq!(
            TruncatedSeries::exp_x(5).coeff_den(3, &unit).unwrap(),
            int(1)
        );
        let tanh = &hyperbolic(Hyperbolic::Sinh, 1, 5).unwrap()
            * &hyperbolic(Hyperbolic::SechPow, 1, 5).unwrap();
        // -tanh: 3! * (1/3) = 2
        assert_eq!((-&tanh).coeff_den(3, &unit).unwrap(), int(2));
        assert_eq!(ints(&[1, 0, 1]).coeff_den(2, &unit).unwrap(), int(2));
        assert!(matches!(
            ints(&[1, 0, 1]).coeff_den(3, &unit),
            Err(Error::Truncation { index: 3, order: 2 })
        ));
    }

    #[test]
    fn hyperbolic_series() {
        assert_eq!(
            hyperbolic(Hyperbolic::Cosh, 1, 4).unwrap(),
            rats(&[(1, 1), (0, 1), (1, 2), (0, 1), (1, 24)])
        );
        // tanh = x - x^3/3 + 2x^5/15 (computed independently from sinh/cosh series division)
        let tanh = &hyperbolic(Hyperbolic::Sinh, 1, 5).unwrap()
            * &hyperbolic(Hyperbolic::SechPow, 1, 5).unwrap();
        assert_eq!(
            tanh,
            rats(&[(0, 1), (1, 1), (0, 1), (-1, 3), (0, 1), (2, 15)])
        );
        let sinh = hyperbolic(Hyperbolic::Sinh, 1, 5).unwrap();
        let cosh = hyperbolic(Hyperbolic::Cosh, 1, 5).unwrap();
        assert_eq!(sinh.divide(&cosh).unwrap(), tanh);
        assert_eq!(
            hyperbolic(Hyperbolic::SechPow, 1, 4).unwrap(),
            rats(&[(1, 1), (0, 1), (-1, 2), (0, 1), (5, 24)])
        );
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(
            rats(&[(1, 1), (-1, 2), (0, 1), (1, 3)]).to_string(),
            "1 - 1/2*x + 1/3*x^3 + O(x^4)"
        );
        assert_eq!(TruncatedSeries::zero(1).to_string(), "0 + O(x^2)");
    }
}
