//! Descent words, `Des` / `Des_q`, Gaussian coefficients, Euler numbers and
//! the comparison of Möbius values with descent counts.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::{int, sign};
use crate::error::{guard, Error, Result};
use crate::exact_series::{Rational, TruncatedSeries};
use crate::exec;
use crate::mobius_identities::{IdentityReport, IdentityRow};
use crate::structures::{build_extended, build_r_divisible, Guards};

/// Largest word degree handled by direct enumeration of permutations.
pub const MAX_ENUMERATION_DEGREE: usize = 9;
/// Largest word degree handled at all.
pub const MAX_WORD_DEGREE: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
}

/// A word over `{a, b}`; letter `i` is `a` when `σ_i < σ_{i+1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DescentWord(Vec<Letter>);

impl DescentWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// `a^count`.
    pub fn a_power(count: usize) -> Self {
        Self(vec![Letter::A; count])
    }

    pub fn b_power(count: usize) -> Self {
        Self(vec![Letter::B; count])
    }

    /// `(a^{r-1} b)^n · w`.
    pub fn periodic(r: usize, n: usize, w: &DescentWord) -> Self {
        let mut letters = Vec::with_capacity(r * n + w.degree());
        for _ in 0..n {
            letters.extend(std::iter::repeat_n(Letter::A, r - 1));
            letters.push(Letter::B);
        }
        letters.extend_from_slice(&w.0);
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `u · x · v` for a single letter `x`.
    pub fn join(&self, middle: Letter, other: &DescentWord) -> Self {
        let mut letters = self.0.clone();
        letters.push(middle);
        letters.extend_from_slice(&other.0);
        Self(letters)
    }

    pub fn concat(&self, other: &DescentWord) -> Self {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Self(letters)
    }

    /// Reverse of the word with `a` and `b` swapped.
    pub fn reverse_complement(&self) -> Self {
        Self(
            self.0
                .iter()
                .rev()
                .map(|l| match l {
                    Letter::A => Letter::B,
                    Letter::B => Letter::A,
                })
                .collect(),
        )
    }

    /// 1-based positions of the letter `b`.
    pub fn b_positions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == Letter::B)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Every word of the given degree, in lexicographic order (`a < b`).
    pub fn all(degree: usize) -> Vec<DescentWord> {
        (0..1usize << degree)
            .map(|mask| {
                Self(
                    (0..degree)
                        .map(|i| {
                            if mask >> (degree - 1 - i) & 1 == 1 {
                                Letter::B
                            } else {
                                Letter::A
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Display for DescentWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            f.write_str(match l {
                Letter::A => "a",
                Letter::B => "b",
            })?;
        }
        Ok(())
    }
}

impl FromStr for DescentWord {
    type Err = Error;

    /// Accepts `aba`, and `1` or the empty string for the empty word.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() || t == "1" {
            return Ok(Self::empty());
        }
        t.chars()
            .map(|c| match c {
                'a' => Ok(Letter::A),
                'b' => Ok(Letter::B),
                _ => Err(Error::Parse(format!("`{c}` is not a letter of an ab-word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl TryFrom<String> for DescentWord {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DescentWord> for String {
    fn from(w: DescentWord) -> Self {
        w.to_string()
    }
}

fn check_permutation(sigma: &[u8]) -> Result<()> {
    let n = sigma.len();
    let mut seen = vec![false; n + 1];
    for &v in sigma {
        let v = v as usize;
        if v == 0 || v > n || seen[v] {
            return Err(Error::NotAPermutation(sigma.to_vec()));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Descent word of a permutation of `1..=n` in one-line notation.
pub fn descent_word(sigma: &[u8]) -> Result<DescentWord> {
    check_permutation(sigma)?;
    Ok(descent_word_unchecked(sigma))
}

fn descent_word_unchecked(sigma: &[u8]) -> DescentWord {
    DescentWord(
        sigma
            .windows(2)
            .map(|w| if w[0] < w[1] { Letter::A } else { Letter::B })
            .collect(),
    )
}

pub fn inversions(sigma: &[u8]) -> Result<usize> {
    check_permutation(sigma)?;
    Ok(inversions_unchecked(sigma))
}

fn inversions_unchecked(sigma: &[u8]) -> usize {
    let mut count = 0;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                count += 1;
            }
        }
    }
    count
}

/// Parses one-line notation: `562418379`, or comma separated.
pub fn parse_permutation(text: &str) -> Result<Vec<u8>> {
    let t = text.trim();
    let sigma: Vec<u8> = if t.contains(',') {
        t.split(',')
            .map(|x| {
                x.trim()
                    .parse::<u8>()
                    .map_err(|e| Error::Parse(e.to_string()))
            })
            .collect::<Result<_>>()?
    } else {
        t.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("bad entry `{c}`")))
            })
            .collect::<Result<_>>()?
    };
    check_permutation(&sigma)?;
    Ok(sigma)
}

/// Polynomial in `q` with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QPolynomial(Vec<i128>);

impl QPolynomial {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        Self(coeffs)
    }

    pub fn zero() -> Self {
        Self(vec![0])
    }

    pub fn one() -> Self {
        Self(vec![1])
    }

    /// `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        Self(c)
    }

    /// `[n] = 1 + q + ... + q^{n-1}`.
    pub fn q_integer(n: usize) -> Self {
        Self::new(vec![1; n])
    }

    pub fn q_factorial(n: usize) -> Self {
        (1..=n).fold(Self::one(), |acc, i| &acc * &Self::q_integer(i))
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0]
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> i128 {
        self.0.iter().sum()
    }

    pub fn eval(&self, q: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, &c| {
            acc * q + Rational::from_integer(c.into())
        })
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;

    fn add(self, other: &QPolynomial) -> QPolynomial {
        let len = self.0.len().max(other.0.len());
        QPolynomial::new(
            (0..len)
                .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
                .collect(),
        )
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;

    fn mul(self, other: &QPolynomial) -> QPolynomial {
        let mut c = vec![0i128; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPolynomial::new(c)
    }
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c as usize - '0' as usize])
        .collect()
}

impl fmt::Display for QPolynomial {
    /// `q + 2q² + q³ + q⁴`, increasing powers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            first = false;
            if k == 0 || mag != 1 {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q{}", superscript(k))?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Gaussian coefficient `[n choose k]_q`.
pub fn gaussian(n: usize, k: usize) -> Result<QPolynomial> {
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "gaussian({n}, {k}) needs k <= n"
        )));
    }
    // Pascal-type recurrence [n,k] = [n-1,k-1] + q^k [n-1,k]
    let mut row = vec![QPolynomial::one()];
    for i in 1..=n {
        let mut next = Vec::with_capacity(i + 1);
        for j in 0..=i {
            let left = if j > 0 {
                row[j - 1].clone()
            } else {
                QPolynomial::zero()
            };
            let right = if j < i {
                &QPolynomial::monomial(j) * &row[j]
            } else {
                QPolynomial::zero()
            };
            next.push(&left + &right);
        }
        row = next;
    }
    Ok(row[k].clone())
}

/// `q`-multinomial `[n; c_1, ..., c_l]_q` for a composition of `n`.
pub fn q_multinomial(parts: &[usize]) -> QPolynomial {
    let mut total = 0;
    let mut acc = QPolynomial::one();
    for &p in parts {
        total += p;
        acc = &acc * &gaussian(total, p).expect("p <= total");
    }
    acc
}

/// All permutations of `1..=n`, fanned out over the first entry.
fn for_each_chunk<R: Send>(
    n: usize,
    f: impl Fn(&[u8]) -> R + Sync + Send,
    fold: impl Fn(&mut R, R) + Sync + Send,
    init: impl Fn() -> R + Sync + Send,
) -> R {
    if n == 0 {
        return f(&[]);
    }
    let chunks = exec::map_range(n, |first| {
        let first = first as u8 + 1;
        let rest: Vec<u8> = (1..=n as u8).filter(|&v| v != first).collect();
        let mut acc = init();
        let mut sigma = vec![first; n];
        for perm in rest.into_iter().permutations(n - 1) {
            sigma[1..].copy_from_slice(&perm);
            fold(&mut acc, f(&sigma));
        }
        acc
    });
    let mut total = init();
    for c in chunks {
        fold(&mut total, c);
    }
    total
}

/// `Des_q[u]` by enumerating `S_{deg u + 1}`.
pub fn des_q_enumerate(u: &DescentWord) -> Result<QPolynomial> {
    guard("max_enumeration_degree", MAX_ENUMERATION_DEGREE, u.degree())?;
    let n = u.degree() + 1;
    let max_inv = n * (n - 1) / 2;
    let counts = for_each_chunk(
        n,
        |sigma| {
            let mut v = vec![0i128; max_inv + 1];
            if descent_word_unchecked(sigma) == *u {
                v[inversions_unchecked(sigma)] += 1;
            }
            v
        },
        |acc, v| {
            for (a, b) in acc.iter_mut().zip(v) {
                *a += b;
            }
        },
        || vec![0i128; max_inv + 1],
    );
    Ok(QPolynomial::new(counts))
}

/// `Des_q[u]` by inclusion–exclusion over subsets of the `b` positions,
/// each term a `q`-multinomial.
pub fn des_q_inclusion_exclusion(u: &DescentWord) -> Result<QPolynomial> {
    guard("max_word_degree", MAX_WORD_DEGREE, u.degree())?;
    let n = u.degree() + 1;
    let bs = u.b_positions();
    let mut total = QPolynomial::zero();
    for mask in 0u32..(1u32 << bs.len()) {
        let mut cuts: Vec<usize> = bs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        cuts.push(n);
        let mut prev = 0;
        let parts: Vec<usize> = cuts
            .iter()
            .map(|&c| {
                let p = c - prev;
                prev = c;
                p
            })
            .collect();
        let term = q_multinomial(&parts);
        let flip = (bs.len() - mask.count_ones() as usize) % 2 == 1;
        total = if flip {
            &total + &(&term * &QPolynomial::new(vec![-1]))
        } else {
            &total + &term
        };
    }
    Ok(total)
}

/// `Des_q[u]`: enumeration for short words, inclusion–exclusion otherwise.
pub fn des_q(u: &DescentWord) -> Result<QPolynomial> {
    if u.degree() <= 7 {
        des_q_enumerate(u)
    } else {
        des_q_inclusion_exclusion(u)
    }
}

/// `Des[u]`, the number of permutations with descent word `u`.
pub fn des_count(u: &DescentWord) -> Result<u128> {
    Ok(des_q(u)?.at_one() as u128)
}

/// `[n+m choose n]·Des_q[u]·Des_q[v] = Des_q[u a v] + Des_q[u b v]`.
pub fn multiplication_check(u: &DescentWord, v: &DescentWord) -> Result<bool> {
    let (n, m) = (u.degree() + 1, v.degree() + 1);
    guard("max_multiplication_size", 10, n + m)?;
    let left = &(&gaussian(n + m, n)? * &des_q(u)?) * &des_q(v)?;
    let right = &des_q(&u.join(Letter::A, v))? + &des_q(&u.join(Letter::B, v))?;
    Ok(left == right)
}

/// Every pair `(u, v)` with `deg u + deg v + 2 ≤ max_total`; returns
/// `(pairs checked, failures)`.
pub fn multiplication_exhaustive(max_total: usize) -> Result<(usize, usize)> {
    let mut checked = 0;
    let mut failures = 0;
    for n in 1..max_total {
        for m in 1..=max_total - n {
            for u in DescentWord::all(n - 1) {
                for v in DescentWord::all(m - 1) {
                    checked += 1;
                    if !multiplication_check(&u, &v)? {
                        failures += 1;
                    }
                }
            }
        }
    }
    Ok((checked, failures))
}

/// `Σ c_N x^N / [N]!` at a fixed rational `q`, for `N ≤ order`.
fn eulerian_series(
    order: usize,
    q: &Rational,
    c: impl Fn(usize) -> Result<Rational>,
) -> Result<TruncatedSeries> {
    let coeffs = (0..=order)
        .map(|deg| {
            let fact = QPolynomial::q_factorial(deg).eval(q);
            if fact.is_zero() {
                return Err(Error::Precondition(format!("[{deg}]! vanishes at q = {q}")));
            }
            Ok(c(deg)? / fact)
        })
        .collect::<Result<_>>()?;
    Ok(TruncatedSeries::new(coeffs))
}

/// The Eulerian product identity for `u_n`, `v_n` (weights `c_n = d_n = 1`)
/// at a rational `q`, coefficients `0 ≤ N ≤ order`.
pub fn eulerian_product_check(
    u: impl Fn(usize) -> DescentWord,
    v: impl Fn(usize) -> DescentWord,
    q: &Rational,
    order: usize,
) -> Result<IdentityReport> {
    let left_u = eulerian_series(order, q, |n| {
        if n == 0 {
            Ok(Rational::zero())
        } else {
            Ok(des_q(&u(n))?.eval(q))
        }
    })?;
    let left_v = eulerian_series(order, q, |n| {
        if n == 0 {
            Ok(Rational::zero())
        } else {
            Ok(des_q(&v(n))?.eval(q))
        }
    })?;
    let product = &left_u * &left_v;
    let right = eulerian_series(order, q, |n| {
        let mut acc = Rational::zero();
        for i in 1..n {
            let (a, b) = (u(i), v(n - i));
            acc += des_q(&a.join(Letter::A, &b))?.eval(q) + des_q(&a.join(Letter::B, &b))?.eval(q);
        }
        Ok(acc)
    })?;
    let rows = (0..=order)
        .map(|n| IdentityRow::new(n, product.coeffs()[n].clone(), right.coeffs()[n].clone()))
        .collect();
    Ok(IdentityReport::new(
        "lemma5.2",
        &[("q", q.to_string())],
        order,
        rows,
        1,
    ))
}

/// The Eulerian generating function for `Des_q[(a^{r-1}b)^n w]` at a rational
/// `q`: alternating left side against the quotient on the right, all
/// coefficients up to `order`.
pub fn prop_5_3_check(
    r: usize,
    w: &DescentWord,
    q: &Rational,
    order: usize,
) -> Result<IdentityReport> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be positive".into()));
    }
    let k = w.degree() + 1;
    let on_lattice = |deg: usize| deg >= k && (deg - k).is_multiple_of(r);
    let left = eulerian_series(order, q, |deg| {
        if !on_lattice(deg) {
            return Ok(Rational::zero());
        }
        let n = (deg - k) / r;
        Ok(des_q(&DescentWord::periodic(r, n, w))?.eval(q) * int(sign(n)))
    })?;
    let numerator = eulerian_series(order, q, |deg| {
        if !on_lattice(deg) {
            return Ok(Rational::zero());
        }
        Ok(des_q(&DescentWord::a_power(deg - k).concat(w))?.eval(q))
    })?;
    let denominator = eulerian_series(order, q, |deg| {
        Ok(if deg % r == 0 {
            Rational::one()
        } else {
            Rational::zero()
        })
    })?;
    let right = numerator.divide(&denominator)?;
    let rows = (0..=order)
        .map(|deg| IdentityRow::new(deg, left.coeffs()[deg].clone(), right.coeffs()[deg].clone()))
        .collect();
    Ok(IdentityReport::new(
        "prop5.3",
        &[
            ("r", r.to_string()),
            ("w", w.to_string()),
            ("q", q.to_string()),
        ],
        order,
        rows,
        1,
    ))
}

/// Largest index accepted by [`euler_number`].
pub const MAX_EULER_INDEX: usize = 20;

/// `E_i` by counting alternating permutations `σ_1 < σ_2 > σ_3 < ...`.
pub fn euler_number_enumerate(i: usize) -> Result<u128> {
    guard("max_euler_enumeration", 10, i)?;
    if i <= 1 {
        return Ok(1);
    }
    let pattern = DescentWord(
        (0..i - 1)
            .map(|p| if p % 2 == 0 { Letter::A } else { Letter::B })
            .collect(),
    );
    Ok(for_each_chunk(
        i,
        |sigma| u128::from(descent_word_unchecked(sigma) == pattern),
        |acc, v| *acc += v,
        || 0u128,
    ))
}

/// `E_i` from the boustrophedon (Seidel–Entringer) triangle.
pub fn euler_number(i: usize) -> Result<u128> {
    guard("max_euler_index", MAX_EULER_INDEX, i)?;
    let mut row: Vec<u128> = vec![1];
    for n in 1..=i {
        let mut next = vec![0u128; n + 1];
        for k in 1..=n {
            next[k] = next[k - 1] + row[n - k];
        }
        row = next;
    }
    Ok(*row.last().expect("row is nonempty"))
}

/// Brute `μ(Π_m^{r,k+1})`, `m = rn + k + 1`, against the printed
/// `(-1)^n·Des[(a^{r-1}b)^n a^{k-1}]` for `0 ≤ n ≤ nmax`. The documented sign
/// is `ε = -1`.
pub fn mu_descent_check(
    r: usize,
    k: usize,
    nmax: usize,
    guards: &Guards,
) -> Result<IdentityReport> {
    if r == 0 || k == 0 {
        return Err(Error::InvalidParameter("r and k must be positive".into()));
    }
    let ns: Vec<usize> = (0..=nmax).collect();
    let rows: Vec<IdentityRow> = exec::map(&ns, |&n| -> Result<IdentityRow> {
        let m = r * n + k + 1;
        let mu = build_extended(m, r, k + 1, guards)?
            .poset
            .mobius_bottom_top()
            .unwrap_or(0);
        let des = des_count(&DescentWord::periodic(r, n, &DescentWord::a_power(k - 1)))?;
        Ok(IdentityRow::new(n, int(mu), int(sign(n) * des as i64)))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(IdentityReport::new(
        "thm5.4",
        &[("r", r.to_string()), ("k", k.to_string())],
        nmax,
        rows,
        -1,
    ))
}

/// `μ(Π_{rn+1}^{r,1}) = 0` for `1 ≤ n ≤ nmax`, with the mechanism: the join
/// of all atoms is not `1̂`.
pub fn mu_j1_check(r: usize, nmax: usize, guards: &Guards) -> Result<IdentityReport> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be positive".into()));
    }
    let ns: Vec<usize> = (1..=nmax).collect();
    let cells: Vec<(IdentityRow, bool)> = exec::map(&ns, |&n| -> Result<(IdentityRow, bool)> {
        let p = build_extended(r * n + 1, r, 1, guards)?.poset;
        let mu = p.mobius_bottom_top().unwrap_or(0);
        let bottom = p.bottom().unwrap_or(0);
        let atoms = p.upper_covers(bottom);
        let join = atoms
            .iter()
            .skip(1)
            .try_fold(atoms[0], |acc, &a| p.join(acc, a));
        Ok((
            IdentityRow::new(n, int(mu), Rational::zero()),
            join != p.top(),
        ))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let mechanism = cells.iter().all(|c| c.1);
    Ok(IdentityReport::new(
        "thm5.5",
        &[("r", r.to_string())],
        nmax,
        cells.into_iter().map(|c| c.0).collect(),
        1,
    )
    .with_check("join of atoms is below 1̂", mechanism))
}

/// Brute `μ(Π_{rn}^r)` against the printed `(-1)^{n-1}·Des[(a^{r-1}b)^{n-1} a^{r-2}]`
/// for `1 ≤ n ≤ nmax`; documented sign `ε = -1`.
pub fn r_divisible_descent_check(r: usize, nmax: usize, guards: &Guards) -> Result<IdentityReport> {
    if r < 2 {
        return Err(Error::InvalidParameter("r must be at least 2".into()));
    }
    let ns: Vec<usize> = (1..=nmax).collect();
    let rows: Vec<IdentityRow> = exec::map(&ns, |&n| -> Result<IdentityRow> {
        let mu = build_r_divisible(r * n, r, guards)?
            .poset
            .mobius_bottom_top()
            .unwrap_or(0);
        let des = des_count(&DescentWord::periodic(
            r,
            n - 1,
            &DescentWord::a_power(r - 2),
        ))?;
        Ok(IdentityRow::new(n, int(mu), int(sign(n - 1) * des as i64)))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(IdentityReport::new(
        "cor5.6",
        &[("r", r.to_string())],
        nmax,
        rows,
        -1,
    ))
}

/// `μ(Π_{2n}^2)` against the printed `(-1)^{n-1}·E_{2n-1}`, with `E` from
/// alternating-permutation enumeration; documented sign `ε = -1`.
pub fn tangent_check(nmax: usize, guards: &Guards) -> Result<IdentityReport> {
    let ns: Vec<usize> = (1..=nmax).collect();
    let rows: Vec<IdentityRow> = exec::map(&ns, |&n| -> Result<IdentityRow> {
        let mu = build_r_divisible(2 * n, 2, guards)?
            .poset
            .mobius_bottom_top()
            .unwrap_or(0);
        let e = euler_number_enumerate(2 * n - 1)?;
        Ok(IdentityRow::new(n, int(mu), int(sign(n - 1) * e as i64)))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(IdentityReport::new("sylvester", &[], nmax, rows, -1))
}

impl One for QPolynomial {
    fn one() -> Self {
        QPolynomial::one()
    }
}

impl Mul for QPolynomial {
    type Output = QPolynomial;

    fn mul(self, other: QPolynomial) -> QPolynomial {
        &self * &other
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::rat;

    fn w(s: &str) -> DescentWord {
        s.parse().unwrap()
    }

    #[test]
    fn words_of_permutations() {
        assert_eq!(descent_word(&[1, 2, 3, 4]).unwrap().to_string(), "aaa");
        assert_eq!(inversions(&[1, 2, 3, 4]).unwrap(), 0);
        assert_eq!(descent_word(&[1, 3, 2]).unwrap(), w("ab"));
        assert_eq!(inversions(&[1, 3, 2]).unwrap(), 1);
        let sigma = parse_permutation("562418379").unwrap();
        assert_eq!(descent_word(&sigma).unwrap().b_positions(), vec![2, 4, 6]);
        assert!(descent_word(&[1, 1]).is_err());
        assert!(parse_permutation("1x").is_err());
        assert_eq!(DescentWord::periodic(2, 2, &w("a")), w("ababa"));
        assert_eq!(DescentWord::empty().to_string(), "1");
        assert_eq!(w("1"), DescentWord::empty());
    }

    #[test]
    fn des_values() {
        assert_eq!(des_count(&w("aaaa")).unwrap(), 1);
        assert_eq!(des_count(&w("ab")).unwrap(), 2);
        assert_eq!(des_q(&w("aba")).unwrap().to_string(), "q + 2q² + q³ + q⁴");
        assert_eq!(
            des_q(&w("aba")).unwrap(),
            QPolynomial::new(vec![0, 1, 2, 1, 1])
        );
        assert_eq!(des_q(&w("bbbb")).unwrap(), QPolynomial::monomial(10));
        assert_eq!(des_q(&w("aab")).unwrap().to_string(), "q + q² + q³");
        assert_eq!(des_count(&w("abab")).unwrap(), 16);
        assert_eq!(des_count(&w("aabaa")).unwrap(), 19);
        assert_eq!(des_q(&DescentWord::empty()).unwrap(), QPolynomial::one());
    }

    #[test]
    fn two_methods_agree() {
        for d in 0..=6 {
            for u in DescentWord::all(d) {
                assert_eq!(
                    des_q_enumerate(&u).unwrap(),
                    des_q_inclusion_exclusion(&u).unwrap(),
                    "{u}"
                );
            }
        }
    }

    #[test]
    fn gaussian_values() {
        assert_eq!(gaussian(5, 0).unwrap(), QPolynomial::one());
        assert_eq!(gaussian(2, 1).unwrap().to_string(), "1 + q");
        assert_eq!(gaussian(4, 2).unwrap().to_string(), "1 + q + 2q² + q³ + q⁴");
        assert!(gaussian(2, 3).is_err());
        let g = gaussian(6, 2).unwrap();
        assert_eq!(g.at_one(), 15);
        let rev: Vec<i128> = g.coeffs().iter().rev().copied().collect();
        assert_eq!(rev, g.coeffs());
    }

    #[test]
    fn multiplication_theorem() {
        assert!(multiplication_check(&w("a"), &w("a")).unwrap());
        assert!(multiplication_check(&DescentWord::empty(), &DescentWord::empty()).unwrap());
        let (checked, failures) = multiplication_exhaustive(6).unwrap();
        assert!(checked > 0);
        assert_eq!(failures, 0);
    }

    #[test]
    fn eulerian_product() {
        for q in [int(1), int(2)] {
            let r = eulerian_product_check(
                |n| DescentWord::a_power(n - 1),
                |n| DescentWord::b_power(n - 1),
                &q,
                6,
            )
            .unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn prop_5_3_small() {
        for (r, word) in [(2, "a"), (1, "1"), (3, "aa")] {
            for q in [int(1), int(2), rat(1, 3)] {
                let rep = prop_5_3_check(r, &w(word), &q, 7).unwrap();
                assert!(rep.passed(), "{rep:?}");
            }
        }
        assert!(prop_5_3_check(2, &w("a"), &int(-1), 4).is_err());
    }

    #[test]
    fn euler_numbers() {
        let expect = [1u128, 1, 1, 2, 5, 16, 61, 272, 1385];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(euler_number(i).unwrap(), e);
            assert_eq!(euler_number_enumerate(i).unwrap(), e);
        }
        for n in 1..=4 {
            let u = DescentWord::periodic(2, n - 1, &DescentWord::empty());
            assert_eq!(des_count(&u).unwrap(), euler_number(2 * n - 1).unwrap());
        }
    }

    #[test]
    fn mobius_versus_descents() {
        let g = Guards::default();
        let r = mu_descent_check(2, 1, 2, &g).unwrap();
        assert_eq!(r.rows[1].brute, int(2));
        assert_eq!(r.rows[2].brute, int(-16));
        assert_eq!(r.epsilon, Some(-1));
        assert!(r.passed());
        assert!(mu_descent_check(1, 1, 4, &g).unwrap().passed());
        let j1 = mu_j1_check(2, 2, &g).unwrap();
        assert!(j1.passed(), "{j1:?}");
        assert!(mu_j1_check(3, 1, &g).unwrap().passed());
        let c = r_divisible_descent_check(2, 3, &g).unwrap();
        assert!(c.passed(), "{c:?}");
        assert!(tangent_check(3, &g).unwrap().passed());
    }
}
