//! Exact multivariate polynomials with rational coefficients.
//!
//! Used for symbolic Laplacians (continuum and lattice) and gradients; numeric
//! evaluation converts coefficients to `f64` once.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolynomialError {
    #[error("exponent vector {exponents:?} has length {len}, expected {dim}")]
    BadExponent {
        exponents: Vec<u32>,
        len: usize,
        dim: usize,
    },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("cannot parse polynomial `{input}`: {message}")]
    Parse { input: String, message: String },
}

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: BigRational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate function `x_axis`.
    pub fn variable(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        let mut p = Self::zero(dim);
        p.add_term(e, BigRational::one());
        p
    }

    /// Merges like terms and drops zero coefficients.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, PolynomialError>
    where
        I: IntoIterator<Item = (Exponents, BigRational)>,
    {
        if dim == 0 {
            return Err(PolynomialError::ZeroDimension);
        }
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(PolynomialError::BadExponent {
                    len: e.len(),
                    exponents: e,
                    dim,
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Largest exponent of any single variable.
    pub fn max_axis_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Whether every term has total degree `m`.
    pub fn is_homogeneous_of_degree(&self, m: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == m)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
            .expect("dimension preserved")
    }

    pub fn derivative(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[axis] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[axis] -= 1;
            out.add_term(e2, c * BigRational::from_integer(BigInt::from(e[axis])));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.dim).map(|i| self.derivative(i)).collect()
    }

    /// Continuum Laplacian `sum_i d^2/dx_i^2`.
    pub fn laplacian(&self) -> Self {
        (0..self.dim).fold(Self::zero(self.dim), |acc, i| {
            &acc + &self.derivative(i).derivative(i)
        })
    }

    /// `p(x + shift * e_axis)`, expanded binomially.
    pub fn translate(&self, axis: usize, shift: i64) -> Self {
        let s = BigRational::from_integer(BigInt::from(shift));
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let n = e[axis];
            let mut power = BigRational::one();
            for j in 0..=n {
                // term: C(n, j) * shift^j * x_axis^(n-j)
                let mut e2 = e.clone();
                e2[axis] = n - j;
                let coeff = c * BigRational::from_integer(binomial(n, j)) * &power;
                out.add_term(e2, coeff);
                power *= &s;
            }
        }
        out
    }

    /// Lattice Laplacian `sum_i [p(x + e_i) + p(x - e_i) - 2 p(x)]`.
    pub fn discrete_laplacian(&self) -> Self {
        let two = rational(2, 1);
        (0..self.dim).fold(Self::zero(self.dim), |acc, i| {
            let second = &(&self.translate(i, 1) + &self.translate(i, -1)) - &self.scale(&two);
            &acc + &second
        })
    }

    pub fn eval_rational(&self, x: &[BigRational]) -> BigRational {
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    term *= xi;
                }
            }
            total += term;
        }
        total
    }

    pub fn eval_integer(&self, x: &[i64]) -> BigRational {
        let xs: Vec<BigRational> = x
            .iter()
            .map(|&v| BigRational::from_integer(BigInt::from(v)))
            .collect();
        self.eval_rational(&xs)
    }

    /// Floating-point evaluator with coefficients rounded once.
    pub fn to_f64(&self) -> FloatPolynomial {
        FloatPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        }
    }

    /// Parses a sum of signed terms such as `x^2 - y^2`, `1*x^1*y^1` or
    /// `3/2*x1*x3^2`. Variables are `x, y, z, w` or `x1 .. xd`.
    pub fn parse(dim: usize, input: &str) -> Result<Self, PolynomialError> {
        let fail = |message: String| PolynomialError::Parse {
            input: input.to_string(),
            message,
        };
        if dim == 0 {
            return Err(PolynomialError::ZeroDimension);
        }
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(fail("empty input".into()));
        }

        let mut pieces = Vec::new();
        let mut current = String::new();
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                pieces.push(std::mem::take(&mut current));
            }
            current.push(ch);
        }
        pieces.push(current);

        let mut terms = Vec::new();
        for piece in pieces {
            let (negative, body) = match piece.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            if body.is_empty() {
                return Err(fail("dangling sign".into()));
            }
            let mut coeff = if negative {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            let mut exps = vec![0u32; dim];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(fail("empty factor".into()));
                }
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff *= parse_rational(factor)
                        .ok_or_else(|| fail(format!("invalid coefficient `{factor}`")))?;
                    continue;
                }
                let (name, power) = match factor.split_once('^') {
                    Some((n, p)) => (
                        n,
                        p.parse::<u32>()
                            .map_err(|_| fail(format!("invalid exponent in `{factor}`")))?,
                    ),
                    None => (factor, 1),
                };
                let axis = variable_index(name)
                    .ok_or_else(|| fail(format!("unknown variable `{name}`")))?;
                if axis >= dim {
                    return Err(fail(format!("variable `{name}` exceeds dimension {dim}")));
                }
                exps[axis] += power;
            }
            terms.push((exps, coeff));
        }
        Self::from_terms(dim, terms)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn variable_index(name: &str) -> Option<usize> {
    match name {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        "w" => Some(3),
        _ => {
            let k: usize = name.strip_prefix('x')?.parse().ok()?;
            k.checked_sub(1)
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            write!(f, "{}", c.abs())?;
            for (axis, &k) in e.iter().enumerate() {
                if k > 0 {
                    write!(f, "*x{}^{}", axis + 1, k)?;
                }
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

/// `f64` image of a [`Polynomial`] for quadrature.
#[derive(Debug, Clone)]
pub struct FloatPolynomial {
    terms: Vec<(Exponents, f64)>,
}

impl FloatPolynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }
}

/// A polynomial together with the verdict of its exact continuum Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicPolynomial {
    pub poly: Polynomial,
    pub is_continuum_harmonic: bool,
}

impl HarmonicPolynomial {
    pub fn new(poly: Polynomial) -> Self {
        let is_continuum_harmonic = poly.laplacian().is_zero();
        Self {
            poly,
            is_continuum_harmonic,
        }
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn parse(dim: usize, input: &str) -> Result<Self, PolynomialError> {
        Ok(Self::new(Polynomial::parse(dim, input)?))
    }
}

pub fn make_polynomial<I>(dim: usize, terms: I) -> Result<HarmonicPolynomial, PolynomialError>
where
    I: IntoIterator<Item = (Exponents, BigRational)>,
{
    Ok(HarmonicPolynomial::new(Polynomial::from_terms(dim, terms)?))
}

/// Real part of `(x + i y)^m` in two variables.
pub fn real_power_2d(m: u32) -> Polynomial {
    // Re (x + iy)^m = sum_{j even} C(m, j) (-1)^{j/2} x^{m-j} y^j
    let terms = (0..=m).step_by(2).map(|j| {
        let sign = if (j / 2) % 2 == 0 { 1 } else { -1 };
        (
            vec![m - j, j],
            BigRational::from_integer(binomial(m, j) * BigInt::from(sign)),
        )
    });
    Polynomial::from_terms(2, terms).expect("two variables")
}
