use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Sparse integer polynomial in `L` (Laurent) and `T` (ordinary).
///
/// Keys are `(exponent of L, exponent of T)`; zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly2 {
    terms: BTreeMap<(i64, u64), BigInt>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0, 0)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c.into(), 0, 0)
    }

    pub fn monomial(c: BigInt, l_exp: i64, t_exp: u64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((l_exp, t_exp), c);
        }
        Self { terms }
    }

    /// `L`
    pub fn l() -> Self {
        Self::monomial(BigInt::one(), 1, 0)
    }

    /// `L^a`
    pub fn l_pow(a: i64) -> Self {
        Self::monomial(BigInt::one(), a, 0)
    }

    /// `T^n`
    pub fn t_pow(n: u64) -> Self {
        Self::monomial(BigInt::one(), 0, n)
    }

    /// `L^nu - T^n`, the denominator factor attached to a pair `(nu, N)`.
    pub fn binomial(nu: i64, n: u64) -> Self {
        let mut p = Self::l_pow(nu);
        p.add_term(BigInt::from(-1), 0, n);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, u64), BigInt)>>(it: I) -> Self {
        let mut p = Self::zero();
        for ((a, b), c) in it {
            p.add_term(c, a, b);
        }
        p
    }

    pub fn add_term(&mut self, c: BigInt, l_exp: i64, t_exp: u64) {
        if c.is_zero() {
            return;
        }
        let key = (l_exp, t_exp);
        let remove = match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                v.is_zero()
            }
            None => {
                self.terms.insert(key, c);
                false
            }
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u64, &BigInt)> {
        self.terms.iter().map(|(&(a, b), c)| (a, b, c))
    }

    pub fn coeff(&self, l_exp: i64, t_exp: u64) -> BigInt {
        self.terms
            .get(&(l_exp, t_exp))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// True when no term involves `T`.
    pub fn is_t_free(&self) -> bool {
        self.terms.keys().all(|&(_, b)| b == 0)
    }

    pub fn t_degree(&self) -> u64 {
        self.terms.keys().map(|&(_, b)| b).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiply by `L^a T^b`.
    pub fn shift(&self, a: i64, b: u64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(x, y), v)| ((x + a, y + b), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Value at `L = 1` of a `T`-free polynomial.
    pub fn sum_at_l_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Coefficient of `(L - 1)^m` in the Taylor expansion of a `T`-free
    /// Laurent polynomial at `L = 1`.
    ///
    /// Uses `L^k = (1 + h)^k = sum_m binom(k, m) h^m`, valid for negative `k`
    /// with the generalized binomial coefficient.
    pub fn taylor_at_l_one(&self, m: u32) -> num_rational::BigRational {
        let mut acc = num_rational::BigRational::zero();
        for (&(k, _), c) in &self.terms {
            acc += num_rational::BigRational::from_integer(c.clone()) * gen_binomial(k, m);
        }
        acc
    }

    /// Substitute `T = L^a`, producing a `T`-free Laurent polynomial.
    pub fn substitute_t_by_l_pow(&self, a: i64) -> Self {
        let mut out = Self::zero();
        for (&(x, y), c) in &self.terms {
            out.add_term(c.clone(), x + a * y as i64, 0);
        }
        out
    }
}

/// Generalized binomial coefficient `k (k-1) ... (k-m+1) / m!`.
fn gen_binomial(k: i64, m: u32) -> num_rational::BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..m as i64 {
        num *= BigInt::from(k - j);
        den *= BigInt::from(j + 1);
    }
    num_rational::BigRational::new(num, den)
}

impl<'a> Add<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(c.clone(), a, b);
        }
        out
    }
}

impl<'a> Sub<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(-c, a, b);
        }
        out
    }
}

impl<'a> Mul<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term(c1 * c2, a1 + a2, b1 + b2);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly2> for Poly2 {
            type Output = Poly2;
            fn $m(self, rhs: Poly2) -> Poly2 {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}

impl fmt::Display for Poly2 {
    /// Terms in descending canonical order, e.g. `L^2*T - 2*L + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            if a != 0 {
                factors.push(if a == 1 {
                    "L".to_string()
                } else {
                    format!("L^{a}")
                });
            }
            if b != 0 {
                factors.push(if b == 1 {
                    "T".to_string()
                } else {
                    format!("T^{b}")
                });
            }
            let mag = c.abs();
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", mag, factors.join("*"))
            };
            if first {
                if c.is_negative() {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}
