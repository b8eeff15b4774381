use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A linear form `n*s + nu` in the variable `s`, stored as `(n, nu)`.
pub type LinearForm = (u64, i64);

/// Rational function in `s` whose denominator is a product of linear forms.
///
/// Canonical form:
/// * the numerator is an integer polynomial (ascending coefficients) whose
///   primitive part has positive leading coefficient; the overall sign and
///   integral scale live in the numerator;
/// * the denominator maps linear forms to multiplicities; every form is
///   primitive with `n > 0`, except that the denominator of the overall
///   rational scale is folded into one copy of the largest form (or into a
///   constant form `(0, b)` when there is no form at all);
/// * no retained form has its root `-nu/n` as a root of the numerator.
///
/// Two values are equal as rational functions iff they are structurally
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFuncS {
    numerator: Vec<BigInt>,
    denominator: BTreeMap<LinearForm, u32>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul_linear(p: &[BigRational], (n, nu): LinearForm) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        out[k] += c * rat(nu);
        out[k + 1] += c * rat(n as i64);
    }
    trim(&mut out);
    out
}

fn poly_eval(p: &[BigRational], s: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * s + c;
    }
    acc
}

/// Exact division of `p` by `n*s + nu` (the remainder must vanish).
fn poly_div_linear(p: &[BigRational], (n, nu): LinearForm) -> Vec<BigRational> {
    debug_assert!(n > 0);
    let deg = p.len() - 1;
    let mut q = vec![BigRational::zero(); deg];
    let mut rem = p.to_vec();
    let lead = rat(n as i64);
    for k in (1..=deg).rev() {
        let c = &rem[k] / &lead;
        rem[k - 1] -= &c * rat(nu);
        q[k - 1] = c;
    }
    debug_assert!(rem[0].is_zero());
    q
}

/// Normalize a linear form to a primitive one with positive `n`, returning
/// the scalar that was divided out. `n = 0` forms become pure scalars.
fn primitive_form((n, nu): LinearForm) -> (BigRational, Option<LinearForm>) {
    if n == 0 {
        return (rat(nu), None);
    }
    let g = (n as i64).gcd(&nu);
    (rat(g), Some((n / g as u64, nu / g)))
}

impl RatFuncS {
    pub fn zero() -> Self {
        Self {
            numerator: Vec::new(),
            denominator: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_terms([(c, Vec::new())])
    }

    /// `1 / prod(n_k s + nu_k)`
    pub fn reciprocal_of(forms: &[LinearForm]) -> Self {
        Self::from_terms([(BigRational::one(), forms.to_vec())])
    }

    /// Sum of `c_k / prod_j (n_j s + nu_j)`, brought to canonical form.
    ///
    /// Panics if some form is `(0, 0)`; callers reject degenerate pairs first.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, Vec<LinearForm>)>,
    {
        let mut normalized: Vec<(BigRational, BTreeMap<LinearForm, u32>)> = Vec::new();
        let mut common: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for (c, forms) in terms {
            if c.is_zero() {
                continue;
            }
            let mut coeff = c;
            let mut den: BTreeMap<LinearForm, u32> = BTreeMap::new();
            for f in forms {
                assert!(f != (0, 0), "degenerate linear form (0, 0)");
                let (scale, prim) = primitive_form(f);
                coeff /= scale;
                if let Some(p) = prim {
                    *den.entry(p).or_insert(0) += 1;
                }
            }
            for (f, m) in &den {
                let e = common.entry(*f).or_insert(0);
                *e = (*e).max(*m);
            }
            normalized.push((coeff, den));
        }

        let mut num: Vec<BigRational> = Vec::new();
        for (coeff, den) in &normalized {
            let mut p = vec![coeff.clone()];
            for (f, m) in &common {
                let have = den.get(f).copied().unwrap_or(0);
                for _ in have..*m {
                    p = poly_mul_linear(&p, *f);
                }
            }
            if num.len() < p.len() {
                num.resize(p.len(), BigRational::zero());
            }
            for (k, c) in p.into_iter().enumerate() {
                num[k] += c;
            }
        }
        trim(&mut num);
        Self::canonicalize(num, common)
    }

    fn canonicalize(mut num: Vec<BigRational>, mut den: BTreeMap<LinearForm, u32>) -> Self {
        if num.is_empty() {
            return Self::zero();
        }
        for (f, m) in den.iter_mut() {
            let root = BigRational::new(BigInt::from(-f.1), BigInt::from(f.0));
            while *m > 0 && num.len() > 1 && poly_eval(&num, &root).is_zero() {
                num = poly_div_linear(&num, *f);
                *m -= 1;
            }
        }
        den.retain(|_, m| *m > 0);

        // num = (a / b) * P with P primitive integral, positive leading coefficient
        let den_lcm = num.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = num
            .iter()
            .map(|c| (c * BigRational::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(|c| c.is_negative()) {
            content = -content;
        }
        let scale = BigRational::new(content.clone(), den_lcm);
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();

        let a = scale.numer().clone();
        let b = scale.denom().clone();
        let numerator: Vec<BigInt> = prim.iter().map(|c| c * &a).collect();
        if !b.is_one() {
            let b64: i64 = b.clone().try_into().expect("scale denominator fits in i64");
            match den.keys().next_back().copied() {
                Some(last) => {
                    let m = den.get_mut(&last).unwrap();
                    *m -= 1;
                    if *m == 0 {
                        den.remove(&last);
                    }
                    let scaled = (last.0 * b64 as u64, last.1 * b64);
                    *den.entry(scaled).or_insert(0) += 1;
                }
                None => {
                    den.insert((0, b64), 1);
                }
            }
        }
        Self {
            numerator,
            denominator: den,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    /// Numerator coefficients, constant term first.
    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denominator(&self) -> &BTreeMap<LinearForm, u32> {
        &self.denominator
    }

    /// Evaluate at a rational point. Returns `None` at a pole.
    pub fn eval(&self, s: &BigRational) -> Option<BigRational> {
        let mut den = BigRational::one();
        for (&(n, nu), &m) in &self.denominator {
            let v = rat(n as i64) * s + rat(nu);
            if v.is_zero() {
                return None;
            }
            for _ in 0..m {
                den *= &v;
            }
        }
        let num: Vec<BigRational> = self
            .numerator
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        Some(poly_eval(&num, s) / den)
    }

    /// Poles with multiplicities, ascending.
    pub fn poles(&self) -> Vec<(BigRational, u32)> {
        let mut out: BTreeMap<BigRational, u32> = BTreeMap::new();
        for (&(n, nu), &m) in &self.denominator {
            if n == 0 {
                continue;
            }
            let root = BigRational::new(BigInt::from(-nu), BigInt::from(n));
            *out.entry(root).or_insert(0) += m;
        }
        out.into_iter().collect()
    }

    /// Machine-readable form: `num=<c0>,<c1>,... den=<n>:<nu>:<mult>;...`.
    pub fn to_record_fields(&self) -> (String, String) {
        let num = if self.numerator.is_empty() {
            "0".to_string()
        } else {
            self.numerator
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let den = if self.denominator.is_empty() {
            "1".to_string()
        } else {
            self.denominator
                .iter()
                .map(|((n, nu), m)| format!("{n}:{nu}:{m}"))
                .collect::<Vec<_>>()
                .join(";")
        };
        (num, den)
    }

    /// Inverse of [`RatFuncS::to_record_fields`].
    pub fn from_record_fields(num: &str, den: &str) -> Option<Self> {
        let numer: Vec<BigRational> = if num == "0" {
            Vec::new()
        } else {
            num.split(',')
                .map(|c| c.parse::<BigInt>().ok().map(BigRational::from_integer))
                .collect::<Option<_>>()?
        };
        let mut forms = BTreeMap::new();
        if den != "1" {
            for part in den.split(';') {
                let mut it = part.split(':');
                let n: u64 = it.next()?.parse().ok()?;
                let nu: i64 = it.next()?.parse().ok()?;
                let m: u32 = it.next()?.parse().ok()?;
                if (n, nu) == (0, 0) || m == 0 || it.next().is_some() {
                    return None;
                }
                *forms.entry((n, nu)).or_insert(0) += m;
            }
        }
        let (num, den) = split_scale(numer, &forms);
        Some(Self::canonicalize(num, den))
    }

    /// Numerator over `Q` and primitive denominator forms.
    fn split(&self) -> (Vec<BigRational>, BTreeMap<LinearForm, u32>) {
        let num = self
            .numerator
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        split_scale(num, &self.denominator)
    }

    /// Multiply by `s^k`.
    pub fn mul_s_pow(&self, k: usize) -> Self {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let (num, den) = self.split();
        let mut p = vec![BigRational::zero(); k];
        p.extend(num);
        Self::canonicalize(p, den)
    }

    fn add_impl(&self, other: &Self) -> Self {
        let (na, da) = self.split();
        let (nb, db) = other.split();
        let mut common = da.clone();
        for (f, m) in &db {
            let e = common.entry(*f).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |num: Vec<BigRational>, den: &BTreeMap<LinearForm, u32>| {
            let mut p = num;
            if p.is_empty() {
                return p;
            }
            for (f, m) in &common {
                let have = den.get(f).copied().unwrap_or(0);
                for _ in have..*m {
                    p = poly_mul_linear(&p, *f);
                }
            }
            p
        };
        let pa = lift(na, &da);
        let pb = lift(nb, &db);
        let mut sum = vec![BigRational::zero(); pa.len().max(pb.len())];
        for p in [pa, pb] {
            for (k, c) in p.into_iter().enumerate() {
                sum[k] += c;
            }
        }
        trim(&mut sum);
        Self::canonicalize(sum, common)
    }
}

/// Divide the scale of non-primitive forms into the numerator.
fn split_scale(
    mut num: Vec<BigRational>,
    forms: &BTreeMap<LinearForm, u32>,
) -> (Vec<BigRational>, BTreeMap<LinearForm, u32>) {
    let mut scale = BigRational::one();
    let mut den = BTreeMap::new();
    for (&f, &m) in forms {
        let (sc, pf) = primitive_form(f);
        for _ in 0..m {
            scale *= &sc;
        }
        if let Some(pf) = pf {
            *den.entry(pf).or_insert(0) += m;
        }
    }
    for c in num.iter_mut() {
        *c /= &scale;
    }
    (num, den)
}

impl<'a> Add<&'a RatFuncS> for &'a RatFuncS {
    type Output = RatFuncS;
    fn add(self, rhs: &'a RatFuncS) -> RatFuncS {
        self.add_impl(rhs)
    }
}

impl<'a> Sub<&'a RatFuncS> for &'a RatFuncS {
    type Output = RatFuncS;
    fn sub(self, rhs: &'a RatFuncS) -> RatFuncS {
        self.add_impl(&-rhs)
    }
}

impl Neg for &RatFuncS {
    type Output = RatFuncS;
    fn neg(self) -> RatFuncS {
        RatFuncS {
            numerator: self.numerator.iter().map(|c| -c).collect(),
            denominator: self.denominator.clone(),
        }
    }
}

fn fmt_poly_s(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = match k {
            0 => mag.to_string(),
            1 => format!("{mag}*s"),
            _ => format!("{mag}*s^{k}"),
        };
        if first {
            if c.is_negative() {
                out.push('-');
            }
            out.push_str(&body);
            first = false;
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    out
}

fn fmt_form((n, nu): LinearForm) -> String {
    if n == 0 {
        return format!("({nu})");
    }
    if nu < 0 {
        format!("({n}*s - {})", -nu)
    } else {
        format!("({n}*s + {nu})")
    }
}

impl fmt::Display for RatFuncS {
    /// Canonical text, e.g. `(4*s + 5) / ((1*s + 1)*(6*s + 5))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numerator.is_empty() {
            return write!(f, "0");
        }
        let nonzero = self.numerator.iter().filter(|c| !c.is_zero()).count();
        let num = fmt_poly_s(&self.numerator);
        if self.denominator.is_empty() {
            return write!(f, "{num}");
        }
        let num = if nonzero > 1 { format!("({num})") } else { num };
        let factors: Vec<String> = self
            .denominator
            .iter()
            .map(|(form, m)| {
                if *m == 1 {
                    fmt_form(*form)
                } else {
                    format!("{}^{m}", fmt_form(*form))
                }
            })
            .collect();
        if factors.len() == 1 {
            write!(f, "{num} / {}", factors[0])
        } else {
            write!(f, "{num} / ({})", factors.join("*"))
        }
    }
}
