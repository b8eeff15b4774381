//! Motivic, topological and twisted topological zeta functions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{eval_at_one_with_cancellation, BigRat, Poly2, RatFuncS};
use crate::diagram::{Diagram, Mult, Valency};
use crate::error::{Error, Result};
use crate::refine::realizable_refine;

/// `(nu, N)`, standing for the factor `T^N / (L^nu - T^N)`.
pub type Pair = (i64, u64);

/// `sum_k c_k(L) prod_{(nu, N) in key_k} T^N / (L^nu - T^N)`.
///
/// Keys are sorted multisets of pairs; coefficients are Laurent polynomials
/// in `L`. Terms with equal keys are merged on insertion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZetaExpr {
    terms: BTreeMap<Vec<Pair>, Poly2>,
}

impl ZetaExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, mut key: Vec<Pair>, coeff: Poly2) -> Result<()> {
        debug_assert!(coeff.is_t_free());
        if key.contains(&(0, 0)) {
            return Err(Error::DegenerateDenominator);
        }
        key.sort_unstable();
        if coeff.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(key.clone()).or_default();
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Pair>, &Poly2)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: i64) -> Self {
        let c = BigInt::from(c);
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.scale(&c)).unwrap();
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone()).unwrap();
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(-1))
    }

    /// Exact test for the zero function.
    ///
    /// After multiplying by the product `Q0` of the `T`-free factors, the
    /// sum is `P / Q` with `Q = prod (L^nu - T^N)^m` over the `N > 0`
    /// factors and `deg_T P <= deg_T Q = D`. Since `Q(T=0)` is a unit, `P`
    /// vanishes iff the `T`-expansion of the sum vanishes up to `T^D`.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        match self.series_is_zero() {
            Some(z) => z,
            None => self.cleared().0.is_zero(),
        }
    }

    /// Equality as functions of `(L, T)`.
    pub fn exact_eq(&self, other: &Self) -> bool {
        self.minus(other).is_zero()
    }

    fn max_multiplicities(&self) -> BTreeMap<Pair, u32> {
        let mut out: BTreeMap<Pair, u32> = BTreeMap::new();
        for key in self.terms.keys() {
            let mut here: BTreeMap<Pair, u32> = BTreeMap::new();
            for &p in key {
                *here.entry(p).or_insert(0) += 1;
            }
            for (p, m) in here {
                let e = out.entry(p).or_insert(0);
                *e = (*e).max(m);
            }
        }
        out
    }

    /// `None` on `i128` overflow.
    fn series_is_zero(&self) -> Option<bool> {
        let maxm = self.max_multiplicities();
        let degree: u64 = maxm
            .iter()
            .filter(|(p, _)| p.1 > 0)
            .map(|(p, m)| p.1 * *m as u64)
            .sum();
        let len = usize::try_from(degree).ok()?.checked_add(1)?;
        let mut total: Vec<HashMap<i64, i128>> = vec![HashMap::new(); len];

        for (key, coeff) in &self.terms {
            let mut here: BTreeMap<Pair, u32> = BTreeMap::new();
            for &p in key {
                *here.entry(p).or_insert(0) += 1;
            }
            // coefficient times the missing T-free factors
            let mut c = coeff.clone();
            for (&p, &m) in maxm.iter().filter(|(p, _)| p.1 == 0) {
                let have = here.get(&p).copied().unwrap_or(0);
                for _ in have..m {
                    c = &c * &Poly2::binomial(p.0, 0);
                }
            }
            let mut series: Vec<HashMap<i64, i128>> = vec![HashMap::new(); len];
            for (l, _, v) in c.terms() {
                series[0].insert(l, i128::try_from(v).ok()?);
            }
            for (&(nu, n), &m) in here.iter().filter(|(p, _)| p.1 > 0) {
                for _ in 0..m {
                    let mut next: Vec<HashMap<i64, i128>> = vec![HashMap::new(); len];
                    for (t, poly) in series.iter().enumerate() {
                        if poly.is_empty() {
                            continue;
                        }
                        let mut k = 1u64;
                        while t as u64 + n * k < len as u64 {
                            let slot = &mut next[t + (n * k) as usize];
                            let shift = -nu.checked_mul(k as i64)?;
                            for (&l, &v) in poly {
                                let e = slot.entry(l.checked_add(shift)?).or_insert(0);
                                *e = e.checked_add(v)?;
                            }
                            k += 1;
                        }
                    }
                    series = next;
                }
            }
            for (t, poly) in series.into_iter().enumerate() {
                for (l, v) in poly {
                    let e = total[t].entry(l).or_insert(0);
                    *e = e.checked_add(v)?;
                }
            }
        }
        Some(total.iter().all(|p| p.values().all(|v| *v == 0)))
    }

    /// `(numerator, denominator)` over the common denominator
    /// `prod (L^nu - T^N)^m`.
    pub fn cleared(&self) -> (Poly2, Poly2) {
        let maxm = self.max_multiplicities();
        let mut den = Poly2::one();
        for (&(nu, n), &m) in &maxm {
            den = &den * &Poly2::binomial(nu, n).pow(m);
        }
        let mut num = Poly2::zero();
        for (key, coeff) in &self.terms {
            let mut here: BTreeMap<Pair, u32> = BTreeMap::new();
            for &p in key {
                *here.entry(p).or_insert(0) += 1;
            }
            let tdeg: u64 = key.iter().map(|p| p.1).sum();
            let mut t = coeff.shift(0, tdeg);
            for (&(nu, n), &m) in &maxm {
                let have = here.get(&(nu, n)).copied().unwrap_or(0);
                t = &t * &Poly2::binomial(nu, n).pow(m - have);
            }
            num = &num + &t;
        }
        (num, den)
    }
}

impl fmt::Display for ZetaExpr {
    /// One term per `+`, e.g. `(L^2 - 2*L + 1)*T^3/((L - T)*(L^2 - T^2))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(key, c)| {
                let tdeg: u64 = key.iter().map(|p| p.1).sum();
                let num = match tdeg {
                    0 => format!("({c})"),
                    1 => format!("({c})*T"),
                    d => format!("({c})*T^{d}"),
                };
                let den: Vec<String> = key
                    .iter()
                    .map(|&(nu, n)| format!("({})", Poly2::binomial(nu, n)))
                    .collect();
                format!("{num}/({})", den.join("*"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One summand of the zeta functions of a realizable diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stratum {
    /// A node with its full valency `delta''`.
    Node { mult: Mult, full_valency: usize },
    /// An edge or an arrowhead: the two `(N, nu)` pairs it joins.
    Pair { a: Mult, b: Mult },
}

impl Stratum {
    fn mults(&self) -> Vec<Mult> {
        match self {
            Stratum::Node { mult, .. } => vec![*mult],
            Stratum::Pair { a, b } => vec![*a, *b],
        }
    }

    fn key(&self) -> Vec<Pair> {
        self.mults().into_iter().map(|(n, nu)| (nu, n)).collect()
    }

    fn motivic_coeff(&self) -> Poly2 {
        let lm1 = &Poly2::l() - &Poly2::one();
        match self {
            Stratum::Node { full_valency, .. } => {
                let c = &Poly2::l() + &Poly2::constant(1 - *full_valency as i64);
                &lm1 * &c
            }
            Stratum::Pair { .. } => &lm1 * &lm1,
        }
    }

    fn top_coeff(&self) -> i64 {
        match self {
            Stratum::Node { full_valency, .. } => 2 - *full_valency as i64,
            Stratum::Pair { .. } => 1,
        }
    }
}

/// Strata of a realizable, fully cached diagram.
pub fn strata_of_realizable(r: &Diagram) -> Result<Vec<Stratum>> {
    let t = r.cached_table()?;
    let mut out = Vec::new();
    for id in r.node_ids() {
        out.push(Stratum::Node {
            mult: t[id],
            full_valency: r.valency(id, Valency::Full)?,
        });
    }
    for e in r.edges() {
        out.push(Stratum::Pair {
            a: t[&e.a],
            b: t[&e.b],
        });
    }
    for a in r.arrows() {
        out.push(Stratum::Pair {
            a: t[&a.node],
            b: (a.n, a.nu),
        });
    }
    Ok(out)
}

/// Strata of the minimal realizable refinement.
pub fn strata(g: &Diagram) -> Result<Vec<Stratum>> {
    strata_of_realizable(&realizable_refine(g)?)
}

pub fn motivic_from_strata(strata: &[Stratum]) -> Result<ZetaExpr> {
    let mut z = ZetaExpr::zero();
    for s in strata {
        z.add_term(s.key(), s.motivic_coeff())?;
    }
    Ok(z)
}

/// The sum restricted to strata whose `N` values are all divisible by `e`.
pub fn top_from_strata(strata: &[Stratum], e: u64) -> Result<RatFuncS> {
    let mut terms = Vec::new();
    for s in strata {
        let ms = s.mults();
        if ms.iter().any(|m| m.0 % e != 0) {
            continue;
        }
        if ms.contains(&(0, 0)) {
            return Err(Error::DegenerateDenominator);
        }
        terms.push((
            BigRat::from_integer(s.top_coeff().into()),
            ms.into_iter().collect::<Vec<_>>(),
        ));
    }
    Ok(RatFuncS::from_terms(terms))
}

pub fn motivic_zeta(g: &Diagram) -> Result<ZetaExpr> {
    motivic_from_strata(&strata(g)?)
}

pub fn top_zeta(g: &Diagram) -> Result<RatFuncS> {
    top_from_strata(&strata(g)?, 1)
}

pub fn twisted_top_zeta(g: &Diagram, e: u64) -> Result<RatFuncS> {
    assert!(e >= 1, "twisting order must be positive");
    top_from_strata(&strata(g)?, e)
}

/// `chi_top` of `Z` at `T = L^{-n}`: each factor becomes
/// `1 / (L^{nu + nN} - 1)`, then `L -> 1` after cancellation.
pub fn specialize_chi_top(z: &ZetaExpr, n: u64) -> Result<BigRat> {
    let n = n as i64;
    let mut acc = BigRat::zero();
    let mut per_term = true;
    for (key, c) in z.terms() {
        if key.iter().any(|&(nu, big_n)| nu + n * big_n as i64 == 0) {
            return Err(Error::PoleAtOne);
        }
        let mut den = Poly2::one();
        for &(nu, big_n) in key {
            den = &den * &Poly2::binomial(nu + n * big_n as i64, 0);
        }
        match eval_at_one_with_cancellation(c, &den) {
            Ok(v) => acc += v,
            Err(Error::PoleAtOne) => {
                per_term = false;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if per_term {
        return Ok(acc);
    }
    // a single term has a pole: combine everything first
    let (num, den) = z.cleared();
    eval_at_one_with_cancellation(
        &num.substitute_t_by_l_pow(-n),
        &den.substitute_t_by_l_pow(-n),
    )
}

/// Poles `-nu/N` with multiplicity, ascending.
pub fn poles(r: &RatFuncS) -> Vec<(BigRat, u32)> {
    r.poles()
}

/// `(nu, N)` pairs with `N > 0` on nodes and arrowheads of the minimal
/// realizable refinement.
pub fn candidate_poles_motivic(g: &Diagram) -> Result<BTreeSet<Pair>> {
    let r = realizable_refine(g)?;
    let t = r.cached_table()?;
    let mut out: BTreeSet<Pair> = t.values().map(|&(n, nu)| (nu, n)).collect();
    out.extend(r.arrows().iter().map(|a| (a.nu, a.n)));
    out.retain(|p| p.1 > 0);
    Ok(out)
}

/// `(L-1)^2 T^{M+M'} / ((L^i - T^M)(L^i' - T^M'))`.
pub fn correction_term(m: u64, m2: u64, i: i64, i2: i64) -> Result<ZetaExpr> {
    let lm1 = &Poly2::l() - &Poly2::one();
    let mut z = ZetaExpr::zero();
    z.add_term(vec![(i, m), (i2, m2)], &lm1 * &lm1)?;
    Ok(z)
}

impl One for ZetaExpr {
    fn one() -> Self {
        let mut z = Self::zero();
        z.add_term(Vec::new(), Poly2::one()).unwrap();
        z
    }
}

impl std::ops::Mul for ZetaExpr {
    type Output = ZetaExpr;
    fn mul(self, rhs: ZetaExpr) -> ZetaExpr {
        let mut out = ZetaExpr::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let mut key = ka.clone();
                key.extend(kb.iter().copied());
                out.add_term(key, ca * cb).unwrap();
            }
        }
        out
    }
}
