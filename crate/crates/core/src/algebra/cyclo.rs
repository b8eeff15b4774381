use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;

/// `prod_n (t^n - 1)^{e_n}`, stored as the exponent map `n -> e_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CycloProduct(BTreeMap<u64, i64>);

impl CycloProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, i64)>>(pairs: I) -> Self {
        let mut out = Self::one();
        for (n, e) in pairs {
            out.add_factor(n, e);
        }
        out
    }

    pub fn add_factor(&mut self, n: u64, e: i64) {
        assert!(n >= 1, "cyclotomic index must be positive");
        if e == 0 {
            return;
        }
        let v = self.0.entry(n).or_insert(0);
        *v += e;
        if *v == 0 {
            self.0.remove(&n);
        }
    }

    /// Product of two cyclotomic products (exponents add).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&n, &e) in &other.0 {
            out.add_factor(n, e);
        }
        out
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Order of vanishing at `exp(2 pi i q)` for `q` in `[0, 1)`.
    pub fn multiplicity(&self, q: &BigRational) -> i64 {
        let b = q.denom().to_u64().expect("class denominator fits in u64");
        self.multiplicity_at_order(b)
    }

    /// Order of vanishing at any primitive `b`-th root of unity.
    pub fn multiplicity_at_order(&self, b: u64) -> i64 {
        self.0
            .iter()
            .filter(|(n, _)| *n % b == 0)
            .map(|(_, e)| e)
            .sum()
    }

    /// Orders `b` of roots of unity at which some factor vanishes.
    pub fn candidate_orders(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .0
            .keys()
            .flat_map(|&n| (1..=n).filter(move |b| n % b == 0))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Order of vanishing of `P` at `exp(2 pi i q)` (free-function spelling).
pub fn cyclo_multiplicity(p: &CycloProduct, q: &BigRational) -> i64 {
    p.multiplicity(q)
}

impl fmt::Display for CycloProduct {
    /// E.g. `(t^6 - 1) / ((t^2 - 1)*(t^3 - 1))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factor = |n: u64, e: i64| {
            let base = if n == 1 {
                "(t - 1)".to_string()
            } else {
                format!("(t^{n} - 1)")
            };
            if e == 1 {
                base
            } else {
                format!("{base}^{e}")
            }
        };
        let num: Vec<String> = self
            .0
            .iter()
            .filter(|(_, e)| **e > 0)
            .map(|(&n, &e)| factor(n, e))
            .collect();
        let den: Vec<String> = self
            .0
            .iter()
            .filter(|(_, e)| **e < 0)
            .map(|(&n, &e)| factor(n, -e))
            .collect();
        let num = if num.is_empty() {
            "1".to_string()
        } else {
            num.join("*")
        };
        match den.len() {
            0 => write!(f, "{num}"),
            1 => write!(f, "{num} / {}", den[0]),
            _ => write!(f, "{num} / ({})", den.join("*")),
        }
    }
}
