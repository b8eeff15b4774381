//! Monodromy zeta function, eigenvalues, the allowed-form star condition
//! and the pole-to-eigenvalue reporter.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::algebra::{BigRat, CycloProduct, RatFuncS};
use crate::diagram::{Diagram, Valency};
use crate::error::{Error, Result};
use crate::refine::{filled_caches, realizable_refine, reduce, refine_arrows};
use crate::zeta::{strata, top_from_strata};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    H0,
    H1,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::H0 => "h0",
            Source::H1 => "h1",
        }
    }
}

/// `exp(2 pi i q)` with `q` in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EigenvalueClass {
    pub q: BigRat,
    pub multiplicity: i64,
    pub source: Source,
}

fn f_arrow_gcd(g: &Diagram) -> Result<u64> {
    let d = g
        .arrows()
        .iter()
        .filter(|a| a.n >= 1)
        .fold(0u64, |acc, a| acc.gcd(&a.n));
    if d == 0 {
        Err(Error::NoFArrow)
    } else {
        Ok(d)
    }
}

/// `prod_v (t^{N_v} - 1)^{delta'_v - 2}` over the nodes of the minimal
/// realizable refinement.
pub fn monodromy_zeta(g: &Diagram) -> Result<CycloProduct> {
    f_arrow_gcd(g)?;
    let r = realizable_refine(g)?;
    let t = r.cached_table()?;
    let mut z = CycloProduct::one();
    for id in r.node_ids() {
        let e = r.valency(id, Valency::WithFArrows)? as i64 - 2;
        if e == 0 {
            continue;
        }
        let n = t[id].0;
        if n == 0 {
            return Err(Error::DegenerateDenominator);
        }
        z.add_factor(n, e);
    }
    Ok(z)
}

/// `t^d - 1` with `d` the gcd of the branch multiplicities.
pub fn delta0(g: &Diagram) -> Result<CycloProduct> {
    Ok(CycloProduct::from_pairs([(f_arrow_gcd(g)?, 1)]))
}

/// `zeta * Delta_0`, checked to be a polynomial.
pub fn delta1(g: &Diagram) -> Result<CycloProduct> {
    let d1 = monodromy_zeta(g)?.mul(&delta0(g)?);
    for b in d1.candidate_orders() {
        let m = d1.multiplicity_at_order(b);
        if m < 0 {
            return Err(Error::NonPolynomialDelta1 {
                class: format!("1/{b}"),
                multiplicity: m,
            });
        }
    }
    Ok(d1)
}

fn classes_of_order(b: u64) -> impl Iterator<Item = BigRat> {
    (0..b)
        .filter(move |k| k.gcd(&b) == 1)
        .map(move |k| BigRat::new(BigInt::from(k), BigInt::from(b)))
}

/// Roots of `Delta_1` (with multiplicity) and of `Delta_0`, sorted.
pub fn eigenvalues(g: &Diagram) -> Result<Vec<EigenvalueClass>> {
    let d1 = delta1(g)?;
    let d = f_arrow_gcd(g)?;
    let mut out = Vec::new();
    for b in d1.candidate_orders() {
        let m = d1.multiplicity_at_order(b);
        if m > 0 {
            out.extend(classes_of_order(b).map(|q| EigenvalueClass {
                q,
                multiplicity: m,
                source: Source::H1,
            }));
        }
    }
    for b in (1..=d).filter(|b| d % b == 0) {
        out.extend(classes_of_order(b).map(|q| EigenvalueClass {
            q,
            multiplicity: 1,
            source: Source::H0,
        }));
    }
    out.sort();
    Ok(out)
}

/// Eigenvalue classes as a set, ignoring multiplicity and source.
pub fn eigenvalue_set(g: &Diagram) -> Result<BTreeSet<BigRat>> {
    Ok(eigenvalues(g)?.into_iter().map(|c| c.q).collect())
}

/// Whether `exp(2 pi i q)` is a monodromy eigenvalue.
pub fn is_eigenvalue(g: &Diagram, q: &BigRat) -> Result<bool> {
    let b = q
        .denom()
        .to_u64()
        .ok_or(Error::Overflow("eigenvalue class"))?;
    let d = f_arrow_gcd(g)?;
    Ok(d % b == 0 || delta1(g)?.multiplicity_at_order(b) > 0)
}

/// Fractional part in `[0, 1)`.
pub fn class_of(s: &BigRat) -> BigRat {
    s - s.floor()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarRecord {
    pub node: String,
    pub n: usize,
    pub r: usize,
    /// `(d_l, i_l)` per leg.
    pub legs: Vec<(u64, i64)>,
    pub divisible: usize,
    pub equal: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllowedReport {
    pub allowed: bool,
    pub degenerate_arrows: Vec<usize>,
    pub stars: Vec<StarRecord>,
}

/// The star condition at every node of `reduce(g)`: if at least `n + r - 2`
/// legs have `d_l | i_l`, then at least `n + r - 2` legs have `i_l = d_l`.
pub fn is_allowed(g: &Diagram) -> Result<AllowedReport> {
    let degenerate_arrows: Vec<usize> = g
        .arrows()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.n == 0 && a.nu == 0)
        .map(|(k, _)| k)
        .collect();
    let red = reduce(&filled_caches(g)?);
    let std = if red.is_standard() {
        red.clone()
    } else {
        refine_arrows(&red)?.with_multiplicities()?
    };
    let mut stars = Vec::new();
    for v in red.node_ids() {
        let mut legs = Vec::new();
        for e in red.edges() {
            let Some(d) = e.dec_at(v) else { continue };
            let far = if &e.a == v { &e.b } else { &e.a };
            legs.push((d, std.splice_data(v, far)?.right.1));
        }
        let n = legs.len();
        let r = red
            .arrows()
            .iter()
            .filter(|a| &a.node == v && a.n >= 1)
            .count();
        let need = n as i64 + r as i64 - 2;
        let divisible = legs
            .iter()
            .filter(|(d, i)| i.rem_euclid(*d as i64) == 0)
            .count();
        let equal = legs.iter().filter(|(d, i)| *i == *d as i64).count();
        let ok = (divisible as i64) < need || equal as i64 >= need;
        stars.push(StarRecord {
            node: v.clone(),
            n,
            r,
            legs,
            divisible,
            equal,
            ok,
        });
    }
    Ok(AllowedReport {
        allowed: degenerate_arrows.is_empty() && stars.iter().all(|s| s.ok),
        degenerate_arrows,
        stars,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleVerdict {
    pub pole: BigRat,
    pub order: u32,
    pub class: BigRat,
    pub eigenvalue: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaPoles {
    /// 1 for `Z_top`, `e` for `Z^(e)`.
    pub order: u64,
    pub zeta: RatFuncS,
    pub poles: Vec<PoleVerdict>,
}

impl ZetaPoles {
    pub fn all_eigenvalues(&self) -> bool {
        self.poles.iter().all(|p| p.eigenvalue)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McReport {
    pub allowed: bool,
    pub entries: Vec<ZetaPoles>,
}

impl McReport {
    pub fn all_poles_induce_eigenvalues(&self) -> bool {
        self.entries.iter().all(ZetaPoles::all_eigenvalues)
    }
}

fn verdicts(g: &Diagram, z: &RatFuncS) -> Result<Vec<PoleVerdict>> {
    z.poles()
        .into_iter()
        .map(|(pole, order)| {
            let class = class_of(&pole);
            Ok(PoleVerdict {
                eigenvalue: is_eigenvalue(g, &class)?,
                pole,
                order,
                class,
            })
        })
        .collect()
}

/// Divisors `e >= 2` of node multiplicities of the refinement, up to `bound`.
pub fn auto_twisted_orders(g: &Diagram, bound: u64) -> Result<Vec<u64>> {
    let r = realizable_refine(g)?;
    let mut out = BTreeSet::new();
    for (n, _) in r.cached_table()?.values() {
        for e in 2..=(*n).min(bound) {
            if n % e == 0 {
                out.insert(e);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Poles of `Z_top` and of each requested `Z^(e)` with eigenvalue verdicts.
/// Reports only; nothing here asserts the conjecture.
pub fn mc_report(g: &Diagram, twisted_orders: &[u64]) -> Result<McReport> {
    let st = strata(g)?;
    let mut entries = Vec::new();
    let mut orders = vec![1];
    orders.extend(twisted_orders.iter().copied().filter(|e| *e > 1));
    orders.dedup();
    for e in orders {
        let zeta = top_from_strata(&st, e)?;
        entries.push(ZetaPoles {
            order: e,
            poles: verdicts(g, &zeta)?,
            zeta,
        });
    }
    Ok(McReport {
        allowed: is_allowed(g)?.allowed,
        entries,
    })
}

/// Outcome of the residue-box search on the two-pair example.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Example2Search {
    pub tuples: usize,
    /// Tuples where some pole of `Z^(330)` lies in the class `1/110`.
    pub hits_a: Vec<(i64, i64, i64, i64)>,
    /// Tuples satisfying (a) and keeping every `Z^(60)` pole an eigenvalue.
    pub hits_ab: Vec<(i64, i64, i64, i64)>,
    /// Tuples satisfying (a) but violating `2 i1 + 3 i2 = 3 mod 6`.
    pub congruence_violations: Vec<(i64, i64, i64, i64)>,
}

/// Scan `i1, i2 in r12`, `i3, k in r3k` for the two-pair example.
///
/// Only `Z^(330)` and `Z^(60)` are evaluated; their strata avoid the leaves,
/// so leaves with `i = 0` are admissible here.
pub fn example2_search(
    r12: std::ops::RangeInclusive<i64>,
    r3k: std::ops::RangeInclusive<i64>,
) -> Result<Example2Search> {
    use rayon::prelude::*;
    let target = BigRat::new(1.into(), 110.into());
    let tuples: Vec<(i64, i64, i64, i64)> = r12
        .clone()
        .flat_map(|i1| r12.clone().map(move |i2| (i1, i2)))
        .flat_map(|(i1, i2)| r3k.clone().map(move |i3| (i1, i2, i3)))
        .flat_map(|(i1, i2, i3)| r3k.clone().map(move |k| (i1, i2, i3, k)))
        .collect();
    let eig = crate::io::builders::nv_example2(1, 1, 1, 1)?;
    let rows: Vec<Result<(bool, bool)>> = tuples
        .par_iter()
        .map(|&(i1, i2, i3, k)| {
            let g = crate::io::builders::nv_example2_formal(i1, i2, i3, k);
            let st = strata(&g)?;
            let z330 = top_from_strata(&st, 330)?;
            let a = z330.poles().iter().any(|(p, _)| class_of(p) == target);
            let z60 = top_from_strata(&st, 60)?;
            // eigenvalues depend on f only
            let b = z60
                .poles()
                .iter()
                .map(|(p, _)| is_eigenvalue(&eig, &class_of(p)))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .all(|x| x);
            Ok((a, b))
        })
        .collect();
    let mut out = Example2Search {
        tuples: tuples.len(),
        ..Default::default()
    };
    for (t, row) in tuples.into_iter().zip(rows) {
        let (a, b) = row?;
        if a {
            out.hits_a.push(t);
            if b {
                out.hits_ab.push(t);
            }
            if (2 * t.0 + 3 * t.1).rem_euclid(6) != 3 {
                out.congruence_violations.push(t);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::builders;

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    #[test]
    fn cusp_monodromy() {
        let g = builders::cusp(0, 0);
        let z = monodromy_zeta(&g).unwrap();
        assert_eq!(z, CycloProduct::from_pairs([(2, -1), (3, -1), (6, 1)]));
        assert_eq!(delta0(&g).unwrap(), CycloProduct::from_pairs([(1, 1)]));
        let d1 = delta1(&g).unwrap();
        assert_eq!(
            d1,
            CycloProduct::from_pairs([(6, 1), (2, -1), (3, -1), (1, 1)])
        );
        let set = eigenvalue_set(&g).unwrap();
        assert_eq!(set, [q(0, 1), q(1, 6), q(5, 6)].into_iter().collect());
        // the omega data do not matter
        assert_eq!(monodromy_zeta(&builders::cusp(4, 5)).unwrap(), z);
    }

    #[test]
    fn example2_monodromy() {
        let g = builders::nv_example2(1, 1, 1, 1).unwrap();
        let z = monodromy_zeta(&g).unwrap();
        let expect = CycloProduct::from_pairs([(330, 1), (60, 1), (66, -1), (15, -1), (20, -1)]);
        assert_eq!(z, expect);
        assert!(is_eigenvalue(&g, &q(1, 110)).unwrap());
        assert!(is_eigenvalue(&g, &q(0, 1)).unwrap());
    }

    #[test]
    fn two_branches_one_node() {
        let g = builders::monomial(1, 1, 1, 1).unwrap();
        assert!(monodromy_zeta(&g).unwrap().is_one());
        let g = builders::monomial(2, 3, 1, 1).unwrap();
        assert_eq!(delta0(&g).unwrap(), CycloProduct::from_pairs([(1, 1)]));
        let g = builders::monomial(0, 0, 1, 1).unwrap();
        assert_eq!(monodromy_zeta(&g), Err(Error::NoFArrow));
    }

    #[test]
    fn allowed_verdicts() {
        let r = is_allowed(&builders::cusp(0, 0)).unwrap();
        assert!(r.allowed);
        let r = is_allowed(&builders::cusp(2, 4)).unwrap();
        assert!(r.allowed);
        let center = r.stars.iter().find(|s| s.node == "n2").unwrap();
        let mut legs = center.legs.clone();
        legs.sort();
        assert_eq!(legs, vec![(2, 5), (3, 3)]);
        assert_eq!((center.divisible, center.equal), (1, 1));
        let r = is_allowed(&builders::cusp(3, 3)).unwrap();
        assert!(!r.allowed);
        let center = r.stars.iter().find(|s| s.node == "n2").unwrap();
        assert_eq!((center.divisible, center.equal), (1, 0));
    }

    #[test]
    fn cusp_reports() {
        let rep = mc_report(&builders::cusp(0, 0), &[]).unwrap();
        let classes: Vec<BigRat> = rep.entries[0]
            .poles
            .iter()
            .map(|p| p.class.clone())
            .collect();
        assert_eq!(classes, vec![q(0, 1), q(1, 6)]);
        assert!(rep.all_poles_induce_eigenvalues());

        let rep = mc_report(&builders::cusp(2, 4), &[6]).unwrap();
        assert!(rep.allowed);
        let z6 = &rep.entries[1];
        assert_eq!(z6.poles.len(), 1);
        assert_eq!(z6.poles[0].pole, q(-7, 2));
        assert_eq!(z6.poles[0].class, q(1, 2));
        assert!(!z6.poles[0].eigenvalue);

        let rep = mc_report(&builders::cusp(3, 3), &[]).unwrap();
        let p = rep.entries[0]
            .poles
            .iter()
            .find(|p| p.pole == q(-10, 3))
            .unwrap();
        assert!(!p.eigenvalue);
    }

    #[test]
    fn example2_z330() {
        let g = builders::nv_example2(1, 1, 1, 1).unwrap();
        let st = strata(&g).unwrap();
        let z = top_from_strata(&st, 330).unwrap();
        assert_eq!(z, RatFuncS::from_terms([(q(-1, 1), vec![(330, 41)])]));
    }
}
