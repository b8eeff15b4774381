//! Smooth cone subdivisions, edge and arrow refinement, reduction.

use crate::diagram::{Diagram, Mult};
use crate::error::{Error, Result};

pub type ConeVec = (i64, i64);

pub fn det(u: ConeVec, v: ConeVec) -> i64 {
    u.0 * v.1 - u.1 * v.0
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

fn is_primitive(u: ConeVec) -> bool {
    gcd(u.0, u.1) == 1
}

/// A chain `w_0, ..., w_{m+1}` with consecutive determinants 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    rays: Vec<ConeVec>,
}

impl Subdivision {
    /// Checks primitivity, consecutive determinants and the `b_j >= 1`
    /// chain relation.
    pub fn new(rays: Vec<ConeVec>) -> Result<Self> {
        let s = Self { rays };
        s.check(false)?;
        Ok(s)
    }

    pub fn rays(&self) -> &[ConeVec] {
        &self.rays
    }

    pub fn interior(&self) -> &[ConeVec] {
        &self.rays[1..self.rays.len() - 1]
    }

    /// `b_j` with `w_{j-1} + w_{j+1} = b_j w_j` for the interior rays.
    pub fn b_values(&self) -> Vec<i64> {
        self.rays
            .windows(3)
            .map(|w| {
                let s = (w[0].0 + w[2].0, w[0].1 + w[2].1);
                // s = b * w[1]; w[1] is primitive so one coordinate is nonzero
                if w[1].0 != 0 {
                    s.0 / w[1].0
                } else {
                    s.1 / w[1].1
                }
            })
            .collect()
    }

    fn check(&self, minimal: bool) -> Result<()> {
        let bad = |m: String| Err(Error::BadSubdivision(m));
        if self.rays.len() < 2 {
            return bad("fewer than two rays".into());
        }
        for &w in &self.rays {
            if !is_primitive(w) {
                return bad(format!("({}, {}) is not primitive", w.0, w.1));
            }
        }
        for w in self.rays.windows(2) {
            if det(w[0], w[1]) != 1 {
                return bad(format!("det{:?}{:?} = {}", w[0], w[1], det(w[0], w[1])));
            }
        }
        for w in self.rays.windows(3) {
            let s = (w[0].0 + w[2].0, w[0].1 + w[2].1);
            if det(s, w[1]) != 0 {
                return bad(format!("{:?} breaks the chain relation", w[1]));
            }
        }
        let lo = if minimal { 2 } else { 1 };
        if let Some(b) = self.b_values().into_iter().find(|b| *b < lo) {
            return bad(format!("b = {b} < {lo}"));
        }
        Ok(())
    }

    /// Insert the mediant between rays `j` and `j + 1` (a blow-up).
    pub fn with_mediant(&self, j: usize) -> Self {
        let (u, v) = (self.rays[j], self.rays[j + 1]);
        let mut rays = self.rays.clone();
        rays.insert(j + 1, (u.0 + v.0, u.1 + v.1));
        Self { rays }
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Minimal (Hirzebruch-Jung) smooth chain from `u` to `v`.
///
/// Each step takes `w` with `det(u, w) = 1`, shifted along `u` to be the
/// first such vector strictly inside the cone, and recurses on `(w, v)`.
pub fn smooth_subdivide_minimal(u: ConeVec, v: ConeVec) -> Result<Subdivision> {
    for w in [u, v] {
        if !is_primitive(w) {
            return Err(Error::NonPrimitiveInput(w.0, w.1));
        }
    }
    let q0 = det(u, v);
    if q0 < 1 {
        return Err(Error::NegativeDeterminant(q0));
    }
    let mut rays = vec![u];
    let mut cur = u;
    loop {
        let q = det(cur, v);
        if q == 1 {
            break;
        }
        // cur.0 * s + cur.1 * t = 1  =>  det(cur, (-t, s)) = 1
        let (_, s, t) = ext_gcd(cur.0, cur.1);
        let w0 = (-t, s);
        // v = q w0 + a cur
        let rest = (v.0 - q * w0.0, v.1 - q * w0.1);
        let a = if cur.0 != 0 {
            rest.0 / cur.0
        } else {
            rest.1 / cur.1
        };
        let k = a.div_euclid(q) + 1;
        let w = (w0.0 + k * cur.0, w0.1 + k * cur.1);
        rays.push(w);
        cur = w;
    }
    rays.push(v);
    let s = Subdivision { rays };
    s.check(true)?;
    Ok(s)
}

/// `(det(w, w_R) val_L + det(w_L, w) val_R) / q`, which must be integral.
fn interpolate(w: ConeVec, wl: ConeVec, wr: ConeVec, vl: Mult, vr: Mult) -> Result<Mult> {
    let q = det(wl, wr) as i128;
    let (cl, cr) = (det(w, wr) as i128, det(wl, w) as i128);
    let n = cl * vl.0 as i128 + cr * vr.0 as i128;
    let nu = cl * vl.1 as i128 + cr * vr.1 as i128;
    if n % q != 0 || nu % q != 0 || n < 0 {
        return Err(Error::NonIntegralInterpolation(w.0, w.1));
    }
    let conv =
        |x: i128| i64::try_from(x / q).map_err(|_| Error::Overflow("interpolated multiplicity"));
    Ok((conv(n)? as u64, conv(nu)?))
}

/// Replace the edge `u`-`v` by a chain of valency-2 nodes along a smooth
/// subdivision of its cone (the minimal one by default).
pub fn refine_edge(g: &Diagram, u: &str, v: &str, sub: Option<&Subdivision>) -> Result<Diagram> {
    let idx = g.edge_between(u, v)?;
    let (wl, wr) = g.cone_vectors(u, v)?;
    let owned;
    let sub = match sub {
        Some(s) => {
            let r = s.rays();
            if r.first() != Some(&wl) || r.last() != Some(&wr) {
                return Err(Error::BadSubdivision(format!(
                    "chain does not run from {wl:?} to {wr:?}"
                )));
            }
            s
        }
        None => {
            owned = smooth_subdivide_minimal(wl, wr)?;
            &owned
        }
    };
    let inner = sub.interior();
    if inner.is_empty() {
        return Ok(g.clone());
    }
    let ends = (g.cache(u), g.cache(v));
    let e = g.edges()[idx].clone();
    let (du, dv) = (e.dec_at(u).unwrap(), e.dec_at(v).unwrap());

    let mut out = g.clone();
    out.edges_mut().remove(idx);
    let mut prev = (u.to_string(), du);
    for &w in inner {
        let id = out.fresh_id(&format!("{u}-{v}"));
        let cache = match ends {
            (Some(cl), Some(cr)) => Some(interpolate(w, wl, wr, cl, cr)?),
            _ => None,
        };
        out.add_node(id.clone(), cache);
        // beta faces u, alpha faces v
        out.add_edge(prev.0.clone(), id.clone(), prev.1, w.1 as u64);
        prev = (id, w.0 as u64);
    }
    out.add_edge(prev.0, v.to_string(), prev.1, dv);
    Ok(out)
}

/// Subdivide the cone of a decorated arrowhead, from `(delta, D_v)` to
/// `(0, 1)`, and move the arrowhead to the last new node.
pub fn refine_arrow(g: &Diagram, a: usize) -> Result<Diagram> {
    let arrow = g.arrows().get(a).ok_or(Error::UnknownArrow(a))?.clone();
    if arrow.dec == 1 {
        return Ok(g.clone());
    }
    let v = arrow.node.clone();
    let val_v = g.cache(&v).ok_or_else(|| Error::MissingCache(v.clone()))?;
    let (wv, wa) = g.arrow_cone(a)?;
    let sub = smooth_subdivide_minimal(wv, wa)?;
    let mut out = g.clone();
    let mut prev = (v.clone(), arrow.dec);
    for &w in sub.interior() {
        let id = out.fresh_id(&format!("{v}-a{a}"));
        let cache = interpolate(w, wv, wa, val_v, (arrow.n, arrow.nu))?;
        out.add_node(id.clone(), Some(cache));
        // alpha faces the arrowhead, beta faces v
        out.add_edge(prev.0.clone(), id.clone(), prev.1, w.1 as u64);
        prev = (id, w.0 as u64);
    }
    debug_assert_eq!(prev.1, 1);
    let moved = &mut out.arrows_mut()[a];
    moved.node = prev.0;
    moved.dec = 1;
    Ok(out)
}

/// All edge determinants and arrowhead decorations are 1.
pub fn is_realizable(g: &Diagram) -> bool {
    g.is_standard()
        && g.edges()
            .iter()
            .all(|e| g.edge_determinant(&e.a, &e.b).is_ok_and(|q| q == 1))
}

/// Caches for every node: from the linking formulas on standard diagrams,
/// otherwise they must already be present.
pub fn filled_caches(g: &Diagram) -> Result<Diagram> {
    if g.is_standard() {
        g.with_multiplicities()
    } else {
        g.cached_table()?;
        Ok(g.clone())
    }
}

/// Minimal realizable refinement with every node cached.
pub fn realizable_refine(g: &Diagram) -> Result<Diagram> {
    let mut out = filled_caches(g)?;
    let edges: Vec<(String, String)> = g
        .edges()
        .iter()
        .map(|e| (e.a.clone(), e.b.clone()))
        .collect();
    for (a, b) in edges {
        out = refine_edge(&out, &a, &b, None)?;
    }
    for k in 0..out.arrows().len() {
        out = refine_arrow(&out, k)?;
    }
    Ok(out)
}

/// Refine every arrowhead with decoration > 1, leaving edges alone.
pub fn refine_arrows(g: &Diagram) -> Result<Diagram> {
    let mut out = filled_caches(g)?;
    for k in 0..out.arrows().len() {
        out = refine_arrow(&out, k)?;
    }
    Ok(out)
}

/// Remove every node with exactly two node-edges and no arrowheads, joining
/// its edges and keeping the far decorations.
pub fn reduce(g: &Diagram) -> Diagram {
    let mut out = g.clone();
    loop {
        let victim = out.node_ids().find(|id| {
            out.arrows().iter().all(|a| &a.node != *id)
                && out
                    .edges()
                    .iter()
                    .filter(|e| e.a == **id || e.b == **id)
                    .count()
                    == 2
        });
        let Some(x) = victim.cloned() else {
            return out;
        };
        let mut far = Vec::new();
        out.edges_mut().retain(|e| {
            if e.a == x {
                far.push((e.b.clone(), e.dec_b));
                false
            } else if e.b == x {
                far.push((e.a.clone(), e.dec_a));
                false
            } else {
                true
            }
        });
        out.remove_node(&x);
        out.add_edge(far[0].0.clone(), far[1].0.clone(), far[0].1, far[1].1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::builders;
    use proptest::prelude::*;

    /// Every smooth chain from `u` to `v` through vectors with entries in
    /// `0..=bound`, by depth-first search.
    fn all_chains(u: ConeVec, v: ConeVec, bound: i64) -> Vec<Vec<ConeVec>> {
        let mut out = Vec::new();
        let mut path = vec![u];
        fn go(path: &mut Vec<ConeVec>, v: ConeVec, bound: i64, out: &mut Vec<Vec<ConeVec>>) {
            let cur = *path.last().unwrap();
            if det(cur, v) == 1 {
                let mut p = path.clone();
                p.push(v);
                out.push(p);
            }
            if path.len() > 8 {
                return;
            }
            for x in 0..=bound {
                for y in 0..=bound {
                    let w = (x, y);
                    if det(cur, w) == 1 && det(w, v) >= 1 {
                        path.push(w);
                        go(path, v, bound, out);
                        path.pop();
                    }
                }
            }
        }
        go(&mut path, v, bound, &mut out);
        out
    }

    #[test]
    fn hj_examples() {
        let s = smooth_subdivide_minimal((2, 1), (1, 3)).unwrap();
        assert_eq!(s.interior(), &[(1, 1), (1, 2)]);
        assert_eq!(s.b_values(), vec![3, 2]);
        let s = smooth_subdivide_minimal((5, 2), (0, 1)).unwrap();
        assert_eq!(s.interior(), &[(2, 1), (1, 1)]);
        let s = smooth_subdivide_minimal((1, 0), (0, 1)).unwrap();
        assert!(s.interior().is_empty());
    }

    #[test]
    fn hj_errors() {
        assert_eq!(
            smooth_subdivide_minimal((2, 2), (0, 1)),
            Err(Error::NonPrimitiveInput(2, 2))
        );
        assert_eq!(
            smooth_subdivide_minimal((0, 1), (1, 0)),
            Err(Error::NegativeDeterminant(-1))
        );
    }

    #[test]
    fn hj_is_shortest_by_brute_force() {
        for (u, v) in [
            ((2, 1), (1, 3)),
            ((5, 2), (0, 1)),
            ((1, 0), (1, 5)),
            ((3, 1), (1, 2)),
        ] {
            let chains = all_chains(u, v, 5);
            let shortest = chains.iter().map(|c| c.len()).min().unwrap();
            let s = smooth_subdivide_minimal(u, v).unwrap();
            assert_eq!(s.rays().len(), shortest);
            let minimal: Vec<_> = chains.iter().filter(|c| c.len() == shortest).collect();
            assert_eq!(minimal.len(), 1);
            assert_eq!(minimal[0], &s.rays().to_vec());
        }
    }

    proptest! {
        #[test]
        fn hj_invariants(a in 1i64..40, b in 0i64..40, c in 0i64..40, d in 1i64..40) {
            let (g1, g2) = (gcd(a, b), gcd(c, d));
            let (mut u, mut v) = ((a / g1, b / g1), (c / g2, d / g2));
            if det(u, v) < 0 {
                std::mem::swap(&mut u, &mut v);
            }
            prop_assume!(det(u, v) >= 1);
            let s = smooth_subdivide_minimal(u, v).unwrap();
            prop_assert!(s.check(true).is_ok());
            prop_assert_eq!(s.rays()[0], u);
            prop_assert_eq!(*s.rays().last().unwrap(), v);
        }
    }

    #[test]
    fn example2_edge_chain_interpolates() {
        let g = builders::nv_example2(1, 1, 1, 1)
            .unwrap()
            .with_multiplicities()
            .unwrap();
        let r = refine_edge(&g, "n3", "n4", None).unwrap();
        // (1, 12) -> (1, 13) -> (5, 66)
        assert_eq!(r.node_count(), 5 + 1);
        // inserted values agree with the linking formulas on the refined diagram
        let t = r.without_caches().multiplicities().unwrap();
        for id in r.node_ids() {
            assert_eq!(r.cache(id), Some(t[id]), "{id}");
        }
        assert!(r.is_valid());
    }

    #[test]
    fn q1_edge_unchanged() {
        let g = builders::cusp(0, 0);
        assert_eq!(refine_edge(&g, "n1", "n2", None).unwrap(), g);
        assert!(is_realizable(&g));
        assert!(is_realizable(&builders::monomial(2, 3, 1, 1).unwrap()));
        assert_eq!(reduce(&g), g);
    }

    #[test]
    fn mediant_keeps_determinants() {
        let g = builders::cusp(0, 0).with_multiplicities().unwrap();
        let (wl, wr) = g.cone_vectors("n1", "n2").unwrap();
        let s = Subdivision::new(vec![wl, wr]).unwrap().with_mediant(0);
        let r = refine_edge(&g, "n1", "n2", Some(&s)).unwrap();
        assert!(is_realizable(&r));
        assert!(r.is_valid());
        r.multiplicities().unwrap();
        assert_eq!(
            reduce(&r).without_caches().canonical(),
            g.without_caches().canonical()
        );
    }

    #[test]
    fn toric_arrow_chain() {
        // x^M' y^M with the y-branch behind a decoration-3 arrow: the node
        // sits on the ray (3, 1) and every ray (x, y) of the chain down to
        // the arrow at (0, 1) must carry x (M', i') + y (M, i)
        let (m, m2, i, i2) = (2u64, 3u64, 1i64, 4i64);
        let mut d = Diagram::new();
        d.add_node("v", Some((3 * m2 + m, 3 * i2 + i)));
        d.add_arrow("v", 3, m, i);
        d.add_arrow("v", 1, m2, i2);
        assert!(d.is_valid());
        let r = refine_arrow(&d, 0).unwrap();
        assert!(r.is_standard() && r.is_valid());
        let sub = smooth_subdivide_minimal((3, 1), (0, 1)).unwrap();
        assert_eq!(sub.interior(), &[(2, 1), (1, 1)]);
        for (k, w) in sub.interior().iter().enumerate() {
            let id = format!("v-a0.{}", k + 1);
            let expect = (
                (w.0 * m2 as i64 + w.1 * m as i64) as u64,
                w.0 * i2 + w.1 * i,
            );
            assert_eq!(r.cache(&id), Some(expect));
        }
        // and the linking formulas agree with every cache
        r.multiplicities().unwrap();
        assert_eq!(r.arrows()[0].node, "v-a0.2");
    }

    #[test]
    fn arrow_without_cache_is_rejected() {
        let mut d = Diagram::new();
        d.add_node("v", None);
        d.add_arrow("v", 3, 1, 1);
        d.add_arrow("v", 1, 1, 1);
        assert_eq!(refine_arrow(&d, 0), Err(Error::MissingCache("v".into())));
        assert!(!is_realizable(&d));
    }

    #[test]
    fn two_node_toric_diagram() {
        // nodes on rays w_L = (D, d), w_R = (d', D') of the fan of
        // x^M y^M' omega = x^(i-1) y^(i'-1); arrows at (0, 1) and (1, 0)
        let (m, m2, i, i2) = (2u64, 3u64, 1i64, 1i64);
        let (d, big_d, d2, big_d2) = (2u64, 3u64, 5u64, 3u64);
        let phi = |w: ConeVec| ((w.0 as u64 * m + w.1 as u64 * m2), w.0 * i + w.1 * i2);
        let (wl, wr) = ((big_d as i64, d as i64), (d2 as i64, big_d2 as i64));
        let mut g = Diagram::new();
        g.add_node("L", Some(phi(wl)));
        g.add_node("R", Some(phi(wr)));
        g.add_edge("L", "R", d, d2);
        g.add_arrow("L", big_d, m2, i2);
        g.add_arrow("R", big_d2, m, i);
        assert!(g.is_valid(), "{:?}", g.validate());

        let r = realizable_refine(&g).unwrap();
        assert!(is_realizable(&r) && r.is_valid());
        r.multiplicities().unwrap();

        // oracle: shortest smooth chain from (1, 0) through w_R, w_L to (0, 1)
        let mut rays = Vec::new();
        for (u, v) in [((1, 0), wr), (wr, wl), (wl, (0, 1))] {
            let chains = all_chains(u, v, 6);
            let best = chains.iter().min_by_key(|c| c.len()).unwrap();
            rays.extend(best[1..].iter().copied());
        }
        rays.pop();
        let mut expect: Vec<Mult> = rays.into_iter().map(phi).collect();
        let mut got: Vec<Mult> = r.node_ids().map(|id| r.cache(id).unwrap()).collect();
        expect.sort();
        got.sort();
        assert_eq!(got, expect);
    }
}
