//! Splicing a diagram along an edge and checking the splicing formula.

use crate::algebra::RatFuncS;
use crate::diagram::{Diagram, SpliceData};
use crate::error::{Error, Result};
use crate::refine::{filled_caches, refine_arrows};
use crate::zeta::{correction_term, motivic_zeta, top_zeta};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpliceResult {
    /// The `u` side, with `v` kept and collapsed onto a new arrowhead.
    pub left: Diagram,
    /// The `v` side, symmetric.
    pub right: Diagram,
    pub data: SpliceData,
}

impl SpliceResult {
    /// `(M, M', i, i')`.
    pub fn tuple(&self) -> (u64, u64, i64, i64) {
        self.data.as_tuple()
    }
}

/// Splice data of the edge `u`-`v`, refining decorated arrowheads first.
pub fn splice_data_of(g: &Diagram, u: &str, v: &str) -> Result<SpliceData> {
    g.edge_between(u, v)?;
    if g.is_standard() {
        g.splice_data(u, v)
    } else {
        let r = refine_arrows(g)?;
        r.with_multiplicities()?.splice_data(u, v)
    }
}

/// One side of the splice: the `keep` side of the edge plus the far
/// endpoint `far`, whose other decorations collapse to one arrowhead.
fn half(g: &Diagram, keep: &str, far: &str, branch: (u64, i64)) -> Result<Diagram> {
    if branch == (0, 0) {
        return Err(Error::DegenerateBranch);
    }
    let mut nodes = g.side(far, keep)?;
    nodes.push(far.to_string());
    let e = &g.edges()[g.edge_between(keep, far)?];
    let d_far = e.dec_at(far).unwrap();
    let outer = g.decoration_product(far)? / d_far;

    let mut out = Diagram::new();
    for id in &nodes {
        out.add_node(id.clone(), g.cache(id));
    }
    for ed in g.edges() {
        let inside = |x: &str| nodes.iter().any(|n| n == x) && x != far;
        if (inside(&ed.a) && inside(&ed.b))
            || (ed.a == keep && ed.b == far)
            || (ed.a == far && ed.b == keep)
        {
            out.add_edge(ed.a.clone(), ed.b.clone(), ed.dec_a, ed.dec_b);
        }
    }
    for a in g.arrows() {
        if a.node != far && nodes.contains(&a.node) {
            out.add_arrow(a.node.clone(), a.dec, a.n, a.nu);
        }
    }
    out.add_arrow(far.to_string(), outer, branch.0, branch.1);
    Ok(out)
}

/// Split `g` along the node-edge `u`-`v`. Caches are filled first so that
/// both halves carry them.
pub fn splice(g: &Diagram, u: &str, v: &str) -> Result<SpliceResult> {
    g.edge_between(u, v)?;
    let g = filled_caches(g)?;
    let data = splice_data_of(&g, u, v)?;
    Ok(SpliceResult {
        left: half(&g, u, v, data.right)?,
        right: half(&g, v, u, data.left)?,
        data,
    })
}

/// `Z(G) = Z(G_L) + Z(G_R) - (L-1)^2 T^{M+M'} / ((L^i - T^M)(L^i' - T^M'))`.
pub fn verify_splice_motivic(g: &Diagram, u: &str, v: &str) -> Result<bool> {
    let s = splice(g, u, v)?;
    let (m, m2, i, i2) = s.tuple();
    let rhs = motivic_zeta(&s.left)?
        .plus(&motivic_zeta(&s.right)?)
        .minus(&correction_term(m, m2, i, i2)?);
    Ok(motivic_zeta(g)?.exact_eq(&rhs))
}

/// The same identity for topological zeta functions.
pub fn verify_splice_top(g: &Diagram, u: &str, v: &str) -> Result<bool> {
    let s = splice(g, u, v)?;
    let (m, m2, i, i2) = s.tuple();
    let corr = RatFuncS::reciprocal_of(&[(m, i), (m2, i2)]);
    let rhs = &(&top_zeta(&s.left)? + &top_zeta(&s.right)?) - &corr;
    Ok(top_zeta(g)? == rhs)
}
