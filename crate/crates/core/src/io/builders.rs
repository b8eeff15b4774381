//! Bundled diagrams.

use crate::diagram::Diagram;
use crate::error::{Error, Result};

/// One node with two arrowheads `(M, i)` and `(M', i')`: the toric diagram
/// of `x^M y^M'` with `omega = x^(i-1) y^(i'-1) dx dy`.
pub fn monomial(m: u64, m2: u64, i: i64, i2: i64) -> Result<Diagram> {
    if (m, i) == (0, 0) || (m2, i2) == (0, 0) {
        return Err(Error::DegenerateBranch);
    }
    let mut g = Diagram::new();
    g.add_node("n1", None);
    g.add_arrow("n1", 1, m, i);
    g.add_arrow("n1", 1, m2, i2);
    Ok(g)
}

/// The cusp `y^2 = x^3` with `omega = x^a y^b dx dy`.
///
/// `n1` and `n3` are the first two exceptional curves, `n2` the last one,
/// which carries the branch.
pub fn cusp(a: u64, b: u64) -> Diagram {
    let mut g = Diagram::new();
    for id in ["n1", "n2", "n3"] {
        g.add_node(id, None);
    }
    g.add_edge("n1", "n2", 1, 3);
    g.add_edge("n2", "n3", 2, 2);
    g.add_arrow("n2", 1, 1, 1);
    g.add_arrow("n1", 1, 0, a as i64 + 1);
    g.add_arrow("n3", 1, 0, b as i64 + 1);
    g
}

/// The two-Puiseux-pair curve `(y^3 - x^4)^5 + x^2 y^15` with omega data:
/// `i1`, `i2`, `i3` on the three leaves and `k` on the branch.
pub fn nv_example2(i1: i64, i2: i64, i3: i64, k: i64) -> Result<Diagram> {
    if i1 == 0 || i2 == 0 || i3 == 0 {
        return Err(Error::DegenerateBranch);
    }
    Ok(nv_example2_formal(i1, i2, i3, k))
}

/// As [`nv_example2`] without rejecting `(0, 0)` leaves. Only the strata that
/// avoid the degenerate leaves (e.g. twisted zeta functions of high order)
/// are meaningful on the result.
pub fn nv_example2_formal(i1: i64, i2: i64, i3: i64, k: i64) -> Diagram {
    let mut g = Diagram::new();
    for id in ["n1", "n2", "n3", "n4", "n5"] {
        g.add_node(id, None);
    }
    g.add_edge("n1", "n3", 2, 3);
    g.add_edge("n2", "n3", 1, 4);
    g.add_edge("n3", "n4", 1, 66);
    g.add_edge("n4", "n5", 5, 14);
    g.add_arrow("n1", 1, 0, i1);
    g.add_arrow("n2", 1, 0, i2);
    g.add_arrow("n4", 1, 1, k);
    g.add_arrow("n5", 1, 0, i3);
    g
}

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "cusp",
    "cusp-x4y5",
    "cusp-x2y4",
    "cusp-x3y3",
    "nv2",
    "monomial",
    "cusp:A,B",
    "nv2:I1,I2,I3,K",
    "monomial:M,M2,I,I2",
];

/// Resolve a built-in example name such as `cusp-x2y4` or `nv2:1,2,1,1`.
pub fn by_name(name: &str) -> Result<Diagram> {
    let bad = || Error::Parse {
        line: 0,
        column: 0,
        message: format!("unknown example '{name}' (known: {})", NAMES.join(", ")),
    };
    let (head, args) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let ints = |n: usize| -> Result<Vec<i64>> {
        let v: Vec<i64> = args
            .ok_or_else(bad)?
            .split(',')
            .map(|s| s.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if v.len() == n {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let nonneg = |x: i64| u64::try_from(x).map_err(|_| bad());
    match (head, args) {
        ("cusp", None) => Ok(cusp(0, 0)),
        ("cusp-x4y5", None) => Ok(cusp(4, 5)),
        ("cusp-x2y4", None) => Ok(cusp(2, 4)),
        ("cusp-x3y3", None) => Ok(cusp(3, 3)),
        ("nv2", None) => nv_example2(1, 1, 1, 1),
        ("monomial", None) => monomial(1, 1, 1, 1),
        ("cusp", Some(_)) => {
            let v = ints(2)?;
            Ok(cusp(nonneg(v[0])?, nonneg(v[1])?))
        }
        ("nv2", Some(_)) => {
            let v = ints(4)?;
            nv_example2(v[0], v[1], v[2], v[3])
        }
        ("monomial", Some(_)) => {
            let v = ints(4)?;
            monomial(nonneg(v[0])?, nonneg(v[1])?, v[2], v[3])
        }
        _ => Err(bad()),
    }
}

/// The bundled examples used by batch checks, with their names.
pub fn bundled() -> Vec<(&'static str, Diagram)> {
    vec![
        ("cusp", cusp(0, 0)),
        ("cusp-x4y5", cusp(4, 5)),
        ("cusp-x2y4", cusp(2, 4)),
        ("cusp-x3y3", cusp(3, 3)),
        ("nv2", nv_example2(1, 1, 1, 1).unwrap()),
        ("monomial", monomial(1, 1, 1, 1).unwrap()),
    ]
}
