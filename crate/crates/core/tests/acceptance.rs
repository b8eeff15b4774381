//! End-to-end acceptance checks, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines are always printed.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splicezeta::io::{builders, random_diagram};
use splicezeta::monodromy::{
    class_of, eigenvalue_set, example2_search, is_allowed, is_eigenvalue, mc_report, monodromy_zeta,
};
use splicezeta::refine::{reduce, refine_edge, smooth_subdivide_minimal};
use splicezeta::splice::{verify_splice_motivic, verify_splice_top};
use splicezeta::zeta::{motivic_zeta, specialize_chi_top, top_zeta, twisted_top_zeta};
use splicezeta::{BigRat, CycloProduct, Diagram, Error, Poly2, RatFuncS, ZetaExpr};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn q(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

/// Sample points for comparing rational functions of low degree.
fn sample_points() -> Vec<BigRat> {
    (1..=12).map(|k| q(2 * k + 1, 7)).collect()
}

/// Random generated diagrams with 3 to 14 moves, from a fixed stream.
fn generated(stream: u64, count: usize) -> Vec<(u64, Diagram)> {
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    (0..count)
        .map(|_| {
            let seed = rng.gen::<u64>();
            let moves = rng.gen_range(3..=14);
            (seed, random_diagram(seed, moves))
        })
        .collect()
}

// ---- criterion 1

fn example2_monodromy() -> Check {
    let g = builders::nv_example2(1, 1, 1, 1).map_err(e2s)?;
    let z = monodromy_zeta(&g).map_err(e2s)?;
    let want = CycloProduct::from_pairs([(330, 1), (60, 1), (66, -1), (15, -1), (20, -1)]);
    ensure(z == want, format!("zeta = {z}"))?;
    ensure(
        is_eigenvalue(&g, &q(1, 110)).map_err(e2s)?,
        "1/110 is not an eigenvalue",
    )?;
    Ok(format!("zeta = {z}; exp(2 pi i/110) is an eigenvalue"))
}

// ---- criterion 2

fn twisted_counterexample() -> Check {
    let g = builders::cusp(2, 4);
    let z = twisted_top_zeta(&g, 6).map_err(e2s)?;
    let want = -&RatFuncS::reciprocal_of(&[(6, 21)]);
    ensure(z == want, format!("Z^(6) = {z}"))?;
    let poles = z.poles();
    ensure(poles == vec![(q(-7, 2), 1)], format!("poles {poles:?}"))?;
    let class = class_of(&poles[0].0);
    ensure(class == q(1, 2), "class")?;
    ensure(
        !is_eigenvalue(&g, &class).map_err(e2s)?,
        "-1 is an eigenvalue",
    )?;
    ensure(
        is_allowed(&g).map_err(e2s)?.allowed,
        "x^2 y^4 dx dy not allowed",
    )?;

    let h = builders::cusp(3, 3);
    let z2 = twisted_top_zeta(&h, 6).map_err(e2s)?;
    ensure(
        z2 == -&RatFuncS::reciprocal_of(&[(6, 20)]),
        format!("sibling Z^(6) = {z2}"),
    )?;
    ensure(
        !is_allowed(&h).map_err(e2s)?.allowed,
        "x^3 y^3 dx dy allowed",
    )?;
    Ok(format!(
        "x2y4: Z^(6) = {z}, pole -7/2 not an eigenvalue, allowed; x3y3: Z^(6) = {z2}, not allowed"
    ))
}

// ---- criterion 3

fn splicing_theorem() -> Check {
    let mut fixed = 0;
    for g in [
        builders::cusp(0, 0),
        builders::cusp(2, 4),
        builders::cusp(3, 3),
        builders::cusp(4, 5),
        builders::nv_example2(1, 1, 1, 1).map_err(e2s)?,
    ] {
        for e in g.edges() {
            for (u, v) in [(&e.a, &e.b), (&e.b, &e.a)] {
                ensure(
                    verify_splice_motivic(&g, u, v).map_err(e2s)?,
                    format!("motivic {u}-{v}"),
                )?;
                ensure(
                    verify_splice_top(&g, u, v).map_err(e2s)?,
                    format!("top {u}-{v}"),
                )?;
                fixed += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut random = 0;
    let mut stream = 0;
    while random < 200 {
        stream += 1;
        let g = random_diagram(stream, rng.gen_range(3..=14));
        let mut edges = g.edges().to_vec();
        // a splice is undefined when the far side carries only (0, 0) data
        while !edges.is_empty() {
            let e = edges.swap_remove(rng.gen_range(0..edges.len()));
            match verify_splice_motivic(&g, &e.a, &e.b) {
                Err(Error::DegenerateBranch) => continue,
                r => ensure(
                    r.map_err(e2s)?,
                    format!("motivic, diagram {stream}, {}-{}", e.a, e.b),
                )?,
            }
            ensure(
                verify_splice_top(&g, &e.a, &e.b).map_err(e2s)?,
                format!("top, diagram {stream}, {}-{}", e.a, e.b),
            )?;
            random += 1;
            break;
        }
    }
    Ok(format!(
        "{fixed} oriented example edges, {random} random diagrams"
    ))
}

// ---- criterion 4

/// Local Denef-Loeser sum for the cusp with `omega = x^a y^b dx dy`, from
/// the minimal embedded resolution: E1, E2, E3 with (N, nu) = (2, a+b+2),
/// (3, a+2b+3), (6, 2a+3b+5); the strict transform C = (1, 1) meets E3,
/// and the axes x = 0 (0, a+1) and y = 0 (0, b+1) meet E1 and E2.
fn cusp_top_oracle(a: i64, b: i64, s: &BigRat) -> BigRat {
    let f = |n: i64, nu: i64| BigRat::from_integer(n.into()) * s + BigRat::from_integer(nu.into());
    let (e1, e2, e3) = (
        f(2, a + b + 2),
        f(3, a + 2 * b + 3),
        f(6, 2 * a + 3 * b + 5),
    );
    let (c, dx, dy) = (f(1, 1), f(0, a + 1), f(0, b + 1));
    let one = BigRat::from_integer(1.into());
    // open strata: E1 and E2 lose two points each (Euler characteristic 0),
    // E3 loses three; each intersection point contributes 1
    -(&one / &e3)
        + &one / (&e1 * &e3)
        + &one / (&e2 * &e3)
        + &one / (&e3 * &c)
        + &one / (&e1 * &dx)
        + &one / (&e2 * &dy)
}

fn classical_cusp() -> Check {
    let g = builders::cusp(0, 0);
    let z = top_zeta(&g).map_err(e2s)?;
    for s in sample_points() {
        ensure(
            z.eval(&s) == Some(cusp_top_oracle(0, 0, &s)),
            format!("differs at s = {s}"),
        )?;
    }
    for (a, b) in [(2, 4), (3, 3), (4, 5)] {
        let za = top_zeta(&builders::cusp(a as u64, b as u64)).map_err(e2s)?;
        for s in sample_points() {
            let want = cusp_top_oracle(a, b, &s);
            ensure(za.eval(&s) == Some(want), format!("x^{a} y^{b} at s = {s}"))?;
        }
    }
    ensure(
        z.to_string() == "(4*s + 5) / ((1*s + 1)*(6*s + 5))",
        z.to_string(),
    )?;
    let poles: Vec<BigRat> = z.poles().into_iter().map(|(p, _)| p).collect();
    ensure(
        poles == vec![q(-1, 1), q(-5, 6)],
        format!("poles {poles:?}"),
    )?;
    let eig = eigenvalue_set(&g).map_err(e2s)?;
    for p in &poles {
        ensure(eig.contains(&class_of(p)), format!("class of {p}"))?;
    }
    Ok(format!(
        "Z_top = {z}; poles -1, -5/6 give eigenvalues 1, exp(2 pi i/6); the resolution sum also agrees for x2y4, x3y3, x4y5"
    ))
}

// ---- criterion 5

/// Sparse polynomial in x, y: exponent pair -> coefficient.
type Poly = BTreeMap<(u32, u32), i64>;

enum Chart {
    /// (x, y) -> (x, x y); exceptional divisor x = 0.
    X,
    /// (x, y) -> (x y, y); exceptional divisor y = 0.
    Y,
}

fn pull_back(p: &Poly, c: &Chart) -> Poly {
    p.iter()
        .map(|(&(a, b), &k)| match c {
            Chart::X => ((a + b, b), k),
            Chart::Y => ((a, a + b), k),
        })
        .collect()
}

/// Blow up three times along the charts that follow `y^2 = x^3` and read
/// off (N, nu) of each exceptional divisor in the chart where it appears.
fn cusp_chart_oracle(a: u32, b: u32) -> Vec<(u64, i64)> {
    let mut f: Poly = [((0, 2), 1), ((3, 0), -1)].into_iter().collect();
    // x^a y^b dx dy as a monomial; each chart multiplies by its Jacobian
    let mut w = (a, b);
    let mut out = Vec::new();
    for c in [Chart::X, Chart::Y, Chart::X] {
        f = pull_back(&f, &c);
        let (ex, ey) = w;
        w = match c {
            Chart::X => (ex + ey + 1, ey),
            Chart::Y => (ex, ex + ey + 1),
        };
        let (n, k) = match c {
            Chart::X => (f.keys().map(|e| e.0).min().unwrap(), w.0),
            Chart::Y => (f.keys().map(|e| e.1).min().unwrap(), w.1),
        };
        out.push((n as u64, k as i64 + 1));
    }
    out
}

fn multiplicity_oracle() -> Check {
    let oracle = cusp_chart_oracle(4, 5);
    ensure(
        oracle == vec![(2, 11), (3, 17), (6, 28)],
        format!("oracle {oracle:?}"),
    )?;
    let t = builders::cusp(4, 5).multiplicities().map_err(e2s)?;
    // first blow-up, second, third
    let got = vec![t["n1"], t["n3"], t["n2"]];
    ensure(
        got == oracle,
        format!("diagram {got:?} vs oracle {oracle:?}"),
    )?;
    for (a, b) in [(0u32, 0u32), (2, 4), (3, 3), (7, 1)] {
        let t = builders::cusp(a.into(), b.into())
            .multiplicities()
            .map_err(e2s)?;
        let got = vec![t["n1"], t["n3"], t["n2"]];
        ensure(
            got == cusp_chart_oracle(a, b),
            format!("x^{a} y^{b}: {got:?}"),
        )?;
    }
    Ok("x4y5: (2,11), (6,28), (3,17) agree with the chart computation".into())
}

// ---- criterion 6

fn monomial_identity() -> Check {
    let l_minus_1 = Poly2::binomial(1, 0);
    let pts = sample_points();
    let mut count = 0;
    for m in 1..=6u64 {
        for m2 in 1..=6u64 {
            for i in 1..=6i64 {
                for i2 in 1..=6i64 {
                    let g = builders::monomial(m, m2, i, i2).map_err(e2s)?;
                    // cross-multiply against the closed form as plain polynomials
                    let num = &(&l_minus_1 * &l_minus_1) * &Poly2::t_pow(m + m2);
                    let den = &Poly2::binomial(i, m) * &Poly2::binomial(i2, m2);
                    let (zn, zd) = motivic_zeta(&g).map_err(e2s)?.cleared();
                    ensure(
                        (&zn * &den) == (&num * &zd),
                        format!("motivic ({m},{m2},{i},{i2})"),
                    )?;
                    let z = top_zeta(&g).map_err(e2s)?;
                    for s in &pts[..3] {
                        let lin = |n: u64, nu: i64| {
                            BigRat::from_integer(BigInt::from(n)) * s
                                + BigRat::from_integer(nu.into())
                        };
                        let v = BigRat::from_integer(1.into()) / (lin(m, i) * lin(m2, i2));
                        ensure(z.eval(s) == Some(v), format!("top ({m},{m2},{i},{i2})"))?;
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} parameter tuples"))
}

// ---- criterion 7

fn avatar_identity() -> Check {
    let mut diagrams: Vec<(String, Diagram)> = builders::bundled()
        .into_iter()
        .map(|(n, g)| (n.to_string(), g))
        .collect();
    diagrams.extend(
        generated(7, 100)
            .into_iter()
            .map(|(s, g)| (format!("seed {s}"), g)),
    );
    for (name, g) in &diagrams {
        let mot = motivic_zeta(g).map_err(e2s)?;
        let top = top_zeta(g).map_err(e2s)?;
        for n in 1..=3u64 {
            let lhs = specialize_chi_top(&mot, n).map_err(e2s)?;
            let rhs = top
                .eval(&q(n as i64, 1))
                .ok_or("pole at a positive integer")?;
            ensure(lhs == rhs, format!("{name}, n = {n}: {lhs} vs {rhs}"))?;
        }
    }
    Ok(format!("{} diagrams, n = 1, 2, 3", diagrams.len()))
}

// ---- criterion 8

struct Invariants {
    motivic: ZetaExpr,
    top: RatFuncS,
    twisted: Vec<RatFuncS>,
    monodromy: CycloProduct,
}

const TWISTS: [u64; 3] = [2, 3, 6];

fn invariants(g: &Diagram) -> splicezeta::Result<Invariants> {
    Ok(Invariants {
        motivic: motivic_zeta(g)?,
        top: top_zeta(g)?,
        twisted: TWISTS
            .iter()
            .map(|e| twisted_top_zeta(g, *e))
            .collect::<splicezeta::Result<_>>()?,
        monodromy: monodromy_zeta(g)?,
    })
}

fn refinement_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut done = 0;
    let mut nontrivial_edges = 0;
    let mut stream = 1000;
    while done < 100 {
        stream += 1;
        let g = random_diagram(stream, rng.gen_range(4..=14));
        let red = reduce(&g);
        if red.edges().is_empty() {
            continue;
        }
        let base = invariants(&g).map_err(e2s)?;
        let red_inv = invariants(&red).map_err(e2s)?;
        ensure(
            base.motivic.exact_eq(&red_inv.motivic),
            format!("reduce changes Z_mot, {stream}"),
        )?;
        ensure(
            base.top == red_inv.top,
            format!("reduce changes Z_top, {stream}"),
        )?;
        for _ in 0..3 {
            let e = red.edges()[rng.gen_range(0..red.edges().len())].clone();
            let (wl, wr) = red.cone_vectors(&e.a, &e.b).map_err(e2s)?;
            if red.edge_determinant(&e.a, &e.b).map_err(e2s)? > 1 {
                nontrivial_edges += 1;
            }
            let mut sub = smooth_subdivide_minimal(wl, wr).map_err(e2s)?;
            for _ in 0..rng.gen_range(1..=3) {
                let j = rng.gen_range(0..sub.rays().len() - 1);
                sub = sub.with_mediant(j);
            }
            let r = refine_edge(&red, &e.a, &e.b, Some(&sub)).map_err(e2s)?;
            let inv = invariants(&r).map_err(e2s)?;
            let tag = format!("diagram {stream}, edge {}-{}", e.a, e.b);
            ensure(inv.motivic.exact_eq(&base.motivic), format!("Z_mot, {tag}"))?;
            ensure(inv.top == base.top, format!("Z_top, {tag}"))?;
            ensure(inv.twisted == base.twisted, format!("Z^(e), {tag}"))?;
            ensure(inv.monodromy == base.monodromy, format!("monodromy, {tag}"))?;
            ensure(
                reduce(&r).without_caches().canonical() == red.without_caches().canonical(),
                format!("reduce, {tag}"),
            )?;
        }
        done += 1;
    }
    ensure(nontrivial_edges > 0, "no edge with q > 1 was exercised")?;
    Ok(format!(
        "{done} diagrams x 3 subdivisions ({nontrivial_edges} on edges with q > 1)"
    ))
}

// ---- criterion 9

fn example2_search_box() -> Check {
    let s = example2_search(0..=5, 0..=9).map_err(e2s)?;
    ensure(s.tuples == 3600, format!("{} tuples", s.tuples))?;
    ensure(
        s.hits_ab.is_empty(),
        format!("(a) and (b) both hold at {:?}", s.hits_ab),
    )?;
    ensure(
        s.congruence_violations.is_empty(),
        format!("{:?}", s.congruence_violations),
    )?;
    // the box above never meets (a); a wider one does, and the congruence
    // still holds wherever it does
    let w = example2_search(0..=9, 0..=4).map_err(e2s)?;
    ensure(!w.hits_a.is_empty(), "(a) never holds in the wider box")?;
    ensure(
        w.hits_ab.is_empty(),
        format!("wider box: (a) and (b) at {:?}", w.hits_ab),
    )?;
    ensure(
        w.congruence_violations.is_empty(),
        format!("{:?}", w.congruence_violations),
    )?;
    Ok(format!(
        "no tuple of {} satisfies (a) and (b) ({} satisfy (a)); wider box: {} satisfy (a), none (b), all meet 2i1 + 3i2 = 3 mod 6",
        s.tuples,
        s.hits_a.len(),
        w.hits_a.len()
    ))
}

// ---- criterion 10

fn allowed_baseline() -> Check {
    let mut names = Vec::new();
    for (name, g) in builders::bundled() {
        if g.arrows().iter().any(|a| a.n == 0 && a.nu != 1) {
            continue;
        }
        ensure(
            is_allowed(&g).map_err(e2s)?.allowed,
            format!("{name} not allowed"),
        )?;
        let rep = mc_report(&g, &[]).map_err(e2s)?;
        ensure(
            rep.entries[0].order == 1 && rep.entries[0].all_eigenvalues(),
            format!("{name}: Z_top pole"),
        )?;
        names.push(name);
    }
    ensure(names.len() >= 3, format!("only {names:?}"))?;
    Ok(format!(
        "dx dy allowed and Z_top poles give eigenvalues on {}",
        names.join(", ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("two-pair curve monodromy zeta", example2_monodromy),
        ("twisted counterexample on the cusp", twisted_counterexample),
        ("splicing formula", splicing_theorem),
        ("classical cusp", classical_cusp),
        ("multiplicities against blow-up charts", multiplicity_oracle),
        ("monomial identity", monomial_identity),
        ("chi_top specialization", avatar_identity),
        ("refinement invariance", refinement_invariance),
        ("two-pair curve residue search", example2_search_box),
        ("dx dy allowed baseline", allowed_baseline),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
