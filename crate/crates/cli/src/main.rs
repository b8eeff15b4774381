use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use splicezeta::io::machine::Record;
use splicezeta::io::{builders, parse_sd, parse_sd_unchecked, random_diagram, write_sd};
use splicezeta::monodromy::{
    auto_twisted_orders, delta0, delta1, eigenvalues, is_allowed, mc_report, monodromy_zeta,
};
use splicezeta::refine::{filled_caches, realizable_refine, reduce};
use splicezeta::splice::{splice, verify_splice_motivic, verify_splice_top};
use splicezeta::zeta::{motivic_zeta, top_zeta, twisted_top_zeta};
use splicezeta::{Diagram, Error, RatFuncS};

#[derive(Parser)]
#[command(
    name = "splicezeta",
    version,
    about = "Zeta functions of plane curves from splice diagrams"
)]
struct Cli {
    /// One `record=<kind> key=value ...` line per result.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Motivic,
    Top,
    Twisted,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a diagram and list violations and warnings.
    Validate { input: String },
    /// Multiplicities (N, nu) of every node.
    Mult { input: String },
    /// Minimal realizable refinement, with caches.
    Refine { input: String },
    /// Remove valency-2 nodes.
    Reduce { input: String },
    Zeta {
        input: String,
        #[arg(long, value_enum, default_value = "top")]
        kind: Kind,
        /// Twist order e for `--kind twisted`.
        #[arg(long)]
        order: Option<u64>,
    },
    /// Split along an edge into two diagrams.
    Splice {
        input: String,
        #[arg(long, num_args = 2, value_names = ["U", "V"], required = true)]
        edge: Vec<String>,
    },
    /// Check the splicing formula on one edge, or on every edge.
    VerifySplice {
        input: String,
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        edge: Option<Vec<String>>,
    },
    /// Monodromy zeta function, Alexander factors and eigenvalues.
    Monodromy { input: String },
    /// The star condition at every node.
    Allowed { input: String },
    /// Poles of the topological zeta functions against monodromy eigenvalues.
    McCheck {
        input: String,
        /// Comma-separated orders, or `auto`.
        #[arg(long, default_value = "auto")]
        twisted_orders: String,
        /// Largest order considered by `auto`.
        #[arg(long, default_value_t = 12)]
        bound: u64,
    },
    /// List built-in examples, or print one.
    Example { name: Option<String> },
    /// A random diagram built by blow-up moves.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        moves: usize,
    },
}

enum Failure {
    Input(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Out = Result<String, Failure>;

fn load(input: &str) -> Result<Diagram, Failure> {
    if let Some(name) = input.strip_prefix("example:") {
        return Ok(builders::by_name(name)?);
    }
    let text =
        std::fs::read_to_string(input).map_err(|e| Failure::Input(format!("{input}: {e}")))?;
    parse_sd(&text).map_err(|e| Failure::Input(format!("{input}: {e}")))
}

fn diagram_records(g: &Diagram, out: &mut String) {
    let g = g.canonical();
    for id in g.node_ids() {
        let mut r = Record::new("node").field("id", id);
        if let Some((n, nu)) = g.cache(id) {
            r = r.field("N", n).field("nu", nu);
        }
        writeln!(out, "{r}").unwrap();
    }
    for e in g.edges() {
        let r = Record::new("edge")
            .field("a", &e.a)
            .field("b", &e.b)
            .field("dec_a", e.dec_a)
            .field("dec_b", e.dec_b);
        writeln!(out, "{r}").unwrap();
    }
    for a in g.arrows() {
        let r = Record::new("arrow")
            .field("node", &a.node)
            .field("dec", a.dec)
            .field("N", a.n)
            .field("nu", a.nu);
        writeln!(out, "{r}").unwrap();
    }
}

fn show_diagram(g: &Diagram, machine: bool) -> String {
    if machine {
        let mut out = String::new();
        diagram_records(g, &mut out);
        out
    } else {
        write_sd(g)
    }
}

fn ratfunc_record(kind: &str, order: u64, z: &RatFuncS) -> Record {
    let (num, den) = z.to_record_fields();
    Record::new(kind)
        .field("order", order)
        .field("num", num)
        .field("den", den)
        .field("text", z)
}

fn edge_arg(edge: &[String]) -> (&str, &str) {
    (&edge[0], &edge[1])
}

fn run(cli: Cli) -> Out {
    let m = cli.machine;
    let mut out = String::new();
    match cli.cmd {
        Cmd::Validate { input } => {
            let g = match input.strip_prefix("example:") {
                Some(name) => builders::by_name(name)?,
                None => {
                    let text = std::fs::read_to_string(&input)
                        .map_err(|e| Failure::Input(format!("{input}: {e}")))?;
                    parse_sd_unchecked(&text)?
                }
            };
            let violations = g.validate();
            for v in &violations {
                if m {
                    writeln!(out, "{}", Record::new("violation").field("message", v)).unwrap();
                } else {
                    writeln!(out, "error: {v}").unwrap();
                }
            }
            if !violations.is_empty() {
                return Err(Failure::Input(out.trim_end().to_string()));
            }
            for w in g.warnings() {
                if m {
                    writeln!(out, "{}", Record::new("warning").field("message", w)).unwrap();
                } else {
                    writeln!(out, "warning: {w}").unwrap();
                }
            }
            let r = Record::new("valid")
                .field("nodes", g.node_count())
                .field("edges", g.edges().len())
                .field("arrows", g.arrows().len())
                .field("standard", g.is_standard());
            if m {
                writeln!(out, "{r}").unwrap();
            } else {
                writeln!(
                    out,
                    "valid: {} nodes, {} edges, {} arrowheads{}",
                    g.node_count(),
                    g.edges().len(),
                    g.arrows().len(),
                    if g.is_standard() {
                        ""
                    } else {
                        " (decorated arrowheads)"
                    }
                )
                .unwrap();
            }
        }
        Cmd::Mult { input } => {
            let g = load(&input)?;
            for (id, (n, nu)) in filled_caches(&g)?.cached_table()? {
                if m {
                    let r = Record::new("mult")
                        .field("node", &id)
                        .field("N", n)
                        .field("nu", nu);
                    writeln!(out, "{r}").unwrap();
                } else {
                    writeln!(out, "{id}: N={n} nu={nu}").unwrap();
                }
            }
        }
        Cmd::Refine { input } => out = show_diagram(&realizable_refine(&load(&input)?)?, m),
        Cmd::Reduce { input } => out = show_diagram(&reduce(&load(&input)?), m),
        Cmd::Zeta { input, kind, order } => {
            let g = load(&input)?;
            match kind {
                Kind::Motivic => {
                    let z = motivic_zeta(&g)?;
                    if m {
                        for (key, coeff) in z.terms() {
                            let pairs: Vec<String> =
                                key.iter().map(|(nu, n)| format!("{nu}:{n}")).collect();
                            let r = Record::new("term")
                                .field("pairs", pairs.join(";"))
                                .field("coeff", coeff);
                            writeln!(out, "{r}").unwrap();
                        }
                    } else {
                        writeln!(out, "{z}").unwrap();
                    }
                }
                Kind::Top | Kind::Twisted => {
                    let e = match (kind, order) {
                        (Kind::Top, None) => 1,
                        (Kind::Top, Some(_)) => {
                            return Err(Failure::Input("--order needs --kind twisted".into()))
                        }
                        (_, Some(e)) if e >= 1 => e,
                        _ => {
                            return Err(Failure::Input(
                                "--kind twisted needs --order e >= 1".into(),
                            ))
                        }
                    };
                    let z = if e == 1 {
                        top_zeta(&g)?
                    } else {
                        twisted_top_zeta(&g, e)?
                    };
                    if m {
                        writeln!(out, "{}", ratfunc_record("zeta", e, &z)).unwrap();
                    } else {
                        writeln!(out, "{z}").unwrap();
                    }
                }
            }
        }
        Cmd::Splice { input, edge } => {
            let g = load(&input)?;
            let (u, v) = edge_arg(&edge);
            let s = splice(&g, u, v)?;
            let (mm, m2, i, i2) = s.tuple();
            if m {
                let r = Record::new("splice")
                    .field("u", u)
                    .field("v", v)
                    .field("M", mm)
                    .field("M2", m2)
                    .field("i", i)
                    .field("i2", i2);
                writeln!(out, "{r}").unwrap();
                for (side, half) in [("left", &s.left), ("right", &s.right)] {
                    writeln!(
                        out,
                        "{}",
                        Record::new("half")
                            .field("side", side)
                            .field("sd", write_sd(half))
                    )
                    .unwrap();
                }
            } else {
                writeln!(
                    out,
                    "# splice data (M, M', i, i') = ({mm}, {m2}, {i}, {i2})"
                )
                .unwrap();
                writeln!(out, "# left ({u} side)").unwrap();
                out.push_str(&write_sd(&s.left));
                writeln!(out, "# right ({v} side)").unwrap();
                out.push_str(&write_sd(&s.right));
            }
        }
        Cmd::VerifySplice { input, edge } => {
            let g = load(&input)?;
            let edges: Vec<(String, String)> = match edge {
                Some(e) => vec![(e[0].clone(), e[1].clone())],
                None => g
                    .edges()
                    .iter()
                    .map(|e| (e.a.clone(), e.b.clone()))
                    .collect(),
            };
            if edges.is_empty() {
                return Err(Failure::Input("diagram has no edges".into()));
            }
            let mut all = true;
            for (u, v) in edges {
                let mot = verify_splice_motivic(&g, &u, &v)?;
                let top = verify_splice_top(&g, &u, &v)?;
                all &= mot && top;
                if m {
                    let r = Record::new("verify-splice")
                        .field("u", &u)
                        .field("v", &v)
                        .field("motivic", mot)
                        .field("top", top);
                    writeln!(out, "{r}").unwrap();
                } else {
                    let word = |b: bool| if b { "holds" } else { "FAILS" };
                    writeln!(out, "{u}-{v}: motivic {}, top {}", word(mot), word(top)).unwrap();
                }
            }
            if !all {
                return Err(Failure::Verify(out));
            }
        }
        Cmd::Monodromy { input } => {
            let g = load(&input)?;
            let z = monodromy_zeta(&g)?;
            let (d0, d1) = (delta0(&g)?, delta1(&g)?);
            let ev = eigenvalues(&g)?;
            if m {
                for (name, p) in [("zeta", &z), ("delta0", &d0), ("delta1", &d1)] {
                    let exps: Vec<String> = p
                        .exponents()
                        .iter()
                        .map(|(n, e)| format!("{n}:{e}"))
                        .collect();
                    let r = Record::new(name)
                        .field("exponents", exps.join(";"))
                        .field("text", p);
                    writeln!(out, "{r}").unwrap();
                }
                for c in &ev {
                    let r = Record::new("eigenvalue")
                        .field("class", &c.q)
                        .field("multiplicity", c.multiplicity)
                        .field("source", c.source.as_str());
                    writeln!(out, "{r}").unwrap();
                }
            } else {
                writeln!(out, "zeta:   {z}").unwrap();
                writeln!(out, "Delta0: {d0}").unwrap();
                writeln!(out, "Delta1: {d1}").unwrap();
                // classes come in full Galois orbits: report one line per order
                let mut orders: std::collections::BTreeMap<(String, u64), (i64, usize)> =
                    Default::default();
                for c in &ev {
                    let b: u64 = c.q.denom().to_string().parse().unwrap_or(0);
                    let slot = orders
                        .entry((c.source.as_str().to_string(), b))
                        .or_insert((c.multiplicity, 0));
                    slot.1 += 1;
                }
                for ((src, b), (mult, count)) in orders {
                    writeln!(
                        out,
                        "{src}: primitive {b}-th roots of unity ({count} classes), multiplicity {mult}"
                    )
                    .unwrap();
                }
            }
        }
        Cmd::Allowed { input } => {
            let rep = is_allowed(&load(&input)?)?;
            if m {
                let r = Record::new("allowed").field("value", rep.allowed).field(
                    "degenerate_arrows",
                    rep.degenerate_arrows
                        .iter()
                        .map(|k| k.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                );
                writeln!(out, "{r}").unwrap();
            } else {
                writeln!(out, "allowed: {}", rep.allowed).unwrap();
                for k in &rep.degenerate_arrows {
                    writeln!(out, "  arrowhead {k} has (N, nu) = (0, 0)").unwrap();
                }
            }
            for s in &rep.stars {
                let legs: Vec<String> = s.legs.iter().map(|(d, i)| format!("{d}:{i}")).collect();
                if m {
                    let r = Record::new("star")
                        .field("node", &s.node)
                        .field("n", s.n)
                        .field("r", s.r)
                        .field("legs", legs.join(","))
                        .field("divisible", s.divisible)
                        .field("equal", s.equal)
                        .field("ok", s.ok);
                    writeln!(out, "{r}").unwrap();
                } else {
                    writeln!(
                        out,
                        "  {}: n={} r={} legs(d:i)=[{}] divisible={} equal={} {}",
                        s.node,
                        s.n,
                        s.r,
                        legs.join(" "),
                        s.divisible,
                        s.equal,
                        if s.ok { "ok" } else { "violated" }
                    )
                    .unwrap();
                }
            }
        }
        Cmd::McCheck {
            input,
            twisted_orders,
            bound,
        } => {
            let g = load(&input)?;
            let orders: Vec<u64> = if twisted_orders == "auto" {
                auto_twisted_orders(&g, bound)?
            } else {
                twisted_orders
                    .split(',')
                    .map(|s| s.trim().parse::<u64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| {
                        Failure::Input(format!("bad --twisted-orders '{twisted_orders}'"))
                    })?
            };
            let rep = mc_report(&g, &orders)?;
            if m {
                let r = Record::new("mc-check")
                    .field("allowed", rep.allowed)
                    .field("all_poles_eigenvalues", rep.all_poles_induce_eigenvalues());
                writeln!(out, "{r}").unwrap();
            } else {
                writeln!(out, "allowed: {}", rep.allowed).unwrap();
            }
            for e in &rep.entries {
                if m {
                    writeln!(out, "{}", ratfunc_record("zeta", e.order, &e.zeta)).unwrap();
                } else if e.order == 1 {
                    writeln!(out, "Z_top = {}", e.zeta).unwrap();
                } else {
                    writeln!(out, "Z^({}) = {}", e.order, e.zeta).unwrap();
                }
                for p in &e.poles {
                    if m {
                        let r = Record::new("pole")
                            .field("order", e.order)
                            .field("s", &p.pole)
                            .field("pole_order", p.order)
                            .field("class", &p.class)
                            .field("eigenvalue", p.eigenvalue);
                        writeln!(out, "{r}").unwrap();
                    } else {
                        writeln!(
                            out,
                            "  pole {} (order {}), class {}: {}",
                            p.pole,
                            p.order,
                            p.class,
                            if p.eigenvalue {
                                "eigenvalue"
                            } else {
                                "NOT an eigenvalue"
                            }
                        )
                        .unwrap();
                    }
                }
            }
            if !m {
                writeln!(
                    out,
                    "every pole induces an eigenvalue: {}",
                    rep.all_poles_induce_eigenvalues()
                )
                .unwrap();
            }
        }
        Cmd::Example { name } => match name {
            None => {
                for n in builders::NAMES {
                    if m {
                        writeln!(out, "{}", Record::new("example").field("name", n)).unwrap();
                    } else {
                        writeln!(out, "example:{n}").unwrap();
                    }
                }
            }
            Some(n) => out = show_diagram(&builders::by_name(&n)?, m),
        },
        Cmd::Gen { seed, moves } => out = show_diagram(&random_diagram(seed, moves), m),
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verify(out)) => {
            print!("{out}");
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
