//! The line-oriented `.sd` format:
//!
//! ```text
//! # comment
//! node <id> [N=<int> nu=<int>]
//! edge <id1> <id2> <d1> <d2>
//! arrow <id> <dec> <N> <nu>
//! ```

use std::fmt::Write;

use crate::diagram::Diagram;
use crate::error::{Error, Result};

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parse without validating.
pub fn parse_sd_unchecked(text: &str) -> Result<Diagram> {
    let mut g = Diagram::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let body = raw.split('#').next().unwrap_or("");
        // (column, token), columns 1-based
        let mut toks: Vec<(usize, &str)> = Vec::new();
        let mut start = None;
        for (i, ch) in body.char_indices() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    toks.push((s + 1, &body[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            toks.push((s + 1, &body[s..]));
        }
        let Some(&(col0, kw)) = toks.first() else {
            continue;
        };
        let end_col = body.trim_end().len() + 1;
        let int = |idx: usize, what: &str| -> Result<i64> {
            let (c, t) = toks
                .get(idx)
                .ok_or_else(|| err(line_no, end_col, format!("missing {what}")))?;
            t.parse::<i64>()
                .map_err(|_| err(line_no, *c, format!("expected integer {what}, found '{t}'")))
        };
        let nonneg = |idx: usize, what: &str| -> Result<u64> {
            let v = int(idx, what)?;
            u64::try_from(v).map_err(|_| err(line_no, toks[idx].0, format!("{what} must be >= 0")))
        };
        let id = |idx: usize| -> Result<&str> {
            toks.get(idx)
                .map(|t| t.1)
                .ok_or_else(|| err(line_no, end_col, "missing node id"))
        };
        let arity = |n: usize| -> Result<()> {
            match toks.get(n) {
                Some((c, t)) => Err(err(line_no, *c, format!("unexpected '{t}'"))),
                None => Ok(()),
            }
        };
        match kw {
            "node" => {
                let name = id(1)?;
                let cache = match toks.len() {
                    2 => None,
                    4 => {
                        let field = |idx: usize, key: &str| -> Result<&str> {
                            let (c, t) = toks[idx];
                            t.strip_prefix(key)
                                .ok_or_else(|| err(line_no, c, format!("expected {key}<int>")))
                        };
                        let n_txt = field(2, "N=")?;
                        let nu_txt = field(3, "nu=")?;
                        let n = n_txt
                            .parse::<u64>()
                            .map_err(|_| err(line_no, toks[2].0 + 2, "bad N value"))?;
                        let nu = nu_txt
                            .parse::<i64>()
                            .map_err(|_| err(line_no, toks[3].0 + 3, "bad nu value"))?;
                        Some((n, nu))
                    }
                    _ => {
                        let (c, _) = toks[2.min(toks.len() - 1)];
                        return Err(err(
                            line_no,
                            c,
                            "expected 'node <id>' or 'node <id> N=<int> nu=<int>'",
                        ));
                    }
                };
                g.add_node(name, cache);
            }
            "edge" => {
                let (a, b) = (id(1)?, id(2)?);
                let (da, db) = (nonneg(3, "decoration")?, nonneg(4, "decoration")?);
                for (idx, d) in [(3, da), (4, db)] {
                    if d == 0 {
                        return Err(err(line_no, toks[idx].0, "decoration must be >= 1"));
                    }
                }
                arity(5)?;
                g.add_edge(a, b, da, db);
            }
            "arrow" => {
                let v = id(1)?;
                let dec = nonneg(2, "decoration")?;
                if dec == 0 {
                    return Err(err(line_no, toks[2].0, "decoration must be >= 1"));
                }
                let n = nonneg(3, "N")?;
                let nu = int(4, "nu")?;
                arity(5)?;
                g.add_arrow(v, dec, n, nu);
            }
            other => return Err(err(line_no, col0, format!("unknown directive '{other}'"))),
        }
    }
    Ok(g)
}

/// Parse and validate.
pub fn parse_sd(text: &str) -> Result<Diagram> {
    parse_sd_unchecked(text)?.validated()
}

/// Canonical text: nodes sorted, edges oriented and sorted, arrows sorted.
pub fn write_sd(g: &Diagram) -> String {
    let g = g.canonical();
    let mut out = String::new();
    for id in g.node_ids() {
        match g.cache(id) {
            Some((n, nu)) => writeln!(out, "node {id} N={n} nu={nu}").unwrap(),
            None => writeln!(out, "node {id}").unwrap(),
        }
    }
    for e in g.edges() {
        writeln!(out, "edge {} {} {} {}", e.a, e.b, e.dec_a, e.dec_b).unwrap();
    }
    for a in g.arrows() {
        writeln!(out, "arrow {} {} {} {}", a.node, a.dec, a.n, a.nu).unwrap();
    }
    out
}
