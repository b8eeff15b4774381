//! One-record-per-line key/value output: `record=<kind> key=value ...`.
//!
//! Values are percent-escaped (`%`, space, `=`, newline) so every line
//! splits unambiguously on spaces.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            fields: Vec::new(),
        }
    }

    pub fn field(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '%' => out.push_str("%25"),
            ' ' => out.push_str("%20"),
            '=' => out.push_str("%3D"),
            '\n' => out.push_str("%0A"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut it = s.chars();
    while let Some(c) = it.next() {
        if c == '%' {
            let code: String = it.by_ref().take(2).collect();
            out.push(match code.as_str() {
                "25" => '%',
                "20" => ' ',
                "3D" => '=',
                "0A" => '\n',
                _ => return None,
            });
        } else {
            out.push(c);
        }
    }
    Some(out)
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "record={}", escape(&self.kind))?;
        for (k, v) in &self.fields {
            write!(f, " {}={}", escape(k), escape(v))?;
        }
        Ok(())
    }
}

pub fn parse_record(line: &str) -> Result<Record> {
    let bad = |column: usize, message: &str| Error::Parse {
        line: 1,
        column,
        message: message.to_string(),
    };
    let mut kind = None;
    let mut fields = Vec::new();
    let mut col = 1;
    for tok in line.split(' ') {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| bad(col, "expected key=value"))?;
        let (k, v) = (
            unescape(k).ok_or_else(|| bad(col, "bad escape"))?,
            unescape(v).ok_or_else(|| bad(col, "bad escape"))?,
        );
        if kind.is_none() {
            if k != "record" {
                return Err(bad(col, "line must start with record="));
            }
            kind = Some(v);
        } else {
            fields.push((k, v));
        }
        col += tok.len() + 1;
    }
    Ok(Record {
        kind: kind.ok_or_else(|| bad(1, "empty line"))?,
        fields,
    })
}
