//! Plain-text edge-list format.
//!
//! ```text
//! # comment
//! version=1
//! n=3
//! labels=ann bob cy
//! 0 1 0.9
//! 1 2 0.9
//! 2 0 0.9
//! ```
//!
//! Header lines are `key=value` and come first; `n` is required, `version`
//! (only `1`) and `labels` are optional. Each record `u v p` is the directed
//! edge `u -> v` with weight `p`; `u` and `v` are vertex ids or labels.
//! Weights are written in the shortest decimal form that parses back to the
//! same `f64`, so serialization round-trips bit-exactly.

use std::fmt::Write as _;
use std::io::Read;

use crate::error::{Error, Result};
use crate::extend::TreeWeights;
use crate::tournament::{StochasticTournament, TournamentBuilder, DEFAULT_FLOOR};

pub const FORMAT_VERSION: u32 = 1;

/// A tournament together with optional vertex labels.
#[derive(Debug, Clone, PartialEq)]
pub struct TournamentFile {
    pub tournament: StochasticTournament,
    pub labels: Option<Vec<String>>,
}

impl TournamentFile {
    pub fn new(tournament: StochasticTournament) -> Self {
        Self {
            tournament,
            labels: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc = Document::parse(text)?;
        let mut b =
            TournamentBuilder::new(doc.n, DEFAULT_FLOOR).map_err(|e| e.at_line(doc.n_line))?;
        for r in &doc.records {
            b.insert(r.tail, r.head, r.weight)
                .map_err(|e| e.at_line(r.line))?;
        }
        Ok(Self {
            tournament: b.finish()?,
            labels: doc.labels,
        })
    }

    pub fn read<R: Read>(mut reader: R) -> Result<Self> {
        let mut s = String::new();
        reader.read_to_string(&mut s).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })?;
        Self::parse(&s)
    }

    pub fn serialize(&self) -> String {
        let t = &self.tournament;
        let mut out = header(t.n(), self.labels.as_deref());
        for e in t.edges() {
            let _ = writeln!(out, "{} {} {}", e.tail, e.head, e.weight);
        }
        out
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }
}

pub fn parse(text: &str) -> Result<StochasticTournament> {
    Ok(TournamentFile::parse(text)?.tournament)
}

pub fn serialize(t: &StochasticTournament) -> String {
    TournamentFile::new(t.clone()).serialize()
}

/// Tree files use the same layout with exactly `n - 1` records.
pub fn parse_tree(text: &str) -> Result<TreeWeights> {
    let doc = Document::parse(text)?;
    let edges = doc
        .records
        .iter()
        .map(|r| (r.tail, r.head, r.weight))
        .collect();
    TreeWeights::new(doc.n, edges)
}

pub fn serialize_tree(tw: &TreeWeights) -> String {
    let mut out = header(tw.n(), None);
    for &(a, b, w) in tw.edges() {
        let _ = writeln!(out, "{a} {b} {w}");
    }
    out
}

fn header(n: usize, labels: Option<&[String]>) -> String {
    let mut out = format!("version={FORMAT_VERSION}\nn={n}\n");
    if let Some(l) = labels {
        let _ = writeln!(out, "labels={}", l.join(" "));
    }
    out
}

struct Record {
    line: usize,
    tail: usize,
    head: usize,
    weight: f64,
}

struct Document {
    n: usize,
    n_line: usize,
    labels: Option<Vec<String>>,
    records: Vec<Record>,
}

impl Document {
    fn parse(text: &str) -> Result<Self> {
        let mut n: Option<(usize, usize)> = None;
        let mut labels: Option<Vec<String>> = None;
        let mut records = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| Error::Parse { line, msg };
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            if let Some((key, value)) = s.split_once('=') {
                if !records.is_empty() {
                    return Err(err("header line after edge records".into()));
                }
                let value = value.trim();
                match key.trim() {
                    "version" => {
                        if value != FORMAT_VERSION.to_string() {
                            return Err(err(format!("unsupported version {value}")));
                        }
                    }
                    "n" => {
                        if n.is_some() {
                            return Err(err("n given twice".into()));
                        }
                        let v = value
                            .parse::<usize>()
                            .map_err(|_| err(format!("bad vertex count {value:?}")))?;
                        n = Some((v, line));
                    }
                    "labels" => {
                        let l: Vec<String> = value.split_whitespace().map(String::from).collect();
                        let mut sorted = l.clone();
                        sorted.sort();
                        if sorted.windows(2).any(|w| w[0] == w[1]) {
                            return Err(err("labels are not unique".into()));
                        }
                        labels = Some(l);
                    }
                    other => return Err(err(format!("unknown header key {other:?}"))),
                }
                continue;
            }
            let Some((count, _)) = n else {
                return Err(err("edge record before the n= header".into()));
            };
            let fields: Vec<&str> = s.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err(format!(
                    "expected `u v p`, got {} fields",
                    fields.len()
                )));
            }
            let vertex = |tok: &str| -> Result<usize> {
                if let Some(l) = &labels {
                    if let Some(i) = l.iter().position(|x| x == tok) {
                        return Ok(i);
                    }
                }
                let v = tok
                    .parse::<usize>()
                    .map_err(|_| err(format!("unknown vertex {tok:?}")))?;
                if v >= count {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        n: count,
                    }
                    .at_line(line));
                }
                Ok(v)
            };
            let tail = vertex(fields[0])?;
            let head = vertex(fields[1])?;
            let weight = fields[2]
                .parse::<f64>()
                .map_err(|_| err(format!("bad probability {:?}", fields[2])))?;
            records.push(Record {
                line,
                tail,
                head,
                weight,
            });
        }
        let Some((n, n_line)) = n else {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                msg: "missing n= header".into(),
            });
        };
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::Parse {
                    line: n_line,
                    msg: format!("{} labels for {n} vertices", l.len()),
                });
            }
        }
        Ok(Self {
            n,
            n_line,
            labels,
            records,
        })
    }
}
