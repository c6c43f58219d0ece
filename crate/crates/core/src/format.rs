//! The line-oriented instance file format.
//!
//! ```text
//! c optional comment lines
//! p gmcp <n> <m> <s> <t>
//! a <tail> <head> <capacity> <loss>     (exactly m lines)
//! ```
//!
//! Nodes are 1-based. Arcs are numbered in file order starting at 1.

use std::fmt;

use crate::error::{GraphError, ParseError, ParseErrorKind};
use crate::graph::{ArcId, Graph, Instance, NodeId};

struct Header {
    n: usize,
    m: usize,
    source: usize,
    sink: usize,
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut header: Option<(Header, usize)> = None;
    let mut graph: Option<Graph> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let err = |kind| ParseError { line, kind };
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        match tokens.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(err(ParseErrorKind::DuplicateProblemLine));
                }
                let h = parse_header(&tokens).map_err(err)?;
                graph = Some(Graph::new(h.n));
                header = Some((h, line));
            }
            Some("a") => {
                let (h, _) = header
                    .as_ref()
                    .ok_or_else(|| err(ParseErrorKind::MissingProblemLine))?;
                let g = graph.as_mut().expect("graph exists once header is set");
                if g.arc_count() == h.m {
                    return Err(err(ParseErrorKind::ArcCountMismatch {
                        expected: h.m,
                        found: h.m + 1,
                    }));
                }
                let (tail, head, capacity, loss) = parse_arc(&tokens).map_err(err)?;
                if capacity < 0.0 {
                    return Err(err(ParseErrorKind::NegativeCapacity(capacity)));
                }
                if loss <= 0.0 {
                    return Err(err(ParseErrorKind::NonPositiveLoss(loss)));
                }
                let n = g.node_count();
                let tail = node(tail, n).map_err(err)?;
                let head = node(head, n).map_err(err)?;
                g.add_arc(tail, head, capacity, loss)
                    .map_err(|e| err(e.into()))?;
            }
            Some(other) => {
                return Err(err(ParseErrorKind::Malformed(format!(
                    "unknown line type `{other}`"
                ))))
            }
        }
    }

    let Some((h, p_line)) = header else {
        return Err(ParseError {
            line: last_line.max(1),
            kind: ParseErrorKind::MissingProblemLine,
        });
    };
    let graph = graph.expect("graph exists once header is set");
    if graph.arc_count() != h.m {
        return Err(ParseError {
            line: last_line,
            kind: ParseErrorKind::ArcCountMismatch {
                expected: h.m,
                found: graph.arc_count(),
            },
        });
    }
    let at_header = |kind| ParseError { line: p_line, kind };
    let source = node(h.source, h.n).map_err(at_header)?;
    let sink = node(h.sink, h.n).map_err(at_header)?;
    Instance::new(graph, source, sink).map_err(|e| at_header(e.into()))
}

fn node(number: usize, n: usize) -> Result<NodeId, ParseErrorKind> {
    match NodeId::from_number(number) {
        Some(id) if number <= n => Ok(id),
        _ => Err(GraphError::NodeOutOfRange { node: number, n }.into()),
    }
}

fn parse_header(tokens: &[&str]) -> Result<Header, ParseErrorKind> {
    if tokens.len() != 6 || tokens[1] != "gmcp" {
        return Err(ParseErrorKind::Malformed(
            "expected `p gmcp <n> <m> <s> <t>`".into(),
        ));
    }
    let int = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| ParseErrorKind::Malformed(format!("bad {what} `{s}`")))
    };
    Ok(Header {
        n: int(tokens[2], "node count")?,
        m: int(tokens[3], "arc count")?,
        source: int(tokens[4], "source")?,
        sink: int(tokens[5], "sink")?,
    })
}

fn parse_arc(tokens: &[&str]) -> Result<(usize, usize, f64, f64), ParseErrorKind> {
    if tokens.len() != 5 {
        return Err(ParseErrorKind::Malformed(
            "expected `a <tail> <head> <capacity> <loss>`".into(),
        ));
    }
    let int = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| ParseErrorKind::Malformed(format!("bad node `{s}`")))
    };
    let real = |s: &str| match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ParseErrorKind::Malformed(format!("bad number `{s}`"))),
    };
    Ok((
        int(tokens[1])?,
        int(tokens[2])?,
        real(tokens[3])?,
        real(tokens[4])?,
    ))
}

/// Writes the canonical text form. `f64` display is the shortest string that
/// parses back to the same value, so the output round-trips exactly.
pub fn write_instance<W: fmt::Write>(out: &mut W, instance: &Instance) -> fmt::Result {
    let g = &instance.graph;
    writeln!(
        out,
        "p gmcp {} {} {} {}",
        g.node_count(),
        g.arc_count(),
        instance.source,
        instance.sink
    )?;
    for a in g.arcs() {
        writeln!(out, "a {} {} {} {}", a.tail, a.head, a.capacity, a.loss)?;
    }
    Ok(())
}

pub fn serialize_instance(instance: &Instance) -> String {
    let mut s = String::with_capacity(32 + 24 * instance.arc_count());
    write_instance(&mut s, instance).expect("writing to a String cannot fail");
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub arc: ArcId,
    pub severity: Severity,
    pub message: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: arc {}: {}", self.arc, self.message)
    }
}

/// Checks arc values. Loss factors above 1 are reported as warnings since
/// [`crate::normalize_capacities`] handles them.
pub fn validate(instance: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    for a in instance.graph.arcs() {
        let mut push = |severity, message| {
            out.push(Violation {
                arc: a.id,
                severity,
                message,
            })
        };
        if !a.capacity.is_finite() || !a.loss.is_finite() {
            push(Severity::Error, "non-finite capacity or loss factor");
            continue;
        }
        if a.capacity < 0.0 {
            push(Severity::Error, "negative capacity");
        }
        if a.loss <= 0.0 {
            push(Severity::Error, "nonpositive loss factor");
        } else if a.loss > 1.0 {
            push(
                Severity::Warning,
                "loss factor exceeds 1; apply normalization",
            );
        }
    }
    out
}

/// Short human summary of an instance, used in CLI output.
pub fn describe(instance: &Instance) -> String {
    format!(
        "n {} m {} s {} t {}",
        instance.node_count(),
        instance.arc_count(),
        instance.source,
        instance.sink
    )
}
