//! Text and JSON formats.
//!
//! Poset text: an `elements: e1 e2 ..` line followed by `x < y` lines, one
//! cover relation each. Graph text: a `vertices: v1 v2 ..` line followed by
//! `u -- v` lines. In both, `#` starts a comment line and blank lines are
//! skipped.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decomp::{DecompNode, STDecomposition, Side};
use crate::graph::Graph;
use crate::poset::{LinearExtension, Poset};
use crate::realizer::{PairClass, Realizer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number, when the problem belongs to one line.
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn whole(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}

/// Meaningful lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Names from the header, then `(line, x, y)` for each relation line.
type Listing<'a> = (Vec<String>, Vec<(usize, &'a str, &'a str)>);

/// Header line `keyword: a b c` followed by `x OP y` lines.
fn parse_listing<'a>(text: &'a str, keyword: &str, op: &str) -> Result<Listing<'a>, ParseError> {
    let mut lines = content_lines(text);
    let (first_no, first) = lines
        .next()
        .ok_or_else(|| ParseError::whole(format!("missing `{keyword}:` line")))?;
    let rest = first
        .strip_prefix(keyword)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| ParseError::at(first_no, format!("expected `{keyword}:`")))?;
    let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
    let mut pairs = Vec::new();
    for (no, line) in lines {
        match line.split_whitespace().collect::<Vec<_>>()[..] {
            [x, o, y] if o == op => pairs.push((no, x, y)),
            _ => {
                return Err(ParseError::at(
                    no,
                    format!("expected `x {op} y`, got `{line}`"),
                ))
            }
        }
    }
    Ok((names, pairs))
}

pub fn read_poset(text: &str) -> Result<Poset, ParseError> {
    let (names, pairs) = parse_listing(text, "elements", "<")?;
    let mut index = std::collections::HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(ParseError::at(
                first_line(text),
                format!("duplicate element `{name}`"),
            ));
        }
    }
    let mut rel = Vec::with_capacity(pairs.len());
    for (no, x, y) in pairs {
        let a = *index
            .get(x)
            .ok_or_else(|| ParseError::at(no, format!("unknown element `{x}`")))?;
        let b = *index
            .get(y)
            .ok_or_else(|| ParseError::at(no, format!("unknown element `{y}`")))?;
        if a == b {
            return Err(ParseError::at(
                no,
                format!("`{x} < {x}` is not a strict relation"),
            ));
        }
        rel.push((a, b));
    }
    Poset::from_relation(names, &rel).map_err(|e| ParseError::whole(e.to_string()))
}

fn first_line(text: &str) -> usize {
    content_lines(text).next().map_or(1, |(n, _)| n)
}

pub fn write_poset(p: &Poset) -> String {
    let mut out = format!("elements: {}\n", p.names().join(" "));
    for &(x, y) in p.covers() {
        out.push_str(&format!("{} < {}\n", p.name(x), p.name(y)));
    }
    out
}

pub fn read_graph(text: &str) -> Result<Graph, ParseError> {
    let (names, pairs) = parse_listing(text, "vertices", "--")?;
    let mut g = Graph::new(names).map_err(|e| ParseError::at(first_line(text), e.to_string()))?;
    for (no, x, y) in pairs {
        let a = g
            .index_of(x)
            .ok_or_else(|| ParseError::at(no, format!("unknown vertex `{x}`")))?;
        let b = g
            .index_of(y)
            .ok_or_else(|| ParseError::at(no, format!("unknown vertex `{y}`")))?;
        g.add_edge(a, b)
            .map_err(|e| ParseError::at(no, e.to_string()))?;
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("vertices: {}\n", g.names().join(" "));
    for (u, v) in g.edges() {
        out.push_str(&format!("{} -- {}\n", g.name(u), g.name(v)));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    parent: Option<usize>,
    side: Option<String>,
    bag: Vec<String>,
    s: String,
    t: String,
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    nodes: Vec<NodeJson>,
}

/// Decomposition as JSON, with vertices named by `host`.
pub fn write_decomposition(d: &STDecomposition, host: &Graph) -> String {
    let nodes = (0..d.len())
        .map(|u| NodeJson {
            id: u,
            parent: d.parent(u),
            side: d.side(u).map(|s| match s {
                Side::Left => "left".to_string(),
                Side::Right => "right".to_string(),
            }),
            bag: d.bag(u).iter().map(|&v| host.name(v).to_string()).collect(),
            s: host.name(d.source(u)).to_string(),
            t: host.name(d.sink(u)).to_string(),
        })
        .collect();
    serde_json::to_string_pretty(&DecompositionJson { nodes }).expect("serializable") + "\n"
}

pub fn read_decomposition(json: &str, host: &Graph) -> Result<STDecomposition, ParseError> {
    let parsed: DecompositionJson =
        serde_json::from_str(json).map_err(|e| ParseError::at(e.line(), e.to_string()))?;
    let len = parsed.nodes.len();
    let vertex = |name: &str| {
        host.index_of(name)
            .ok_or_else(|| ParseError::whole(format!("unknown vertex `{name}`")))
    };
    let mut nodes = vec![None; len];
    let mut root = None;
    let mut links = Vec::new();
    for n in &parsed.nodes {
        if n.id >= len || nodes[n.id].is_some() {
            return Err(ParseError::whole(format!(
                "bad or repeated node id {}",
                n.id
            )));
        }
        let bag = n
            .bag
            .iter()
            .map(|b| vertex(b))
            .collect::<Result<Vec<_>, _>>()?;
        nodes[n.id] = Some(DecompNode {
            bag,
            source: vertex(&n.s)?,
            sink: vertex(&n.t)?,
            left: None,
            right: None,
        });
        match (n.parent, n.side.as_deref()) {
            (None, None) if root.is_none() => root = Some(n.id),
            (Some(p), Some(side @ ("left" | "right"))) if p < len => {
                links.push((p, side == "left", n.id))
            }
            _ => {
                return Err(ParseError::whole(format!(
                    "node {}: bad parent or side",
                    n.id
                )))
            }
        }
    }
    let mut nodes: Vec<DecompNode> = nodes.into_iter().map(Option::unwrap).collect();
    for (p, is_left, c) in links {
        let slot = if is_left {
            &mut nodes[p].left
        } else {
            &mut nodes[p].right
        };
        if slot.replace(c).is_some() {
            return Err(ParseError::whole(format!(
                "node {p} has two children on one side"
            )));
        }
    }
    let root = root.ok_or_else(|| ParseError::whole("no root node"))?;
    STDecomposition::from_nodes(nodes, root).map_err(|e| ParseError::whole(e.to_string()))
}

#[derive(Serialize, Deserialize)]
struct SignatureJson {
    kind: u8,
    alpha: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<u8>,
}

#[derive(Serialize, Deserialize)]
struct ExtensionJson {
    signature: Option<SignatureJson>,
    extension: Vec<String>,
}

fn signature_json(c: PairClass) -> SignatureJson {
    match c {
        PairClass::Type1 { alpha, beta } => SignatureJson {
            kind: 1,
            alpha,
            beta: Some(beta),
            gamma: None,
            delta: None,
        },
        PairClass::Type2 {
            alpha,
            gamma,
            delta,
        } => SignatureJson {
            kind: 2,
            alpha,
            beta: None,
            gamma: Some(gamma),
            delta: Some(delta),
        },
    }
}

fn signature_from_json(s: &SignatureJson) -> Result<PairClass, ParseError> {
    let ok = |v: u8| matches!(v, 1 | 2);
    let class = match (s.kind, s.beta, s.gamma, s.delta) {
        (1, Some(beta), None, None) => PairClass::Type1 {
            alpha: s.alpha,
            beta,
        },
        (2, None, Some(gamma), Some(delta)) => PairClass::Type2 {
            alpha: s.alpha,
            gamma,
            delta,
        },
        _ => return Err(ParseError::whole("signature fields do not match its kind")),
    };
    let values_ok = match class {
        PairClass::Type1 { alpha, beta } => ok(alpha) && ok(beta),
        PairClass::Type2 {
            alpha,
            gamma,
            delta,
        } => ok(alpha) && ok(gamma) && ok(delta),
    };
    if !values_ok {
        return Err(ParseError::whole("signature values must be 1 or 2"));
    }
    Ok(class)
}

pub fn write_realizer(r: &Realizer, p: &Poset) -> String {
    let items: Vec<ExtensionJson> = r
        .extensions
        .iter()
        .map(|(sig, ext)| ExtensionJson {
            signature: sig.map(signature_json),
            extension: ext.order.iter().map(|&x| p.name(x).to_string()).collect(),
        })
        .collect();
    serde_json::to_string_pretty(&items).expect("serializable") + "\n"
}

/// Reads Realizer JSON; names must be elements of `p`. Whether the orders are
/// linear extensions is left to verification.
pub fn read_realizer(json: &str, p: &Poset) -> Result<Realizer, ParseError> {
    let items: Vec<ExtensionJson> =
        serde_json::from_str(json).map_err(|e| ParseError::at(e.line(), e.to_string()))?;
    let mut extensions = Vec::with_capacity(items.len());
    for item in &items {
        let sig = item
            .signature
            .as_ref()
            .map(signature_from_json)
            .transpose()?;
        let order = item
            .extension
            .iter()
            .map(|name| {
                p.index_of(name)
                    .ok_or_else(|| ParseError::whole(format!("unknown element `{name}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        extensions.push((sig, LinearExtension::new(order)));
    }
    Ok(Realizer { extensions })
}

/// Poset text followed by Realizer JSON, as written by `write_bundle`.
pub fn read_bundle(text: &str) -> Result<(Poset, Realizer), ParseError> {
    let split = text
        .lines()
        .scan(0usize, |offset, line| {
            let start = *offset;
            *offset += line.len() + 1;
            Some((start, line))
        })
        .find(|(_, line)| line.trim_start().starts_with('['))
        .map(|(start, _)| start)
        .ok_or_else(|| ParseError::whole("no realizer JSON after the poset"))?;
    let poset = read_poset(&text[..split])?;
    let base = text[..split].lines().count();
    let realizer = read_realizer(&text[split..], &poset).map_err(|mut e| {
        e.line = e.line.map(|l| l + base);
        e
    })?;
    Ok((poset, realizer))
}

pub fn write_bundle(p: &Poset, r: &Realizer) -> String {
    write_poset(p) + &write_realizer(r, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realizer::realize_tw2;
    use crate::sp::embed_into_sp;

    const DIAMOND: &str = "# a diamond\nelements: a b c d\n\na < b\na < c\nb < d\nc < d\n";

    #[test]
    fn poset_round_trip() {
        let p = read_poset(DIAMOND).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.less(0, 3));
        assert_eq!(read_poset(&write_poset(&p)).unwrap(), p);
    }

    #[test]
    fn poset_errors_carry_lines() {
        let e = read_poset("elements: a b\na <\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = read_poset("elements: a b\n\na < z\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        let e = read_poset("a < b\n").unwrap_err();
        assert_eq!(e.line, Some(1));
        assert!(read_poset("elements: a b\na < b\nb < a\n").is_err());
        assert!(read_poset("elements: a a\n").is_err());
    }

    #[test]
    fn graph_round_trip() {
        let g = read_graph("vertices: u v w\nu -- v\nv -- w\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
        assert_eq!(
            read_graph("vertices: u\nu -- u\n").unwrap_err().line,
            Some(2)
        );
    }

    #[test]
    fn decomposition_round_trip() {
        let g = read_graph("vertices: a b c d\na -- b\nb -- c\nc -- d\nd -- a\n").unwrap();
        let e = embed_into_sp(&g).unwrap();
        let d = STDecomposition::build(&e.sp).unwrap();
        let json = write_decomposition(&d, &e.host);
        assert_eq!(read_decomposition(&json, &e.host).unwrap(), d);
    }

    #[test]
    fn realizer_round_trip() {
        let p = read_poset("elements: a1 a2 b1 b2\na1 < b2\na2 < b1\n").unwrap();
        let r = realize_tw2(&p).unwrap();
        let json = write_realizer(&r, &p);
        assert_eq!(read_realizer(&json, &p).unwrap(), r);
        let (q, s) = read_bundle(&write_bundle(&p, &r)).unwrap();
        assert_eq!((q, s), (p.clone(), r));
        assert!(read_realizer(
            r#"[{"signature":{"kind":1,"alpha":3,"beta":1},"extension":[]}]"#,
            &p
        )
        .is_err());
    }
}
