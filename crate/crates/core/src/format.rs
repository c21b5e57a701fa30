//! Text formats: score/preference TSV, hub files, patch files, and the graph
//! digest that ties precomputed vectors to the graph they were computed on.
//!
//! Hub file: one block per hub, each a header followed by the entries of the
//! hub's ranking vector (fields separated by a tab):
//!
//! ```text
//! #hub 7 alpha=0.85 graph=<sha-256 hex>
//! 7 0.15
//! 3 0.0421
//! ```
//!
//! Patch file: a single block with header `#patch alpha=<α> graph=<hex>`.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{NodeId, WeightedGraph};
use crate::hubs::HubSet;
use crate::sparse::SparseVector;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing {0} header")]
    MissingHeader(&'static str),
    #[error("graph digest mismatch: file has {found}, graph is {expected}")]
    DigestMismatch { expected: String, found: String },
    #[error("damping factor mismatch: file has {found}, run uses {expected}")]
    AlphaMismatch { expected: f64, found: f64 },
    #[error("hub {0}: {1}")]
    Hub(NodeId, String),
}

/// SHA-256 of the canonical weighted edge list, in lowercase hex.
pub fn graph_digest(graph: &WeightedGraph) -> String {
    let hash = Sha256::digest(graph.to_edge_list().as_bytes());
    hash.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// `node\tscore` lines by decreasing score, ties by increasing node. Scores
/// use the shortest representation that parses back to the same `f64`.
pub fn write_scores(v: &SparseVector) -> String {
    let mut out = String::new();
    for (node, score) in v.ranked() {
        let _ = writeln!(out, "{node}\t{score}");
    }
    out
}

fn malformed(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        message: message.into(),
    }
}

fn parse_entry(line: usize, text: &str) -> Result<(NodeId, f64), FormatError> {
    let mut fields = text.split_whitespace();
    let (Some(node), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(malformed(line, "expected `node<TAB>value`"));
    };
    let node = node
        .parse::<usize>()
        .map_err(|_| malformed(line, format!("bad node {node:?}")))?;
    let value = value
        .parse::<f64>()
        .map_err(|_| malformed(line, format!("bad value {value:?}")))?;
    if !value.is_finite() || value < 0.0 {
        return Err(malformed(line, format!("invalid value {value}")));
    }
    Ok((NodeId(node), value))
}

/// Parses `node<TAB>value` lines (any whitespace separates fields; `#` lines
/// are skipped). The vector is returned as read, without normalization.
pub fn parse_vector(text: &str) -> Result<SparseVector, FormatError> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        pairs.push((i + 1, parse_entry(i + 1, t)?));
    }
    let mut seen = std::collections::HashSet::new();
    for &(line, (node, _)) in &pairs {
        if !seen.insert(node) {
            return Err(malformed(line, format!("node {node} given twice")));
        }
    }
    Ok(SparseVector::from_pairs(pairs.into_iter().map(|(_, e)| e)).expect("entries validated"))
}

fn parse_header_fields(
    line: usize,
    fields: &mut std::str::SplitWhitespace<'_>,
) -> Result<(f64, String), FormatError> {
    let mut alpha = None;
    let mut digest = None;
    for field in fields {
        if let Some(a) = field.strip_prefix("alpha=") {
            alpha = Some(
                a.parse::<f64>()
                    .map_err(|_| malformed(line, format!("bad alpha {a:?}")))?,
            );
        } else if let Some(d) = field.strip_prefix("graph=") {
            digest = Some(d.to_string());
        } else {
            return Err(malformed(
                line,
                format!("unexpected header field {field:?}"),
            ));
        }
    }
    match (alpha, digest) {
        (Some(a), Some(d)) => Ok((a, d)),
        _ => Err(malformed(line, "header needs alpha= and graph=")),
    }
}

/// Parsed hub file.
#[derive(Debug, Clone, PartialEq)]
pub struct HubFile {
    pub alpha: f64,
    pub digest: String,
    pub hubs: HubSet,
}

impl HubFile {
    /// Checks that the file was computed for `graph` and `alpha`.
    pub fn verify(&self, digest: &str, alpha: f64) -> Result<(), FormatError> {
        verify(&self.digest, self.alpha, digest, alpha)
    }
}

fn verify(found: &str, found_alpha: f64, expected: &str, alpha: f64) -> Result<(), FormatError> {
    if found != expected {
        return Err(FormatError::DigestMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
    if found_alpha != alpha {
        return Err(FormatError::AlphaMismatch {
            expected: alpha,
            found: found_alpha,
        });
    }
    Ok(())
}

pub fn write_hub_file(hubs: &HubSet, digest: &str) -> String {
    let mut out = String::new();
    for (node, hub) in hubs.iter() {
        let _ = writeln!(out, "#hub {node} alpha={} graph={digest}", hubs.alpha());
        for (y, value) in hub.s.iter() {
            let _ = writeln!(out, "{y}\t{value}");
        }
    }
    out
}

type HubBlock = (usize, NodeId, Vec<(NodeId, f64)>);

pub fn parse_hub_file(text: &str) -> Result<HubFile, FormatError> {
    let mut header: Option<(f64, String)> = None;
    // (header line, hub, entries)
    let mut blocks: Vec<HubBlock> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix("#hub") {
            let mut fields = rest.split_whitespace();
            let node = fields
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| malformed(lineno, "hub header needs a node id"))?;
            let (alpha, digest) = parse_header_fields(lineno, &mut fields)?;
            match &header {
                None => header = Some((alpha, digest)),
                Some((a, d)) if *a == alpha && *d == digest => {}
                Some(_) => return Err(malformed(lineno, "hub blocks disagree on alpha or graph")),
            }
            blocks.push((lineno, NodeId(node), Vec::new()));
        } else if t.starts_with('#') {
            continue;
        } else {
            let entry = parse_entry(lineno, t)?;
            match blocks.last_mut() {
                Some(block) => block.2.push(entry),
                None => return Err(FormatError::MissingHeader("#hub")),
            }
        }
    }
    let (alpha, digest) = header.ok_or(FormatError::MissingHeader("#hub"))?;
    let mut hubs = HubSet::new(alpha);
    for (line, node, entries) in blocks {
        if hubs.contains(node) {
            return Err(malformed(line, format!("hub {node} given twice")));
        }
        let s =
            SparseVector::from_pairs(entries).map_err(|e| FormatError::Hub(node, e.to_string()))?;
        hubs.insert(node, s)
            .map_err(|e| FormatError::Hub(node, e.to_string()))?;
    }
    Ok(HubFile {
        alpha,
        digest,
        hubs,
    })
}

/// Parsed patch file: the ranking **s** of the patched matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchFile {
    pub alpha: f64,
    pub digest: String,
    pub s: SparseVector,
}

impl PatchFile {
    pub fn verify(&self, digest: &str, alpha: f64) -> Result<(), FormatError> {
        verify(&self.digest, self.alpha, digest, alpha)
    }
}

pub fn write_patch_file(s: &SparseVector, alpha: f64, digest: &str) -> String {
    let mut out = format!("#patch alpha={alpha} graph={digest}\n");
    for (y, value) in s.iter() {
        let _ = writeln!(out, "{y}\t{value}");
    }
    out
}

pub fn parse_patch_file(text: &str) -> Result<PatchFile, FormatError> {
    let mut header = None;
    let mut body = String::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix("#patch") {
            if header.is_some() {
                return Err(malformed(i + 1, "second #patch header"));
            }
            header = Some(parse_header_fields(i + 1, &mut rest.split_whitespace())?);
            body.push('\n');
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let (alpha, digest) = header.ok_or(FormatError::MissingHeader("#patch"))?;
    let s = parse_vector(&body)?;
    Ok(PatchFile { alpha, digest, s })
}
