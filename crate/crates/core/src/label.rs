//! Labels, label sets, the label file format and scheme-independent decoding.
//!
//! Every label starts with the same header: γ(scheme tag), γ(n), then the
//! node id in `width_for(n - 1)` bits. The scheme body follows.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::additive::AdditiveView;
use crate::codec::{width_for, BitCursor, BitString, BitWriter, CodecError};
use crate::graph::{Dist, GraphError, NodeId};
use crate::preserving::{FullView, LevelView, TrivialView, WarmupView};
use crate::sparse::NearView;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("landmark sampling failed after {attempts} attempts (last attempt: {last})")]
    ResampleCapExhausted { attempts: u32, last: String },
    #[error("node {node} has degree {degree}, above the bound {bound}")]
    DegreeBound { node: NodeId, degree: usize, bound: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("labels are incompatible: {0}")]
    Incompatible(String),
    #[error("expected a {expected} label, found {found}")]
    WrongScheme { expected: SchemeTag, found: SchemeTag },
    #[error("unknown scheme tag {0}")]
    UnknownScheme(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeTag {
    Warmup,
    Medium,
    Full,
    Trivial,
    BoundedDegree,
    Sparse,
    Additive,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 7] = [
        SchemeTag::Warmup,
        SchemeTag::Medium,
        SchemeTag::Full,
        SchemeTag::Trivial,
        SchemeTag::BoundedDegree,
        SchemeTag::Sparse,
        SchemeTag::Additive,
    ];

    pub fn code(self) -> u64 {
        self as u64 + 1
    }

    pub fn from_code(code: u64) -> Result<SchemeTag, DecodeError> {
        SchemeTag::ALL
            .iter()
            .copied()
            .find(|t| t.code() == code)
            .ok_or(DecodeError::UnknownScheme(code))
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeTag::Warmup => "warmup",
            SchemeTag::Medium => "medium",
            SchemeTag::Full => "full",
            SchemeTag::Trivial => "trivial",
            SchemeTag::BoundedDegree => "bdeg",
            SchemeTag::Sparse => "sparse",
            SchemeTag::Additive => "additive",
        }
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeTag::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown scheme {s:?}"))
    }
}

/// One node's label.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Label(pub BitString);

impl Label {
    pub fn bits(&self) -> &BitString {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn header(&self) -> Result<Header, DecodeError> {
        Header::read(&mut self.0.cursor())
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Label({} bits)", self.0.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub scheme: SchemeTag,
    /// Node count of the graph the label was computed on.
    pub n: u32,
    pub id: NodeId,
}

impl Header {
    pub(crate) fn write(&self, w: &mut BitWriter) -> Result<(), CodecError> {
        w.write_gamma(self.scheme.code())?;
        w.write_gamma(self.n as u64)?;
        w.write_fixed(self.id as u64, width_for(self.n.saturating_sub(1) as u64))
    }

    pub(crate) fn read(c: &mut BitCursor<'_>) -> Result<Header, DecodeError> {
        let scheme = SchemeTag::from_code(c.read_gamma()?)?;
        let n = c.read_gamma_u32()?;
        let pos = c.position();
        let id = c.read_fixed(width_for(n.saturating_sub(1) as u64))? as NodeId;
        if id >= n {
            return Err(CodecError::Malformed { position: pos }.into());
        }
        Ok(Header { scheme, n, id })
    }
}

/// Scheme tag plus the parameters recorded in a label-file header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeInfo {
    pub tag: SchemeTag,
    /// Scheme-specific values, e.g. `[D, level count, landmarks per level..]`.
    pub params: Vec<u64>,
}

/// Labels for every node of one graph, indexed by node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    pub scheme: SchemeInfo,
    pub labels: Vec<Label>,
}

pub const MAGIC: &[u8; 5] = b"DLAB1";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeStats {
    pub max_bits: usize,
    pub mean_bits: f64,
    pub p50_bits: usize,
    pub p99_bits: usize,
    pub total_bits: usize,
}

impl LabelSet {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, u: NodeId) -> &Label {
        &self.labels[u as usize]
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> Result<Dist, DecodeError> {
        decode(self.label(u), self.label(v))
    }

    pub fn parse_all(&self) -> Result<Vec<ParsedLabel>, DecodeError> {
        self.labels.iter().map(ParsedLabel::parse).collect()
    }

    pub fn size_stats(&self) -> SizeStats {
        let mut sizes: Vec<usize> = self.labels.iter().map(Label::len).collect();
        sizes.sort_unstable();
        let pick = |q: f64| {
            if sizes.is_empty() {
                0
            } else {
                sizes[((sizes.len() - 1) as f64 * q).round() as usize]
            }
        };
        let total: usize = sizes.iter().sum();
        SizeStats {
            max_bits: sizes.last().copied().unwrap_or(0),
            mean_bits: if sizes.is_empty() { 0.0 } else { total as f64 / sizes.len() as f64 },
            p50_bits: pick(0.5),
            p99_bits: pick(0.99),
            total_bits: total,
        }
    }

    /// File layout: ASCII `DLAB1`, then a bit stream holding γ(tag),
    /// γ(param count + 1), γ(param + 1) for each parameter, γ(label count + 1)
    /// and one record per node: γ(id + 1), γ(bit length), raw label bits.
    /// The stream is zero-padded to a byte boundary.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = BitWriter::new();
        w.write_gamma(self.scheme.tag.code()).unwrap();
        w.write_gamma(self.scheme.params.len() as u64 + 1).unwrap();
        for &p in &self.scheme.params {
            w.write_gamma(p + 1).unwrap();
        }
        w.write_gamma(self.labels.len() as u64 + 1).unwrap();
        for (id, label) in self.labels.iter().enumerate() {
            w.write_gamma(id as u64 + 1).unwrap();
            w.write_gamma(label.len() as u64).unwrap();
            w.append(label.bits());
        }
        let bits = w.finish();
        let mut out = MAGIC.to_vec();
        out.extend_from_slice(bits.as_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<LabelSet, DecodeError> {
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            return Err(CodecError::BadMagic.into());
        }
        let body = &bytes[MAGIC.len()..];
        let bits = BitString::from_bytes(body, body.len() * 8)?;
        let mut c = bits.cursor();
        let tag = SchemeTag::from_code(c.read_gamma()?)?;
        let nparams = c.read_gamma()? - 1;
        let mut params = Vec::new();
        for _ in 0..nparams {
            params.push(c.read_gamma()? - 1);
        }
        let count = c.read_gamma()? - 1;
        let mut labels = Vec::new();
        for expected in 0..count {
            let pos = c.position();
            let id = c.read_gamma()? - 1;
            if id != expected {
                return Err(CodecError::Malformed { position: pos }.into());
            }
            let len = c.read_gamma()? as usize;
            labels.push(Label(c.read_bits(len)?));
        }
        Ok(LabelSet { scheme: SchemeInfo { tag, params }, labels })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Body {
    Warmup(WarmupView),
    Medium(LevelView),
    Full(FullView),
    Trivial(TrivialView),
    BoundedDegree(NearView),
    Sparse { split_k: u32, near: NearView },
    Additive(AdditiveView),
}

/// A label decoded into its logical tables, for repeated queries.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedLabel {
    pub header: Header,
    pub(crate) body: Body,
}

impl ParsedLabel {
    pub fn parse(label: &Label) -> Result<ParsedLabel, DecodeError> {
        let mut c = label.0.cursor();
        let header = Header::read(&mut c)?;
        let body = match header.scheme {
            SchemeTag::Warmup => Body::Warmup(WarmupView::read(&mut c, header.n)?),
            SchemeTag::Medium => Body::Medium(LevelView::read(&mut c)?),
            SchemeTag::Full => Body::Full(FullView::read(&mut c)?),
            SchemeTag::Trivial => Body::Trivial(TrivialView::read(&mut c, header.n)?),
            SchemeTag::BoundedDegree => Body::BoundedDegree(NearView::read(&mut c)?),
            SchemeTag::Sparse => {
                let split_k = c.read_gamma_u32()?;
                Body::Sparse { split_k, near: NearView::read(&mut c)? }
            }
            SchemeTag::Additive => Body::Additive(AdditiveView::read(&mut c, header.n)?),
        };
        if c.remaining() != 0 {
            return Err(CodecError::Malformed { position: c.position() }.into());
        }
        Ok(ParsedLabel { header, body })
    }

    pub fn id(&self) -> NodeId {
        self.header.id
    }

    pub fn scheme(&self) -> SchemeTag {
        self.header.scheme
    }

    /// Distance estimate between the two labelled nodes. Never below the true
    /// distance; `INF` when the labels certify no route.
    pub fn distance(&self, other: &ParsedLabel) -> Result<Dist, DecodeError> {
        if self.header.scheme != other.header.scheme {
            return Err(DecodeError::WrongScheme {
                expected: self.header.scheme,
                found: other.header.scheme,
            });
        }
        if self.header.n != other.header.n {
            return Err(DecodeError::Incompatible(format!(
                "graphs of {} and {} nodes",
                self.header.n, other.header.n
            )));
        }
        let (a, b) = (self.header.id, other.header.id);
        match (&self.body, &other.body) {
            (Body::Warmup(x), Body::Warmup(y)) => x.distance(y),
            (Body::Medium(x), Body::Medium(y)) => x.distance(a, y, b),
            (Body::Full(x), Body::Full(y)) => x.distance(a, y, b),
            (Body::Trivial(x), Body::Trivial(_)) => Ok(x.row[b as usize]),
            (Body::BoundedDegree(x), Body::BoundedDegree(y)) => x.distance(a, y, b),
            (Body::Sparse { split_k: k1, near: x }, Body::Sparse { split_k: k2, near: y }) => {
                if k1 != k2 {
                    return Err(DecodeError::Incompatible("split parameters differ".into()));
                }
                x.distance(a, y, b)
            }
            (Body::Additive(x), Body::Additive(y)) => x.distance(a, y, b),
            _ => unreachable!("scheme tags already compared"),
        }
    }
}

/// Decodes any pair of labels produced by the same encoding.
pub fn decode(a: &Label, b: &Label) -> Result<Dist, DecodeError> {
    ParsedLabel::parse(a)?.distance(&ParsedLabel::parse(b)?)
}

pub(crate) fn decode_as(scheme: SchemeTag, a: &Label, b: &Label) -> Result<Dist, DecodeError> {
    let pa = ParsedLabel::parse(a)?;
    if pa.scheme() != scheme {
        return Err(DecodeError::WrongScheme { expected: scheme, found: pa.scheme() });
    }
    pa.distance(&ParsedLabel::parse(b)?)
}

/// Finds `id` in a table sorted by id.
pub(crate) fn lookup(table: &[(NodeId, Dist)], id: NodeId) -> Option<Dist> {
    table.binary_search_by_key(&id, |e| e.0).ok().map(|i| table[i].1)
}

/// Minimum of `da + db` over indices present in both sorted tables.
pub(crate) fn min_shared_sum(a: &[(u32, Dist)], b: &[(u32, Dist)]) -> Dist {
    let (mut i, mut j) = (0, 0);
    let mut best = crate::graph::INF;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                best = best.min(a[i].1 + b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    best
}

/// Writes a table of `(id, dist)` pairs as an id set followed by the
/// distances in fixed width.
pub(crate) fn write_id_table(
    w: &mut BitWriter,
    table: &[(NodeId, Dist)],
    width: u32,
) -> Result<(), CodecError> {
    let ids: Vec<NodeId> = table.iter().map(|e| e.0).collect();
    w.write_id_set(&ids)?;
    for &(_, d) in table {
        w.write_fixed(d as u64, width)?;
    }
    Ok(())
}

pub(crate) fn read_id_table(
    c: &mut BitCursor<'_>,
    width: u32,
) -> Result<Vec<(NodeId, Dist)>, CodecError> {
    let ids = c.read_id_set()?;
    ids.into_iter().map(|id| Ok((id, c.read_fixed(width)? as Dist))).collect()
}

/// Writes one entry per landmark: a 0 bit when `dist > cap`, else a 1 bit and
/// the distance in `width` bits.
pub(crate) fn write_capped_table(
    w: &mut BitWriter,
    dists: impl Iterator<Item = Dist>,
    cap: Dist,
    width: u32,
) -> Result<(), CodecError> {
    for d in dists {
        if d <= cap {
            w.write_bit(true);
            w.write_fixed(d as u64, width)?;
        } else {
            w.write_bit(false);
        }
    }
    Ok(())
}

/// Reads `count` entries written by [`write_capped_table`], keeping only the
/// present ones as `(index, dist)`.
pub(crate) fn read_capped_table(
    c: &mut BitCursor<'_>,
    count: u32,
    width: u32,
) -> Result<Vec<(u32, Dist)>, CodecError> {
    let mut out = Vec::new();
    for i in 0..count {
        if c.read_bit()? {
            out.push((i, c.read_fixed(width)? as Dist));
        }
    }
    Ok(out)
}
