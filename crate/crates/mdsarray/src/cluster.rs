//! In-memory, disk-backed storage-cluster simulator: stripe user data across
//! n nodes under a chosen code, inject node failures, repair through the
//! repair engine, and meter every symbol transferred.
//!
//! Payload bytes map to field symbols by little-endian grouping of
//! `⌊log2 q⌋` bits, so each stripe carries `⌊kN·b/8⌋` whole bytes and the
//! recorded per-stripe byte length makes the packing lossless.
//!
//! On-disk layout: one directory per cluster holding `meta.json` (code
//! parameters plus the stripe map) and one `node_<i>.bin` per healthy node
//! (magic `MDSA`, version 0x01, q as u64 LE, N as u32 LE, symbol count as
//! u32 LE, then one u32 LE per symbol).

use crate::codec::{decode_erasures, is_codeword, Codeword, PreparedEncoder};
use crate::codespec::{CodeSpec, SpecError};
use crate::gf::MAX_FIELD;
use crate::lift::{ArrayCode, Family};
use crate::repair::{plan_repair, prepare, RepairError, RepairReport};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("node {0} is down")]
    NodeDown(usize),
    #[error("node {0} is already down")]
    AlreadyDown(usize),
    #[error("{0} nodes are down; the repair engine handles one failure at a time")]
    TwoFailures(usize),
    #[error("node {node} out of range (n = {n})")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("unknown object {0}")]
    UnknownObject(usize),
    #[error(transparent)]
    Codec(#[from] crate::codec::CodecError),
    #[error(transparent)]
    Repair(#[from] RepairError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
    #[error("metadata mismatch: {0}")]
    Meta(String),
}

/// Bits carried per field symbol: ⌊log2 q⌋.
pub fn bits_per_symbol(q: u64) -> u32 {
    63 - q.leading_zeros()
}

/// Pack bytes into `nsyms` symbols of `bits` bits each, little-endian within
/// the byte stream; missing trailing bits read as zero.
pub fn pack_chunk(bytes: &[u8], bits: u32, nsyms: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(nsyms);
    let mut pos = 0usize;
    for _ in 0..nsyms {
        let mut v = 0u64;
        for k in 0..bits as usize {
            let idx = pos + k;
            let byte = idx / 8;
            if byte < bytes.len() && (bytes[byte] >> (idx % 8)) & 1 == 1 {
                v |= 1 << k;
            }
        }
        out.push(v);
        pos += bits as usize;
    }
    out
}

/// Inverse of [`pack_chunk`], truncated to the recorded byte length.
pub fn unpack_chunk(symbols: &[u64], bits: u32, len_bytes: usize) -> Vec<u8> {
    let mut out = vec![0u8; len_bytes];
    for (s, &v) in symbols.iter().enumerate() {
        for k in 0..bits as usize {
            if (v >> k) & 1 == 1 {
                let idx = s * bits as usize + k;
                let byte = idx / 8;
                if byte < len_bytes {
                    out[byte] |= 1 << (idx % 8);
                }
            }
        }
    }
    out
}

const NODE_MAGIC: &[u8; 4] = b"MDSA";
const NODE_VERSION: u8 = 0x01;

/// Parsed contents of a `node_<i>.bin` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeFile {
    pub q: u64,
    pub sub: u32,
    pub symbols: Vec<u64>,
}

/// Serialize a node's symbol stream.
pub fn encode_node_file(q: u64, sub: u32, symbols: &[u64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(21 + symbols.len() * 4);
    out.extend_from_slice(NODE_MAGIC);
    out.push(NODE_VERSION);
    out.extend_from_slice(&q.to_le_bytes());
    out.extend_from_slice(&sub.to_le_bytes());
    out.extend_from_slice(&(symbols.len() as u32).to_le_bytes());
    for &s in symbols {
        out.extend_from_slice(&(s as u32).to_le_bytes());
    }
    out
}

/// Parse and validate a node file from untrusted bytes.
pub fn parse_node_file(bytes: &[u8]) -> Result<NodeFile, ClusterError> {
    if bytes.len() < 21 {
        return Err(ClusterError::Format(
            "node file shorter than its header".into(),
        ));
    }
    if &bytes[0..4] != NODE_MAGIC {
        return Err(ClusterError::Format("bad magic, expected MDSA".into()));
    }
    if bytes[4] != NODE_VERSION {
        return Err(ClusterError::Format(format!(
            "unsupported version {}",
            bytes[4]
        )));
    }
    let q = u64::from_le_bytes(bytes[5..13].try_into().expect("8 bytes"));
    if !(3..=MAX_FIELD).contains(&q) {
        return Err(ClusterError::Format(format!("modulus {q} out of range")));
    }
    let sub = u32::from_le_bytes(bytes[13..17].try_into().expect("4 bytes"));
    let count = u32::from_le_bytes(bytes[17..21].try_into().expect("4 bytes")) as usize;
    if sub == 0 || sub > 1 << 16 {
        return Err(ClusterError::Format(format!(
            "sub-packetization {sub} out of range"
        )));
    }
    let body = &bytes[21..];
    if body.len() != count * 4 {
        return Err(ClusterError::Format(format!(
            "expected {count} symbols ({} bytes), found {} bytes",
            count * 4,
            body.len()
        )));
    }
    if !count.is_multiple_of(sub as usize) {
        return Err(ClusterError::Format(format!(
            "symbol count {count} is not a multiple of N = {sub}"
        )));
    }
    let mut symbols = Vec::with_capacity(count);
    for c in body.chunks_exact(4) {
        let v = u32::from_le_bytes(c.try_into().expect("4 bytes")) as u64;
        if v >= q {
            return Err(ClusterError::Format(format!("symbol {v} outside GF({q})")));
        }
        symbols.push(v);
    }
    Ok(NodeFile { q, sub, symbols })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct StripeEntry {
    /// Object this stripe belongs to.
    pub id: usize,
    /// Payload bytes carried by this stripe.
    pub len_bytes: usize,
}

/// `meta.json` schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterMeta {
    pub family: Family,
    pub nbar: usize,
    pub w: usize,
    pub r: usize,
    pub s: usize,
    pub q: u64,
    pub c: u64,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub dc: usize,
    #[serde(rename = "N")]
    pub sub: usize,
    pub stripes: Vec<StripeEntry>,
}

#[derive(Debug)]
struct Node {
    up: bool,
    /// One column of N symbols per stripe.
    columns: Vec<Vec<u64>>,
}

/// One metered transfer: `symbols` moved from a helper to a repaired node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Transfer {
    pub from: usize,
    pub to: usize,
    pub symbols: u64,
}

/// Outcome of a cluster-level repair.
#[derive(Debug, Clone, Serialize)]
pub struct ClusterRepairReport {
    pub failed: usize,
    /// False when the node was healthy and nothing had to be done.
    pub repaired: bool,
    pub stripes: usize,
    /// Total symbols downloaded across stripes.
    pub downloaded_symbols: u64,
    /// Engine report for a single stripe (identical across stripes).
    pub per_stripe: Option<RepairReport>,
}

/// A simulated storage cluster.
#[derive(Debug)]
pub struct Cluster {
    spec: CodeSpec,
    code: ArrayCode,
    nodes: Vec<Node>,
    stripes: Vec<StripeEntry>,
    objects: usize,
    ledger: Vec<Transfer>,
}

impl Cluster {
    pub fn new(spec: CodeSpec) -> Result<Self, ClusterError> {
        let code = spec.build()?;
        let nodes = (0..code.n())
            .map(|_| Node {
                up: true,
                columns: Vec::new(),
            })
            .collect();
        Ok(Cluster {
            spec,
            code,
            nodes,
            stripes: Vec::new(),
            objects: 0,
            ledger: Vec::new(),
        })
    }

    pub fn code(&self) -> &ArrayCode {
        &self.code
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn stripe_count(&self) -> usize {
        self.stripes.len()
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn is_node_up(&self, i: usize) -> bool {
        self.nodes[i].up
    }

    pub fn down_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| !self.nodes[i].up)
            .collect()
    }

    pub fn ledger(&self) -> &[Transfer] {
        &self.ledger
    }

    pub fn ledger_total(&self) -> u64 {
        self.ledger.iter().map(|t| t.symbols).sum()
    }

    /// Whole bytes carried per stripe.
    pub fn stripe_capacity(&self) -> usize {
        let bits = bits_per_symbol(self.code.field().q()) as usize;
        self.code.k() * self.code.sub() * bits / 8
    }

    /// Chunk, encode, and place a payload; returns the new object id.
    pub fn ingest(&mut self, payload: &[u8]) -> Result<usize, ClusterError> {
        if let Some(&down) = self.down_nodes().first() {
            return Err(ClusterError::NodeDown(down));
        }
        let id = self.objects;
        let bits = bits_per_symbol(self.code.field().q());
        let capacity = self.stripe_capacity();
        assert!(capacity > 0, "stripe capacity must be positive");
        let n_sub = self.code.sub();
        let parity: Vec<usize> = (self.code.k()..self.code.n()).collect();
        let encoder = PreparedEncoder::new(&self.code, &parity)?;
        for chunk in payload.chunks(capacity) {
            let symbols = pack_chunk(chunk, bits, self.code.k() * n_sub);
            let data: Vec<Vec<u64>> = symbols.chunks(n_sub).map(|c| c.to_vec()).collect();
            let cw = encoder.encode(&self.code, &data)?;
            for (i, node) in self.nodes.iter_mut().enumerate() {
                node.columns.push(cw.column(i).to_vec());
            }
            self.stripes.push(StripeEntry {
                id,
                len_bytes: chunk.len(),
            });
        }
        self.objects += 1;
        Ok(id)
    }

    /// Mark a node failed and drop its contents.
    pub fn fail_node(&mut self, i: usize) -> Result<(), ClusterError> {
        let n = self.nodes.len();
        let node = self
            .nodes
            .get_mut(i)
            .ok_or(ClusterError::NodeOutOfRange { node: i, n })?;
        if !node.up {
            return Err(ClusterError::AlreadyDown(i));
        }
        node.up = false;
        node.columns.clear();
        Ok(())
    }

    /// Regenerate a failed node through the repair engine, stripe by stripe.
    /// Healthy target: no-op report. More than one node down: refused.
    pub fn repair_node(
        &mut self,
        i: usize,
        avoid: Option<&[usize]>,
    ) -> Result<ClusterRepairReport, ClusterError> {
        let n = self.nodes.len();
        if i >= n {
            return Err(ClusterError::NodeOutOfRange { node: i, n });
        }
        if self.nodes[i].up {
            return Ok(ClusterRepairReport {
                failed: i,
                repaired: false,
                stripes: 0,
                downloaded_symbols: 0,
                per_stripe: None,
            });
        }
        let down = self.down_nodes();
        if down.len() > 1 {
            return Err(ClusterError::TwoFailures(down.len()));
        }
        let plan = plan_repair(&self.code, i, avoid)?;
        let solver = prepare(&self.code, &plan)?;
        let stripe_total = self.stripes.len();
        let mut columns = Vec::with_capacity(stripe_total);
        let mut sample_report = None;
        let mut downloaded_total = 0u64;
        for stripe in 0..stripe_total {
            let (column, report) = solver.regenerate(|j| self.nodes[j].columns[stripe].clone())?;
            downloaded_total += report.downloaded_symbols;
            columns.push(column);
            if sample_report.is_none() {
                sample_report = Some(report);
            }
        }
        // Refuse to store garbage: each restored stripe must satisfy every
        // parity-check group again.
        for (stripe, column) in columns.iter().enumerate() {
            let cols: Vec<Vec<u64>> = (0..n)
                .map(|j| {
                    if j == i {
                        column.clone()
                    } else {
                        self.nodes[j].columns[stripe].clone()
                    }
                })
                .collect();
            if !is_codeword(&self.code, &Codeword::new(self.code.field().q(), cols)) {
                return Err(ClusterError::Repair(RepairError::SingularSystem));
            }
        }
        if let Some(rep) = &sample_report {
            for h in &rep.per_helper {
                self.ledger.push(Transfer {
                    from: h.node,
                    to: i,
                    symbols: h.downloaded * stripe_total as u64,
                });
            }
        }
        self.nodes[i].up = true;
        self.nodes[i].columns = columns;
        Ok(ClusterRepairReport {
            failed: i,
            repaired: true,
            stripes: stripe_total,
            downloaded_symbols: downloaded_total,
            per_stripe: sample_report,
        })
    }

    /// Read an object back, byte-exact, decoding around up to r failures.
    pub fn read_object(&self, id: usize) -> Result<Vec<u8>, ClusterError> {
        if id >= self.objects {
            return Err(ClusterError::UnknownObject(id));
        }
        let down = self.down_nodes();
        if down.len() > self.code.r() {
            return Err(ClusterError::Codec(
                crate::codec::CodecError::TooManyErasures {
                    erased: down.len(),
                    r: self.code.r(),
                },
            ));
        }
        let bits = bits_per_symbol(self.code.field().q());
        let mut out = Vec::new();
        for (stripe, entry) in self.stripes.iter().enumerate() {
            if entry.id != id {
                continue;
            }
            let data_cols: Vec<Vec<u64>> = if down.is_empty() {
                (0..self.code.k())
                    .map(|j| self.nodes[j].columns[stripe].clone())
                    .collect()
            } else {
                let partial: Vec<Option<Vec<u64>>> = (0..self.code.n())
                    .map(|j| {
                        if self.nodes[j].up {
                            Some(self.nodes[j].columns[stripe].clone())
                        } else {
                            None
                        }
                    })
                    .collect();
                let cw = decode_erasures(&self.code, &partial)?;
                (0..self.code.k()).map(|j| cw.column(j).to_vec()).collect()
            };
            let symbols: Vec<u64> = data_cols.into_iter().flatten().collect();
            out.extend(unpack_chunk(&symbols, bits, entry.len_bytes));
        }
        Ok(out)
    }

    /// Intact-stripe invariant: every stripe with all nodes up satisfies all
    /// parity-check groups.
    pub fn verify_stripes(&self) -> Result<(), ClusterError> {
        if !self.down_nodes().is_empty() {
            return Ok(());
        }
        let q = self.code.field().q();
        for stripe in 0..self.stripes.len() {
            let cols: Vec<Vec<u64>> = (0..self.code.n())
                .map(|j| self.nodes[j].columns[stripe].clone())
                .collect();
            if !is_codeword(&self.code, &Codeword::new(q, cols)) {
                return Err(ClusterError::Meta(format!(
                    "stripe {stripe} violates parity"
                )));
            }
        }
        Ok(())
    }

    fn meta(&self) -> ClusterMeta {
        ClusterMeta {
            family: self.code.family(),
            nbar: self.code.nbar(),
            w: self.code.w(),
            r: self.code.r(),
            s: self.code.s(),
            q: self.code.field().q(),
            c: self.code.field().primitive().value(),
            n: self.code.n(),
            k: self.code.k(),
            d: self.code.d(),
            dc: self.code.dc(),
            sub: self.code.sub(),
            stripes: self.stripes.clone(),
        }
    }

    /// Persist to a directory: `meta.json` plus one `node_<i>.bin` per
    /// healthy node (down nodes simply have no file).
    pub fn save(&self, dir: &Path) -> Result<(), ClusterError> {
        fs::create_dir_all(dir)?;
        let meta = serde_json::to_string_pretty(&self.meta())
            .map_err(|e| ClusterError::Format(e.to_string()))?;
        fs::write(dir.join("meta.json"), meta)?;
        let q = self.code.field().q();
        for (i, node) in self.nodes.iter().enumerate() {
            let path = dir.join(format!("node_{i}.bin"));
            if node.up {
                let symbols: Vec<u64> = node.columns.iter().flatten().copied().collect();
                fs::write(path, encode_node_file(q, self.code.sub() as u32, &symbols))?;
            } else if path.exists() {
                fs::remove_file(path)?;
            }
        }
        Ok(())
    }

    /// Load a cluster directory; missing node files come back as failed
    /// nodes.
    pub fn load(dir: &Path) -> Result<Self, ClusterError> {
        let meta_text = fs::read_to_string(dir.join("meta.json"))?;
        let meta: ClusterMeta =
            serde_json::from_str(&meta_text).map_err(|e| ClusterError::Format(e.to_string()))?;
        let spec = spec_from_meta(&meta)?;
        let code = spec.build()?;
        let checks = [
            ("n", code.n(), meta.n),
            ("k", code.k(), meta.k),
            ("d", code.d(), meta.d),
            ("dc", code.dc(), meta.dc),
            ("N", code.sub(), meta.sub),
        ];
        for (name, built, stored) in checks {
            if built != stored {
                return Err(ClusterError::Meta(format!(
                    "{name}: rebuilt code has {built}, meta says {stored}"
                )));
            }
        }
        if code.field().primitive().value() != meta.c {
            return Err(ClusterError::Meta(format!(
                "primitive element: rebuilt {} vs stored {}",
                code.field().primitive().value(),
                meta.c
            )));
        }
        let n_sub = code.sub();
        let expected = meta.stripes.len() * n_sub;
        let mut nodes = Vec::with_capacity(code.n());
        for i in 0..code.n() {
            let path = dir.join(format!("node_{i}.bin"));
            if !path.exists() {
                nodes.push(Node {
                    up: false,
                    columns: Vec::new(),
                });
                continue;
            }
            let file = parse_node_file(&fs::read(&path)?)?;
            if file.q != meta.q || file.sub as usize != n_sub {
                return Err(ClusterError::Meta(format!(
                    "node {i}: file declares q = {}, N = {}, cluster has q = {}, N = {n_sub}",
                    file.q, file.sub, meta.q
                )));
            }
            if file.symbols.len() != expected {
                return Err(ClusterError::Meta(format!(
                    "node {i}: {} symbols on disk, stripe map implies {expected}",
                    file.symbols.len()
                )));
            }
            nodes.push(Node {
                up: true,
                columns: file.symbols.chunks(n_sub).map(|c| c.to_vec()).collect(),
            });
        }
        let objects = meta.stripes.iter().map(|s| s.id + 1).max().unwrap_or(0);
        Ok(Cluster {
            spec,
            code,
            nodes,
            stripes: meta.stripes,
            objects,
            ledger: Vec::new(),
        })
    }
}

/// Reconstruct the code spec a `meta.json` describes.
pub fn spec_from_meta(meta: &ClusterMeta) -> Result<CodeSpec, ClusterError> {
    let half = matches!(meta.family, Family::C0 | Family::C1);
    if half && !meta.nbar.is_multiple_of(2) {
        return Err(ClusterError::Meta(format!(
            "family {} needs even nbar, got {}",
            meta.family, meta.nbar
        )));
    }
    Ok(CodeSpec {
        family: meta.family,
        nbar: if half { None } else { Some(meta.nbar) },
        m: if half { Some(meta.nbar / 2) } else { None },
        w: meta.w,
        r: meta.r,
        s: Some(meta.s),
        q: Some(meta.q),
        seed: None,
    })
}

/// One step of a simulation script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    /// Ingest `bytes` of seeded random payload.
    Ingest {
        bytes: usize,
        seed: u64,
    },
    Fail {
        node: usize,
    },
    Repair {
        node: usize,
        avoid: Option<Vec<usize>>,
    },
    Read {
        object: usize,
    },
}

/// Parse a simulation script: one action per line, `#` comments and blank
/// lines ignored.
///
/// ```text
/// ingest 4096 7
/// fail 3
/// repair 3 avoid=0
/// read 0
/// ```
pub fn parse_script(text: &str) -> Result<Vec<Action>, ClusterError> {
    let mut actions = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let verb = tokens.next().expect("non-empty line has a token");
        let bad = |msg: String| ClusterError::Format(format!("line {}: {msg}", lineno + 1));
        let parse_usize = |tok: Option<&str>, what: &str| -> Result<usize, ClusterError> {
            tok.ok_or_else(|| bad(format!("missing {what}")))?
                .parse::<usize>()
                .map_err(|_| bad(format!("invalid {what}")))
        };
        let action = match verb {
            "ingest" => {
                let bytes = parse_usize(tokens.next(), "byte count")?;
                let seed = match tokens.next() {
                    None => 0,
                    Some(t) => t.parse::<u64>().map_err(|_| bad("invalid seed".into()))?,
                };
                Action::Ingest { bytes, seed }
            }
            "fail" => Action::Fail {
                node: parse_usize(tokens.next(), "node index")?,
            },
            "repair" => {
                let node = parse_usize(tokens.next(), "node index")?;
                let avoid = match tokens.next() {
                    None => None,
                    Some(t) => {
                        let rest = t
                            .strip_prefix("avoid=")
                            .ok_or_else(|| bad(format!("unexpected token {t:?}")))?;
                        let mut set = Vec::new();
                        for part in rest.split(',') {
                            set.push(
                                part.parse::<usize>()
                                    .map_err(|_| bad(format!("invalid avoid entry {part:?}")))?,
                            );
                        }
                        Some(set)
                    }
                };
                Action::Repair { node, avoid }
            }
            "read" => Action::Read {
                object: parse_usize(tokens.next(), "object id")?,
            },
            other => return Err(bad(format!("unknown action {other:?}"))),
        };
        if tokens.next().is_some() {
            return Err(bad("trailing tokens".into()));
        }
        actions.push(action);
    }
    Ok(actions)
}
