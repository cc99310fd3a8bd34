//! `mdsarray`: build code instances, encode/decode files, run the
//! exhaustive verification suites, print parameter tables, and drive the
//! cluster simulator.
//!
//! Exit codes: 0 pass, 1 usage, 2 property violation, 3 I/O.

use clap::{Args, Parser, Subcommand};
use mdsarray::cluster::{parse_script, Action, Cluster, ClusterError};
use mdsarray::codec::{verify_mds_report, verify_optimal_update, CodecError};
use mdsarray::codespec::{CodeSpec, SpecError};
use mdsarray::families::{check_conditions, ConditionReport};
use mdsarray::lift::{repair_ratio, ArrayCode, Family};
use mdsarray::msrbase::BuildError;
use mdsarray::repair::{verify_repair_all, RepairAllReport, RepairError};
use mdsarray::rng::SplitMix64;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mdsarray",
    about = "MDS array codes with small sub-packetization and repair degree d < n-1",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Resolve a code spec and print the instance parameters as JSON
    Build(BuildArgs),
    /// Encode a payload file into a cluster directory
    Encode(EncodeArgs),
    /// Reconstruct a payload from a cluster directory (tolerates up to r
    /// missing node files)
    Decode(DecodeArgs),
    /// Run the exhaustive verification suites
    Verify(VerifyArgs),
    /// Print parameter and repair-ratio tables
    Table(TableArgs),
    /// Execute a simulation script against a fresh cluster
    Sim(SimArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Code-spec JSON file
    #[arg(long)]
    spec: PathBuf,
    /// Override the field modulus
    #[arg(long)]
    q: Option<u64>,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    q: Option<u64>,
    /// Payload file to encode
    #[arg(long)]
    input: PathBuf,
    /// Cluster directory to create
    #[arg(long)]
    out: PathBuf,
    /// Emit a JSON summary instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DecodeArgs {
    /// Cluster directory to read
    #[arg(long)]
    dir: PathBuf,
    /// Object id to reconstruct
    #[arg(long, default_value_t = 0)]
    object: usize,
    /// Output file
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    q: Option<u64>,
    /// Exhaustive MDS verification (all r-erasure patterns, both routes)
    #[arg(long)]
    mds: bool,
    /// Exhaustive repair verification (every node x every avoid set)
    #[arg(long)]
    repair: bool,
    /// Sufficient-condition clauses for the lifted families
    #[arg(long)]
    conditions: bool,
    /// Seed for the random codewords used by the suites
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TableArgs {
    /// Families, comma-separated (C0, YB1, YB2, C1, C2, C2P, C3)
    #[arg(long, default_value = "C1")]
    family: String,
    /// Base code lengths, comma-separated
    #[arg(long, default_value = "5")]
    nbar: String,
    #[arg(long, default_value = "2")]
    w: String,
    #[arg(long, default_value = "3")]
    r: String,
    /// Replication factors, comma-separated
    #[arg(long, default_value = "2")]
    s: String,
    /// Built-in row set (`reference`) for the smallest-N instances
    #[arg(long)]
    preset: Option<String>,
    /// CSV instead of an aligned text table
    #[arg(long)]
    csv: bool,
    /// JSON rows instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    q: Option<u64>,
    /// Script file: ingest/fail/repair/read, one per line
    #[arg(long)]
    script: PathBuf,
    /// Save the final cluster state to this directory
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Base seed for generated payloads
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: bool,
}

/// Failure with its process exit code.
enum Failure {
    Usage(String),
    Violation(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Violation(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Violation(m) | Failure::Io(m) => m,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::ConditionViolated(_) => Failure::Violation(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Build(b) => b.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Self {
        match e {
            CodecError::TooLarge(_) | CodecError::ShapeMismatch(_) => Failure::Usage(e.to_string()),
            _ => Failure::Violation(e.to_string()),
        }
    }
}

impl From<RepairError> for Failure {
    fn from(e: RepairError) -> Self {
        match e {
            RepairError::InvalidAvoidSet(_)
            | RepairError::NodeOutOfRange { .. }
            | RepairError::CongruentHelper { .. }
            | RepairError::UnknownFamily(_) => Failure::Usage(e.to_string()),
            _ => Failure::Violation(e.to_string()),
        }
    }
}

impl From<ClusterError> for Failure {
    fn from(e: ClusterError) -> Self {
        match e {
            ClusterError::Io(io) => Failure::Io(io.to_string()),
            ClusterError::Format(_) | ClusterError::Meta(_) => Failure::Io(e.to_string()),
            ClusterError::Codec(c) => c.into(),
            ClusterError::Repair(r) => r.into(),
            ClusterError::Spec(s) => s.into(),
            ClusterError::NodeOutOfRange { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Violation(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    let result = match cli.cmd {
        Cmd::Build(args) => cmd_build(args),
        Cmd::Encode(args) => cmd_encode(args),
        Cmd::Decode(args) => cmd_decode(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Table(args) => cmd_table(args),
        Cmd::Sim(args) => cmd_sim(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn load_spec(path: &PathBuf, q: Option<u64>) -> Result<CodeSpec, Failure> {
    let text = std::fs::read_to_string(path)?;
    Ok(CodeSpec::from_json(&text)?.with_q(q))
}

#[derive(Serialize)]
struct BuildReport {
    family: String,
    nbar: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    w: usize,
    r: usize,
    s: usize,
    q: u64,
    c: u64,
    n: usize,
    k: usize,
    d: usize,
    dc: usize,
    #[serde(rename = "N")]
    sub: usize,
    gamma: u64,
    gamma_optimal: u64,
    ratio_num: u64,
    ratio_den: u64,
}

fn build_report(code: &ArrayCode) -> BuildReport {
    let bw = code.bandwidth();
    BuildReport {
        family: code.family().as_str().into(),
        nbar: code.nbar(),
        m: matches!(code.family(), Family::C0 | Family::C1).then(|| code.nbar() / 2),
        w: code.w(),
        r: code.r(),
        s: code.s(),
        q: code.field().q(),
        c: code.field().primitive().value(),
        n: code.n(),
        k: code.k(),
        d: code.d(),
        dc: code.dc(),
        sub: code.sub(),
        gamma: bw.gamma,
        gamma_optimal: bw.gamma_optimal,
        ratio_num: bw.ratio.num,
        ratio_den: bw.ratio.den,
    }
}

fn cmd_build(args: BuildArgs) -> Result<(), Failure> {
    let spec = load_spec(&args.spec, args.q)?;
    let code = spec.build()?;
    println!(
        "{}",
        serde_json::to_string(&build_report(&code)).expect("report serializes")
    );
    Ok(())
}

fn cmd_encode(args: EncodeArgs) -> Result<(), Failure> {
    let spec = load_spec(&args.spec, args.q)?;
    let payload = std::fs::read(&args.input)?;
    let mut cluster = Cluster::new(spec)?;
    let id = cluster.ingest(&payload)?;
    cluster.save(&args.out)?;
    if args.json {
        #[derive(Serialize)]
        struct EncodeReport<'a> {
            dir: &'a str,
            object: usize,
            bytes: usize,
            stripes: usize,
            nodes: usize,
        }
        println!(
            "{}",
            serde_json::to_string(&EncodeReport {
                dir: &args.out.display().to_string(),
                object: id,
                bytes: payload.len(),
                stripes: cluster.stripe_count(),
                nodes: cluster.code().n(),
            })
            .expect("report serializes")
        );
    } else {
        println!(
            "encoded {} bytes as object {id}: {} stripes across {} nodes in {}",
            payload.len(),
            cluster.stripe_count(),
            cluster.code().n(),
            args.out.display()
        );
    }
    Ok(())
}

fn cmd_decode(args: DecodeArgs) -> Result<(), Failure> {
    let cluster = Cluster::load(&args.dir)?;
    let down = cluster.down_nodes();
    let payload = cluster.read_object(args.object)?;
    std::fs::write(&args.out, &payload)?;
    if args.json {
        #[derive(Serialize)]
        struct DecodeReport<'a> {
            object: usize,
            bytes: usize,
            down_nodes: &'a [usize],
        }
        println!(
            "{}",
            serde_json::to_string(&DecodeReport {
                object: args.object,
                bytes: payload.len(),
                down_nodes: &down,
            })
            .expect("report serializes")
        );
    } else {
        println!(
            "decoded object {} ({} bytes) with {} node(s) missing",
            args.object,
            payload.len(),
            down.len()
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct MdsSummary {
    patterns: usize,
    determinant_failures: Vec<Vec<usize>>,
    decode_failures: Vec<Vec<usize>>,
    modes_agree: bool,
    /// Every parity-check block diagonal (minimum write amplification).
    optimal_update: bool,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    spec: CodeSpec,
    family: String,
    q: u64,
    n: usize,
    k: usize,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mds: Option<MdsSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    repair: Option<RepairAllReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conditions: Option<ConditionReport>,
    pass: bool,
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let spec = load_spec(&args.spec, args.q)?;
    let code = spec.build()?;
    let seed = args.seed.unwrap_or_else(|| spec.seed_or_default());
    let run_all = !args.mds && !args.repair && !args.conditions;
    let is_family = matches!(
        code.family(),
        Family::C1 | Family::C2 | Family::C2Prime | Family::C3
    );

    let mds = if args.mds || run_all {
        let report = verify_mds_report(&code, seed)?;
        Some(MdsSummary {
            patterns: report.patterns,
            pass: report.is_mds() && report.modes_agree(),
            modes_agree: report.modes_agree(),
            determinant_failures: report.determinant_failures,
            decode_failures: report.decode_failures,
            optimal_update: verify_optimal_update(&code),
        })
    } else {
        None
    };
    let repair = if args.repair || run_all {
        Some(verify_repair_all(&code, seed))
    } else {
        None
    };
    let conditions = if args.conditions || (run_all && is_family) {
        if !is_family {
            return Err(Failure::Usage(format!(
                "family {} has no sufficient-condition set",
                code.family()
            )));
        }
        Some(check_conditions(&code)?)
    } else {
        None
    };

    let pass = mds.as_ref().is_none_or(|m| m.pass)
        && repair.as_ref().is_none_or(|r| r.all_pass())
        && conditions.as_ref().is_none_or(|c| c.all_pass());
    let report = VerifyReport {
        family: code.family().as_str().into(),
        q: code.field().q(),
        n: code.n(),
        k: code.k(),
        seed,
        spec,
        mds,
        repair,
        conditions,
        pass,
    };
    println!(
        "{}",
        serde_json::to_string(&report).expect("report serializes")
    );
    if pass {
        Ok(())
    } else {
        Err(Failure::Violation("verification failed; see report".into()))
    }
}

#[derive(Serialize, Clone)]
struct TableRow {
    family: String,
    nbar: usize,
    w: usize,
    r: usize,
    s: usize,
    n: usize,
    k: usize,
    d: usize,
    dc: usize,
    #[serde(rename = "N")]
    sub: String,
    /// Family-specific field bound (build succeeds above it).
    q_bound: String,
    /// The generic existence bound N·C(n-1, r-1) + 1 for arbitrary lift
    /// coefficients; never used to build, shown for scale.
    generic_bound: String,
    ratio_num: u64,
    ratio_den: u64,
    ratio: String,
    dc_fraction: String,
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn table_row(
    family: Family,
    nbar: usize,
    w: usize,
    r: usize,
    s: usize,
) -> Result<TableRow, String> {
    if w < 2 || w >= r {
        return Err(format!("{family} needs 2 <= w < r, got w = {w}, r = {r}"));
    }
    let half = matches!(family, Family::C0 | Family::C1);
    if !half && r >= nbar {
        return Err(format!(
            "{family} needs r < nbar, got r = {r}, nbar = {nbar}"
        ));
    }
    if half && r > nbar - 1 {
        return Err(format!(
            "{family} needs r <= nbar - 1, got r = {r}, nbar = {nbar}"
        ));
    }
    let base_s = matches!(family, Family::C0 | Family::Yb1 | Family::Yb2);
    if base_s && s != 1 {
        return Err(format!("{family} is a base code and takes s = 1"));
    }
    let kbar = nbar - r;
    let dbar = kbar + w - 1;
    let n = s * nbar;
    let k = n - r;
    let d = n - nbar + dbar;
    let dc = s - 1;
    let m = nbar.div_ceil(2);
    let digits = if half { m } else { nbar };
    let sub = format!("{w}^{digits}");
    let q_bound = match family {
        Family::C0 | Family::C1 => {
            let step = if w == 2 { m * (w + 2) } else { m * (w + 1) };
            format!("q > {}", s * step)
        }
        Family::Yb1 => format!("q > {}", w * nbar),
        Family::Yb2 => format!("q > {nbar}"),
        Family::C2 => format!("q > {}, {w} | q-1", s.div_ceil(w) * w * nbar),
        Family::C2Prime => format!("q > {}", s.div_ceil(w) * w * nbar),
        Family::C3 => format!("q > {}", nbar.div_ceil(w) * s * w),
    };
    let sub_count = (w as u128).pow(digits as u32);
    let generic = sub_count * binomial((n - 1) as u64, (r - 1) as u64) + 1;
    let ratio = repair_ratio(d, k, dc);
    Ok(TableRow {
        family: family.as_str().into(),
        nbar,
        w,
        r,
        s,
        n,
        k,
        d,
        dc,
        sub,
        q_bound,
        generic_bound: format!("q > {generic}"),
        ratio_num: ratio.num,
        ratio_den: ratio.den,
        ratio: format!("1+{:.4}", ratio.as_f64() - 1.0),
        dc_fraction: format!("{:.1}%", 100.0 * dc as f64 / (n - 1) as f64),
    })
}

/// Built-in rows for the smallest-N family at r = 3 and r = 4.
fn reference_preset() -> Vec<(Family, usize, usize, usize, usize)> {
    vec![
        (Family::C1, 5, 2, 3, 2),
        (Family::C1, 10, 2, 3, 10),
        (Family::C1, 5, 2, 3, 20),
        (Family::C1, 6, 2, 4, 2),
        (Family::C1, 10, 2, 4, 18),
        (Family::C1, 6, 2, 4, 30),
    ]
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, Failure> {
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<T>()
                .map_err(|_| Failure::Usage(format!("invalid {what} entry {tok:?}")))
        })
        .collect()
}

fn cmd_table(args: TableArgs) -> Result<(), Failure> {
    let combos: Vec<(Family, usize, usize, usize, usize)> = match args.preset.as_deref() {
        Some("reference") => reference_preset(),
        Some(other) => return Err(Failure::Usage(format!("unknown preset {other:?}"))),
        None => {
            let families: Vec<Family> = args
                .family
                .split(',')
                .map(|tok| tok.trim().parse::<Family>().map_err(Failure::Usage))
                .collect::<Result<_, _>>()?;
            let nbars: Vec<usize> = parse_list(&args.nbar, "nbar")?;
            let ws: Vec<usize> = parse_list(&args.w, "w")?;
            let rs: Vec<usize> = parse_list(&args.r, "r")?;
            let ss: Vec<usize> = parse_list(&args.s, "s")?;
            let mut combos = Vec::new();
            for &f in &families {
                for &nbar in &nbars {
                    for &w in &ws {
                        for &r in &rs {
                            for &s in &ss {
                                combos.push((f, nbar, w, r, s));
                            }
                        }
                    }
                }
            }
            combos
        }
    };
    let mut rows = Vec::new();
    for (f, nbar, w, r, s) in combos {
        match table_row(f, nbar, w, r, s) {
            Ok(row) => rows.push(row),
            Err(msg) => eprintln!("skipping ({f}, nbar={nbar}, w={w}, r={r}, s={s}): {msg}"),
        }
    }
    if rows.is_empty() {
        return Err(Failure::Usage("no valid parameter combinations".into()));
    }
    if args.json {
        println!("{}", serde_json::to_string(&rows).expect("rows serialize"));
        return Ok(());
    }
    let header = [
        "family",
        "nbar",
        "w",
        "r",
        "s",
        "n",
        "k",
        "d",
        "dc",
        "N",
        "q bound",
        "generic bound",
        "ratio",
        "dc/(n-1)",
    ];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            vec![
                row.family.clone(),
                row.nbar.to_string(),
                row.w.to_string(),
                row.r.to_string(),
                row.s.to_string(),
                row.n.to_string(),
                row.k.to_string(),
                row.d.to_string(),
                row.dc.to_string(),
                row.sub.clone(),
                row.q_bound.clone(),
                row.generic_bound.clone(),
                format!("{} ({}/{})", row.ratio, row.ratio_num, row.ratio_den),
                row.dc_fraction.clone(),
            ]
        })
        .collect();
    if args.csv {
        println!("{}", header.join(","));
        for row in &cells {
            println!("{}", row.join(","));
        }
        return Ok(());
    }
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut line = String::new();
    for (i, h) in header.iter().enumerate() {
        let _ = write!(line, "{:<width$}  ", h, width = widths[i]);
    }
    println!("{}", line.trim_end());
    for row in &cells {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            let _ = write!(line, "{:<width$}  ", cell, width = widths[i]);
        }
        println!("{}", line.trim_end());
    }
    Ok(())
}

/// Largest payload a sim script may generate per ingest.
const MAX_SIM_INGEST: usize = 64 << 20;

#[derive(Serialize)]
#[serde(tag = "step")]
enum StepReport {
    #[serde(rename = "ingest")]
    Ingest {
        object: usize,
        bytes: usize,
        stripes: usize,
    },
    #[serde(rename = "fail")]
    Fail { node: usize },
    #[serde(rename = "repair")]
    Repair {
        node: usize,
        repaired: bool,
        stripes: usize,
        downloaded_symbols: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        per_stripe: Option<mdsarray::repair::RepairReport>,
    },
    #[serde(rename = "read")]
    Read {
        object: usize,
        bytes: usize,
        intact: bool,
    },
}

#[derive(Serialize)]
struct SimReport {
    steps: Vec<StepReport>,
    ledger_transfers: usize,
    ledger_total_symbols: u64,
}

fn cmd_sim(args: SimArgs) -> Result<(), Failure> {
    let spec = load_spec(&args.spec, args.q)?;
    let script_text = std::fs::read_to_string(&args.script)?;
    let actions = parse_script(&script_text).map_err(|e| Failure::Usage(e.to_string()))?;
    let base_seed = args.seed.unwrap_or_else(|| spec.seed_or_default());
    let mut cluster = Cluster::new(spec)?;
    // remembered payloads so reads can attest bit-exactness
    let mut payloads: Vec<Vec<u8>> = Vec::new();
    let mut steps = Vec::new();
    for action in actions {
        let report = match action {
            Action::Ingest { bytes, seed } => {
                if bytes > MAX_SIM_INGEST {
                    return Err(Failure::Usage(format!(
                        "ingest of {bytes} bytes exceeds the {MAX_SIM_INGEST}-byte simulator cap"
                    )));
                }
                let payload = SplitMix64::new(base_seed ^ seed).bytes(bytes);
                let before = cluster.stripe_count();
                let object = cluster.ingest(&payload)?;
                payloads.push(payload);
                StepReport::Ingest {
                    object,
                    bytes,
                    stripes: cluster.stripe_count() - before,
                }
            }
            Action::Fail { node } => {
                cluster.fail_node(node)?;
                StepReport::Fail { node }
            }
            Action::Repair { node, avoid } => {
                let report = cluster.repair_node(node, avoid.as_deref())?;
                StepReport::Repair {
                    node,
                    repaired: report.repaired,
                    stripes: report.stripes,
                    downloaded_symbols: report.downloaded_symbols,
                    per_stripe: report.per_stripe,
                }
            }
            Action::Read { object } => {
                let bytes = cluster.read_object(object)?;
                let intact = payloads.get(object).is_some_and(|p| *p == bytes);
                StepReport::Read {
                    object,
                    bytes: bytes.len(),
                    intact,
                }
            }
        };
        if !args.json {
            println!(
                "{}",
                serde_json::to_string(&report).expect("step serializes")
            );
        }
        steps.push(report);
    }
    if let Some(dir) = &args.dir {
        cluster.save(dir)?;
    }
    let summary = SimReport {
        ledger_transfers: cluster.ledger().len(),
        ledger_total_symbols: cluster.ledger_total(),
        steps,
    };
    if args.json {
        println!(
            "{}",
            serde_json::to_string(&summary).expect("report serializes")
        );
    } else {
        println!(
            "ledger: {} transfers, {} symbols",
            summary.ledger_transfers, summary.ledger_total_symbols
        );
    }
    // a read that does not match its ingest is a data-loss event
    let lost = summary
        .steps
        .iter()
        .any(|s| matches!(s, StepReport::Read { intact: false, .. }));
    if lost {
        return Err(Failure::Violation("a read returned corrupted data".into()));
    }
    Ok(())
}
