//! Command-line front end over bundle files.

use std::fs::File;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::data::{validate_bundle, Bundle, BundleDoc, DataError};
use crate::duality::{BarClass, BarDuality, DualityError};
use crate::orbits::{normalize_label, Orbit, OrbitError, Side};
use crate::packets::{PacketError, Packets};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Group,
    Dual,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Group => Side::Group,
            SideArg::Dual => Side::Dual,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nilduality",
    version,
    about = "Nilpotent orbit dualities, wavefront sets and Arthur packets from group bundles"
)]
pub struct Cli {
    /// Group bundle (JSON).
    #[arg(long, global = true)]
    pub bundle: Option<PathBuf>,
    /// Bundle of the dual group, for bundles that are not self-dual.
    #[arg(long, global = true)]
    pub dual_bundle: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Group in which orbit arguments of dual, achar-dual, closure and special-piece live.
    #[arg(long, global = true, value_enum, default_value = "group")]
    pub side: SideArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// BVLS dual d(ORBIT).
    Dual { orbit: String },
    /// Achar dual D((ORBIT, CLASS)).
    AcharDual { orbit: String, class: String },
    /// Whether A lies in the closure of B.
    Closure { a: String, b: String },
    /// Special piece containing ORBIT.
    SpecialPiece { orbit: String },
    /// Canonical unramified and geometric wavefront sets of a parameter.
    Cuwf { param: String },
    /// Basic Arthur packet attached to a dual-group orbit.
    Packet { ic_orbit: String },
    /// Weak Arthur packet attached to a dual-group orbit.
    WeakPacket { ic_orbit: String },
    /// Run every bundle invariant and the Jiang check.
    Verify,
    /// List orbits, classes and parameters.
    List,
}

/// Exit status and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, msg: impl Into<String>) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: msg.into(),
        }
    }
}

enum Failure {
    Domain(String),
    Data(String),
    /// Validation report to print alongside a failing exit status.
    Report(String, String),
}

impl From<OrbitError> for Failure {
    fn from(e: OrbitError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<DualityError> for Failure {
    fn from(e: DualityError) -> Self {
        match e {
            DualityError::UnknownClass { .. } | DualityError::Orbit(_) => Failure::Domain(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

impl From<PacketError> for Failure {
    fn from(e: PacketError) -> Self {
        match e {
            PacketError::UnknownParameter(_) | PacketError::Orbit(_) => Failure::Domain(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

impl From<DataError> for Failure {
    fn from(e: DataError) -> Self {
        Failure::Data(e.to_string())
    }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text)
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(out) => Outcome::ok(out),
        Err(Failure::Report(out, m)) => Outcome {
            code: 2,
            stdout: out,
            stderr: format!("error: {m}\n"),
        },
        Err(Failure::Domain(m)) => Outcome::fail(1, format!("error: {m}\n")),
        Err(Failure::Data(m)) => Outcome::fail(2, format!("error: {m}\n")),
    }
}

fn read_doc(path: &PathBuf) -> Result<BundleDoc, Failure> {
    let file = File::open(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    BundleDoc::from_reader(file).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn read_docs(cli: &Cli) -> Result<(BundleDoc, Option<BundleDoc>), Failure> {
    let path = cli
        .bundle
        .as_ref()
        .ok_or_else(|| Failure::Data("--bundle PATH is required".into()))?;
    let doc = read_doc(path)?;
    let dual = cli.dual_bundle.as_ref().map(read_doc).transpose()?;
    Ok((doc, dual))
}

fn render(cli: &Cli, text: String, value: Value) -> String {
    match cli.format {
        Format::Text => text,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
            s.push('\n');
            s
        }
    }
}

fn class_json(d: &BarDuality, x: &BarClass) -> Value {
    json!({ "orbit": d.pair().label(x.orbit), "class": x.class })
}

fn labels(d: &BarDuality, v: &[Orbit]) -> Vec<String> {
    v.iter().map(|&o| d.pair().label(o).to_string()).collect()
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let (doc, dual_doc) = read_docs(cli)?;
    if let Command::Verify = cli.command {
        let report = validate_bundle(&doc, dual_doc.as_ref());
        let text = format!("{report}\n");
        let out = render(cli, text, serde_json::to_value(&report).expect("report serializes"));
        return if report.passed {
            Ok(out)
        } else {
            Err(Failure::Report(
                out,
                format!("validation failed: {}", report.failed_names().join(", ")),
            ))
        };
    }
    let bundle = Bundle::from_docs(doc, dual_doc)?;
    let d = bundle.duality();
    let pair = d.pair();
    let side: Side = cli.side.into();
    match &cli.command {
        Command::Verify => unreachable!("handled above"),
        Command::Dual { orbit } => {
            let o = pair.find(side, &normalize_label(orbit))?;
            let img = pair.bvls_dual(o);
            Ok(render(
                cli,
                format!("{}\n", pair.label(img)),
                json!({ "orbit": pair.label(o), "side": side, "dual": pair.label(img) }),
            ))
        }
        Command::AcharDual { orbit, class } => {
            let x = d.bar_class(side, &normalize_label(orbit), class)?;
            let y = d.achar_dual(&x)?;
            Ok(render(
                cli,
                format!("{}\n", d.display(&y)),
                json!({ "input": class_json(d, &x), "side": side, "dual": class_json(d, &y) }),
            ))
        }
        Command::Closure { a, b } => {
            let oa = pair.find(side, &normalize_label(a))?;
            let ob = pair.find(side, &normalize_label(b))?;
            let leq = pair.closure_leq(oa, ob)?;
            Ok(render(
                cli,
                format!("{leq}\n"),
                json!({ "a": pair.label(oa), "b": pair.label(ob), "leq": leq }),
            ))
        }
        Command::SpecialPiece { orbit } => {
            let o = pair.find(side, &normalize_label(orbit))?;
            let top = pair.special_closure(o)?;
            let piece = labels(d, &pair.special_piece_of(o)?);
            Ok(render(
                cli,
                format!("special closure: {}\npiece: {}\n", pair.label(top), piece.join(" ")),
                json!({ "orbit": pair.label(o), "special_closure": pair.label(top), "piece": piece }),
            ))
        }
        Command::Cuwf { param } => {
            let (set, x) = bundle
                .parameter(param.trim())
                .ok_or_else(|| Failure::Domain(format!("unknown parameter {param:?}")))?;
            let packets = Packets::new(d, set);
            let c = packets.cuwf(x)?;
            let wf = packets.geometric_wf(x)?;
            Ok(render(
                cli,
                format!("CUWF: {}\ngeometric WF: {}\n", d.display(&c), pair.label(wf)),
                json!({ "id": x.id, "cuwf": class_json(d, &c), "geometric_wf": pair.label(wf) }),
            ))
        }
        Command::Packet { ic_orbit } => {
            let ic = pair.find(Side::Dual, &normalize_label(ic_orbit))?;
            let set = bundle
                .parameter_set(ic)
                .ok_or_else(|| Failure::Domain(format!("no parameter set for {ic_orbit}")))?;
            let packets = Packets::new(d, set);
            let bound = packets.cuwf_bound()?;
            let mut text = format!("bound D({},1) = {}\n", pair.label(ic), d.display(&bound));
            let mut members = Vec::new();
            for x in packets.arthur_packet()? {
                let c = packets.cuwf(x)?;
                text.push_str(&format!("{} {}\n", x.id, d.display(&c)));
                members.push(json!({ "id": x.id, "cuwf": class_json(d, &c) }));
            }
            Ok(render(
                cli,
                text,
                json!({ "ic_orbit": pair.label(ic), "bound": class_json(d, &bound), "members": members }),
            ))
        }
        Command::WeakPacket { ic_orbit } => {
            let ic = pair.find(Side::Dual, &normalize_label(ic_orbit))?;
            let set = bundle
                .parameter_set(ic)
                .ok_or_else(|| Failure::Domain(format!("no parameter set for {ic_orbit}")))?;
            let packets = Packets::new(d, set);
            let bound = pair.bvls_dual(ic);
            let piece = labels(d, &packets.special_piece()?);
            let mut text = format!(
                "bound d({}) = {}\nspecial piece: {}\n",
                pair.label(ic),
                pair.label(bound),
                piece.join(" ")
            );
            let mut members = Vec::new();
            for x in packets.weak_packet()? {
                let wf = packets.geometric_wf(x)?;
                let partner = packets.az_dual(x)?;
                text.push_str(&format!(
                    "{} WF={} AZ={} n={}\n",
                    x.id,
                    pair.label(wf),
                    partner.id,
                    pair.label(partner.n_orbit)
                ));
                members.push(json!({
                    "id": x.id,
                    "geometric_wf": pair.label(wf),
                    "az_partner": partner.id,
                    "az_n_orbit": pair.label(partner.n_orbit),
                }));
            }
            Ok(render(
                cli,
                text,
                json!({
                    "ic_orbit": pair.label(ic),
                    "bound": pair.label(bound),
                    "special_piece": piece,
                    "members": members,
                }),
            ))
        }
        Command::List => Ok(list(cli, &bundle)),
    }
}

fn list(cli: &Cli, bundle: &Bundle) -> String {
    let d = bundle.duality();
    let pair = d.pair();
    let mut text = String::new();
    let mut sides = Vec::new();
    let self_dual = bundle.dual_doc().is_none();
    let shown: &[Side] = if self_dual { &[Side::Group] } else { &[Side::Group, Side::Dual] };
    for &side in shown {
        let poset = pair.poset(side);
        text.push_str(&format!("orbits of {}:\n", poset.name()));
        let mut orbits = Vec::new();
        for o in pair.orbits(side) {
            let r = pair.record(o);
            let classes = d.classes_of(o);
            let special = pair.is_special(o);
            text.push_str(&format!(
                "  {}{}{} classes: {}\n",
                r.label,
                r.dim.map(|x| format!(" dim={x}")).unwrap_or_default(),
                if special { " special" } else { "" },
                classes.join(" ")
            ));
            orbits.push(json!({
                "label": r.label,
                "dim": r.dim,
                "special": special,
                "classes": classes,
            }));
        }
        sides.push(json!({ "group": poset.name(), "orbits": orbits }));
    }
    let mut params = Vec::new();
    for set in bundle.parameter_sets() {
        text.push_str(&format!("parameters at {}:\n", pair.label(set.ic_orbit())));
        for x in set.params() {
            text.push_str(&format!(
                "  {} n={} rho={} AZ={}\n",
                x.id,
                pair.label(x.n_orbit),
                x.rho,
                x.az_partner
            ));
            params.push(json!({
                "id": x.id,
                "ic_orbit": pair.label(x.ic_orbit),
                "n_orbit": pair.label(x.n_orbit),
                "rho": x.rho,
                "iwahori": x.iwahori,
                "unitary": x.unitary,
                "az_partner": x.az_partner,
            }));
        }
    }
    render(cli, text, json!({ "groups": sides, "parameters": params }))
}
