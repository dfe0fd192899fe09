//! Group bundle format, loader and validator.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::duality::{normalize_class, BarClass, BarDuality, SideTables, TRIVIAL_CLASS};
use crate::orbits::{transitive_closure, DualPair, Orbit, OrbitPoset, OrbitRecord, Side};
use crate::packets::{natural_cmp, Parameter, ParameterSet, Packets};
use crate::rootdata::{Coweight, RootSystem};

pub const FORMAT_VERSION: u32 = 1;

/// The F4 bundle shipped with the crate.
pub const SHIPPED_F4_JSON: &str = include_str!("../data/f4.json");

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read bundle: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed bundle document: {0}")]
    Parse(String),
    #[error("bundle does not match the schema: {0}")]
    Schema(String),
    #[error("bundle failed validation: {}", .failed.join(", "))]
    Validation {
        failed: Vec<String>,
        report: Box<ValidationReport>,
    },
    #[error("bundle for {0} is not self-dual and no dual bundle was given")]
    MissingDual(String),
}

impl DataError {
    fn from_json(e: serde_json::Error) -> Self {
        match e.classify() {
            serde_json::error::Category::Data => DataError::Schema(e.to_string()),
            serde_json::error::Category::Io => DataError::Io(e.into()),
            _ => DataError::Parse(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDescriptor {
    pub name: String,
    /// Root system label such as `F4` or `B2`.
    pub root_system: String,
    /// Names of the simple roots in the order used by weighted Dynkin diagrams.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub node_order: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_order_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DualGroupRef {
    /// The keyword `"self"`.
    Keyword(String),
    Descriptor(GroupDescriptor),
}

impl DualGroupRef {
    pub fn is_self(&self) -> bool {
        matches!(self, DualGroupRef::Keyword(k) if k == "self")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitDoc {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weighted_dynkin: Option<Vec<i64>>,
    #[serde(default)]
    pub special: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarADoc {
    pub orbit: String,
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DsDoc {
    pub orbit: String,
    pub class: String,
    pub dual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarClassDoc {
    pub orbit: String,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterDoc {
    pub id: String,
    pub n_orbit: String,
    pub rho: String,
    pub iwahori: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<bool>,
    pub az_partner: String,
    /// Temperedness as recorded by the source, checked against the orbits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tempered: Option<bool>,
    /// CUWF as recorded by the source, checked against the computed value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reported_cuwf: Option<BarClassDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterSetDoc {
    pub ic_orbit: String,
    pub parameters: Vec<ParameterDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bar_a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter_sets: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionEntry {
    pub lan: String,
    pub art: String,
    pub packet: Vec<String>,
}

/// Descriptive data that is stored and displayed but never used in computations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjecturalDecomposition {
    pub authoritative: bool,
    pub ic_orbit: String,
    pub note: String,
    pub entries: Vec<DecompositionEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub format_version: u32,
    pub group: GroupDescriptor,
    pub dual_group: DualGroupRef,
    pub orbits: Vec<OrbitDoc>,
    pub closure: Vec<(String, String)>,
    pub bar_a: Vec<BarADoc>,
    pub d_s: Vec<DsDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameter_sets: Vec<ParameterSetDoc>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjectural_decomposition: Option<ConjecturalDecomposition>,
}

impl BundleDoc {
    pub fn from_json(text: &str) -> Result<Self, DataError> {
        serde_json::from_str(text).map_err(DataError::from_json)
    }

    pub fn from_reader(mut source: impl Read) -> Result<Self, DataError> {
        let mut text = String::new();
        source.read_to_string(&mut text)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle documents always serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .collect()
    }

    pub fn failed_names(&self) -> Vec<String> {
        self.failures().iter().map(|c| c.name.clone()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skip => "SKIP",
            };
            writeln!(f, "{tag} {}", c.name)?;
            for d in &c.details {
                writeln!(f, "     {d}")?;
            }
        }
        let n_fail = self.failures().len();
        write!(
            f,
            "{} checks, {} failed: {}",
            self.checks.len(),
            n_fail,
            if self.passed { "ok" } else { "FAILED" }
        )
    }
}

#[derive(Default)]
struct Checker {
    checks: Vec<CheckResult>,
}

impl Checker {
    fn record(&mut self, name: &str, details: Vec<String>) {
        let status = if details.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        if let Some(c) = self.checks.iter_mut().find(|c| c.name == name) {
            if status == CheckStatus::Fail {
                c.status = CheckStatus::Fail;
            }
            c.details.extend(details);
            return;
        }
        self.checks.push(CheckResult {
            name: name.to_string(),
            status,
            details,
        });
    }

    fn skip(&mut self, name: &str, reason: &str) {
        if self.checks.iter().any(|c| c.name == name) {
            return;
        }
        self.checks.push(CheckResult {
            name: name.to_string(),
            status: CheckStatus::Skip,
            details: vec![reason.to_string()],
        });
    }

    fn finish(self) -> ValidationReport {
        let passed = self.checks.iter().all(|c| c.status != CheckStatus::Fail);
        ValidationReport {
            checks: self.checks,
            passed,
        }
    }
}

/// Structural checks and poset construction for one bundle document.
fn check_side(doc: &BundleDoc, c: &mut Checker) -> Option<OrbitPoset> {
    let g = &doc.group.name;
    let rs = match doc.group.root_system.parse::<RootSystem>() {
        Ok(rs) => {
            let mut details = Vec::new();
            let order = &doc.group.node_order;
            if !order.is_empty() {
                if order.len() != rs.rank() {
                    details.push(format!(
                        "{g}: node_order has {} entries, rank is {}",
                        order.len(),
                        rs.rank()
                    ));
                }
                if order.iter().collect::<BTreeSet<_>>().len() != order.len() {
                    details.push(format!("{g}: node_order repeats a node"));
                }
            } else if doc.orbits.iter().any(|o| o.weighted_dynkin.is_some()) {
                details.push(format!(
                    "{g}: weighted Dynkin diagrams given without a node_order declaration"
                ));
            }
            c.record("group.root_system", details);
            Some(rs)
        }
        Err(e) => {
            c.record("group.root_system", vec![format!("{g}: {e}")]);
            None
        }
    };

    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut dup = Vec::new();
    for (i, o) in doc.orbits.iter().enumerate() {
        if o.label.trim().is_empty() || o.label != crate::orbits::normalize_label(&o.label) {
            dup.push(format!("{g}: label {:?} is not in canonical form", o.label));
        }
        if index.insert(o.label.as_str(), i).is_some() {
            dup.push(format!("{g}: label {:?} appears twice", o.label));
        }
    }
    if doc.orbits.is_empty() {
        dup.push(format!("{g}: no orbits"));
    }
    c.record("orbits.unique_labels", dup);

    let mut wd = Vec::new();
    let mut dims = Vec::new();
    let mut seen_diagrams: HashMap<&Vec<i64>, &str> = HashMap::new();
    for o in &doc.orbits {
        let Some(w) = &o.weighted_dynkin else {
            continue;
        };
        if let Some(other) = seen_diagrams.insert(w, &o.label) {
            wd.push(format!("{g}: {} and {other} share a diagram", o.label));
        }
        if w.iter().any(|x| !(0..=2).contains(x)) {
            wd.push(format!("{g}: {} has a coordinate outside {{0,1,2}}", o.label));
        }
        if let Some(rs) = &rs {
            if w.len() != rs.rank() {
                wd.push(format!("{g}: {} has {} coordinates, rank is {}", o.label, w.len(), rs.rank()));
                continue;
            }
            if rs.is_dominant(&Coweight::integral(w)) != Ok(true) {
                wd.push(format!("{g}: {} is not dominant", o.label));
            }
            if let (Some(dim), Ok(expected)) = (o.dim, rs.orbit_dimension(w)) {
                if dim != expected {
                    dims.push(format!(
                        "{g}: {} has dim {dim}, its diagram gives {expected}",
                        o.label
                    ));
                }
            }
        }
    }
    c.record("orbits.weighted_dynkin", wd);
    c.record("orbits.dimension", dims);

    let mut unknown = Vec::new();
    let mut pairs = Vec::new();
    for (a, b) in &doc.closure {
        match (index.get(a.as_str()), index.get(b.as_str())) {
            (Some(&i), Some(&j)) => pairs.push((i, j)),
            _ => unknown.push(format!("{g}: closure pair ({a}, {b}) names an unknown orbit")),
        }
    }
    let unknown_ok = unknown.is_empty();
    c.record("closure.known_labels", unknown);

    let n = doc.orbits.len();
    let leq = transitive_closure(n, &pairs);
    let mut anti = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if leq[i][j] && leq[j][i] {
                anti.push(format!(
                    "{g}: {} and {} lie below each other",
                    doc.orbits[i].label, doc.orbits[j].label
                ));
            }
        }
    }
    let anti_ok = anti.is_empty();
    c.record("closure.antisymmetry", anti);
    if !anti_ok {
        c.skip("closure.extremes", "closure is not a partial order");
        c.skip("closure.dimension_monotone", "closure is not a partial order");
        return None;
    }

    let mut ext = Vec::new();
    let min = (0..n).find(|&i| (0..n).all(|j| leq[i][j]));
    let max = (0..n).find(|&i| (0..n).all(|j| leq[j][i]));
    match min {
        None => ext.push(format!("{g}: no minimum")),
        Some(i) => {
            let o = &doc.orbits[i];
            if o.dim.is_some_and(|d| d != 0)
                || o.weighted_dynkin.as_ref().is_some_and(|w| w.iter().any(|&x| x != 0))
            {
                ext.push(format!("{g}: minimum {} is not the zero orbit", o.label));
            }
        }
    }
    match max {
        None => ext.push(format!("{g}: no maximum")),
        Some(i) => {
            let o = &doc.orbits[i];
            if o.weighted_dynkin.as_ref().is_some_and(|w| w.iter().any(|&x| x != 2)) {
                ext.push(format!("{g}: maximum {} is not the regular orbit", o.label));
            }
        }
    }
    let ext_ok = ext.is_empty();
    c.record("closure.extremes", ext);

    let mut mono = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i][j] {
                if let (Some(a), Some(b)) = (doc.orbits[i].dim, doc.orbits[j].dim) {
                    if a >= b {
                        mono.push(format!(
                            "{g}: {} < {} but dim {a} >= {b}",
                            doc.orbits[i].label, doc.orbits[j].label
                        ));
                    }
                }
            }
        }
    }
    c.record("closure.dimension_monotone", mono);

    let mut cov = Vec::new();
    let mut seen = BTreeSet::new();
    for b in &doc.bar_a {
        if !index.contains_key(b.orbit.as_str()) {
            cov.push(format!("{g}: bar_a entry for unknown orbit {}", b.orbit));
        }
        if !seen.insert(b.orbit.as_str()) {
            cov.push(format!("{g}: bar_a lists {} twice", b.orbit));
        }
        let classes: Vec<String> = b.classes.iter().map(|x| normalize_class(x)).collect();
        if !classes.iter().any(|x| x == TRIVIAL_CLASS) {
            cov.push(format!("{g}: {} has no trivial class", b.orbit));
        }
        if classes.iter().collect::<BTreeSet<_>>().len() != classes.len() {
            cov.push(format!("{g}: {} repeats a class", b.orbit));
        }
    }
    for o in &doc.orbits {
        if !seen.contains(o.label.as_str()) {
            cov.push(format!("{g}: {} has no bar_a entry", o.label));
        }
    }
    c.record("bar_a.coverage", cov);

    if !unknown_ok || !ext_ok {
        return None;
    }
    let records = doc
        .orbits
        .iter()
        .map(|o| OrbitRecord {
            label: o.label.clone(),
            dim: o.dim,
            weighted_dynkin: o.weighted_dynkin.clone(),
            special_flag: Some(o.special),
            partition: None,
        })
        .collect();
    OrbitPoset::from_covers(g.clone(), rs, records, &doc.closure).ok()
}

fn bar_set(doc: &BundleDoc) -> BTreeSet<(String, String)> {
    doc.bar_a
        .iter()
        .flat_map(|b| {
            b.classes
                .iter()
                .map(move |c| (b.orbit.clone(), normalize_class(c)))
        })
        .collect()
}

/// Totality of the `d_S` table of `doc` (mapping into `target`); returns the
/// map `d` read off from trivial classes when the table is usable.
fn check_d_s(doc: &BundleDoc, target: &BundleDoc, c: &mut Checker) -> Option<HashMap<String, String>> {
    let g = &doc.group.name;
    let expected = bar_set(doc);
    let target_labels: BTreeSet<&str> = target.orbits.iter().map(|o| o.label.as_str()).collect();
    let mut seen = BTreeSet::new();
    let mut total = Vec::new();
    let mut d = HashMap::new();
    for e in &doc.d_s {
        let key = (e.orbit.clone(), normalize_class(&e.class));
        if !expected.contains(&key) {
            total.push(format!("{g}: entry for ({}, {}) which is not in bar_a", e.orbit, e.class));
        }
        if !seen.insert(key.clone()) {
            total.push(format!("{g}: ({}, {}) has two entries", e.orbit, e.class));
        }
        if !target_labels.contains(e.dual.as_str()) {
            total.push(format!(
                "{g}: ({}, {}) maps to {} which is not a dual orbit",
                e.orbit, e.class, e.dual
            ));
        }
        if key.1 == TRIVIAL_CLASS {
            d.insert(e.orbit.clone(), e.dual.clone());
        }
    }
    for (o, cl) in expected.difference(&seen) {
        total.push(format!("{g}: no entry for ({o}, {cl})"));
    }
    let ok = total.is_empty();
    c.record("d_s.totality", total);

    let image: BTreeSet<&str> = doc.d_s.iter().map(|e| e.dual.as_str()).collect();
    let missed: Vec<String> = target_labels
        .iter()
        .filter(|l| !image.contains(*l))
        .map(|l| format!("{g}: dual orbit {l} is not in the image"))
        .collect();
    c.record("d_s.surjectivity", missed);
    ok.then_some(d)
}

fn side_tables(doc: &BundleDoc) -> SideTables {
    SideTables {
        classes: doc
            .bar_a
            .iter()
            .map(|b| (b.orbit.clone(), b.classes.clone()))
            .collect(),
        d_s: doc
            .d_s
            .iter()
            .map(|e| (e.orbit.clone(), e.class.clone(), e.dual.clone()))
            .collect(),
    }
}

const DUALITY_CHECKS: &[&str] = &[
    "d.cube",
    "d.order_reversing",
    "d.image_is_special",
    "orbits.special_flags",
    "d_s.consistency",
    "embed.injective",
    "achar.min_special_cover",
    "achar.flip_in_image",
    "achar.pr1",
    "achar.cube",
    "achar.order_reversing",
    "achar.special_involution",
    "special_pieces.partition",
];

const PARAMETER_CHECKS: &[&str] = &[
    "parameters.unique_ids",
    "parameters.known_orbits",
    "parameters.below_ic",
    "parameters.az_links",
    "parameters.az_involution",
    "parameters.tempered_flags",
    "parameters.reported_cuwf",
    "packets.arthur_characterizations",
    "packets.weak_characterizations",
    "packets.jiang",
];

fn check_d(pair: &DualPair, c: &mut Checker) {
    let mut cube = Vec::new();
    let mut rev = Vec::new();
    let mut image = Vec::new();
    let mut flags = Vec::new();
    for side in [Side::Group, Side::Dual] {
        let g = pair.poset(side).name().to_string();
        for a in pair.orbits(side) {
            let d1 = pair.bvls_dual(a);
            let d3 = pair.bvls_dual(pair.bvls_dual(d1));
            if d1 != d3 {
                cube.push(format!("{g}: d^3({}) != d({})", pair.label(a), pair.label(a)));
            }
            if !pair.is_special(d1) {
                image.push(format!("{g}: d({}) is not fixed by d∘d", pair.label(a)));
            }
            if pair.record(a).special_flag != Some(pair.is_special(a)) {
                flags.push(format!(
                    "{g}: {} flagged special={:?}, d∘d fixed point={}",
                    pair.label(a),
                    pair.record(a).special_flag.unwrap_or(false),
                    pair.is_special(a)
                ));
            }
            for b in pair.orbits(side) {
                if pair.closure_leq(a, b) == Ok(true)
                    && pair.closure_leq(pair.bvls_dual(b), d1) != Ok(true)
                {
                    rev.push(format!(
                        "{g}: {} <= {} but d({}) is not <= d({})",
                        pair.label(a),
                        pair.label(b),
                        pair.label(b),
                        pair.label(a)
                    ));
                }
            }
        }
    }
    c.record("d.cube", cube);
    c.record("d.order_reversing", rev);
    c.record("d.image_is_special", image);
    c.record("orbits.special_flags", flags);
}

fn check_achar(duality: &BarDuality, c: &mut Checker) {
    let pair = duality.pair();
    let mut inj = Vec::new();
    let mut cover = Vec::new();
    let mut flip = Vec::new();
    let mut pr1 = Vec::new();
    let mut cube = Vec::new();
    let mut rev = Vec::new();
    let mut invol = Vec::new();
    let mut pieces = Vec::new();
    for side in [Side::Group, Side::Dual] {
        let g = pair.poset(side).name().to_string();
        let all = duality.bar_classes(side);
        let mut images = HashMap::new();
        for x in &all {
            let Ok(p) = duality.embed(x) else { continue };
            if let Some(prev) = images.insert((p.o, p.o_dual), x.clone()) {
                inj.push(format!(
                    "{g}: {} and {} have the same embedding",
                    duality.display(&prev),
                    duality.display(x)
                ));
            }
        }
        let mut dmap: HashMap<BarClass, BarClass> = HashMap::new();
        for x in &all {
            match duality.min_special_cover(x) {
                Err(e) => cover.push(format!("{g}: {e}")),
                Ok(_) => match duality.achar_dual(x) {
                    Err(e) => flip.push(format!("{g}: {e}")),
                    Ok(y) => {
                        dmap.insert(x.clone(), y);
                    }
                },
            }
        }
        for x in &all {
            let Some(y) = dmap.get(x) else { continue };
            if duality.sommers_dual(x).ok() != Some(y.orbit) {
                pr1.push(format!("{g}: pr1 D{} != d_S", duality.display(x)));
            }
            let Ok(y2) = duality.achar_dual(y) else {
                cube.push(format!("{g}: D(D{}) undefined", duality.display(x)));
                continue;
            };
            match duality.achar_dual(&y2) {
                Ok(y3) if &y3 == y => {}
                _ => cube.push(format!("{g}: D^3{} != D{}", duality.display(x), duality.display(x))),
            }
            if duality.is_special_pair(x) == Ok(true) && &y2 != x {
                invol.push(format!("{g}: D(D{}) != itself", duality.display(x)));
            }
            for z in &all {
                let Some(w) = dmap.get(z) else { continue };
                if duality.bar_leq(x, z) == Ok(true) && duality.bar_leq(w, y) != Ok(true) {
                    rev.push(format!(
                        "{g}: {} <= {} but D reverses to non-comparable",
                        duality.display(x),
                        duality.display(z)
                    ));
                }
            }
        }
        let mut members: BTreeMap<Orbit, Vec<Orbit>> = BTreeMap::new();
        for a in pair.orbits(side) {
            match pair.special_closure(a) {
                Ok(s) => {
                    members.entry(s).or_default().push(a);
                    if pair.bvls_dual(s) != pair.bvls_dual(a) {
                        pieces.push(format!("{g}: d changes along the special closure of {}", pair.label(a)));
                    }
                }
                Err(e) => pieces.push(format!("{g}: {e}")),
            }
        }
        for (s, piece) in &members {
            if !piece.iter().all(|&b| pair.closure_leq(b, *s) == Ok(true)) {
                pieces.push(format!("{g}: special piece of {} is not below it", pair.label(*s)));
            }
            if piece.iter().filter(|&&b| pair.is_special(b)).count() != 1 {
                pieces.push(format!("{g}: special piece of {} has several specials", pair.label(*s)));
            }
        }
    }
    c.record("embed.injective", inj);
    c.record("achar.min_special_cover", cover);
    c.record("achar.flip_in_image", flip);
    c.record("achar.pr1", pr1);
    c.record("achar.cube", cube);
    c.record("achar.order_reversing", rev);
    c.record("achar.special_involution", invol);
    c.record("special_pieces.partition", pieces);
}

/// Structural checks on parameter sets; returns the sets that can be built.
fn check_parameters(doc: &BundleDoc, duality: &BarDuality, c: &mut Checker) -> Vec<ParameterSet> {
    let pair = duality.pair();
    let mut ids = Vec::new();
    let mut known = Vec::new();
    let mut below = Vec::new();
    let mut links = Vec::new();
    let mut invol = Vec::new();
    let mut temp = Vec::new();
    let mut built = Vec::new();
    for set in &doc.parameter_sets {
        let ic = match pair.find(Side::Dual, &set.ic_orbit) {
            Ok(o) => o,
            Err(e) => {
                known.push(e.to_string());
                continue;
            }
        };
        let mut by_id: HashMap<&str, &ParameterDoc> = HashMap::new();
        for p in &set.parameters {
            if by_id.insert(p.id.as_str(), p).is_some() {
                ids.push(format!("{} appears twice", p.id));
            }
        }
        let mut params = Vec::new();
        for p in &set.parameters {
            let n = match pair.find(Side::Dual, &p.n_orbit) {
                Ok(o) => o,
                Err(e) => {
                    known.push(format!("{}: {e}", p.id));
                    continue;
                }
            };
            if pair.closure_leq(n, ic) != Ok(true) {
                below.push(format!("{}: {} is not below {}", p.id, p.n_orbit, set.ic_orbit));
            }
            match by_id.get(p.az_partner.as_str()) {
                None => links.push(format!("{} -> {} which is not in the set", p.id, p.az_partner)),
                Some(q) if q.az_partner != p.id => invol.push(format!(
                    "{} -> {} -> {}",
                    p.id, p.az_partner, q.az_partner
                )),
                Some(_) => {}
            }
            if let Some(t) = p.tempered {
                if t != (n == ic) {
                    temp.push(format!("{} recorded tempered={t}", p.id));
                }
            }
            params.push(Parameter {
                id: p.id.clone(),
                ic_orbit: ic,
                n_orbit: n,
                rho: p.rho.clone(),
                iwahori: p.iwahori,
                unitary: p.unitary,
                az_partner: p.az_partner.clone(),
            });
        }
        if params.len() == set.parameters.len() {
            if let Ok(s) = ParameterSet::new(pair, ic, params) {
                built.push(s);
            }
        }
    }
    c.record("parameters.unique_ids", ids);
    c.record("parameters.known_orbits", known);
    c.record("parameters.below_ic", below);
    c.record("parameters.az_links", links);
    c.record("parameters.az_involution", invol);
    c.record("parameters.tempered_flags", temp);
    built
}

fn check_packets(doc: &BundleDoc, duality: &BarDuality, sets: &[ParameterSet], c: &mut Checker) {
    let mut reported = Vec::new();
    let mut arthur = Vec::new();
    let mut weak = Vec::new();
    let mut jiang = Vec::new();
    let recorded: HashMap<&str, &BarClassDoc> = doc
        .parameter_sets
        .iter()
        .flat_map(|s| s.parameters.iter())
        .filter_map(|p| p.reported_cuwf.as_ref().map(|r| (p.id.as_str(), r)))
        .collect();
    for set in sets {
        let packets = Packets::new(duality, set);
        for x in set.params() {
            let Some(r) = recorded.get(x.id.as_str()) else { continue };
            match packets.cuwf(x) {
                Ok(w) => {
                    let ok = duality
                        .bar_class(Side::Group, &r.orbit, &r.class)
                        .is_ok_and(|e| e == w);
                    if !ok {
                        reported.push(format!(
                            "{}: computed {}, recorded ({},{})",
                            x.id,
                            duality.display(&w),
                            r.orbit,
                            r.class
                        ));
                    }
                }
                Err(e) => reported.push(format!("{}: {e}", x.id)),
            }
        }
        if let Err(e) = packets.arthur_packet() {
            arthur.push(e.to_string());
        }
        if let Err(e) = packets.weak_packet() {
            weak.push(e.to_string());
        }
        match packets.check_jiang() {
            Ok(r) if r.pass => {}
            Ok(r) => jiang.push(format!(
                "members off the bound: {:?}; lower bound fails for {:?}",
                r.members
                    .iter()
                    .filter(|m| !m.equals_bound)
                    .map(|m| &m.id)
                    .collect::<Vec<_>>(),
                r.lower_bound_failures
            )),
            Err(e) => jiang.push(e.to_string()),
        }
    }
    c.record("parameters.reported_cuwf", reported);
    c.record("packets.arthur_characterizations", arthur);
    c.record("packets.weak_characterizations", weak);
    c.record("packets.jiang", jiang);
}

fn check_provenance(doc: &BundleDoc, c: &mut Checker) {
    let mut missing = Vec::new();
    let blank = |s: &Option<String>| s.as_deref().is_none_or(|t| t.trim().is_empty());
    if blank(&doc.provenance.d_s) {
        missing.push(format!("{}: d_s table has no provenance note", doc.group.name));
    }
    if !doc.parameter_sets.is_empty() && blank(&doc.provenance.parameter_sets) {
        missing.push(format!("{}: parameter sets have no provenance note", doc.group.name));
    }
    c.record("provenance.required", missing);
}

fn check_conjectural(doc: &BundleDoc, c: &mut Checker) {
    let Some(cd) = &doc.conjectural_decomposition else {
        return;
    };
    let mut details = Vec::new();
    if cd.authoritative {
        details.push("conjectural data must be marked non-authoritative".to_string());
    }
    let dual_labels: BTreeSet<&str> = doc.orbits.iter().map(|o| o.label.as_str()).collect();
    let ids: BTreeSet<&str> = doc
        .parameter_sets
        .iter()
        .flat_map(|s| s.parameters.iter().map(|p| p.id.as_str()))
        .collect();
    for e in &cd.entries {
        for l in [&e.lan, &e.art] {
            if doc.dual_group.is_self() && !dual_labels.contains(l.as_str()) {
                details.push(format!("unknown orbit {l}"));
            }
        }
        for id in &e.packet {
            if !ids.contains(id.as_str()) {
                details.push(format!("unknown parameter {id}"));
            }
        }
    }
    c.record("conjectural.annotated", details);
}

/// Builds the dual pair from both posets and the maps `d` read off `d_s`.
fn build_pair(
    posets: (OrbitPoset, OrbitPoset),
    d_group: &HashMap<String, String>,
    d_dual: &HashMap<String, String>,
) -> Option<DualPair> {
    let (pg, pd) = posets;
    let map = |from: &OrbitPoset, to: &OrbitPoset, d: &HashMap<String, String>| -> Option<Vec<usize>> {
        from.records()
            .iter()
            .map(|r| d.get(&r.label).and_then(|l| to.index_of(l).ok()))
            .collect()
    };
    let dg = map(&pg, &pd, d_group)?;
    let dd = map(&pd, &pg, d_dual)?;
    DualPair::new(pg, pd, dg, dd).ok()
}

/// Full validation of a bundle, with its dual bundle when it is not self-dual.
pub fn validate_bundle(doc: &BundleDoc, dual_doc: Option<&BundleDoc>) -> ValidationReport {
    validate_inner(doc, dual_doc).0
}

fn validate_inner(
    doc: &BundleDoc,
    dual_doc: Option<&BundleDoc>,
) -> (ValidationReport, Option<(BarDuality, Vec<ParameterSet>)>) {
    let mut c = Checker::default();
    let mut version = Vec::new();
    for d in std::iter::once(doc).chain(dual_doc) {
        if d.format_version != FORMAT_VERSION {
            version.push(format!("{}: format_version {} is not {FORMAT_VERSION}", d.group.name, d.format_version));
        }
    }
    c.record("schema.format_version", version);

    let self_dual = doc.dual_group.is_self();
    let mut dual_ref = Vec::new();
    let dual = match (&doc.dual_group, dual_doc) {
        (DualGroupRef::Keyword(k), _) if k != "self" => {
            dual_ref.push(format!("dual_group keyword {k:?} is not \"self\""));
            None
        }
        (_, _) if self_dual => Some(doc),
        (DualGroupRef::Descriptor(desc), Some(other)) => {
            if desc.name != other.group.name {
                dual_ref.push(format!(
                    "dual_group names {}, dual bundle is {}",
                    desc.name, other.group.name
                ));
            }
            match &other.dual_group {
                DualGroupRef::Descriptor(back) if back.name == doc.group.name => {}
                _ => dual_ref.push(format!(
                    "dual bundle {} does not name {} as its dual",
                    other.group.name, doc.group.name
                )),
            }
            Some(other)
        }
        _ => None,
    };
    c.record("schema.dual_group", dual_ref);

    let pg = check_side(doc, &mut c);
    let pd = match dual {
        Some(d) if !self_dual => check_side(d, &mut c),
        Some(_) => pg.clone(),
        None => None,
    };

    let mut result = None;
    match dual {
        None => {
            for name in ["d_s.totality", "d_s.surjectivity"]
                .iter()
                .chain(DUALITY_CHECKS)
                .chain(PARAMETER_CHECKS)
            {
                c.skip(name, "no dual bundle available");
            }
        }
        Some(dual) => {
            let dg = check_d_s(doc, dual, &mut c);
            let dd = if self_dual { dg.clone() } else { check_d_s(dual, doc, &mut c) };
            let pair = match (pg, pd, dg, dd) {
                (Some(pg), Some(pd), Some(dg), Some(dd)) => build_pair((pg, pd), &dg, &dd),
                _ => None,
            };
            match pair {
                None => {
                    for name in DUALITY_CHECKS.iter().chain(PARAMETER_CHECKS) {
                        c.skip(name, "orbit data or d_s table unusable");
                    }
                }
                Some(pair) => {
                    check_d(&pair, &mut c);
                    match BarDuality::new(pair, &side_tables(doc), &side_tables(dual)) {
                        Err(e) => {
                            c.record("d_s.consistency", vec![e.to_string()]);
                            for name in DUALITY_CHECKS.iter().chain(PARAMETER_CHECKS) {
                                c.skip(name, "d_s table unusable");
                            }
                        }
                        Ok(duality) => {
                            c.record("d_s.consistency", Vec::new());
                            check_achar(&duality, &mut c);
                            let sets = check_parameters(doc, &duality, &mut c);
                            check_packets(doc, &duality, &sets, &mut c);
                            result = Some((duality, sets));
                        }
                    }
                }
            }
        }
    }
    check_provenance(doc, &mut c);
    if let Some(d) = dual_doc.filter(|_| !self_dual) {
        check_provenance(d, &mut c);
    }
    check_conjectural(doc, &mut c);
    let report = c.finish();
    let result = if report.passed { result } else { None };
    (report, result)
}

/// A validated bundle together with its dual data.
#[derive(Debug, Clone)]
pub struct Bundle {
    doc: BundleDoc,
    dual_doc: Option<BundleDoc>,
    duality: BarDuality,
    parameter_sets: Vec<ParameterSet>,
    report: ValidationReport,
}

impl Bundle {
    pub fn from_docs(doc: BundleDoc, dual_doc: Option<BundleDoc>) -> Result<Self, DataError> {
        let needs_dual = matches!(doc.dual_group, DualGroupRef::Descriptor(_));
        let dual_doc = if needs_dual { dual_doc } else { None };
        if needs_dual && dual_doc.is_none() {
            return Err(DataError::MissingDual(doc.group.name.clone()));
        }
        let (report, built) = validate_inner(&doc, dual_doc.as_ref());
        match built {
            Some((duality, parameter_sets)) => Ok(Bundle {
                doc,
                dual_doc,
                duality,
                parameter_sets,
                report,
            }),
            None => Err(DataError::Validation {
                failed: report.failed_names(),
                report: Box::new(report),
            }),
        }
    }

    pub fn doc(&self) -> &BundleDoc {
        &self.doc
    }

    pub fn dual_doc(&self) -> Option<&BundleDoc> {
        self.dual_doc.as_ref()
    }

    pub fn duality(&self) -> &BarDuality {
        &self.duality
    }

    pub fn pair(&self) -> &DualPair {
        self.duality.pair()
    }

    pub fn parameter_sets(&self) -> &[ParameterSet] {
        &self.parameter_sets
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    /// The parameter set whose infinitesimal character is given by `ic_orbit`.
    pub fn parameter_set(&self, ic_orbit: Orbit) -> Option<&ParameterSet> {
        self.parameter_sets.iter().find(|s| s.ic_orbit() == ic_orbit)
    }

    /// Finds a parameter by id across all sets.
    pub fn parameter(&self, id: &str) -> Option<(&ParameterSet, &Parameter)> {
        self.parameter_sets
            .iter()
            .find_map(|s| s.get(id).ok().map(|p| (s, p)))
    }

    pub fn parameter_count(&self) -> usize {
        self.parameter_sets.iter().map(|s| s.len()).sum()
    }

    /// All parameter ids in natural order.
    pub fn parameter_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self
            .parameter_sets
            .iter()
            .flat_map(|s| s.params().iter().map(|p| p.id.clone()))
            .collect();
        ids.sort_by(|a, b| natural_cmp(a, b));
        ids
    }
}

/// Reads, parses and fully validates a self-dual bundle.
pub fn load_bundle(source: impl Read) -> Result<Bundle, DataError> {
    let doc = BundleDoc::from_reader(source)?;
    Bundle::from_docs(doc, None)
}

/// Reads, parses and validates a bundle and its dual bundle.
pub fn load_bundle_pair(source: impl Read, dual: impl Read) -> Result<Bundle, DataError> {
    let doc = BundleDoc::from_reader(source)?;
    let dual_doc = BundleDoc::from_reader(dual)?;
    Bundle::from_docs(doc, Some(dual_doc))
}

pub fn shipped_f4_doc() -> BundleDoc {
    BundleDoc::from_json(SHIPPED_F4_JSON).expect("shipped bundle parses")
}

pub fn shipped_f4() -> Bundle {
    Bundle::from_docs(shipped_f4_doc(), None).expect("shipped bundle validates")
}
