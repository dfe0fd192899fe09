#![allow(dead_code)]

use nilduality::data::{BundleDoc, SHIPPED_F4_JSON};
use nilduality::duality::{BarClass, BarDuality};
use nilduality::orbits::{DualPair, Side};
use nilduality::partitions::{all_partitions, FamilyKind, Partition, PartitionFamily};

pub const B2_JSON: &str = include_str!("../../data/b2.json");
pub const C2_JSON: &str = include_str!("../../data/c2.json");

/// CUWF column of the F4(a3) table: (id, orbit, class).
pub const TABLE_CUWF: [(&str, &str, &str); 20] = [
    ("X1", "F4", "1"),
    ("X2", "F4(a1)", "(12)"),
    ("X3", "F4(a1)", "1"),
    ("X4", "C3", "1"),
    ("X5", "F4(a3)", "1"),
    ("X6", "F4(a2)", "1"),
    ("X7", "F4(a3)", "(1234)"),
    ("X8", "F4(a3)", "(123)"),
    ("X9", "F4(a3)", "(12)"),
    ("X10", "F4(a1)", "1"),
    ("X11", "F4(a3)", "(12)(34)"),
    ("X12", "B3", "1"),
    ("X13", "F4(a3)", "1"),
    ("X14", "C3", "1"),
    ("X15", "F4(a3)", "(12)"),
    ("X16", "F4(a2)", "1"),
    ("X17", "F4(a3)", "1"),
    ("X18", "F4(a3)", "(12)(34)"),
    ("X19", "F4(a3)", "1"),
    ("X20", "F4(a3)", "1"),
];

pub const ARTHUR_PACKET: [&str; 5] = ["X5", "X13", "X17", "X19", "X20"];

pub const WEAK_PACKET: [&str; 11] = [
    "X5", "X7", "X8", "X9", "X11", "X13", "X15", "X17", "X18", "X19", "X20",
];

/// Pairs (O_Lan, O_Art) whose neutral elements should sum to that of F4(a3).
pub const INFL_PAIRS: [(&str, &str); 5] = [
    ("0", "F4(a3)"),
    ("A1", "C3(a1)"),
    ("~A1", "B2"),
    ("A1+~A1", "A1+~A2"),
    ("~A1+A2", "~A1+A2"),
];

pub fn f4_doc() -> BundleDoc {
    BundleDoc::from_json(SHIPPED_F4_JSON).unwrap()
}

pub fn b2_c2() -> nilduality::data::Bundle {
    nilduality::data::Bundle::from_docs(
        BundleDoc::from_json(B2_JSON).unwrap(),
        Some(BundleDoc::from_json(C2_JSON).unwrap()),
    )
    .unwrap()
}

pub fn family_kinds() -> [FamilyKind; 4] {
    [FamilyKind::A, FamilyKind::B, FamilyKind::C, FamilyKind::D]
}

/// Classical (kind, rank) combinations of rank at most 4.
pub fn classical_small() -> Vec<(FamilyKind, usize)> {
    let mut out = Vec::new();
    for kind in family_kinds() {
        let lo = match kind {
            FamilyKind::A => 1,
            _ => 2,
        };
        for rank in lo..=4 {
            out.push((kind, rank));
        }
    }
    out
}

/// Collapse by exhaustive search: the dominance-maximum of the valid
/// partitions dominated by `p`.
pub fn brute_collapse(p: &Partition, family: &PartitionFamily) -> Option<Partition> {
    let below: Vec<Partition> = all_partitions(p.size())
        .into_iter()
        .filter(|q| family.is_valid(q) && p.dominates(q).unwrap())
        .collect();
    below
        .iter()
        .find(|q| below.iter().all(|r| q.dominates(r).unwrap()))
        .cloned()
}

/// Specials by the transpose criterion: in types B and C the transpose stays
/// in the same family, in type D it lies in the C family.
pub fn brute_is_special(p: &Partition, kind: FamilyKind) -> bool {
    let t = p.transpose();
    let n = p.size();
    match kind {
        FamilyKind::A => true,
        FamilyKind::B => PartitionFamily::new(FamilyKind::B, n).unwrap().is_valid(&t),
        FamilyKind::C | FamilyKind::D => PartitionFamily::new(FamilyKind::C, n).unwrap().is_valid(&t),
    }
}

/// Checks every duality identity exhaustively over both sides of `d`.
pub fn duality_identities(d: &BarDuality) -> Result<usize, String> {
    let pair = d.pair();
    let mut checked = 0;
    for side in [Side::Group, Side::Dual] {
        let name = pair.poset(side).name().to_string();
        for a in pair.orbits(side) {
            let da = pair.bvls_dual(a);
            if pair.bvls_dual(pair.bvls_dual(da)) != da {
                return Err(format!("{name}: d^3 != d at {}", pair.label(a)));
            }
            if d.sommers_dual(&BarClass::trivial(a)).map_err(|e| e.to_string())? != da {
                return Err(format!("{name}: d_S(O,1) != d(O) at {}", pair.label(a)));
            }
            if pair.is_special(a) && pair.bvls_dual(da) != a {
                return Err(format!("{name}: d not an involution on special {}", pair.label(a)));
            }
            for b in pair.orbits(side) {
                if pair.closure_leq(a, b).unwrap() && !pair.closure_leq(pair.bvls_dual(b), da).unwrap() {
                    return Err(format!("{name}: d not order-reversing on {} <= {}", pair.label(a), pair.label(b)));
                }
            }
        }
        let all = d.bar_classes(side);
        let mut seen = std::collections::HashSet::new();
        for x in &all {
            let e = d.embed(x).map_err(|e| e.to_string())?;
            if !seen.insert((e.o, e.o_dual)) {
                return Err(format!("{name}: embed not injective at {}", d.display(x)));
            }
        }
        for x in &all {
            let y = d.achar_dual(x).map_err(|e| e.to_string())?;
            if y.orbit != d.sommers_dual(x).unwrap() {
                return Err(format!("{name}: pr1 D != d_S at {}", d.display(x)));
            }
            let y3 = d.achar_dual(&d.achar_dual(&y).unwrap()).unwrap();
            if y3 != y {
                return Err(format!("{name}: D^3 != D at {}", d.display(x)));
            }
            if d.is_special_pair(x).unwrap() && d.achar_dual(&y).unwrap() != *x {
                return Err(format!("{name}: D not an involution on special {}", d.display(x)));
            }
            for z in &all {
                if d.bar_leq(x, z).unwrap() {
                    let w = d.achar_dual(z).unwrap();
                    if !d.bar_leq(&w, &y).unwrap() {
                        return Err(format!(
                            "{name}: D not order-reversing on {} <= {}",
                            d.display(x),
                            d.display(z)
                        ));
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Special pieces partition the orbits; each has a unique maximum, which is special.
pub fn pieces_partition(pair: &DualPair, side: Side) -> Result<usize, String> {
    let mut covered = vec![0usize; pair.poset(side).len()];
    let mut pieces = 0;
    for s in pair.specials(side) {
        let piece = pair.special_piece_of(s).map_err(|e| e.to_string())?;
        pieces += 1;
        for &b in &piece {
            covered[b.index] += 1;
            if !pair.closure_leq(b, s).unwrap() {
                return Err(format!("{} in the piece of {} but not below it", pair.label(b), pair.label(s)));
            }
        }
        let maxima: Vec<_> = piece
            .iter()
            .filter(|&&m| piece.iter().all(|&b| pair.closure_leq(b, m).unwrap()))
            .collect();
        if maxima.len() != 1 || !pair.is_special(*maxima[0]) {
            return Err(format!("piece of {} lacks a unique special maximum", pair.label(s)));
        }
    }
    if let Some(i) = covered.iter().position(|&c| c != 1) {
        return Err(format!(
            "{} lies in {} pieces",
            pair.poset(side).record(i).label,
            covered[i]
        ));
    }
    Ok(pieces)
}

fn set_ds(doc: &mut BundleDoc, orbit: &str, class: &str, dual: &str) {
    let e = doc
        .d_s
        .iter_mut()
        .find(|e| e.orbit == orbit && e.class == class)
        .unwrap();
    e.dual = dual.to_string();
}

fn ds_value(doc: &BundleDoc, orbit: &str, class: &str) -> String {
    doc.d_s
        .iter()
        .find(|e| e.orbit == orbit && e.class == class)
        .unwrap()
        .dual
        .clone()
}

fn orbit_doc<'a>(doc: &'a mut BundleDoc, label: &str) -> &'a mut nilduality::data::OrbitDoc {
    doc.orbits.iter_mut().find(|o| o.label == label).unwrap()
}

fn param_doc<'a>(doc: &'a mut BundleDoc, id: &str) -> &'a mut nilduality::data::ParameterDoc {
    doc.parameter_sets[0]
        .parameters
        .iter_mut()
        .find(|p| p.id == id)
        .unwrap()
}

/// Broken variants of the shipped bundle with the check each must fail.
pub fn broken_fixtures() -> Vec<(&'static str, &'static str, BundleDoc)> {
    let base = f4_doc();
    let mut out = Vec::new();
    let mut add = |name: &'static str, check: &'static str, f: &dyn Fn(&mut BundleDoc)| {
        let mut doc = base.clone();
        f(&mut doc);
        out.push((name, check, doc));
    };
    add("closure cycle", "closure.antisymmetry", &|d| {
        d.closure.push(("F4".into(), "A1".into()))
    });
    add("missing d_S entry", "d_s.totality", &|d| {
        d.d_s.retain(|e| !(e.orbit == "F4(a3)" && e.class == "(123)"))
    });
    add("special flag cleared", "orbits.special_flags", &|d| {
        orbit_doc(d, "F4(a3)").special = false
    });
    add("AZ links not an involution", "parameters.az_involution", &|d| {
        param_doc(d, "X9").az_partner = "X8".into()
    });
    add("weighted Dynkin label 3", "orbits.weighted_dynkin", &|d| {
        orbit_doc(d, "A1").weighted_dynkin = Some(vec![3, 0, 0, 0])
    });
    add("d_S not surjective", "d_s.surjectivity", &|d| {
        set_ds(d, "F4(a3)", "(1234)", "F4(a3)")
    });
    add("d fails d^3 = d", "d.cube", &|d| {
        let a = ds_value(d, "~A2", "1");
        let b = ds_value(d, "A2", "1");
        set_ds(d, "A2", "1", &a);
        set_ds(d, "~A2", "1", &b);
    });
    add("d not order-reversing", "d.order_reversing", &|d| {
        let a = ds_value(d, "F4(a1)", "1");
        let b = ds_value(d, "F4(a2)", "1");
        set_ds(d, "F4(a1)", "1", &b);
        set_ds(d, "F4(a2)", "1", &a);
    });
    add("no maximum", "closure.extremes", &|d| {
        d.closure.retain(|(a, b)| !(a == "F4(a1)" && b == "F4"))
    });
    add("trivial class missing", "bar_a.coverage", &|d| {
        d.bar_a.iter_mut().find(|e| e.orbit == "B3").unwrap().classes = vec!["(12)".into()]
    });
    add("provenance missing", "provenance.required", &|d| d.provenance.d_s = None);
    add("unknown dual keyword", "schema.dual_group", &|d| {
        d.dual_group = nilduality::data::DualGroupRef::Keyword("same".into())
    });
    add("wrong dimension", "orbits.dimension", &|d| orbit_doc(d, "B3").dim = Some(41));
    add("dangling AZ link", "parameters.az_links", &|d| {
        param_doc(d, "X3").az_partner = "X99".into()
    });
    add("n-orbit above the infinitesimal character", "parameters.below_ic", &|d| {
        param_doc(d, "X1").n_orbit = "F4".into()
    });
    add("wrong tempered flag", "parameters.tempered_flags", &|d| {
        param_doc(d, "X1").tempered = Some(!param_doc(d, "X1").tempered.unwrap_or(false))
    });
    add("wrong recorded CUWF", "parameters.reported_cuwf", &|d| {
        param_doc(d, "X5").reported_cuwf = Some(nilduality::data::BarClassDoc {
            orbit: "F4(a3)".into(),
            class: "(12)".into(),
        })
    });
    add("duplicate orbit label", "orbits.unique_labels", &|d| {
        let o = d.orbits[1].clone();
        d.orbits.push(o);
    });
    add("conjectural data marked authoritative", "conjectural.annotated", &|d| {
        d.conjectural_decomposition.as_mut().unwrap().authoritative = true
    });
    out
}
