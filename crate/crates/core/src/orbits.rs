//! Nilpotent orbit posets for a group and its dual, BVLS duality, special
//! orbits and special pieces.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partitions::{all_partitions, FamilyKind, Partition, PartitionError, PartitionFamily};
use crate::rootdata::{Coweight, RootSystem, RootType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("unknown orbit {label:?} in {group}")]
    UnknownLabel { group: String, label: String },
    #[error("orbit belongs to {found}, expected {expected}")]
    GroupMismatch { expected: String, found: String },
    #[error("duplicate orbit label {0:?}")]
    DuplicateLabel(String),
    #[error("closure relation is not antisymmetric: {0} and {1} lie below each other")]
    NotAntisymmetric(String, String),
    #[error("closure order has no unique {0}")]
    NoExtremum(&'static str),
    #[error("minimal special orbit above {0} is not unique")]
    NonUniqueSpecialClosure(String),
    #[error("duality table is malformed: {0}")]
    BadDual(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Which member of a dual pair of groups an orbit lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Group,
    Dual,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Group => Side::Dual,
            Side::Dual => Side::Group,
        }
    }

    fn idx(self) -> usize {
        match self {
            Side::Group => 0,
            Side::Dual => 1,
        }
    }
}

/// Handle to an orbit of one side of a [`DualPair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orbit {
    pub side: Side,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub label: String,
    pub dim: Option<usize>,
    pub weighted_dynkin: Option<Vec<i64>>,
    pub special_flag: Option<bool>,
    pub partition: Option<Partition>,
}

impl OrbitRecord {
    pub fn labelled(label: impl Into<String>) -> Self {
        OrbitRecord {
            label: label.into(),
            dim: None,
            weighted_dynkin: None,
            special_flag: None,
            partition: None,
        }
    }
}

/// Canonical form of an orbit label: whitespace removed, Unicode tildes and
/// subscript digits replaced by ASCII.
pub fn normalize_label(label: &str) -> String {
    let mut out: Vec<char> = Vec::new();
    for c in label.chars() {
        match c {
            c if c.is_whitespace() => {}
            '\u{2dc}' | '\u{223c}' | '\u{ff5e}' | '\u{2053}' => out.push('~'),
            '\u{303}' => {
                // combining tilde decorates the preceding letter
                let prev = out.pop();
                out.push('~');
                out.extend(prev);
            }
            'Ã' => out.extend(['~', 'A']),
            'Õ' => out.extend(['~', 'O']),
            'Ñ' => out.extend(['~', 'N']),
            '\u{2080}'..='\u{2089}' => {
                out.push(char::from(b'0' + (c as u32 - 0x2080) as u8));
            }
            _ => out.push(c),
        }
    }
    out.into_iter().collect()
}

/// Reflexive transitive closure of a relation given by pairs `(lower, upper)`.
pub fn transitive_closure(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in pairs {
        leq[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if leq[i][k] {
                for j in 0..n {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
    }
    leq
}

/// Finite poset of nilpotent orbits under the closure order.
#[derive(Debug, Clone)]
pub struct OrbitPoset {
    name: String,
    root_system: Option<RootSystem>,
    records: Vec<OrbitRecord>,
    leq: Vec<Vec<bool>>,
    by_label: HashMap<String, usize>,
}

impl OrbitPoset {
    /// Builds a poset from covering pairs of labels `(lower, upper)`.
    pub fn from_covers(
        name: impl Into<String>,
        root_system: Option<RootSystem>,
        records: Vec<OrbitRecord>,
        covers: &[(String, String)],
    ) -> Result<Self, OrbitError> {
        let name = name.into();
        let index = label_index(&records)?;
        let mut pairs = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            let find = |l: &String| {
                index.get(l).copied().ok_or_else(|| OrbitError::UnknownLabel {
                    group: name.clone(),
                    label: l.clone(),
                })
            };
            pairs.push((find(a)?, find(b)?));
        }
        let leq = transitive_closure(records.len(), &pairs);
        Self::from_relation(name, root_system, records, leq)
    }

    /// Builds a poset from a full reflexive transitive relation `leq[i][j]`.
    pub fn from_relation(
        name: impl Into<String>,
        root_system: Option<RootSystem>,
        records: Vec<OrbitRecord>,
        leq: Vec<Vec<bool>>,
    ) -> Result<Self, OrbitError> {
        let name = name.into();
        label_index(&records)?;
        let n = records.len();
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(OrbitError::NotAntisymmetric(
                        records[i].label.clone(),
                        records[j].label.clone(),
                    ));
                }
            }
        }
        // canonical order: by longest chain below, then label
        let mut memo = vec![None; n];
        let height: Vec<usize> = (0..n).map(|i| chain_height(i, &leq, &mut memo)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            (height[a], &records[a].label).cmp(&(height[b], &records[b].label))
        });
        let records: Vec<OrbitRecord> = order.iter().map(|&i| records[i].clone()).collect();
        let leq: Vec<Vec<bool>> = order
            .iter()
            .map(|&i| order.iter().map(|&j| leq[i][j]).collect())
            .collect();
        let by_label = records
            .iter()
            .enumerate()
            .map(|(i, r)| (r.label.clone(), i))
            .collect();
        let poset = OrbitPoset {
            name,
            root_system,
            records,
            leq,
            by_label,
        };
        poset.minimum().ok_or(OrbitError::NoExtremum("minimum"))?;
        poset.maximum().ok_or(OrbitError::NoExtremum("maximum"))?;
        Ok(poset)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn root_system(&self) -> Option<&RootSystem> {
        self.root_system.as_ref()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[OrbitRecord] {
        &self.records
    }

    pub fn record(&self, i: usize) -> &OrbitRecord {
        &self.records[i]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, OrbitError> {
        let key = normalize_label(label);
        let found = self.by_label.get(&key).copied().or_else(|| {
            // partition labels may be written with exponents, e.g. (2^2,1)
            let (body, deco) = match key.rfind(')') {
                Some(i) => key.split_at(i + 1),
                None => (key.as_str(), ""),
            };
            let p: Partition = body.parse().ok()?;
            self.by_label.get(&format!("{p}{deco}")).copied()
        });
        found
            .ok_or_else(|| OrbitError::UnknownLabel {
                group: self.name.clone(),
                label: label.to_string(),
            })
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| self.leq[i][j]))
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| self.leq[j][i]))
    }

    /// Pairs `(lower, upper)` with nothing strictly between them.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b
                    && self.leq[a][b]
                    && !(0..n).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b])
                {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

fn label_index(records: &[OrbitRecord]) -> Result<HashMap<String, usize>, OrbitError> {
    let mut index = HashMap::new();
    for (i, r) in records.iter().enumerate() {
        if index.insert(r.label.clone(), i).is_some() {
            return Err(OrbitError::DuplicateLabel(r.label.clone()));
        }
    }
    Ok(index)
}

fn chain_height(i: usize, leq: &[Vec<bool>], memo: &mut [Option<usize>]) -> usize {
    if let Some(h) = memo[i] {
        return h;
    }
    let mut best = 0;
    for j in 0..leq.len() {
        if j != i && leq[j][i] {
            best = best.max(chain_height(j, leq, memo) + 1);
        }
    }
    memo[i] = Some(best);
    best
}

/// The orbit posets of a group `G` and its dual `G^vee`, with the BVLS
/// duality maps in both directions.
#[derive(Debug, Clone)]
pub struct DualPair {
    posets: [OrbitPoset; 2],
    d: [Vec<usize>; 2],
}

impl DualPair {
    /// `d_group` maps orbits of `group` to orbits of `dual`, `d_dual` the reverse.
    pub fn new(
        group: OrbitPoset,
        dual: OrbitPoset,
        d_group: Vec<usize>,
        d_dual: Vec<usize>,
    ) -> Result<Self, OrbitError> {
        if d_group.len() != group.len() || d_group.iter().any(|&j| j >= dual.len()) {
            return Err(OrbitError::BadDual(format!("map out of {} is not total", group.name)));
        }
        if d_dual.len() != dual.len() || d_dual.iter().any(|&j| j >= group.len()) {
            return Err(OrbitError::BadDual(format!("map out of {} is not total", dual.name)));
        }
        Ok(DualPair {
            posets: [group, dual],
            d: [d_group, d_dual],
        })
    }

    /// Pair for a group isomorphic to its dual, with one table serving both directions.
    pub fn self_dual(poset: OrbitPoset, d: Vec<usize>) -> Result<Self, OrbitError> {
        Self::new(poset.clone(), poset, d.clone(), d)
    }

    /// Classical group of the given family and rank, with its dual
    /// (`B_n` and `C_n` are exchanged).
    pub fn classical(kind: FamilyKind, rank: usize) -> Result<Self, OrbitError> {
        let dual_kind = match kind {
            FamilyKind::B => FamilyKind::C,
            FamilyKind::C => FamilyKind::B,
            k => k,
        };
        let group = classical_poset(kind, rank)?;
        let dual = classical_poset(dual_kind, rank)?;
        let d_group = classical_d(&group, kind, &dual, dual_kind, rank)?;
        let d_dual = classical_d(&dual, dual_kind, &group, kind, rank)?;
        Self::new(group, dual, d_group, d_dual)
    }

    pub fn poset(&self, side: Side) -> &OrbitPoset {
        &self.posets[side.idx()]
    }

    pub fn orbits(&self, side: Side) -> impl Iterator<Item = Orbit> + '_ {
        (0..self.poset(side).len()).map(move |index| Orbit { side, index })
    }

    pub fn find(&self, side: Side, label: &str) -> Result<Orbit, OrbitError> {
        Ok(Orbit {
            side,
            index: self.poset(side).index_of(label)?,
        })
    }

    pub fn record(&self, o: Orbit) -> &OrbitRecord {
        self.poset(o.side).record(o.index)
    }

    pub fn label(&self, o: Orbit) -> &str {
        &self.record(o).label
    }

    pub fn weighted_dynkin(&self, o: Orbit) -> Option<Coweight> {
        self.record(o).weighted_dynkin.as_deref().map(Coweight::integral)
    }

    pub fn zero(&self, side: Side) -> Orbit {
        let index = self.poset(side).minimum().expect("validated poset");
        Orbit { side, index }
    }

    pub fn regular(&self, side: Side) -> Orbit {
        let index = self.poset(side).maximum().expect("validated poset");
        Orbit { side, index }
    }

    pub fn closure_leq(&self, a: Orbit, b: Orbit) -> Result<bool, OrbitError> {
        if a.side != b.side {
            return Err(OrbitError::GroupMismatch {
                expected: self.poset(a.side).name.clone(),
                found: self.poset(b.side).name.clone(),
            });
        }
        Ok(self.poset(a.side).leq(a.index, b.index))
    }

    pub fn bvls_dual(&self, a: Orbit) -> Orbit {
        Orbit {
            side: a.side.other(),
            index: self.d[a.side.idx()][a.index],
        }
    }

    pub fn is_special(&self, a: Orbit) -> bool {
        self.bvls_dual(self.bvls_dual(a)) == a
    }

    pub fn specials(&self, side: Side) -> Vec<Orbit> {
        self.orbits(side).filter(|&o| self.is_special(o)).collect()
    }

    /// The smallest special orbit above `a`.
    pub fn special_closure(&self, a: Orbit) -> Result<Orbit, OrbitError> {
        let poset = self.poset(a.side);
        let above: Vec<Orbit> = self
            .specials(a.side)
            .into_iter()
            .filter(|s| poset.leq(a.index, s.index))
            .collect();
        above
            .iter()
            .copied()
            .find(|s| above.iter().all(|t| poset.leq(s.index, t.index)))
            .ok_or_else(|| OrbitError::NonUniqueSpecialClosure(self.label(a).to_string()))
    }

    /// Orbits sharing the special closure of `a`, in canonical order.
    pub fn special_piece_of(&self, a: Orbit) -> Result<Vec<Orbit>, OrbitError> {
        let target = self.special_closure(a)?;
        let mut piece = Vec::new();
        for b in self.orbits(a.side) {
            if self.special_closure(b)? == target {
                piece.push(b);
            }
        }
        Ok(piece)
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Group => write!(f, "group"),
            Side::Dual => write!(f, "dual"),
        }
    }
}

fn family_name(kind: FamilyKind, rank: usize) -> String {
    format!("{kind:?}{rank}")
}

fn classical_poset(kind: FamilyKind, rank: usize) -> Result<OrbitPoset, OrbitError> {
    let family = PartitionFamily::for_rank(kind, rank);
    let mut records = Vec::new();
    for p in family.enumerate() {
        if kind == FamilyKind::D && p.is_very_even() {
            for deco in ["I", "II"] {
                let mut r = OrbitRecord::labelled(format!("{p}{deco}"));
                r.partition = Some(p.clone());
                records.push(r);
            }
        } else {
            let mut r = OrbitRecord::labelled(p.to_string());
            r.partition = Some(p);
            records.push(r);
        }
    }
    let n = records.len();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (p, q) = (
                records[i].partition.as_ref().expect("classical record"),
                records[j].partition.as_ref().expect("classical record"),
            );
            leq[i][j] = if p == q { i == j } else { q.dominates(p)? };
        }
    }
    let rt = match kind {
        FamilyKind::A => RootType::A,
        FamilyKind::B => RootType::B,
        FamilyKind::C => RootType::C,
        FamilyKind::D => RootType::D,
    };
    let rs = RootSystem::new(rt, rank).ok();
    OrbitPoset::from_relation(family_name(kind, rank), rs, records, leq)
}

fn decoration(label: &str) -> Option<&'static str> {
    if label.ends_with("II") {
        Some("II")
    } else if label.ends_with('I') {
        Some("I")
    } else {
        None
    }
}

fn classical_d(
    from: &OrbitPoset,
    kind: FamilyKind,
    to: &OrbitPoset,
    to_kind: FamilyKind,
    rank: usize,
) -> Result<Vec<usize>, OrbitError> {
    let target = PartitionFamily::for_rank(to_kind, rank);
    let mut out = Vec::with_capacity(from.len());
    for r in from.records() {
        let p = r.partition.as_ref().expect("classical record");
        let t = p.transpose();
        let adjusted = match (kind, to_kind) {
            (FamilyKind::B, FamilyKind::C) => t.remove_box_last(),
            (FamilyKind::C, FamilyKind::B) => t.add_box_first(),
            _ => t,
        };
        let image = target.collapse(&adjusted)?;
        let label = if to_kind == FamilyKind::D && image.is_very_even() {
            format!("{image}{}", decoration(&r.label).unwrap_or("I"))
        } else {
            image.to_string()
        };
        out.push(to.index_of(&label)?);
    }
    Ok(out)
}

/// All partitions of `n` valid for the family, as used by oracles.
pub fn classical_partitions(kind: FamilyKind, rank: usize) -> Vec<Partition> {
    let family = PartitionFamily::for_rank(kind, rank);
    all_partitions(family.size())
        .into_iter()
        .filter(|p| family.is_valid(p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_label("Ã1+A2"), "~A1+A2");
        assert_eq!(normalize_label("A1 + A\u{303}2"), "A1+~A2");
        assert_eq!(normalize_label("F4(a₃)"), "F4(a3)");
        assert_eq!(normalize_label("\u{2dc}A1"), "~A1");
    }

    #[test]
    fn type_a_duality() {
        let pair = DualPair::classical(FamilyKind::A, 2).unwrap();
        let o = pair.find(Side::Group, "(2,1)").unwrap();
        let d = pair.bvls_dual(o);
        assert_eq!(d.side, Side::Dual);
        assert_eq!(pair.label(d), "(2,1)");
        assert!(pair.is_special(o));
    }

    #[test]
    fn b2_c2_duality() {
        let pair = DualPair::classical(FamilyKind::B, 2).unwrap();
        let d = |l: &str| {
            let o = pair.find(Side::Group, l).unwrap();
            pair.label(pair.bvls_dual(o)).to_string()
        };
        assert_eq!(d("(3,1,1)"), "(2,2)");
        assert_eq!(d("(2,2,1)"), "(2,2)");
        assert_eq!(d("(1^5)"), "(4)");
        assert_eq!(d("(5)"), "(1,1,1,1)");
        let specials: Vec<&str> = pair
            .specials(Side::Group)
            .into_iter()
            .map(|o| pair.label(o))
            .collect();
        assert_eq!(specials, vec!["(1,1,1,1,1)", "(3,1,1)", "(5)"]);
        let dual_non_special: Vec<&str> = pair
            .orbits(Side::Dual)
            .filter(|&o| !pair.is_special(o))
            .map(|o| pair.label(o))
            .collect();
        assert_eq!(dual_non_special, vec!["(2,1,1)"]);
    }

    #[test]
    fn d4_very_even() {
        let pair = DualPair::classical(FamilyKind::D, 4).unwrap();
        assert_eq!(pair.poset(Side::Group).len(), 12);
        let a = pair.find(Side::Group, "(4,4)I").unwrap();
        let b = pair.find(Side::Group, "(4,4)II").unwrap();
        assert!(!pair.closure_leq(a, b).unwrap());
        assert!(!pair.closure_leq(b, a).unwrap());
        assert_eq!(pair.label(pair.bvls_dual(a)), "(2,2,2,2)I");
        assert_eq!(pair.label(pair.bvls_dual(b)), "(2,2,2,2)II");
        let o = pair.find(Side::Group, "(5,1,1,1)").unwrap();
        assert_eq!(pair.label(pair.bvls_dual(o)), "(3,1,1,1,1,1)");
    }

    #[test]
    fn special_piece_of_minimum() {
        let pair = DualPair::classical(FamilyKind::C, 3).unwrap();
        let zero = pair.zero(Side::Group);
        assert_eq!(pair.special_piece_of(zero).unwrap(), vec![zero]);
        assert_eq!(pair.special_closure(zero).unwrap(), zero);
    }

    #[test]
    fn group_mismatch() {
        let pair = DualPair::classical(FamilyKind::B, 2).unwrap();
        let a = pair.zero(Side::Group);
        let b = pair.zero(Side::Dual);
        assert!(matches!(
            pair.closure_leq(a, b),
            Err(OrbitError::GroupMismatch { .. })
        ));
        assert!(matches!(
            pair.find(Side::Group, "(9)"),
            Err(OrbitError::UnknownLabel { .. })
        ));
    }

    #[test]
    fn poset_rejects_cycles() {
        let recs = vec![OrbitRecord::labelled("a"), OrbitRecord::labelled("b")];
        let covers = vec![
            ("a".to_string(), "b".to_string()),
            ("b".to_string(), "a".to_string()),
        ];
        assert!(matches!(
            OrbitPoset::from_covers("X", None, recs, &covers),
            Err(OrbitError::NotAntisymmetric(..))
        ));
    }
}
