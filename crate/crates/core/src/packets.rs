//! Parameters at real infinitesimal character `q^{h/2}`, wavefront-set
//! invariants, basic Arthur packets and weak Arthur packets.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::duality::{BarClass, BarDuality, DualityError};
use crate::orbits::{DualPair, Orbit, OrbitError, Side};
use crate::rootdata::{Coweight, RootDataError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PacketError {
    #[error("unknown parameter {0:?}")]
    UnknownParameter(String),
    #[error("duplicate parameter id {0:?}")]
    DuplicateId(String),
    #[error("parameter {from} links to missing AZ partner {to}")]
    DanglingLink { from: String, to: String },
    #[error("AZ links are not an involution: {0} -> {1} -> {2}")]
    NotInvolution(String, String, String),
    #[error("parameter {id} has infinitesimal-character orbit {found}, set has {expected}")]
    IcMismatch {
        id: String,
        expected: String,
        found: String,
    },
    #[error("parameter {id}: nilpotent orbit {n_orbit} is not below {ic_orbit}")]
    NotBelowIc {
        id: String,
        n_orbit: String,
        ic_orbit: String,
    },
    #[error("parameter orbits must lie in the dual group")]
    WrongSide,
    #[error("{which} characterizations disagree: {first:?} vs {second:?}")]
    Inconsistent {
        which: &'static str,
        first: Vec<String>,
        second: Vec<String>,
    },
    #[error("orbit {0} has no weighted Dynkin diagram")]
    MissingWeightedDynkin(String),
    #[error("no root system available for {0}")]
    MissingRootSystem(String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// Orders ids like `X2 < X10` by splitting off a trailing number.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u64>) {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        (&s[..cut], s[cut..].parse().ok())
    }
    split(a).cmp(&split(b)).then_with(|| a.cmp(b))
}

/// A Deligne-Langlands-Lusztig parameter `(s, n, rho)` with `s = q^{h/2}`
/// for the neutral element `h` of `ic_orbit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub id: String,
    pub ic_orbit: Orbit,
    pub n_orbit: Orbit,
    pub rho: String,
    pub iwahori: bool,
    pub unitary: Option<bool>,
    pub az_partner: String,
}

/// Parameters sharing one infinitesimal character, closed under AZ duality.
#[derive(Debug, Clone)]
pub struct ParameterSet {
    ic_orbit: Orbit,
    params: Vec<Parameter>,
    by_id: HashMap<String, usize>,
}

impl ParameterSet {
    pub fn new(pair: &DualPair, ic_orbit: Orbit, mut params: Vec<Parameter>) -> Result<Self, PacketError> {
        if ic_orbit.side != Side::Dual {
            return Err(PacketError::WrongSide);
        }
        params.sort_by(|a, b| natural_cmp(&a.id, &b.id));
        let mut by_id = HashMap::new();
        for (i, p) in params.iter().enumerate() {
            if by_id.insert(p.id.clone(), i).is_some() {
                return Err(PacketError::DuplicateId(p.id.clone()));
            }
        }
        for p in &params {
            if p.n_orbit.side != Side::Dual || p.ic_orbit.side != Side::Dual {
                return Err(PacketError::WrongSide);
            }
            if p.ic_orbit != ic_orbit {
                return Err(PacketError::IcMismatch {
                    id: p.id.clone(),
                    expected: pair.label(ic_orbit).to_string(),
                    found: pair.label(p.ic_orbit).to_string(),
                });
            }
            if !pair.closure_leq(p.n_orbit, ic_orbit)? {
                return Err(PacketError::NotBelowIc {
                    id: p.id.clone(),
                    n_orbit: pair.label(p.n_orbit).to_string(),
                    ic_orbit: pair.label(ic_orbit).to_string(),
                });
            }
            let Some(&j) = by_id.get(&p.az_partner) else {
                return Err(PacketError::DanglingLink {
                    from: p.id.clone(),
                    to: p.az_partner.clone(),
                });
            };
            let back = &params[j].az_partner;
            if back != &p.id {
                return Err(PacketError::NotInvolution(
                    p.id.clone(),
                    p.az_partner.clone(),
                    back.clone(),
                ));
            }
        }
        Ok(ParameterSet {
            ic_orbit,
            params,
            by_id,
        })
    }

    pub fn ic_orbit(&self) -> Orbit {
        self.ic_orbit
    }

    /// Parameters sorted by id.
    pub fn params(&self) -> &[Parameter] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn get(&self, id: &str) -> Result<&Parameter, PacketError> {
        self.by_id
            .get(id.trim())
            .map(|&i| &self.params[i])
            .ok_or_else(|| PacketError::UnknownParameter(id.to_string()))
    }
}

/// One row of a Jiang check report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JiangEntry {
    pub id: String,
    pub geometric_wf: String,
    pub equals_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JiangReport {
    /// `d(O^vee)`.
    pub bound: String,
    pub members: Vec<JiangEntry>,
    /// Parameters violating `D(O^vee, 1) <= CUWF(X)`.
    pub lower_bound_failures: Vec<String>,
    pub pass: bool,
}

/// Packet computations for one parameter set over a dual pair.
#[derive(Debug, Clone, Copy)]
pub struct Packets<'a> {
    duality: &'a BarDuality,
    set: &'a ParameterSet,
}

impl<'a> Packets<'a> {
    pub fn new(duality: &'a BarDuality, set: &'a ParameterSet) -> Self {
        Packets { duality, set }
    }

    pub fn set(&self) -> &'a ParameterSet {
        self.set
    }

    pub fn is_tempered(&self, x: &Parameter) -> bool {
        x.n_orbit == x.ic_orbit
    }

    pub fn az_dual(&self, x: &Parameter) -> Result<&'a Parameter, PacketError> {
        self.set.get(&x.az_partner).map_err(|_| PacketError::DanglingLink {
            from: x.id.clone(),
            to: x.az_partner.clone(),
        })
    }

    /// `D(n-orbit of AZ(x), 1)`.
    pub fn cuwf(&self, x: &Parameter) -> Result<BarClass, PacketError> {
        let partner = self.az_dual(x)?;
        Ok(self.duality.achar_dual(&BarClass::trivial(partner.n_orbit))?)
    }

    pub fn geometric_wf(&self, x: &Parameter) -> Result<Orbit, PacketError> {
        Ok(self.cuwf(x)?.orbit)
    }

    /// `D(O^vee, 1)`.
    pub fn cuwf_bound(&self) -> Result<BarClass, PacketError> {
        Ok(self.duality.achar_dual(&BarClass::trivial(self.set.ic_orbit))?)
    }

    fn ids(v: &[&Parameter]) -> Vec<String> {
        v.iter().map(|p| p.id.clone()).collect()
    }

    /// Parameters whose CUWF lies below `D(O^vee, 1)`, checked against the
    /// set of parameters whose AZ dual is tempered.
    pub fn arthur_packet(&self) -> Result<Vec<&'a Parameter>, PacketError> {
        let bound = self.duality.embed(&self.cuwf_bound()?)?;
        let mut by_wf = Vec::new();
        let mut by_az = Vec::new();
        for x in self.set.params() {
            let c = self.duality.embed(&self.cuwf(x)?)?;
            if self.duality.pair_leq(&c, &bound)? {
                by_wf.push(x);
            }
            if self.is_tempered(self.az_dual(x)?) {
                by_az.push(x);
            }
        }
        if by_wf != by_az {
            return Err(PacketError::Inconsistent {
                which: "Arthur packet",
                first: Self::ids(&by_wf),
                second: Self::ids(&by_az),
            });
        }
        Ok(by_wf)
    }

    /// Parameters whose geometric wavefront set lies below `d(O^vee)`,
    /// checked against the set whose AZ dual has nilpotent orbit in the
    /// special piece of `O^vee`.
    pub fn weak_packet(&self) -> Result<Vec<&'a Parameter>, PacketError> {
        let pair = self.duality.pair();
        let bound = pair.bvls_dual(self.set.ic_orbit);
        let piece: BTreeSet<Orbit> = self.special_piece()?.into_iter().collect();
        let mut by_wf = Vec::new();
        let mut by_piece = Vec::new();
        for x in self.set.params() {
            if pair.closure_leq(self.geometric_wf(x)?, bound)? {
                by_wf.push(x);
            }
            if piece.contains(&self.az_dual(x)?.n_orbit) {
                by_piece.push(x);
            }
        }
        if by_wf != by_piece {
            return Err(PacketError::Inconsistent {
                which: "weak packet",
                first: Self::ids(&by_wf),
                second: Self::ids(&by_piece),
            });
        }
        Ok(by_wf)
    }

    /// The special piece containing `O^vee`.
    pub fn special_piece(&self) -> Result<Vec<Orbit>, PacketError> {
        Ok(self.duality.pair().special_piece_of(self.set.ic_orbit)?)
    }

    pub fn check_jiang(&self) -> Result<JiangReport, PacketError> {
        let pair = self.duality.pair();
        let bound = pair.bvls_dual(self.set.ic_orbit);
        let mut members = Vec::new();
        for x in self.arthur_packet()? {
            let wf = self.geometric_wf(x)?;
            members.push(JiangEntry {
                id: x.id.clone(),
                geometric_wf: pair.label(wf).to_string(),
                equals_bound: wf == bound,
            });
        }
        let lower = self.duality.embed(&self.cuwf_bound()?)?;
        let mut lower_bound_failures = Vec::new();
        for x in self.set.params() {
            let c = self.duality.embed(&self.cuwf(x)?)?;
            if !self.duality.pair_leq(&lower, &c)? {
                lower_bound_failures.push(x.id.clone());
            }
        }
        let pass = members.iter().all(|m| m.equals_bound) && lower_bound_failures.is_empty();
        Ok(JiangReport {
            bound: pair.label(bound).to_string(),
            members,
            lower_bound_failures,
            pass,
        })
    }
}

/// Whether `(h_art + h_lan)/2` is Weyl-conjugate to `h/2` for the neutral
/// element `h` of `target`.
pub fn check_infl_sum(
    pair: &DualPair,
    h_art: &Coweight,
    h_lan: &Coweight,
    target: Orbit,
) -> Result<bool, PacketError> {
    let label = pair.label(target).to_string();
    let h = pair
        .weighted_dynkin(target)
        .ok_or_else(|| PacketError::MissingWeightedDynkin(label.clone()))?;
    let rs = pair
        .poset(target.side)
        .root_system()
        .ok_or(PacketError::MissingRootSystem(label))?;
    // conjugacy is invariant under scaling, so compare h_art + h_lan with h
    let sum = h_art.add(h_lan)?;
    Ok(rs.weyl_conjugate(&sum, &h)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut ids = vec!["X10", "X2", "X1", "X20", "Y1"];
        ids.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(ids, vec!["X1", "X2", "X10", "X20", "Y1"]);
    }
}
