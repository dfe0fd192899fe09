//! Orbits decorated by conjugacy classes of Lusztig's canonical quotient,
//! Sommers duality `d_S` and Achar's duality `D`.

use std::collections::HashMap;

use thiserror::Error;

use crate::orbits::{DualPair, Orbit, OrbitError, Side};
use crate::partitions::FamilyKind;

pub const TRIVIAL_CLASS: &str = "1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualityError {
    #[error("orbit {orbit} has no class {class:?}")]
    UnknownClass { orbit: String, class: String },
    #[error("orbit {0} has no trivial class \"1\"")]
    MissingTrivialClass(String),
    #[error("d_S table has no entry for ({orbit}, {class})")]
    MissingEntry { orbit: String, class: String },
    #[error("d_S table entry for ({orbit}, {class}) is not valid: {reason}")]
    BadEntry {
        orbit: String,
        class: String,
        reason: String,
    },
    #[error("special elements above ({orbit}, {class}) have no unique minimum")]
    NonUniqueCover { orbit: String, class: String },
    #[error("flip of ({orbit}, {class}) is not in the image of the dual embedding")]
    FlipNotInImage { orbit: String, class: String },
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// Canonical form of a class label: all whitespace removed.
pub fn normalize_class(label: &str) -> String {
    label.chars().filter(|c| !c.is_whitespace()).collect()
}

/// An orbit together with a conjugacy class of its canonical quotient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarClass {
    pub orbit: Orbit,
    pub class: String,
}

impl BarClass {
    pub fn trivial(orbit: Orbit) -> Self {
        BarClass {
            orbit,
            class: TRIVIAL_CLASS.to_string(),
        }
    }
}

/// A pair of orbits, one in each group; `o` lies on the side of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrbitPair {
    pub o: Orbit,
    pub o_dual: Orbit,
}

/// Sommers duality tables for both members of a dual pair.
#[derive(Debug, Clone)]
pub struct BarDuality {
    pair: DualPair,
    classes: [Vec<Vec<String>>; 2],
    d_s: [HashMap<(usize, String), usize>; 2],
}

fn idx(side: Side) -> usize {
    match side {
        Side::Group => 0,
        Side::Dual => 1,
    }
}

/// Raw `d_S` data for one side: per-orbit class lists and
/// `(orbit, class) -> dual orbit` entries, all by label.
#[derive(Debug, Clone, Default)]
pub struct SideTables {
    pub classes: Vec<(String, Vec<String>)>,
    pub d_s: Vec<(String, String, String)>,
}

impl BarDuality {
    /// Builds the duality from label tables, checking that every orbit has a
    /// class list containing `"1"`, that `d_S` is total, and that
    /// `d_S(O, 1)` agrees with the pair's `d`.
    pub fn new(pair: DualPair, group: &SideTables, dual: &SideTables) -> Result<Self, DualityError> {
        let (c0, m0) = Self::side_tables(&pair, Side::Group, group)?;
        let (c1, m1) = Self::side_tables(&pair, Side::Dual, dual)?;
        Ok(BarDuality {
            pair,
            classes: [c0, c1],
            d_s: [m0, m1],
        })
    }

    /// Duality for type `A_rank`, where every canonical quotient is trivial
    /// and `d_S = d` is transposition.
    pub fn type_a(rank: usize) -> Result<Self, DualityError> {
        let pair = DualPair::classical(FamilyKind::A, rank)?;
        Self::trivial_classes(pair)
    }

    /// Duality in which every orbit carries only the trivial class.
    pub fn trivial_classes(pair: DualPair) -> Result<Self, DualityError> {
        let tables = |side: Side| SideTables {
            classes: pair
                .orbits(side)
                .map(|o| (pair.label(o).to_string(), vec![TRIVIAL_CLASS.to_string()]))
                .collect(),
            d_s: pair
                .orbits(side)
                .map(|o| {
                    (
                        pair.label(o).to_string(),
                        TRIVIAL_CLASS.to_string(),
                        pair.label(pair.bvls_dual(o)).to_string(),
                    )
                })
                .collect(),
        };
        let (g, d) = (tables(Side::Group), tables(Side::Dual));
        Self::new(pair, &g, &d)
    }

    #[allow(clippy::type_complexity)]
    fn side_tables(
        pair: &DualPair,
        side: Side,
        t: &SideTables,
    ) -> Result<(Vec<Vec<String>>, HashMap<(usize, String), usize>), DualityError> {
        let n = pair.poset(side).len();
        let mut classes: Vec<Option<Vec<String>>> = vec![None; n];
        for (label, list) in &t.classes {
            let o = pair.find(side, label)?;
            let list: Vec<String> = list.iter().map(|c| normalize_class(c)).collect();
            if !list.iter().any(|c| c == TRIVIAL_CLASS) {
                return Err(DualityError::MissingTrivialClass(label.clone()));
            }
            classes[o.index] = Some(list);
        }
        let classes: Vec<Vec<String>> = classes
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| {
                    DualityError::MissingTrivialClass(pair.poset(side).record(i).label.clone())
                })
            })
            .collect::<Result<_, _>>()?;
        let mut map = HashMap::new();
        for (orbit, class, image) in &t.d_s {
            let o = pair.find(side, orbit)?;
            let class = normalize_class(class);
            if !classes[o.index].contains(&class) {
                return Err(DualityError::UnknownClass {
                    orbit: orbit.clone(),
                    class,
                });
            }
            let img = pair.find(side.other(), image)?;
            map.insert((o.index, class), img.index);
        }
        for (i, list) in classes.iter().enumerate() {
            for c in list {
                let key = (i, c.clone());
                let o = Orbit { side, index: i };
                let Some(&img) = map.get(&key) else {
                    return Err(DualityError::MissingEntry {
                        orbit: pair.label(o).to_string(),
                        class: c.clone(),
                    });
                };
                if c == TRIVIAL_CLASS && img != pair.bvls_dual(o).index {
                    return Err(DualityError::BadEntry {
                        orbit: pair.label(o).to_string(),
                        class: c.clone(),
                        reason: "d_S(O, 1) differs from d(O)".into(),
                    });
                }
            }
        }
        Ok((classes, map))
    }

    pub fn pair(&self) -> &DualPair {
        &self.pair
    }

    pub fn classes_of(&self, o: Orbit) -> &[String] {
        &self.classes[idx(o.side)][o.index]
    }

    /// Every element of `N_{o,c}` on the given side.
    pub fn bar_classes(&self, side: Side) -> Vec<BarClass> {
        self.pair
            .orbits(side)
            .flat_map(|o| {
                self.classes_of(o).iter().map(move |c| BarClass {
                    orbit: o,
                    class: c.clone(),
                })
            })
            .collect()
    }

    pub fn bar_class(&self, side: Side, orbit: &str, class: &str) -> Result<BarClass, DualityError> {
        let o = self.pair.find(side, orbit)?;
        let class = normalize_class(class);
        if !self.classes_of(o).contains(&class) {
            return Err(DualityError::UnknownClass {
                orbit: orbit.to_string(),
                class,
            });
        }
        Ok(BarClass { orbit: o, class })
    }

    pub fn display(&self, x: &BarClass) -> String {
        format!("({},{})", self.pair.label(x.orbit), x.class)
    }

    fn err_ctx(&self, x: &BarClass) -> (String, String) {
        (self.pair.label(x.orbit).to_string(), x.class.clone())
    }

    pub fn sommers_dual(&self, x: &BarClass) -> Result<Orbit, DualityError> {
        let side = x.orbit.side;
        match self.d_s[idx(side)].get(&(x.orbit.index, x.class.clone())) {
            Some(&index) => Ok(Orbit {
                side: side.other(),
                index,
            }),
            None => {
                let (orbit, class) = self.err_ctx(x);
                Err(DualityError::MissingEntry { orbit, class })
            }
        }
    }

    pub fn embed(&self, x: &BarClass) -> Result<OrbitPair, DualityError> {
        Ok(OrbitPair {
            o: x.orbit,
            o_dual: self.sommers_dual(x)?,
        })
    }

    /// `O_1 <= O_2` and `O_1' >= O_2'`.
    pub fn pair_leq(&self, p: &OrbitPair, q: &OrbitPair) -> Result<bool, DualityError> {
        Ok(self.pair.closure_leq(p.o, q.o)? && self.pair.closure_leq(q.o_dual, p.o_dual)?)
    }

    /// Order on `N_{o,c}` induced through the embedding.
    pub fn bar_leq(&self, x: &BarClass, y: &BarClass) -> Result<bool, DualityError> {
        self.pair_leq(&self.embed(x)?, &self.embed(y)?)
    }

    /// The element of the given side whose embedding is `p`, if any.
    fn preimage(&self, p: &OrbitPair) -> Result<Option<BarClass>, DualityError> {
        for c in self.classes_of(p.o) {
            let x = BarClass {
                orbit: p.o,
                class: c.clone(),
            };
            if self.sommers_dual(&x)? == p.o_dual {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    pub fn is_special_pair(&self, x: &BarClass) -> Result<bool, DualityError> {
        let p = self.embed(x)?;
        let flip = OrbitPair {
            o: p.o_dual,
            o_dual: p.o,
        };
        Ok(self.preimage(&flip)?.is_some())
    }

    /// The unique smallest special element above `x`.
    pub fn min_special_cover(&self, x: &BarClass) -> Result<BarClass, DualityError> {
        let mut above = Vec::new();
        for y in self.bar_classes(x.orbit.side) {
            if self.is_special_pair(&y)? && self.bar_leq(x, &y)? {
                above.push(y);
            }
        }
        for y in &above {
            let mut least = true;
            for z in &above {
                if !self.bar_leq(y, z)? {
                    least = false;
                    break;
                }
            }
            if least {
                return Ok(y.clone());
            }
        }
        let (orbit, class) = self.err_ctx(x);
        Err(DualityError::NonUniqueCover { orbit, class })
    }

    /// Achar's duality: flip the embedding of the minimal special cover and
    /// pull it back along the dual embedding.
    pub fn achar_dual(&self, x: &BarClass) -> Result<BarClass, DualityError> {
        let cover = self.min_special_cover(x)?;
        let p = self.embed(&cover)?;
        let flip = OrbitPair {
            o: p.o_dual,
            o_dual: p.o,
        };
        self.preimage(&flip)?.ok_or_else(|| {
            let (orbit, class) = self.err_ctx(&cover);
            DualityError::FlipNotInImage { orbit, class }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_a_is_transpose() {
        let dual = BarDuality::type_a(2).unwrap();
        let x = dual.bar_class(Side::Group, "(2,1)", "1").unwrap();
        let img = dual.sommers_dual(&x).unwrap();
        assert_eq!(dual.pair().label(img), "(2,1)");
        let zero = BarClass::trivial(dual.pair().zero(Side::Group));
        let d = dual.achar_dual(&zero).unwrap();
        assert_eq!(d.orbit, dual.pair().regular(Side::Dual));
        assert!(dual.is_special_pair(&zero).unwrap());
        assert_eq!(dual.min_special_cover(&zero).unwrap(), zero);
    }

    #[test]
    fn unknown_class_rejected() {
        let dual = BarDuality::type_a(3).unwrap();
        assert!(matches!(
            dual.bar_class(Side::Group, "(4)", "(12)"),
            Err(DualityError::UnknownClass { .. })
        ));
    }

    #[test]
    fn type_a_d_cubed() {
        for rank in 1..=5 {
            let dual = BarDuality::type_a(rank).unwrap();
            for x in dual.bar_classes(Side::Group) {
                let d1 = dual.achar_dual(&x).unwrap();
                let d3 = dual.achar_dual(&dual.achar_dual(&d1).unwrap()).unwrap();
                assert_eq!(d1, d3);
            }
        }
    }
}
