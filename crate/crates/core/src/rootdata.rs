//! Finite root systems, coweights and the Weyl group action on coweights.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("coweight has length {found}, root system has rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported root system {0}")]
    Unsupported(String),
    #[error("Cartan matrix is malformed: {0}")]
    BadCartan(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
    F4,
    G2,
}

/// A reduced irreducible root system given by its Cartan matrix,
/// with entries `a[i][j] = <alpha_i^vee, alpha_j>` in Bourbaki numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    kind: RootType,
    rank: usize,
    cartan: Vec<Vec<i64>>,
}

/// A coweight in fundamental-coweight coordinates, stored doubled so that
/// half-integral coweights such as `h/2` stay exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coweight {
    doubled: Vec<i64>,
}

impl Coweight {
    /// Coweight with the given integral coordinates.
    pub fn integral(coords: &[i64]) -> Self {
        Coweight {
            doubled: coords.iter().map(|c| 2 * c).collect(),
        }
    }

    /// Coweight whose coordinates are `doubled[i] / 2`.
    pub fn from_doubled(doubled: Vec<i64>) -> Self {
        Coweight { doubled }
    }

    pub fn zero(rank: usize) -> Self {
        Coweight {
            doubled: vec![0; rank],
        }
    }

    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    pub fn len(&self) -> usize {
        self.doubled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doubled.is_empty()
    }

    /// Integral coordinates, if every coordinate is an integer.
    pub fn to_integral(&self) -> Option<Vec<i64>> {
        self.doubled
            .iter()
            .map(|c| if c % 2 == 0 { Some(c / 2) } else { None })
            .collect()
    }

    pub fn add(&self, other: &Coweight) -> Result<Coweight, RootDataError> {
        if self.len() != other.len() {
            return Err(RootDataError::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Coweight {
            doubled: self
                .doubled
                .iter()
                .zip(&other.doubled)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .doubled
            .iter()
            .map(|c| {
                if c % 2 == 0 {
                    (c / 2).to_string()
                } else {
                    format!("{c}/2")
                }
            })
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl RootSystem {
    pub fn new(kind: RootType, rank: usize) -> Result<Self, RootDataError> {
        let bad = || RootDataError::Unsupported(format!("{kind:?}{rank}"));
        let min_rank = match kind {
            RootType::A => 1,
            RootType::B => 2,
            RootType::C => 2,
            RootType::D => 3,
            RootType::F4 => 4,
            RootType::G2 => 2,
        };
        if rank < min_rank {
            return Err(bad());
        }
        if matches!(kind, RootType::F4) && rank != 4 || matches!(kind, RootType::G2) && rank != 2 {
            return Err(bad());
        }
        let n = rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        match kind {
            RootType::A | RootType::B | RootType::C => {
                for i in 0..n - 1 {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
                if kind == RootType::B {
                    a[n - 1][n - 2] = -2;
                } else if kind == RootType::C {
                    a[n - 2][n - 1] = -2;
                }
            }
            RootType::D => {
                for i in 0..n - 2 {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
                a[n - 3][n - 1] = -1;
                a[n - 1][n - 3] = -1;
            }
            RootType::F4 => {
                a[0][1] = -1;
                a[1][0] = -1;
                a[1][2] = -1;
                a[2][1] = -2;
                a[2][3] = -1;
                a[3][2] = -1;
            }
            RootType::G2 => {
                a[0][1] = -3;
                a[1][0] = -1;
            }
        }
        Self::from_cartan(kind, a)
    }

    /// Builds a root system from an explicit Cartan matrix after checking
    /// the diagonal, sign and invertibility conditions.
    pub fn from_cartan(kind: RootType, cartan: Vec<Vec<i64>>) -> Result<Self, RootDataError> {
        let n = cartan.len();
        if n == 0 || cartan.iter().any(|r| r.len() != n) {
            return Err(RootDataError::BadCartan("not a square matrix".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let v = cartan[i][j];
                if i == j && v != 2 {
                    return Err(RootDataError::BadCartan(format!("diagonal entry {i} is {v}")));
                }
                if i != j && v > 0 {
                    return Err(RootDataError::BadCartan(format!("entry ({i},{j}) is positive")));
                }
                if i != j && (v == 0) != (cartan[j][i] == 0) {
                    return Err(RootDataError::BadCartan(format!("entries ({i},{j}) and ({j},{i}) disagree on zero")));
                }
            }
        }
        if determinant(&cartan) == 0 {
            return Err(RootDataError::BadCartan("singular".into()));
        }
        Ok(RootSystem {
            kind,
            rank: n,
            cartan,
        })
    }

    pub fn kind(&self) -> RootType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    fn check(&self, w: &Coweight) -> Result<(), RootDataError> {
        if w.len() != self.rank {
            return Err(RootDataError::DimensionMismatch {
                expected: self.rank,
                found: w.len(),
            });
        }
        Ok(())
    }

    /// Applies the simple reflection `s_i`.
    pub fn reflect(&self, w: &Coweight, i: usize) -> Result<Coweight, RootDataError> {
        self.check(w)?;
        let li = w.doubled[i];
        let doubled = (0..self.rank)
            .map(|j| w.doubled[j] - li * self.cartan[i][j])
            .collect();
        Ok(Coweight { doubled })
    }

    pub fn is_dominant(&self, w: &Coweight) -> Result<bool, RootDataError> {
        self.check(w)?;
        Ok(w.doubled.iter().all(|&c| c >= 0))
    }

    /// The dominant element of the Weyl orbit of `w`.
    pub fn dominant_rep(&self, w: &Coweight) -> Result<Coweight, RootDataError> {
        self.check(w)?;
        let mut cur = w.clone();
        while let Some(i) = cur.doubled.iter().position(|&c| c < 0) {
            cur = self.reflect(&cur, i)?;
        }
        Ok(cur)
    }

    pub fn weyl_conjugate(&self, a: &Coweight, b: &Coweight) -> Result<bool, RootDataError> {
        Ok(self.dominant_rep(a)? == self.dominant_rep(b)?)
    }

    /// All elements of the Weyl orbit of `w`, sorted.
    pub fn weyl_orbit(&self, w: &Coweight) -> Result<Vec<Coweight>, RootDataError> {
        self.check(w)?;
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(w.clone());
        queue.push_back(w.clone());
        while let Some(cur) = queue.pop_front() {
            for i in 0..self.rank {
                let next = self.reflect(&cur, i)?;
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Positive roots in simple-root coordinates, sorted by height.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut roots: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut known: BTreeSet<Vec<i64>> = roots.iter().cloned().collect();
        let mut start = 0;
        while start < roots.len() {
            let end = roots.len();
            for k in start..end {
                let beta = roots[k].clone();
                for i in 0..n {
                    // <beta, alpha_i^vee>
                    let pairing: i64 = (0..n).map(|j| beta[j] * self.cartan[i][j]).sum();
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if known.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    if p - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if known.insert(up.clone()) {
                            roots.push(up);
                        }
                    }
                }
            }
            start = end;
        }
        roots.sort_by_key(|r| (r.iter().sum::<i64>(), std::cmp::Reverse(r.clone())));
        roots
    }

    /// Dimension of the nilpotent orbit with the given weighted Dynkin
    /// diagram: `dim g - dim g_0 - dim g_1`.
    pub fn orbit_dimension(&self, weights: &[i64]) -> Result<usize, RootDataError> {
        if weights.len() != self.rank {
            return Err(RootDataError::DimensionMismatch {
                expected: self.rank,
                found: weights.len(),
            });
        }
        let mut n0 = 0;
        let mut n1 = 0;
        let roots = self.positive_roots();
        for r in &roots {
            let h: i64 = r.iter().zip(weights).map(|(c, w)| c * w).sum();
            if h == 0 {
                n0 += 1;
            } else if h == 1 {
                n1 += 1;
            }
        }
        Ok(2 * roots.len() - 2 * n0 - n1)
    }
}

impl FromStr for RootSystem {
    type Err = RootDataError;

    /// Parses labels such as `A3`, `B2`, `D4`, `F4`, `G2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RootDataError::Unsupported(s.to_string());
        let (head, tail) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
        let rank: usize = tail.parse().map_err(|_| bad())?;
        let kind = match head {
            "A" => RootType::A,
            "B" => RootType::B,
            "C" => RootType::C,
            "D" => RootType::D,
            "F" if rank == 4 => RootType::F4,
            "G" if rank == 2 => RootType::G2,
            _ => return Err(bad()),
        };
        RootSystem::new(kind, rank)
    }
}

fn determinant(m: &[Vec<i64>]) -> i128 {
    // Bareiss fraction-free elimination
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}
