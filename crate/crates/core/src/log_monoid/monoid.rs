use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::snf::{hermite_basis, smith, solve_in_lattice, IntMatrix, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("monoid needs at least one generator")]
    NoGenerators,
    #[error("vector {vector:?} has length {len}, ambient rank is {rank}")]
    WrongLength {
        vector: Vec<i64>,
        len: usize,
        rank: usize,
    },
    #[error("no linear functional is positive on every generator; search would be unbounded")]
    NotPointed,
    #[error("operation needs a monoid embedded in Z^d (no relations)")]
    HasRelations,
    #[error("generator {generator:?} maps to {image:?}, which is not in the target monoid")]
    NotAHom {
        generator: Vec<i64>,
        image: Vec<i64>,
    },
    #[error("characteristic {0} is neither 0 nor prime")]
    BadCharacteristic(u64),
    #[error("cannot parse monoid literal: {0}")]
    Parse(String),
}

/// Submonoid of `Z^d / R` generated by finitely many vectors. `R` is empty
/// for the embedded monoids used everywhere except torsion examples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinGenMonoid {
    rank: usize,
    generators: Vec<Vec<i64>>,
    relations: Vec<Vec<i64>>,
}

/// A finitely generated abelian group `Z^rank + sum Z/t_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroupData {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl AbelianGroupData {
    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn torsion_order(&self) -> i64 {
        self.torsion.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    fn from_smith(s: &SmithForm, cols: usize) -> Self {
        Self {
            rank: cols - s.rank(),
            torsion: s.torsion(),
        }
    }
}

impl fmt::Display for AbelianGroupData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The group completion of a monoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Groupification {
    pub group: AbelianGroupData,
    /// Hermite basis of `Q^gp` inside `Z^d`; empty for quotient models.
    pub basis: IntMatrix,
    /// `Z^d / Q^gp` for embedded monoids.
    pub cokernel_in_ambient: Option<AbelianGroupData>,
    /// Smith form of the generator matrix (embedded) or of the relation
    /// module among generators (quotient model).
    pub certificate: SmithForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Multiplicity of each generator in a decomposition.
    pub witness: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    pub saturated: bool,
    /// `v` not in `Q` with `m v` in `Q`.
    pub counterexample: Option<(Vec<i64>, u64)>,
    pub box_radius: i64,
    /// The verdict did not change on the doubled box.
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessVerdict {
    pub characteristic: u64,
    pub torsion_order: i64,
    pub smooth: bool,
}

impl FinGenMonoid {
    pub fn new(generators: Vec<Vec<i64>>) -> Result<Self, MonoidError> {
        Self::with_relations(generators, Vec::new())
    }

    /// Generators in `Z^d` read modulo the span of `relations`.
    pub fn with_relations(
        generators: Vec<Vec<i64>>,
        relations: Vec<Vec<i64>>,
    ) -> Result<Self, MonoidError> {
        let rank = generators.first().ok_or(MonoidError::NoGenerators)?.len();
        for v in generators.iter().chain(&relations) {
            if v.len() != rank {
                return Err(MonoidError::WrongLength {
                    vector: v.clone(),
                    len: v.len(),
                    rank,
                });
            }
        }
        let mut seen = HashSet::new();
        let generators = generators
            .into_iter()
            .filter(|g| seen.insert(g.clone()))
            .collect();
        Ok(Self {
            rank,
            generators,
            relations,
        })
    }

    /// `N^d`
    pub fn free(rank: usize) -> Self {
        let gens = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::new(gens).expect("rank is positive")
    }

    /// `<(N,0), (0,N), (1,1)>`, the monoid of the `A_{N-1}` chart.
    pub fn cyclic_chart(n: i64) -> Self {
        Self::new(vec![vec![n, 0], vec![0, n], vec![1, 1]]).expect("three generators")
    }

    /// Parses `(3,0);(0,3);(1,1)`, optionally prefixed by `gens=`.
    pub fn parse(text: &str) -> Result<Self, MonoidError> {
        let body = text.trim();
        let body = body.strip_prefix("gens=").unwrap_or(body);
        let gens = parse_vectors(body)?;
        Self::new(gens)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    pub fn is_embedded(&self) -> bool {
        self.relations.is_empty()
    }

    fn check_len(&self, v: &[i64]) -> Result<(), MonoidError> {
        if v.len() == self.rank {
            Ok(())
        } else {
            Err(MonoidError::WrongLength {
                vector: v.to_vec(),
                len: v.len(),
                rank: self.rank,
            })
        }
    }

    pub fn groupify(&self) -> Groupification {
        if self.is_embedded() {
            let s = smith(&self.generators, self.rank);
            let basis = hermite_basis(&self.generators, self.rank);
            return Groupification {
                group: AbelianGroupData {
                    rank: s.rank(),
                    torsion: Vec::new(),
                },
                basis,
                cokernel_in_ambient: Some(AbelianGroupData::from_smith(&s, self.rank)),
                certificate: s,
            };
        }
        // Q^gp = Z^k / K with K = {a : a G in span R}
        let k = self.generators.len();
        let stacked: IntMatrix = self
            .generators
            .iter()
            .chain(&self.relations)
            .cloned()
            .collect();
        let s = smith(&stacked, self.rank);
        let r = s.rank();
        let kernel: IntMatrix = s.u[r..].iter().map(|row| row[..k].to_vec()).collect();
        let ks = smith(&kernel, k);
        Groupification {
            group: AbelianGroupData::from_smith(&ks, k),
            basis: Vec::new(),
            cokernel_in_ambient: None,
            certificate: ks,
        }
    }

    /// Index of `Q^gp` in `Z^d` when it has full rank.
    pub fn index_in_ambient(&self) -> Option<i64> {
        let g = self.groupify();
        let c = g.cokernel_in_ambient?;
        c.is_finite().then(|| c.torsion_order())
    }

    /// An integer functional positive on every generator.
    pub fn positive_functional(&self) -> Result<Vec<i64>, MonoidError> {
        let d = self.rank;
        let radius = 4i64;
        let mut best: Option<Vec<i64>> = None;
        let mut w = vec![-radius; d];
        loop {
            if self
                .generators
                .iter()
                .all(|g| g.iter().zip(&w).map(|(a, b)| a * b).sum::<i64>() > 0)
            {
                let norm = |v: &Vec<i64>| v.iter().map(|x| x.abs()).sum::<i64>();
                if best.as_ref().is_none_or(|b| norm(&w) < norm(b)) {
                    best = Some(w.clone());
                }
            }
            let mut i = 0;
            while i < d && w[i] == radius {
                w[i] = -radius;
                i += 1;
            }
            if i == d {
                break;
            }
            w[i] += 1;
        }
        best.ok_or(MonoidError::NotPointed)
    }

    /// Decides `v in Q` by exhaustive search, bounded by a functional that
    /// is positive on the generators.
    pub fn membership(&self, v: &[i64]) -> Result<Membership, MonoidError> {
        if !self.is_embedded() {
            return Err(MonoidError::HasRelations);
        }
        self.check_len(v)?;
        let w = self.positive_functional()?;
        Ok(self.membership_with(&w, v))
    }

    fn membership_with(&self, w: &[i64], v: &[i64]) -> Membership {
        let mut search = MemberSearch {
            gens: &self.generators,
            weights: self
                .generators
                .iter()
                .map(|g| g.iter().zip(w).map(|(a, b)| a * b).sum())
                .collect(),
            w,
            failed: HashSet::new(),
            counts: vec![0; self.generators.len()],
        };
        let found = search.run(v.to_vec(), 0);
        Membership {
            member: found,
            witness: found.then_some(search.counts),
        }
    }

    /// If `v` lies in the real cone of `Q`, the absolute determinant of a
    /// generator basis expressing it with nonnegative coefficients. Then
    /// `det * v` is in `Q`.
    fn cone_denominator(&self, v: &[i64], bases: &[(Vec<usize>, Vec<usize>, i64)]) -> Option<i64> {
        for (rows, cols, det) in bases {
            // Cramer on the chosen coordinates: lambda_i = det_i / det
            let numerators: Vec<i64> = (0..rows.len())
                .map(|i| {
                    let m: Vec<Vec<i64>> = rows
                        .iter()
                        .enumerate()
                        .map(|(k, &g)| {
                            let src = if k == i { v } else { &self.generators[g] };
                            cols.iter().map(|&c| src[c]).collect()
                        })
                        .collect();
                    determinant(&m)
                })
                .collect();
            if numerators.iter().any(|x| x * det < 0) {
                continue;
            }
            let exact = (0..self.rank).all(|c| {
                let lhs: i64 = rows
                    .iter()
                    .zip(&numerators)
                    .map(|(&g, x)| x * self.generators[g][c])
                    .sum();
                lhs == det * v[c]
            });
            if exact {
                return Some(det.abs());
            }
        }
        None
    }

    /// Nonsingular `r x r` minors of the generator matrix, `r` its rank, as
    /// (generator rows, coordinate columns, determinant).
    fn cone_bases(&self) -> Vec<(Vec<usize>, Vec<usize>, i64)> {
        let r = smith(&self.generators, self.rank).rank();
        let mut out = Vec::new();
        for rows in subsets(self.generators.len(), r) {
            for cols in subsets(self.rank, r) {
                let m: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| self.generators[i][j]).collect())
                    .collect();
                let det = determinant(&m);
                if det != 0 {
                    out.push((rows.clone(), cols, det));
                    break;
                }
            }
        }
        out
    }

    /// Looks for `v` in `Q^gp` and in the real cone of `Q` but not in `Q`,
    /// over the box `[-B, B]^d` with `B = d * max|coordinate|`, then again
    /// over the doubled box. A counterexample carries the least `m` with
    /// `m v` in `Q`.
    pub fn saturation(&self) -> Result<SaturationReport, MonoidError> {
        if !self.is_embedded() {
            return Err(MonoidError::HasRelations);
        }
        let w = self.positive_functional()?;
        let maxc = self
            .generators
            .iter()
            .flatten()
            .map(|x| x.abs())
            .max()
            .unwrap_or(1)
            .max(1);
        let radius = self.rank as i64 * maxc;
        let basis = self.groupify().basis;
        let bases = self.cone_bases();
        let scan = |r: i64| -> Option<(Vec<i64>, u64)> {
            let d = self.rank;
            let mut v = vec![-r; d];
            loop {
                let level: i64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
                if level > 0 && solve_in_lattice(&basis, d, &v).is_some() {
                    if let Some(den) = self.cone_denominator(&v, &bases) {
                        if !self.membership_with(&w, &v).member {
                            let m = (2..=den as u64)
                                .find(|&m| {
                                    let mv: Vec<i64> = v.iter().map(|x| x * m as i64).collect();
                                    self.membership_with(&w, &mv).member
                                })
                                .expect("det times a cone point lies in Q");
                            return Some((v, m));
                        }
                    }
                }
                let mut i = 0;
                while i < d && v[i] == r {
                    v[i] = -r;
                    i += 1;
                }
                if i == d {
                    return None;
                }
                v[i] += 1;
            }
        };
        let first = scan(radius);
        let second = scan(2 * radius);
        Ok(SaturationReport {
            saturated: first.is_none(),
            stable: first.is_none() == second.is_none(),
            counterexample: first.or(second),
            box_radius: radius,
        })
    }

    /// Smooth over a field of the given characteristic iff the torsion
    /// order of `Q^gp` is invertible there.
    pub fn smoothness(&self, characteristic: u64) -> Result<SmoothnessVerdict, MonoidError> {
        check_characteristic(characteristic)?;
        let t = self.groupify().group.torsion_order();
        Ok(SmoothnessVerdict {
            characteristic,
            torsion_order: t,
            smooth: invertible(t, characteristic),
        })
    }
}

struct MemberSearch<'a> {
    gens: &'a [Vec<i64>],
    weights: Vec<i64>,
    w: &'a [i64],
    failed: HashSet<(Vec<i64>, usize)>,
    counts: Vec<u64>,
}

impl MemberSearch<'_> {
    /// Generators are used in nondecreasing index order.
    fn run(&mut self, rest: Vec<i64>, start: usize) -> bool {
        if rest.iter().all(|&x| x == 0) {
            return true;
        }
        let level: i64 = rest.iter().zip(self.w).map(|(a, b)| a * b).sum();
        if level <= 0 || self.failed.contains(&(rest.clone(), start)) {
            return false;
        }
        for i in start..self.gens.len() {
            if self.weights[i] > level {
                continue;
            }
            let next: Vec<i64> = rest.iter().zip(&self.gens[i]).map(|(a, b)| a - b).collect();
            self.counts[i] += 1;
            if self.run(next, i) {
                return true;
            }
            self.counts[i] -= 1;
        }
        self.failed.insert((rest, start));
        false
    }
}

/// A homomorphism of monoids induced by an integer matrix between the
/// ambient lattices, `v -> A v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidHom {
    pub source: FinGenMonoid,
    pub target: FinGenMonoid,
    /// `target.rank` rows, `source.rank` columns.
    pub matrix: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeMapData {
    pub kernel: AbelianGroupData,
    pub cokernel: AbelianGroupData,
    /// Matrix of `theta^gp` in the Hermite bases, rows = source basis.
    pub matrix: IntMatrix,
    pub certificate: SmithForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaleVerdict {
    pub characteristic: u64,
    pub kernel: AbelianGroupData,
    pub cokernel: AbelianGroupData,
    pub etale: bool,
    pub certificate: SmithForm,
}

impl MonoidHom {
    /// Checks that every source generator lands in the target monoid.
    pub fn new(
        source: FinGenMonoid,
        target: FinGenMonoid,
        matrix: IntMatrix,
    ) -> Result<Self, MonoidError> {
        if !source.is_embedded() || !target.is_embedded() {
            return Err(MonoidError::HasRelations);
        }
        for row in &matrix {
            if row.len() != source.rank {
                return Err(MonoidError::WrongLength {
                    vector: row.clone(),
                    len: row.len(),
                    rank: source.rank,
                });
            }
        }
        if matrix.len() != target.rank {
            return Err(MonoidError::WrongLength {
                vector: Vec::new(),
                len: matrix.len(),
                rank: target.rank,
            });
        }
        let hom = Self {
            source,
            target,
            matrix,
        };
        for g in hom.source.generators() {
            let image = hom.apply(g);
            if !hom.target.membership(&image)?.member {
                return Err(MonoidError::NotAHom {
                    generator: g.clone(),
                    image,
                });
            }
        }
        Ok(hom)
    }

    /// The inclusion of a submonoid of `N^d` into `N^d`.
    pub fn inclusion_into_free(source: FinGenMonoid) -> Result<Self, MonoidError> {
        let d = source.rank;
        let id = super::snf::identity(d);
        Self::new(source, FinGenMonoid::free(d), id)
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn compose(&self, after: &MonoidHom) -> Result<MonoidHom, MonoidError> {
        let m = super::snf::mat_mul(&after.matrix, &self.matrix, self.target.rank);
        MonoidHom::new(self.source.clone(), after.target.clone(), m)
    }

    /// Kernel and cokernel of `theta^gp`.
    pub fn lattice_map(&self) -> LatticeMapData {
        let sb = self.source.groupify().basis;
        let tb = self.target.groupify().basis;
        let m: IntMatrix = sb
            .iter()
            .map(|b| {
                solve_in_lattice(&tb, self.target.rank, &self.apply(b))
                    .expect("generators map into the target monoid")
            })
            .collect();
        lattice_map(&m, tb.len())
    }

    pub fn etale(&self, characteristic: u64) -> Result<EtaleVerdict, MonoidError> {
        check_characteristic(characteristic)?;
        let data = self.lattice_map();
        Ok(etale_from(&data, characteristic))
    }
}

/// Kernel and cokernel of the map `Z^rows -> Z^cols`, `x -> x M`.
pub fn lattice_map(m: &IntMatrix, cols: usize) -> LatticeMapData {
    let s = smith(m, cols);
    LatticeMapData {
        kernel: AbelianGroupData {
            rank: m.len() - s.rank(),
            torsion: Vec::new(),
        },
        cokernel: AbelianGroupData::from_smith(&s, cols),
        matrix: m.clone(),
        certificate: s,
    }
}

pub fn etale_from(data: &LatticeMapData, characteristic: u64) -> EtaleVerdict {
    let finite = data.kernel.is_finite() && data.cokernel.is_finite();
    let order = data.kernel.torsion_order() * data.cokernel.torsion_order();
    EtaleVerdict {
        characteristic,
        kernel: data.kernel.clone(),
        cokernel: data.cokernel.clone(),
        etale: finite && invertible(order, characteristic),
        certificate: data.certificate.clone(),
    }
}

fn invertible(t: i64, characteristic: u64) -> bool {
    characteristic == 0 || t % characteristic as i64 != 0
}

fn check_characteristic(p: u64) -> Result<(), MonoidError> {
    let prime = p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k));
    if p == 0 || prime {
        Ok(())
    } else {
        Err(MonoidError::BadCharacteristic(p))
    }
}

/// Parses `(a,b);(c,d)` into integer vectors.
pub fn parse_vectors(text: &str) -> Result<Vec<Vec<i64>>, MonoidError> {
    text.split(';')
        .map(|part| {
            let inner = part
                .trim()
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| MonoidError::Parse(format!("expected (..) in {part:?}")))?;
            inner
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|e| MonoidError::Parse(format!("{x:?}: {e}")))
                })
                .collect()
        })
        .collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant by fraction-free elimination.
fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}
