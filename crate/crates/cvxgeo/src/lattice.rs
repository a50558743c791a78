//! The lattice of closed sets, sublattice-embedding search between two
//! such lattices, and strong-extension checking.

use std::fmt;

use thiserror::Error;

use crate::closure::{ClosedFamily, ClosureReport, Witness};

/// Search caps for the embedding backtracker.
pub const MAX_EMBED_SOURCE: usize = 64;
pub const MAX_EMBED_TARGET: usize = 512;
/// Cap for exhaustive embedding counting.
pub const MAX_COUNT_TARGET: usize = 64;

#[derive(Debug, Error)]
pub enum Error {
    #[error("source lattice has {got} elements, cap is {limit}")]
    SourceCapExceeded { got: usize, limit: usize },
    #[error("target lattice has {got} elements, cap is {limit}")]
    TargetCapExceeded { got: usize, limit: usize },
    #[error("families are over different ground sets")]
    GroundMismatch,
    #[error("map assigns {got} images but the source has {want} elements")]
    MapSizeMismatch { got: usize, want: usize },
    #[error("map image {0} is out of range for the target lattice")]
    MapImageOutOfRange(usize),
}

/// The lattice of closed sets of a family: meet is intersection, join is
/// the closure of the union. Elements are indexed in the family's
/// canonical order; the tables hold element indices.
///
/// For an intersection-closed family containing the empty and full sets
/// these tables satisfy the lattice axioms by construction: the meet is a
/// plain intersection and the join of `X, Y` is the least closed superset
/// of `X ∪ Y`, which makes both operations associative, commutative, and
/// absorptive. Absorption is re-checked pairwise at build time as a guard
/// against corrupted tables.
#[derive(Debug, Clone)]
pub struct Lattice {
    family: ClosedFamily,
    meet: Vec<u32>,
    join: Vec<u32>,
}

impl Lattice {
    pub fn family(&self) -> &ClosedFamily {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mask(&self, i: usize) -> u64 {
        self.family.masks()[i]
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.len() + j] as usize
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j] as usize
    }

    /// Lattice order: inclusion of closed sets.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.mask(i) & !self.mask(j) == 0
    }

    /// Pairs of the covering relation (lower, upper), lexicographic.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq(i, j) {
                    continue;
                }
                let covered =
                    (0..n).all(|m| m == i || m == j || !(self.leq(i, m) && self.leq(m, j)));
                if covered {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Builds the meet and join tables of a family's lattice of closed sets.
pub fn build_lattice(family: &ClosedFamily) -> Result<Lattice, Error> {
    let n = family.len();
    let masks = family.masks();
    let mut meet = vec![0u32; n * n];
    let mut join = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            meet[i * n + j] = family
                .position(masks[i] & masks[j])
                .expect("family is intersection-closed") as u32;
            join[i * n + j] = family
                .position(family.close_mask(masks[i] | masks[j]))
                .expect("closure is closed") as u32;
        }
    }
    let lat = Lattice {
        family: family.clone(),
        meet,
        join,
    };
    debug_assert!((0..n)
        .all(|i| (0..n)
            .all(|j| lat.meet(i, lat.join(i, j)) == i && lat.join(i, lat.meet(i, j)) == i)));
    Ok(lat)
}

/// A meet- and join-preserving injection between two lattices of closed
/// sets; `map[i]` is the target index of source element `i`.
#[derive(Debug, Clone)]
pub struct EmbeddingMap {
    pub source: Lattice,
    pub target: Lattice,
    pub map: Vec<usize>,
}

impl EmbeddingMap {
    pub fn new(source: Lattice, target: Lattice, map: Vec<usize>) -> Result<EmbeddingMap, Error> {
        if map.len() != source.len() {
            return Err(Error::MapSizeMismatch {
                got: map.len(),
                want: source.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= target.len()) {
            return Err(Error::MapImageOutOfRange(bad));
        }
        Ok(EmbeddingMap {
            source,
            target,
            map,
        })
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }
}

impl fmt::Display for EmbeddingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.source.len() {
            let src = self.source.family().subset(self.source.mask(i));
            let dst = self.target.family().subset(self.target.mask(self.map[i]));
            writeln!(f, "{src} -> {dst}")?;
        }
        Ok(())
    }
}

/// Checks that a map is injective and preserves all pairwise meets and
/// joins; the witness names the first failing pair in canonical order.
pub fn verify_embedding(map: &EmbeddingMap) -> ClosureReport {
    let n = map.source.len();
    let src = &map.source;
    let tgt = &map.target;
    for i in 0..n {
        for j in i + 1..n {
            if map.map[i] == map.map[j] {
                return ClosureReport::fail(Witness::NotInjective {
                    left: src.family().subset(src.mask(i)),
                    right: src.family().subset(src.mask(j)),
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if map.map[src.meet(i, j)] != tgt.meet(map.map[i], map.map[j]) {
                return ClosureReport::fail(Witness::MeetNotPreserved {
                    left: src.family().subset(src.mask(i)),
                    right: src.family().subset(src.mask(j)),
                });
            }
            if map.map[src.join(i, j)] != tgt.join(map.map[i], map.map[j]) {
                return ClosureReport::fail(Witness::JoinNotPreserved {
                    left: src.family().subset(src.mask(i)),
                    right: src.family().subset(src.mask(j)),
                });
            }
        }
    }
    ClosureReport::ok()
}

/// Constraint schedule for the backtracking search.
struct SearchPlan {
    /// for each k: pairs (i, j) with i <= j < k and join(i, j) == k
    deferred_joins: Vec<Vec<(usize, usize)>>,
    /// per source element: number of elements below / above it
    ideal: Vec<usize>,
    filter: Vec<usize>,
}

fn plan(src: &Lattice) -> SearchPlan {
    let n = src.len();
    let mut deferred_joins = vec![Vec::new(); n];
    for i in 0..n {
        for j in i..n {
            let jj = src.join(i, j);
            if jj > j.max(i) {
                deferred_joins[jj].push((i, j));
            }
        }
    }
    let ideal = (0..n)
        .map(|i| (0..n).filter(|&z| src.leq(z, i)).count())
        .collect();
    let filter = (0..n)
        .map(|i| (0..n).filter(|&z| src.leq(i, z)).count())
        .collect();
    SearchPlan {
        deferred_joins,
        ideal,
        filter,
    }
}

/// Per-target profile sizes, precomputed once per search.
struct TargetProfile {
    ideal: Vec<usize>,
    filter: Vec<usize>,
}

fn candidate_ok(
    src: &Lattice,
    tgt: &Lattice,
    map: &[usize],
    k: usize,
    cand: usize,
    planned: &SearchPlan,
    prof: &TargetProfile,
) -> bool {
    if prof.ideal[cand] < planned.ideal[k] || prof.filter[cand] < planned.filter[k] {
        return false;
    }
    // Meets of assigned pairs are already assigned because the canonical
    // order lists sets by size; joins landing at k are checkable now.
    for i in 0..k {
        let m = src.meet(i, k);
        debug_assert!(m <= k);
        if tgt.meet(map[i], cand) != map[m] {
            return false;
        }
        if src.join(i, k) == k && tgt.join(map[i], cand) != cand {
            return false;
        }
    }
    for &(i, j) in &planned.deferred_joins[k] {
        if tgt.join(map[i], map[j]) != cand {
            return false;
        }
    }
    true
}

fn backtrack(
    src: &Lattice,
    tgt: &Lattice,
    planned: &SearchPlan,
    prof: &TargetProfile,
    map: &mut Vec<usize>,
    used: &mut [bool],
    count_all: &mut Option<u64>,
) -> Option<Vec<usize>> {
    let k = map.len();
    if k == src.len() {
        if let Some(count) = count_all.as_mut() {
            *count += 1;
            return None; // keep searching
        }
        return Some(map.clone());
    }
    for cand in 0..tgt.len() {
        if used[cand] || !candidate_ok(src, tgt, map, k, cand, planned, prof) {
            continue;
        }
        map.push(cand);
        used[cand] = true;
        let found = backtrack(src, tgt, planned, prof, map, used, count_all);
        map.pop();
        used[cand] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

fn run_search(g: &Lattice, h: &Lattice, mut count_all: Option<u64>) -> (Option<Vec<usize>>, u64) {
    let planned = plan(g);
    let prof = TargetProfile {
        ideal: (0..h.len())
            .map(|c| (0..h.len()).filter(|&z| h.leq(z, c)).count())
            .collect(),
        filter: (0..h.len())
            .map(|c| (0..h.len()).filter(|&z| h.leq(c, z)).count())
            .collect(),
    };
    let mut map = Vec::with_capacity(g.len());
    let mut used = vec![false; h.len()];
    let found = backtrack(g, h, &planned, &prof, &mut map, &mut used, &mut count_all);
    (found, count_all.unwrap_or(0))
}

/// Complete backtracking search for a meet- and join-preserving injection
/// of `g` into `h`. Source elements are assigned in canonical order, so
/// every meet of assigned elements is itself assigned and join constraints
/// propagate as soon as their join element is placed. The first embedding
/// in candidate order is returned.
pub fn find_subgeometry_embedding(g: &Lattice, h: &Lattice) -> Result<Option<EmbeddingMap>, Error> {
    if g.len() > MAX_EMBED_SOURCE {
        return Err(Error::SourceCapExceeded {
            got: g.len(),
            limit: MAX_EMBED_SOURCE,
        });
    }
    if h.len() > MAX_EMBED_TARGET {
        return Err(Error::TargetCapExceeded {
            got: h.len(),
            limit: MAX_EMBED_TARGET,
        });
    }
    if g.len() > h.len() {
        return Ok(None);
    }
    match run_search(g, h, None).0 {
        Some(map) => {
            let emb = EmbeddingMap::new(g.clone(), h.clone(), map)?;
            debug_assert!(verify_embedding(&emb).holds);
            Ok(Some(emb))
        }
        None => Ok(None),
    }
}

/// Counts all embeddings of `g` into `h`; intended for micro-scale
/// lattices only.
pub fn count_subgeometry_embeddings(g: &Lattice, h: &Lattice) -> Result<u64, Error> {
    if g.len() > MAX_EMBED_SOURCE {
        return Err(Error::SourceCapExceeded {
            got: g.len(),
            limit: MAX_EMBED_SOURCE,
        });
    }
    if h.len() > MAX_COUNT_TARGET {
        return Err(Error::TargetCapExceeded {
            got: h.len(),
            limit: MAX_COUNT_TARGET,
        });
    }
    if g.len() > h.len() {
        return Ok(0);
    }
    Ok(run_search(g, h, Some(0)).1)
}

/// Whether `h` strongly extends `g` on the same ground set: the identity
/// on subsets embeds the lattice of `g` into the lattice of `h`. Every
/// `g`-closed set must be `h`-closed (intersections then agree for free)
/// and the two closure operators must agree on unions of `g`-closed sets.
pub fn is_strong_extension(g: &ClosedFamily, h: &ClosedFamily) -> Result<ClosureReport, Error> {
    if g.ground() != h.ground() {
        return Err(Error::GroundMismatch);
    }
    for &m in g.masks() {
        if !h.contains_mask(m) {
            return Ok(ClosureReport::fail(Witness::SetNotClosedInTarget {
                set: g.subset(m),
            }));
        }
    }
    for &x in g.masks() {
        for &y in g.masks() {
            if h.close_mask(x | y) != g.close_mask(x | y) {
                return Ok(ClosureReport::fail(Witness::JoinNotPreserved {
                    left: g.subset(x),
                    right: g.subset(y),
                }));
            }
        }
    }
    Ok(ClosureReport::ok())
}

/// Renders the Hasse diagram of the lattice as DOT text, nodes labeled by
/// set contents, edges along the covering relation, bottom-up rank.
pub fn to_dot(lat: &Lattice) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n");
    for i in 0..lat.len() {
        let label = lat.family().subset(lat.mask(i)).to_string();
        out.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
    }
    for (lo, hi) in lat.covers() {
        out.push_str(&format!("  n{lo} -> n{hi};\n"));
    }
    out.push_str("}\n");
    out
}
