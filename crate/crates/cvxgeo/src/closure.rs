//! Finite closure systems over ground sets of at most 64 elements.
//!
//! A [`ClosedFamily`] is an explicit, canonically ordered list of closed
//! subsets (bitmasks over a [`GroundSet`]) that contains the empty set and
//! the full set and is closed under pairwise intersection. The closure of
//! an arbitrary subset is the least member of the family containing it.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Hard cap on ground-set size so subsets fit in one machine word.
pub const MAX_GROUND: usize = 64;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set has {0} elements, limit is {MAX_GROUND}")]
    GroundTooLarge(usize),
    #[error("ground set must not be empty")]
    GroundEmpty,
    #[error("bad label `{0}`: labels match [A-Za-z0-9_]+ and must be distinct")]
    BadLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("subsets over different ground sets")]
    GroundMismatch,
    #[error("bits 0x{0:x} exceed the ground set")]
    BitsOutOfRange(u64),
    #[error("empty family")]
    EmptyFamily,
    #[error("not a closure family: {0}")]
    NotClosureFamily(String),
    #[error("set {0} is not closed in the family")]
    NotClosed(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn label_ok(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// An ordered list of distinct element names. Element `i` corresponds to
/// bit `i` of every [`Subset`] over this ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Arc<GroundSet>, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::GroundEmpty);
        }
        if labels.len() > MAX_GROUND {
            return Err(Error::GroundTooLarge(labels.len()));
        }
        for (i, l) in labels.iter().enumerate() {
            if !label_ok(l) || labels[..i].contains(l) {
                return Err(Error::BadLabel(l.clone()));
            }
        }
        Ok(Arc::new(GroundSet { labels }))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full_mask(&self) -> u64 {
        if self.labels.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.labels.len()) - 1
        }
    }
}

fn same_ground(a: &Arc<GroundSet>, b: &Arc<GroundSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A subset of a ground set, stored as a bitmask.
#[derive(Debug, Clone)]
pub struct Subset {
    bits: u64,
    ground: Arc<GroundSet>,
}

impl Subset {
    pub fn empty(ground: &Arc<GroundSet>) -> Subset {
        Subset {
            bits: 0,
            ground: ground.clone(),
        }
    }

    pub fn full(ground: &Arc<GroundSet>) -> Subset {
        Subset {
            bits: ground.full_mask(),
            ground: ground.clone(),
        }
    }

    pub fn from_bits(ground: &Arc<GroundSet>, bits: u64) -> Result<Subset, Error> {
        if bits & !ground.full_mask() != 0 {
            return Err(Error::BitsOutOfRange(bits));
        }
        Ok(Subset {
            bits,
            ground: ground.clone(),
        })
    }

    pub fn from_labels<'a, I>(ground: &Arc<GroundSet>, labels: I) -> Result<Subset, Error>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut bits = 0u64;
        for l in labels {
            let i = ground
                .index_of(l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
            bits |= 1 << i;
        }
        Ok(Subset {
            bits,
            ground: ground.clone(),
        })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.ground
            .index_of(label)
            .is_some_and(|i| self.contains_index(i))
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        assert!(
            same_ground(&self.ground, &other.ground),
            "ground set mismatch"
        );
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &Subset) -> Subset {
        assert!(
            same_ground(&self.ground, &other.ground),
            "ground set mismatch"
        );
        Subset {
            bits: self.bits | other.bits,
            ground: self.ground.clone(),
        }
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        assert!(
            same_ground(&self.ground, &other.ground),
            "ground set mismatch"
        );
        Subset {
            bits: self.bits & other.bits,
            ground: self.ground.clone(),
        }
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        assert!(
            same_ground(&self.ground, &other.ground),
            "ground set mismatch"
        );
        Subset {
            bits: self.bits & !other.bits,
            ground: self.ground.clone(),
        }
    }

    pub fn insert_index(&self, i: usize) -> Subset {
        Subset {
            bits: self.bits | (1 << i),
            ground: self.ground.clone(),
        }
    }

    pub fn remove_index(&self, i: usize) -> Subset {
        Subset {
            bits: self.bits & !(1 << i),
            ground: self.ground.clone(),
        }
    }

    /// Indices of the members, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.bits;
        (0..self.ground.size()).filter(move |i| bits >> i & 1 == 1)
    }

    pub fn label_vec(&self) -> Vec<&str> {
        self.indices().map(|i| self.ground.label(i)).collect()
    }
}

impl PartialEq for Subset {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && same_ground(&self.ground, &other.ground)
    }
}

impl Eq for Subset {}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.label_vec().join(","))
    }
}

/// Canonical order for subsets: by cardinality, then by bitmask value.
pub fn canonical_key(mask: u64) -> (u32, u64) {
    (mask.count_ones(), mask)
}

/// Why a check failed. Every failing check names the first counterexample
/// under the canonical order, with enough structure to replay it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    EmptySetMissing,
    FullSetMissing,
    /// Two family members whose intersection is not in the family.
    IntersectionMissing {
        left: Subset,
        right: Subset,
    },
    /// A proper closed set with no one-element closed extension.
    NoSingleElementExtension {
        set: Subset,
    },
    /// Closed `base` and distinct `x, y` outside it with
    /// `x ∈ close(base ∪ {y})` and `y ∈ close(base ∪ {x})`.
    AntiExchange {
        base: Subset,
        x: String,
        y: String,
    },
    /// A singleton absent from the family.
    SingletonNotClosed {
        element: String,
    },
    /// Two source lattice elements with the same image.
    NotInjective {
        left: Subset,
        right: Subset,
    },
    /// A pair of source elements whose meet is not preserved.
    MeetNotPreserved {
        left: Subset,
        right: Subset,
    },
    /// A pair of source elements whose join is not preserved.
    JoinNotPreserved {
        left: Subset,
        right: Subset,
    },
    /// A set closed in the sub-family but missing from the extension.
    SetNotClosedInTarget {
        set: Subset,
    },
    /// Carousel held while Caratheodory failed at `(x, set)`.
    CaratheodoryWithoutCarousel {
        x: String,
        set: Subset,
    },
    /// A rational point outside all hulls it is required to lie in.
    UncoveredPoint {
        coords: Vec<String>,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::EmptySetMissing => write!(f, "empty set not in family"),
            Witness::FullSetMissing => write!(f, "full ground set not in family"),
            Witness::IntersectionMissing { left, right } => {
                write!(f, "intersection of {left} and {right} not in family")
            }
            Witness::NoSingleElementExtension { set } => {
                write!(f, "{set} has no one-element closed extension")
            }
            Witness::AntiExchange { base, x, y } => {
                write!(f, "anti-exchange fails at base {base} with x={x}, y={y}")
            }
            Witness::SingletonNotClosed { element } => {
                write!(f, "{{{element}}} is not closed")
            }
            Witness::NotInjective { left, right } => {
                write!(f, "{left} and {right} map to the same element")
            }
            Witness::MeetNotPreserved { left, right } => {
                write!(f, "meet of {left} and {right} is not preserved")
            }
            Witness::JoinNotPreserved { left, right } => {
                write!(f, "join of {left} and {right} is not preserved")
            }
            Witness::SetNotClosedInTarget { set } => {
                write!(f, "{set} is not closed in the extension")
            }
            Witness::CaratheodoryWithoutCarousel { x, set } => {
                write!(f, "carousel holds but caratheodory fails at x={x}, S={set}")
            }
            Witness::UncoveredPoint { coords } => {
                write!(f, "point ({}) not covered", coords.join(", "))
            }
        }
    }
}

/// Outcome of a yes/no check; `witness` is present exactly when it failed.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl ClosureReport {
    pub fn ok() -> ClosureReport {
        ClosureReport {
            holds: true,
            witness: None,
        }
    }

    pub fn fail(witness: Witness) -> ClosureReport {
        ClosureReport {
            holds: false,
            witness: Some(witness),
        }
    }
}

impl fmt::Display for ClosureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "holds"),
            Some(w) => write!(f, "fails: {w}"),
        }
    }
}

/// A closure system given by the explicit list of its closed sets, in
/// canonical order. Always contains the empty set and the full ground set
/// and is closed under pairwise intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFamily {
    ground: Arc<GroundSet>,
    sets: Vec<u64>,
}

impl ClosedFamily {
    /// Validates the closure-system axioms and canonicalizes the order.
    pub fn from_masks(
        ground: &Arc<GroundSet>,
        masks: impl IntoIterator<Item = u64>,
    ) -> Result<ClosedFamily, Error> {
        let full = ground.full_mask();
        let mut sets: Vec<u64> = masks.into_iter().collect();
        if sets.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if let Some(&bad) = sets.iter().find(|&&m| m & !full != 0) {
            return Err(Error::BitsOutOfRange(bad));
        }
        sets.sort_by_key(|&m| canonical_key(m));
        sets.dedup();
        let family = ClosedFamily {
            ground: ground.clone(),
            sets,
        };
        let report = family.closure_axiom_report();
        if let Some(w) = report.witness {
            return Err(Error::NotClosureFamily(w.to_string()));
        }
        Ok(family)
    }

    pub fn from_subsets(sets: &[Subset]) -> Result<ClosedFamily, Error> {
        let first = sets.first().ok_or(Error::EmptyFamily)?;
        let ground = first.ground().clone();
        if !sets.iter().all(|s| same_ground(s.ground(), &ground)) {
            return Err(Error::GroundMismatch);
        }
        ClosedFamily::from_masks(&ground, sets.iter().map(|s| s.bits()))
    }

    fn closure_axiom_report(&self) -> ClosureReport {
        if self
            .sets
            .binary_search_by_key(&canonical_key(0), |&m| canonical_key(m))
            .is_err()
        {
            return ClosureReport::fail(Witness::EmptySetMissing);
        }
        let full = self.ground.full_mask();
        if !self.contains_mask(full) {
            return ClosureReport::fail(Witness::FullSetMissing);
        }
        for (i, &a) in self.sets.iter().enumerate() {
            for &b in &self.sets[i + 1..] {
                if !self.contains_mask(a & b) {
                    return ClosureReport::fail(Witness::IntersectionMissing {
                        left: self.subset(a),
                        right: self.subset(b),
                    });
                }
            }
        }
        ClosureReport::ok()
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Closed sets in canonical order.
    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        self.sets.iter().map(move |&m| self.subset(m))
    }

    pub fn subset(&self, mask: u64) -> Subset {
        debug_assert_eq!(mask & !self.ground.full_mask(), 0);
        Subset {
            bits: mask,
            ground: self.ground.clone(),
        }
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.sets
            .binary_search_by_key(&canonical_key(mask), |&m| canonical_key(m))
            .is_ok()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        same_ground(&self.ground, s.ground()) && self.contains_mask(s.bits())
    }

    pub fn position(&self, mask: u64) -> Option<usize> {
        self.sets
            .binary_search_by_key(&canonical_key(mask), |&m| canonical_key(m))
            .ok()
    }

    /// Least closed superset of `mask`. The canonical order lists sets by
    /// cardinality, so the first superset found is the least one; it is
    /// unique because the family is intersection-closed.
    pub fn close_mask(&self, mask: u64) -> u64 {
        for &m in &self.sets {
            if mask & !m == 0 {
                return m;
            }
        }
        unreachable!("family contains the full set")
    }

    /// The closure operator: minimal member of the family containing `s`.
    pub fn close(&self, s: &Subset) -> Result<Subset, Error> {
        if !same_ground(&self.ground, s.ground()) {
            return Err(Error::GroundMismatch);
        }
        Ok(self.subset(self.close_mask(s.bits())))
    }
}

/// Checks the closed-family axioms on a raw list of subsets: empty set
/// present, full ground set present, closed under pairwise intersection.
pub fn is_closure_family(sets: &[Subset]) -> Result<ClosureReport, Error> {
    let first = sets.first().ok_or(Error::EmptyFamily)?;
    let ground = first.ground().clone();
    if !sets.iter().all(|s| same_ground(s.ground(), &ground)) {
        return Err(Error::GroundMismatch);
    }
    let mut masks: Vec<u64> = sets.iter().map(|s| s.bits()).collect();
    masks.sort_by_key(|&m| canonical_key(m));
    masks.dedup();
    let probe = ClosedFamily {
        ground,
        sets: masks,
    };
    Ok(probe.closure_axiom_report())
}

/// Axiom (3): every proper closed set extends by one element to another
/// closed set. Together with the closed-family axioms this makes the
/// family the closed sets of a convex geometry.
pub fn is_convex_geometry(family: &ClosedFamily) -> ClosureReport {
    let full = family.ground().full_mask();
    for &s in family.masks() {
        if s == full {
            continue;
        }
        let mut rest = full & !s;
        let mut extended = false;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            if family.contains_mask(s | bit) {
                extended = true;
                break;
            }
            rest ^= bit;
        }
        if !extended {
            return ClosureReport::fail(Witness::NoSingleElementExtension {
                set: family.subset(s),
            });
        }
    }
    ClosureReport::ok()
}

/// The anti-exchange axiom: for closed `X` and distinct `x, y ∉ X`,
/// `x ∈ close(X ∪ {y})` forbids `y ∈ close(X ∪ {x})`.
pub fn satisfies_anti_exchange(family: &ClosedFamily) -> ClosureReport {
    let n = family.ground().size();
    for &s in family.masks() {
        for x in 0..n {
            if s >> x & 1 == 1 {
                continue;
            }
            let with_x = family.close_mask(s | 1 << x);
            for y in 0..n {
                if y == x || s >> y & 1 == 1 {
                    continue;
                }
                let with_y = family.close_mask(s | 1 << y);
                if with_y >> x & 1 == 1 && with_x >> y & 1 == 1 {
                    return ClosureReport::fail(Witness::AntiExchange {
                        base: family.subset(s),
                        x: family.ground().label(x).to_string(),
                        y: family.ground().label(y).to_string(),
                    });
                }
            }
        }
    }
    ClosureReport::ok()
}

/// Elements of the closed set `x` that are not in the closure of the rest.
pub fn extreme_points(family: &ClosedFamily, x: &Subset) -> Result<Subset, Error> {
    if !same_ground(family.ground(), x.ground()) {
        return Err(Error::GroundMismatch);
    }
    if !family.contains_mask(x.bits()) {
        return Err(Error::NotClosed(x.to_string()));
    }
    let mut extreme = 0u64;
    for i in x.indices() {
        if family.close_mask(x.bits() & !(1 << i)) >> i & 1 == 0 {
            extreme |= 1 << i;
        }
    }
    Ok(family.subset(extreme))
}

/// Whether every singleton is closed.
pub fn is_atomistic(family: &ClosedFamily) -> ClosureReport {
    for i in 0..family.ground().size() {
        if !family.contains_mask(1 << i) {
            return ClosureReport::fail(Witness::SingletonNotClosed {
                element: family.ground().label(i).to_string(),
            });
        }
    }
    ClosureReport::ok()
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// Parses the closed-family text format:
/// `ground <label> ...` on the first directive line, then one
/// `closed <label> ...` line per closed set (a bare `closed` is the empty
/// set). `#` starts a comment; blank lines are ignored.
pub fn parse_family(text: &str) -> Result<ClosedFamily, Error> {
    let mut ground: Option<Arc<GroundSet>> = None;
    let mut masks: Vec<u64> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let keyword = parts.next().unwrap();
        match keyword {
            "ground" => {
                if ground.is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "duplicate ground line".into(),
                    });
                }
                let labels: Vec<&str> = parts.collect();
                let g = GroundSet::new(labels).map_err(|e| Error::Parse {
                    line,
                    msg: e.to_string(),
                })?;
                ground = Some(g);
            }
            "closed" => {
                let g = ground.as_ref().ok_or_else(|| Error::Parse {
                    line,
                    msg: "closed before ground".into(),
                })?;
                let s = Subset::from_labels(g, parts).map_err(|e| Error::Parse {
                    line,
                    msg: e.to_string(),
                })?;
                masks.push(s.bits());
            }
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown directive `{other}`"),
                });
            }
        }
    }
    let ground = ground.ok_or(Error::Parse {
        line: 0,
        msg: "missing ground line".into(),
    })?;
    if masks.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no closed sets".into(),
        });
    }
    ClosedFamily::from_masks(&ground, masks)
}

/// Renders a family in the text format, closed sets in canonical order.
pub fn format_family(family: &ClosedFamily) -> String {
    let mut out = String::new();
    out.push_str("ground");
    for l in family.ground().labels() {
        out.push(' ');
        out.push_str(l);
    }
    out.push('\n');
    for s in family.iter() {
        out.push_str("closed");
        for l in s.label_vec() {
            out.push(' ');
            out.push_str(l);
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of small families
// ---------------------------------------------------------------------------

/// All zero-closed, intersection-closed families containing the full set
/// over an `n`-element ground set, as canonical mask lists. Practical for
/// `n ≤ 5`.
pub fn enumerate_closure_families(n: usize) -> Vec<Vec<u64>> {
    assert!(
        (1..=5).contains(&n),
        "enumeration is exponential; 1..=5 supported"
    );
    let full = (1u64 << n) - 1;
    let mut out = Vec::new();
    let mut current: Vec<u64> = vec![0, full];
    // Middle masks ascend numerically, so any intersection of members is
    // already present when a new mask is considered.
    fn rec(mask: u64, full: u64, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if mask == full {
            let mut fam = current.clone();
            fam.sort_by_key(|&m| canonical_key(m));
            out.push(fam);
            return;
        }
        rec(mask + 1, full, current, out);
        let ok = current.iter().all(|&c| {
            let i = mask & c;
            i == mask || i == c || i == 0 || current.contains(&i)
        });
        if ok {
            current.push(mask);
            rec(mask + 1, full, current, out);
            current.pop();
        }
    }
    rec(1, full, &mut current, &mut out);
    out
}

/// All convex geometries over an `n`-element ground set.
pub fn enumerate_convex_geometries(n: usize) -> Vec<ClosedFamily> {
    let ground = GroundSet::new((0..n).map(|i| format!("e{i}"))).expect("valid ground");
    enumerate_closure_families(n)
        .into_iter()
        .filter_map(|masks| {
            let fam =
                ClosedFamily::from_masks(&ground, masks).expect("enumerated families are valid");
            is_convex_geometry(&fam).holds.then_some(fam)
        })
        .collect()
}
