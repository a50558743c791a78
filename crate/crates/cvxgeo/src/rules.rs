//! Decision procedures for the Caratheodory property, the Carousel rules,
//! and the sharp two-dimensional rules on explicit closure families.
//!
//! Every checker quantifies exhaustively and reports the first
//! counterexample in canonical tuple order: components compared by the
//! canonical subset order, tuples lexicographically.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::closure::{
    canonical_key, is_convex_geometry, ClosedFamily, ClosureReport, Subset, Witness,
};

/// Quantifying over all subsets of the ground set is exponential; inputs
/// beyond this many elements are rejected.
pub const MAX_RULE_GROUND: usize = 20;
/// The sharp-rule scan is quintuple-quantified over closed sets.
pub const MAX_SHARP_GROUND: usize = 12;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set of {got} elements exceeds the cap of {limit} for this check")]
    CapExceeded { got: usize, limit: usize },
    #[error("parameter n must satisfy 1 <= n < ground size, got n={n}, size={size}")]
    BadParameter { n: usize, size: usize },
    #[error("family is not a convex geometry: {0}")]
    NotConvexGeometry(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Caratheodory(usize),
    Carousel(usize),
    SharpCarousel2,
    SharpTheoremElementwise,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Caratheodory(n) => write!(f, "{n}-caratheodory"),
            Rule::Carousel(n) => write!(f, "{n}-carousel"),
            Rule::SharpCarousel2 => write!(f, "sharp-2-carousel"),
            Rule::SharpTheoremElementwise => write!(f, "sharp-elementwise"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleWitness {
    /// `x ∈ close(set)` but no subset of `set` with at most `n + 1`
    /// elements closes over `x`.
    Caratheodory { x: String, set: Subset },
    /// `x, y ∈ close(set)` but no `n` elements of `set` together with `y`
    /// close over `x`.
    Carousel { x: String, y: String, set: Subset },
    /// Closed quintuple satisfying the sharp-rule hypotheses whose
    /// conclusion `X ∩ close(A ∪ Y) ⊋ P` fails.
    SharpQuintuple {
        x: Subset,
        y: Subset,
        a: Subset,
        b: Subset,
        c: Subset,
        p: Subset,
    },
    /// Element quintuple satisfying the elementwise hypotheses with
    /// `close({x}) ∩ close({y,a}) = ∅`.
    SharpElements {
        x: String,
        y: String,
        a: String,
        b: String,
        c: String,
    },
}

impl fmt::Display for RuleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleWitness::Caratheodory { x, set } => write!(f, "x={x}, S={set}"),
            RuleWitness::Carousel { x, y, set } => write!(f, "x={x}, y={y}, S={set}"),
            RuleWitness::SharpQuintuple { x, y, a, b, c, p } => {
                write!(f, "X={x}, Y={y}, A={a}, B={b}, C={c}, P={p}")
            }
            RuleWitness::SharpElements { x, y, a, b, c } => {
                write!(f, "x={x}, y={y}, a={a}, b={b}, c={c}")
            }
        }
    }
}

/// Verdict of a rule check; `witness` is present exactly when it fails.
#[derive(Debug, Clone)]
pub struct RuleVerdict {
    pub rule: Rule,
    pub holds: bool,
    pub witness: Option<RuleWitness>,
    pub tuples_examined: u64,
}

impl RuleVerdict {
    fn pass(rule: Rule, tuples: u64) -> RuleVerdict {
        RuleVerdict {
            rule,
            holds: true,
            witness: None,
            tuples_examined: tuples,
        }
    }

    fn fail(rule: Rule, witness: RuleWitness, tuples: u64) -> RuleVerdict {
        RuleVerdict {
            rule,
            holds: false,
            witness: Some(witness),
            tuples_examined: tuples,
        }
    }
}

impl fmt::Display for RuleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.rule)?;
        match &self.witness {
            None => write!(f, "holds")?,
            Some(w) => write!(f, "fails at {w}")?,
        }
        write!(f, " ({} tuples examined)", self.tuples_examined)
    }
}

/// Closure values for subsets of the ground set, filled on demand.
struct ClosureTable<'a> {
    family: &'a ClosedFamily,
    cache: Vec<u64>,
}

const UNSET: u64 = u64::MAX;

impl<'a> ClosureTable<'a> {
    fn new(family: &'a ClosedFamily) -> ClosureTable<'a> {
        let n = family.ground().size();
        ClosureTable {
            family,
            cache: vec![UNSET; 1usize << n],
        }
    }

    fn close(&mut self, mask: u64) -> u64 {
        let slot = &mut self.cache[mask as usize];
        if *slot == UNSET {
            *slot = self.family.close_mask(mask);
        }
        *slot
    }
}

fn all_masks_canonical(n: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (0..1u64 << n).collect();
    masks.sort_by_key(|&m| canonical_key(m));
    masks
}

fn check_caps(family: &ClosedFamily, n: Option<usize>, cap: usize) -> Result<(), Error> {
    let size = family.ground().size();
    if size > cap {
        return Err(Error::CapExceeded {
            got: size,
            limit: cap,
        });
    }
    if let Some(n) = n {
        if n < 1 || n >= size {
            return Err(Error::BadParameter { n, size });
        }
    }
    let geo = is_convex_geometry(family);
    if !geo.holds {
        return Err(Error::NotConvexGeometry(
            geo.witness.expect("failing report").to_string(),
        ));
    }
    Ok(())
}

/// Masks of all nonempty subsets of `mask` with at most `limit` elements,
/// in canonical order.
fn small_subsets(mask: u64, limit: usize) -> Vec<u64> {
    let indices: Vec<usize> = (0..64).filter(|&i| mask >> i & 1 == 1).collect();
    let mut out: Vec<u64> = Vec::new();
    let mut frontier: Vec<(u64, usize)> = vec![(0, 0)];
    for _ in 0..limit.min(indices.len()) {
        let mut next = Vec::new();
        for &(acc, start) in &frontier {
            for (k, &i) in indices.iter().enumerate().skip(start) {
                next.push((acc | 1 << i, k + 1));
            }
        }
        out.extend(next.iter().map(|&(m, _)| m));
        frontier = next;
    }
    out.sort_by_key(|&m| canonical_key(m));
    out
}

/// The `n`-Caratheodory property: whenever `x ∈ close(S)`, some subset of
/// `S` with at most `n + 1` elements already closes over `x`.
pub fn check_caratheodory(family: &ClosedFamily, n: usize) -> Result<RuleVerdict, Error> {
    check_caps(family, Some(n), MAX_RULE_GROUND)?;
    let rule = Rule::Caratheodory(n);
    let size = family.ground().size();
    let mut table = ClosureTable::new(family);
    let mut tuples = 0u64;
    for s in all_masks_canonical(size) {
        let cl = table.close(s);
        tuples += cl.count_ones() as u64;
        let mut covered = s; // x ∈ S is witnessed by {x}
        if cl & !covered != 0 {
            for t in small_subsets(s, n + 1) {
                covered |= table.close(t);
                if cl & !covered == 0 {
                    break;
                }
            }
        }
        let missing = cl & !covered;
        if missing != 0 {
            let x = missing.trailing_zeros() as usize;
            return Ok(RuleVerdict::fail(
                rule,
                RuleWitness::Caratheodory {
                    x: family.ground().label(x).to_string(),
                    set: family.subset(s),
                },
                tuples,
            ));
        }
    }
    Ok(RuleVerdict::pass(rule, tuples))
}

/// The `n`-Carousel rule: whenever `x, y ∈ close(S)`, some `n` elements
/// `a_1..a_n` of `S` give `x ∈ close({y, a_1, ..., a_n})`. The degenerate
/// cases `x = y` (and `x ∈ S`, witnessed by taking `a_1 = x`) pass
/// vacuously.
pub fn check_carousel(family: &ClosedFamily, n: usize) -> Result<RuleVerdict, Error> {
    check_caps(family, Some(n), MAX_RULE_GROUND)?;
    let rule = Rule::Carousel(n);
    let size = family.ground().size();
    let mut table = ClosureTable::new(family);
    let mut tuples = 0u64;
    for s in all_masks_canonical(size) {
        let cl = table.close(s);
        let members = cl.count_ones() as u64;
        if members < 2 {
            tuples += members * members;
            continue;
        }
        let witnesses = small_subsets(s, n);
        for x in 0..size {
            if cl >> x & 1 == 0 {
                continue;
            }
            let xbit = 1u64 << x;
            if s & xbit != 0 {
                tuples += members; // every y passes via a_1 = x
                continue;
            }
            for y in 0..size {
                if cl >> y & 1 == 0 {
                    continue;
                }
                tuples += 1;
                if y == x {
                    continue; // vacuous
                }
                let ybit = 1u64 << y;
                let mut found = false;
                for &t in &witnesses {
                    if table.close(t | ybit) & xbit != 0 {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Ok(RuleVerdict::fail(
                        rule,
                        RuleWitness::Carousel {
                            x: family.ground().label(x).to_string(),
                            y: family.ground().label(y).to_string(),
                            set: family.subset(s),
                        },
                        tuples,
                    ));
                }
            }
        }
    }
    Ok(RuleVerdict::pass(rule, tuples))
}

/// Cross-check that the `n`-Carousel rule implies the `n`-Caratheodory
/// property on this family; expected to hold always.
pub fn check_carousel_implies_caratheodory(
    family: &ClosedFamily,
    n: usize,
) -> Result<ClosureReport, Error> {
    let carousel = check_carousel(family, n)?;
    if !carousel.holds {
        return Ok(ClosureReport::ok());
    }
    let carath = check_caratheodory(family, n)?;
    if carath.holds {
        return Ok(ClosureReport::ok());
    }
    match carath.witness {
        Some(RuleWitness::Caratheodory { x, set }) => {
            Ok(ClosureReport::fail(Witness::CaratheodoryWithoutCarousel {
                x,
                set,
            }))
        }
        _ => unreachable!("failing caratheodory verdict carries its witness"),
    }
}

/// The displayed sharp rule over all closed quintuples `X, Y, A, B, C`:
/// if `Y ⊆ close(A∪B∪C)`; `Y∩close(A∪B) = Y∩close(B∪C) = Y∩close(A∪C) =
/// Y∩X = P` with `P` a proper subset of both `X` and `Y`;
/// `X ⊆ close(Y∪A∪B)`; `X ⊆ close(Y∪A∪C)`; and `Y ⊆ close(X∪B∪C)`,
/// then `X ∩ close(A∪Y)` properly contains `P`.
///
/// The scan prefilters triples `(A,B,C)`: a hypothesis-satisfying tuple
/// needs `close(A∪B∪C)` to exceed the union of the three pairwise
/// closures, since every element of `Y∖P` avoids all of them. For each
/// surviving triple the `Y`-conditions reduce to two mask tests.
/// `tuples_examined` counts the quintuples reaching the `X`-stage
/// hypothesis evaluation.
pub fn check_sharp_carousel_2(family: &ClosedFamily) -> Result<RuleVerdict, Error> {
    check_caps(family, None, MAX_SHARP_GROUND)?;
    let rule = Rule::SharpCarousel2;
    let k = family.len();
    let masks = family.masks();
    let join: Vec<u32> = (0..k * k)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / k, ij % k);
            family
                .position(family.close_mask(masks[i] | masks[j]))
                .expect("join is closed") as u32
        })
        .collect();
    let join = &join;
    let jt = move |i: usize, j: usize| -> usize { join[i * k + j] as usize };

    struct Viable {
        a: usize,
        b: usize,
        c: usize,
        /// close(A∪B) ∩ close(B∪C) ∩ close(A∪C)
        w: u64,
        /// elements of close(A∪B∪C) in none of the pairwise closures
        deficit: u64,
    }
    let viable: Vec<Viable> = (0..k * k * k)
        .into_par_iter()
        .filter_map(|abc| {
            let a = abc / (k * k);
            let b = abc / k % k;
            let c = abc % k;
            let jab = jt(a, b);
            let jbc = jt(b, c);
            let jac = jt(a, c);
            let jabc = jt(jab, c);
            let union = masks[jab] | masks[jbc] | masks[jac];
            let deficit = masks[jabc] & !union;
            if deficit == 0 {
                return None;
            }
            let w = masks[jab] & masks[jbc] & masks[jac];
            Some(Viable {
                a,
                b,
                c,
                w,
                deficit,
            })
        })
        .collect();

    let (witness, tuples) = viable
        .par_iter()
        .map(|v| {
            let mut best: Option<(usize, usize, usize, usize, usize)> = None;
            let mut count = 0u64;
            let ybox = v.deficit | v.w;
            for y in 0..k {
                let ym = masks[y];
                if ym & !ybox != 0 || ym & v.deficit == 0 {
                    continue;
                }
                // within ybox, Y ∩ close of each pair equals Y ∩ w
                let p = ym & v.w;
                let jya = jt(y, v.a);
                let x_bound_ab = masks[jt(jya, v.b)];
                let x_bound_ac = masks[jt(jya, v.c)];
                let ja_y = masks[jt(v.a, y)];
                for x in 0..k {
                    count += 1;
                    let xm = masks[x];
                    if xm & ym != p || xm == p {
                        continue;
                    }
                    if xm & !x_bound_ab != 0 || xm & !x_bound_ac != 0 {
                        continue;
                    }
                    if ym & !masks[jt(jt(x, v.b), v.c)] != 0 {
                        continue;
                    }
                    if xm & ja_y == p {
                        let cand = (x, y, v.a, v.b, v.c);
                        if best.is_none_or(|cur| cand < cur) {
                            best = Some(cand);
                        }
                    }
                }
            }
            (best, count)
        })
        .reduce(
            || (None, 0u64),
            |acc, item| {
                let tuple = match (acc.0, item.0) {
                    (None, t) | (t, None) => t,
                    (Some(t1), Some(t2)) => Some(t1.min(t2)),
                };
                (tuple, acc.1 + item.1)
            },
        );

    match witness {
        None => Ok(RuleVerdict::pass(rule, tuples)),
        Some((x, y, a, b, c)) => {
            let p = masks[x] & masks[y];
            Ok(RuleVerdict::fail(
                rule,
                RuleWitness::SharpQuintuple {
                    x: family.subset(masks[x]),
                    y: family.subset(masks[y]),
                    a: family.subset(masks[a]),
                    b: family.subset(masks[b]),
                    c: family.subset(masks[c]),
                    p: family.subset(p),
                },
                tuples,
            ))
        }
    }
}

/// Elementwise sharp consequence over all elements `x, y, a, b, c`:
/// if `y ∈ close({a,b,c})`; `close({y})` is disjoint from `close({a,b})`,
/// `close({b,c})`, `close({a,c})`, and `close({x})`; and
/// `x ∈ close({y,a,b})` and `x ∈ close({y,a,c})`, then
/// `close({x}) ∩ close({y,a})` is nonempty.
pub fn check_sharp_theorem_elementwise(family: &ClosedFamily) -> Result<RuleVerdict, Error> {
    check_caps(family, None, MAX_RULE_GROUND)?;
    let rule = Rule::SharpTheoremElementwise;
    let size = family.ground().size();
    let mut table = ClosureTable::new(family);
    let mut tuples = 0u64;
    for x in 0..size {
        let cx = table.close(1 << x);
        for y in 0..size {
            let cy = table.close(1 << y);
            if cy & cx != 0 {
                continue;
            }
            for a in 0..size {
                let cya = table.close(1 << y | 1 << a);
                let conclusion = cx & cya != 0;
                for b in 0..size {
                    if cy & table.close(1 << a | 1 << b) != 0 {
                        continue;
                    }
                    if table.close(1 << y | 1 << a | 1 << b) >> x & 1 == 0 {
                        continue;
                    }
                    for c in 0..size {
                        tuples += 1;
                        if table.close(1 << a | 1 << b | 1 << c) >> y & 1 == 0 {
                            continue;
                        }
                        if cy & table.close(1 << b | 1 << c) != 0 {
                            continue;
                        }
                        if cy & table.close(1 << a | 1 << c) != 0 {
                            continue;
                        }
                        if table.close(1 << y | 1 << a | 1 << c) >> x & 1 == 0 {
                            continue;
                        }
                        if !conclusion {
                            let lbl = |i: usize| family.ground().label(i).to_string();
                            return Ok(RuleVerdict::fail(
                                rule,
                                RuleWitness::SharpElements {
                                    x: lbl(x),
                                    y: lbl(y),
                                    a: lbl(a),
                                    b: lbl(b),
                                    c: lbl(c),
                                },
                                tuples,
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(RuleVerdict::pass(rule, tuples))
}
