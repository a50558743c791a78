//! Exact rational-arithmetic geometry: convex-hull membership with
//! certificates, relative closure, realization of closure families from
//! point configurations, and the planar predicates used by the geometric
//! lemmas. No floating point is used anywhere on a decision path.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Euclid, One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::closure::{self, ClosedFamily, ClosureReport, GroundSet, Subset, Witness};
use crate::simplex::{self, Feasibility, Optimum, Rat};

/// Enumeration cap for realizing a closure family from points.
pub const MAX_REALIZE_GROUND: usize = 20;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty point list")]
    EmptyPoints,
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("duplicate point at labels `{0}` and `{1}`")]
    DuplicatePoint(String, String),
    #[error("ground set of {0} points exceeds the realization cap of {MAX_REALIZE_GROUND}")]
    RealizeCapExceeded(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("point {0} is not a vertex of the convex hull")]
    NotHullVertex(String),
    #[error("need at least 3 points in convex position, got {0}")]
    TooFewPoints(usize),
    #[error("segments overlap in a collinear segment")]
    CollinearOverlap,
    #[error("invalid rational `{0}`")]
    BadRational(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Closure(#[from] closure::Error),
}

// ---------------------------------------------------------------------------
// Rationals and points
// ---------------------------------------------------------------------------

/// Parses `p/q` or the integer shorthand `k` (meaning `k/1`).
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let bad = || Error::BadRational(s.to_string());
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from(n))
        }
        Some((num, den)) => {
            let n: BigInt = num.parse().map_err(|_| bad())?;
            let d: BigInt = den.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// Renders a rational as `p/q`, or plain `p` for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<Rat>,
}

impl Point {
    pub fn new(coords: Vec<Rat>) -> Result<Point, Error> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(Point { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Point {
        Point {
            coords: coords.iter().map(|&c| Rat::from(BigInt::from(c))).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rat {
        &self.coords[i]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rat).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Labeled points of uniform dimension; the ground set of `Co(R^n, A)`.
#[derive(Debug, Clone)]
pub struct PointConfig {
    ground: Arc<GroundSet>,
    points: Vec<Point>,
}

impl PointConfig {
    pub fn new(ground: &Arc<GroundSet>, points: Vec<Point>) -> Result<PointConfig, Error> {
        if points.is_empty() {
            return Err(Error::EmptyPoints);
        }
        if points.len() != ground.size() {
            return Err(Error::Precondition(format!(
                "{} labels but {} points",
                ground.size(),
                points.len()
            )));
        }
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoint(
                        ground.label(i).to_string(),
                        ground.label(j).to_string(),
                    ));
                }
            }
        }
        Ok(PointConfig {
            ground: ground.clone(),
            points,
        })
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn points_of(&self, s: &Subset) -> Vec<Point> {
        s.indices().map(|i| self.points[i].clone()).collect()
    }
}

// ---------------------------------------------------------------------------
// Hull membership with certificates
// ---------------------------------------------------------------------------

/// A separating affine functional `f(u) = normal . u` with
/// `f(x) > threshold >= f(y)` for every generator `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub normal: Vec<Rat>,
    pub threshold: Rat,
}

/// Certificate for a hull-membership query. Exactly one of the convex
/// coefficients or the separator is present, and the present one verifies
/// by exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HullCertificate {
    /// `x = sum lambda_i y_i` with `lambda >= 0`, `sum lambda = 1`;
    /// coefficients are aligned with the generator list.
    Inside {
        coefficients: Vec<Rat>,
    },
    Outside {
        separator: Separator,
    },
}

impl HullCertificate {
    pub fn is_inside(&self) -> bool {
        matches!(self, HullCertificate::Inside { .. })
    }

    /// Replays the certificate against the query it was issued for.
    pub fn verify(&self, x: &Point, generators: &[Point]) -> bool {
        match self {
            HullCertificate::Inside { coefficients } => {
                if coefficients.len() != generators.len() {
                    return false;
                }
                if coefficients.iter().any(|l| l.is_negative()) {
                    return false;
                }
                let total: Rat = coefficients.iter().cloned().sum();
                if !total.is_one() {
                    return false;
                }
                (0..x.dim()).all(|k| {
                    let combo: Rat = coefficients
                        .iter()
                        .zip(generators.iter())
                        .map(|(l, y)| l * y.coord(k))
                        .sum();
                    combo == *x.coord(k)
                })
            }
            HullCertificate::Outside { separator } => {
                let f = |p: &Point| -> Rat {
                    separator
                        .normal
                        .iter()
                        .zip(p.coords())
                        .map(|(a, c)| a * c)
                        .sum()
                };
                f(x) > separator.threshold && generators.iter().all(|y| f(y) <= separator.threshold)
            }
        }
    }
}

/// Decides `x ∈ ch(Y)` by exact LP feasibility: find `lambda >= 0` with
/// `sum lambda_i y_i = x`, `sum lambda_i = 1`. The infeasibility certificate
/// is read off as a separating functional.
pub fn hull_membership(x: &Point, generators: &[Point]) -> Result<HullCertificate, Error> {
    if generators.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let d = x.dim();
    for y in generators {
        if y.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: y.dim(),
            });
        }
    }
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(d + 1);
    for k in 0..d {
        a.push(generators.iter().map(|y| y.coord(k).clone()).collect());
    }
    a.push(vec![Rat::one(); generators.len()]);
    let mut b: Vec<Rat> = x.coords().to_vec();
    b.push(Rat::one());
    let cert = match simplex::feasible_point(&a, &b) {
        Feasibility::Feasible(lambda) => HullCertificate::Inside {
            coefficients: lambda,
        },
        Feasibility::Infeasible(pi) => {
            let normal: Vec<Rat> = pi[..d].to_vec();
            let f = |p: &Point| -> Rat { normal.iter().zip(p.coords()).map(|(a, c)| a * c).sum() };
            let threshold = generators.iter().map(f).max().expect("nonempty");
            HullCertificate::Outside {
                separator: Separator { normal, threshold },
            }
        }
    };
    debug_assert!(cert.verify(x, generators));
    Ok(cert)
}

/// `x ∈ relint ch(Y)`: some representation `x = sum lambda_i y_i` with every
/// `lambda_i` strictly positive. Decided by maximizing a common slack `t`
/// with `lambda_i >= t`; the point is relatively interior exactly when the
/// optimum is positive. For a full-dimensional hull this is the topological
/// interior.
pub fn strictly_interior(x: &Point, generators: &[Point]) -> Result<bool, Error> {
    if generators.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let d = x.dim();
    for y in generators {
        if y.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: y.dim(),
            });
        }
    }
    let m = generators.len();
    // variables: lambda_1..lambda_m, t, s_1..s_m
    let cols = 2 * m + 1;
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(d + 1 + m);
    for k in 0..d {
        let mut row = vec![Rat::zero(); cols];
        for (j, y) in generators.iter().enumerate() {
            row[j] = y.coord(k).clone();
        }
        a.push(row);
    }
    let mut row = vec![Rat::zero(); cols];
    for v in row.iter_mut().take(m) {
        *v = Rat::one();
    }
    a.push(row);
    for i in 0..m {
        let mut row = vec![Rat::zero(); cols];
        row[i] = Rat::one();
        row[m] = -Rat::one();
        row[m + 1 + i] = -Rat::one();
        a.push(row);
    }
    let mut b: Vec<Rat> = x.coords().to_vec();
    b.push(Rat::one());
    b.extend(std::iter::repeat_n(Rat::zero(), m));
    let mut c = vec![Rat::zero(); cols];
    c[m] = Rat::one();
    match simplex::maximize(&a, &b, &c) {
        Optimum::Optimal { value, .. } => Ok(value.is_positive()),
        Optimum::Infeasible(_) => Ok(false),
        Optimum::Unbounded => unreachable!("slack is bounded by 1/m"),
    }
}

// ---------------------------------------------------------------------------
// Relative closure and realization
// ---------------------------------------------------------------------------

/// The closure `ch(Y) ∩ A` of a labeled subset, as a subset.
pub fn relative_closure(config: &PointConfig, y: &Subset) -> Result<Subset, Error> {
    if config.ground() != y.ground() {
        return Err(closure::Error::GroundMismatch.into());
    }
    if y.is_empty() {
        return Ok(Subset::empty(config.ground()));
    }
    let gen = config.points_of(y);
    let mut bits = y.bits();
    for i in 0..config.len() {
        if bits >> i & 1 == 1 {
            continue;
        }
        if hull_membership(config.point(i), &gen)?.is_inside() {
            bits |= 1 << i;
        }
    }
    Subset::from_bits(config.ground(), bits).map_err(Into::into)
}

fn mask_points(config: &PointConfig, mask: u64) -> Vec<Point> {
    (0..config.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| config.point(i).clone())
        .collect()
}

/// Whether `mask` is relatively closed: no outside point of the
/// configuration lies in the hull of its members.
fn mask_is_closed(config: &PointConfig, mask: u64) -> bool {
    if mask == 0 {
        return true;
    }
    let gen = mask_points(config, mask);
    for i in 0..config.len() {
        if mask >> i & 1 == 1 {
            continue;
        }
        if hull_membership(config.point(i), &gen)
            .expect("dims uniform")
            .is_inside()
        {
            return false;
        }
    }
    true
}

/// Enumerates all relatively closed subsets of the configuration. The scan
/// over subsets runs in parallel; the output order is canonical regardless.
pub fn build_geometry(config: &PointConfig) -> Result<ClosedFamily, Error> {
    let n = config.len();
    if n > MAX_REALIZE_GROUND {
        return Err(Error::RealizeCapExceeded(n));
    }
    let masks: Vec<u64> = (0u64..1 << n)
        .into_par_iter()
        .filter(|&m| mask_is_closed(config, m))
        .collect();
    // Relative closure is a closure operator, so the family is
    // intersection-closed by construction; the constructor re-checks it.
    ClosedFamily::from_masks(config.ground(), masks).map_err(Into::into)
}

/// A minimal hull witness: a subset of `s` with at most `n + 1` elements
/// whose hull contains the point labeled `x`, or `None` when no subset of
/// that size works. The first witness in canonical subset order is returned.
pub fn caratheodory_witness(
    config: &PointConfig,
    x: &str,
    s: &Subset,
    n: usize,
) -> Result<Option<Subset>, Error> {
    if n < 1 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let xi = config
        .ground()
        .index_of(x)
        .ok_or_else(|| Error::Precondition(format!("unknown label `{x}`")))?;
    let closure = relative_closure(config, s)?;
    if !closure.contains_index(xi) {
        return Err(Error::Precondition(format!(
            "{x} is not in the relative closure of {s}"
        )));
    }
    let xp = config.point(xi);
    let indices: Vec<usize> = s.indices().collect();
    let mut subsets: Vec<u64> = Vec::new();
    fn combos(idx: &[usize], start: usize, left: usize, acc: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for k in start..idx.len() {
            combos(idx, k + 1, left - 1, acc | 1 << idx[k], out);
        }
    }
    for size in 1..=(n + 1).min(indices.len()) {
        combos(&indices, 0, size, 0, &mut subsets);
    }
    subsets.sort_by_key(|&m| closure::canonical_key(m));
    for mask in subsets {
        let gen = mask_points(config, mask);
        if hull_membership(xp, &gen)?.is_inside() {
            return Ok(Some(Subset::from_bits(config.ground(), mask)?));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Planar predicates
// ---------------------------------------------------------------------------

fn require_planar(points: &[&Point]) -> Result<(), Error> {
    for p in points {
        if p.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: p.dim(),
            });
        }
    }
    Ok(())
}

fn cross(ox: &Rat, oy: &Rat, ax: &Rat, ay: &Rat, bx: &Rat, by: &Rat) -> Rat {
    (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
}

/// Orientation of the triple `(o, a, b)`: positive for a left turn.
fn orient(o: &Point, a: &Point, b: &Point) -> Rat {
    cross(
        o.coord(0),
        o.coord(1),
        a.coord(0),
        a.coord(1),
        b.coord(0),
        b.coord(1),
    )
}

/// The unique intersection point of the closed segments `[p1,p2]` and
/// `[q1,q2]`, `None` when they are disjoint, and an error when they overlap
/// in a full segment.
pub fn segment_intersection(
    p1: &Point,
    p2: &Point,
    q1: &Point,
    q2: &Point,
) -> Result<Option<Point>, Error> {
    require_planar(&[p1, p2, q1, q2])?;
    let r = (p2.coord(0) - p1.coord(0), p2.coord(1) - p1.coord(1));
    let s = (q2.coord(0) - q1.coord(0), q2.coord(1) - q1.coord(1));
    let denom = &r.0 * &s.1 - &r.1 * &s.0;
    let qp = (q1.coord(0) - p1.coord(0), q1.coord(1) - p1.coord(1));
    if !denom.is_zero() {
        let t = (&qp.0 * &s.1 - &qp.1 * &s.0) / &denom;
        let u = (&qp.0 * &r.1 - &qp.1 * &r.0) / &denom;
        let unit = |v: &Rat| !v.is_negative() && *v <= Rat::one();
        if unit(&t) && unit(&u) {
            let pt = Point::new(vec![p1.coord(0) + &t * &r.0, p1.coord(1) + &t * &r.1])?;
            return Ok(Some(pt));
        }
        return Ok(None);
    }
    // Parallel. Distinct parallel lines never meet.
    if !(&qp.0 * &r.1 - &qp.1 * &r.0).is_zero() {
        return Ok(None);
    }
    // Collinear: compare parameter intervals along a non-degenerate direction.
    let dir = if !r.0.is_zero() || !r.1.is_zero() {
        r.clone()
    } else {
        s.clone()
    };
    if dir.0.is_zero() && dir.1.is_zero() {
        // both segments are single points
        return Ok(if p1 == q1 { Some(p1.clone()) } else { None });
    }
    let param = |p: &Point| -> Rat {
        let v = (p.coord(0) - p1.coord(0), p.coord(1) - p1.coord(1));
        (&v.0 * &dir.0 + &v.1 * &dir.1) / (&dir.0 * &dir.0 + &dir.1 * &dir.1)
    };
    let (mut a0, mut a1) = (param(p1), param(p2));
    if a0 > a1 {
        std::mem::swap(&mut a0, &mut a1);
    }
    let (mut b0, mut b1) = (param(q1), param(q2));
    if b0 > b1 {
        std::mem::swap(&mut b0, &mut b1);
    }
    let lo = a0.max(b0);
    let hi = a1.min(b1);
    if lo > hi {
        return Ok(None);
    }
    if lo < hi {
        return Err(Error::CollinearOverlap);
    }
    let pt = Point::new(vec![p1.coord(0) + &lo * &dir.0, p1.coord(1) + &lo * &dir.1])?;
    Ok(Some(pt))
}

/// Closed-triangle membership; degenerate triangles are allowed.
pub fn point_in_triangle(x: &Point, a: &Point, b: &Point, c: &Point) -> Result<bool, Error> {
    require_planar(&[x, a, b, c])?;
    Ok(hull_membership(x, &[a.clone(), b.clone(), c.clone()])?.is_inside())
}

/// Counterclockwise circular order of points in convex position, starting
/// from the lexicographically least point. Errors when any point is not a
/// vertex of the convex hull.
pub fn convex_position_order(points: &[Point]) -> Result<Vec<usize>, Error> {
    require_planar(&points.iter().collect::<Vec<_>>())?;
    let n = points.len();
    if n < 3 {
        return Err(Error::TooFewPoints(n));
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return Err(Error::DuplicatePoint(format!("#{i}"), format!("#{j}")));
            }
        }
    }
    let start = (0..n)
        .min_by(|&i, &j| points[i].coords().cmp(points[j].coords()))
        .expect("nonempty");
    // Gift wrapping with strict turns; collinear ties keep the farther
    // point, so points interior to an edge are never visited.
    let mut order = vec![start];
    let mut cur = start;
    loop {
        let mut next = usize::MAX;
        for cand in 0..n {
            if cand == cur {
                continue;
            }
            if next == usize::MAX {
                next = cand;
                continue;
            }
            let turn = orient(&points[cur], &points[next], &points[cand]);
            if turn.is_negative() {
                next = cand;
            } else if turn.is_zero() {
                // keep the farther point along the ray
                let d_next: Rat = (0..2)
                    .map(|k| {
                        let d = points[next].coord(k) - points[cur].coord(k);
                        &d * &d
                    })
                    .sum();
                let d_cand: Rat = (0..2)
                    .map(|k| {
                        let d = points[cand].coord(k) - points[cur].coord(k);
                        &d * &d
                    })
                    .sum();
                if d_cand > d_next {
                    next = cand;
                }
            }
        }
        if next == start {
            break;
        }
        order.push(next);
        cur = next;
        if order.len() > n {
            unreachable!("gift wrap revisited a vertex");
        }
    }
    if order.len() < n {
        let visited: Vec<bool> = {
            let mut v = vec![false; n];
            for &i in &order {
                v[i] = true;
            }
            v
        };
        let missing = (0..n).find(|&i| !visited[i]).expect("some point unvisited");
        return Err(Error::NotHullVertex(format!("#{missing}")));
    }
    // Gift wrapping with clockwise-negative turns emits the hull in
    // counterclockwise order already.
    debug_assert!({
        let k = order.len();
        (0..k).all(|i| {
            orient(
                &points[order[i]],
                &points[order[(i + 1) % k]],
                &points[order[(i + 2) % k]],
            )
            .is_positive()
        })
    });
    Ok(order)
}

/// Verifies that every vertex of a convex polygon, and every rational grid
/// point inside it, lies in `ch(A∪B) ∪ ch(A∪C) ∪ ch(B∪C)`, given a split
/// `A, B, C` of the vertices in which some class is separated in the
/// circular order. Grid points have coordinates with denominator
/// `grid_den`.
pub fn check_lemma_abc(
    config: &PointConfig,
    a: &Subset,
    b: &Subset,
    c: &Subset,
    grid_den: u64,
) -> Result<ClosureReport, Error> {
    let full = a.union(b).union(c);
    if full.bits() != config.ground().full_mask() {
        return Err(Error::Precondition("A, B, C must cover all points".into()));
    }
    if a.intersection(b).bits() != 0
        || a.intersection(c).bits() != 0
        || b.intersection(c).bits() != 0
    {
        return Err(Error::Precondition("A, B, C must be disjoint".into()));
    }
    if config.len() < 4 {
        return Err(Error::Precondition(format!(
            "need at least 4 vertices, got {}",
            config.len()
        )));
    }
    if grid_den == 0 {
        return Err(Error::Precondition(
            "grid denominator must be positive".into(),
        ));
    }
    let order = match convex_position_order(config.points()) {
        Ok(o) => o,
        Err(Error::NotHullVertex(tag)) => {
            let idx: usize = tag[1..].parse().expect("internal tag");
            return Err(Error::NotHullVertex(config.ground().label(idx).to_string()));
        }
        Err(e) => return Err(e),
    };
    // some class must be non-contiguous in the circular order
    let class_of = |i: usize| -> u8 {
        if a.contains_index(i) {
            0
        } else if b.contains_index(i) {
            1
        } else {
            2
        }
    };
    let separated = (0u8..3).any(|cls| {
        let k = order.len();
        let mut blocks = 0;
        for i in 0..k {
            let here = class_of(order[i]) == cls;
            let prev = class_of(order[(i + k - 1) % k]) == cls;
            if here && !prev {
                blocks += 1;
            }
        }
        blocks >= 2
    });
    if !separated {
        return Err(Error::Precondition(
            "no class is separated by the others in the circular order".into(),
        ));
    }

    let hull_ab = config.points_of(&a.union(b));
    let hull_ac = config.points_of(&a.union(c));
    let hull_bc = config.points_of(&b.union(c));
    let all_pts = config.points().to_vec();
    let covered = |p: &Point| -> Result<bool, Error> {
        Ok(hull_membership(p, &hull_ab)?.is_inside()
            || hull_membership(p, &hull_ac)?.is_inside()
            || hull_membership(p, &hull_bc)?.is_inside())
    };
    for p in config.points() {
        if !covered(p)? {
            return Ok(ClosureReport::fail(Witness::UncoveredPoint {
                coords: p.coords().iter().map(format_rat).collect(),
            }));
        }
    }
    // rational grid over the bounding box, restricted to the polygon
    let den = Rat::from(BigInt::from(grid_den));
    let bound = |k: usize, max: bool| -> BigInt {
        let vals = all_pts.iter().map(|p| p.coord(k) * &den);
        let v = if max { vals.max() } else { vals.min() }.expect("nonempty");
        // integer floor/ceil of v
        let (num, d) = (v.numer().clone(), v.denom().clone());
        if max {
            num.div_euclid(&d)
        } else {
            -((-num).div_euclid(&d))
        }
    };
    let (x0, x1) = (bound(0, false), bound(0, true));
    let (y0, y1) = (bound(1, false), bound(1, true));
    let mut gx = x0.clone();
    while gx <= x1 {
        let mut gy = y0.clone();
        while gy <= y1 {
            let p = Point::new(vec![
                Rat::new(gx.clone(), BigInt::from(grid_den)),
                Rat::new(gy.clone(), BigInt::from(grid_den)),
            ])?;
            if hull_membership(&p, &all_pts)?.is_inside() && !covered(&p)? {
                return Ok(ClosureReport::fail(Witness::UncoveredPoint {
                    coords: p.coords().iter().map(format_rat).collect(),
                }));
            }
            gy += BigInt::one();
        }
        gx += BigInt::one();
    }
    Ok(ClosureReport::ok())
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// Parses the point-configuration text format: a `dim <n>` line, then one
/// `p <label> <coord> ...` line per point with `n` rational coordinates.
/// `#` starts a comment; blank lines are ignored.
pub fn parse_points(text: &str) -> Result<PointConfig, Error> {
    let mut dim: Option<usize> = None;
    let mut labels: Vec<String> = Vec::new();
    let mut points: Vec<Point> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        match parts.next().unwrap() {
            "dim" => {
                if dim.is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "duplicate dim line".into(),
                    });
                }
                let n: usize = parts
                    .next()
                    .ok_or_else(|| Error::Parse {
                        line,
                        msg: "dim needs a value".into(),
                    })?
                    .parse()
                    .map_err(|_| Error::Parse {
                        line,
                        msg: "bad dimension".into(),
                    })?;
                if n == 0 {
                    return Err(Error::Parse {
                        line,
                        msg: "dimension must be positive".into(),
                    });
                }
                dim = Some(n);
            }
            "p" => {
                let d = dim.ok_or_else(|| Error::Parse {
                    line,
                    msg: "p before dim".into(),
                })?;
                let label = parts.next().ok_or_else(|| Error::Parse {
                    line,
                    msg: "p needs a label".into(),
                })?;
                let coords: Result<Vec<Rat>, Error> = parts.map(parse_rat).collect();
                let coords = coords.map_err(|e| Error::Parse {
                    line,
                    msg: e.to_string(),
                })?;
                if coords.len() != d {
                    return Err(Error::Parse {
                        line,
                        msg: format!("expected {d} coordinates, got {}", coords.len()),
                    });
                }
                labels.push(label.to_string());
                points.push(Point::new(coords).map_err(|e| Error::Parse {
                    line,
                    msg: e.to_string(),
                })?);
            }
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown directive `{other}`"),
                });
            }
        }
    }
    if labels.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no points".into(),
        });
    }
    let ground = GroundSet::new(labels).map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })?;
    PointConfig::new(&ground, points)
}

pub fn format_points(config: &PointConfig) -> String {
    let mut out = format!("dim {}\n", config.dim());
    for (i, p) in config.points().iter().enumerate() {
        out.push_str("p ");
        out.push_str(config.ground().label(i));
        for c in p.coords() {
            out.push(' ');
            out.push_str(&format_rat(c));
        }
        out.push('\n');
    }
    out
}
