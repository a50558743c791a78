//! Acceptance suite: one test per criterion, each printing a PASS line
//! when every assertion in it holds. Criteria cover the shipped
//! constructions, the rule checkers, the exact hull oracle, and the
//! geometric lemmas, at fixed seeds and exact tolerances.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cvxgeo::closure::{
    enumerate_closure_families, enumerate_convex_geometries, is_atomistic, is_convex_geometry,
    satisfies_anti_exchange, ClosedFamily, GroundSet, Subset,
};
use cvxgeo::gallery::{
    self, build_cn, build_dn, build_gn1, build_phi, cn_added_masks, counterexample_sharp,
    example_section5,
};
use cvxgeo::geometry::{
    build_geometry, check_lemma_abc, convex_position_order, hull_membership, point_in_triangle,
    segment_intersection, HullCertificate, Point, PointConfig,
};
use cvxgeo::lattice::{
    build_lattice, find_subgeometry_embedding, is_strong_extension, verify_embedding,
};
use cvxgeo::rules::{
    check_caratheodory, check_carousel, check_sharp_carousel_2, check_sharp_theorem_elementwise,
    RuleWitness,
};
use cvxgeo::Rat;

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Criterion 1: the strong-extension pair reproduces all six claims.
///
/// The final sub-claim pins the caratheodory failure of the extension at
/// parameter 3 with witness (x, {a,b,c,d}). With witness sets of up to
/// n + 1 = 4 elements, {a,b,c,d} itself witnesses x there, so the
/// property provably holds at n = 3 and the failure manifests at n = 2
/// instead. The assertion is kept at parameter 3 on purpose and is
/// expected to fail; the companion test below pins the realized
/// phenomenon at n = 2.
#[test]
fn criterion_1_extension_pair() {
    let start = Instant::now();
    let (g, h) = example_section5();
    assert!(
        is_convex_geometry(&g).holds,
        "first family must be a convex geometry"
    );
    assert!(
        is_convex_geometry(&h).holds,
        "second family must be a convex geometry"
    );
    assert!(is_atomistic(&h).holds, "extension must be atomistic");
    assert!(
        is_strong_extension(&g, &h).unwrap().holds,
        "identity must be a strong extension"
    );
    assert!(
        check_caratheodory(&g, 3).unwrap().holds,
        "3-caratheodory must hold on the base"
    );
    let v = check_caratheodory(&h, 3).unwrap();
    println!("ACCEPTANCE 1: elapsed {:?}", start.elapsed());
    assert!(
        !v.holds,
        "UNATTAINABLE AT THIS PARAMETER: 3-caratheodory admits witness sets \
         of four elements, and {{a,b,c,d}} itself witnesses x in the \
         extension, so the checker reports `holds`. The loss of the \
         caratheodory bound under this atomistic strong extension is real \
         one parameter down; see criterion_1_realized_phenomenon."
    );
    match v.witness {
        Some(RuleWitness::Caratheodory { ref x, ref set }) => {
            assert_eq!(x, "x");
            assert_eq!(set.to_string(), "{a,b,c,d}");
        }
        other => panic!("expected a caratheodory witness, got {other:?}"),
    }
    println!("ACCEPTANCE 1: PASS");
}

/// The phenomenon of criterion 1 with the parameter at which it occurs:
/// the atomistic strong extension loses the 2-caratheodory property at
/// witness (x, {a,b,c,d}) while the base family satisfies it.
#[test]
fn criterion_1_realized_phenomenon() {
    let (g, h) = example_section5();
    assert!(is_strong_extension(&g, &h).unwrap().holds);
    assert!(is_atomistic(&h).holds);
    assert!(check_caratheodory(&g, 2).unwrap().holds);
    let v = check_caratheodory(&h, 2).unwrap();
    assert!(!v.holds);
    match v.witness {
        Some(RuleWitness::Caratheodory { ref x, ref set }) => {
            assert_eq!(x, "x");
            assert_eq!(set.to_string(), "{a,b,c,d}");
        }
        other => panic!("expected a caratheodory witness, got {other:?}"),
    }
    println!("ACCEPTANCE 1 (realized at n=2): PASS");
}

/// Criterion 2: the five-element counterexample separates the carousel
/// rule from both sharp rules, with pinned witnesses.
#[test]
fn criterion_2_sharp_counterexample() {
    let start = Instant::now();
    let fam = counterexample_sharp();
    assert!(is_convex_geometry(&fam).holds);
    assert!(
        check_carousel(&fam, 2).unwrap().holds,
        "2-carousel must hold"
    );
    let sharp = check_sharp_carousel_2(&fam).unwrap();
    assert!(!sharp.holds, "sharp rule must fail");
    match sharp.witness {
        Some(RuleWitness::SharpQuintuple {
            ref x,
            ref y,
            ref a,
            ref b,
            ref c,
            ref p,
        }) => {
            assert_eq!(
                (
                    x.to_string(),
                    y.to_string(),
                    a.to_string(),
                    b.to_string(),
                    c.to_string()
                ),
                (
                    "{x}".into(),
                    "{y}".into(),
                    "{a}".into(),
                    "{b}".into(),
                    "{c}".into()
                )
            );
            assert_eq!(p.to_string(), "{}");
        }
        other => panic!("expected a quintuple witness, got {other:?}"),
    }
    let elem = check_sharp_theorem_elementwise(&fam).unwrap();
    assert!(!elem.holds);
    match elem.witness {
        Some(RuleWitness::SharpElements {
            ref x,
            ref y,
            ref a,
            ref b,
            ref c,
        }) => {
            assert_eq!(
                (x.as_str(), y.as_str(), a.as_str(), b.as_str(), c.as_str()),
                ("x", "y", "a", "b", "c")
            );
        }
        other => panic!("expected an element witness, got {other:?}"),
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "criterion 2 must finish within 1 s, took {elapsed:?}"
    );
    println!("ACCEPTANCE 2: PASS ({elapsed:?})");
}

/// Criterion 3: both augmented families behave as constructed, and the
/// explicit doubling embedding verifies, within ten seconds for n = 3.
#[test]
fn criterion_3_augmented_families() {
    for n in [2usize, 3] {
        let start = Instant::now();
        let family = build_cn(n).unwrap();
        assert!(
            is_convex_geometry(&family).holds,
            "C{n} must be a convex geometry"
        );
        assert!(
            check_caratheodory(&family, n).unwrap().holds,
            "{n}-caratheodory must hold"
        );
        let v = check_carousel(&family, n).unwrap();
        assert!(!v.holds, "{n}-carousel must fail");
        match v.witness {
            Some(RuleWitness::Carousel {
                ref x,
                ref y,
                ref set,
            }) => {
                assert_eq!(x, "x");
                assert_eq!(y, "y");
                let d_mask = (1u64 << (n + 1)) - 1;
                assert_eq!(set.bits(), d_mask, "witness set must be the vertex set");
            }
            other => panic!("expected a carousel witness, got {other:?}"),
        }
        let emb = build_phi(n).unwrap();
        assert!(verify_embedding(&emb).holds, "phi must verify for n={n}");
        // union-closure case split on all closed pairs
        let d_mask = (1u64 << (n + 1)) - 1;
        let xy = 0b11u64 << (n + 1);
        for &u in family.masks() {
            for &v in family.masks() {
                let un = u | v;
                let want = if un & d_mask == d_mask { un | xy } else { un };
                assert_eq!(family.close_mask(un), want, "case formula at {un:b}");
            }
        }
        let elapsed = start.elapsed();
        if n == 3 {
            assert!(
                elapsed.as_secs_f64() < 10.0,
                "n=3 must finish within 10 s, took {elapsed:?}"
            );
        }
        println!("ACCEPTANCE 3 (n={n}): PASS ({elapsed:?})");
    }
}

fn random_planar_config(size: usize, rng: &mut ChaCha8Rng) -> PointConfig {
    let ground = GroundSet::new((0..size).map(|i| format!("p{i}"))).unwrap();
    loop {
        let points: Vec<Point> = (0..size)
            .map(|_| {
                Point::new(vec![
                    rat(rng.random_range(-16i64..=16), rng.random_range(1i64..=4)),
                    rat(rng.random_range(-16i64..=16), rng.random_range(1i64..=4)),
                ])
                .unwrap()
            })
            .collect();
        if let Ok(cfg) = PointConfig::new(&ground, points) {
            return cfg;
        }
    }
}

/// Criterion 4: two hundred seeded random planar configurations of four
/// to eight points realize geometries that satisfy both the 2-carousel
/// rule and the sharp rule, with zero failures, within sixty seconds.
#[test]
fn criterion_4_planar_rules_property() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0404);
    for case in 0..200 {
        let size = 4 + case % 5;
        let cfg = random_planar_config(size, &mut rng);
        let family = build_geometry(&cfg).unwrap();
        assert!(
            is_convex_geometry(&family).holds,
            "case {case}: realization must be a geometry"
        );
        let carousel = check_carousel(&family, 2).unwrap();
        assert!(carousel.holds, "case {case}: 2-carousel failed: {carousel}");
        let sharp = check_sharp_carousel_2(&family).unwrap();
        assert!(sharp.holds, "case {case}: sharp rule failed: {sharp}");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "criterion 4 must finish within 60 s, took {elapsed:?}"
    );
    println!("ACCEPTANCE 4: PASS (200 configs, {elapsed:?})");
}

/// Criterion 5: over every convex geometry on at most four elements and
/// every embedding pair found among them, the carousel rules transfer
/// from host to sub-geometry with zero violations, within 120 seconds.
#[test]
#[allow(clippy::needless_range_loop)] // n is the rule parameter, not a position
fn criterion_5_carousel_transfer() {
    let start = Instant::now();
    let geos: Vec<ClosedFamily> = (1..=4).flat_map(enumerate_convex_geometries).collect();
    let lats: Vec<_> = geos.iter().map(|f| build_lattice(f).unwrap()).collect();
    // memoized carousel verdicts per family and parameter
    let verdicts: Vec<[Option<bool>; 4]> = geos
        .iter()
        .map(|f| {
            let mut row = [None; 4];
            for n in 1..f.ground().size().min(4) {
                row[n] = Some(check_carousel(f, n).unwrap().holds);
            }
            row
        })
        .collect();
    let mut embeddings = 0u64;
    let mut checked = 0u64;
    for (gi, gl) in lats.iter().enumerate() {
        for (hi, hl) in lats.iter().enumerate() {
            if gl.len() > hl.len() {
                continue;
            }
            let Some(_emb) = find_subgeometry_embedding(gl, hl).unwrap() else {
                continue;
            };
            embeddings += 1;
            let max_n = geos[gi]
                .ground()
                .size()
                .min(geos[hi].ground().size())
                .min(4);
            for n in 1..max_n {
                let (Some(host), Some(sub)) = (verdicts[hi][n], verdicts[gi][n]) else {
                    continue;
                };
                checked += 1;
                assert!(
                    !host || sub,
                    "{n}-carousel transfer violated: host {:?} satisfies it, sub {:?} does not",
                    geos[hi].masks(),
                    geos[gi].masks()
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "criterion 5 must finish within 120 s, took {elapsed:?}"
    );
    println!("ACCEPTANCE 5: PASS ({embeddings} embeddings, {checked} transfers, {elapsed:?})");
}

// --------------------------------------------------------------------------
// Criterion 6 oracle: barycentric solve over affinely independent subsets,
// fully independent of the simplex code path.
// --------------------------------------------------------------------------

#[allow(clippy::needless_range_loop)]
fn solve_square(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let m = rows.len();
    let n = rows[0].len();
    let mut aug: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs.iter())
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let pv = aug[r][c].clone();
        for v in aug[r].iter_mut() {
            *v /= &pv;
        }
        for i in 0..m {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                let row = aug[r].clone();
                for (v, w) in aug[i].iter_mut().zip(row.iter()) {
                    *v -= &f * w;
                }
            }
        }
        piv_cols.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    for i in r..m {
        if !aug[i][n].is_zero() {
            return None; // inconsistent
        }
    }
    if piv_cols.len() < n {
        return None; // underdetermined: affinely dependent subset
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &c) in piv_cols.iter().enumerate() {
        x[c] = aug[i][n].clone();
    }
    Some(x)
}

fn affinely_independent(pts: &[&Point]) -> bool {
    if pts.len() <= 1 {
        return true;
    }
    let d = pts[0].dim();
    let base = pts[0];
    let mut rows: Vec<Vec<Rat>> = pts[1..]
        .iter()
        .map(|p| (0..d).map(|k| p.coord(k) - base.coord(k)).collect())
        .collect();
    // rank by elimination
    let m = rows.len();
    let mut rank = 0;
    for c in 0..d {
        let Some(p) = (rank..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pv = rows[rank][c].clone();
        for v in rows[rank].iter_mut() {
            *v /= &pv;
        }
        for i in 0..m {
            if i != rank && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let row = rows[rank].clone();
                for (v, w) in rows[i].iter_mut().zip(row.iter()) {
                    *v -= &f * w;
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank == m
}

/// Independent hull membership: x is in the hull exactly when some
/// affinely independent subset of at most d + 1 generators carries it
/// with nonnegative barycentric coordinates.
fn oracle_in_hull(x: &Point, gens: &[Point]) -> bool {
    let d = x.dim();
    let idx: Vec<usize> = (0..gens.len()).collect();
    for size in 1..=(d + 1).min(gens.len()) {
        let mut combo = vec![0usize; size];
        if pick(&idx, 0, &mut combo, 0, &mut |chosen: &[usize]| {
            let pts: Vec<&Point> = chosen.iter().map(|&i| &gens[i]).collect();
            if !affinely_independent(&pts) {
                return false;
            }
            let mut rows: Vec<Vec<Rat>> = (0..d)
                .map(|k| pts.iter().map(|p| p.coord(k).clone()).collect())
                .collect();
            rows.push(vec![Rat::one(); pts.len()]);
            let mut rhs: Vec<Rat> = x.coords().to_vec();
            rhs.push(Rat::one());
            match solve_square(&rows, &rhs) {
                Some(lambda) => lambda.iter().all(|l| !l.is_negative()),
                None => false,
            }
        }) {
            return true;
        }
    }
    false
}

fn pick(
    idx: &[usize],
    start: usize,
    combo: &mut Vec<usize>,
    depth: usize,
    f: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if depth == combo.len() {
        return f(combo);
    }
    for k in start..idx.len() {
        combo[depth] = idx[k];
        if pick(idx, k + 1, combo, depth + 1, f) {
            return true;
        }
    }
    false
}

/// Criterion 6: the LP decision agrees with the subset-enumeration oracle
/// on a deterministic battery of rational configurations with up to seven
/// generators in dimensions one to three, including degenerate ones, with
/// certificates verified on both sides. 100% agreement within sixty
/// seconds.
#[test]
fn criterion_6_hull_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0606);
    let mut cases = 0u64;
    for d in 1..=3usize {
        for ycount in 1..=7usize {
            for round in 0..6 {
                // generators on a small grid; every second round collapses
                // to a lower-dimensional flat, and duplicates are allowed
                let gens: Vec<Point> = (0..ycount)
                    .map(|_| {
                        let mut coords: Vec<Rat> = (0..d)
                            .map(|_| rat(rng.random_range(-3i64..=3), 1))
                            .collect();
                        if round % 2 == 1 {
                            coords[d - 1] = Rat::zero();
                        }
                        Point::new(coords).unwrap()
                    })
                    .collect();
                // queries: each generator, pairwise midpoints, the
                // centroid, and grid probes
                let mut queries: Vec<Point> = gens.clone();
                for i in 0..gens.len() {
                    for j in i + 1..gens.len() {
                        let mid = Point::new(
                            (0..d)
                                .map(|k| (gens[i].coord(k) + gens[j].coord(k)) / rat(2, 1))
                                .collect(),
                        )
                        .unwrap();
                        queries.push(mid);
                    }
                }
                let centroid = Point::new(
                    (0..d)
                        .map(|k| {
                            let sum: Rat = gens.iter().map(|g| g.coord(k).clone()).sum();
                            sum / rat(gens.len() as i64, 1)
                        })
                        .collect(),
                )
                .unwrap();
                queries.push(centroid);
                for _ in 0..4 {
                    queries.push(
                        Point::new(
                            (0..d)
                                .map(|_| rat(rng.random_range(-4i64..=4), 2))
                                .collect(),
                        )
                        .unwrap(),
                    );
                }
                for q in &queries {
                    let cert = hull_membership(q, &gens).unwrap();
                    assert!(cert.verify(q, &gens), "certificate must self-verify");
                    let lp_inside = cert.is_inside();
                    let oracle = oracle_in_hull(q, &gens);
                    assert_eq!(
                        lp_inside, oracle,
                        "disagreement at {q} over {gens:?} (d={d}, k={ycount})"
                    );
                    cases += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "criterion 6 must finish within 60 s, took {elapsed:?}"
    );
    println!("ACCEPTANCE 6: PASS ({cases} membership queries, {elapsed:?})");
}

// --------------------------------------------------------------------------
// Criterion 7: geometric lemmas on random rational convex polygons.
// --------------------------------------------------------------------------

/// Distinct rational points on the unit circle via the tangent
/// half-angle parametrization, in circular order.
fn random_convex_polygon(vertices: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let mut params: Vec<Rat> = Vec::new();
    while params.len() < vertices {
        let t = rat(rng.random_range(-40i64..=40), rng.random_range(1i64..=8));
        if !params.contains(&t) {
            params.push(t);
        }
    }
    params.sort();
    params
        .into_iter()
        .map(|t| {
            let t2 = &t * &t;
            let denom = &t2 + Rat::one();
            Point::new(vec![
                (Rat::one() - &t2) / denom.clone(),
                (rat(2, 1) * &t) / denom,
            ])
            .unwrap()
        })
        .collect()
}

/// Criterion 7, first lemma: the intersection point of two interleaved
/// diagonals lies in the triangle spanned by either diagonal's endpoints
/// and any vertex of the far arc.
#[test]
fn criterion_7_diagonal_intersection_lemma() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0707);
    let mut triangles = 0u64;
    for case in 0..500 {
        let n = 5 + case % 5;
        let poly = random_convex_polygon(n, &mut rng);
        // confirm the parametrization produced convex position
        let order = convex_position_order(&poly).unwrap();
        assert_eq!(order.len(), n);
        for p in 0..n {
            for i in p + 1..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let s = segment_intersection(&poly[p], &poly[j], &poly[i], &poly[k])
                            .unwrap()
                            .expect("interleaved diagonals of a convex polygon meet");
                        // far arc: strictly after k, wrapping before p
                        for q in (k + 1..n).chain(0..p) {
                            assert!(
                                point_in_triangle(&s, &poly[q], &poly[i], &poly[j]).unwrap(),
                                "case {case}: s={s} outside triangle ({q},{i},{j})"
                            );
                            triangles += 1;
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "lemma suite must stay within 60 s, took {elapsed:?}"
    );
    println!("ACCEPTANCE 7a: PASS ({triangles} triangle checks, {elapsed:?})");
}

/// Criterion 7, second lemma: with one class separated in the circular
/// order, the three pairwise hulls cover the polygon (vertices and a
/// rational grid).
#[test]
fn criterion_7_three_class_cover_lemma() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0708);
    for case in 0..500 {
        let n = 5 + case % 5;
        let poly = random_convex_polygon(n, &mut rng);
        let ground = GroundSet::new((0..n).map(|i| format!("v{i}"))).unwrap();
        let config = PointConfig::new(&ground, poly).unwrap();
        // random three-class split, resampled until one class is separated
        let report = loop {
            let classes: Vec<u8> = (0..n).map(|_| rng.random_range(0u8..3)).collect();
            if classes.iter().filter(|&&c| c == 0).count() == 0
                || classes.iter().filter(|&&c| c == 1).count() == 0
                || classes.iter().filter(|&&c| c == 2).count() == 0
            {
                continue;
            }
            let mask = |cls: u8| -> Subset {
                let bits = classes
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c == cls)
                    .fold(0u64, |acc, (i, _)| acc | 1 << i);
                Subset::from_bits(&ground, bits).unwrap()
            };
            match check_lemma_abc(&config, &mask(0), &mask(1), &mask(2), 8) {
                Ok(report) => break report,
                Err(_) => continue, // no class separated; resample
            }
        };
        assert!(report.holds, "case {case}: cover violated: {report}");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "lemma suite must stay within 60 s, took {elapsed:?}"
    );
    println!("ACCEPTANCE 7b: PASS (500 polygons, {elapsed:?})");
}

/// Criterion 8: closure-operator axioms and the equivalence of the
/// one-element-extension axiom with anti-exchange, exhaustively over all
/// zero-closed intersection-closed families on up to four elements.
#[test]
fn criterion_8_exhaustive_small_families() {
    let start = Instant::now();
    let mut families = 0u64;
    for n in 1..=4usize {
        let ground = GroundSet::new((0..n).map(|i| format!("e{i}"))).unwrap();
        let full = ground.full_mask();
        for masks in enumerate_closure_families(n) {
            let fam = ClosedFamily::from_masks(&ground, masks).unwrap();
            families += 1;
            for s in 0..=full {
                let cl = fam.close_mask(s);
                assert_eq!(s & !cl, 0, "extensive");
                assert_eq!(fam.close_mask(cl), cl, "idempotent");
                for t in 0..=full {
                    if s & !t == 0 {
                        assert_eq!(cl & !fam.close_mask(t), 0, "monotone");
                    }
                }
            }
            assert_eq!(
                is_convex_geometry(&fam).holds,
                satisfies_anti_exchange(&fam).holds,
                "axiom equivalence on {:?}",
                fam.masks()
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "criterion 8 must stay within 120 s, took {elapsed:?}"
    );
    println!("ACCEPTANCE 8: PASS ({families} families, {elapsed:?})");
}

/// Criterion 9: two runs of the full gallery produce byte-identical
/// output and succeed.
#[test]
fn criterion_9_gallery_determinism() {
    let bin = env!("CARGO_BIN_EXE_cvxgeo");
    let run = || {
        std::process::Command::new(bin)
            .args(["paper", "--all"])
            .output()
            .expect("gallery run")
    };
    let first = run();
    let second = run();
    assert!(
        first.status.success(),
        "gallery must exit 0:\n{}",
        String::from_utf8_lossy(&first.stdout)
    );
    assert!(second.status.success());
    assert_eq!(
        first.stdout, second.stdout,
        "gallery output must be byte-identical"
    );
    assert_eq!(first.stderr, second.stderr);
    println!(
        "ACCEPTANCE 9: PASS ({} bytes of report)",
        first.stdout.len()
    );
}

// --------------------------------------------------------------------------
// Cross-module invariants tied to the criteria.
// --------------------------------------------------------------------------

/// Every realization from criterion-4-style sampling is accepted by the
/// geometry checker, and the doubling constructions realize as claimed.
#[test]
fn realizations_are_convex_geometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0440);
    for case in 0..24 {
        let size = 3 + case % 4;
        let cfg = random_planar_config(size, &mut rng);
        let fam = build_geometry(&cfg).unwrap();
        assert!(is_convex_geometry(&fam).holds);
        assert!(satisfies_anti_exchange(&fam).holds);
    }
    for n in [2usize, 3] {
        let fam = build_geometry(&build_dn(n).unwrap()).unwrap();
        assert!(is_convex_geometry(&fam).holds);
        let fam = build_geometry(&build_gn1(n).unwrap()).unwrap();
        assert!(is_convex_geometry(&fam).holds);
    }
}

/// Monotonicity of the rule checkers in the parameter, on the shipped
/// families.
#[test]
fn rule_monotonicity_on_gallery_families() {
    let (g, h) = example_section5();
    let mut families = vec![counterexample_sharp(), g, h, build_cn(2).unwrap()];
    families.push(build_geometry(&build_dn(2).unwrap()).unwrap());
    for fam in &families {
        let top = fam.ground().size();
        let mut prev_car = false;
        let mut prev_rou = false;
        for n in 1..top {
            let car = check_caratheodory(fam, n).unwrap().holds;
            let rou = check_carousel(fam, n).unwrap().holds;
            assert!(
                !prev_car || car,
                "caratheodory monotone on {:?}",
                fam.masks()
            );
            assert!(!prev_rou || rou, "carousel monotone on {:?}", fam.masks());
            prev_car = car;
            prev_rou = rou;
        }
    }
}

/// Sharp-rule necessity: small geometries that embed into a planar
/// realization satisfy the sharp rule.
#[test]
fn sharp_rule_holds_on_embeddable_geometries() {
    let targets: Vec<_> = {
        let g = GroundSet::new(["p0", "p1", "p2", "p3", "p4"]).unwrap();
        let pentagon = PointConfig::new(
            &g,
            vec![
                Point::from_i64(&[0, 0]),
                Point::from_i64(&[4, 0]),
                Point::from_i64(&[6, 3]),
                Point::from_i64(&[2, 6]),
                Point::from_i64(&[-2, 3]),
            ],
        )
        .unwrap();
        let g2 = GroundSet::new(["q0", "q1", "q2", "q3", "m"]).unwrap();
        let quad = PointConfig::new(
            &g2,
            vec![
                Point::from_i64(&[0, 0]),
                Point::from_i64(&[4, 0]),
                Point::from_i64(&[4, 4]),
                Point::from_i64(&[0, 4]),
                Point::from_i64(&[1, 2]),
            ],
        )
        .unwrap();
        vec![build_dn(2).unwrap(), pentagon, quad]
    };
    let target_lats: Vec<_> = targets
        .iter()
        .map(|c| build_lattice(&build_geometry(c).unwrap()).unwrap())
        .collect();
    for fam in enumerate_convex_geometries(3) {
        let lat = build_lattice(&fam).unwrap();
        let embeds = target_lats
            .iter()
            .any(|t| find_subgeometry_embedding(&lat, t).unwrap().is_some());
        if embeds {
            assert!(
                check_sharp_carousel_2(&fam).unwrap().holds,
                "embeddable geometry must satisfy the sharp rule: {:?}",
                fam.masks()
            );
        }
    }
}

/// The strong extension of the gallery pair loses the caratheodory bound
/// one parameter below the ambient dimension while remaining atomistic.
#[test]
fn negative_transfer_under_strong_extension() {
    let (g, h) = example_section5();
    assert!(is_strong_extension(&g, &h).unwrap().holds);
    assert!(is_atomistic(&h).holds);
    assert!(check_caratheodory(&g, 2).unwrap().holds);
    assert!(!check_caratheodory(&h, 2).unwrap().holds);
    // and the identity embedding between the lattices verifies
    let gl = build_lattice(&g).unwrap();
    let hl = build_lattice(&h).unwrap();
    let map: Vec<usize> = (0..gl.len())
        .map(|i| hl.family().position(gl.mask(i)).unwrap())
        .collect();
    let emb = cvxgeo::lattice::EmbeddingMap::new(gl, hl, map).unwrap();
    assert!(verify_embedding(&emb).holds);
}

/// The carousel rule implies the caratheodory property at every parameter
/// on every convex geometry with at most four elements.
#[test]
fn carousel_implies_caratheodory_exhaustively() {
    for n in 2..=4usize {
        for fam in enumerate_convex_geometries(n) {
            for k in 1..n {
                let report = cvxgeo::rules::check_carousel_implies_caratheodory(&fam, k).unwrap();
                assert!(
                    report.holds,
                    "implication failed on {:?} at n={k}",
                    fam.masks()
                );
            }
        }
    }
}

/// Certificates from the hull decision self-verify and reject tampering.
#[test]
fn hull_certificates_replay() {
    let tri = [
        Point::from_i64(&[0, 0]),
        Point::from_i64(&[3, 0]),
        Point::from_i64(&[0, 3]),
    ];
    let inside = hull_membership(&Point::from_i64(&[1, 1]), &tri).unwrap();
    assert!(inside.verify(&Point::from_i64(&[1, 1]), &tri));
    assert!(
        !inside.verify(&Point::from_i64(&[2, 2]), &tri),
        "certificate is query-specific"
    );
    let outside = hull_membership(&Point::from_i64(&[4, 4]), &tri).unwrap();
    match &outside {
        HullCertificate::Outside { separator } => {
            assert!(!separator.normal.iter().all(|c| c.is_zero()));
        }
        other => panic!("expected outside certificate, got {other:?}"),
    }
    assert!(outside.verify(&Point::from_i64(&[4, 4]), &tri));
}

/// The gallery items themselves all pass; this is the library-level view
/// of what `paper --all` reports.
#[test]
fn gallery_claims_all_pass() {
    let runs = gallery::run_all().unwrap();
    assert!(
        runs.len() >= 40,
        "expected a substantial claim list, got {}",
        runs.len()
    );
    for run in &runs {
        assert!(
            run.pass(),
            "claim `{}` of `{}`: expected `{}`, got `{}`",
            run.claim,
            run.item,
            run.expected,
            run.actual
        );
    }
}

/// Added-set bookkeeping for the augmented families, pinned.
#[test]
fn augmented_family_shape() {
    for n in [2usize, 3] {
        let c = build_cn(n).unwrap();
        let d = build_geometry(&build_dn(n).unwrap()).unwrap();
        assert_eq!(c.len(), d.len() + 2);
        let (a1, a2) = cn_added_masks(n).unwrap();
        assert_ne!(a1, a2);
        assert!(c.contains_mask(a1) && c.contains_mask(a2));
    }
}
