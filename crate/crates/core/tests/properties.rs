mod common;

use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

use common::{collinear_oracle, first_triple, naive_max, q};
use n3l::bounds::{compare_table, from_csv, paper_bound, rounded, to_csv, BoundsRow, Source};
use n3l::compression::{
    ball_of, compress, compress_vector, gap_squared_direct, gap_squared_identity, mass, on_boundary, CompressionScale,
    CompressionVector,
};
use n3l::constructions::{erdos_parabola, greedy, is_prime, sphere_section, SphereSpec};
use n3l::geometry::{collinear3, primitive_direction, verify_no_three, BoundingBox, GridPoint, PointSet, Verdict};
use n3l::pointfile::{parse_points, write_points};
use n3l::rational::Rational;
use n3l::solver::{exact_max, is_maximal, SolveOptions};

fn gp(c: &[i64]) -> GridPoint {
    GridPoint::new(c.to_vec()).unwrap()
}

fn point(d: usize, lim: i64) -> impl Strategy<Value = Vec<i64>> {
    vec(-lim..=lim, d)
}

/// Three points in a shared dimension; often collinear because the range is
/// narrow.
fn triple() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>)> {
    (2usize..=4).prop_flat_map(|d| (point(d, 4), point(d, 4), point(d, 4)))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| q(n, d))
}

fn compression_vector() -> impl Strategy<Value = Vec<Rational>> {
    (2usize..=6).prop_flat_map(|d| btree_set(rational(), d).prop_map(|s| s.into_iter().collect::<Vec<_>>()))
        .prop_shuffle()
}

fn scale() -> impl Strategy<Value = CompressionScale> {
    prop_oneof![Just(q(1, 3)), Just(q(1, 1)), Just(q(7, 2)), Just(q(1, 2)), Just(q(2, 1))]
        .prop_map(|m| CompressionScale::new(m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn collinearity_ignores_order_and_translation((a, b, c) in triple(), shift in point(4, 1_000_000)) {
        prop_assume!(a != b && b != c && a != c);
        let base = collinear3(&gp(&a), &gp(&b), &gp(&c)).unwrap();
        prop_assert_eq!(base, collinear_oracle(&a, &b, &c));
        for (x, y, z) in [(&a, &c, &b), (&b, &a, &c), (&b, &c, &a), (&c, &a, &b), (&c, &b, &a)] {
            prop_assert_eq!(collinear3(&gp(x), &gp(y), &gp(z)).unwrap(), base);
        }
        let t = |p: &Vec<i64>| -> GridPoint { gp(&p.iter().zip(&shift).map(|(u, s)| u + s).collect::<Vec<_>>()) };
        prop_assert_eq!(collinear3(&t(&a), &t(&b), &t(&c)).unwrap(), base);
    }

    #[test]
    fn primitive_direction_is_scale_free(v in (2usize..=5).prop_flat_map(|d| point(d, 1000)), c in -50i64..=50) {
        prop_assume!(v.iter().any(|&x| x != 0) && c != 0);
        let scaled: Vec<i64> = v.iter().map(|x| x * c).collect();
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        let p = primitive_direction(&v).unwrap();
        prop_assert_eq!(&primitive_direction(&scaled).unwrap(), &p);
        prop_assert_eq!(&primitive_direction(&neg).unwrap(), &p);
        let first = p.iter().find(|&&x| x != 0).unwrap();
        prop_assert!(*first > 0);
    }

    #[test]
    fn small_sets_always_pass(pts in (2usize..=4).prop_flat_map(|d| btree_set(point(d, 100), 0..=2))) {
        let d = pts.iter().next().map_or(2, |p| p.len());
        let set = PointSet::from_points(d, pts.iter().map(|p| gp(p)).collect()).unwrap();
        prop_assert!(verify_no_three(&set).is_pass());
    }

    #[test]
    fn involution_and_gap_identity(x in compression_vector(), m in scale()) {
        let v = CompressionVector::from_rationals(x).unwrap();
        prop_assert_eq!(&compress(&compress_vector(&v, &m), &m), v.as_vector());
        prop_assert_eq!(gap_squared_direct(&v, &m), gap_squared_identity(&v, &m));
    }

    #[test]
    fn mass_is_linear_in_scale(x in compression_vector(), m in scale()) {
        let v = CompressionVector::from_rationals(x).unwrap();
        prop_assert_eq!(mass(&v, &m), m.value() * mass(&v, &CompressionScale::one()));
    }

    #[test]
    fn generators_are_admissible(x in compression_vector(), m in scale()) {
        let v = CompressionVector::from_rationals(x).unwrap();
        match ball_of(&v, &m) {
            Ok(b) => {
                prop_assert!(on_boundary(&b, v.as_vector()).unwrap());
                prop_assert!(on_boundary(&b, &compress(&v, &m)).unwrap());
            }
            Err(n3l::Error::DegenerateBall(_)) => {
                prop_assert!(gap_squared_direct(&v, &m).is_zero());
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn points_file_round_trips(pts in (2usize..=5).prop_flat_map(|d| btree_set(point(d, 1 << 40), 0..30).prop_map(move |s| (d, s)))) {
        let (d, pts) = pts;
        let set = PointSet::from_points(d, pts.iter().map(|p| gp(p)).collect()).unwrap();
        let text = write_points(&set);
        let back = parse_points(&text, None).unwrap();
        prop_assert_eq!(back.points(), set.points());
        prop_assert_eq!(write_points(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verifier_agrees_with_all_triples(
        (d, pts) in (2usize..=3).prop_flat_map(|d| (Just(d), btree_set(point(d, 3), 0..=40)))
    ) {
        let pts: Vec<Vec<i64>> = pts.into_iter().collect();
        let set = PointSet::from_points(d, pts.iter().map(|p| gp(p)).collect()).unwrap();
        match (verify_no_three(&set), first_triple(&pts)) {
            (Verdict::Pass, None) => {}
            (Verdict::Fail(w), Some((a, b, c))) => {
                prop_assert_eq!(w[0].coords(), pts[a].as_slice());
                prop_assert_eq!(w[1].coords(), pts[b].as_slice());
                prop_assert_eq!(w[2].coords(), pts[c].as_slice());
            }
            (v, o) => prop_assert!(false, "verifier {:?} vs oracle {:?}", v, o),
        }
    }

    #[test]
    fn sphere_sections_are_sound(
        d in 2usize..=3,
        n in 2i64..=32,
        c in vec(0i64..=66, 3),
        r in 0i128..=1 << 14,
    ) {
        let center2: Vec<i64> = c[..d].iter().map(|v| v % (2 * n + 1) + 1).collect();
        let spec = SphereSpec::from_doubled(center2.clone(), r, BoundingBox::grid(n, d));
        let s = sphere_section(&spec);
        prop_assert!(verify_no_three(&s).is_pass());
        let scanned: Vec<Vec<i64>> = common::grid(n, d)
            .into_iter()
            .filter(|p| {
                let dist: i128 = p.iter().zip(&center2).map(|(&x, &c2)| {
                    let t = 2 * x as i128 - c2 as i128;
                    t * t
                }).sum();
                dist == r
            })
            .collect();
        let got: Vec<Vec<i64>> = s.sorted().iter().map(|p| p.coords().to_vec()).collect();
        prop_assert_eq!(got, scanned);
    }

    #[test]
    fn greedy_is_sound_and_maximal(n in 2u64..=12, d in 2usize..=3, seed in any::<u64>()) {
        let n = if d == 3 { n.min(6) } else { n };
        let g = greedy(n, d, seed).unwrap();
        prop_assert!(verify_no_three(&g.points).is_pass());
        prop_assert!(is_maximal(&g.points, n, d).unwrap());
    }
}

/// The 8 symmetries of the square applied about the center of `{1..n}²`.
fn dihedral(p: &[i64], n: i64, k: usize) -> Vec<i64> {
    let (x, y) = (p[0], p[1]);
    let f = |v: i64| n + 1 - v;
    match k {
        0 => vec![x, y],
        1 => vec![f(y), x],
        2 => vec![f(x), f(y)],
        3 => vec![y, f(x)],
        4 => vec![f(x), y],
        5 => vec![x, f(y)],
        6 => vec![y, x],
        _ => vec![f(y), f(x)],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn centered_circles_have_dihedral_symmetry(n in 2i64..=30, r in 0i128..=4000) {
        let spec = SphereSpec::from_doubled(vec![n + 1, n + 1], r, BoundingBox::grid(n, 2));
        let s = sphere_section(&spec);
        let set: BTreeSet<Vec<i64>> = s.iter().map(|p| p.coords().to_vec()).collect();
        for k in 0..8 {
            let image: BTreeSet<Vec<i64>> = set.iter().map(|p| dihedral(p, n, k)).collect();
            prop_assert_eq!(&image, &set);
        }
    }

    #[test]
    fn paper_bound_grows_with_n(n in 1u64..=10_000, d in 2usize..=6) {
        prop_assert!(paper_bound(n + 1, d).unwrap() > paper_bound(n, d).unwrap());
        let ratio = paper_bound(n, 2).unwrap() / n as f64;
        prop_assert!((ratio - 2f64.powf(0.25)).abs() < 1e-12);
    }
}

#[test]
fn erdos_parabola_has_one_point_per_column() {
    for p in (2..=101).filter(|&p| is_prime(p)) {
        let s = erdos_parabola(p).unwrap();
        assert_eq!(s.len() as u64, p);
        let cols: BTreeSet<i64> = s.iter().map(|pt| pt.coords()[0]).collect();
        assert_eq!(cols.len() as u64, p);
        assert!(verify_no_three(&s).is_pass());
    }
}

#[test]
fn solver_matches_naive_enumeration() {
    for (n, d) in [(2, 2), (3, 2), (4, 2), (2, 3)] {
        assert_eq!(exact_max(n, d, &SolveOptions::default()).unwrap().max_count, naive_max(n as i64, d), "n={n} d={d}");
    }
}

#[test]
fn solver_is_monotone_and_respects_ceiling() {
    let sizes: Vec<usize> = (1..=7).map(|n| exact_max(n, 2, &SolveOptions::default()).unwrap().max_count).collect();
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    for (i, s) in sizes.iter().enumerate() {
        assert!(*s <= 2 * (i + 1));
    }
    let d3: Vec<usize> = (1..=3).map(|n| exact_max(n, 3, &SolveOptions::default()).unwrap().max_count).collect();
    assert_eq!(d3, vec![1, 8, 16]);
}

#[test]
fn symmetry_reduction_matches_full_search() {
    for (n, d) in [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)] {
        let full = exact_max(n, d, &SolveOptions::default()).unwrap();
        let reduced = exact_max(n, d, &SolveOptions { symmetry_reduction: true, ..Default::default() }).unwrap();
        assert_eq!(full.max_count, reduced.max_count, "n={n} d={d}");
        assert!(verify_no_three(&reduced.witness).is_pass());
    }
}

#[test]
fn solver_witness_is_thread_independent() {
    for (n, d) in [(6, 2), (3, 3)] {
        let one = exact_max(n, d, &SolveOptions::default()).unwrap();
        for threads in [2, 4] {
            let many = exact_max(n, d, &SolveOptions { threads, ..Default::default() }).unwrap();
            assert_eq!(many.witness, one.witness);
            assert_eq!(many.nodes_explored, one.nodes_explored);
        }
    }
}

#[test]
fn exact_values_clear_the_bound_for_small_planar_grids() {
    for n in 2..=5 {
        let r = exact_max(n, 2, &SolveOptions::default()).unwrap();
        assert!(r.max_count as f64 >= paper_bound(n, 2).unwrap(), "n={n}");
    }
}

#[test]
fn single_cell_grid_falls_below_the_bound() {
    let r = exact_max(1, 2, &SolveOptions::default()).unwrap();
    assert_eq!(r.max_count, 1);
    assert!((r.max_count as f64) < paper_bound(1, 2).unwrap());
}

#[test]
fn csv_round_trips_through_parse() {
    let mut rows: Vec<BoundsRow> = compare_table(2..=6, 2, &[Source::Exact, Source::Sphere]).unwrap();
    rows.extend(compare_table(2..=4, 3, &[Source::Sphere, Source::Greedy]).unwrap());
    rows.extend(compare_table([20], 2, &[Source::Exact]).unwrap());
    let text = to_csv(&rows);
    let parsed = from_csv(&text).unwrap();
    assert_eq!(parsed, rows.iter().map(rounded).collect::<Vec<_>>());
    assert_eq!(to_csv(&parsed), text);
}

#[test]
fn harmonic_oracle_agrees_at_small_n() {
    for n in 1..=60u64 {
        let lib = n3l::compression::harmonic_sum(n).unwrap();
        assert_eq!(lib, common::harmonic_oracle(n));
    }
    assert!(n3l::compression::harmonic_sum(0).is_err());
}
