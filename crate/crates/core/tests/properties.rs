//! Seeded property checks across module boundaries.

use hessemon::catalog;
use hessemon::locus::{inflection_points, label_against};
use hessemon::perm::{hes, PermGroup};
use hessemon::rng::{complex_normal, random_cubic, random_gl3, random_nodal_cubic, seeded};
use hessemon::strata::{classify, crossing_parameters};
use hessemon::track::{basepoint_labels, bypass_loop, star_bypass, track_loop};
use hessemon::{Loop, Pencil, Segment, TrackingConfig, C64};
use proptest::prelude::*;
use rand::Rng;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn euler_identity(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let f = random_cubic(&mut rng);
        let z = [complex_normal(&mut rng), complex_normal(&mut rng), complex_normal(&mut rng)];
        let g = f.grad(&z);
        let lhs: C64 = (0..3).map(|i| z[i] * g[i]).sum();
        let rhs = f.eval(&z) * 3.0;
        let scale = f.max_modulus() * z.iter().map(|c| c.norm()).fold(0.0, f64::max).powi(3);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * scale);
    }

    #[test]
    fn orbit_stabilizer(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let elems = hes().elements().to_vec();
        let gens: Vec<_> = (0..rng.random_range(1..3usize))
            .map(|_| elems[rng.random_range(0..elems.len())])
            .collect();
        let g = PermGroup::closure(&gens);
        for letter in 1..=9 {
            prop_assert_eq!(g.order(), g.orbit(letter).len() * g.stabilizer(letter).order());
        }
    }

    #[test]
    fn inflection_scheme_is_projectively_equivariant(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let f = random_cubic(&mut rng);
        let m = random_gl3(&mut rng);
        let here = inflection_points(&f).unwrap();
        let there = inflection_points(&f.compose(&m)).unwrap();
        prop_assert!(here.all_simple() && there.all_simple());
        prop_assert_eq!(there.points.len(), 9);
        let refs = here.projective_points();
        for q in there.projective_points() {
            let image = q.transform(&m).normalized();
            let d = refs.iter().map(|r| r.distance(&image)).fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-8, "distance {d:e}");
        }
    }
}

proptest! {
    #![proptest_config(cases(50))]

    #[test]
    fn classification_is_projectively_invariant(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let m = random_gl3(&mut rng);
        for name in catalog::NAMES {
            let f = catalog::by_name(name).unwrap();
            let (want, _) = classify(&f).unwrap();
            let (got, _) = classify(&f.compose(&m)).unwrap();
            prop_assert_eq!(got, want, "{}", name);
        }
    }

    #[test]
    fn singular_multiplicities_are_projectively_invariant(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let m = random_gl3(&mut rng);
        for (f, want) in [(catalog::nodal(), vec![1, 1, 1, 6]), (catalog::cuspidal(), vec![1, 8])] {
            let mut got = inflection_points(&f.compose(&m)).unwrap().multiplicities();
            got.sort();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn small_circles_off_the_discriminant_are_trivial(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let f = random_cubic(&mut rng);
        let labels = basepoint_labels(&f).unwrap();
        let d = random_cubic(&mut rng);
        let r = 1e-3 * rng.random_range(0.5..2.0);
        let l = Loop::new(
            f,
            vec![Segment::Arc {
                center: f.sub(&d.scale(C64::new(r, 0.0))),
                direction: d,
                radius: r,
                turn_start: 0.0,
                turn_end: 1.0,
            }],
        )
        .unwrap();
        let res = track_loop(&l, &labels, &TrackingConfig::default()).unwrap();
        prop_assert!(res.perm.is_identity());
        prop_assert!(res.diagnostics.max_residual < 1e-8);
    }

    #[test]
    fn reversed_bypass_gives_the_inverse(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let f = random_cubic(&mut rng);
        let labels = basepoint_labels(&f).unwrap();
        let dir = random_cubic(&mut rng);
        let crossings: Vec<C64> = crossing_parameters(&Pencil::new(f, dir).unwrap())
            .unwrap()
            .into_iter()
            .map(|(s, _)| s)
            .collect();
        // the crossing with the most room around it
        let room = |k: usize| {
            crossings
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, o)| (o - crossings[k]).norm())
                .fold(crossings[k].norm(), f64::min)
        };
        let k = (0..crossings.len()).max_by(|&a, &b| room(a).total_cmp(&room(b))).unwrap();
        let l = star_bypass(&f, &dir, crossings[k], 0.2 * room(k)).unwrap();
        let cfg = TrackingConfig::default();
        let fwd = track_loop(&l, &labels, &cfg).unwrap();
        let back = track_loop(&l.reversed(), &labels, &cfg).unwrap();
        prop_assert_eq!(back.perm, fwd.perm.inverse());
        prop_assert!(!fwd.perm.is_identity());
        prop_assert!(fwd.diagnostics.min_pairwise_separation > cfg.proximity_guard);
    }
}

#[test]
fn nodal_bypass_cycle_type_is_independent_of_the_approach() {
    let mut rng = seeded(77);
    let target = random_nodal_cubic(&mut rng);
    let cfg = TrackingConfig::default();
    let mut done = 0;
    while done < 5 {
        let base = random_cubic(&mut rng);
        let Ok(labels) = basepoint_labels(&base) else { continue };
        let pencil = Pencil::new(base, target.sub(&base)).unwrap();
        let gap = crossing_parameters(&pencil)
            .unwrap()
            .iter()
            .map(|(s, _)| (s - C64::new(1.0, 0.0)).norm())
            .filter(|&d| d > 1e-6)
            .fold(f64::INFINITY, f64::min);
        let l = bypass_loop(&base, &target, 0.2 * gap).unwrap();
        let r = track_loop(&l, &labels, &cfg).unwrap();
        assert_eq!(r.perm.cycle_type(), vec![3, 3, 1, 1, 1]);
        done += 1;
    }
}

#[test]
fn tracked_points_stay_inflection_points_along_a_line() {
    let mut rng = seeded(8);
    let f = random_cubic(&mut rng);
    let g = random_cubic(&mut rng);
    let labels = basepoint_labels(&f).unwrap();
    let moved =
        hessemon::track::transport_labels(&[Segment::Line { from: f, to: g }], &labels, &TrackingConfig::default())
            .unwrap();
    let fresh = inflection_points(&g).unwrap().with_positional_labels();
    let matched = label_against(&fresh, &moved).unwrap();
    let mut sorted = matched.clone();
    sorted.sort();
    assert_eq!(sorted, (1..=9).collect::<Vec<_>>());
}
