//! End-to-end acceptance sweeps. Each test prints one pass/fail line for its
//! criterion (visible with `--nocapture`); a failing criterion also fails the
//! test.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};

use contact_census::census::{
    eta_shape, exceptional_count, exceptional_enumerate, torus_from_invariants, torus_invariants,
    SeifertDescriptor,
};
use contact_census::dividing_sets::{
    attach_template, close_annulus, concatenate, elementary_template, AnnulusArc, AnnulusSet, End,
    Side, TemplateVerdict,
};
use contact_census::farey::shortest_path;
use contact_census::lattice::{cf_expand, gcd, Rational, Slope};
use contact_census::solid_torus::{
    boundary_for_twisting, count_tight, enumerate_sign_tuples, enumerate_tight, fiber_count,
    fiber_count_via_coordinate_change,
};
use contact_census::traversal::{eta_invariants, initial_state, traverse, Verdict};

fn criterion(name: &str, body: impl FnOnce() + UnwindSafe) {
    let result = catch_unwind(body);
    match &result {
        Ok(()) => println!("{name}: pass"),
        Err(_) => println!("{name}: FAIL"),
    }
    if let Err(e) = result {
        resume_unwind(e);
    }
}

/// Reduced fractions p/q in (0, 1) with q up to the bound.
fn fractions(max_denominator: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 2..=max_denominator {
        for p in 1..q {
            if gcd(p, q) == 1 {
                out.push(Rational::new(p, q));
            }
        }
    }
    out
}

/// Integers t with -1/r < t <= 0 (the union of the admissible twisting
/// numbers over all base Euler numbers).
fn admissible_range(r: Rational) -> Vec<i64> {
    let mut out = Vec::new();
    let mut t = 0i64;
    while Rational::from_integer(t) > -r.recip() {
        out.push(t);
        t -= 1;
    }
    out
}

#[test]
fn acceptance_1_triple_agreement() {
    criterion("AC1 triple-agreement sweep (denominator <= 40)", || {
        for r in fractions(40) {
            for t in admissible_range(r) {
                let formula = fiber_count(t, r).unwrap();
                let boundary = boundary_for_twisting(t, r).unwrap();
                let counted = count_tight(&boundary).unwrap();
                let enumerated = enumerate_tight(&boundary).unwrap().len() as u64;
                assert_eq!(formula, counted, "r={r}, t={t}");
                assert_eq!(formula, enumerated, "r={r}, t={t}");
            }
        }
    });
}

#[test]
fn acceptance_2_coordinate_change() {
    criterion("AC2 coordinate-change identity (denominator <= 40)", || {
        for r in fractions(40) {
            let base = cf_expand(-r.recip()).unwrap();
            for t in admissible_range(r) {
                let r_shift = (r.recip() + Rational::from_integer(t + 1)).recip();
                let shifted = cf_expand(-r_shift.recip()).unwrap();
                let mut want = base.coefficients().to_vec();
                want[0] -= t + 1;
                assert_eq!(shifted.coefficients(), want.as_slice(), "r={r}, t={t}");
                assert_eq!(
                    fiber_count(t, r).unwrap(),
                    fiber_count_via_coordinate_change(t, r).unwrap(),
                    "r={r}, t={t}"
                );
            }
        }
    });
}

#[test]
fn acceptance_3_exceptional_counts() {
    criterion("AC3 exceptional counts (e0 in 1..=5, denominator <= 30)", || {
        for e0 in 1..=5i64 {
            for r in fractions(30) {
                let m = SeifertDescriptor::new(e0, r).unwrap();
                let count = exceptional_count(&m).unwrap();
                let classes = exceptional_enumerate(&m).unwrap();
                assert_eq!(count, classes.len() as u64, "e0={e0}, r={r}");
            }
        }
        // Fixed points quoted in the classification.
        let fixed = [
            (2, Rational::new(2, 5), 4u64),
            (3, Rational::new(2, 5), 6),
            (1, Rational::new(4, 11), 4),
        ];
        for (e0, r, want) in fixed {
            let m = SeifertDescriptor::new(e0, r).unwrap();
            assert_eq!(exceptional_count(&m).unwrap(), want, "e0={e0}, r={r}");
        }
        // -1/r integral: always two exceptional structures when e0 = 1.
        for n in 2..=30i64 {
            let m = SeifertDescriptor::new(1, Rational::new(1, n)).unwrap();
            assert_eq!(exceptional_count(&m).unwrap(), 2, "r=1/{n}");
        }
    });
}

#[test]
fn acceptance_4_vanishing_boundary() {
    criterion("AC4 vanishing boundary (denominator <= 60, |t| <= 80)", || {
        for r in fractions(60) {
            for t in -80..=0i64 {
                let vanishes = Rational::from_integer(t) <= -r.recip();
                assert_eq!(fiber_count(t, r).unwrap() == 0, vanishes, "r={r}, t={t}");
            }
            for t in 1..=80i64 {
                assert!(fiber_count(t, r).is_err(), "r={r}, t={t}");
            }
        }
    });
}

#[test]
fn acceptance_5_farey_oracle() {
    criterion("AC5 Farey distance oracle (pairs with denominator <= 12)", || {
        // Explicit graph on all slopes with |numerator|, denominator <= 64.
        let mut vertices = vec![Slope::INFINITY];
        for q in 1..=64i64 {
            for p in -64..=64i64 {
                if gcd(p, q) == 1 {
                    vertices.push(Slope::from_rational(Rational::new(p, q)));
                }
            }
        }
        vertices.sort();
        vertices.dedup();
        let index: HashMap<Slope, usize> = vertices.iter().copied().zip(0..).collect();
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); vertices.len()];
        for i in 0..vertices.len() {
            let (ix, iy) = vertices[i].vector();
            for j in (i + 1)..vertices.len() {
                let (jx, jy) = vertices[j].vector();
                if (ix * jy - iy * jx).abs() == 1 {
                    adjacency[i].push(j as u32);
                    adjacency[j].push(i as u32);
                }
            }
        }
        let small: Vec<Slope> = vertices
            .iter()
            .copied()
            .filter(|s| s.denominator() <= 12 && s.numerator().abs() <= 12)
            .collect();
        for &a in &small {
            // BFS distances from a over the explicit graph.
            let mut dist: Vec<Option<u32>> = vec![None; vertices.len()];
            let mut queue = VecDeque::new();
            dist[index[&a]] = Some(0);
            queue.push_back(index[&a]);
            while let Some(i) = queue.pop_front() {
                for &j in &adjacency[i] {
                    if dist[j as usize].is_none() {
                        dist[j as usize] = Some(dist[i].unwrap() + 1);
                        queue.push_back(j as usize);
                    }
                }
            }
            for &b in &small {
                if a == b {
                    continue;
                }
                let path = shortest_path(&a, &b).unwrap();
                assert_eq!(
                    path.edge_count() as u32,
                    dist[index[&b]].unwrap(),
                    "a={a}, b={b}"
                );
            }
        }
    });
}

#[test]
fn acceptance_6_traversal() {
    criterion(
        "AC6 traversal verdicts and class counts (e0 in 1..=3, denominator <= 12)",
        || {
            for e0 in 1..=3i64 {
                for r in fractions(12) {
                    let m = SeifertDescriptor::new(e0, r).unwrap();
                    let shape = eta_shape(r).unwrap();
                    let mut tight_sets: Vec<BTreeSet<_>> = Vec::new();
                    for l in [2i64, -2] {
                        for eta in enumerate_sign_tuples(
                            &shape.iter().map(|&s| s as usize).collect::<Vec<_>>(),
                        ) {
                            let eta = eta_invariants(&m, eta.values().to_vec()).unwrap();
                            let start = initial_state(&m, l, eta.clone()).unwrap();
                            let verdict = traverse(&m, &start, 16).unwrap();
                            let verdict_small = traverse(&m, &start, 8).unwrap();
                            // Stability under growing the slope bound.
                            assert_eq!(
                                matches!(verdict, Verdict::Tight(_)),
                                matches!(verdict_small, Verdict::Tight(_)),
                                "e0={e0}, r={r}, l={l}, eta={:?}",
                                eta.values()
                            );
                            let predicted_tight = if e0 == 1 {
                                eta.values()[0] == l / 2 * shape[0] as i64
                            } else {
                                true
                            };
                            match verdict {
                                Verdict::Tight(states) => {
                                    assert!(
                                        predicted_tight,
                                        "e0={e0}, r={r}, l={l}, eta={:?}",
                                        eta.values()
                                    );
                                    tight_sets.push(states);
                                }
                                Verdict::Overtwisted(_) => {
                                    assert!(
                                        !predicted_tight,
                                        "e0={e0}, r={r}, l={l}, eta={:?}",
                                        eta.values()
                                    );
                                }
                            }
                        }
                    }
                    tight_sets.sort();
                    tight_sets.dedup();
                    assert_eq!(
                        tight_sets.len() as u64,
                        exceptional_count(&m).unwrap(),
                        "e0={e0}, r={r}"
                    );
                }
            }
        },
    );
}

/// All perfect matchings of the given points.
fn matchings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![vec![]];
    }
    let first = points[0];
    let mut out = Vec::new();
    for k in 1..points.len() {
        let partner = points[k];
        let rest: Vec<usize> = points[1..]
            .iter()
            .copied()
            .filter(|&p| p != partner)
            .collect();
        for mut tail in matchings(&rest) {
            tail.insert(0, (first, partner));
            out.push(tail);
        }
    }
    out
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Candidate annulus multicurves with the given marked-point counts: a
/// rotation family of through arcs plus matched boundary-parallel arcs, over
/// small winding choices. Invalid (crossing) candidates are filtered out by
/// construction-time validation.
fn small_annulus_sets(bottom: usize, top: usize) -> Vec<AnnulusSet> {
    let mut out = Vec::new();
    for through in
        (0..=bottom.min(top)).filter(|c| (bottom - c).is_multiple_of(2) && (top - c).is_multiple_of(2))
    {
        for bottom_through in subsets_of_size(bottom, through) {
            let bottom_rest: Vec<usize> =
                (0..bottom).filter(|p| !bottom_through.contains(p)).collect();
            for top_through in subsets_of_size(top, through) {
                let top_rest: Vec<usize> =
                    (0..top).filter(|p| !top_through.contains(p)).collect();
                for bottom_pairs in matchings(&bottom_rest) {
                    for top_pairs in matchings(&top_rest) {
                        let shifts = if through == 0 { 0..1 } else { 0..through };
                        for shift in shifts {
                            for w in -1..=1i64 {
                                for bp_w in [0i64, -1] {
                                    let mut arcs = Vec::new();
                                    for &(a, b) in &bottom_pairs {
                                        arcs.push(AnnulusArc::new(
                                            End::bottom(a),
                                            End::bottom(b),
                                            bp_w,
                                        ));
                                    }
                                    for &(a, b) in &top_pairs {
                                        arcs.push(AnnulusArc::new(End::top(a), End::top(b), bp_w));
                                    }
                                    for (i, &from) in bottom_through.iter().enumerate() {
                                        let raw = i + shift;
                                        arcs.push(AnnulusArc::new(
                                            End::bottom(from),
                                            End::top(top_through[raw % through]),
                                            w + (raw / through.max(1)) as i64,
                                        ));
                                    }
                                    if let Ok(set) =
                                        AnnulusSet::new(bottom, top, arcs, 0, 0, None)
                                    {
                                        out.push(set);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|s| format!("{s:?}"));
    out.dedup();
    out
}

/// Independent count of contractible components created when a template is
/// glued along one circle of `m`: walk the chains through the glued circle
/// directly on the arc data and count closed chains of zero displacement.
fn contractible_chains(m: &AnnulusSet, side: Side, template: &AnnulusSet) -> u64 {
    let glued = match side {
        Side::Bottom => m.bottom(),
        Side::Top => m.top(),
    };
    // For each glued point, the arc end of each layer at that point.
    let mut ends: BTreeMap<(u8, usize), (usize, bool)> = BTreeMap::new();
    let template_side = match side {
        Side::Bottom => Side::Top,
        Side::Top => Side::Bottom,
    };
    for (layer, set, s) in [(0u8, m, side), (1u8, template, template_side)] {
        for (idx, arc) in set.arcs().iter().enumerate() {
            if arc.from.side == s {
                ends.insert((layer, arc.from.index), (idx, true));
            }
            if arc.to.side == s {
                ends.insert((layer, arc.to.index), (idx, false));
            }
        }
    }
    let count_of = |set: &AnnulusSet, s: Side| match s {
        Side::Bottom => set.bottom(),
        Side::Top => set.top(),
    };
    // Lifted position of an arc end within its own annulus.
    let lift = |set: &AnnulusSet, arc: &AnnulusArc, at_from: bool| -> Rational {
        let (end, extra) = if at_from {
            (arc.from, 0)
        } else {
            (arc.to, arc.winding)
        };
        Rational::new(end.index as i64, count_of(set, end.side) as i64)
            + Rational::from_integer(extra)
    };
    let mut visited: BTreeSet<(u8, usize)> = BTreeSet::new();
    let mut contractible = 0u64;
    for start in 0..glued {
        if visited.contains(&(0, start)) {
            continue;
        }
        // Follow the chain beginning on the template side of this point.
        let mut layer = 1u8;
        let mut point = start;
        let mut displacement = Rational::from_integer(0);
        let mut closed = true;
        loop {
            let set = if layer == 0 { m } else { template };
            let s = if layer == 0 { side } else { template_side };
            let Some(&(idx, at_from)) = ends.get(&(layer, point)) else {
                closed = false;
                break;
            };
            let arc = &set.arcs()[idx];
            let other_at_from = !at_from;
            let other_end = if other_at_from { arc.from } else { arc.to };
            displacement += lift(set, arc, other_at_from) - lift(set, arc, at_from);
            if other_end.side != s {
                // The chain leaves through a free circle: open chain.
                closed = false;
                break;
            }
            if layer == 0 {
                visited.insert((0, point));
                visited.insert((0, other_end.index));
            }
            point = other_end.index;
            layer = 1 - layer;
            if layer == 1 && point == start {
                break;
            }
        }
        visited.insert((0, start));
        if closed && displacement == Rational::from_integer(0) {
            contractible += 1;
        }
    }
    contractible
}

#[test]
fn acceptance_7_template_oracle() {
    criterion("AC7 template/closure oracle (<= 6 marked points per side)", || {
        let mut checked = 0u64;
        for bottom in 0..=6usize {
            for top in 0..=6usize {
                if bottom + top == 0 {
                    continue;
                }
                for m in small_annulus_sets(bottom, top) {
                    for side in [Side::Bottom, Side::Top] {
                        let count = match side {
                            Side::Bottom => bottom,
                            Side::Top => top,
                        };
                        if count == 0 || count % 2 != 0 {
                            continue;
                        }
                        let n = count / 2;
                        for span in 0..count {
                            let verdict = attach_template(&m, side, span, n);
                            // Recompute the closed-up multicurve through the
                            // public concatenation and closure entry points.
                            let template_attach = match side {
                                Side::Top => Side::Bottom,
                                Side::Bottom => Side::Top,
                            };
                            let template =
                                elementary_template(n, span, template_attach).unwrap();
                            let combined = match side {
                                Side::Top => concatenate(&m, &template),
                                Side::Bottom => concatenate(&template, &m),
                            };
                            let Ok(combined) = combined else {
                                assert!(verdict.is_err(), "verdict must mirror the gluing error");
                                continue;
                            };
                            let closed_tight = if combined.bottom() == combined.top() {
                                match close_annulus(&combined) {
                                    Ok(closed) => closed.is_tight(),
                                    Err(_) => {
                                        assert!(
                                            verdict.is_err(),
                                            "verdict must mirror the closure error"
                                        );
                                        continue;
                                    }
                                }
                            } else {
                                combined.is_tight()
                            };
                            let overtwisted =
                                matches!(verdict.unwrap(), TemplateVerdict::Overtwisted);
                            assert_eq!(
                                overtwisted, !closed_tight,
                                "bottom={bottom}, top={top}, side={side:?}, span={span}, m={m:?}"
                            );
                            // Contractibles created by the gluing itself are
                            // confirmed by an independent chain walk.
                            let created = contractible_chains(&m, side, &template);
                            if created > 0 {
                                assert!(
                                    overtwisted,
                                    "bottom={bottom}, top={top}, side={side:?}, span={span}, m={m:?}"
                                );
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 1000, "sweep too small: {checked} cases");
    });
}

#[test]
fn acceptance_8_three_torus_round_trip() {
    criterion("AC8 T^3 label round trip (|c| <= 10, n <= 5)", || {
        for n in 1..=5u64 {
            for c1 in -10..=10i64 {
                for c2 in -10..=10i64 {
                    for c3 in -10..=10i64 {
                        if c3 == 0 || gcd(gcd(c1, c2), c3) != 1 {
                            continue;
                        }
                        let inv = torus_invariants(n, (c1, c2, c3)).unwrap();
                        let (rn, rc) = torus_from_invariants(&inv).unwrap();
                        let canon = if c3 > 0 {
                            (c1, c2, c3)
                        } else {
                            (-c1, -c2, -c3)
                        };
                        assert_eq!((rn, rc), (n, canon), "n={n}, c=({c1},{c2},{c3})");
                    }
                }
            }
        }
    });
}
