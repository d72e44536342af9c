//! The Farey tessellation on slopes: edges join slopes whose vectors span a
//! unimodular lattice, shortest vertex paths are computed by continued
//! fraction descent through the geodesic strip, and path edges are grouped
//! into pivot-sharing fans (continued fraction blocks).
//!
//! Two path notions coexist. [`shortest_path`] is the minimal path in the
//! tessellation graph. [`monotone_path`] additionally keeps every vertex
//! inside the closed slope interval of its endpoints; it models layered
//! solid-torus decompositions, where intermediate tori only realize slopes
//! between the boundary slopes, and it is the path whose block sizes satisfy
//! the continued fraction product law.

use std::collections::{HashMap, VecDeque};

use crate::lattice::{det2, extended_gcd, reduce_slope, IntMatrix2, Rational, Slope};
use crate::{domain_error, Result};

/// A minimal-length path in the Farey tessellation; consecutive vertices are
/// joined by an edge (`|det| = 1`) and no vertex repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareyPath {
    vertices: Vec<Slope>,
}

impl FareyPath {
    pub fn vertices(&self) -> &[Slope] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn edges(&self) -> impl Iterator<Item = (Slope, Slope)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Maximal runs of consecutive path edges whose endpoints all neighbour one
/// common vertex (the pivot of the fan); block sizes sum to the edge count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    sizes: Vec<usize>,
}

impl BlockDecomposition {
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }
}

/// True when two slopes are joined by an edge of the Farey tessellation,
/// i.e. their primitive vectors have determinant of absolute value 1.
pub fn is_farey_edge(s: &Slope, t: &Slope) -> bool {
    det2(s.vector(), t.vector()).abs() == 1
}

/// Matrix in SL(2,Z) sending the given slope to the infinite slope `(0, 1)`.
fn send_to_infinity(b: &Slope) -> IntMatrix2 {
    let (x, y) = b.vector();
    let (_, u, v) = extended_gcd(x, y);
    // Rows (y, -x) and (u, v): the first kills b, the second pairs to 1.
    IntMatrix2::new(y, -x, u, v).expect("unimodular by construction")
}

fn apply(g: &IntMatrix2, s: &Slope) -> Slope {
    reduce_slope(g.apply(s.vector())).expect("image of a slope is nonzero")
}

/// Vertices of the triangles crossed by the hyperbolic geodesic from `v` up
/// to the infinite slope: the mediant (Stern-Brocot) descent from the edge
/// `(floor(v), floor(v) + 1)` down to `v`, plus the endpoints.
fn strip_to_infinity(v: &Slope) -> Vec<Slope> {
    let mut out = vec![Slope::INFINITY, *v];
    let Some(value) = v.value() else {
        return vec![*v];
    };
    let n = v.numerator().div_euclid(v.denominator());
    let mut lo = (1i64, n);
    let mut hi = (1i64, n + 1);
    out.push(reduce_slope(lo).expect("integer slope"));
    out.push(reduce_slope(hi).expect("integer slope"));
    let target = v.vector();
    while lo != target && hi != target {
        let mid = (lo.0 + hi.0, lo.1 + hi.1);
        out.push(reduce_slope(mid).expect("mediant is primitive"));
        if mid == target {
            break;
        }
        if value < Rational::new(mid.1, mid.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The minimal-length path from `a` to `b` in the Farey tessellation graph
/// (deterministic, breaking ties toward the smaller slope).
///
/// Every minimal path between two slopes can be pushed into the strip of
/// tessellation triangles crossed by the hyperbolic geodesic joining them (a
/// detour leaving the strip re-enters through the endpoints of one strip
/// edge and can be shortcut along it), so a breadth-first search over the
/// strip vertices suffices.
pub fn shortest_path(a: &Slope, b: &Slope) -> Result<FareyPath> {
    path_in_strip(a, b, |_| true)
}

/// The shortest Farey path from `a` to `b` whose vertices all lie in the
/// closed slope interval `[a, b]`; both endpoints must be finite with
/// `a < b`.
///
/// Convex tori nested between two boundary tori only realize slopes between
/// the boundary slopes, so layered solid-torus decompositions follow this
/// path rather than the unconstrained shortest one. Its block sizes are the
/// quantities entering the continued fraction product law.
pub fn monotone_path(a: &Slope, b: &Slope) -> Result<FareyPath> {
    let (Some(lo), Some(hi)) = (a.value(), b.value()) else {
        return Err(domain_error("monotone path endpoints must be finite"));
    };
    if lo >= hi {
        return Err(domain_error("monotone path requires increasing endpoints"));
    }
    path_in_strip(a, b, |s| s.value().is_some_and(|v| lo <= v && v <= hi))
}

fn path_in_strip(a: &Slope, b: &Slope, keep: impl Fn(&Slope) -> bool) -> Result<FareyPath> {
    if a == b {
        return Err(domain_error("path endpoints must differ"));
    }
    let g = if b.is_infinite() {
        IntMatrix2::IDENTITY
    } else {
        send_to_infinity(b)
    };
    let g_inv = g.inverse();
    let mut vertices: Vec<Slope> = strip_to_infinity(&apply(&g, a))
        .iter()
        .map(|s| apply(&g_inv, s))
        .collect();
    vertices.retain(|s| s == a || s == b || keep(s));
    vertices.sort();
    vertices.dedup();

    // Breadth-first distances to `b` over the strip graph.
    let index: HashMap<Slope, usize> = vertices.iter().copied().zip(0..).collect();
    let neighbours: Vec<Vec<usize>> = vertices
        .iter()
        .map(|u| {
            vertices
                .iter()
                .enumerate()
                .filter(|(_, w)| is_farey_edge(u, w))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let mut dist: Vec<Option<u64>> = vec![None; vertices.len()];
    let mut queue = VecDeque::new();
    dist[index[b]] = Some(0);
    queue.push_back(index[b]);
    while let Some(i) = queue.pop_front() {
        for &j in &neighbours[i] {
            if dist[j].is_none() {
                dist[j] = Some(dist[i].expect("popped") + 1);
                queue.push_back(j);
            }
        }
    }

    // Walk from `a` downhill, breaking ties toward the smaller slope.
    let mut path = Vec::new();
    let mut i = index[a];
    path.push(vertices[i]);
    while vertices[i] != *b {
        let d = dist[i].expect("strip stays connected");
        let next = neighbours[i]
            .iter()
            .copied()
            .filter(|&j| dist[j] == Some(d - 1))
            .min_by_key(|&j| vertices[j])
            .expect("a downhill neighbour exists");
        i = next;
        path.push(vertices[i]);
    }

    debug_assert!(path.windows(2).all(|w| is_farey_edge(&w[0], &w[1])));
    Ok(FareyPath { vertices: path })
}

/// The two vertices completing a Farey edge to a triangle of the
/// tessellation: the sum and difference of the endpoint vectors.
fn pivot_candidates(u: &Slope, v: &Slope) -> [Slope; 2] {
    let (ux, uy) = u.vector();
    let (vx, vy) = v.vector();
    [
        reduce_slope((ux + vx, uy + vy)).expect("edge endpoints are independent"),
        reduce_slope((ux - vx, uy - vy)).expect("edge endpoints are independent"),
    ]
}

/// Group consecutive path edges into maximal fans sharing a common pivot
/// vertex; block boundaries occur exactly where the pivot changes.
pub fn block_decomposition(p: &FareyPath) -> Result<BlockDecomposition> {
    if p.edge_count() == 0 {
        return Err(domain_error("block decomposition requires at least one edge"));
    }
    let mut sizes = Vec::new();
    let mut current: Vec<Slope> = Vec::new();
    let mut size = 0usize;
    for (u, v) in p.edges() {
        let cand = pivot_candidates(&u, &v);
        let shared: Vec<Slope> = if size == 0 {
            cand.to_vec()
        } else {
            cand.iter().copied().filter(|s| current.contains(s)).collect()
        };
        if shared.is_empty() {
            sizes.push(size);
            current = cand.to_vec();
            size = 1;
        } else {
            current = shared;
            size += 1;
        }
    }
    sizes.push(size);
    debug_assert_eq!(sizes.iter().sum::<usize>(), p.edge_count());
    Ok(BlockDecomposition { sizes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Rational;

    fn slope(p: i64, q: i64) -> Slope {
        Slope::from_rational(Rational::new(p, q))
    }

    #[test]
    fn edge_examples() {
        assert!(is_farey_edge(&Slope::INFINITY, &Slope::from_integer(0)));
        assert!(is_farey_edge(&slope(-5, 3), &Slope::from_integer(-2)));
        assert!(!is_farey_edge(&slope(-5, 3), &Slope::from_integer(-1)));
    }

    #[test]
    fn shortest_path_examples() {
        let p = shortest_path(&Slope::from_integer(-2), &Slope::from_integer(-1)).unwrap();
        assert_eq!(p.vertices(), &[Slope::from_integer(-2), Slope::from_integer(-1)]);

        let p = shortest_path(&slope(-5, 3), &Slope::from_integer(-1)).unwrap();
        assert_eq!(
            p.vertices(),
            &[slope(-5, 3), Slope::from_integer(-2), Slope::from_integer(-1)]
        );

        let p = shortest_path(&slope(-5, 2), &Slope::from_integer(-1)).unwrap();
        assert_eq!(
            p.vertices(),
            &[slope(-5, 2), Slope::from_integer(-2), Slope::from_integer(-1)]
        );
    }

    #[test]
    fn shortest_path_no_repeats_and_adjacent() {
        for p in -9..=9i64 {
            for q in 1..=9i64 {
                let a = slope(p, q);
                let b = Slope::from_integer(-1);
                if a == b {
                    continue;
                }
                let path = shortest_path(&a, &b).unwrap();
                for w in path.vertices().windows(2) {
                    assert!(is_farey_edge(&w[0], &w[1]));
                }
                let mut seen = path.vertices().to_vec();
                seen.sort();
                seen.dedup();
                assert_eq!(seen.len(), path.vertices().len());
            }
        }
    }

    #[test]
    fn block_examples() {
        let p = shortest_path(&Slope::from_integer(-2), &Slope::from_integer(-1)).unwrap();
        assert_eq!(block_decomposition(&p).unwrap().sizes(), &[1]);

        let p = shortest_path(&slope(-5, 3), &Slope::from_integer(-1)).unwrap();
        assert_eq!(block_decomposition(&p).unwrap().sizes(), &[2]);

        let p = shortest_path(&slope(-5, 2), &Slope::from_integer(-1)).unwrap();
        assert_eq!(block_decomposition(&p).unwrap().sizes(), &[1, 1]);
    }

    #[test]
    fn integer_endpoints_route_through_infinity() {
        // Distant integers are joined through the infinite slope; the two
        // edges pivot around different vertices, so the blocks split.
        let p = shortest_path(&Slope::from_integer(-4), &Slope::from_integer(-1)).unwrap();
        assert_eq!(
            p.vertices(),
            &[Slope::from_integer(-4), Slope::INFINITY, Slope::from_integer(-1)]
        );
        assert_eq!(block_decomposition(&p).unwrap().sizes(), &[1, 1]);
    }

    #[test]
    fn monotone_path_stays_in_interval() {
        // The unconstrained shortest path from -9/5 reaches -1 in two steps
        // via -2, but -2 lies outside the interval, so the monotone path
        // walks the fan of convergents instead. All four edges pivot around
        // -2, giving a single block whose size feeds the product law
        // (4 + 1 = 5 = |(-2 + 1) * (-5)| for the expansion [-2, -5]).
        let p = monotone_path(&slope(-9, 5), &Slope::from_integer(-1)).unwrap();
        assert_eq!(
            p.vertices(),
            &[
                slope(-9, 5),
                slope(-7, 4),
                slope(-5, 3),
                slope(-3, 2),
                Slope::from_integer(-1)
            ]
        );
        assert_eq!(block_decomposition(&p).unwrap().sizes(), &[4]);
    }

    #[test]
    fn monotone_path_integer_fan() {
        // Between distant integers the infinite slope is excluded, so the
        // monotone path is the integer fan, one block pivoting around the
        // infinite slope.
        let p = monotone_path(&Slope::from_integer(-5), &Slope::from_integer(-1)).unwrap();
        let want: Vec<Slope> = (-5..=-1).map(Slope::from_integer).collect();
        assert_eq!(p.vertices(), want.as_slice());
        assert_eq!(block_decomposition(&p).unwrap().sizes(), &[4]);
    }

    #[test]
    fn monotone_path_rejects_bad_endpoints() {
        assert!(monotone_path(&Slope::INFINITY, &Slope::from_integer(-1)).is_err());
        assert!(monotone_path(&Slope::from_integer(-1), &Slope::from_integer(-3)).is_err());
    }
}
