//! Bounded state traversal certifying tightness and isotopy of the
//! exceptional structures on `M(e0, r)`.
//!
//! The manifold is cut along an incompressible vertical torus (the wall); a
//! state records the wall position — a finite boundary slope, or an infinite
//! slope with a division number — together with the normal-form label
//! `(l, eta)` and a representative of the relative Euler class. Transitions
//! move the wall across one Farey edge (transforming the Euler vector),
//! change the division number of an infinite-slope wall by one, or exchange
//! the label by the identification move at the slopes where it is realized.
//!
//! A structure is certified tight when every state in the breadth-first
//! closure passes its tightness predicate; otherwise a shortest witness path
//! to a failing state is reported. Two tight structures are isotopic exactly
//! when their closures coincide.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::{Mutex, OnceLock};

use num_rational::Ratio;

use crate::census::{eta_shape, partner, ExceptionalStructure, SeifertDescriptor};
use crate::dividing_sets::{
    attach_template, close_annulus, AnnulusArc, AnnulusSet, End, Side, TemplateVerdict,
};
use crate::lattice::{extended_gcd, Slope};
use crate::solid_torus::RInvariants;
use crate::{domain_error, Result};

/// Position of the cutting torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wall {
    /// Wall of the given finite boundary slope.
    Finite(Slope),
    /// Wall of infinite slope, cut along a vertical annulus with the given
    /// division number.
    Infinite(u64),
}

/// One state of the traversal: wall position, normal-form label and a
/// relative Euler class representative. The Euler vector is bookkeeping
/// transported along transitions; state identity ignores it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraversalState {
    pub wall: Wall,
    pub l: i64,
    pub eta: RInvariants,
    pub euler_vector: (i64, i64),
}

/// Canonical identity of a state (wall, label); used for the visited set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey {
    pub wall: Wall,
    pub l: i64,
    pub eta: Vec<i64>,
}

impl TraversalState {
    pub fn key(&self) -> StateKey {
        StateKey {
            wall: self.wall,
            l: self.l,
            eta: self.eta.values().to_vec(),
        }
    }
}

/// Outcome of a traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every reachable state is tight; carries the visited set.
    Tight(BTreeSet<StateKey>),
    /// A reachable state fails its predicate; carries a shortest path from
    /// the initial state to it.
    Overtwisted(Vec<TraversalState>),
}

/// Build the rotation-number tuple for `r` from raw values, validating them
/// against the shape bounds.
pub fn eta_invariants(m: &SeifertDescriptor, values: Vec<i64>) -> Result<RInvariants> {
    let shape = eta_shape(m.r())?;
    if values.len() != shape.len() {
        return Err(domain_error(format!(
            "expected {} rotation numbers, found {}",
            shape.len(),
            values.len()
        )));
    }
    RInvariants::new(values, shape.iter().map(|&s| s as usize).collect())
}

/// The initial state of the traversal for the structure `(l, eta)`: the
/// wall at slope zero, with the Euler vector of the corresponding extremal
/// layer (`(q, 1 + p)` for `l = 2`, `(-q, -1 - p + e0*q)` for `l = -2`,
/// where `r = p/q`).
pub fn initial_state(m: &SeifertDescriptor, l: i64, eta: RInvariants) -> Result<TraversalState> {
    if l != 2 && l != -2 {
        return Err(domain_error("extremal sign must be 2 or -2"));
    }
    // Re-validate the tuple against this manifold's shape.
    let eta = eta_invariants(m, eta.values().to_vec())?;
    let p = *m.r().numer();
    let q = *m.r().denom();
    let euler_vector = if l == 2 {
        (q, 1 + p)
    } else {
        (-q, -1 - p + m.e0() * q)
    };
    Ok(TraversalState {
        wall: Wall::Finite(Slope::from_integer(0)),
        l,
        eta,
        euler_vector,
    })
}

/// Wall slope as a primitive vector, with the infinite wall at `(1, 0)`.
fn wall_vector(w: &Wall) -> (i64, i64) {
    match w {
        Wall::Finite(s) => s.vector(),
        Wall::Infinite(_) => (1, 0),
    }
}

/// Euler vector after moving the wall from `a` to `b` across a Farey edge.
fn transport_euler(e0: i64, euler: (i64, i64), a: &Wall, b: &Wall) -> (i64, i64) {
    let (p, q) = wall_vector(a);
    let (p2, q2) = wall_vector(b);
    (euler.0 + (q - q2), euler.1 + (p - p2) - e0 * (q - q2))
}

/// Slopes where the identification move exchanging labels is realized.
fn shuffle_slopes(e0: i64) -> &'static [i64] {
    match e0 {
        1 => &[1],
        2 => &[-1, 1],
        _ => &[],
    }
}

/// Tightness predicate of a single state.
///
/// Finite-slope states are always tight when `e0 >= 2`. When `e0 = 1` the
/// state with boundary slope 1 (induced slope pair `(0, 1)`) is tight
/// exactly when the first rotation number takes its extreme value with the
/// sign of `l`. Infinite-slope states are checked concretely: the canonical
/// vertical multicurve of the division number must be tight, close to a
/// tight multicurve on the torus, and admit no overtwisted template
/// attachment.
pub fn state_tight(s: &TraversalState, m: &SeifertDescriptor) -> Result<bool> {
    match &s.wall {
        Wall::Finite(slope) => {
            if m.e0() == 1 && *slope == Slope::from_integer(1) {
                let shape = eta_shape(m.r())?;
                let extreme = s.l / 2 * shape[0] as i64;
                Ok(s.eta.values()[0] == extreme)
            } else {
                Ok(true)
            }
        }
        Wall::Infinite(n) => infinite_wall_tight(*n),
    }
}

/// The canonical dividing multicurve of an infinite-slope wall of division
/// `n`: the vertical annulus cut open along `2n` through arcs.
fn canonical_infinite_curve(n: u64) -> AnnulusSet {
    let k = 2 * n as usize;
    let arcs = (0..k)
        .map(|i| AnnulusArc::new(End::bottom(i), End::top(i), 0))
        .collect();
    AnnulusSet::new(k, k, arcs, 0, 0, None).expect("parallel through arcs embed")
}

fn infinite_wall_tight(n: u64) -> Result<bool> {
    // The check depends only on the division number and the template
    // attachments are costly, so cache the outcome process-wide.
    static CACHE: OnceLock<Mutex<HashMap<u64, bool>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&known) = cache.lock().expect("cache lock").get(&n) {
        return Ok(known);
    }
    let verdict = infinite_wall_tight_uncached(n)?;
    cache.lock().expect("cache lock").insert(n, verdict);
    Ok(verdict)
}

fn infinite_wall_tight_uncached(n: u64) -> Result<bool> {
    let curve = canonical_infinite_curve(n);
    if !curve.is_tight() || !close_annulus(&curve)?.is_tight() {
        return Ok(false);
    }
    // No template attachment on either boundary circle may close up a
    // contractible component.
    let size = n as usize;
    for side in [Side::Bottom, Side::Top] {
        for span in 0..2 * size {
            if let TemplateVerdict::Overtwisted = attach_template(&curve, side, span, size)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Finite slopes Farey-adjacent to `(p, q)` with denominator and numerator
/// magnitude within the bound.
fn adjacent_slopes(p: i64, q: i64, bound: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        // Solve p*q2 - q*p2 = sign; the solution family is
        // (p2, q2) = (p2_0 + k*p, q2_0 + k*q).
        let (g, u, v) = extended_gcd(p, q);
        debug_assert_eq!(g, 1);
        // u*p + v*q = 1, so p*(sign*u') ... take p2_0 = -sign*v, q2_0 = sign*u:
        // p*q2_0 - q*p2_0 = sign*(p*u + q*v) = sign.
        let p2_0 = -sign * v;
        let q2_0 = sign * u;
        // Walk k in both directions while the denominator can stay in range.
        for k in -(2 * bound + 2)..=(2 * bound + 2) {
            let p2 = p2_0 + k * p;
            let q2 = q2_0 + k * q;
            if q2 >= 1 && q2 <= bound && p2.abs() <= bound {
                out.push(Slope::from_rational(Ratio::new(p2, q2)));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All transitions out of a state, each listing the source among its own
/// transitions (the moves are involutive).
pub fn transitions(
    s: &TraversalState,
    m: &SeifertDescriptor,
    denom_bound: i64,
) -> Result<Vec<TraversalState>> {
    if denom_bound < 1 {
        return Err(domain_error("denominator bound must be at least 1"));
    }
    let mut out = Vec::new();
    let mut push_wall = |wall: Wall| {
        out.push(TraversalState {
            euler_vector: transport_euler(m.e0(), s.euler_vector, &s.wall, &wall),
            wall,
            l: s.l,
            eta: s.eta.clone(),
        });
    };
    match &s.wall {
        Wall::Finite(slope) => {
            let (p, q) = slope.vector();
            for t in adjacent_slopes(p, q, denom_bound) {
                push_wall(Wall::Finite(t));
            }
            if q == 1 {
                push_wall(Wall::Infinite(1));
            }
        }
        Wall::Infinite(n) => {
            if *n > 1 {
                push_wall(Wall::Infinite(n - 1));
            }
            if (*n as i64) < denom_bound {
                push_wall(Wall::Infinite(n + 1));
            }
            if *n == 1 {
                for p in -denom_bound..=denom_bound {
                    push_wall(Wall::Finite(Slope::from_integer(p)));
                }
            }
        }
    }
    // Identification move: exchange the label at its realizing slopes.
    if let Wall::Finite(slope) = &s.wall {
        if shuffle_slopes(m.e0())
            .iter()
            .any(|&v| *slope == Slope::from_integer(v))
        {
            let shape = eta_shape(m.r())?;
            let here = ExceptionalStructure {
                l: s.l,
                eta: s.eta.values().to_vec(),
            };
            if let Some(other) = partner(m.e0(), &shape, &here) {
                out.push(TraversalState {
                    wall: s.wall,
                    l: other.l,
                    eta: RInvariants::new(
                        other.eta,
                        shape.iter().map(|&b| b as usize).collect(),
                    )?,
                    euler_vector: s.euler_vector,
                });
            }
        }
    }
    out.sort_by_key(|t| t.key());
    Ok(out)
}

/// Breadth-first closure of the initial state under transitions within the
/// denominator bound. Deterministic for a fixed bound.
pub fn traverse(
    m: &SeifertDescriptor,
    initial: &TraversalState,
    denom_bound: i64,
) -> Result<Verdict> {
    let initial = initial_state(m, initial.l, initial.eta.clone())
        .map(|fresh| TraversalState {
            wall: initial.wall,
            euler_vector: initial.euler_vector,
            ..fresh
        })?;
    let mut parents: HashMap<StateKey, Option<StateKey>> = HashMap::new();
    let mut states: HashMap<StateKey, TraversalState> = HashMap::new();
    let mut queue: VecDeque<StateKey> = VecDeque::new();
    let key = initial.key();
    parents.insert(key.clone(), None);
    states.insert(key.clone(), initial.clone());
    queue.push_back(key);
    while let Some(key) = queue.pop_front() {
        let state = states[&key].clone();
        if !state_tight(&state, m)? {
            // Reconstruct a shortest witness path.
            let mut path = vec![state];
            let mut cursor = key;
            while let Some(Some(prev)) = parents.get(&cursor).cloned() {
                path.push(states[&prev].clone());
                cursor = prev;
            }
            path.reverse();
            return Ok(Verdict::Overtwisted(path));
        }
        for next in transitions(&state, m, denom_bound)? {
            let next_key = next.key();
            if !parents.contains_key(&next_key) {
                parents.insert(next_key.clone(), Some(key.clone()));
                states.insert(next_key.clone(), next);
                queue.push_back(next_key);
            }
        }
    }
    Ok(Verdict::Tight(parents.into_keys().collect()))
}

/// Decide whether the structures `(l, eta)` are isotopic: both must be
/// certified tight, and they are isotopic exactly when the traversals visit
/// the same states.
pub fn isotopic(
    m: &SeifertDescriptor,
    a: (i64, RInvariants),
    b: (i64, RInvariants),
    denom_bound: i64,
) -> Result<bool> {
    let va = traverse(m, &initial_state(m, a.0, a.1)?, denom_bound)?;
    let vb = traverse(m, &initial_state(m, b.0, b.1)?, denom_bound)?;
    match (va, vb) {
        (Verdict::Tight(sa), Verdict::Tight(sb)) => Ok(sa == sb),
        _ => Err(domain_error("isotopy is decided only between tight structures")),
    }
}
