//! The census of tight contact structures on the Seifert manifolds
//! `M(e0, r)`: admissible twisting numbers of the singular fibre, background
//! structures on the fibred complement, counts of exceptional structures,
//! and the normal-form invariants of the structures themselves.
//!
//! Counts come in two independent flavours that are cross-checked in tests
//! and by the command line tool: closed-form products of continued fraction
//! coefficients, and explicit enumeration of invariant tuples modulo the
//! identification moves.

use num_rational::Ratio;

use crate::lattice::{cf_expand, Rational, Slope};
use crate::solid_torus::{enumerate_sign_tuples, fiber_count};
use crate::{domain_error, Result};

/// The Seifert manifold `M(e0, r)` fibred over the torus with one singular
/// fibre: integer Euler term `e0` and singular fibre invariant `r` with
/// `0 < r < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeifertDescriptor {
    e0: i64,
    r: Slope,
}

impl SeifertDescriptor {
    pub fn new(e0: i64, r: Rational) -> Result<SeifertDescriptor> {
        if r <= Ratio::from_integer(0) || r >= Ratio::from_integer(1) {
            return Err(domain_error("singular fibre invariant must satisfy 0 < r < 1"));
        }
        Ok(SeifertDescriptor {
            e0,
            r: Slope::from_rational(r),
        })
    }

    pub fn e0(&self) -> i64 {
        self.e0
    }

    pub fn r(&self) -> Rational {
        self.r.value().expect("r is finite")
    }
}

/// Admissible twisting numbers of a standard neighbourhood of the singular
/// fibre: all integers `t` with `-1/r < t` that the Euler term allows.
pub fn admissible_twisting(m: &SeifertDescriptor) -> Vec<i64> {
    match m.e0.signum() {
        -1 => vec![-1, 0],
        0 => {
            let bound = -(Ratio::from_integer(1) / m.r());
            let t_min = bound.floor().to_integer() + 1;
            (t_min..=0).collect()
        }
        _ => vec![0],
    }
}

/// Shape of the rotation-number tuple attached to `r`: from the negative
/// continued fraction `-1/r = [d0, ..., dn]`, the entry bounds are
/// `m0 = |d0| - 1` and `mi = |di| - 2` for `i >= 1` (zero bounds are kept).
pub fn eta_shape(r: Rational) -> Result<Vec<u64>> {
    let cf = cf_expand(-(Ratio::from_integer(1) / r))?;
    let d = cf.coefficients();
    let mut shape = Vec::with_capacity(d.len());
    shape.push(d[0].unsigned_abs() - 1);
    for &di in &d[1..] {
        shape.push(di.unsigned_abs() - 2);
    }
    Ok(shape)
}

/// Normal-form invariant of an exceptional tight structure: the sign `l` of
/// the extremal annulus (`+2` or `-2`) and the rotation-number tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExceptionalStructure {
    pub l: i64,
    pub eta: Vec<i64>,
}

fn cf_coefficients(r: Rational) -> Result<Vec<i64>> {
    Ok(cf_expand(-(Ratio::from_integer(1) / r))?
        .coefficients()
        .to_vec())
}

/// Number of exceptional tight structures on `M(e0, r)`, by the closed-form
/// coefficient products. Zero when `e0 <= 0`: every tight structure is then
/// carried by a background with nonzero twisting or by the zero-twisting
/// family.
pub fn exceptional_count(m: &SeifertDescriptor) -> Result<u64> {
    if m.e0 <= 0 {
        return Ok(0);
    }
    let d = cf_coefficients(m.r())?;
    let tail: u64 = d[1..].iter().map(|&di| di.unsigned_abs() - 1).product();
    Ok(match m.e0 {
        1 => {
            if d.len() == 1 {
                2
            } else {
                d[1].unsigned_abs() * d[2..].iter().map(|&di| di.unsigned_abs() - 1).product::<u64>()
            }
        }
        2 => (d[0].unsigned_abs() + 1) * tail,
        _ => 2 * d[0].unsigned_abs() * tail,
    })
}

/// The identified partner of an invariant pair under the normal-form moves,
/// when the partner's tuple stays within the shape bounds.
pub(crate) fn partner(
    e0: i64,
    shape: &[u64],
    s: &ExceptionalStructure,
) -> Option<ExceptionalStructure> {
    match e0 {
        2 => {
            let r0 = s.eta[0] + s.l;
            if r0.unsigned_abs() > shape[0] {
                return None;
            }
            let mut eta = s.eta.clone();
            eta[0] = r0;
            Some(ExceptionalStructure { l: -s.l, eta })
        }
        1 if s.eta.len() >= 2 => {
            let r1 = s.eta[1] + s.l;
            if r1.unsigned_abs() > shape[1] {
                return None;
            }
            let mut eta = s.eta.clone();
            eta[0] = -eta[0];
            eta[1] = r1;
            Some(ExceptionalStructure { l: -s.l, eta })
        }
        _ => None,
    }
}

/// All exceptional tight structures on `M(e0, r)`, one normal-form
/// representative per identification orbit, sorted.
pub fn exceptional_enumerate(m: &SeifertDescriptor) -> Result<Vec<ExceptionalStructure>> {
    if m.e0 <= 0 {
        return Ok(vec![]);
    }
    let shape = eta_shape(m.r())?;
    let mut raw: Vec<ExceptionalStructure> = Vec::new();
    for l in [2i64, -2] {
        let free: Vec<usize> = if m.e0 == 1 {
            (1..shape.len()).collect()
        } else {
            (0..shape.len()).collect()
        };
        let free_shape: Vec<usize> = free.iter().map(|&i| shape[i] as usize).collect();
        for tuple in enumerate_sign_tuples(&free_shape) {
            let mut eta = vec![0i64; shape.len()];
            if m.e0 == 1 {
                // The first rotation number is pinned at its extreme value
                // by tightness of the extremal annulus.
                eta[0] = l / 2 * shape[0] as i64;
            }
            for (&i, &v) in free.iter().zip(tuple.values()) {
                eta[i] = v;
            }
            raw.push(ExceptionalStructure { l, eta });
        }
    }
    // Keep the smaller representative of each identified pair.
    let mut reps: Vec<ExceptionalStructure> = raw
        .into_iter()
        .filter(|s| match partner(m.e0, &shape, s) {
            Some(p) => {
                debug_assert_eq!(partner(m.e0, &shape, &p).as_ref(), Some(s));
                *s <= p
            }
            None => true,
        })
        .collect();
    reps.sort();
    Ok(reps)
}

/// Number of virtually overtwisted tight structures among the
/// zero-twisting family: one extra structure when `e0 = 2`, two when
/// `e0 > 2`, none otherwise.
pub fn virtually_overtwisted_t0_count(e0: i64) -> u64 {
    match e0 {
        2 => 1,
        _ if e0 > 2 => 2,
        _ => 0,
    }
}

/// Classifying invariants of a pair of incompressible pre-Lagrangian tori in
/// a `T^3`-like background: slope and division number of each torus and the
/// resulting twisting number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusPairInvariants {
    pub n1: u64,
    pub s1: Rational,
    pub n2: u64,
    pub s2: Rational,
    pub t: i64,
}

/// Invariants of the background determined by the covering degree `n >= 1`
/// and the primitive direction vector `c` (with `c3` nonzero; the sign of
/// `c` is normalized so that `c3 > 0`).
pub fn torus_invariants(n: u64, c: (i64, i64, i64)) -> Result<TorusPairInvariants> {
    if n == 0 {
        return Err(domain_error("covering degree must be at least 1"));
    }
    let (mut c1, mut c2, mut c3) = c;
    if c3 == 0 {
        return Err(domain_error("third component of the direction must be nonzero"));
    }
    if crate::lattice::gcd(crate::lattice::gcd(c1, c2), c3) != 1 {
        return Err(domain_error("direction vector must be primitive"));
    }
    if c3 < 0 {
        c1 = -c1;
        c2 = -c2;
        c3 = -c3;
    }
    Ok(TorusPairInvariants {
        n1: n * crate::lattice::gcd(c1, c3) as u64,
        s1: Ratio::new(c1, c3),
        n2: n * crate::lattice::gcd(c2, c3) as u64,
        s2: Ratio::new(c2, c3),
        t: -(n as i64 * c3),
    })
}

/// Recover `(n, c)` from the torus-pair invariants; errors when the
/// invariants are not realized by any `(n, c)`.
pub fn torus_from_invariants(inv: &TorusPairInvariants) -> Result<(u64, (i64, i64, i64))> {
    if inv.n1 == 0 || inv.n2 == 0 || inv.t >= 0 {
        return Err(domain_error("invariants out of range"));
    }
    let n = crate::lattice::gcd(inv.n1 as i64, inv.n2 as i64);
    if (-inv.t) % n != 0 {
        return Err(domain_error("twisting is not a multiple of the covering degree"));
    }
    let c3 = -inv.t / n;
    let lift = |s: Rational| -> Result<i64> {
        let scaled = s * Ratio::from_integer(c3);
        if !scaled.is_integer() {
            return Err(domain_error("slope does not lift to an integer direction"));
        }
        Ok(scaled.to_integer())
    };
    let c = (lift(inv.s1)?, lift(inv.s2)?, c3);
    let check = torus_invariants(n as u64, c)?;
    if check != *inv {
        return Err(domain_error("invariants are not realized"));
    }
    Ok((n as u64, c))
}

/// A background structure on the fibred complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Background {
    /// One of the `1 - e0` fillable backgrounds with twisting `-1`
    /// (negative Euler term only).
    NegativeBase { index: u64 },
    /// A `T^3`-like background with twisting `-n * c3` (zero Euler term,
    /// negative twisting).
    ThreeTorus { n: u64, c: (i64, i64, i64) },
    /// A zero-twisting background carrying an invariant vertical torus of
    /// the given division number and slope.
    InvariantT0 { division: u64, slope: Slope },
    /// A zero-twisting exceptional background of extremal sign `l`
    /// (positive Euler term only).
    ExceptionalBase { l: i64 },
}

/// Truncation bounds for the infinite background families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackgroundBounds {
    /// Largest division number of an invariant vertical torus.
    pub max_division: u64,
    /// Largest denominator (and numerator magnitude) of an invariant slope.
    pub max_denominator: i64,
    /// Largest component magnitude of a `T^3` direction vector.
    pub max_c: i64,
}

/// One enumerated background together with its twisting number and the
/// count of tight structures it carries on the singular fibre complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackgroundEntry {
    pub background: Background,
    pub twisting: i64,
    pub count: u64,
}

/// All slopes with denominator and numerator magnitude at most the bound,
/// plus the infinite slope.
fn bounded_slopes(bound: i64) -> Vec<Slope> {
    let mut slopes = vec![Slope::INFINITY];
    for q in 1..=bound {
        for p in -bound..=bound {
            if crate::lattice::gcd(p, q) == 1 {
                slopes.push(Slope::from_rational(Ratio::new(p, q)));
            }
        }
    }
    slopes.sort();
    slopes.dedup();
    slopes
}

/// Enumerate the background structures of `M(e0, r)` within the bounds,
/// each with its twisting number and tight-structure count.
pub fn enumerate_backgrounds(
    m: &SeifertDescriptor,
    bounds: &BackgroundBounds,
) -> Result<Vec<BackgroundEntry>> {
    let mut entries = Vec::new();
    let r = m.r();
    match m.e0.signum() {
        -1 => {
            let count = fiber_count(-1, r)?;
            for index in 0..(1 - m.e0) as u64 {
                entries.push(BackgroundEntry {
                    background: Background::NegativeBase { index },
                    twisting: -1,
                    count,
                });
            }
            entries.extend(invariant_t0_entries(r, bounds)?);
        }
        0 => {
            // Negative twisting: T^3-like backgrounds with -n*c3 > -1/r.
            let one_over_r = Ratio::from_integer(1) / r;
            for n in 1..=bounds.max_division {
                for c3 in 1..=bounds.max_c {
                    if Ratio::from_integer(n as i64 * c3) >= one_over_r {
                        continue;
                    }
                    for c1 in -bounds.max_c..=bounds.max_c {
                        for c2 in -bounds.max_c..=bounds.max_c {
                            let g = crate::lattice::gcd(crate::lattice::gcd(c1, c2), c3);
                            if g != 1 {
                                continue;
                            }
                            let t = -(n as i64 * c3);
                            entries.push(BackgroundEntry {
                                background: Background::ThreeTorus { n, c: (c1, c2, c3) },
                                twisting: t,
                                count: fiber_count(t, r)?,
                            });
                        }
                    }
                }
            }
            entries.extend(invariant_t0_entries(r, bounds)?);
        }
        _ => {
            let shape = eta_shape(r)?;
            let count: u64 = if m.e0 == 1 {
                shape[1..].iter().map(|&mi| mi + 1).product()
            } else {
                shape.iter().map(|&mi| mi + 1).product()
            };
            for l in [2i64, -2] {
                entries.push(BackgroundEntry {
                    background: Background::ExceptionalBase { l },
                    twisting: 0,
                    count,
                });
            }
        }
    }
    Ok(entries)
}

fn invariant_t0_entries(r: Rational, bounds: &BackgroundBounds) -> Result<Vec<BackgroundEntry>> {
    let count = fiber_count(0, r)?;
    let mut entries = Vec::new();
    for division in 1..=bounds.max_division {
        for slope in bounded_slopes(bounds.max_denominator) {
            entries.push(BackgroundEntry {
                background: Background::InvariantT0 { division, slope },
                twisting: 0,
                count,
            });
        }
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn descriptor(e0: i64, p: i64, q: i64) -> SeifertDescriptor {
        SeifertDescriptor::new(e0, Ratio::new(p, q)).unwrap()
    }

    #[test]
    fn eta_shape_examples() {
        assert_eq!(eta_shape(Ratio::new(2, 5)).unwrap(), vec![2, 0]);
        assert_eq!(eta_shape(Ratio::new(4, 11)).unwrap(), vec![2, 2]);
        assert_eq!(eta_shape(Ratio::new(5, 7)).unwrap(), vec![1, 0, 1]);
        assert_eq!(eta_shape(Ratio::new(1, 3)).unwrap(), vec![2]);
    }

    #[test]
    fn admissible_twisting_cases() {
        assert_eq!(admissible_twisting(&descriptor(-2, 2, 5)), vec![-1, 0]);
        assert_eq!(admissible_twisting(&descriptor(0, 2, 5)), vec![-2, -1, 0]);
        assert_eq!(admissible_twisting(&descriptor(0, 1, 3)), vec![-2, -1, 0]);
        assert_eq!(admissible_twisting(&descriptor(3, 2, 5)), vec![0]);
    }

    #[test]
    fn exceptional_count_examples() {
        assert_eq!(exceptional_count(&descriptor(2, 2, 5)).unwrap(), 4);
        assert_eq!(exceptional_count(&descriptor(1, 2, 5)).unwrap(), 2);
        assert_eq!(exceptional_count(&descriptor(1, 4, 11)).unwrap(), 4);
        assert_eq!(exceptional_count(&descriptor(2, 5, 7)).unwrap(), 6);
        assert_eq!(exceptional_count(&descriptor(1, 5, 7)).unwrap(), 4);
        assert_eq!(exceptional_count(&descriptor(1, 1, 3)).unwrap(), 2);
        assert_eq!(exceptional_count(&descriptor(-1, 2, 5)).unwrap(), 0);
    }

    #[test]
    fn enumeration_matches_count() {
        for e0 in 1..=4 {
            for q in 2..=9i64 {
                for p in 1..q {
                    if crate::lattice::gcd(p, q) != 1 {
                        continue;
                    }
                    let m = descriptor(e0, p, q);
                    assert_eq!(
                        exceptional_enumerate(&m).unwrap().len() as u64,
                        exceptional_count(&m).unwrap(),
                        "e0={e0}, r={p}/{q}"
                    );
                }
            }
        }
    }

    #[test]
    fn enumeration_representatives_are_distinct() {
        let m = descriptor(2, 4, 11);
        let reps = exceptional_enumerate(&m).unwrap();
        let mut sorted = reps.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), reps.len());
    }

    #[test]
    fn torus_invariants_example() {
        let inv = torus_invariants(2, (2, 3, 4)).unwrap();
        assert_eq!(inv.n1, 4);
        assert_eq!(inv.s1, Ratio::new(1, 2));
        assert_eq!(inv.n2, 2);
        assert_eq!(inv.s2, Ratio::new(3, 4));
        assert_eq!(inv.t, -8);
        assert_eq!(torus_from_invariants(&inv).unwrap(), (2, (2, 3, 4)));
    }

    #[test]
    fn torus_invariants_sign_normalization() {
        let a = torus_invariants(3, (1, -2, 5)).unwrap();
        let b = torus_invariants(3, (-1, 2, -5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn backgrounds_positive_euler() {
        let m = descriptor(2, 2, 5);
        let bounds = BackgroundBounds {
            max_division: 2,
            max_denominator: 2,
            max_c: 2,
        };
        let entries = enumerate_backgrounds(&m, &bounds).unwrap();
        assert_eq!(entries.len(), 2);
        for e in &entries {
            assert_eq!(e.twisting, 0);
            assert_eq!(e.count, 3);
        }
    }

    #[test]
    fn backgrounds_negative_euler() {
        let m = descriptor(-2, 2, 5);
        let bounds = BackgroundBounds {
            max_division: 1,
            max_denominator: 1,
            max_c: 1,
        };
        let entries = enumerate_backgrounds(&m, &bounds).unwrap();
        let negative: Vec<_> = entries
            .iter()
            .filter(|e| matches!(e.background, Background::NegativeBase { .. }))
            .collect();
        assert_eq!(negative.len(), 3);
        assert!(negative.iter().all(|e| e.twisting == -1));
    }
}
