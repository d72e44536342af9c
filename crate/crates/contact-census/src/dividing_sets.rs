//! Multicurves and abstract dividing sets on the torus, annulus, pair of
//! pants, and once-punctured torus.
//!
//! Arcs are stored in normal coordinates: each boundary circle carries
//! equally spaced marked points, one vertical seam is fixed per identification
//! and a winding integer records how often an arc wraps around the core
//! direction. Embeddability is checked by lifting arcs to the universal
//! cover, where two chords of the compactified strip cross exactly when
//! their endpoints interleave along the boundary.
//!
//! An abstract dividing set is tight exactly when it has no contractible
//! closed component; the region sign map is stored as the sign of one base
//! region (all other signs follow by alternation).

use num_rational::Ratio;

use crate::lattice::{reduce_slope, Rational, Slope};
use crate::{domain_error, Result};

/// Sign of a complementary region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn parse(s: &str) -> Result<Sign> {
        match s.trim() {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(domain_error(format!("invalid sign '{other}'"))),
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// Dividing set of a convex torus: `2n` parallel curves of one slope, plus
/// an optional count of contractible components (a positive count marks an
/// overtwisted configuration).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusDividingSet {
    slope: Slope,
    division: u64,
    contractible: u64,
}

impl TorusDividingSet {
    pub fn new(slope: Slope, division: u64, contractible: u64) -> Result<TorusDividingSet> {
        if division == 0 {
            return Err(domain_error("division number must be at least 1"));
        }
        Ok(TorusDividingSet {
            slope,
            division,
            contractible,
        })
    }

    pub fn slope(&self) -> Slope {
        self.slope
    }

    /// Half the number of parallel dividing curves.
    pub fn division(&self) -> u64 {
        self.division
    }

    pub fn contractible(&self) -> u64 {
        self.contractible
    }

    pub fn is_tight(&self) -> bool {
        self.contractible == 0
    }
}

/// A closed multicurve on the torus, as produced by closing an annulus or
/// completing a punctured torus: essential components grouped by slope,
/// a count of contractible components, and optional signs.
///
/// The sign data records the sign of each contractible disc; essential
/// components separate annular regions whose Euler characteristics vanish,
/// so disc signs determine the signed Euler count. Discs are treated as
/// unnested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusMulticurve {
    components: Vec<(Slope, u64)>,
    contractible: u64,
    disc_signs: Option<Vec<Sign>>,
    signs_dropped: bool,
}

impl TorusMulticurve {
    pub fn new(mut components: Vec<(Slope, u64)>, contractible: u64) -> TorusMulticurve {
        components.retain(|&(_, m)| m > 0);
        components.sort();
        // Merge parallel classes.
        let mut merged: Vec<(Slope, u64)> = Vec::new();
        for (s, m) in components {
            match merged.last_mut() {
                Some((t, n)) if *t == s => *n += m,
                _ => merged.push((s, m)),
            }
        }
        TorusMulticurve {
            components: merged,
            contractible,
            disc_signs: None,
            signs_dropped: false,
        }
    }

    pub fn with_signs(
        components: Vec<(Slope, u64)>,
        disc_signs: Vec<Sign>,
    ) -> TorusMulticurve {
        let mut m = TorusMulticurve::new(components, disc_signs.len() as u64);
        m.disc_signs = Some(disc_signs);
        m
    }

    pub fn components(&self) -> &[(Slope, u64)] {
        &self.components
    }

    pub fn contractible(&self) -> u64 {
        self.contractible
    }

    pub fn disc_signs(&self) -> Option<&[Sign]> {
        self.disc_signs.as_deref()
    }

    /// True when the sign map could not be transported through a closure.
    pub fn signs_dropped(&self) -> bool {
        self.signs_dropped
    }

    pub fn is_tight(&self) -> bool {
        self.contractible == 0
    }

    /// Total homology class (essential components only).
    pub fn total_class(&self) -> (i64, i64) {
        let mut class = (0i64, 0i64);
        for &(s, m) in &self.components {
            let (x, y) = s.vector();
            class.0 += x * m as i64;
            class.1 += y * m as i64;
        }
        class
    }

    /// Drop pairs of parallel closed curves (multiplicities mod 2).
    pub fn hat(&self) -> TorusMulticurve {
        let components: Vec<(Slope, u64)> = self
            .components
            .iter()
            .map(|&(s, m)| (s, m % 2))
            .filter(|&(_, m)| m > 0)
            .collect();
        let contractible = self.contractible % 2;
        let disc_signs = match &self.disc_signs {
            Some(signs) if contractible == 0 => Some(vec![]),
            Some(signs) => {
                // One disc survives; its sign is determined only when all
                // cancelled discs agreed.
                if signs.windows(2).all(|w| w[0] == w[1]) {
                    signs.first().map(|&s| vec![s])
                } else {
                    None
                }
            }
            None => None,
        };
        TorusMulticurve {
            components,
            contractible,
            signs_dropped: self.signs_dropped || (self.disc_signs.is_some() && disc_signs.is_none()),
            disc_signs,
        }
    }
}

/// Signed Euler count `chi(+) - chi(-)` of the complementary regions of a
/// closed multicurve on the torus.
///
/// Essential components cut the torus into annuli of Euler characteristic
/// zero; each contractible disc of sign `s` contributes `s` for the disc and
/// `s` again for the puncture it removes from the adjacent region, so the
/// total is twice the sum of the disc signs.
pub fn euler_signature(m: &TorusMulticurve) -> Result<i64> {
    let signs = m
        .disc_signs
        .as_ref()
        .ok_or_else(|| domain_error("no sign map present"))?;
    if signs.len() as u64 != m.contractible {
        return Err(domain_error("one sign per contractible component is required"));
    }
    let (a, b) = m.total_class();
    if a % 2 != 0 || b % 2 != 0 {
        return Err(domain_error(
            "no consistent sign map: total class is odd",
        ));
    }
    let mut slopes: Vec<Slope> = m.components.iter().map(|&(s, _)| s).collect();
    slopes.dedup();
    if slopes.len() > 1 {
        return Err(domain_error(
            "essential components of distinct slopes are not disjoint",
        ));
    }
    if m.components.is_empty() && signs.windows(2).any(|w| w[0] != w[1]) {
        return Err(domain_error(
            "no consistent sign map: unnested discs in one region must share a sign",
        ));
    }
    Ok(2 * signs.iter().map(|s| s.value()).sum::<i64>())
}

/// Boundary circle of an annulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Bottom,
    Top,
}

impl Side {
    pub fn parse(s: &str) -> Result<Side> {
        match s.trim() {
            "bottom" => Ok(Side::Bottom),
            "top" => Ok(Side::Top),
            other => Err(domain_error(format!("invalid side '{other}'"))),
        }
    }
}

/// One endpoint of an annulus arc: a marked point on a boundary circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct End {
    pub side: Side,
    pub index: usize,
}

impl End {
    pub fn bottom(index: usize) -> End {
        End {
            side: Side::Bottom,
            index,
        }
    }

    pub fn top(index: usize) -> End {
        End {
            side: Side::Top,
            index,
        }
    }
}

/// An embedded arc on the annulus in normal coordinates: two endpoints and a
/// winding integer. The lifted position of `to` is its base position plus
/// `winding` full turns, measured with `from` at its base position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AnnulusArc {
    pub from: End,
    pub to: End,
    pub winding: i64,
}

impl AnnulusArc {
    pub fn new(from: End, to: End, winding: i64) -> AnnulusArc {
        AnnulusArc { from, to, winding }
    }

    fn is_through(&self) -> bool {
        self.from.side != self.to.side
    }
}

/// A multicurve on the annulus: marked-point counts for the two boundary
/// circles, embedded arcs, essential core curves, contractible closed
/// curves, and an optional base region sign (the sign of the region touching
/// the bottom circle just after marked point 0; other signs alternate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnulusSet {
    bottom: usize,
    top: usize,
    arcs: Vec<AnnulusArc>,
    cores: u64,
    contractible: u64,
    base_sign: Option<Sign>,
}

/// Boundary position of a lifted arc endpoint on the compactified strip,
/// ordered along the boundary circle of the strip-disc: the bottom line
/// left to right, then the top line right to left.
fn strip_key(side: Side, x: Rational) -> (u8, Rational) {
    match side {
        Side::Bottom => (0, x),
        Side::Top => (1, -x),
    }
}

/// Two chords of a disc cross exactly when their boundary endpoints
/// interleave.
fn chords_cross(a: [(u8, Rational); 2], b: [(u8, Rational); 2]) -> bool {
    let (a_lo, a_hi) = if a[0] < a[1] { (a[0], a[1]) } else { (a[1], a[0]) };
    let inside_0 = b[0] > a_lo && b[0] < a_hi;
    let inside_1 = b[1] > a_lo && b[1] < a_hi;
    inside_0 != inside_1
}

impl AnnulusSet {
    pub fn new(
        bottom: usize,
        top: usize,
        arcs: Vec<AnnulusArc>,
        cores: u64,
        contractible: u64,
        base_sign: Option<Sign>,
    ) -> Result<AnnulusSet> {
        let set = AnnulusSet {
            bottom,
            top,
            arcs,
            cores,
            contractible,
            base_sign,
        };
        set.validate()?;
        Ok(set)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn arcs(&self) -> &[AnnulusArc] {
        &self.arcs
    }

    pub fn cores(&self) -> u64 {
        self.cores
    }

    pub fn contractible(&self) -> u64 {
        self.contractible
    }

    pub fn base_sign(&self) -> Option<Sign> {
        self.base_sign
    }

    pub fn is_tight(&self) -> bool {
        self.contractible == 0
    }

    /// Drop pairs of parallel closed curves; arcs are unchanged.
    pub fn hat(&self) -> AnnulusSet {
        AnnulusSet {
            cores: self.cores % 2,
            contractible: self.contractible % 2,
            ..self.clone()
        }
    }

    fn count(&self, side: Side) -> usize {
        match side {
            Side::Bottom => self.bottom,
            Side::Top => self.top,
        }
    }

    /// Base (unlifted) circle position of a marked point, in `[0, 1)`.
    fn position(&self, end: End) -> Rational {
        Ratio::new(end.index as i64, self.count(end.side) as i64)
    }

    /// Lifted endpoints of an arc, with `from` at its base position.
    fn lifted(&self, arc: &AnnulusArc) -> [(Side, Rational); 2] {
        [
            (arc.from.side, self.position(arc.from)),
            (
                arc.to.side,
                self.position(arc.to) + Rational::from_integer(arc.winding),
            ),
        ]
    }

    fn validate(&self) -> Result<()> {
        // Every marked point is the endpoint of exactly one arc end.
        let mut used = vec![false; self.bottom + self.top];
        for arc in &self.arcs {
            for end in [arc.from, arc.to] {
                if end.index >= self.count(end.side) {
                    return Err(domain_error(format!(
                        "marked point index {} out of range",
                        end.index
                    )));
                }
                let slot = match end.side {
                    Side::Bottom => end.index,
                    Side::Top => self.bottom + end.index,
                };
                if used[slot] {
                    return Err(domain_error("marked point used by two arc ends"));
                }
                used[slot] = true;
            }
        }
        if used.iter().any(|&u| !u) {
            return Err(domain_error("every marked point must be an arc endpoint"));
        }
        // Essential core curves cannot be disjoint from through arcs.
        if self.cores > 0 && self.arcs.iter().any(|a| a.is_through()) {
            return Err(domain_error(
                "core curves intersect through arcs: not an embedded multicurve",
            ));
        }
        // Pairwise (and self, under deck shifts) non-crossing in the cover.
        for (i, a) in self.arcs.iter().enumerate() {
            for (j, b) in self.arcs.iter().enumerate().skip(i) {
                let window = a.winding.abs() + b.winding.abs() + 2;
                for shift in -window..=window {
                    if i == j && shift == 0 {
                        continue;
                    }
                    let la = self.lifted(a);
                    let lb = self.lifted(b);
                    let s = Rational::from_integer(shift);
                    let ka = [strip_key(la[0].0, la[0].1), strip_key(la[1].0, la[1].1)];
                    let kb = [
                        strip_key(lb[0].0, lb[0].1 + s),
                        strip_key(lb[1].0, lb[1].1 + s),
                    ];
                    if ka.iter().any(|k| kb.contains(k)) {
                        return Err(domain_error("arc lifts share an endpoint"));
                    }
                    if chords_cross(ka, kb) {
                        return Err(domain_error(
                            "arcs cross: not an embedded multicurve",
                        ));
                    }
                }
            }
        }
        // A sign map alternates around each boundary circle, so it exists
        // only when both circles carry evenly many marked points.
        if self.base_sign.is_some()
            && (!self.bottom.is_multiple_of(2) || !self.top.is_multiple_of(2))
        {
            return Err(domain_error(
                "sign map requires evenly many marked points per circle",
            ));
        }
        Ok(())
    }
}

/// Glue the two boundary circles of an annulus (point `j` of the top circle
/// to point `j` of the bottom circle, seams aligned), producing a closed
/// multicurve on the torus. Homology classes are reported in the basis
/// (core direction, gluing direction).
///
/// The sign map is transported when the closed-up class is even; otherwise
/// it is flagged as dropped. Contractible components created by the closure
/// are assigned the sign opposite to the base region.
pub fn close_annulus(m: &AnnulusSet) -> Result<TorusMulticurve> {
    if m.bottom != m.top {
        return Err(domain_error(
            "closing an annulus requires matching marked points on both circles",
        ));
    }
    let k = m.bottom;
    // Locate the arc end attached to each marked point.
    let mut at_point: Vec<Option<(usize, bool)>> = vec![None; 2 * k];
    for (idx, arc) in m.arcs.iter().enumerate() {
        for (end, starts_here) in [(arc.from, true), (arc.to, false)] {
            let slot = match end.side {
                Side::Bottom => end.index,
                Side::Top => k + end.index,
            };
            at_point[slot] = Some((idx, starts_here));
        }
    }

    let mut visited = vec![false; m.arcs.len()];
    let mut components: Vec<(i64, i64)> = Vec::new();
    for start in 0..m.arcs.len() {
        if visited[start] {
            continue;
        }
        let mut horizontal = Rational::from_integer(0);
        let mut vertical: i64 = 0;
        let mut arc_idx = start;
        let mut enter_at_from = true;
        loop {
            visited[arc_idx] = true;
            let arc = &m.arcs[arc_idx];
            let lifted = m.lifted(arc);
            let (exit, displacement) = if enter_at_from {
                (arc.to, lifted[1].1 - lifted[0].1)
            } else {
                (arc.from, lifted[0].1 - lifted[1].1)
            };
            horizontal += displacement;
            // Pass through the gluing circle to the matching point.
            let (next_slot, step) = match exit.side {
                Side::Top => (exit.index, 1),
                Side::Bottom => (k + exit.index, -1),
            };
            vertical += step;
            let (next_arc, next_is_from) =
                at_point[next_slot].expect("every marked point carries an arc end");
            arc_idx = next_arc;
            enter_at_from = next_is_from;
            if arc_idx == start && enter_at_from {
                break;
            }
        }
        debug_assert!(horizontal.is_integer());
        components.push((horizontal.to_integer(), vertical));
    }

    let mut essential: Vec<(Slope, u64)> = Vec::new();
    let mut contractible = m.contractible;
    let mut created = 0u64;
    for (a, b) in components {
        if a == 0 && b == 0 {
            contractible += 1;
            created += 1;
        } else {
            let g = crate::lattice::gcd(a, b) as u64;
            let slope = reduce_slope((a, b)).expect("nonzero class");
            essential.push((slope, g));
        }
    }
    if m.cores > 0 {
        essential.push((Slope::from_integer(0), m.cores));
    }
    // Merge parallel classes.
    essential.sort();
    let mut merged: Vec<(Slope, u64)> = Vec::new();
    for (s, c) in essential {
        match merged.last_mut() {
            Some((t, m)) if *t == s => *m += c,
            _ => merged.push((s, c)),
        }
    }

    let mut result = TorusMulticurve::new(merged, contractible);
    if let Some(base) = m.base_sign {
        let (a, b) = result.total_class();
        if a % 2 == 0 && b % 2 == 0 {
            let disc = base.flip();
            result.disc_signs = Some(vec![disc; (created + m.contractible) as usize]);
        } else {
            result.signs_dropped = true;
        }
    }
    Ok(result)
}

/// An arc on the once-punctured torus: endpoints on the boundary circle and
/// the relative homology class of the arc (windings across the two seams).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PuncturedTorusArc {
    pub from: usize,
    pub to: usize,
    pub class: (i64, i64),
}

/// A multicurve on the once-punctured torus: marked points on the boundary,
/// arcs with relative classes, essential closed components grouped by slope,
/// and contractible closed components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuncturedTorusSet {
    boundary: usize,
    arcs: Vec<PuncturedTorusArc>,
    closed: Vec<(Slope, u64)>,
    contractible: u64,
}

impl PuncturedTorusSet {
    pub fn new(
        boundary: usize,
        arcs: Vec<PuncturedTorusArc>,
        mut closed: Vec<(Slope, u64)>,
        contractible: u64,
    ) -> Result<PuncturedTorusSet> {
        let mut used = vec![false; boundary];
        for arc in &arcs {
            for idx in [arc.from, arc.to] {
                if idx >= boundary {
                    return Err(domain_error("marked point index out of range"));
                }
                if used[idx] {
                    return Err(domain_error("marked point used by two arc ends"));
                }
                used[idx] = true;
            }
        }
        if used.iter().any(|&u| !u) {
            return Err(domain_error("every marked point must be an arc endpoint"));
        }
        closed.retain(|&(_, m)| m > 0);
        closed.sort();
        // Disjoint essential closed curves on a torus are parallel.
        let mut slopes: Vec<Slope> = closed.iter().map(|&(s, _)| s).collect();
        slopes.dedup();
        if slopes.len() > 1 {
            return Err(domain_error(
                "essential closed components of distinct slopes are not disjoint",
            ));
        }
        Ok(PuncturedTorusSet {
            boundary,
            arcs,
            closed,
            contractible,
        })
    }

    pub fn boundary(&self) -> usize {
        self.boundary
    }

    pub fn arcs(&self) -> &[PuncturedTorusArc] {
        &self.arcs
    }

    pub fn closed(&self) -> &[(Slope, u64)] {
        &self.closed
    }

    pub fn contractible(&self) -> u64 {
        self.contractible
    }

    pub fn is_tight(&self) -> bool {
        self.contractible == 0
    }

    pub fn hat(&self) -> PuncturedTorusSet {
        PuncturedTorusSet {
            closed: self
                .closed
                .iter()
                .map(|&(s, m)| (s, m % 2))
                .filter(|&(_, m)| m > 0)
                .collect(),
            contractible: self.contractible % 2,
            ..self.clone()
        }
    }
}

/// Cap off the boundary of a once-punctured torus with a disc, joining the
/// two endpoints of the single boundary arc by an arc in the disc.
///
/// The arc closes to a component in its relative homology class: essential
/// when the class is nonzero, contractible when the arc is boundary
/// parallel.
pub fn complete_punctured_torus(m: &PuncturedTorusSet) -> Result<TorusMulticurve> {
    if m.boundary != 2 || m.arcs.len() != 1 {
        return Err(domain_error(
            "completion requires exactly one arc meeting the boundary in two points",
        ));
    }
    let arc = m.arcs[0];
    let mut components = m.closed.clone();
    let mut contractible = m.contractible;
    if arc.class == (0, 0) {
        contractible += 1;
    } else {
        let g = crate::lattice::gcd(arc.class.0, arc.class.1) as u64;
        let slope = reduce_slope(arc.class)?;
        components.push((slope, g));
    }
    Ok(TorusMulticurve::new(components, contractible))
}

/// End of an arc on a pair of pants: one of the three boundary circles and a
/// marked point on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PantsEnd {
    pub circle: usize,
    pub index: usize,
}

/// A multicurve on the pair of pants: arcs between marked points, closed
/// components parallel to each boundary circle, and contractible closed
/// components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PantsSet {
    points: [usize; 3],
    arcs: Vec<(PantsEnd, PantsEnd)>,
    boundary_parallel: [u64; 3],
    contractible: u64,
}

impl PantsSet {
    pub fn new(
        points: [usize; 3],
        arcs: Vec<(PantsEnd, PantsEnd)>,
        boundary_parallel: [u64; 3],
        contractible: u64,
    ) -> Result<PantsSet> {
        let mut used: Vec<Vec<bool>> = points.iter().map(|&n| vec![false; n]).collect();
        for (a, b) in &arcs {
            for end in [a, b] {
                if end.circle >= 3 || end.index >= points[end.circle] {
                    return Err(domain_error("marked point out of range"));
                }
                if used[end.circle][end.index] {
                    return Err(domain_error("marked point used by two arc ends"));
                }
                used[end.circle][end.index] = true;
            }
        }
        if used.iter().flatten().any(|&u| !u) {
            return Err(domain_error("every marked point must be an arc endpoint"));
        }
        Ok(PantsSet {
            points,
            arcs,
            boundary_parallel,
            contractible,
        })
    }

    pub fn contractible(&self) -> u64 {
        self.contractible
    }

    pub fn is_tight(&self) -> bool {
        self.contractible == 0
    }

    pub fn hat(&self) -> PantsSet {
        PantsSet {
            boundary_parallel: self.boundary_parallel.map(|m| m % 2),
            contractible: self.contractible % 2,
            ..self.clone()
        }
    }
}

/// A multicurve on one of the supported compact surfaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceMulticurve {
    Annulus(AnnulusSet),
    PuncturedTorus(PuncturedTorusSet),
    Pants(PantsSet),
}

impl SurfaceMulticurve {
    /// Tight exactly when there is no contractible closed component.
    pub fn is_tight(&self) -> bool {
        match self {
            SurfaceMulticurve::Annulus(m) => m.is_tight(),
            SurfaceMulticurve::PuncturedTorus(m) => m.is_tight(),
            SurfaceMulticurve::Pants(m) => m.is_tight(),
        }
    }

    /// Reduce every closed-curve multiplicity mod 2 within its parallel
    /// class; arcs are unchanged.
    pub fn hat(&self) -> SurfaceMulticurve {
        match self {
            SurfaceMulticurve::Annulus(m) => SurfaceMulticurve::Annulus(m.hat()),
            SurfaceMulticurve::PuncturedTorus(m) => SurfaceMulticurve::PuncturedTorus(m.hat()),
            SurfaceMulticurve::Pants(m) => SurfaceMulticurve::Pants(m.hat()),
        }
    }
}

/// Outcome of attaching an elementary template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateVerdict {
    /// The attachment stays tight; carries the concatenated multicurve.
    Tight(AnnulusSet),
    /// The attachment closes up a contractible component.
    Overtwisted,
}

/// The elementary template of size `n`: an annulus whose attaching circle
/// carries `2n` marked points with one boundary-parallel arc over the span
/// `(i, i+1)`, and whose far circle carries the remaining `2(n-1)` through
/// arcs in cyclic order.
pub fn elementary_template(n: usize, span: usize, attach: Side) -> Result<AnnulusSet> {
    if n == 0 {
        return Err(domain_error("template size must be at least 1"));
    }
    let attach_count = 2 * n;
    let far_count = 2 * n - 2;
    if span >= attach_count {
        return Err(domain_error("span start out of range"));
    }
    let far = match attach {
        Side::Bottom => Side::Top,
        Side::Top => Side::Bottom,
    };
    let mut arcs = Vec::new();
    // Boundary-parallel arc over the short span (i, i+1).
    let i = span;
    let j = (i + 1) % attach_count;
    let bp_winding = if i + 1 == attach_count { 1 } else { 0 };
    arcs.push(AnnulusArc::new(
        End {
            side: attach,
            index: i,
        },
        End {
            side: attach,
            index: j,
        },
        bp_winding,
    ));
    // Through arcs: attach point i+2+k joins far point k, lifted so that the
    // endpoints stay in cyclic order around the span.
    for k in 0..far_count {
        let raw = i + 2 + k;
        let index = raw % attach_count;
        // The lifted attach position is raw/(2n) and the target far
        // position is k/(2n-2); the winding compensates for the wrap of
        // the attach index.
        let winding = -((raw / attach_count) as i64);
        arcs.push(AnnulusArc::new(
            End {
                side: attach,
                index,
            },
            End {
                side: far,
                index: k,
            },
            winding,
        ));
    }
    let (bottom, top) = match attach {
        Side::Bottom => (attach_count, far_count),
        Side::Top => (far_count, attach_count),
    };
    AnnulusSet::new(bottom, top, arcs, 0, 0, None)
}

/// Stack two annuli, gluing the top circle of `lower` to the bottom circle
/// of `upper` (equal marked points, seams aligned). Chains of arcs through
/// the glued circle become arcs of the combined annulus; chains that close
/// up become core or contractible components.
pub fn concatenate(lower: &AnnulusSet, upper: &AnnulusSet) -> Result<AnnulusSet> {
    if lower.top != upper.bottom {
        return Err(domain_error(
            "gluing requires matching marked points on the shared circle",
        ));
    }
    let k = lower.top;
    // Arc end attached to each glued point, on each side of the circle.
    let mut lower_at: Vec<Option<(usize, bool)>> = vec![None; k];
    for (idx, arc) in lower.arcs.iter().enumerate() {
        for (end, at_from) in [(arc.from, true), (arc.to, false)] {
            if end.side == Side::Top {
                lower_at[end.index] = Some((idx, at_from));
            }
        }
    }
    let mut upper_at: Vec<Option<(usize, bool)>> = vec![None; k];
    for (idx, arc) in upper.arcs.iter().enumerate() {
        for (end, at_from) in [(arc.from, true), (arc.to, false)] {
            if end.side == Side::Bottom {
                upper_at[end.index] = Some((idx, at_from));
            }
        }
    }

    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Layer {
        Lower,
        Upper,
    }

    let arc_of = |layer: Layer, idx: usize| -> &AnnulusArc {
        match layer {
            Layer::Lower => &lower.arcs[idx],
            Layer::Upper => &upper.arcs[idx],
        }
    };
    let set_of = |layer: Layer| -> &AnnulusSet {
        match layer {
            Layer::Lower => lower,
            Layer::Upper => upper,
        }
    };

    // Walk a chain starting from a given arc end; returns the final free
    // end (layer, exit endpoint) and the accumulated horizontal
    // displacement, or None as the final end for a closed chain.
    let mut visited: std::collections::HashSet<(u8, usize)> = std::collections::HashSet::new();
    let mut new_arcs: Vec<AnnulusArc> = Vec::new();
    let mut cores = lower.cores + upper.cores;
    let mut contractible = lower.contractible + upper.contractible;

    let walk = |start_layer: Layer,
                    start_idx: usize,
                    start_at_from: bool,
                    visited: &mut std::collections::HashSet<(u8, usize)>|
     -> (Option<(Layer, End)>, Rational) {
        let mut layer = start_layer;
        let mut idx = start_idx;
        let mut at_from = start_at_from;
        let mut displacement = Rational::from_integer(0);
        loop {
            let key = (if layer == Layer::Lower { 0 } else { 1 }, idx);
            visited.insert(key);
            let arc = arc_of(layer, idx);
            let set = set_of(layer);
            let lifted = set.lifted(arc);
            let (exit, d) = if at_from {
                (arc.to, lifted[1].1 - lifted[0].1)
            } else {
                (arc.from, lifted[0].1 - lifted[1].1)
            };
            displacement += d;
            // Is the exit on the glued circle?
            let glued = match layer {
                Layer::Lower => exit.side == Side::Top,
                Layer::Upper => exit.side == Side::Bottom,
            };
            if !glued {
                return (Some((layer, exit)), displacement);
            }
            let (next, next_layer) = match layer {
                Layer::Lower => (upper_at[exit.index], Layer::Upper),
                Layer::Upper => (lower_at[exit.index], Layer::Lower),
            };
            let (next_idx, next_at_from) =
                next.expect("every glued point carries an arc end on both sides");
            let next_key = (if next_layer == Layer::Lower { 0 } else { 1 }, next_idx);
            if visited.contains(&next_key) {
                // Closed chain.
                return (None, displacement);
            }
            layer = next_layer;
            idx = next_idx;
            at_from = next_at_from;
        }
    };

    // Combined coordinates: bottom circle of `lower`, top circle of `upper`.
    let combined_end = |layer: Layer, end: End| -> End {
        match layer {
            Layer::Lower => End::bottom(end.index),
            Layer::Upper => End::top(end.index),
        }
    };
    let combined_position = |end: End| -> Rational {
        match end.side {
            Side::Bottom => Ratio::new(end.index as i64, lower.bottom.max(1) as i64),
            Side::Top => Ratio::new(end.index as i64, upper.top.max(1) as i64),
        }
    };

    // Open chains: start from every free end of either annulus.
    let mut free_starts: Vec<(Layer, usize, bool)> = Vec::new();
    for (idx, arc) in lower.arcs.iter().enumerate() {
        for (end, at_from) in [(arc.from, true), (arc.to, false)] {
            if end.side == Side::Bottom {
                free_starts.push((Layer::Lower, idx, at_from));
            }
        }
    }
    for (idx, arc) in upper.arcs.iter().enumerate() {
        for (end, at_from) in [(arc.from, true), (arc.to, false)] {
            if end.side == Side::Top {
                free_starts.push((Layer::Upper, idx, at_from));
            }
        }
    }
    let mut chain_done: std::collections::HashSet<(u8, usize)> = std::collections::HashSet::new();
    for (layer, idx, at_from) in free_starts {
        let key = (if layer == Layer::Lower { 0 } else { 1 }, idx);
        if chain_done.contains(&key) {
            continue;
        }
        let (final_end, displacement) = walk(layer, idx, at_from, &mut visited);
        chain_done.extend(visited.iter().copied());
        let (end_layer, end) = final_end.expect("chain from a free end exits at a free end");
        let start_arc = arc_of(layer, idx);
        let start_end = if at_from { start_arc.from } else { start_arc.to };
        let from = combined_end(layer, start_end);
        let to = combined_end(end_layer, end);
        let winding = displacement - (combined_position(to) - combined_position(from));
        debug_assert!(winding.is_integer());
        new_arcs.push(AnnulusArc::new(from, to, winding.to_integer()));
    }
    // Closed chains: whatever was not reached from a free end.
    for (layer_tag, arcs_len) in [(Layer::Lower, lower.arcs.len()), (Layer::Upper, upper.arcs.len())]
    {
        for idx in 0..arcs_len {
            let key = (if layer_tag == Layer::Lower { 0 } else { 1 }, idx);
            if chain_done.contains(&key) {
                continue;
            }
            // Only arcs entirely inside chains through the glued circle
            // remain; follow the cycle once.
            let (final_end, displacement) = walk(layer_tag, idx, true, &mut visited);
            chain_done.extend(visited.iter().copied());
            debug_assert!(final_end.is_none());
            debug_assert!(displacement.is_integer());
            let a = displacement.to_integer();
            if a == 0 {
                contractible += 1;
            } else if a.abs() == 1 {
                cores += 1;
            } else {
                return Err(domain_error(
                    "closed chain wraps multiple times: not an embedded multicurve",
                ));
            }
        }
    }

    AnnulusSet::new(
        lower.bottom,
        upper.top,
        new_arcs,
        cores,
        contractible,
        lower.base_sign.or(upper.base_sign),
    )
}

/// Attach an elementary template of size `n` along the given boundary circle
/// of an annulus multicurve, its boundary-parallel arc sitting over the
/// adjacent span starting at marked point `span`.
///
/// The verdict is overtwisted exactly when the attachment closes up a
/// contractible component: in the concatenation itself, or — when the free
/// circles match and the annulus closes to a torus — in that closure.
pub fn attach_template(
    m: &AnnulusSet,
    side: Side,
    span: usize,
    n: usize,
) -> Result<TemplateVerdict> {
    let count = m.count(side);
    if count != 2 * n {
        return Err(domain_error(format!(
            "template of size {n} needs {} marked points on the attaching circle, found {count}",
            2 * n
        )));
    }
    if span >= count {
        return Err(domain_error("span start out of range"));
    }
    let template_attach = match side {
        Side::Top => Side::Bottom,
        Side::Bottom => Side::Top,
    };
    let template = elementary_template(n, span, template_attach)?;
    let combined = match side {
        Side::Top => concatenate(m, &template)?,
        Side::Bottom => concatenate(&template, m)?,
    };
    let overtwisted = if combined.bottom() == combined.top() {
        !close_annulus(&combined)?.is_tight()
    } else {
        !combined.is_tight()
    };
    if overtwisted {
        Ok(TemplateVerdict::Overtwisted)
    } else {
        Ok(TemplateVerdict::Tight(combined))
    }
}
