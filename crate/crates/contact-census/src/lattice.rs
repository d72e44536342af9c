//! Slope arithmetic on the torus: primitive integer vectors up to sign,
//! the projective SL(2,Z) action, surgery matrices, and negative continued
//! fractions with coefficients `d_i <= -2`.

use num_rational::Ratio;
use num_traits::Zero;

use crate::dividing_sets::TorusDividingSet;
use crate::{domain_error, Result};

/// Exact rational number used throughout the crate.
pub type Rational = Ratio<i64>;

/// Parse a rational written as `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| domain_error(format!("invalid integer '{t}'")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q == 0 {
                return Err(domain_error("zero denominator"));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Render a rational as `p/q`, or `p` when the denominator is 1.
pub fn format_rational(r: Rational) -> String {
    if *r.denom() == 1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A slope on the torus: the projective class of a primitive integer vector
/// `(x, y)`, with value `y/x` (infinity when `x = 0`).
///
/// The representative is canonicalized so that `x > 0`, or `(x, y) = (0, 1)`
/// for the infinite slope; `(x, y)` and `(-x, -y)` denote the same slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope {
    x: i64,
    y: i64,
}

impl Slope {
    /// The infinite slope `(0, 1)`.
    pub const INFINITY: Slope = Slope { x: 0, y: 1 };

    /// Slope with finite value `v`.
    pub fn from_rational(v: Rational) -> Slope {
        let v = v.reduced();
        Slope {
            x: *v.denom(),
            y: *v.numer(),
        }
    }

    pub fn from_integer(n: i64) -> Slope {
        Slope { x: 1, y: n }
    }

    /// Parse `p/q`, a bare integer, or `inf`.
    pub fn parse(s: &str) -> Result<Slope> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(Slope::INFINITY);
        }
        Ok(Slope::from_rational(parse_rational(t)?))
    }

    pub fn is_infinite(&self) -> bool {
        self.x == 0
    }

    /// Finite value `y/x`, or `None` for the infinite slope.
    pub fn value(&self) -> Option<Rational> {
        if self.x == 0 {
            None
        } else {
            Some(Rational::new(self.y, self.x))
        }
    }

    /// Canonical primitive vector `(x, y)`.
    pub fn vector(&self) -> (i64, i64) {
        (self.x, self.y)
    }

    /// Denominator of the slope value (`x` of the canonical vector; 0 for ∞).
    pub fn denominator(&self) -> i64 {
        self.x
    }

    /// Numerator of the slope value (`y` of the canonical vector).
    pub fn numerator(&self) -> i64 {
        self.y
    }
}

impl std::fmt::Display for Slope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.x == 0 {
            write!(f, "inf")
        } else if self.x == 1 {
            write!(f, "{}", self.y)
        } else {
            write!(f, "{}/{}", self.y, self.x)
        }
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended Euclid: returns `(g, u, v)` with `u*a + v*b = g = gcd(a, b)`.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        let s = if a < 0 { -1 } else { 1 };
        return (a.abs(), s, 0);
    }
    let (g, u, v) = extended_gcd(b, a % b);
    (g, v, u - (a / b) * v)
}

/// Canonicalize an integer vector to a slope.
///
/// Fails on the zero vector; divides out the gcd and fixes the sign so that
/// `x > 0`, or `(0, 1)` when `x = 0`.
pub fn reduce_slope(vector: (i64, i64)) -> Result<Slope> {
    let (x, y) = vector;
    if x == 0 && y == 0 {
        return Err(domain_error("zero vector has no slope"));
    }
    let g = gcd(x, y);
    let (mut x, mut y) = (x / g, y / g);
    if x < 0 || (x == 0 && y < 0) {
        x = -x;
        y = -y;
    }
    Ok(Slope { x, y })
}

/// A 2x2 integer matrix with determinant +1, acting on slope vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    /// Row-major entries `(a b; c d)`; the determinant must be +1.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<IntMatrix2> {
        let m = IntMatrix2 { a, b, c, d };
        if m.det() != 1 {
            return Err(domain_error(format!(
                "matrix ({a} {b}; {c} {d}) has determinant {}, expected +1",
                m.det()
            )));
        }
        Ok(m)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn entries(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// Inverse; exact because the determinant is +1.
    pub fn inverse(&self) -> IntMatrix2 {
        IntMatrix2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: (i64, i64)) -> (i64, i64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }
}

/// Determinant of the 2x2 matrix with columns `u`, `v`.
pub fn det2(u: (i64, i64), v: (i64, i64)) -> i64 {
    u.0 * v.1 - u.1 * v.0
}

/// Projective action of an SL(2,Z) matrix on a slope.
///
/// Satisfies the composition law `mobius(g*h, s) = mobius(g, mobius(h, s))`.
pub fn mobius(g: &IntMatrix2, s: &Slope) -> Slope {
    // g is invertible, so the image of a primitive vector is nonzero.
    reduce_slope(g.apply(s.vector())).expect("image of a slope is nonzero")
}

/// The gluing matrix `(1 0; -e0 1)` relating the two sides of a vertical
/// torus in `M(e0, r)`.
pub fn gluing_matrix(e0: i64) -> IntMatrix2 {
    IntMatrix2 {
        a: 1,
        b: 0,
        c: -e0,
        d: 1,
    }
}

/// The surgery matrix `A(r) = (alpha alpha'; -beta -beta')` for `r = beta/alpha`
/// in `(0, 1)`, where `0 <= alpha' < alpha` and `alpha'*beta - alpha*beta' = 1`.
pub fn surgery_matrix(r: Rational) -> Result<IntMatrix2> {
    if r <= Rational::zero() || r >= Rational::from_integer(1) {
        return Err(domain_error(format!(
            "surgery coefficient {} is not in (0, 1)",
            format_rational(r)
        )));
    }
    let r = r.reduced();
    let alpha = *r.denom();
    let beta = *r.numer();
    // Solve alpha'*beta ≡ 1 (mod alpha) with 0 <= alpha' < alpha.
    let (_, u, _) = extended_gcd(beta, alpha);
    let alpha_p = u.rem_euclid(alpha);
    let beta_p = (alpha_p * beta - 1) / alpha;
    let m = IntMatrix2 {
        a: alpha,
        b: alpha_p,
        c: -beta,
        d: -beta_p,
    };
    debug_assert_eq!(m.det(), 1);
    Ok(m)
}

/// A negative continued fraction expansion `[d0, ..., dn]`, meaning
/// `d0 - 1/(d1 - 1/(... - 1/dn))`, with `d_i <= -2` for `i >= 1`.
///
/// [`cf_expand`] only produces this normal form; [`cf_value`] additionally
/// accepts formal expansions (for instance a trailing `-1`), which arise in
/// coefficient-reversal identities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CFExpansion {
    coefficients: Vec<i64>,
}

impl CFExpansion {
    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Expand a rational `s < -1` (or an integer `<= -2`) as a negative continued
/// fraction with all tail coefficients `<= -2`.
pub fn cf_expand(s: Rational) -> Result<CFExpansion> {
    if s >= Rational::from_integer(-1) {
        return Err(domain_error(format!(
            "continued fraction expansion requires a value < -1, got {}",
            format_rational(s)
        )));
    }
    let mut coefficients = Vec::new();
    let mut s = s.reduced();
    loop {
        if s.is_integer() {
            coefficients.push(s.to_integer());
            break;
        }
        let d = s.floor().to_integer();
        coefficients.push(d);
        // Recurse on -1/(s - d); the fractional part is in (0, 1), so the
        // next value is < -1 and every tail coefficient lands at <= -2.
        s = -Rational::from_integer(1) / (s - Rational::from_integer(d));
    }
    debug_assert!(coefficients[1..].iter().all(|&d| d <= -2));
    Ok(CFExpansion { coefficients })
}

/// Evaluate a (possibly formal) coefficient list `d0 - 1/(d1 - ...)`.
///
/// Fails if a zero denominator appears while folding the nested fraction.
pub fn cf_value(coefficients: &[i64]) -> Result<Rational> {
    if coefficients.is_empty() {
        return Err(domain_error("empty continued fraction"));
    }
    let mut value = Rational::from_integer(*coefficients.last().unwrap());
    for &d in coefficients[..coefficients.len() - 1].iter().rev() {
        if value.is_zero() {
            return Err(domain_error(
                "zero denominator while evaluating continued fraction",
            ));
        }
        value = Rational::from_integer(d) - Rational::from_integer(1) / value;
    }
    Ok(value)
}

/// Boundary slope `(-n*beta - beta') / (n*alpha + alpha')` of the standard
/// neighbourhood of the singular fibre with `n` meridian twists, for
/// surgery coefficient `r = beta/alpha`.
///
/// For `n` sufficiently negative the value lies below `-beta/alpha`.
pub fn standard_nbhd_slope(n: i64, r: Rational) -> Result<Slope> {
    let m = surgery_matrix(r)?;
    let (alpha, alpha_p, neg_beta, neg_beta_p) = m.entries();
    let beta = -neg_beta;
    let beta_p = -neg_beta_p;
    let denom = n * alpha + alpha_p;
    if denom == 0 {
        return Err(domain_error("degenerate denominator n*alpha + alpha' = 0"));
    }
    reduce_slope((denom, -n * beta - beta_p))
}

/// Geometric intersection number `2n * |det(gamma, s)|` of a primitive curve
/// `gamma` with a torus dividing set of `2n` curves of slope `s`.
///
/// Half this value is the minimal division number over the isotopy family;
/// it vanishes exactly in the pre-Lagrangian (parallel) case.
pub fn intersection_number(gamma: &Slope, dividing: &TorusDividingSet) -> u64 {
    let d = det2(gamma.vector(), dividing.slope().vector()).unsigned_abs();
    2 * dividing.division() * d
}
