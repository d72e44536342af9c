//! Classification data for tight contact structures on a solid torus with
//! minimal convex boundary: canonical boundary slope, the continued-fraction
//! count formula, enumeration of the complete per-block sign invariants, and
//! the fiber count over a background with a given twisting number.

use num_traits::Zero;

use crate::farey::{block_decomposition, monotone_path};
use crate::lattice::{
    cf_expand, extended_gcd, mobius, reduce_slope, surgery_matrix, IntMatrix2, Rational, Slope,
};
use crate::{domain_error, Result};

/// Boundary data of a solid torus: the meridian slope, the dividing slope of
/// the convex boundary, and the division number `n` (the boundary carries
/// `2n` dividing curves). Counting operations require `n = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SolidTorusBoundary {
    meridian: Slope,
    dividing: Slope,
    division: u64,
}

impl SolidTorusBoundary {
    pub fn new(meridian: Slope, dividing: Slope, division: u64) -> Result<SolidTorusBoundary> {
        if meridian == dividing {
            return Err(domain_error("dividing slope equals the meridian"));
        }
        if division == 0 {
            return Err(domain_error("division number must be positive"));
        }
        Ok(SolidTorusBoundary {
            meridian,
            dividing,
            division,
        })
    }

    pub fn meridian(&self) -> Slope {
        self.meridian
    }

    pub fn dividing(&self) -> Slope {
        self.dividing
    }

    pub fn division(&self) -> u64 {
        self.division
    }
}

/// Per-block signed slice counts `(r0, ..., rk)`: the difference between
/// positive and negative basic slices inside each continued fraction block.
/// Together with the block sizes this is a complete isotopy invariant of a
/// tight solid torus with fixed boundary: `|r_i| <= m_i` and `r_i ≡ m_i
/// (mod 2)` for every block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RInvariants {
    values: Vec<i64>,
    block_sizes: Vec<usize>,
}

impl RInvariants {
    pub fn new(values: Vec<i64>, block_sizes: Vec<usize>) -> Result<RInvariants> {
        if values.len() != block_sizes.len() {
            return Err(domain_error("one signed count per block is required"));
        }
        for (&r, &m) in values.iter().zip(&block_sizes) {
            let m = m as i64;
            if r.abs() > m || (r - m).rem_euclid(2) != 0 {
                return Err(domain_error(format!(
                    "signed count {r} is not admissible for a block of size {m}"
                )));
            }
        }
        Ok(RInvariants {
            values,
            block_sizes,
        })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }
}

/// Canonical dividing slope of a solid torus boundary.
///
/// A unimodular basis change sends the meridian to `(1, 0)`; meridian Dehn
/// twists then shift the reciprocal of the dividing slope by integers, so
/// the slope can be normalized to `-p/q` with `p > q >= 1`, or to `-1` in
/// the nonrotative case. The result is invariant under meridian twists and
/// global negation of the input.
pub fn normalize_boundary(b: &SolidTorusBoundary) -> Result<Slope> {
    if b.division != 1 {
        return Err(domain_error("normalization requires a minimal boundary"));
    }
    let (mx, my) = b.meridian.vector();
    // Rows (u, v) and (-my, mx) with u*mx + v*my = 1 send the meridian to (1, 0).
    let (_, u, v) = extended_gcd(mx, my);
    let h = IntMatrix2::new(u, v, -my, mx).expect("unimodular by construction");
    let (x, y) = h.apply(b.dividing.vector());
    if y == 0 {
        return Err(domain_error("dividing slope equals the meridian"));
    }
    let (x, y) = if y < 0 { (-x, -y) } else { (x, y) };
    if y == 1 {
        // Reciprocal is an integer: the nonrotative configuration.
        return Ok(Slope::from_integer(-1));
    }
    // Shift x by multiples of y until the reciprocal x/y lies in (-1, 0).
    let x = x.rem_euclid(y) - y;
    reduce_slope((x, y))
}

/// Number of tight structures: with `[e0, ..., em]` the expansion of the
/// normalized boundary slope, the count is `|(e0+1)...(e_{m-1}+1) * em|`
/// (1 when the normalized slope is `-1`).
pub fn count_tight(b: &SolidTorusBoundary) -> Result<u64> {
    let s = normalize_boundary(b)?;
    if s == Slope::from_integer(-1) {
        return Ok(1);
    }
    let e = cf_expand(s.value().expect("normalized slope is finite"))?;
    let c = e.coefficients();
    let mut product: i64 = c[c.len() - 1];
    for &d in &c[..c.len() - 1] {
        product *= d + 1;
    }
    Ok(product.unsigned_abs())
}

/// Every admissible signed-count tuple over the continued fraction blocks of
/// the normalized boundary slope; the list length equals [`count_tight`].
pub fn enumerate_tight(b: &SolidTorusBoundary) -> Result<Vec<RInvariants>> {
    let s = normalize_boundary(b)?;
    if s == Slope::from_integer(-1) {
        return Ok(vec![RInvariants::new(vec![], vec![])?]);
    }
    let path = monotone_path(&s, &Slope::from_integer(-1))?;
    let blocks = block_decomposition(&path)?;
    Ok(enumerate_sign_tuples(blocks.sizes()))
}

/// All tuples `(r0, ..., rk)` with `|r_i| <= m_i` and `r_i ≡ m_i (mod 2)`.
pub fn enumerate_sign_tuples(block_sizes: &[usize]) -> Vec<RInvariants> {
    let mut tuples: Vec<Vec<i64>> = vec![vec![]];
    for &m in block_sizes {
        let m = m as i64;
        let mut next = Vec::new();
        for t in &tuples {
            let mut r = -m;
            while r <= m {
                let mut t = t.clone();
                t.push(r);
                next.push(t);
                r += 2;
            }
        }
        tuples = next;
    }
    tuples
        .into_iter()
        .map(|values| {
            RInvariants::new(values, block_sizes.to_vec()).expect("admissible by construction")
        })
        .collect()
}

/// The solid torus boundary describing the fiber over a background with
/// twisting number `t` for surgery coefficient `r`: meridian the image of
/// `(1, 0)` under the surgery matrix, dividing slope `1/t` (infinity at
/// `t = 0`).
pub fn boundary_for_twisting(t: i64, r: Rational) -> Result<SolidTorusBoundary> {
    if t > 0 {
        return Err(domain_error("twisting number must be nonpositive"));
    }
    let a = surgery_matrix(r)?;
    let meridian = mobius(&a, &Slope::from_integer(0));
    let dividing = if t == 0 {
        Slope::INFINITY
    } else {
        Slope::from_rational(Rational::new(1, t))
    };
    SolidTorusBoundary::new(meridian, dividing, 1)
}

/// Number of tight structures in the fiber over a background with twisting
/// number `t <= 0`: zero when `t <= -1/r`, otherwise
/// `|(d0 - t)(d1 + 1)...(dn + 1)|` with `[d0, ..., dn]` the expansion of
/// `-1/r`. Always agrees with [`count_tight`] of [`boundary_for_twisting`].
pub fn fiber_count(t: i64, r: Rational) -> Result<u64> {
    if t > 0 {
        return Err(domain_error("twisting number must be nonpositive"));
    }
    if r <= Rational::zero() || r >= Rational::from_integer(1) {
        return Err(domain_error("surgery coefficient must lie in (0, 1)"));
    }
    let neg_inv = -r.recip();
    if Rational::from_integer(t) <= neg_inv {
        return Ok(0);
    }
    let d = cf_expand(neg_inv)?;
    let c = d.coefficients();
    let mut product: i64 = c[0] - t;
    for &di in &c[1..] {
        product *= di + 1;
    }
    Ok(product.unsigned_abs())
}

/// The same fiber count computed through the coordinate change
/// `r' = 1 / (1/r + t + 1)`: the expansion of `-1/r'` is the expansion of
/// `-1/r` with its leading coefficient shifted by `-(t + 1)`, and the count
/// is `|(d0' + 1)...(dn' + 1)|`.
pub fn fiber_count_via_coordinate_change(t: i64, r: Rational) -> Result<u64> {
    if t > 0 {
        return Err(domain_error("twisting number must be nonpositive"));
    }
    let neg_inv = -r.recip();
    if Rational::from_integer(t) <= neg_inv {
        return Ok(0);
    }
    let r_prime = (r.recip() + Rational::from_integer(t + 1)).recip();
    let d = cf_expand(-r_prime.recip())?;
    let product: i64 = d.coefficients().iter().map(|&di| di + 1).product();
    Ok(product.unsigned_abs())
}
