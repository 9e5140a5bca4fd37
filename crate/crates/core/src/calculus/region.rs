use serde::{Deserialize, Serialize};

use super::{compose_at, desusp, signed, PreOperad};
use crate::error::{Error, Result};
use crate::ring::Sign;

/// Which composition relation governs `(h ∘_i f) ∘_j g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    /// `g` lands in an input of `h` left of `f`.
    B,
    /// `g` lands inside `f`.
    A,
    /// `g` lands in an input of `h` right of `f`.
    G,
}

/// Classifies a point of the scope `0 <= i <= |h|`, `0 <= j <= |f| + |h|`.
pub fn classify_region(h_deg: usize, f_deg: usize, i: usize, j: usize) -> Result<Region> {
    let (h, f, i, j) = (h_deg as i64, f_deg as i64, i as i64, j as i64);
    if i > h - 1 || j > f + h - 2 {
        return Err(Error::OutsideScope {
            h_deg: h as usize,
            f_deg: f as usize,
            i: i as usize,
            j: j as usize,
        });
    }
    if i <= j && j <= i + f - 1 {
        Ok(Region::A)
    } else if 1 <= i && j <= i - 1 {
        Ok(Region::B)
    } else if i <= h - 2 && i + f <= j {
        Ok(Region::G)
    } else {
        unreachable!("scope point ({i}, {j}) escaped the B/A/G partition")
    }
}

/// Every `(i, j)` in the scope, `i`-major.
pub fn scope(h_deg: usize, f_deg: usize) -> impl Iterator<Item = (usize, usize)> {
    let j_end = (f_deg + h_deg).saturating_sub(1);
    (0..h_deg).flat_map(move |i| (0..j_end).map(move |j| (i, j)))
}

/// The right-hand side of the composition relation for `(h ∘_i f) ∘_j g`:
///
/// * B: `(-1)^{|f||g|} (h ∘_j g) ∘_{i+|g|} f`
/// * A: `h ∘_i (f ∘_{j-i} g)`
/// * G: `(-1)^{|f||g|} (h ∘_{j-|f|} g) ∘_i f`
pub fn relation_rhs<P: PreOperad>(
    op: &P,
    h: &P::Elem,
    f: &P::Elem,
    g: &P::Elem,
    i: usize,
    j: usize,
) -> Result<P::Elem> {
    let (df, dg) = (desusp(op, f), desusp(op, g));
    let sign = Sign::koszul(df, dg);
    match classify_region(op.degree(h), op.degree(f), i, j)? {
        Region::B => {
            let inner = compose_at(op, h, j, g)?;
            let outer = compose_at(op, &inner, (i as i64 + dg) as usize, f)?;
            Ok(signed(op, outer, sign))
        }
        Region::A => compose_at(op, h, i, &compose_at(op, f, j - i, g)?),
        Region::G => {
            let inner = compose_at(op, h, (j as i64 - df) as usize, g)?;
            Ok(signed(op, compose_at(op, &inner, i, f)?, sign))
        }
    }
}
