//! Exhaustive isometry checks over a [`Domain`].
//!
//! Small domains are checked pair by pair. Larger ones use the ball
//! partitions instead: for every attainable level `t` (and `t = 0`), the map
//! must send `t`-balls into `t`-balls and distinct `t`-balls to distinct ones.
//! Since all distances lie in the level set, this is equivalent to the
//! pairwise check, at linear cost per level.

use std::fmt;

use crate::geometry::Domain;
use crate::par::{self, Exec};
use crate::spaces::{Point, Space};
use crate::value::NormValue;

use super::PointMap;

/// Domains up to this size are verified pair by pair.
pub const PAIRWISE_LIMIT: u64 = 2048;

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `‖f(y) − f(x)‖ ≠ ‖y − x‖`.
    Distance { x: Point, y: Point, before: NormValue, after: NormValue },
    /// The image leaves the codomain domain.
    Escapes { x: Point, image: Point },
    /// The map could not be evaluated at `x`.
    Evaluation { x: Point, error: String },
    /// A codomain point with no preimage.
    NotOnto { missing: Point },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Distance { x, y, before, after } => {
                write!(f, "distance between {:?} and {:?} changes from {before} to {after}", x.coords(), y.coords())
            }
            Witness::Escapes { x, image } => {
                write!(f, "{:?} is sent outside the domain, to {:?}", x.coords(), image.coords())
            }
            Witness::Evaluation { x, error } => write!(f, "evaluation at {:?} failed: {error}", x.coords()),
            Witness::NotOnto { missing } => write!(f, "{:?} has no preimage", missing.coords()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verification {
    Pass { points: u64 },
    Fail(Witness),
}

impl Verification {
    pub fn passed(&self) -> bool {
        matches!(self, Verification::Pass { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verification::Fail(w) => Some(w),
            _ => None,
        }
    }
}

/// Checks that `map` is a bijective isometry of `domain`.
pub fn verify_isometry(space: &Space, map: &dyn PointMap, domain: &Domain, exec: Exec) -> Verification {
    verify_between(space, domain, space, domain, map, exec)
}

/// Checks that `map` is a bijective isometry from one domain onto another.
pub fn verify_between(
    sx: &Space,
    dx: &Domain,
    sy: &Space,
    dy: &Domain,
    map: &dyn PointMap,
    exec: Exec,
) -> Verification {
    let n = dx.size() as usize;
    let images = par::map_range(exec, n, |i| {
        let x = dx.point(sx, i as u64);
        match map.eval(&x) {
            Err(e) => Err(Witness::Evaluation { x, error: e.to_string() }),
            Ok(y) => dy.index_of(sy, &y).map_err(|_| Witness::Escapes { x, image: y }),
        }
    });
    let mut idx = Vec::with_capacity(n);
    for r in images {
        match r {
            Ok(j) => idx.push(j),
            Err(w) => return Verification::Fail(w),
        }
    }

    let pair = if dx.size() <= PAIRWISE_LIMIT {
        pairwise(sx, dx, sy, dy, &idx, exec)
    } else {
        partitions(sx, dx, sy, dy, &idx, exec)
    };
    if let Some((i, j)) = pair {
        let (x, y) = (dx.point(sx, i as u64), dx.point(sx, j as u64));
        let (fx, fy) = (dy.point(sy, idx[i]), dy.point(sy, idx[j]));
        let before = dx.distance(sx, &x, &y).unwrap_or(NormValue::ZERO);
        let after = dy.distance(sy, &fx, &fy).unwrap_or(NormValue::ZERO);
        return Verification::Fail(Witness::Distance { x, y, before, after });
    }

    if dy.size() > dx.size() {
        let mut hit = vec![false; dy.size() as usize];
        for j in &idx {
            hit[*j as usize] = true;
        }
        let missing = hit.iter().position(|h| !h).unwrap();
        return Verification::Fail(Witness::NotOnto { missing: dy.point(sy, missing as u64) });
    }
    Verification::Pass { points: dx.size() }
}

fn pairwise(sx: &Space, dx: &Domain, sy: &Space, dy: &Domain, idx: &[u64], exec: Exec) -> Option<(usize, usize)> {
    let n = idx.len();
    let xs: Vec<Point> = (0..n).map(|i| dx.point(sx, i as u64)).collect();
    let ys: Vec<Point> = idx.iter().map(|j| dy.point(sy, *j)).collect();
    par::find_map_first(exec, n, |i| {
        (i + 1..n).find_map(|j| {
            let before = dx.distance(sx, &xs[i], &xs[j]).ok()?;
            let after = dy.distance(sy, &ys[i], &ys[j]).ok()?;
            (before != after).then_some((i, j))
        })
    })
}

fn partitions(sx: &Space, dx: &Domain, sy: &Space, dy: &Domain, idx: &[u64], exec: Exec) -> Option<(usize, usize)> {
    let mut levels: Vec<NormValue> = dx.levels().iter().chain(dy.levels()).copied().collect();
    levels.push(NormValue::ZERO);
    levels.sort();
    levels.dedup();
    let found = par::map_slice(exec, &levels, |t| {
        let kx = dx.level_key(sx, t);
        let ky = dy.level_key(sy, t);
        let mut forward: Vec<Option<(u64, usize)>> = vec![None; kx.range() as usize];
        let mut backward: Vec<Option<(u64, usize)>> = vec![None; ky.range() as usize];
        for (i, j) in idx.iter().enumerate() {
            let a = kx.key(i as u64);
            let b = ky.key(*j);
            match forward[a as usize] {
                Some((b0, i0)) if b0 != b => return Some((i0, i)),
                Some(_) => {}
                None => forward[a as usize] = Some((b, i)),
            }
            match backward[b as usize] {
                Some((a0, i0)) if a0 != a => return Some((i0, i)),
                Some(_) => {}
                None => backward[b as usize] = Some((a, i)),
            }
        }
        None
    });
    found.into_iter().flatten().next()
}
