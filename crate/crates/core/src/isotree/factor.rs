//! Reading a tree off a verified centred isometry.

use crate::error::{Error, Result};
use crate::geometry::{Domain, SphereLayout};
use crate::par::{self, Exec};
use crate::spaces::{Point, Space};
use crate::value::NormValue;

use super::{verify_isometry, BallMap, IsometryTree, PointMap, SphereAction, Verification};

/// Factors `map` over the levels of `domain`. On each sphere the images of
/// the class representatives give `σ` and the outer offsets; on each class
/// the child is `z ↦ f(rep + z) − f(rep)`, factored recursively on the open
/// ball. Identity actions are omitted, so the result is canonical.
///
/// With `depth` below the number of levels, any non-identity action that
/// would need more nesting is reported as [`Error::DepthExhausted`].
pub fn factor_isometry(
    space: &Space,
    map: &dyn PointMap,
    domain: &Domain,
    depth: u32,
    exec: Exec,
) -> Result<IsometryTree> {
    let f0 = domain.reduce(space, &map.eval(&space.zero())?)?;
    if !space.is_zero(&f0) {
        return Err(Error::NotCentred);
    }
    if let Verification::Fail(w) = verify_isometry(space, map, domain, exec) {
        return Err(Error::NotIsometric(Box::new(w)));
    }
    let g = |x: &Point| -> Result<Point> { domain.reduce(space, &map.eval(x)?) };
    factor_ball(space, domain, domain.levels(), &g, depth, depth, exec)
}

fn factor_ball(
    space: &Space,
    domain: &Domain,
    radii: &[NormValue],
    g: &(dyn Fn(&Point) -> Result<Point> + Sync),
    depth: u32,
    declared: u32,
    exec: Exec,
) -> Result<IsometryTree> {
    let mut tree = IsometryTree::identity(depth);
    for (k, r) in radii.iter().enumerate() {
        let Some(layout) = SphereLayout::new(space, r) else { continue };
        let reps = layout.representatives(space);
        let inner = &radii[..k];
        let parts = par::map_slice(exec, &reps, |rep| -> Result<(usize, BallMap)> {
            let y = g(rep)?;
            let j = layout.class_of(space, &y)?;
            let post = space.sub(&y, &layout.representative(space, j))?;
            let child_map = |z: &Point| -> Result<Point> {
                let w = g(&space.add(rep, z)?)?;
                domain.reduce(space, &space.sub(&w, &y)?)
            };
            let child =
                factor_ball(space, domain, inner, &child_map, depth.saturating_sub(1), declared, Exec::Sequential)?;
            Ok((j, BallMap { pre: space.zero(), post, child }))
        });
        let mut sigma = Vec::with_capacity(reps.len());
        let mut maps = Vec::with_capacity(reps.len());
        for p in parts {
            let (j, m) = p?;
            sigma.push(j);
            maps.push(m);
        }
        let action = SphereAction::new(space, *r, sigma, maps)?;
        if action.is_identity(space) {
            continue;
        }
        if depth == 0 {
            return Err(Error::DepthExhausted(declared));
        }
        tree.insert(action)?;
    }
    Ok(tree)
}
