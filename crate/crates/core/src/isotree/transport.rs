//! Moving sphere actions between spheres by dilation: `x ↦ α·f(x/α)`.

use crate::error::{Error, Result};
use crate::geometry::SphereLayout;
use crate::scalars::FieldElement;
use crate::spaces::Space;

use super::{BallMap, IsometryTree, SphereAction};

/// The action `x ↦ α·f(x/α)` on `S(|α|·r)`, computed structurally: class `i`
/// goes to the class `i'` of `α·rep_i`, the mismatch `α·rep_i − rep_{i'}`
/// enters the offsets, and children are transported recursively.
pub fn dilation_transport(space: &Space, action: &SphereAction, alpha: &FieldElement) -> Result<SphereAction> {
    let field = space.field();
    if field.is_zero(alpha) {
        return Err(Error::ZeroScalar);
    }
    let r2 = action.radius() * field.abs_value(alpha);
    let layout = SphereLayout::new(space, &r2).ok_or(Error::NotInValueSet(r2))?;
    let k = action.class_count();
    let mut target = Vec::with_capacity(k);
    let mut shift = Vec::with_capacity(k);
    for rep in action.representatives() {
        let scaled = space.scalar_mul(alpha, rep)?;
        let i2 = layout.class_of(space, &scaled)?;
        shift.push(space.sub(&scaled, &layout.representative(space, i2))?);
        target.push(i2);
    }
    let mut sigma = vec![0; k];
    let mut maps = vec![BallMap::identity(space); k];
    for (i, m) in action.maps().iter().enumerate() {
        let j = action.sigma()[i];
        let pre = space.add(&shift[i], &space.scalar_mul(alpha, &m.pre)?)?;
        let post = space.add(&shift[j], &space.scalar_mul(alpha, &m.post)?)?;
        sigma[target[i]] = target[j];
        maps[target[i]] = BallMap { pre, post, child: dilation_transport_tree(space, &m.child, alpha)? };
    }
    SphereAction::new(space, r2, sigma, maps)
}

/// [`dilation_transport`] on every sphere of a tree. Leaves commute with
/// scalars and are kept.
pub fn dilation_transport_tree(space: &Space, tree: &IsometryTree, alpha: &FieldElement) -> Result<IsometryTree> {
    let mut out = IsometryTree::from_leaf(tree.depth, tree.leaf.clone());
    for a in tree.spheres() {
        out.insert(dilation_transport(space, a, alpha)?)?;
    }
    Ok(out)
}
