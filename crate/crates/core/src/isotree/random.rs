//! Seeded random trees for property tests and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::geometry::SphereLayout;
use crate::scalars::FieldElement;
use crate::spaces::{Point, Space};
use crate::value::NormValue;

use super::{BallMap, IsometryTree, SphereAction};

/// A random tree acting on the given radii (ascending), nested at most
/// `depth` deep. Each radius gets an action with probability one half.
pub fn random_tree<R: Rng + ?Sized>(
    space: &Space,
    radii: &[NormValue],
    depth: u32,
    rng: &mut R,
) -> Result<IsometryTree> {
    let mut tree = IsometryTree::identity(depth);
    if depth == 0 {
        return Ok(tree);
    }
    for (k, r) in radii.iter().enumerate() {
        if SphereLayout::new(space, r).is_none() || !rng.gen_bool(0.5) {
            continue;
        }
        tree.insert(random_sphere_action(space, *r, &radii[..k], depth - 1, rng)?)?;
    }
    Ok(tree)
}

/// A random permutation of the classes of `S(r)`, random outer offsets, and
/// random children over `inner` radii.
pub fn random_sphere_action<R: Rng + ?Sized>(
    space: &Space,
    r: NormValue,
    inner: &[NormValue],
    child_depth: u32,
    rng: &mut R,
) -> Result<SphereAction> {
    let layout = SphereLayout::new(space, &r).ok_or(crate::Error::EmptySphere(r))?;
    let mut sigma: Vec<usize> = (0..layout.class_count()).collect();
    sigma.shuffle(rng);
    let mut maps = Vec::with_capacity(sigma.len());
    for _ in 0..sigma.len() {
        let post = if rng.gen_bool(0.5) { random_small_point(space, &r, rng) } else { space.zero() };
        let child = random_tree(space, inner, child_depth, rng)?;
        maps.push(BallMap { pre: space.zero(), post, child });
    }
    SphereAction::new(space, r, sigma, maps)
}

/// A random point of norm `< r`.
pub(crate) fn random_small_point<R: Rng + ?Sized>(space: &Space, r: &NormValue, rng: &mut R) -> Point {
    let field = space.field();
    let coords = space
        .weights()
        .iter()
        .map(|w| match (field.prime(), field.window()) {
            (None, _) => {
                if w < r {
                    field.random(rng)
                } else {
                    field.zero()
                }
            }
            (Some(p), Some((vmin, vmax))) => {
                let Some(lo) = (vmin..=vmax).find(|v| *w * NormValue::pow(p, -*v) < *r) else {
                    return FieldElement::PadicZero;
                };
                let v = rng.gen_range(lo..=lo + 3);
                if v > vmax || rng.gen_bool(0.2) {
                    FieldElement::PadicZero
                } else {
                    field.random_padic_with_valuation(rng, v)
                }
            }
            _ => unreachable!(),
        })
        .collect();
    Point::new(coords)
}
