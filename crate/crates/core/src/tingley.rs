//! Extending an isometry between spheres to the whole space, and the ways
//! this fails over trivially valued fields.
//!
//! With `x₀ ∈ S(r)` and `|α| = a > 1` the extension `τ̃` is
//!
//! ```text
//! τ̃(x) = τ(x + x₀) − τ(x₀)     ‖x‖ < r
//! τ̃(x) = τ(x)                  ‖x‖ = r
//! τ̃(x) = αⁿ τ̃(x / αⁿ)          r·aⁿ⁻¹ < ‖x‖ ≤ r·aⁿ
//! ```

use crate::error::{Error, Result};
use crate::geometry::dendrogram::Dendrogram;
use crate::geometry::{Domain, SphereLayout};
use crate::isotree::{verify_between, IsometryTree, PointMap, TableMap, Verification};
use crate::par::Exec;
use crate::scalars::FieldElement;
use crate::spaces::{Point, Space};
use crate::value::NormValue;

/// Spheres above this size are not compared point by point.
const SPHERE_COMPARE_LIMIT: usize = 4096;

/// The sphere isometry `τ`, as a table of pairs or as a tree whose action
/// on the sphere is `τ`.
#[derive(Debug, Clone, PartialEq)]
pub enum SphereMap {
    /// Over `Q_p` the pairs are taken modulo `B(0, r·p^{-resolution})`.
    Table {
        pairs: TableMap,
        resolution: u32,
    },
    Tree(IsometryTree),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereIsometrySpec {
    pub x: Space,
    pub y: Space,
    pub r: NormValue,
    pub r2: NormValue,
    pub tau: SphereMap,
}

impl SphereIsometrySpec {
    /// `τ` at a point of `S_X(r)`.
    pub fn tau(&self, x: &Point) -> Result<Point> {
        match &self.tau {
            SphereMap::Tree(t) => t.apply(&self.x, x),
            SphereMap::Table { pairs, resolution } => match self.x.field().prime() {
                None => pairs.eval(x),
                Some(p) => {
                    let d = Domain::window(&self.x, &self.r, &(self.r * NormValue::pow(p, -(*resolution as i32))))?;
                    pairs.eval(&d.reduce(&self.x, x)?)
                }
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Obstruction {
    /// No scalar of absolute value above 1 exists, so the outward step
    /// cannot be taken.
    TrivialValuationSingleton,
    RadiusMismatch {
        r: NormValue,
        r2: NormValue,
        spheres_isometric: bool,
    },
    ValueSetMismatch {
        x: Vec<NormValue>,
        y: Vec<NormValue>,
    },
}

/// The extended map on `B[0, r·aᵐ]`.
#[derive(Debug, Clone)]
pub struct Extension {
    pub spec: SphereIsometrySpec,
    pub x0: Point,
    pub alpha: FieldElement,
    pub m: u32,
    tau_x0: Point,
    scale: NormValue,
}

#[derive(Debug, Clone)]
pub enum ExtensionResult {
    /// The map and the number of domain points it was verified on.
    Extended {
        map: Extension,
        verified_points: u64,
    },
    Obstructed(Obstruction),
}

impl Extension {
    /// `τ̃` on `B[0, r]`.
    fn inner(&self, x: &Point) -> Result<Point> {
        let (sx, sy) = (&self.spec.x, &self.spec.y);
        if sx.is_zero(x) {
            return Ok(sy.zero());
        }
        let n = sx.norm(x);
        if n == self.spec.r {
            return self.spec.tau(x);
        }
        if n > self.spec.r {
            return Err(Error::OutsideDomain);
        }
        sy.sub(&self.spec.tau(&sx.add(x, &self.x0)?)?, &self.tau_x0).map_err(Into::into)
    }

    /// The shell index `n` of `x`: 0 inside `B[0, r]`, otherwise the `n`
    /// with `r·aⁿ⁻¹ < ‖x‖ ≤ r·aⁿ`.
    pub fn shell(&self, x: &Point) -> u32 {
        let norm = self.spec.x.norm(x);
        let mut bound = self.spec.r;
        let mut n = 0;
        while norm > bound {
            bound = bound * self.scale;
            n += 1;
        }
        n
    }

    /// `αⁿ τ̃(x / αⁿ)` for an explicit `n`.
    pub fn dilated(&self, x: &Point, n: u32) -> Result<Point> {
        let field = self.spec.x.field();
        let mut an = field.one();
        for _ in 0..n {
            an = field.mul(&an, &self.alpha)?;
        }
        let inside = self.spec.x.scalar_mul(&field.inv(&an)?, x)?;
        Ok(self.spec.y.scalar_mul(&an, &self.inner(&inside)?)?)
    }
}

impl PointMap for Extension {
    fn eval(&self, x: &Point) -> Result<Point> {
        match self.shell(x) {
            0 => self.inner(x),
            n if n > self.m => Err(Error::OutsideDomain),
            n => self.dilated(x, n),
        }
    }
}

fn sphere_points(space: &Space, r: &NormValue) -> Option<Vec<Point>> {
    let pts = space.enumerate_points()?;
    Some(pts.into_iter().filter(|p| space.norm(p) == *r).collect())
}

fn sphere_signature(space: &Space, r: &NormValue) -> Option<String> {
    let pts = sphere_points(space, r)?;
    if pts.len() > SPHERE_COMPARE_LIMIT {
        return None;
    }
    let t = Dendrogram::build(pts.len(), |i, j| space.distance(&pts[i], &pts[j]).expect("same space"));
    Some(t.signature().to_string())
}

/// Why `τ: S_X(r) → S_Y(r′)` cannot extend, if that can be decided from
/// value sets and radii alone. Over `Q_p` only `r ≠ r′` is an obstruction:
/// an isometry between such spheres never exists there.
pub fn extension_obstruction(x: &Space, y: &Space, r: &NormValue, r2: &NormValue) -> Result<Option<Obstruction>> {
    if x.field().descriptor() != y.field().descriptor() {
        return Err(Error::SpaceMismatch);
    }
    for (s, rad) in [(x, r), (y, r2)] {
        if SphereLayout::new(s, rad).is_none() {
            return Err(Error::EmptySphere(*rad));
        }
    }
    if x.field().prime().is_some() {
        return Ok((r != r2).then_some(Obstruction::RadiusMismatch { r: *r, r2: *r2, spheres_isometric: false }));
    }
    if r != r2 {
        let spheres_isometric = match (sphere_signature(x, r), sphere_signature(y, r2)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        };
        return Ok(Some(Obstruction::RadiusMismatch { r: *r, r2: *r2, spheres_isometric }));
    }
    let (vx, vy) = (x.finite_value_set().unwrap(), y.finite_value_set().unwrap());
    if vx != vy {
        return Ok(Some(Obstruction::ValueSetMismatch { x: vx, y: vy }));
    }
    Ok(None)
}

/// The verification domain of an extension: norms in `[r·a^{-depth}, r·aᵐ]`.
pub fn extension_domain(space: &Space, r: &NormValue, m: u32, depth: u32) -> Result<Domain> {
    let p = space.field().prime().ok_or(Error::NotPadic)?;
    let top = *r * NormValue::pow(p, m as i32);
    Domain::window(space, &top, &(*r * NormValue::pow(p, -(depth as i32))))
}

/// Extends `τ` to `B[0, r·aᵐ]` and verifies the result on
/// [`extension_domain`]. `x0` defaults to the first class representative of
/// `S_X(r)` and `alpha` to `1/p`.
pub fn extend_sphere_isometry(
    spec: SphereIsometrySpec,
    x0: Option<Point>,
    alpha: Option<FieldElement>,
    m: u32,
    depth: u32,
    exec: Exec,
) -> Result<ExtensionResult> {
    if let Some(o) = extension_obstruction(&spec.x, &spec.y, &spec.r, &spec.r2)? {
        return Ok(ExtensionResult::Obstructed(o));
    }
    let field = spec.x.field();
    let Some(p) = field.prime() else {
        return Ok(ExtensionResult::Obstructed(Obstruction::TrivialValuationSingleton));
    };
    if spec.x.dim() != spec.y.dim() {
        return Err(Error::SpaceMismatch);
    }
    if let SphereMap::Table { resolution, .. } = &spec.tau {
        if *resolution < depth + m {
            return Err(Error::TableTooCoarse { needed: depth + m, have: *resolution });
        }
    }
    if let SphereMap::Tree(_) = &spec.tau {
        if spec.x != spec.y {
            return Err(Error::SpaceMismatch);
        }
    }
    let layout = SphereLayout::new(&spec.x, &spec.r).ok_or(Error::EmptySphere(spec.r))?;
    let x0 = x0.unwrap_or_else(|| layout.representative(&spec.x, 0));
    if spec.x.norm(&x0) != spec.r {
        return Err(Error::NotOnSphere { radius: spec.r });
    }
    let alpha = match alpha {
        Some(a) => a,
        None => field.from_rational(1, p as i64)?,
    };
    let scale = field.abs_value(&alpha);
    if scale <= NormValue::ONE {
        return Err(Error::DilationTooSmall);
    }
    let tau_x0 = spec.tau(&x0)?;
    let dx = extension_domain(&spec.x, &spec.r, m, depth)?;
    let dy = extension_domain(&spec.y, &spec.r2, m, depth)?;
    let map = Extension { spec, x0, alpha, m, tau_x0, scale };
    match verify_between(&map.spec.x, &dx, &map.spec.y, &dy, &map, exec) {
        Verification::Pass { points } => Ok(ExtensionResult::Extended { map, verified_points: points }),
        Verification::Fail(w) => Err(Error::NotIsometric(Box::new(w))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldDescriptor;
    use crate::spaces::SpaceDescriptor;

    fn space(field: FieldDescriptor, w: &[i128]) -> Space {
        Space::new(SpaceDescriptor::with_int_weights(field, w)).unwrap()
    }

    fn q3(dim: usize) -> Space {
        space(FieldDescriptor::padic(3, 8, -16, 16), &vec![1; dim])
    }

    fn f2(w: &[i128]) -> Space {
        space(FieldDescriptor::finite(2), w)
    }

    fn tree_spec(x: &Space, tree: IsometryTree) -> SphereIsometrySpec {
        SphereIsometrySpec {
            x: x.clone(),
            y: x.clone(),
            r: NormValue::ONE,
            r2: NormValue::ONE,
            tau: SphereMap::Tree(tree),
        }
    }

    #[test]
    fn identity_extends_to_identity() {
        let x = q3(1);
        let res = extend_sphere_isometry(tree_spec(&x, IsometryTree::identity(1)), None, None, 2, 3, Exec::default())
            .unwrap();
        let ExtensionResult::Extended { map, verified_points } = res else { panic!() };
        assert_eq!(verified_points, 3u64.pow(6));
        for k in [1, 2, 3, 5, 9, 18, 27, 81] {
            let p = x.point_from_ints(&[k]).unwrap();
            if map.shell(&p) <= 2 {
                assert_eq!(map.eval(&p).unwrap(), p);
            }
        }
    }

    #[test]
    fn class_swap_extends_and_restricts() {
        let x = q3(2);
        let mut t = IsometryTree::identity(1);
        let mut sigma: Vec<usize> = (0..8).collect();
        sigma.swap(0, 2);
        t.insert(
            crate::isotree::build_sphere_action(&x, NormValue::ONE, sigma, vec![IsometryTree::identity(0); 8]).unwrap(),
        )
        .unwrap();
        let spec = tree_spec(&x, t.clone());
        let ExtensionResult::Extended { map, .. } =
            extend_sphere_isometry(spec, None, None, 2, 3, Exec::default()).unwrap()
        else {
            panic!()
        };
        let d = extension_domain(&x, &NormValue::ONE, 2, 3).unwrap();
        for i in (0..d.size()).step_by(101) {
            let p = d.point(&x, i);
            match map.shell(&p) {
                0 if x.norm(&p) == NormValue::ONE => assert_eq!(map.eval(&p).unwrap(), t.apply(&x, &p).unwrap()),
                1 => {
                    let three = x.field().from_integer(3).unwrap();
                    let third = x.field().from_rational(1, 3).unwrap();
                    let expect = x.scalar_mul(&third, &map.eval(&x.scalar_mul(&three, &p).unwrap()).unwrap()).unwrap();
                    assert_eq!(map.eval(&p).unwrap(), expect);
                }
                _ => {}
            }
        }
        let (a, b) = (x.point_from_ints(&[1, 0]).unwrap(), x.point_from_ints(&[0, 1]).unwrap());
        assert_eq!(map.eval(&a).unwrap(), b);
    }

    #[test]
    fn table_backed_maps() {
        let x = q3(1);
        let d = Domain::window(&x, &NormValue::ONE, &NormValue::new(1, 3u128.pow(5) as i128)).unwrap();
        let neg: Vec<(Point, Point)> = (0..d.size())
            .map(|i| d.point(&x, i))
            .filter(|p| x.norm(p) == NormValue::ONE)
            .map(|p| {
                let q = d.reduce(&x, &x.neg(&p).unwrap()).unwrap();
                (p, q)
            })
            .collect();
        let spec = SphereIsometrySpec {
            x: x.clone(),
            y: x.clone(),
            r: NormValue::ONE,
            r2: NormValue::ONE,
            tau: SphereMap::Table { pairs: TableMap::new(neg.clone()), resolution: 5 },
        };
        let res = extend_sphere_isometry(spec.clone(), None, None, 2, 3, Exec::default()).unwrap();
        assert!(matches!(res, ExtensionResult::Extended { .. }));
        let coarse = SphereIsometrySpec { tau: SphereMap::Table { pairs: TableMap::new(neg), resolution: 4 }, ..spec };
        assert_eq!(
            extend_sphere_isometry(coarse, None, None, 2, 3, Exec::default()).err(),
            Some(Error::TableTooCoarse { needed: 5, have: 4 })
        );
    }

    #[test]
    fn bad_inputs() {
        let x = q3(1);
        let spec = tree_spec(&x, IsometryTree::identity(1));
        let one = x.field().one();
        assert_eq!(
            extend_sphere_isometry(spec.clone(), None, Some(one), 2, 3, Exec::default()).err(),
            Some(Error::DilationTooSmall)
        );
        let off = x.point_from_ints(&[3]).unwrap();
        assert!(matches!(
            extend_sphere_isometry(spec, Some(off), None, 2, 3, Exec::default()),
            Err(Error::NotOnSphere { .. })
        ));

        let d = Domain::window(&x, &NormValue::ONE, &NormValue::new(1, 243)).unwrap();
        let one_pt = x.point_from_ints(&[1]).unwrap();
        let collapse: Vec<(Point, Point)> = (0..d.size())
            .map(|i| d.point(&x, i))
            .filter(|p| x.norm(p) == NormValue::ONE)
            .map(|p| (p, one_pt.clone()))
            .collect();
        let spec = SphereIsometrySpec {
            x: x.clone(),
            y: x.clone(),
            r: NormValue::ONE,
            r2: NormValue::ONE,
            tau: SphereMap::Table { pairs: TableMap::new(collapse), resolution: 5 },
        };
        assert!(matches!(extend_sphere_isometry(spec, None, None, 2, 3, Exec::default()), Err(Error::NotIsometric(_))));
    }

    #[test]
    fn weighted_f2_counterexamples() {
        let one = NormValue::ONE;
        let two = NormValue::integer(2);
        assert_eq!(
            extension_obstruction(&f2(&[1, 2]), &f2(&[1, 3]), &one, &one).unwrap(),
            Some(Obstruction::ValueSetMismatch { x: vec![one, two], y: vec![one, NormValue::integer(3)] })
        );
        assert_eq!(
            extension_obstruction(&f2(&[1, 2]), &f2(&[2, 3]), &one, &two).unwrap(),
            Some(Obstruction::RadiusMismatch { r: one, r2: two, spheres_isometric: true })
        );
        assert_eq!(extension_obstruction(&q3(2), &q3(2), &one, &one).unwrap(), None);
        assert_eq!(
            extension_obstruction(&f2(&[1, 2]), &f2(&[1, 2]), &NormValue::integer(3), &one),
            Err(Error::EmptySphere(NormValue::integer(3)))
        );

        let x = f2(&[1, 2]);
        let y = f2(&[1, 3]);
        let p = x.point_from_ints(&[1, 0]).unwrap();
        let spec = SphereIsometrySpec {
            x,
            y,
            r: one,
            r2: one,
            tau: SphereMap::Table { pairs: TableMap::new([(p.clone(), p)]), resolution: 0 },
        };
        let res = extend_sphere_isometry(spec, None, None, 2, 3, Exec::default()).unwrap();
        assert!(matches!(res, ExtensionResult::Obstructed(Obstruction::ValueSetMismatch { .. })));

        let x = f2(&[1, 2]);
        let spec =
            SphereIsometrySpec { x: x.clone(), y: x, r: one, r2: one, tau: SphereMap::Tree(IsometryTree::identity(0)) };
        let res = extend_sphere_isometry(spec, None, None, 2, 3, Exec::default()).unwrap();
        assert!(matches!(res, ExtensionResult::Obstructed(Obstruction::TrivialValuationSingleton)));
    }
}
