//! Balls, spheres and the decomposition of a sphere into open-ball classes.
//!
//! A class of `S(r)` under `x ∼_r y ⇔ ‖y − x‖ < r` is fixed by the digits of
//! its points at the *active* coordinates: those `i` with `r/w_i` in the value
//! group. Over `F_q` the digit is the coordinate itself (active iff `w_i = r`);
//! over `Q_p` it is the base-p digit at position `e_i`, where `r/w_i = p^{-e_i}`.
//! Classes are indexed by reading the active digits in mixed radix, first
//! active coordinate most significant, minus one (the all-zero pattern lies
//! inside the open ball).

pub mod dendrogram;
pub mod domain;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::FieldElement;
use crate::spaces::{Point, Space};
use crate::value::NormValue;

pub use domain::Domain;

/// A ball radius; `Infinite` gives the whole space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Radius {
    Finite(NormValue),
    Infinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: Radius,
    pub closed: bool,
}

impl Ball {
    pub fn open(center: Point, radius: Radius) -> Self {
        Ball { center, radius, closed: false }
    }

    pub fn closed(center: Point, radius: NormValue) -> Self {
        Ball { center, radius: Radius::Finite(radius), closed: true }
    }

    pub fn contains(&self, space: &Space, y: &Point) -> Result<bool> {
        let Radius::Finite(r) = self.radius else { return Ok(true) };
        let d = space.distance(&self.center, y)?;
        Ok(if self.closed { d <= r } else { d < r })
    }
}

/// One class of a sphere, with its canonical (lexicographically least)
/// representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallClass {
    pub radius: NormValue,
    pub index: usize,
    pub representative: Point,
}

/// Which coordinates carry the class digits of `S(r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereLayout {
    radius: NormValue,
    /// `(coordinate, digit position)`; the position is 0 over a finite field.
    active: Vec<(usize, i32)>,
    radix: u64,
    count: usize,
}

impl SphereLayout {
    /// `None` when the sphere is empty.
    pub fn new(space: &Space, r: &NormValue) -> Option<Self> {
        if r.is_zero() {
            return None;
        }
        let active: Vec<(usize, i32)> =
            (0..space.dim()).filter_map(|i| space.coordinate_exponent(r, i).map(|e| (i, e))).collect();
        if active.is_empty() {
            return None;
        }
        let radix = space.field().residue_count();
        let count = (radix as usize).checked_pow(active.len() as u32).expect("class count overflows") - 1;
        Some(SphereLayout { radius: *r, active, radix, count })
    }

    pub fn radius(&self) -> NormValue {
        self.radius
    }

    pub fn class_count(&self) -> usize {
        self.count
    }

    pub fn active(&self) -> &[(usize, i32)] {
        &self.active
    }

    fn digit(&self, space: &Space, x: &FieldElement, pos: i32) -> u64 {
        match x {
            FieldElement::Residue(i) => *i as u64,
            _ => space.field().digit_at(x, pos) as u64,
        }
    }

    /// Class index of a point of the sphere. The norm is not checked here;
    /// a point inside the open ball is rejected.
    pub fn class_of(&self, space: &Space, x: &Point) -> Result<usize> {
        let mut idx = 0u64;
        for &(i, pos) in &self.active {
            idx = idx * self.radix + self.digit(space, &x.coords()[i], pos);
        }
        if idx == 0 {
            return Err(Error::NotOnSphere { radius: self.radius });
        }
        Ok(idx as usize - 1)
    }

    pub fn representative(&self, space: &Space, index: usize) -> Point {
        assert!(index < self.count, "class index out of range");
        let field = space.field();
        let mut coords = vec![field.zero(); space.dim()];
        let mut idx = index as u64 + 1;
        for &(i, pos) in self.active.iter().rev() {
            let d = idx % self.radix;
            idx /= self.radix;
            coords[i] = match field.prime() {
                None => FieldElement::Residue(d as u32),
                Some(_) if d == 0 => FieldElement::PadicZero,
                Some(_) => FieldElement::Padic { val: pos, unit: d },
            };
        }
        Point::new(coords)
    }

    pub fn representatives(&self, space: &Space) -> Vec<Point> {
        (0..self.count).map(|i| self.representative(space, i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereDecomposition {
    pub radius: NormValue,
    pub depth: u32,
    pub classes: Vec<BallClass>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sphere {
    Empty(NormValue),
    Decomposed(SphereDecomposition),
}

/// `x ∼_r y`.
pub fn same_class(space: &Space, x: &Point, y: &Point, r: &NormValue) -> Result<bool> {
    for p in [x, y] {
        if space.norm(p) != *r {
            return Err(Error::NotOnSphere { radius: *r });
        }
    }
    Ok(space.distance(x, y)? < *r)
}

/// The classes of `S(r)`. The class set is exact at every depth; `depth`
/// only records the resolution the caller intends to enumerate at.
pub fn decompose_sphere(space: &Space, r: &NormValue, depth: u32) -> Result<Sphere> {
    if r.is_zero() {
        return Err(Error::NonPositiveRadius);
    }
    let Some(layout) = SphereLayout::new(space, r) else {
        return Ok(Sphere::Empty(*r));
    };
    let classes = (0..layout.class_count())
        .map(|index| BallClass { radius: *r, index, representative: layout.representative(space, index) })
        .collect();
    Ok(Sphere::Decomposed(SphereDecomposition { radius: *r, depth, classes }))
}

/// Canonical representative of the class of `x` in `S(‖x‖)`.
pub fn class_representative(space: &Space, x: &Point) -> Result<BallClass> {
    let r = space.norm(x);
    let layout = SphereLayout::new(space, &r).ok_or(Error::ZeroVector)?;
    let index = layout.class_of(space, x)?;
    Ok(BallClass { radius: r, index, representative: layout.representative(space, index) })
}

/// Whether `B(x, r_open) = B[x, r_closed]`, decided from the value set.
pub fn closed_ball_equals_open(space: &Space, _x: &Point, r_open: &NormValue, r_closed: &NormValue) -> bool {
    if r_closed < r_open {
        space.value_set(r_closed, r_open).iter().all(|v| v == r_closed || v == r_open)
    } else {
        space.value_set(r_open, r_closed).is_empty()
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

    fn q3sq() -> Space {
        space(FieldDescriptor::padic(3, 6, -10, 10), &[1, 1])
    }

    #[test]
    fn same_class_examples() {
        let x = q3sq();
        let a = x.point_from_ints(&[1, 0]).unwrap();
        assert!(same_class(&x, &a, &x.point_from_ints(&[1, 3]).unwrap(), &NormValue::ONE).unwrap());
        assert!(!same_class(&x, &a, &x.point_from_ints(&[0, 1]).unwrap(), &NormValue::ONE).unwrap());
        assert!(same_class(&x, &a, &a, &NormValue::ONE).unwrap());
        assert!(same_class(&x, &a, &x.point_from_ints(&[3, 0]).unwrap(), &NormValue::ONE).is_err());
    }

    #[test]
    fn decompositions() {
        let Sphere::Decomposed(d) = decompose_sphere(&q3sq(), &NormValue::ONE, 3).unwrap() else { panic!() };
        assert_eq!(d.classes.len(), 8);

        let y = space(FieldDescriptor::finite(2), &[1, 2]);
        let Sphere::Decomposed(d) = decompose_sphere(&y, &NormValue::ONE, 1).unwrap() else { panic!() };
        assert_eq!(d.classes.len(), 1);
        assert_eq!(d.classes[0].representative, y.point_from_ints(&[1, 0]).unwrap());
        assert_eq!(decompose_sphere(&y, &NormValue::integer(3), 1).unwrap(), Sphere::Empty(NormValue::integer(3)));

        let z = space(FieldDescriptor::finite(3), &[1]);
        let Sphere::Decomposed(d) = decompose_sphere(&z, &NormValue::ONE, 1).unwrap() else { panic!() };
        let reps: Vec<_> = d.classes.iter().map(|c| c.representative.clone()).collect();
        assert_eq!(reps, vec![z.point_from_ints(&[1]).unwrap(), z.point_from_ints(&[2]).unwrap()]);
    }

    #[test]
    fn representatives_are_class_minima() {
        for (f, w) in [
            (FieldDescriptor::finite(2), vec![1, 2]),
            (FieldDescriptor::finite(3), vec![1, 1]),
            (FieldDescriptor::finite(4), vec![2, 3]),
            (FieldDescriptor::finite(3), vec![1, 3]),
        ] {
            let x = space(f, &w);
            let pts = x.enumerate_points().unwrap();
            for r in x.finite_value_set().unwrap() {
                let layout = SphereLayout::new(&x, &r).unwrap();
                let sphere: Vec<_> = pts.iter().filter(|p| x.norm(p) == r).collect();
                let mut seen = vec![None::<Point>; layout.class_count()];
                for p in &sphere {
                    let i = layout.class_of(&x, p).unwrap();
                    if seen[i].as_ref().is_none_or(|m| *p < m) {
                        seen[i] = Some((*p).clone());
                    }
                }
                for (i, m) in seen.into_iter().enumerate() {
                    assert_eq!(m.unwrap(), layout.representative(&x, i));
                }
                for a in &sphere {
                    for b in &sphere {
                        let same = layout.class_of(&x, a).unwrap() == layout.class_of(&x, b).unwrap();
                        assert_eq!(same, same_class(&x, a, b, &r).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn padic_classes_match_relation() {
        let x = q3sq();
        let layout = SphereLayout::new(&x, &NormValue::ONE).unwrap();
        let pts: Vec<Point> = (-4..=4)
            .flat_map(|a| (-4..=4).map(move |b| (a, b)))
            .map(|(a, b)| x.point_from_ints(&[a, b]).unwrap())
            .filter(|p| x.norm(p) == NormValue::ONE)
            .collect();
        for a in &pts {
            let rep = layout.representative(&x, layout.class_of(&x, a).unwrap());
            assert!(same_class(&x, a, &rep, &NormValue::ONE).unwrap());
            for b in &pts {
                let same = layout.class_of(&x, a).unwrap() == layout.class_of(&x, b).unwrap();
                assert_eq!(same, same_class(&x, a, b, &NormValue::ONE).unwrap());
            }
        }
    }

    #[test]
    fn closed_vs_open_balls() {
        let x = q3sq();
        let o = x.zero();
        assert!(closed_ball_equals_open(&x, &o, &NormValue::ONE, &NormValue::new(1, 3)));
        assert!(!closed_ball_equals_open(&x, &o, &NormValue::ONE, &NormValue::new(1, 9)));
        let y = space(FieldDescriptor::finite(2), &[1, 2]);
        assert!(closed_ball_equals_open(&y, &y.zero(), &NormValue::integer(2), &NormValue::ONE));
    }
}
