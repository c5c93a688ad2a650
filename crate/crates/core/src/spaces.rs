//! Finite-dimensional ultrametric normed spaces `K^n` with weighted max
//! norms `‖x‖ = max_i w_i·|x_i|`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::scalars::{ArithError, DescriptorError, Field, FieldDescriptor, FieldElement};
use crate::value::NormValue;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error(transparent)]
    Field(#[from] DescriptorError),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("weight {index} must be strictly positive")]
    NonPositiveWeight { index: usize },
    #[error("point has {got} coordinates, space has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Field, dimension and weights. JSON form:
/// `{"field":{"kind":"finite","q":2},"dim":2,"weights":["1","2"]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub field: FieldDescriptor,
    pub dim: usize,
    pub weights: Vec<NormValue>,
}

impl SpaceDescriptor {
    pub fn new(field: FieldDescriptor, weights: Vec<NormValue>) -> Self {
        SpaceDescriptor { field, dim: weights.len(), weights }
    }

    /// Convenience for integer weights.
    pub fn with_int_weights(field: FieldDescriptor, weights: &[i128]) -> Self {
        Self::new(field, weights.iter().map(|w| NormValue::integer(*w)).collect())
    }
}

/// A point of `K^n`: canonical coordinates, compared lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(Vec<FieldElement>);

impl Point {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<FieldElement> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Clone)]
pub struct Space {
    desc: SpaceDescriptor,
    field: Field,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc
    }
}

impl Space {
    pub fn new(desc: SpaceDescriptor) -> Result<Self, SpaceError> {
        let field = Field::new(desc.field)?;
        if desc.dim == 0 {
            return Err(SpaceError::ZeroDimension);
        }
        if desc.weights.len() != desc.dim {
            return Err(SpaceError::WeightCount { expected: desc.dim, got: desc.weights.len() });
        }
        if let Some(index) = desc.weights.iter().position(|w| w.is_zero()) {
            return Err(SpaceError::NonPositiveWeight { index });
        }
        Ok(Space { desc, field })
    }

    pub fn descriptor(&self) -> &SpaceDescriptor {
        &self.desc
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.desc.dim
    }

    pub fn weights(&self) -> &[NormValue] {
        &self.desc.weights
    }

    pub fn zero(&self) -> Point {
        Point(vec![self.field.zero(); self.dim()])
    }

    pub fn is_zero(&self, x: &Point) -> bool {
        x.0.iter().all(|c| self.field.is_zero(c))
    }

    /// Validates a coordinate vector and wraps it.
    pub fn point(&self, coords: Vec<FieldElement>) -> Result<Point, SpaceError> {
        if coords.len() != self.dim() {
            return Err(SpaceError::DimensionMismatch { expected: self.dim(), got: coords.len() });
        }
        for c in &coords {
            self.field.check(c)?;
        }
        Ok(Point(coords))
    }

    pub fn point_from_ints(&self, coords: &[i64]) -> Result<Point, SpaceError> {
        let coords = coords.iter().map(|k| self.field.from_integer(*k)).collect::<Result<Vec<_>, _>>()?;
        self.point(coords)
    }

    /// Unit vector `e_i`.
    pub fn basis(&self, i: usize) -> Point {
        let mut c = vec![self.field.zero(); self.dim()];
        c[i] = self.field.one();
        Point(c)
    }

    pub fn norm(&self, x: &Point) -> NormValue {
        x.0.iter()
            .zip(&self.desc.weights)
            .filter(|(c, _)| !self.field.is_zero(c))
            .map(|(c, w)| *w * self.field.abs_value(c))
            .max()
            .unwrap_or(NormValue::ZERO)
    }

    pub fn add(&self, x: &Point, y: &Point) -> Result<Point, ArithError> {
        x.0.iter().zip(&y.0).map(|(a, b)| self.field.add(a, b)).collect::<Result<_, _>>().map(Point)
    }

    pub fn sub(&self, x: &Point, y: &Point) -> Result<Point, ArithError> {
        x.0.iter().zip(&y.0).map(|(a, b)| self.field.sub(a, b)).collect::<Result<_, _>>().map(Point)
    }

    pub fn neg(&self, x: &Point) -> Result<Point, ArithError> {
        x.0.iter().map(|a| self.field.neg(a)).collect::<Result<_, _>>().map(Point)
    }

    pub fn scalar_mul(&self, lambda: &FieldElement, x: &Point) -> Result<Point, ArithError> {
        x.0.iter().map(|a| self.field.mul(lambda, a)).collect::<Result<_, _>>().map(Point)
    }

    /// `‖y − x‖`.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<NormValue, ArithError> {
        Ok(self.norm(&self.sub(y, x)?))
    }

    /// If `r/w_i` is an attainable absolute value, its exponent `e` with
    /// `r/w_i = p^{-e}` (always 0 over a finite field).
    pub fn coordinate_exponent(&self, r: &NormValue, i: usize) -> Option<i32> {
        let ratio = r.checked_div(&self.desc.weights[i])?;
        match self.field.prime() {
            Some(p) => {
                let e = -ratio.log_exact(p)?;
                let (lo, hi) = self.field.window().unwrap();
                (lo..=hi).contains(&e).then_some(e)
            }
            None => ratio.is_one().then_some(0),
        }
    }

    /// Whether the sphere of radius `r` is nonempty.
    pub fn is_attainable(&self, r: &NormValue) -> bool {
        (0..self.dim()).any(|i| self.coordinate_exponent(r, i).is_some())
    }

    /// All attainable positive norm values in `[lo, hi]`, sorted. For p-adic
    /// fields only valuations inside the window are considered.
    pub fn value_set(&self, lo: &NormValue, hi: &NormValue) -> Vec<NormValue> {
        let mut out: Vec<NormValue> = match (self.field.prime(), self.field.window()) {
            (Some(p), Some((vmin, vmax))) => self
                .desc
                .weights
                .iter()
                .flat_map(|w| (vmin..=vmax).map(move |v| *w * NormValue::pow(p, -v)))
                .filter(|v| v >= lo && v <= hi)
                .collect(),
            _ => self.desc.weights.iter().copied().filter(|v| v >= lo && v <= hi).collect(),
        };
        out.sort();
        out.dedup();
        out
    }

    /// The complete value set of a space over a finite field.
    pub fn finite_value_set(&self) -> Option<Vec<NormValue>> {
        self.field.order()?;
        let mut w = self.desc.weights.clone();
        w.sort();
        w.dedup();
        Some(w)
    }

    /// All points of a space over a finite field, in canonical order.
    pub fn enumerate_points(&self) -> Option<Vec<Point>> {
        let elems = self.field.elements()?;
        let q = elems.len();
        let n = self.dim();
        let total = q.checked_pow(n as u32)?;
        Some(
            (0..total)
                .map(|mut idx| {
                    let mut c = vec![elems[0]; n];
                    for slot in c.iter_mut().rev() {
                        *slot = elems[idx % q];
                        idx /= q;
                    }
                    Point(c)
                })
                .collect(),
        )
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        Point((0..self.dim()).map(|_| self.field.random(rng)).collect())
    }

    /// A point with every coordinate drawn from the scalar sampler.
    pub fn random_point_with<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        mut sample: impl FnMut(&mut R, usize) -> FieldElement,
    ) -> Point {
        Point((0..self.dim()).map(|i| sample(rng, i)).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.field.order().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3sq() -> Space {
        Space::new(SpaceDescriptor::with_int_weights(FieldDescriptor::padic(3, 4, -6, 6), &[1, 1])).unwrap()
    }

    fn f2sq(w: &[i128]) -> Space {
        Space::new(SpaceDescriptor::with_int_weights(FieldDescriptor::finite(2), w)).unwrap()
    }

    #[test]
    fn descriptor_validation() {
        let f = FieldDescriptor::finite(2);
        assert_eq!(Space::new(SpaceDescriptor::new(f, vec![])).unwrap_err(), SpaceError::ZeroDimension);
        let mut d = SpaceDescriptor::with_int_weights(f, &[1, 2]);
        d.dim = 3;
        assert!(matches!(Space::new(d).unwrap_err(), SpaceError::WeightCount { .. }));
        let d = SpaceDescriptor::new(f, vec![NormValue::ONE, NormValue::ZERO]);
        assert_eq!(Space::new(d).unwrap_err(), SpaceError::NonPositiveWeight { index: 1 });
    }

    #[test]
    fn json_shape() {
        let d: SpaceDescriptor =
            serde_json::from_str(r#"{"field":{"kind":"finite","q":2},"dim":2,"weights":["1","2"]}"#).unwrap();
        assert_eq!(d, SpaceDescriptor::with_int_weights(FieldDescriptor::finite(2), &[1, 2]));
        let d: SpaceDescriptor =
            serde_json::from_str(r#"{"field":{"kind":"finite","q":2},"dim":1,"weights":["3/2"]}"#).unwrap();
        assert_eq!(d.weights[0], NormValue::new(3, 2));
    }

    #[test]
    fn norm_examples() {
        let x = q3sq();
        assert_eq!(x.norm(&x.point_from_ints(&[1, 3]).unwrap()), NormValue::ONE);
        assert_eq!(x.norm(&x.zero()), NormValue::ZERO);
        let y = f2sq(&[1, 2]);
        assert_eq!(y.norm(&y.point_from_ints(&[1, 1]).unwrap()), NormValue::integer(2));
    }

    #[test]
    fn arithmetic_examples() {
        let x = q3sq();
        let p = x.point_from_ints(&[5, -7]).unwrap();
        assert!(x.is_zero(&x.sub(&p, &p).unwrap()));
        let three = x.field().from_integer(3).unwrap();
        let s = x.scalar_mul(&three, &x.point_from_ints(&[1, 0]).unwrap()).unwrap();
        assert_eq!(x.norm(&s), NormValue::new(1, 3));
        let y = f2sq(&[1, 2]);
        let sum = y.add(&y.point_from_ints(&[1, 0]).unwrap(), &y.point_from_ints(&[0, 1]).unwrap()).unwrap();
        assert_eq!(sum, y.point_from_ints(&[1, 1]).unwrap());
        assert_eq!(y.norm(&sum), NormValue::integer(2));
    }

    #[test]
    fn value_set_examples() {
        let x = q3sq();
        assert_eq!(
            x.value_set(&NormValue::new(1, 9), &NormValue::integer(9)),
            vec![
                NormValue::new(1, 9),
                NormValue::new(1, 3),
                NormValue::ONE,
                NormValue::integer(3),
                NormValue::integer(9)
            ]
        );
        let y = f2sq(&[1, 2]);
        assert_eq!(
            y.value_set(&NormValue::ZERO, &NormValue::integer(100)),
            vec![NormValue::ONE, NormValue::integer(2)]
        );
        let z = Space::new(SpaceDescriptor::with_int_weights(FieldDescriptor::finite(2), &[1])).unwrap();
        assert_eq!(z.finite_value_set().unwrap(), vec![NormValue::ONE]);
    }

    #[test]
    fn enumerate_matches_order() {
        let y = f2sq(&[1, 2]);
        let pts = y.enumerate_points().unwrap();
        assert_eq!(pts.len(), 4);
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
        let nonzero: Vec<_> = pts.iter().filter(|p| !y.is_zero(p)).map(|p| y.norm(p)).collect();
        let mut vs = nonzero.clone();
        vs.sort();
        vs.dedup();
        assert_eq!(vs, y.finite_value_set().unwrap());
    }

    #[test]
    fn attainability() {
        let x = q3sq();
        assert!(x.is_attainable(&NormValue::integer(27)));
        assert!(!x.is_attainable(&NormValue::integer(2)));
        let w = Space::new(SpaceDescriptor::with_int_weights(FieldDescriptor::padic(3, 4, -6, 6), &[1, 2])).unwrap();
        assert!(w.is_attainable(&NormValue::new(2, 3)));
        assert_eq!(w.coordinate_exponent(&NormValue::new(2, 3), 1), Some(1));
        assert_eq!(w.coordinate_exponent(&NormValue::new(2, 3), 0), None);
    }
}
