use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::spaces::{Point, Space};

use super::IsometryTree;

/// Anything that can be evaluated pointwise.
pub trait PointMap: Sync {
    fn eval(&self, x: &Point) -> Result<Point>;
}

impl<T: PointMap + ?Sized> PointMap for &T {
    fn eval(&self, x: &Point) -> Result<Point> {
        (**self).eval(x)
    }
}

impl<T: PointMap + ?Sized> PointMap for Box<T> {
    fn eval(&self, x: &Point) -> Result<Point> {
        (**self).eval(x)
    }
}

/// A tree bound to its space.
#[derive(Clone, Copy)]
pub struct TreeMap<'a> {
    space: &'a Space,
    tree: &'a IsometryTree,
}

impl<'a> TreeMap<'a> {
    pub fn new(space: &'a Space, tree: &'a IsometryTree) -> Self {
        TreeMap { space, tree }
    }
}

impl PointMap for TreeMap<'_> {
    fn eval(&self, x: &Point) -> Result<Point> {
        self.tree.apply(self.space, x)
    }
}

pub struct FnMap<F>(pub F);

impl<F> PointMap for FnMap<F>
where
    F: Fn(&Point) -> Result<Point> + Sync,
{
    fn eval(&self, x: &Point) -> Result<Point> {
        (self.0)(x)
    }
}

/// An explicit table of images. Missing points are an error.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TableMap {
    entries: HashMap<Point, Point>,
}

impl TableMap {
    pub fn new(pairs: impl IntoIterator<Item = (Point, Point)>) -> Self {
        TableMap { entries: pairs.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, x: &Point) -> Option<&Point> {
        self.entries.get(x)
    }

    /// Pairs sorted by source point.
    pub fn pairs(&self) -> Vec<(Point, Point)> {
        let mut v: Vec<_> = self.entries.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        v.sort();
        v
    }
}

impl PointMap for TableMap {
    fn eval(&self, x: &Point) -> Result<Point> {
        self.entries.get(x).cloned().ok_or(Error::MissingTableEntry)
    }
}

/// `f ∘ g`.
pub struct Composed<'a> {
    outer: &'a dyn PointMap,
    inner: &'a dyn PointMap,
}

impl PointMap for Composed<'_> {
    fn eval(&self, x: &Point) -> Result<Point> {
        self.outer.eval(&self.inner.eval(x)?)
    }
}

pub fn compose<'a>(f: &'a dyn PointMap, g: &'a dyn PointMap) -> Composed<'a> {
    Composed { outer: f, inner: g }
}
