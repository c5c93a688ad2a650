//! Linearity checks with stored counterexamples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::Domain;
use crate::par::{self, Exec};
use crate::scalars::FieldElement;
use crate::spaces::{Point, Space};

use super::{FnMap, PointMap, PAIRWISE_LIMIT};

const SAMPLED_PAIRS: usize = 20_000;
const SAMPLED_POINTS: usize = 2_000;

/// A concrete failure of additivity or homogeneity, with the values observed.
#[derive(Debug, Clone, PartialEq)]
pub enum NonlinearityCertificate {
    /// `f(x + y) ≠ f(x) + f(y)`.
    Additive { x: Point, y: Point, fx: Point, fy: Point, fxy: Point },
    /// `f(λx) ≠ λ f(x)`.
    Scalar { lambda: FieldElement, x: Point, fx: Point, flx: Point },
}

impl NonlinearityCertificate {
    /// Re-evaluates `map` at the stored points and confirms the inequality
    /// (modulo the floor ball of `domain` over `Q_p`).
    pub fn confirm(&self, space: &Space, map: &dyn PointMap, domain: &Domain) -> Result<bool> {
        let red = |p: &Point| domain.reduce(space, p);
        match self {
            NonlinearityCertificate::Additive { x, y, .. } => {
                let lhs = red(&map.eval(&space.add(x, y)?)?)?;
                let rhs = red(&space.add(&map.eval(x)?, &map.eval(y)?)?)?;
                Ok(lhs != rhs)
            }
            NonlinearityCertificate::Scalar { lambda, x, .. } => {
                let lhs = red(&map.eval(&space.scalar_mul(lambda, x)?)?)?;
                let rhs = red(&space.scalar_mul(lambda, &map.eval(x)?)?)?;
                Ok(lhs != rhs)
            }
        }
    }
}

/// `None` when `map` is additive and homogeneous on `domain`, otherwise the
/// first counterexample found. Finite spaces are checked on every pair and
/// every scalar; p-adic domains on every pair when small, on a seeded sample
/// of pairs otherwise, and against a fixed set of scalars.
pub fn is_linear(
    space: &Space,
    map: &dyn PointMap,
    domain: &Domain,
    exec: Exec,
) -> Result<Option<NonlinearityCertificate>> {
    let n = domain.size() as usize;
    let points = domain.points(space, exec);
    let images = par::map_range(exec, n, |i| map.eval(&points[i]).and_then(|y| domain.reduce(space, &y)));
    let images: Vec<Point> = images.into_iter().collect::<Result<_>>()?;
    let image_of = |p: &Point| -> Result<Point> {
        match domain.index_of(space, p) {
            Ok(k) => Ok(images[k as usize].clone()),
            Err(_) => domain.reduce(space, &map.eval(p)?),
        }
    };

    let additive = |i: usize, j: usize| -> Result<Option<NonlinearityCertificate>> {
        let (x, y) = (&points[i], &points[j]);
        let fxy = image_of(&space.add(x, y)?)?;
        let sum = domain.reduce(space, &space.add(&images[i], &images[j])?)?;
        Ok((fxy != sum).then(|| NonlinearityCertificate::Additive {
            x: x.clone(),
            y: y.clone(),
            fx: images[i].clone(),
            fy: images[j].clone(),
            fxy,
        }))
    };
    let scalar = |lambda: &FieldElement, i: usize| -> Result<Option<NonlinearityCertificate>> {
        let x = &points[i];
        let flx = image_of(&space.scalar_mul(lambda, x)?)?;
        let rhs = domain.reduce(space, &space.scalar_mul(lambda, &images[i])?)?;
        Ok((flx != rhs).then(|| NonlinearityCertificate::Scalar {
            lambda: *lambda,
            x: x.clone(),
            fx: images[i].clone(),
            flx,
        }))
    };
    let lift = |r: Result<Option<NonlinearityCertificate>>| match r {
        Ok(None) => None,
        other => Some(other),
    };

    let exhaustive = domain.is_finite_space() || domain.size() <= PAIRWISE_LIMIT;
    let found = if exhaustive {
        par::find_map_first(exec, n, |i| (i..n).find_map(|j| lift(additive(i, j))))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pairs: Vec<(usize, usize)> =
            (0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        par::find_map_first(exec, pairs.len(), |k| lift(additive(pairs[k].0, pairs[k].1)))
    };
    if let Some(r) = found {
        return r;
    }

    let field = space.field();
    let scalars: Vec<FieldElement> = match field.prime() {
        None => field.elements().unwrap().into_iter().skip(2).collect(),
        Some(p) => {
            let mut s: Vec<FieldElement> =
                (2..p as i64).map(|d| field.from_integer(d)).collect::<std::result::Result<_, _>>()?;
            s.push(field.from_integer(-1)?);
            s.push(field.from_integer(1 + p as i64)?);
            s.push(field.from_integer(p as i64)?);
            s.dedup();
            s
        }
    };
    let sample: Vec<usize> = if exhaustive {
        (0..n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        (0..SAMPLED_POINTS).map(|_| rng.gen_range(0..n)).collect()
    };
    let jobs: Vec<(usize, usize)> = (0..scalars.len()).flat_map(|s| sample.iter().map(move |i| (s, *i))).collect();
    match par::find_map_first(exec, jobs.len(), |k| lift(scalar(&scalars[jobs[k].0], jobs[k].1))) {
        Some(r) => r,
        None => Ok(None),
    }
}

/// [`is_linear`] applied to `x ↦ f(x) − f(0)`.
pub fn is_affine(
    space: &Space,
    map: &dyn PointMap,
    domain: &Domain,
    exec: Exec,
) -> Result<Option<NonlinearityCertificate>> {
    let f0 = map.eval(&space.zero())?;
    let centred = FnMap(|x: &Point| Ok(space.sub(&map.eval(x)?, &f0)?));
    is_linear(space, &centred, domain, exec)
}
