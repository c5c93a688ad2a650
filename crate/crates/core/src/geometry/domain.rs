//! Finite enumerations used by verification, linearity checks and factoring.
//!
//! Over a finite field the domain is the whole space. Over `Q_p` it is the
//! quotient `B[0, top] / B(0, floor)`: coordinate `i` ranges over
//! `p^{a_i}Z_p / p^{b_i}Z_p`, stored as an integer `t_i < p^{b_i − a_i}`.
//! Points are indexed in mixed radix with coordinate 0 most significant.

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::spaces::{Point, Space};
use crate::value::NormValue;

/// Largest domain we are willing to enumerate.
pub const MAX_DOMAIN_POINTS: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    coords: Vec<Coord>,
    size: u64,
    levels: Vec<NormValue>,
    bounds: Option<(NormValue, NormValue)>,
}

#[derive(Debug, Clone, PartialEq)]
struct Coord {
    weight: NormValue,
    /// Lowest digit position `a_i` (p-adic only).
    low: i32,
    /// Number of digits (p-adic) or 1 (finite).
    span: u32,
    radix: u64,
}

/// Digit-truncation masks that identify points at distance `≤ t`.
#[derive(Debug, Clone)]
pub struct LevelKey {
    mods: Vec<u64>,
    radices: Vec<u64>,
}

impl LevelKey {
    pub fn key(&self, index: u64) -> u64 {
        let mut rest = index;
        let mut digits = vec![0u64; self.radices.len()];
        for i in (0..self.radices.len()).rev() {
            digits[i] = rest % self.radices[i];
            rest /= self.radices[i];
        }
        digits.iter().zip(&self.mods).fold(0u64, |acc, (d, m)| acc * m + d % m)
    }

    /// Keys lie in `0..range()`.
    pub fn range(&self) -> u64 {
        self.mods.iter().product()
    }
}

impl Domain {
    /// Every point of a space over a finite field.
    pub fn finite(space: &Space) -> Result<Self> {
        let q = space.field().order().ok_or(Error::NotFinite)?;
        let coords: Vec<Coord> =
            space.weights().iter().map(|w| Coord { weight: *w, low: 0, span: 1, radix: q }).collect();
        let size = checked_size(&coords)?;
        Ok(Domain { coords, size, levels: space.finite_value_set().unwrap(), bounds: None })
    }

    /// `B[0, top] / B(0, floor)` in a p-adic space.
    pub fn window(space: &Space, top: &NormValue, floor: &NormValue) -> Result<Self> {
        let field = space.field();
        let p = field.prime().ok_or(Error::NotPadic)?;
        let n = field.precision().unwrap();
        let (vmin, vmax) = field.window().unwrap();
        if floor.is_zero() || floor > top {
            return Err(Error::Invalid(format!("domain needs 0 < floor <= top, got floor {floor}, top {top}")));
        }
        let search = || (vmin as i64 - 1)..=(vmax as i64 + n as i64 + 1);
        let scale = |w: &NormValue, v: i64| *w * NormValue::pow(p, -(v as i32));
        let mut coords = Vec::with_capacity(space.dim());
        for w in space.weights() {
            let a = search().find(|v| scale(w, *v) <= *top);
            let b = search().find(|v| scale(w, *v) < *floor);
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Error::WindowTooNarrow {
                    needed_min: vmin as i64 - 1,
                    needed_max: vmax as i64 + 1,
                    min: vmin,
                    max: vmax,
                });
            };
            let span = (b - a).max(0) as u32;
            if span > n {
                return Err(Error::InsufficientPrecision { needed: span, have: n });
            }
            // Cancellation between two domain elements may push a valuation
            // up to b - 1 + (N - 1); that must stay representable.
            if a < vmin as i64 || b - 1 + n as i64 - 1 > vmax as i64 {
                return Err(Error::WindowTooNarrow {
                    needed_min: a,
                    needed_max: b + n as i64 - 2,
                    min: vmin,
                    max: vmax,
                });
            }
            let radix = p.checked_pow(span).ok_or(Error::DomainTooLarge(u128::MAX))?;
            coords.push(Coord { weight: *w, low: a as i32, span, radix });
        }
        let size = checked_size(&coords)?;
        Ok(Domain { coords, size, levels: space.value_set(floor, top), bounds: Some((*top, *floor)) })
    }

    /// `top · p^{-depth}` as floor; the whole space when the field is finite.
    pub fn with_depth(space: &Space, top: &NormValue, depth: u32) -> Result<Self> {
        match space.field().prime() {
            None => Self::finite(space),
            Some(p) => Self::window(space, top, &(*top * NormValue::pow(p, -(depth as i32)))),
        }
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn is_finite_space(&self) -> bool {
        self.bounds.is_none()
    }

    /// `(top, floor)` for p-adic domains.
    pub fn bounds(&self) -> Option<(NormValue, NormValue)> {
        self.bounds
    }

    /// Attainable norms in `[floor, top]`, ascending.
    pub fn levels(&self) -> &[NormValue] {
        &self.levels
    }

    pub fn point(&self, space: &Space, index: u64) -> Point {
        assert!(index < self.size, "domain index out of range");
        let field = space.field();
        let mut rest = index;
        let mut coords = vec![field.zero(); self.coords.len()];
        for (i, c) in self.coords.iter().enumerate().rev() {
            let t = rest % c.radix;
            rest /= c.radix;
            coords[i] = if self.is_finite_space() {
                crate::scalars::FieldElement::Residue(t as u32)
            } else {
                field.from_scaled(c.low, t).expect("domain digits are representable")
            };
        }
        Point::new(coords)
    }

    pub fn points(&self, space: &Space, exec: Exec) -> Vec<Point> {
        par::map_range(exec, self.size as usize, |i| self.point(space, i as u64))
    }

    /// Index of the class of `x` modulo the floor ball.
    pub fn index_of(&self, space: &Space, x: &Point) -> Result<u64> {
        let field = space.field();
        let mut idx = 0u64;
        for (c, e) in self.coords.iter().zip(x.coords()) {
            let t = if self.is_finite_space() {
                match e {
                    crate::scalars::FieldElement::Residue(i) => *i as u64,
                    _ => return Err(Error::OutsideDomain),
                }
            } else {
                field.scaled_digits(e, c.low, c.span).ok_or(Error::OutsideDomain)?
            };
            idx = idx * c.radix + t;
        }
        Ok(idx)
    }

    pub fn contains(&self, space: &Space, x: &Point) -> bool {
        self.index_of(space, x).is_ok()
    }

    /// Canonical representative of `x` modulo the floor ball.
    pub fn reduce(&self, space: &Space, x: &Point) -> Result<Point> {
        if self.is_finite_space() {
            return Ok(x.clone());
        }
        Ok(self.point(space, self.index_of(space, x)?))
    }

    /// Distance in the quotient: `‖x − y‖`, or 0 below the floor.
    pub fn distance(&self, space: &Space, x: &Point, y: &Point) -> Result<NormValue> {
        let d = space.distance(x, y)?;
        Ok(match self.bounds {
            Some((_, floor)) if d < floor => NormValue::ZERO,
            _ => d,
        })
    }

    /// Keys with `key(x) = key(y) ⇔ dist(x, y) ≤ t` on this domain.
    pub fn level_key(&self, space: &Space, t: &NormValue) -> LevelKey {
        let radices: Vec<u64> = self.coords.iter().map(|c| c.radix).collect();
        let mods = self
            .coords
            .iter()
            .map(|c| {
                if t.is_zero() {
                    return c.radix;
                }
                match space.field().prime() {
                    None => {
                        if c.weight > *t {
                            c.radix
                        } else {
                            1
                        }
                    }
                    Some(p) => {
                        let kept = (0..c.span)
                            .take_while(|k| c.weight * NormValue::pow(p, -(c.low + *k as i32)) > *t)
                            .count() as u32;
                        p.pow(kept)
                    }
                }
            })
            .collect();
        LevelKey { mods, radices }
    }
}

fn checked_size(coords: &[Coord]) -> Result<u64> {
    let mut size: u128 = 1;
    for c in coords {
        size = size.saturating_mul(c.radix as u128);
    }
    if size > MAX_DOMAIN_POINTS as u128 {
        return Err(Error::DomainTooLarge(size));
    }
    Ok(size as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldDescriptor;
    use crate::spaces::SpaceDescriptor;

    fn space(field: FieldDescriptor, w: &[i128]) -> Space {
        Space::new(SpaceDescriptor::with_int_weights(field, w)).unwrap()
    }

    #[test]
    fn finite_domain_matches_enumeration() {
        let x = space(FieldDescriptor::finite(3), &[1, 3]);
        let d = Domain::finite(&x).unwrap();
        assert_eq!(d.size(), 9);
        assert_eq!(d.points(&x, Exec::Sequential), x.enumerate_points().unwrap());
        for (i, p) in d.points(&x, Exec::Sequential).iter().enumerate() {
            assert_eq!(d.index_of(&x, p).unwrap(), i as u64);
        }
    }

    #[test]
    fn padic_domain_round_trips() {
        let x = space(FieldDescriptor::padic(3, 8, -12, 12), &[1, 1]);
        let d = Domain::with_depth(&x, &NormValue::ONE, 2).unwrap();
        assert_eq!(d.size(), 729);
        assert_eq!(d.levels(), &[NormValue::new(1, 9), NormValue::new(1, 3), NormValue::ONE]);
        for i in 0..d.size() {
            let p = d.point(&x, i);
            assert_eq!(d.index_of(&x, &p).unwrap(), i);
            assert!(x.norm(&p) <= NormValue::ONE);
        }
        let far = x.point_from_ints(&[1, 27]).unwrap();
        assert_eq!(d.reduce(&x, &far).unwrap(), x.point_from_ints(&[1, 0]).unwrap());
        let outside = x.point(vec![x.field().from_rational(1, 3).unwrap(), x.field().zero()]).unwrap();
        assert!(!d.contains(&x, &outside));
    }

    #[test]
    fn level_keys_agree_with_distances() {
        for (f, w, top, depth) in [
            (FieldDescriptor::padic(3, 8, -12, 12), vec![1, 3], NormValue::integer(3), 2),
            (FieldDescriptor::padic(2, 8, -12, 12), vec![1, 1], NormValue::ONE, 3),
            (FieldDescriptor::finite(3), vec![1, 3], NormValue::ONE, 0),
        ] {
            let x = space(f, &w);
            let d = Domain::with_depth(&x, &top, depth).unwrap();
            let pts = d.points(&x, Exec::Sequential);
            let mut levels = d.levels().to_vec();
            levels.push(NormValue::ZERO);
            for t in levels {
                let key = d.level_key(&x, &t);
                for (i, a) in pts.iter().enumerate() {
                    for (j, b) in pts.iter().enumerate() {
                        let close = d.distance(&x, a, b).unwrap() <= t;
                        assert_eq!(close, key.key(i as u64) == key.key(j as u64));
                    }
                }
            }
        }
    }

    #[test]
    fn narrow_windows_are_rejected() {
        let x = space(FieldDescriptor::padic(3, 4, -6, 6), &[1]);
        assert!(matches!(Domain::with_depth(&x, &NormValue::ONE, 6), Err(Error::InsufficientPrecision { .. })));
        assert!(matches!(Domain::with_depth(&x, &NormValue::pow(3, 7), 1), Err(Error::WindowTooNarrow { .. })));
    }
}
