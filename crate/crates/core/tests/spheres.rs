use ultraiso::geometry::{decompose_sphere, same_class};
use ultraiso::{FieldDescriptor, Space, SpaceDescriptor, Sphere, SphereLayout};

fn grid() -> Vec<Space> {
    let mut out = Vec::new();
    for q in [2, 3, 4, 5] {
        for w in [&[1][..], &[1, 2], &[1, 3], &[2, 3], &[1, 1]] {
            out.push(Space::new(SpaceDescriptor::with_int_weights(FieldDescriptor::finite(q), w)).unwrap());
        }
    }
    out
}

#[test]
fn classes_partition_each_sphere_at_distance_r() {
    for s in grid() {
        let pts = s.enumerate_points().unwrap();
        for r in s.finite_value_set().unwrap() {
            let layout = SphereLayout::new(&s, &r).unwrap();
            let on: Vec<_> = pts.iter().filter(|p| s.norm(p) == r).collect();
            let mut seen = std::collections::BTreeSet::new();
            for x in &on {
                let cx = layout.class_of(&s, x).unwrap();
                seen.insert(cx);
                for y in &on {
                    let cy = layout.class_of(&s, y).unwrap();
                    let d = s.distance(x, y).unwrap();
                    if cx == cy {
                        assert!(d < r);
                        assert!(same_class(&s, x, y, &r).unwrap());
                    } else {
                        assert_eq!(d, r);
                    }
                }
            }
            assert_eq!(seen.len(), layout.class_count());
            let Sphere::Decomposed(dec) = decompose_sphere(&s, &r, 1).unwrap() else { panic!("empty sphere") };
            assert_eq!(dec.classes.len(), seen.len());
            for c in &dec.classes {
                assert_eq!(s.norm(&c.representative), r);
                assert_eq!(layout.class_of(&s, &c.representative).unwrap(), c.index);
            }
        }
    }
}

#[test]
fn classes_coarsen_as_the_radius_grows() {
    for s in grid() {
        let pts = s.enumerate_points().unwrap();
        let values = s.finite_value_set().unwrap();
        for x in &pts {
            for y in &pts {
                let (nx, ny) = (s.norm(x), s.norm(y));
                if nx.is_zero() || nx != ny {
                    continue;
                }
                if same_class(&s, x, y, &nx).unwrap() {
                    assert!(values.iter().filter(|r| **r > nx).all(|r| s.distance(x, y).unwrap() < *r));
                }
            }
        }
    }
}
