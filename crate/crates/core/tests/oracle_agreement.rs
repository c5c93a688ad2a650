use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ultraiso::isotree::{factor_isometry, random_tree};
use ultraiso::oracle::{census, Oracle};
use ultraiso::{Domain, Exec, FieldDescriptor, Point, Space, SpaceDescriptor};

fn space(q: u64, w: &[i128]) -> Space {
    Space::new(SpaceDescriptor::with_int_weights(FieldDescriptor::finite(q), w)).unwrap()
}

fn small_spaces() -> Vec<Space> {
    vec![
        space(2, &[1]),
        space(3, &[1]),
        space(4, &[1]),
        space(5, &[1]),
        space(2, &[1, 2]),
        space(2, &[1, 1]),
        space(3, &[1, 3]),
        space(3, &[2, 3]),
        space(3, &[1, 2]),
    ]
}

type Graph = Vec<(Point, Point)>;

#[test]
fn oracle_maps_are_exactly_the_factored_trees() {
    for s in small_spaces() {
        let o = Oracle::new(&s).unwrap();
        let d = Domain::finite(&s).unwrap();
        let depth = d.levels().len() as u32;
        let maps = o.enumerate(1 << 20, Exec::default()).unwrap();
        let listed: BTreeSet<Graph> = maps.iter().map(|f| o.pairs(f)).collect();
        let rebuilt: BTreeSet<Graph> = maps
            .iter()
            .map(|f| {
                let t = factor_isometry(&s, &o.to_table(f), &d, depth, Exec::default()).unwrap();
                o.points().into_iter().map(|x| (x.clone(), t.apply(&s, &x).unwrap())).collect()
            })
            .collect();
        assert_eq!(listed, rebuilt);

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let radii = s.finite_value_set().unwrap();
        for _ in 0..25 {
            let t = random_tree(&s, &radii, depth, &mut rng).unwrap();
            let g: Graph = o.points().into_iter().map(|x| (x.clone(), t.apply(&s, &x).unwrap())).collect();
            assert!(listed.contains(&g));
        }
    }
}

#[test]
fn trivial_norm_counts_are_factorials() {
    for (q, dim) in [(2, 1), (3, 1), (4, 1), (5, 1), (2, 2), (3, 2), (4, 2), (5, 2)] {
        let s = space(q, &vec![1; dim]);
        let k = (q as u128).pow(dim as u32) - 1;
        let fact: u128 = (1..=k).product();
        assert_eq!(Oracle::new(&s).unwrap().count_isometries().unwrap(), fact);
    }
}

#[test]
fn census_is_stable() {
    for s in small_spaces() {
        let a = census(&s, 1 << 20, 9, Exec::Sequential).unwrap();
        let b = census(&s, 1 << 20, 9, Exec::default()).unwrap();
        assert_eq!(a, b);
    }
}
