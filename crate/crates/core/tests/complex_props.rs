use cubeplex::complex::{generators, halfspace_system_of, is_cat0, Hyperplanes, DEFAULT_MEDIAN_CAP};
use cubeplex::pocset::{dual_complex, flip, is_vertex, minimal_halfspaces, seed_vertex};
use cubeplex::pocset::hyperplane_of;
use cubeplex::CubeComplex;
use proptest::prelude::*;

/// Random unions of unit squares in a 4x4 block.
fn square_union() -> impl Strategy<Value = CubeComplex> {
    prop::collection::btree_set((0i64..4, 0i64..4), 1..10).prop_map(|cells| {
        let cells: Vec<Vec<i64>> = cells.into_iter().map(|(a, b)| vec![a, b]).collect();
        generators::lattice_union(2, &cells)
    })
}

fn random_tree() -> impl Strategy<Value = CubeComplex> {
    prop::collection::vec(any::<prop::sample::Index>(), 1..30).prop_map(|picks| {
        let parents: Vec<usize> = picks.iter().enumerate().map(|(i, p)| p.index(i + 1)).collect();
        generators::tree_from_parents(&parents)
    })
}

proptest! {
    #[test]
    fn json_round_trip(x in square_union()) {
        let back = CubeComplex::from_json(&x.to_json()).unwrap();
        prop_assert_eq!(back.f_vector(), x.f_vector());
        prop_assert_eq!(back.labels(), x.labels());
        prop_assert_eq!(back.to_json(), x.to_json());
    }

    #[test]
    fn hyperplanes_partition_edges(x in square_union()) {
        let hs = Hyperplanes::new(&x);
        let total: usize = hs.iter().map(|h| h.edge_class.len()).sum();
        prop_assert_eq!(total, x.count(1));
        // Every square contributes one crossing between distinct hyperplanes.
        for (id, _) in x.cubes_of_dim(2) {
            let d = hs.directions(id);
            prop_assert_ne!(d[0], d[1]);
            prop_assert!(hs.cross(d[0], d[1]).unwrap());
        }
    }

    #[test]
    fn trees_are_cat0_with_one_hyperplane_per_edge(x in random_tree()) {
        let v = is_cat0(&x, DEFAULT_MEDIAN_CAP).unwrap();
        prop_assert!(v.cat0);
        let hs = Hyperplanes::new(&x);
        prop_assert_eq!(hs.len(), x.count(1));
        for h in 0..hs.len() {
            prop_assert_eq!(hs.halfspaces(h).unwrap().len(), 2);
        }
    }

    #[test]
    fn cat0_unions_are_recovered_from_their_halfspaces(x in square_union()) {
        prop_assume!(is_cat0(&x, DEFAULT_MEDIAN_CAP).map(|v| v.cat0).unwrap_or(false));
        let hs = halfspace_system_of(&x, DEFAULT_MEDIAN_CAP).unwrap();
        let d = dual_complex(&hs.system, &hs.principal_orientation(0), 10_000).unwrap();
        prop_assert_eq!(d.complex.f_vector(), x.f_vector());
        // Principal orientations are exactly the dual vertices.
        for v in 0..x.vertex_count() {
            prop_assert!(d.vertex_of(&hs.principal_orientation(v)).is_some());
        }
    }

    #[test]
    fn flipping_a_minimal_halfspace_stays_a_vertex(x in random_tree()) {
        let hs = halfspace_system_of(&x, DEFAULT_MEDIAN_CAP).unwrap();
        let s = &hs.system;
        let v = seed_vertex(s).unwrap();
        prop_assert!(is_vertex(s, &v).unwrap().vertex);
        for h in minimal_halfspaces(s, &v).unwrap() {
            let w = flip(s, &v, hyperplane_of(h)).unwrap();
            prop_assert!(is_vertex(s, &w).unwrap().vertex);
            prop_assert_eq!(w.differences(&v), vec![hyperplane_of(h)]);
        }
    }
}
