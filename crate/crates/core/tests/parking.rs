use fpark_core::parking::{
    condensation_stats, decompose, park_on_mapping, park_sequence, ComponentKind, Mapping, RootedTree,
};
use fpark_core::rng::Prng;

fn random_instance(rng: &mut Prng, n: usize) -> (RootedTree, Vec<usize>) {
    let t = RootedTree::uniform(n, rng).unwrap();
    let m = rng.below_usize(2 * n + 1);
    let a = (0..m).map(|_| rng.below_usize(n)).collect();
    (t, a)
}

#[test]
fn conservation_and_total_distance() {
    let mut rng = Prng::new(1);
    for _ in 0..300 {
        let n = 1 + rng.below_usize(60);
        let (t, a) = random_instance(&mut rng, n);
        let o = park_sequence(&t, &a).unwrap();
        assert_eq!(o.parked() + o.unparked.len(), a.len());
        assert_eq!(o.total_distance, o.flux.iter().sum::<u64>());
        assert_eq!(o.flux[t.root()], 0);
    }
}

#[test]
fn components_are_nested() {
    let mut rng = Prng::new(2);
    for _ in 0..300 {
        let n = 1 + rng.below_usize(60);
        let (t, a) = random_instance(&mut rng, n);
        let o = park_sequence(&t, &a).unwrap();
        let s = decompose(&t, &o, ComponentKind::Strong).unwrap();
        let f = decompose(&t, &o, ComponentKind::Full).unwrap();
        let near = decompose(&t, &o, ComponentKind::Near).unwrap();
        for v in 0..n {
            assert!(!s.kept[v] || f.kept[v]);
            assert!(!f.kept[v] || near.kept[v]);
        }
        let total: usize = near.components.iter().map(|c| c.vertices.len()).sum();
        assert_eq!(total, n);
    }
}

#[test]
fn mapping_parking_conserves_cars() {
    let mut rng = Prng::new(3);
    for _ in 0..300 {
        let n = 1 + rng.below_usize(40);
        let map = Mapping::uniform(n, &mut rng).unwrap();
        let a: Vec<usize> = (0..rng.below_usize(2 * n + 1)).map(|_| rng.below_usize(n)).collect();
        let o = park_on_mapping(&map, &a).unwrap();
        assert_eq!(o.parked() + o.unparked.len(), a.len());
        assert!(o.parked() <= n);
        assert_eq!(o.total_distance, o.flux.iter().sum::<u64>());
    }
}

#[test]
fn tree_as_mapping_parks_alike_without_exits() {
    let mut rng = Prng::new(4);
    for _ in 0..200 {
        let n = 1 + rng.below_usize(30);
        let t = RootedTree::uniform(n, &mut rng).unwrap();
        let a: Vec<usize> = (0..rng.below_usize(n + 1)).map(|_| rng.below_usize(n)).collect();
        let o = park_sequence(&t, &a).unwrap();
        if o.unparked.is_empty() {
            let om = park_on_mapping(&Mapping::from_tree(&t), &a).unwrap();
            assert_eq!(om.occupant, o.occupant);
        }
    }
}

#[test]
fn condensation_two_vertices() {
    let c = condensation_stats(2, 40, 9).unwrap();
    assert_eq!(c.mean_full, 0.5);
}

#[test]
fn condensation_is_seeded() {
    let a = condensation_stats(300, 20, 5).unwrap();
    let b = condensation_stats(300, 20, 5).unwrap();
    assert_eq!(a.mean_full, b.mean_full);
    assert_eq!(a.mean_strong, b.mean_strong);
}
