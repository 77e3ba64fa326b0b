mod oracles;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unknot_kit::tree::{
    ahu_code, cayley_lower_bound, enumerate_free_trees, multigraphs_isomorphic, trees_isomorphic, Multigraph, Tree,
};

use oracles::{brute_canonical, brute_isomorphic, prufer_class_count, random_tree_edges};

#[test]
fn enumeration_matches_prufer_counts() {
    for n in 1..=8 {
        let trees = enumerate_free_trees(n).unwrap();
        assert_eq!(trees.len(), prufer_class_count(n), "n = {n}");
        let bound = cayley_lower_bound(n);
        assert!(bound <= num_rational::BigRational::from_integer(trees.len().into()));
    }
}

#[test]
fn enumerated_codes_are_distinct_classes() {
    for n in 1..=8 {
        let brute: std::collections::BTreeSet<String> = enumerate_free_trees(n)
            .unwrap()
            .iter()
            .map(|c| {
                let t = c.to_tree();
                brute_canonical(t.vertex_count(), t.edges())
            })
            .collect();
        assert_eq!(brute.len(), enumerate_free_trees(n).unwrap().len());
    }
}

fn tree_from_seed(seed: u64, n: usize) -> Tree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Tree::new(n, random_tree_edges(&mut rng, n)).unwrap()
}

proptest! {
    #[test]
    fn ahu_codes_agree_with_the_brute_canonical_form(seed in any::<u64>(), other in any::<u64>(), n in 1usize..9) {
        let a = tree_from_seed(seed, n);
        let b = tree_from_seed(other, n);
        let same = brute_canonical(n, a.edges()) == brute_canonical(n, b.edges());
        prop_assert_eq!(ahu_code(&a) == ahu_code(&b), same);
        prop_assert_eq!(trees_isomorphic(&a, &b), same);
    }

    #[test]
    fn relabelling_keeps_the_code(seed in any::<u64>(), n in 1usize..10, perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let t = tree_from_seed(seed, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        prop_assert_eq!(ahu_code(&t.relabel(&perm)), ahu_code(&t));
    }

    #[test]
    fn parsed_codes_round_trip(seed in any::<u64>(), n in 1usize..12) {
        let t = tree_from_seed(seed, n);
        let code = ahu_code(&t);
        let back = code.to_tree();
        prop_assert_eq!(ahu_code(&back), code.clone());
        prop_assert_eq!(code.as_str().parse::<unknot_kit::tree::CanonicalCode>().unwrap(), code);
    }

    #[test]
    fn multigraph_isomorphism_matches_brute_force(
        n in 1usize..6,
        a in proptest::collection::vec((0usize..6, 0usize..6), 0..7),
        perm_seed in any::<u64>(),
        tweak in any::<bool>(),
    ) {
        use rand::seq::SliceRandom;
        let edges: Vec<(usize, usize)> = a.iter().map(|&(u, v)| (u % n, v % n)).collect();
        let g = Multigraph::new(n, edges.clone()).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        let mut h_edges: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (perm[v], perm[u])).collect();
        if tweak && !h_edges.is_empty() {
            // Moving one endpoint usually breaks the isomorphism.
            h_edges[0].0 = (h_edges[0].0 + 1) % n;
        }
        let h = Multigraph::new(n, h_edges).unwrap();
        prop_assert_eq!(multigraphs_isomorphic(&g, &h), brute_isomorphic(&g, &h));
    }
}
