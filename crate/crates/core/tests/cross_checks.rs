use std::collections::BTreeSet;

use ghat_core::baumslag_solitar::BS23;
use ghat_core::ends::coset_graph_ball;
use ghat_core::families::{h1_derivations, small_subgroups};
use ghat_core::modules::FiniteModule;
use ghat_core::oracles::{
    bs_pinch_free, count_derivations_by_assignments, count_derivations_by_functions, h1_from_counts, PermGroup,
};
use ghat_core::subgroups::SubgroupHandle;
use ghat_core::words::ball_words;
use ghat_core::{preset, GroupContext, Word};

fn rows(m: &FiniteModule) -> (Vec<Vec<Vec<u64>>>, Vec<Vec<Vec<u64>>>) {
    let to_rows = |mx: &ghat_core::linalg::Matrix| mx.row_vectors();
    let mats = m.matrices().iter().map(to_rows).collect();
    let invs = m.matrices().iter().map(|mx| to_rows(&mx.inverse().unwrap())).collect();
    (mats, invs)
}

fn h1_both_ways(ctx: &GroupContext, m: &FiniteModule) -> (usize, usize) {
    let engine = h1_derivations(ctx, m).unwrap();
    let (mats, invs) = rows(m);
    let (der, ider) = count_derivations_by_assignments(&ctx.presentation.relators, m.p, m.dim, &mats, &invs);
    assert_eq!(der, m.p.pow(engine.der as u32));
    assert_eq!(ider, m.p.pow(engine.ider as u32));
    (engine.h1, h1_from_counts(m.p, der, ider))
}

#[test]
fn first_cohomology_against_enumeration() {
    let z = preset("zn(1)").unwrap();
    assert_eq!(h1_both_ways(&z, &FiniteModule::trivial(&z, 2, 1).unwrap()), (1, 1));

    let c2 = preset("cyclic(2)").unwrap();
    let trivial = FiniteModule::trivial(&c2, 2, 1).unwrap();
    let regular = FiniteModule::regular(&c2, 2).unwrap();
    assert_eq!(h1_both_ways(&c2, &trivial), (1, 1));
    assert_eq!(h1_both_ways(&c2, &regular), (0, 0));

    // Independent of any presentation: functions on the permutation group.
    let perm = PermGroup::generate(vec![vec![1, 0]]);
    let (d, i) = count_derivations_by_functions(&perm, 2, 1, &rows(&trivial).0);
    assert_eq!(h1_from_counts(2, d, i), 1);
    let (d, i) = count_derivations_by_functions(&perm, 2, 2, &rows(&regular).0);
    assert_eq!(h1_from_counts(2, d, i), 0);

    for (name, p) in [("sym3", 2), ("sym3", 3), ("klein4", 2), ("cyclic(4)", 2)] {
        let g = preset(name).unwrap();
        let m = FiniteModule::trivial(&g, p, 1).unwrap();
        let (a, b) = h1_both_ways(&g, &m);
        assert_eq!(a, b, "{name} over GF({p})");
    }
}

#[test]
fn finite_presets_against_permutation_groups() {
    let s3 = PermGroup::generate(vec![vec![1, 0, 2], vec![0, 2, 1]]);
    let v4 = PermGroup::generate(vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]);
    let c4 = PermGroup::generate(vec![vec![1, 2, 3, 0]]);
    for (name, perm) in [("sym3", &s3), ("klein4", &v4), ("cyclic(4)", &c4)] {
        let g = preset(name).unwrap();
        assert_eq!(g.elements().unwrap().len(), perm.order(), "{name}");
        assert_eq!(small_subgroups(&g).unwrap().len(), perm.two_generated_subgroups().len(), "{name}");
    }
}

#[test]
fn bs_coset_ball_against_brute_force() {
    let g = preset("bs(2,3)").unwrap();
    let l = SubgroupHandle::new(&g, vec![g.parse_word("x").unwrap()]);
    for radius in 1..=3 {
        let words = ball_words(&[0, 1], radius);
        let mut classes: Vec<&Word> = Vec::new();
        for w in &words {
            let in_x = |u: &Word| bs_pinch_free(BS23, &u.inverse().mul(w)).iter().all(|&(gen, _)| gen == 0);
            if !classes.iter().any(|u| in_x(u)) {
                classes.push(w);
            }
        }
        let ball = coset_graph_ball(&l, &[0, 1], radius).unwrap();
        assert_eq!(ball.vertex_count(), classes.len(), "radius {radius}");
        assert!(ball.is_connected());
    }
}

#[test]
fn ball_edges_match_pair_scan() {
    // Every listed edge joins the cosets of g and gx for some g in the ball,
    // and every such pair within the ball is listed.
    let z2 = preset("zn(2)").unwrap();
    let l = SubgroupHandle::new(&z2, vec![z2.parse_word("u").unwrap()]);
    let ball = coset_graph_ball(&l, &[0, 1], 3).unwrap();
    let mut expected = BTreeSet::new();
    for w in ball_words(&[0, 1], 3) {
        for x in 0..2u32 {
            let gx = w.mul(&Word::generator(x));
            let v = |u: &Word| ball.vertices.iter().position(|r| l.same_left_coset(r, u).is_true());
            if let (Some(a), Some(b)) = (v(&w), v(&gx)) {
                expected.insert((a, b, x));
            }
        }
    }
    let listed: BTreeSet<_> = ball.edges.iter().map(|e| (e.from, e.to, e.generator)).collect();
    assert_eq!(listed, expected);
}
