use std::collections::BTreeSet;

use proptest::prelude::*;

use ghat_core::baumslag_solitar::BS23;
use ghat_core::ends::bs_edge_side;
use ghat_core::thompson::f_normal_form;
use ghat_core::{preset, ElementKey, Letter, Word};

fn word(gens: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, any::<bool>()), 0..=max_len)
        .prop_map(|v| Word::new(v.into_iter().map(|(g, inv)| Letter::new(g, inv))))
}

proptest! {
    #[test]
    fn britton_is_a_homomorphism(u in word(2, 10), v in word(2, 10)) {
        let uv = BS23.reduce(&u.mul(&v));
        prop_assert_eq!(BS23.mul(&BS23.reduce(&u), &v), uv.clone());
        prop_assert_eq!(BS23.reduce(&uv.to_word()), uv);
        prop_assert!(BS23.reduce(&u.mul(&u.inverse())).is_identity());
    }

    #[test]
    fn thompson_forms_are_canonical(u in word(5, 10), v in word(5, 10)) {
        let f = f_normal_form(&u);
        prop_assert_eq!(f_normal_form(&f.to_word()), f.clone());
        prop_assert_eq!(f.mul(&f_normal_form(&v)), f_normal_form(&u.mul(&v)));
        prop_assert!(f_normal_form(&u.mul(&u.inverse())).is_identity());
        // relators have exponent sum 0
        prop_assert_eq!(f.abelianization().0 + f.abelianization().1, u.exponent_sum());
    }

    #[test]
    fn bass_serre_side_is_right_saturated(g in word(2, 8), k in -4i64..4) {
        let l = Word::power_of(0, 2 * k);
        prop_assert_eq!(bs_edge_side(BS23, &g), bs_edge_side(BS23, &g.mul(&l)));
    }

    /// `(B + Bg)h = Bh + Bgh` for right translation on finite element sets.
    #[test]
    fn translation_distributes_over_symmetric_difference(
        b in prop::collection::vec(word(2, 4), 0..12),
        g in word(2, 3),
        h in word(2, 3),
    ) {
        let ctx = preset("bs(2,3)").unwrap();
        let key = |w: &Word| -> ElementKey { ctx.element_key(w).unwrap() };
        let translate = |set: &BTreeSet<Word>, t: &Word| -> BTreeSet<ElementKey> {
            set.iter().map(|w| key(&w.mul(t))).collect()
        };
        let set: BTreeSet<Word> = b.into_iter().collect();
        let bg: BTreeSet<Word> = set.iter().map(|w| w.mul(&g)).collect();
        let sym: BTreeSet<Word> = {
            let a: BTreeSet<ElementKey> = set.iter().map(|w| key(w)).collect();
            let c: BTreeSet<ElementKey> = bg.iter().map(|w| key(w)).collect();
            set.iter().chain(&bg).filter(|w| a.contains(&key(w)) != c.contains(&key(w))).cloned().collect()
        };
        let left = translate(&sym, &h);
        let bh = translate(&set, &h);
        let bgh = translate(&bg, &h);
        let right: BTreeSet<ElementKey> = bh.symmetric_difference(&bgh).cloned().collect();
        prop_assert_eq!(left, right);
    }
}
