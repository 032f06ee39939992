use ghat_core::baumslag_solitar::BS23;
use ghat_core::oracles::{bs_agreement, thompson_agreement};

#[test]
fn thompson_engine_matches_rewriting() {
    let r = thompson_agreement(8, 4);
    assert!(r.pass(), "{:?}", r.mismatches);
    eprintln!("{} words", r.words);
}

#[test]
fn britton_matches_pinch_removal() {
    let r = bs_agreement(BS23, 8, 4);
    assert!(r.pass(), "{:?}", r.mismatches);
}
