//! Verification suites. Every suite is deterministic for a given seed.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use ghat_core::baumslag_solitar::{Bs, BS23};
use ghat_core::completion::{check_laws, invertibility_scan, profinite_compare, MultiplicationTable};
use ghat_core::ends::{
    boundary_check, boundary_edges, bs_edge_side, coset_graph_ball, double_coset, double_coset_membership,
    ends_estimate,
};
use ghat_core::families::{check_admissible, check_stable, derivation_value, h0_s, h1_derivations, named_family};
use ghat_core::groups::{parse_presentation, serialize_presentation, todd_coxeter};
use ghat_core::subgroups::{
    in_commensurator, index_bounded, is_commensurable, near_normal_on, neumann_translate, CosetSet, Side,
};
use ghat_core::thompson::{
    a_generator, a_membership, am_in_conjugate_intersection, f_normal_form, generators_commute,
    verify_conjugation_identity, verify_shift,
};
use ghat_core::words::{ball_words, parse_word};
use ghat_core::{
    preset, Error, FiniteModule, GroupContext, Index, Letter, Result, SubgroupHandle, TruncatedCompletion, Truth,
    VertexSet, Word,
};

use crate::report::{Checks, Outcome, RunReport};

pub const SUITES: [&str; 8] = ["words", "groups", "subgroups", "families", "completion", "ends", "thompson", "bs"];

/// Completion fixtures: group preset and named family.
pub const COMPLETION_FIXTURES: [(&str, &str); 4] =
    [("sym3", "normal-order3"), ("sym3", "all"), ("cyclic(4)", "order2"), ("klein4", "all")];

/// Fixtures whose nodes are all normal.
pub const NORMAL_FIXTURES: [(&str, &str); 5] =
    [("sym3", "normal-order3"), ("sym3", "whole"), ("cyclic(4)", "order2"), ("cyclic(4)", "all"), ("klein4", "all")];

pub const DEFAULT_RADII: [usize; 4] = [2, 4, 6, 8];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random samples per randomized check.
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, samples: 200 }
    }
}

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<RunReport> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    let mut checks = Checks::new();
    for n in names {
        // Each suite draws from its own stream so adding checks elsewhere
        // does not shift its samples.
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(SUITES.iter().position(|s| *s == n).unwrap() as u64);
        let c = match n {
            "words" => words_suite(config, &mut rng),
            "groups" => groups_suite(config, &mut rng),
            "subgroups" => subgroups_suite(),
            "families" => families_suite(),
            "completion" => completion_suite(),
            "ends" => ends_suite(),
            "thompson" => thompson_suite(config, &mut rng),
            "bs" => bs_suite(config, &mut rng),
            _ => unreachable!(),
        };
        checks.extend(c?);
    }
    Ok(RunReport::new(name, config.seed, checks.into_records()))
}

fn random_word(rng: &mut ChaCha8Rng, gens: u32, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::new((0..len).map(|_| Letter::new(rng.gen_range(0..gens), rng.gen_bool(0.5))))
}

pub fn sub(ctx: &Arc<GroupContext>, gens: &[&str]) -> Result<SubgroupHandle> {
    let words = gens.iter().map(|g| ctx.parse_word(g)).collect::<Result<Vec<_>>>()?;
    Ok(SubgroupHandle::new(ctx, words))
}

fn words_suite(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Checks> {
    let mut c = Checks::new();
    let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    let text = "a b^-1 (a b)^2 c";
    let w = parse_word(text, &names)?;
    let shown = w.display_with(Some(&names)).to_string();
    c.check("words.parse.round-trip", "parsing", json!({ "word": text }), parse_word(&shown, &names)? == w, || {
        format!("re-parse of `{shown}` differs")
    });
    let w = parse_word("a a^-1 b", &names)?;
    c.check("words.reduce.cancel", "reduction", json!({ "word": "a a^-1 b" }), w == Word::generator(1), || {
        format!("got {w}")
    });
    let count = ball_words(&[0, 1], 3).len();
    c.check("words.ball.size", "enumeration", json!({ "generators": 2, "radius": 3 }), count == 53, || {
        format!("{count} words")
    });

    let mut bad = None;
    for _ in 0..config.samples {
        let (u, v, x) = (random_word(rng, 3, 12), random_word(rng, 3, 12), random_word(rng, 3, 12));
        let ok = u.mul(&u.inverse()).is_empty()
            && u.mul(&v).inverse() == v.inverse().mul(&u.inverse())
            && u.mul(&v).mul(&x) == u.mul(&v.mul(&x))
            && u.letters().windows(2).all(|p| p[0] != p[1].inv());
        if !ok && bad.is_none() {
            bad = Some(format!("u = {u}, v = {v}, w = {x}"));
        }
    }
    let inputs = json!({ "samples": config.samples, "seed": config.seed, "max_len": 12 });
    c.check("words.random.group-laws", "free group laws", inputs, bad.is_none(), || bad.clone().unwrap());
    Ok(c)
}

fn groups_suite(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Checks> {
    let mut c = Checks::new();
    for (name, order) in [("sym3", 6), ("klein4", 4), ("cyclic(4)", 4), ("cyclic(6)", 6)] {
        let got = preset(name)?.elements().map(|e| e.len());
        c.check(
            format!("groups.order.{name}"),
            "coset enumeration",
            json!({ "group": name }),
            got == Some(order),
            || format!("expected {order}, got {got:?}"),
        );
    }
    let s3 = preset("sym3")?;
    let a = s3.parse_word("a")?;
    let t = todd_coxeter(&s3.presentation, &[a], 1000)?;
    c.check("groups.todd-coxeter.sym3-a", "coset enumeration", json!({ "subgroup": "<a>" }), t.count() == 3, || {
        format!("{} cosets", t.count())
    });

    let bs = preset("bs(2,3)")?;
    let x = bs.parse_word("x")?;
    let r = todd_coxeter(&bs.presentation, &[x], 10_000);
    c.check(
        "groups.todd-coxeter.bs23-x-incomplete",
        "coset enumeration",
        json!({ "subgroup": "<x>", "limit": 10_000 }),
        matches!(r, Err(Error::Incomplete { limit: 10_000 })),
        || format!("{r:?}"),
    );

    let text = "gens: a b\nrels: a^2 b^2 (a b)^3";
    let parsed = parse_presentation(text);
    let ok = match &parsed {
        Ok((p, o)) => {
            p.generator_count() == Some(2)
                && p.relators.len() == 3
                && parse_presentation(&serialize_presentation(p, o)).ok().as_ref() == Some(&(p.clone(), *o))
        }
        Err(_) => false,
    };
    c.check("groups.parse.sym3-text", "presentations", json!({ "text": text }), ok, || format!("{parsed:?}"));
    let free = parse_presentation("gens: a b\nrels:");
    c.check(
        "groups.parse.empty-rels",
        "presentations",
        json!({ "text": "gens: a b\nrels:" }),
        free.as_ref().is_ok_and(|(p, _)| p.relators.is_empty()),
        || format!("{free:?}"),
    );
    let early = parse_presentation("rels: a^2\ngens: a");
    c.check(
        "groups.parse.rels-before-gens",
        "presentations",
        json!({ "text": "rels: a^2\ngens: a" }),
        matches!(early, Err(Error::Parse { .. })),
        || format!("{early:?}"),
    );

    let rel = bs.equal(&bs.parse_word("y^-1 x^2 y")?, &bs.parse_word("x^3")?);
    c.truth("groups.britton.relation", "word problem", json!({ "lhs": "y^-1 x^2 y", "rhs": "x^3" }), rel, Truth::True);

    // Table and oracle agree on random words.
    let table = s3.regular_table().ok_or(Error::NeedsFinitePresentation)?;
    let mut bad = None;
    for _ in 0..config.samples {
        let (u, v) = (random_word(rng, 2, 10), random_word(rng, 2, 10));
        let same_coset = table.coset_of(&u) == table.coset_of(&v);
        if same_coset != s3.equal(&u, &v).is_true() && bad.is_none() {
            bad = Some(format!("{} vs {}", s3.show(&u), s3.show(&v)));
        }
    }
    let inputs = json!({ "group": "sym3", "samples": config.samples, "seed": config.seed });
    c.check("groups.random.table-consistency", "word problem", inputs, bad.is_none(), || bad.clone().unwrap());
    Ok(c)
}

fn subgroups_suite() -> Result<Checks> {
    let mut c = Checks::new();
    let bound = 50;
    let z = preset("zn(1)")?;
    let z2 = preset("zn(2)")?;
    let bs = preset("bs(2,3)")?;
    let f2 = preset("free(2)")?;
    let s3 = preset("sym3")?;

    let r = is_commensurable(&sub(&z, &["t^2"])?, &sub(&z, &["t^3"])?, bound)?;
    c.check(
        "subgroups.commensurable.zn1-t2-t3",
        "commensurability",
        json!({ "h": "t^2", "k": "t^3", "bound": bound }),
        r.result == Truth::True && r.indices == [Index::Finite(3), Index::Finite(2)],
        || format!("{:?} {:?}", r.result, r.indices),
    );
    let r = is_commensurable(&sub(&z2, &["u"])?, &sub(&z2, &["v"])?, bound)?;
    c.truth(
        "subgroups.commensurable.zn2-u-v",
        "commensurability",
        json!({ "h": "u", "k": "v" }),
        r.result,
        Truth::False,
    );
    let r = is_commensurable(&sub(&bs, &["x"])?, &sub(&bs, &["y^-1 x y"])?, bound)?;
    c.truth(
        "subgroups.commensurable.bs23-x-conjugate",
        "commensurability",
        json!({ "h": "x", "k": "y^-1 x y", "bound": bound }),
        r.result,
        Truth::True,
    );
    let gens = vec![bs.parse_word("x")?, bs.parse_word("y")?];
    let r = near_normal_on(&sub(&bs, &["x"])?, &gens, bound)?;
    c.truth(
        "subgroups.near-normal.bs23-x",
        "commensurator",
        json!({ "h": "x", "on": ["x", "y"] }),
        r.result,
        Truth::True,
    );
    let t = in_commensurator(&sub(&f2, &["a"])?, &f2.parse_word("b")?, bound)?;
    c.truth("subgroups.commensurator.free2-a-b", "commensurator", json!({ "h": "a", "g": "b" }), t, Truth::False);

    let whole = SubgroupHandle::whole(&s3);
    let a = sub(&s3, &["a"])?;
    let trivial = SubgroupHandle::trivial(&s3);
    let (i1, i2, i3) =
        (index_bounded(&trivial, &a, 100)?, index_bounded(&a, &whole, 100)?, index_bounded(&trivial, &whole, 100)?);
    let ok = matches!((i1, i2, i3), (Index::Finite(x), Index::Finite(y), Index::Finite(z)) if x * y == z);
    c.check("subgroups.index.multiplicative-sym3", "index", json!({ "chain": ["1", "<a>", "sym3"] }), ok, || {
        format!("{i1} * {i2} vs {i3}")
    });

    for (id, ctx, base, reps, radius) in [
        ("subgroups.neumann.zn2", &z2, "u", vec!["1", "v"], 3),
        ("subgroups.neumann.bs23", &bs, "x", vec!["1", "y"], 4),
    ] {
        let words = reps.iter().map(|r| ctx.parse_word(r)).collect::<Result<Vec<_>>>()?;
        let x = CosetSet::new(sub(ctx, &[base])?, words, Side::Right)?;
        let inputs = json!({ "subgroup": base, "representatives": reps, "radius": radius });
        match neumann_translate(&x, radius)? {
            Some(g) => {
                // Re-check through coset equality rather than membership.
                let disjoint = x
                    .representatives
                    .iter()
                    .all(|ti| x.representatives.iter().all(|tj| x.base.same_right_coset(&ti.mul(&g), tj).is_false()));
                c.check(id, "translation", inputs, disjoint, || format!("{} fails the re-check", ctx.show(&g)));
            }
            None => c.push(id, "translation", inputs, Outcome::Fail, Some("no translate found".into())),
        }
    }
    let all = CosetSet::new(trivial, s3.elements().unwrap_or_default(), Side::Right)?;
    let found = neumann_translate(&all, 4)?;
    c.check("subgroups.neumann.sym3-whole", "translation", json!({ "radius": 4 }), found.is_none(), || {
        format!("unexpected translate {}", s3.show(found.as_ref().unwrap()))
    });
    Ok(c)
}

fn families_suite() -> Result<Checks> {
    let mut c = Checks::new();
    let mut fixtures: Vec<(&str, &str)> = COMPLETION_FIXTURES.to_vec();
    fixtures.extend([("cyclic(4)", "all"), ("sym3", "whole")]);
    for (g, f) in &fixtures {
        let ctx = preset(g)?;
        let fam = named_family(&ctx, f)?;
        let inputs = json!({ "group": g, "family": f });
        let adm = check_admissible(&fam);
        c.check(format!("families.admissible.{g}.{f}"), "admissibility", inputs.clone(), adm.admissible(), || {
            adm.violations.join("; ")
        });
        let st = check_stable(&fam);
        c.check(format!("families.stable.{g}.{f}"), "stability", inputs.clone(), st.stable, || {
            format!("{:?}", st.failure)
        });
        for (p, kind) in [(2, "regular"), (3, "regular"), (2, "trivial")] {
            let m =
                if kind == "regular" { FiniteModule::regular(&ctx, p)? } else { FiniteModule::trivial(&ctx, p, 2)? };
            let (_, report) = h0_s(&m, &fam)?;
            let mut inputs = inputs.clone();
            inputs["module"] = json!(format!("{kind} GF({p})"));
            c.check(
                format!("families.h0-invariant.{g}.{f}.{kind}-{p}"),
                "fixed points",
                inputs,
                report.invariant,
                || format!("fixed space of dimension {} is not invariant", report.dim),
            );
        }
    }
    let r = check_admissible(&named_family(&preset("sym3")?, "order2-whole")?);
    c.check(
        "families.not-directed.sym3.order2-whole",
        "admissibility",
        json!({ "group": "sym3", "family": "order2-whole" }),
        r.conjugation_closed && !r.downward_directed,
        || format!("{r:?}"),
    );

    for (g, kind, p, expected) in [
        ("zn(1)", "trivial", 2, 1),
        ("cyclic(2)", "trivial", 2, 1),
        ("cyclic(2)", "regular", 2, 0),
        ("klein4", "trivial", 2, 2),
    ] {
        let ctx = preset(g)?;
        let m = if kind == "regular" { FiniteModule::regular(&ctx, p)? } else { FiniteModule::trivial(&ctx, p, 1)? };
        let h1 = h1_derivations(&ctx, &m)?;
        // Every basis derivation must vanish on every relator.
        let vanish = h1.basis.iter().all(|values| {
            ctx.presentation.relators.iter().all(|r| derivation_value(&m, values, r).iter().all(|&x| x == 0))
        });
        c.check(
            format!("families.h1.{g}.{kind}-{p}"),
            "derivations",
            json!({ "group": g, "module": format!("{kind} GF({p})"), "expected": expected }),
            h1.h1 == expected && vanish,
            || format!("dim H1 = {} (der {}, inner {}), relators vanish: {vanish}", h1.h1, h1.der, h1.ider),
        );
    }
    Ok(c)
}

pub fn completion_fixture(group: &str, family: &str) -> Result<(TruncatedCompletion, MultiplicationTable, Vec<Word>)> {
    let ctx = preset(group)?;
    let fam = Arc::new(named_family(&ctx, family)?);
    let tc = TruncatedCompletion::new(fam)?;
    let elements = tc.enumerate(ghat_core::completion::DEFAULT_CEILING)?;
    let table = MultiplicationTable::build(&tc, elements)?;
    let group_elements = ctx.elements().ok_or(Error::NeedsFinitePresentation)?;
    Ok((tc, table, group_elements))
}

fn completion_suite() -> Result<Checks> {
    let mut c = Checks::new();
    for (g, f) in COMPLETION_FIXTURES {
        let (tc, table, elements) = completion_fixture(g, f)?;
        let stable = check_stable(tc.family()).stable;
        let laws = check_laws(&tc, &table, &elements, stable)?;
        let inputs = json!({ "group": g, "family": f, "elements": table.len(), "stable": stable });
        let fail = |name: &str| {
            let hits: Vec<&String> = laws.failures.iter().filter(|s| s.contains(name)).take(3).collect();
            format!("{hits:?}")
        };
        let id = |law: &str| format!("completion.{law}.{g}.{f}");
        c.check(id("associativity"), "monoid laws", inputs.clone(), laws.associativity, || fail("associativity"));
        c.check(id("identity"), "monoid laws", inputs.clone(), laws.identity, || fail("identity"));
        c.check(id("homomorphism"), "embedding", inputs.clone(), laws.homomorphism, || fail("embedding"));
        c.check(id("conjugation-cocycle"), "conjugation", inputs.clone(), laws.conjugation_cocycle, || fail("cocycle"));
        let optional = [
            ("inverses", laws.inverses, "inverse"),
            ("inverse-condition", laws.inverse_condition, "inverse condition"),
            ("inverse-antihomomorphism", laws.inverse_antihomomorphism, "(fg)^-1"),
        ];
        for (law, value, key) in optional {
            match value {
                Some(ok) => c.check(id(law), "inverses", inputs.clone(), ok, || fail(key)),
                None => {
                    c.push(id(law), "inverses", inputs.clone(), Outcome::Unknown, Some("family is not stable".into()))
                }
            }
        }
        let scan = invertibility_scan(&table);
        c.check(
            id("scan"),
            "invertibility",
            json!({ "group": g, "family": f, "total": scan.total }),
            scan.invertible == scan.total,
            || format!("{} of {} invertible", scan.invertible, scan.total),
        );
    }
    for (g, f) in NORMAL_FIXTURES {
        let (tc, table, _) = completion_fixture(g, f)?;
        let r = profinite_compare(&tc, &table)?;
        c.check(
            format!("completion.profinite.{g}.{f}"),
            "inverse limit",
            json!({ "group": g, "family": f, "completion_order": r.completion_order, "limit_order": r.limit_order }),
            r.isomorphic,
            || format!("{r:?}"),
        );
    }
    Ok(c)
}

fn ends_suite() -> Result<Checks> {
    let mut c = Checks::new();
    let z = preset("zn(1)")?;
    let z2 = preset("zn(2)")?;
    let bs = preset("bs(2,3)")?;

    let ball = coset_graph_ball(&SubgroupHandle::trivial(&z), &[0], 3)?;
    c.check(
        "ends.ball.path",
        "coset graph",
        json!({ "group": "zn(1)", "radius": 3 }),
        ball.vertex_count() == 7 && ball.is_connected(),
        || format!("{} vertices", ball.vertex_count()),
    );
    let ball = coset_graph_ball(&sub(&z2, &["u"])?, &[0, 1], 2)?;
    c.check(
        "ends.ball.zn2-u",
        "coset graph",
        json!({ "group": "zn(2)", "l": "u", "radius": 2 }),
        ball.vertex_count() == 5,
        || format!("{} vertices", ball.vertex_count()),
    );

    let radii: Vec<usize> = (1..=20).collect();
    let e = ends_estimate(&SubgroupHandle::trivial(&z), &[0], &radii)?;
    c.check(
        "ends.estimate.zn1-trivial",
        "ends",
        json!({ "radii": radii, "estimate": e.estimate, "stable_from": e.stable_from }),
        e.estimate == 2 && e.stable_from.is_some_and(|r| r <= 3) && e.counts.iter().all(|a| a.components == 2),
        || format!("{:?}", e.counts),
    );
    for (id, l, expected) in [("ends.estimate.zn2-trivial", vec![], 1), ("ends.estimate.zn2-u", vec!["u"], 2)] {
        let e = ends_estimate(&sub(&z2, &l)?, &[0, 1], &DEFAULT_RADII)?;
        c.check(
            id,
            "ends",
            json!({ "l": l, "radii": DEFAULT_RADII, "estimate": e.estimate }),
            e.estimate == expected && e.stabilized,
            || format!("{:?}", e.counts),
        );
    }
    let l = sub(&bs, &["x^2"])?;
    let e = ends_estimate(&l, &[0, 1], &DEFAULT_RADII)?;
    c.check(
        "ends.estimate.bs23-x2",
        "ends",
        json!({ "l": "x^2", "radii": DEFAULT_RADII, "estimate": e.estimate }),
        e.estimate >= 2,
        || format!("{:?}", e.counts),
    );

    let ball = coset_graph_ball(&l, &[0, 1], *DEFAULT_RADII.last().unwrap())?;
    let side = boundary_check(&ball, |w| bs_edge_side(BS23, w));
    c.check(
        "ends.boundary-finite.bs23-x2-side",
        "boundary",
        json!({ "l": "x^2", "radius": ball.radius, "boundary_counts": side.boundary_counts, "y_sizes": side.y_sizes }),
        side.bounded && side.contained_in_y && side.saturated,
        || format!("{side:?}"),
    );
    let ball = coset_graph_ball(&sub(&z2, &["u"])?, &[0, 1], 6)?;
    let half = boundary_check(&ball, |w| w.exponent_vector(2)[1] > 0);
    c.check(
        "ends.boundary-finite.zn2-half",
        "boundary",
        json!({ "l": "u", "radius": 6 }),
        half.contained_in_y && half.boundary_counts.iter().all(|&n| n == 1) && half.y_sizes.iter().all(|&n| n == 2),
        || format!("{half:?}"),
    );
    let everything = boundary_check(&ball, |_| true);
    c.check(
        "ends.boundary-finite.everything",
        "boundary",
        json!({ "l": "u", "radius": 6 }),
        everything.contained_in_y && everything.boundary_counts.iter().all(|&n| n == 0),
        || format!("{everything:?}"),
    );
    let b = VertexSet::from_predicate(&ball, |w| w.exponent_vector(2)[1] > 0);
    let (e1, e2) = (boundary_edges(&b, &ball), boundary_edges(&b.complement(&ball), &ball));
    c.check(
        "ends.boundary.complement",
        "boundary",
        json!({ "l": "u", "radius": 6 }),
        e1 == e2 && e1.len() == 1,
        || format!("{} vs {} edges", e1.len(), e2.len()),
    );

    let s3 = preset("sym3")?;
    let h = sub(&s3, &["a"])?;
    let bword = s3.parse_word("b")?;
    let one = CosetSet::new(h.clone(), vec![Word::identity()], Side::Left)?;
    let single = CosetSet::new(h.clone(), vec![bword.clone()], Side::Left)?;
    let full = double_coset(&h, &bword, 100)?;
    for (id, set, expected) in [
        ("ends.double-coset.subgroup", &one, Truth::True),
        ("ends.double-coset.single-coset", &single, Truth::False),
        ("ends.double-coset.closure", &full, Truth::True),
    ] {
        let reps: Vec<String> = set.representatives.iter().map(|r| s3.show(r)).collect();
        c.truth(id, "double cosets", json!({ "h": "a", "cosets": reps }), double_coset_membership(set, 3), expected);
    }
    Ok(c)
}

/// Conjugators for the shift and intersection grids.
pub const SHIFT_CONJUGATORS: [&str; 5] = ["x0^2", "x0^-2", "x0 x1", "x1 x0^-1", "x0^2 x1^-2"];

fn thompson_suite(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Checks> {
    let mut c = Checks::new();
    let f = preset("thompson-f")?;
    let w = |s: &str| f.parse_word(s);

    let examples = [
        ("thompson.relation", "x0^-1 x1 x0", "x2"),
        ("thompson.rearranged", "x1 x0", "x0 x2"),
        ("thompson.conjugation-example", "x0^-1 x3 x2^-1 x0", "x4 x3^-1"),
        ("thompson.commutator-example", "(x1 x0^-1)^-1 (x3 x2^-1)^-1 (x1 x0^-1) (x3 x2^-1)", "1"),
    ];
    for (id, lhs, rhs) in examples {
        let ok = f_normal_form(&w(lhs)?) == f_normal_form(&w(rhs)?);
        c.check(id, "normal form", json!({ "lhs": lhs, "rhs": rhs }), ok, || {
            format!("{} vs {}", f_normal_form(&w(lhs).unwrap()), f_normal_form(&w(rhs).unwrap()))
        });
    }

    let failures: Vec<String> = (0..10u32)
        .flat_map(|n| (0..n).map(move |m| (m, n)))
        .filter(|&(m, n)| !verify_conjugation_identity(m, n))
        .map(|p| format!("{p:?}"))
        .collect();
    c.check(
        "thompson.grid.conjugation",
        "identity grid",
        json!({ "max_n": 10, "pairs": 55 }),
        failures.is_empty(),
        || failures.join(", "),
    );
    let failures: Vec<String> = (0..=12u32)
        .flat_map(|n| (0..n).map(move |m| (m, n)))
        .filter(|&(m, n)| !generators_commute(m, n))
        .map(|p| format!("{p:?}"))
        .collect();
    c.check("thompson.grid.commutation", "identity grid", json!({ "max_index": 12 }), failures.is_empty(), || {
        failures.join(", ")
    });

    for g in SHIFT_CONJUGATORS {
        let word = w(g)?;
        let r = verify_shift(&word, 0..=20);
        c.check(
            format!("thompson.shift.{g}"),
            "shift",
            json!({ "g": g, "n_max": 20, "j": r.j, "threshold": r.threshold }),
            r.all_pass && r.j == word.exponent_sum(),
            || format!("{r:?}"),
        );
        let inputs = json!({ "g": g, "m_bound": 32 });
        match am_in_conjugate_intersection(&[word], 32) {
            Ok(rep) => c.push(
                format!("thompson.am-intersection.{g}"),
                "conjugate intersection",
                inputs,
                Outcome::Pass,
                Some(format!("m = {}", rep.m)),
            ),
            Err(e) => c.error(format!("thompson.am-intersection.{g}"), "conjugate intersection", inputs, &e),
        }
    }

    for (id, word, expected) in [
        ("thompson.a-membership.generator", "x1 x0^-1", Truth::True),
        ("thompson.a-membership.product", "x3 x2^-1 x1 x0^-1", Truth::True),
        ("thompson.a-membership.x0", "x0", Truth::False),
    ] {
        c.truth(id, "membership", json!({ "word": word }), a_membership(&w(word)?, 16), expected);
    }

    // No nontrivial product of a_0..a_5 with exponents in [-2, 2] is trivial.
    let mut bad = None;
    let mut exps = [-2i64; 6];
    loop {
        if exps.iter().any(|&e| e != 0) {
            let prod =
                exps.iter().enumerate().fold(Word::identity(), |acc, (n, &e)| acc.mul(&a_generator(n as u32).pow(e)));
            if f_normal_form(&prod).is_identity() {
                bad = Some(format!("{exps:?}"));
                break;
            }
        }
        let Some(i) = exps.iter().position(|&e| e < 2) else { break };
        exps[i] += 1;
        for e in &mut exps[..i] {
            *e = -2;
        }
    }
    c.check(
        "thompson.free-abelian",
        "identity grid",
        json!({ "generators": 6, "max_exponent": 2 }),
        bad.is_none(),
        || bad.clone().unwrap(),
    );

    let mut bad = None;
    for _ in 0..config.samples {
        let (u, v) = (random_word(rng, 5, 10), random_word(rng, 5, 10));
        let ok = f_normal_form(&u).mul(&f_normal_form(&v)) == f_normal_form(&u.mul(&v))
            && f_normal_form(&f_normal_form(&u).to_word()) == f_normal_form(&u);
        if !ok && bad.is_none() {
            bad = Some(format!("{u}, {v}"));
        }
    }
    let inputs = json!({ "samples": config.samples, "seed": config.seed });
    c.check("thompson.random.multiplicative", "normal form", inputs, bad.is_none(), || bad.clone().unwrap());
    Ok(c)
}

fn bs_suite(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Checks> {
    let mut c = Checks::new();
    let ctx = preset("bs(2,3)")?;
    let w = |s: &str| ctx.parse_word(s);
    for (id, input, expected) in [
        ("bs.britton.relation", "y^-1 x^2 y", "x^3"),
        ("bs.britton.backwards", "y x^3 y^-1", "x^2"),
        ("bs.britton.pinch-free", "y^-1 x y", "y^-1 x y"),
    ] {
        let form = BS23.reduce(&w(input)?);
        c.check(
            id,
            "normal form",
            json!({ "word": input, "expected": expected }),
            form.to_string() == expected,
            || format!("got {form}"),
        );
    }
    for (g, expected) in [("y", (2, 3)), ("y^-1", (3, 2)), ("y^2", (4, 9))] {
        let got = BS23.power_conjugate(&w(g)?, 100);
        c.check(
            format!("bs.power-conjugate.{g}"),
            "power conjugates",
            json!({ "g": g, "expected": expected }),
            got == Some(expected),
            || format!("got {got:?}"),
        );
        let (a, _) = got.unwrap_or((1, 0));
        let x_a = Word::power_of(0, a);
        let back = x_a.conjugate(&w(g)?).conjugate(&w(g)?.inverse());
        c.check(
            format!("bs.power-conjugate.round-trip.{g}"),
            "power conjugates",
            json!({ "g": g, "a": a }),
            BS23.reduce(&back) == BS23.reduce(&x_a),
            || format!("{}", BS23.reduce(&back)),
        );
    }
    let gens = vec![w("x")?, w("y")?];
    let r = near_normal_on(&sub(&ctx, &["x"])?, &gens, 50)?;
    c.truth("bs.near-normal.x", "commensurator", json!({ "h": "x", "on": ["x", "y"] }), r.result, Truth::True);
    let report = family_report(BS23, 12)?;
    c.check(
        "bs.family.bound-12",
        "family axioms",
        json!({ "bound": 12, "conjugators": ["y", "y^-1"], "members": report.members }),
        report.pass,
        || report.failures.iter().take(3).cloned().collect::<Vec<_>>().join("; "),
    );
    let r = todd_coxeter(&ctx.presentation, &[w("x")?], 10_000);
    c.check(
        "bs.todd-coxeter.x-incomplete",
        "coset enumeration",
        json!({ "subgroup": "<x>", "limit": 10_000 }),
        matches!(r, Err(Error::Incomplete { .. })),
        || format!("{r:?}"),
    );
    let finite = (1..=100).filter(|&k| BS23.reduce(&Word::power_of(0, k)).is_identity()).collect::<Vec<_>>();
    c.check("bs.x-infinite-order", "normal form", json!({ "max_power": 100 }), finite.is_empty(), || {
        format!("x^{finite:?} trivial")
    });

    let mut bad = None;
    for _ in 0..config.samples {
        let (u, v) = (random_word(rng, 2, 12), random_word(rng, 2, 12));
        let uv = BS23.reduce(&u.mul(&v));
        if (BS23.mul(&BS23.reduce(&u), &v) != uv || BS23.reduce(&uv.to_word()) != uv) && bad.is_none() {
            bad = Some(format!("{}, {}", ctx.show(&u), ctx.show(&v)));
        }
    }
    let inputs = json!({ "samples": config.samples, "seed": config.seed });
    c.check("bs.random.multiplicative", "normal form", inputs, bad.is_none(), || bad.clone().unwrap());
    Ok(c)
}

/// Family axioms for `<x^a>` conjugated by `y` and `y^-1`.
pub fn family_report(bs: Bs, bound: i64) -> Result<ghat_core::baumslag_solitar::FamilyAxiomReport> {
    let names = ghat_core::baumslag_solitar::bs_names();
    let conj = vec![parse_word("y", &names)?, parse_word("y^-1", &names)?];
    Ok(bs.family_axiom_check(&conj, bound))
}
