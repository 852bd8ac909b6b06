use tkc_core::families::{example, family_kn, family_ras, family_torus, ExampleName};
use tkc_core::invariants::{bounds, BarParity};
use tkc_core::moves::{arc_shift_sites, MoveKind};
use tkc_core::search::{certify, unknotting_search, CountedSet, SearchConfig, SearchOutcome};
use tkc_core::*;

#[test]
fn kn_arc_shift_sites_equal_passages() {
    for n in 1..=3 {
        let c = family_kn(n).unwrap().code;
        assert_eq!(arc_shift_sites(&c).len(), c.passage_positions().len());
    }
}

#[test]
fn kn_one_is_unknotted_by_one_arc_shift() {
    let f = family_kn(1).unwrap();
    let r = unknotting_search(&f.code, &SearchConfig::new(CountedSet::ArcShift, 1));
    let t = r.trace().unwrap();
    assert_eq!((t.counted_used, t.terminal), (1, TrivialKind::NoBar));
    assert!(t.steps.iter().filter(|s| s.counted).all(|s| {
        let m: MoveInstance = s.mv.parse().unwrap();
        m.kind.is_arc_shift()
    }));
}

#[test]
fn one_arc_shift_clears_a_block() {
    for n in 2..=3 {
        let c = family_kn(n).unwrap().code;
        let cleared = enumerate_moves(&c, &MoveKind::ARC_SHIFT)
            .iter()
            .map(|m| reduce(&apply(&c, m).unwrap(), SearchConfig::DEFAULT_FREE_BUDGET))
            .any(|r| r.chord_count() == 3 * (n as usize - 1));
        assert!(cleared, "n={n}");
    }
}

#[test]
fn torus_terminals_follow_bars() {
    for n in 1..=2 {
        for (barred, kind) in [(false, TrivialKind::NoBar), (true, TrivialKind::OneBar)] {
            let f = family_torus(n, barred).unwrap();
            let r = unknotting_search(&f.code, &SearchConfig::new(CountedSet::ArcShift, n));
            assert_eq!(r.trace().unwrap().terminal, kind, "n={n} barred={barred}");
            let short = unknotting_search(&f.code, &SearchConfig::new(CountedSet::ArcShift, n - 1));
            assert_eq!(short.outcome, SearchOutcome::NoSequence);
        }
    }
}

#[test]
fn certify_examples() {
    let c = certify(&family_kn(2).unwrap().code, &SearchConfig::new(CountedSet::ArcShift, 2)).unwrap();
    assert_eq!((c.arcshift.lower, c.arcshift.upper, c.arcshift.exact), (2, Some(2), true));
    let c = certify(&family_torus(1, true).unwrap().code, &SearchConfig::new(CountedSet::ArcShift, 1)).unwrap();
    assert!(c.arcshift.exact);
    assert_eq!(c.arcshift.upper, Some(1));
    assert_eq!(c.region_arcshift.upper, c.forbidden.upper);
}

#[test]
fn kn_bounds() {
    let b = bounds(&family_kn(3).unwrap().code);
    assert_eq!((b.odd_writhe, b.arcshift_lower, b.forbidden_lower), (6, 3, 2));
    assert_eq!(b.bar_parity, BarParity::Even);
    let b = bounds(&family_torus(4, true).unwrap().code);
    assert_eq!((b.forbidden_lower, b.bar_parity), (4, BarParity::Odd));
}

#[test]
fn ras_family_needs_forbidden_moves() {
    let f = family_ras(1).unwrap();
    assert_eq!(f.expected_j, 0);
    let r = unknotting_search(&f.code, &SearchConfig::new(CountedSet::Forbidden, 2));
    let t = r.trace().unwrap();
    assert_eq!(t.counted_used, 2);
    assert!(t.replay(CountedSet::Forbidden).is_ok());
}

#[test]
fn examples_are_nontrivial() {
    let f11 = example(ExampleName::RegionFig11);
    assert_eq!(is_trivial(&f11.code), None);
    let r = unknotting_search(&f11.code, &SearchConfig::new(CountedSet::Forbidden, 1));
    assert_eq!(r.trace().unwrap().counted_used, 1);
    let f17 = example(ExampleName::StrictIneqFig17);
    assert_eq!(bounds(&f17.code).bar_parity, BarParity::Odd);
    assert_eq!(f17.forbidden_number, Some(2));
    assert_eq!(f17.region_arcshift_upper, Some(1));
    let t = unknotting_search(&f17.code, &SearchConfig::new(CountedSet::Forbidden, 2));
    assert_eq!(t.trace().unwrap().terminal, TrivialKind::OneBar);
}

#[test]
fn counted_sets_partition_kinds() {
    for k in MoveKind::ALL {
        let in_sets = CountedSet::ArcShift.contains(k) as u8 + CountedSet::Forbidden.contains(k) as u8;
        assert_eq!(in_sets, u8::from(!k.is_free()), "{k}");
    }
}
