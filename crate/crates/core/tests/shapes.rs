use proptest::prelude::*;
use vartrack::prelude::*;
use vartrack::shape::list::{any_algebra, fix_list, length_algebra, list_descriptor, sum_algebra, CONS};
use vartrack::shape::rebuild_algebra;

fn all_bool_lists(max_len: usize) -> Vec<Vec<bool>> {
    (0..=max_len)
        .flat_map(|n| (0..1u32 << n).map(move |bits| (0..n).map(|i| bits >> i & 1 == 1).collect()))
        .collect()
}

fn as_ints(xs: &[bool]) -> Vec<i64> {
    xs.iter().map(|&b| b as i64).collect()
}

#[test]
fn fix_out_then_fix_in_folds_identically() {
    for xs in all_bool_lists(3) {
        let v = fix_list(&xs);
        let back = fix_in(fix_out(&v));
        assert_eq!(mendler_fold(&any_algebra(), &back), mendler_fold(&any_algebra(), &v));
        assert_eq!(mendler_fold(&length_algebra(), &back), xs.len());
        assert_eq!(mendler_fold(&rebuild_algebra(), &v), v);
    }
}

#[test]
fn distributed_folds_match_inline_folds() {
    for xs in all_bool_lists(4) {
        let mut store = Store::new();
        let root = distribute(&mut store, &fix_list(&xs));
        assert_eq!(store.len(), xs.len() + 1);
        let desc = list_descriptor::<bool>();
        assert_eq!(
            cell_fold(&mut store, &desc, &any_algebra(), root).unwrap(),
            mendler_fold(&any_algebra(), &fix_list(&xs))
        );
        assert_eq!(
            cell_fold(&mut store, &desc, &length_algebra(), root).unwrap(),
            mendler_fold(&length_algebra(), &fix_list(&xs))
        );

        let ints = as_ints(&xs);
        let mut store = Store::new();
        let root = distribute(&mut store, &fix_list(&ints));
        assert_eq!(
            cell_fold(&mut store, &list_descriptor::<i64>(), &sum_algebra::<i64>(), root).unwrap(),
            mendler_fold(&sum_algebra::<i64>(), &fix_list(&ints))
        );
    }
}

#[test]
fn distributed_root_holds_first_cons() {
    let mut store = Store::new();
    let root = distribute(&mut store, &fix_list(&[false, true, false]));
    let top = store.peek(root).unwrap().downcast_ref::<ShapeNode<CellId>>().unwrap();
    assert_eq!(top.tag(), CONS);
    assert_eq!(top.payload_as::<bool>(0), Some(&false));
    assert_eq!(top.children(), &[CellId::from_index(2)]);
}

/// Stops at the first element >= `threshold`.
fn until_at_least(threshold: i64) -> impl MendlerAlgebra<usize> {
    move |node: ShapeNode<Slot>| match node.tag() {
        CONS if *node.payload_as::<i64>(0).unwrap() >= threshold => Step::done(0),
        CONS => Step::recurse(node.into_children().remove(0), |n| Step::done(n + 1)),
        _ => Step::done(0),
    }
}

proptest! {
    #[test]
    fn reads_are_exactly_the_recursed_slots(xs in prop::collection::vec(0i64..10, 0..30), threshold in 0i64..12) {
        let mut session = TrackingSession::new(Store::new());
        let root = distribute(&mut session, &fix_list(&xs));
        cell_fold(&mut session, &list_descriptor::<i64>(), &until_at_least(threshold), root).unwrap();
        let expected = match xs.iter().position(|&x| x >= threshold) {
            Some(k) => k + 1,
            None => xs.len() + 1,
        };
        let reads: Vec<CellId> = session.current_assignments().cells().collect();
        prop_assert_eq!(reads.len(), expected);
        // root first, then each successive tail cell
        let want: Vec<CellId> = (0..expected).map(|i| CellId::from_index(xs.len() - i)).collect();
        prop_assert_eq!(reads, want);
    }

    #[test]
    fn fold_equivalence_on_longer_lists(xs in prop::collection::vec(any::<i64>().prop_map(|x| x % 1000), 0..60)) {
        let v = fix_list(&xs);
        let mut store = Store::new();
        let root = distribute(&mut store, &v);
        prop_assert_eq!(
            cell_fold(&mut store, &list_descriptor::<i64>(), &sum_algebra::<i64>(), root).unwrap(),
            mendler_fold(&sum_algebra::<i64>(), &v)
        );
    }

    #[test]
    fn lens_laws(x in any::<i32>(), a in -50i64..50, b in -50i64..50) {
        let mut store = Store::new();
        let c = store.alloc(x as i64);
        let h = LensHandle::<i64>::typed(c);
        let f = move |v: i64| v.wrapping_mul(a);
        let g = move |v: i64| v.wrapping_add(b);
        prop_assert_eq!(lens_map(&h, |v| v).read(&mut store).unwrap(), h.read(&mut store).unwrap());
        prop_assert_eq!(
            lens_map(&lens_map(&h, f), g).read(&mut store).unwrap(),
            lens_map(&h, move |v| g(f(v))).read(&mut store).unwrap()
        );
    }
}
