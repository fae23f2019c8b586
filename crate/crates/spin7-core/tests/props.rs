//! Property tests for the algebraic laws the types promise.

use proptest::prelude::*;

use spin7_core::basis::{content, label_count, seq_class_key, Seq};
use spin7_core::exprlang::{eval, parse, print, Mode, OpExpr, VirtualGen};
use spin7_core::functors::{named_op, Generator};
use spin7_core::zmod::{apply, matrix_of, ZVec};

fn arb_seq(n: usize) -> impl Strategy<Value = Seq> {
    (0..label_count(n)).prop_map(move |k| Seq::unrank(n, k).unwrap())
}

fn arb_zvec(n: usize) -> impl Strategy<Value = ZVec> {
    prop::collection::vec((0..label_count(n), -6i64..=6), 0..8).prop_map(move |terms| {
        ZVec::from_terms(
            n,
            terms.into_iter().map(|(k, c)| (Seq::unrank(n, k).unwrap(), c)),
        )
        .unwrap()
    })
}

fn arb_generator() -> impl Strategy<Value = Generator> {
    prop::sample::select(Generator::ALL.to_vec())
}

fn arb_expr(mode: Mode) -> impl Strategy<Value = OpExpr> {
    let atom = arb_generator().prop_map(OpExpr::Atom);
    let leaf: BoxedStrategy<OpExpr> = match mode {
        Mode::Strict => atom.boxed(),
        Mode::Virtual => prop_oneof![
            atom,
            prop::sample::select(VirtualGen::ALL.to_vec()).prop_map(OpExpr::Virtual),
        ]
        .boxed(),
    };
    leaf.prop_recursive(4, 24, 3, move |inner| {
        let compose = (inner.clone(), inner.clone())
            .prop_map(|(a, b)| OpExpr::compose(a, b));
        let sum = (inner.clone(), inner.clone()).prop_map(|(a, b)| OpExpr::sum(a, b));
        let power = (inner.clone(), 0u32..=3).prop_map(|(e, k)| OpExpr::power(e, k));
        match mode {
            Mode::Strict => prop_oneof![compose, sum, power].boxed(),
            Mode::Virtual => {
                let diff = (inner.clone(), inner).prop_map(|(a, b)| OpExpr::diff(a, b));
                prop_oneof![compose, sum, power, diff].boxed()
            }
        }
    })
}

proptest! {
    #[test]
    fn rank_unrank_roundtrip(n in 1usize..=4, k in 0u64..4096) {
        let k = k % label_count(n);
        let seq = Seq::unrank(n, k).unwrap();
        prop_assert_eq!(seq.rank(), k);
        prop_assert_eq!(Seq::unrank(n, seq.rank()).unwrap(), seq);
    }

    #[test]
    fn content_is_permutation_invariant(seq in arb_seq(4), salt in any::<u64>()) {
        let mut letters = seq.letters().to_vec();
        // cheap deterministic shuffle driven by the salt
        for i in (1..letters.len()).rev() {
            let j = (salt as usize).wrapping_mul(i + 1) % (i + 1);
            letters.swap(i, j);
        }
        let shuffled = Seq::new(letters).unwrap();
        prop_assert_eq!(content(&shuffled), content(&seq));
        prop_assert_eq!(seq_class_key(&shuffled), seq_class_key(&seq));
    }

    #[test]
    fn apply_is_additive_and_homogeneous(
        g in arb_generator(),
        x in arb_zvec(2),
        y in arb_zvec(2),
        k in -4i64..=4,
    ) {
        let op = named_op(g, 2);
        let both = apply(&op, &x.add(&y).unwrap()).unwrap();
        let separate = apply(&op, &x).unwrap().add(&apply(&op, &y).unwrap()).unwrap();
        prop_assert_eq!(both, separate);

        let scaled = apply(&op, &x.scale(k).unwrap()).unwrap();
        prop_assert_eq!(scaled, apply(&op, &x).unwrap().scale(k).unwrap());
    }

    #[test]
    fn parse_print_roundtrip_strict(e in arb_expr(Mode::Strict)) {
        let text = print(&e);
        prop_assert_eq!(parse(&text, Mode::Strict).unwrap(), e);
    }

    #[test]
    fn parse_print_roundtrip_virtual(e in arb_expr(Mode::Virtual)) {
        let text = print(&e);
        prop_assert_eq!(parse(&text, Mode::Virtual).unwrap(), e);
    }

    #[test]
    fn strict_eval_has_nonnegative_images(e in arb_expr(Mode::Strict), seq in arb_seq(2)) {
        let op = eval(&e, 2);
        prop_assert!(op.rule(&seq).unwrap().is_nonnegative());
    }

    #[test]
    fn matrix_columns_agree_with_apply(g in arb_generator(), seq in arb_seq(2)) {
        let op = named_op(g, 2);
        let key = seq_class_key(&seq);
        let m = matrix_of(&op, 2, key).unwrap();
        for (col, s) in m.source_basis.iter().enumerate() {
            let mut indicator = vec![0i64; m.cols()];
            indicator[col] = 1;
            let through_matrix = m.mul_vec(&indicator).unwrap();
            let image = apply(&op, &ZVec::single(s.clone(), 1)).unwrap();
            let expected: Vec<i64> =
                m.target_basis.iter().map(|t| image.coef(t)).collect();
            prop_assert_eq!(through_matrix, expected);
            // no image label escapes the recorded target basis
            prop_assert_eq!(
                image.iter().map(|(_, c)| c.unsigned_abs()).sum::<u64>(),
                m.entries
                    .iter()
                    .filter(|&&(_, c, _)| c == col)
                    .map(|&(_, _, v)| v.unsigned_abs())
                    .sum::<u64>()
            );
        }
    }

    #[test]
    fn matrix_composition_is_associative(
        a in arb_generator(),
        b in arb_generator(),
        c in arb_generator(),
        n in 1usize..=3,
        k in 0u64..512,
    ) {
        let seq = Seq::unrank(n, k % label_count(n)).unwrap();
        let (a, b, c) = (named_op(a, n), named_op(b, n), named_op(c, n));
        let left = a.compose(&b.compose(&c));
        let right = a.compose(&b).compose(&c);
        let key = seq_class_key(&seq);
        prop_assert_eq!(
            matrix_of(&left, n, key).unwrap(),
            matrix_of(&right, n, key).unwrap()
        );
    }
}
