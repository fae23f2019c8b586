//! Induced maps of the projective functors on the Verma basis.
//!
//! Each named operator acts on a basis label `[M(a_1,…,a_n)]` by a closed
//! per-letter rule:
//!
//! * `H_i^±` are diagonal, multiplying by the positive or negative part of
//!   the class invariant `c_i` of the label's content;
//! * `E2`, `E3`, `F2`, `F3` move one qualifying letter by ±1 (summed over
//!   positions);
//! * `E1^±` and `F1^±` come from tensoring with the symmetric respectively
//!   alternating square of the (dual) fundamental gl(n)-module, so they mix
//!   a "move one letter by ±2" part with a "move an ordered pair by ±1 each"
//!   part. The plus flavor carries both, the minus flavor only the pairs.
//!
//! The same operators are rebuilt from first principles by
//! [`oracle_generator`]: tensor with the appropriate weight multiset, drop
//! letters that leave `0..=7`, and project to the shifted block. The two
//! routes are kept independent so each certifies the other.

use serde::{Deserialize, Serialize};

use crate::basis::{content, seq_class_key, shift_content, Content, Letter, Seq};
use crate::error::{Error, Result};
use crate::zmod::{LinearOp, ZVec};

/// Tags for the named operators on `K(O^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    H1p,
    H1m,
    H2p,
    H2m,
    H3p,
    H3m,
    E1p,
    E1m,
    E2,
    E3,
    F1p,
    F1m,
    F2,
    F3,
    #[serde(rename = "ID")]
    Id,
}

impl Generator {
    pub const ALL: [Generator; 15] = [
        Generator::H1p,
        Generator::H1m,
        Generator::H2p,
        Generator::H2m,
        Generator::H3p,
        Generator::H3m,
        Generator::E1p,
        Generator::E1m,
        Generator::E2,
        Generator::E3,
        Generator::F1p,
        Generator::F1m,
        Generator::F2,
        Generator::F3,
        Generator::Id,
    ];

    /// The eight operators built from translation functors (everything
    /// except the diagonal `H` family and the identity).
    pub const TRANSLATION: [Generator; 8] = [
        Generator::E1p,
        Generator::E1m,
        Generator::E2,
        Generator::E3,
        Generator::F1p,
        Generator::F1m,
        Generator::F2,
        Generator::F3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::H1p => "H1p",
            Generator::H1m => "H1m",
            Generator::H2p => "H2p",
            Generator::H2m => "H2m",
            Generator::H3p => "H3p",
            Generator::H3m => "H3m",
            Generator::E1p => "E1p",
            Generator::E1m => "E1m",
            Generator::E2 => "E2",
            Generator::E3 => "E3",
            Generator::F1p => "F1p",
            Generator::F1m => "F1m",
            Generator::F2 => "F2",
            Generator::F3 => "F3",
            Generator::Id => "ID",
        }
    }

    pub fn parse(s: &str) -> Option<Generator> {
        Generator::ALL.into_iter().find(|g| g.name() == s)
    }

    pub fn is_h(self) -> bool {
        matches!(
            self,
            Generator::H1p
                | Generator::H1m
                | Generator::H2p
                | Generator::H2m
                | Generator::H3p
                | Generator::H3m
        )
    }
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Singleton letter moves: (qualifying letters, delta).
const E2_SINGLES: (&[Letter], i8) = (&[1, 5], 1);
const E3_SINGLES: (&[Letter], i8) = (&[0, 2, 4, 6], 1);
const F2_SINGLES: (&[Letter], i8) = (&[2, 6], -1);
const F3_SINGLES: (&[Letter], i8) = (&[1, 3, 5, 7], -1);
/// The ±2 singleton parts of the square-type operators.
const E1_SINGLES: (&[Letter], i8) = (&[2, 3], 2);
const F1_SINGLES: (&[Letter], i8) = (&[4, 5], -2);
/// Ordered-pair conditions of the square-type operators.
const E1_PAIRS: &[(Letter, Letter)] = &[(2, 3), (3, 2), (3, 4), (4, 3)];
const F1_PAIRS: &[(Letter, Letter)] = &[(3, 4), (4, 3), (4, 5), (5, 4)];

fn singles_rule(seq: &Seq, (letters, delta): (&[Letter], i8), acc: &mut ZVec) -> Result<()> {
    for (m, &a) in seq.letters().iter().enumerate() {
        if letters.contains(&a) {
            let b = (a as i8 + delta) as Letter;
            acc.add_term(seq.with_letter(m, b), 1)?;
        }
    }
    Ok(())
}

fn pairs_rule(seq: &Seq, pairs: &[(Letter, Letter)], delta: i8, acc: &mut ZVec) -> Result<()> {
    let letters = seq.letters();
    for i in 0..letters.len() {
        for j in (i + 1)..letters.len() {
            if pairs.contains(&(letters[i], letters[j])) {
                let a = (letters[i] as i8 + delta) as Letter;
                let b = (letters[j] as i8 + delta) as Letter;
                acc.add_term(seq.with_two_letters(i, a, j, b), 1)?;
            }
        }
    }
    Ok(())
}

fn h_rule(seq: &Seq, i: usize, positive: bool) -> ZVec {
    let key = seq_class_key(seq);
    let c = [key.c1, key.c2, key.c3][i - 1];
    let coef = if positive { c.max(0) } else { (-c).max(0) };
    ZVec::single(seq.clone(), coef)
}

/// The closed-form rule of one named operator on one basis label.
///
/// Empty sums give the zero vector; every output coefficient is >= 0.
pub fn gen_rule(g: Generator, seq: &Seq) -> ZVec {
    match g {
        Generator::H1p => return h_rule(seq, 1, true),
        Generator::H1m => return h_rule(seq, 1, false),
        Generator::H2p => return h_rule(seq, 2, true),
        Generator::H2m => return h_rule(seq, 2, false),
        Generator::H3p => return h_rule(seq, 3, true),
        Generator::H3m => return h_rule(seq, 3, false),
        Generator::Id => return ZVec::single(seq.clone(), 1),
        _ => {}
    }
    let mut acc = ZVec::zero(seq.len());
    // the accumulations below only ever add 1s, far below i64::MAX
    let built: Result<()> = (|| {
        match g {
            Generator::E1p => {
                singles_rule(seq, E1_SINGLES, &mut acc)?;
                pairs_rule(seq, E1_PAIRS, 1, &mut acc)?;
            }
            Generator::E1m => pairs_rule(seq, E1_PAIRS, 1, &mut acc)?,
            Generator::E2 => singles_rule(seq, E2_SINGLES, &mut acc)?,
            Generator::E3 => singles_rule(seq, E3_SINGLES, &mut acc)?,
            Generator::F1p => {
                singles_rule(seq, F1_SINGLES, &mut acc)?;
                pairs_rule(seq, F1_PAIRS, -1, &mut acc)?;
            }
            Generator::F1m => pairs_rule(seq, F1_PAIRS, -1, &mut acc)?,
            Generator::F2 => singles_rule(seq, F2_SINGLES, &mut acc)?,
            Generator::F3 => singles_rule(seq, F3_SINGLES, &mut acc)?,
            _ => unreachable!("handled above"),
        }
        Ok(())
    })();
    built.expect("rule coefficients stay far below i64::MAX");
    acc
}

/// Wraps [`gen_rule`] as a [`LinearOp`] on `K(O^n)`.
///
/// Globally the operator is the direct sum of its restrictions to the
/// classes, but each label lies in exactly one block, so at the rule level
/// the direct sum collapses to the uniform rule.
pub fn named_op(g: Generator, _n: usize) -> LinearOp {
    LinearOp::new(g.name(), move |seq| Ok(gen_rule(g, seq)))
}

/// Weight multisets of the finite-dimensional gl(n)-modules used for
/// translation: the fundamental module, its dual, and their symmetric and
/// alternating squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightMultisetId {
    /// `{ε_m}`
    Fund,
    /// `{-ε_m}`
    DualFund,
    /// `{ε_i + ε_j : i <= j}`
    Sym2,
    /// `{ε_i + ε_j : i < j}`
    Alt2,
    /// `{-ε_i - ε_j : i <= j}`
    DualSym2,
    /// `{-ε_i - ε_j : i < j}`
    DualAlt2,
}

impl WeightMultisetId {
    /// Applies every weight of the multiset to `seq` as a letter shift,
    /// dropping shifts that leave `0..=7`, and hands each surviving label to
    /// `sink`.
    fn for_each_shift(self, seq: &Seq, mut sink: impl FnMut(Seq) -> Result<()>) -> Result<()> {
        let n = seq.len();
        let letters = seq.letters();
        let single = |m: usize, delta: i8| -> Option<Seq> {
            let shifted = letters[m] as i8 + delta;
            (0..8).contains(&shifted).then(|| seq.with_letter(m, shifted as Letter))
        };
        let double = |i: usize, j: usize, delta: i8| -> Option<Seq> {
            if i == j {
                let shifted = letters[i] as i8 + 2 * delta;
                return (0..8).contains(&shifted).then(|| seq.with_letter(i, shifted as Letter));
            }
            let a = letters[i] as i8 + delta;
            let b = letters[j] as i8 + delta;
            ((0..8).contains(&a) && (0..8).contains(&b))
                .then(|| seq.with_two_letters(i, a as Letter, j, b as Letter))
        };
        match self {
            WeightMultisetId::Fund | WeightMultisetId::DualFund => {
                let delta = if self == WeightMultisetId::Fund { 1 } else { -1 };
                for m in 0..n {
                    if let Some(s) = single(m, delta) {
                        sink(s)?;
                    }
                }
            }
            WeightMultisetId::Sym2 | WeightMultisetId::DualSym2 => {
                let delta = if self == WeightMultisetId::Sym2 { 1 } else { -1 };
                for i in 0..n {
                    for j in i..n {
                        if let Some(s) = double(i, j, delta) {
                            sink(s)?;
                        }
                    }
                }
            }
            WeightMultisetId::Alt2 | WeightMultisetId::DualAlt2 => {
                let delta = if self == WeightMultisetId::Alt2 { 1 } else { -1 };
                for i in 0..n {
                    for j in (i + 1)..n {
                        if let Some(s) = double(i, j, delta) {
                            sink(s)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// One translation functor on one basis label, from first principles:
/// `[proj_target ∘ (V ⊗ −)]` expands the tensor as the sum over the weight
/// multiset of `V` of shifted labels, then keeps the terms whose content is
/// exactly `target`.
pub fn oracle_translation(w: WeightMultisetId, target: &Content, seq: &Seq) -> ZVec {
    let mut acc = ZVec::zero(seq.len());
    w.for_each_shift(seq, |shifted| {
        if content(&shifted) == *target {
            acc.add_term(shifted, 1)?;
        }
        Ok(())
    })
    .expect("oracle coefficients stay small");
    acc
}

/// Decomposition of each translation-built generator into projected tensor
/// functors: which module to tensor with, and which block move `d_i^j`
/// selects each summand.
pub fn oracle_parts(g: Generator) -> Result<(WeightMultisetId, &'static [(Letter, Letter)])> {
    use WeightMultisetId::*;
    Ok(match g {
        Generator::E1p => (Sym2, &[(2, 4), (3, 5)]),
        Generator::E1m => (Alt2, &[(2, 4), (3, 5)]),
        Generator::E2 => (Fund, &[(1, 2), (5, 6)]),
        Generator::E3 => (Fund, &[(0, 1), (2, 3), (4, 5), (6, 7)]),
        Generator::F1p => (DualSym2, &[(4, 2), (5, 3)]),
        Generator::F1m => (DualAlt2, &[(4, 2), (5, 3)]),
        Generator::F2 => (DualFund, &[(2, 1), (6, 5)]),
        Generator::F3 => (DualFund, &[(1, 0), (3, 2), (5, 4), (7, 6)]),
        other => return Err(Error::NoOracle(other)),
    })
}

/// Rebuilds [`gen_rule`] for a translation-built generator as a sum of
/// [`oracle_translation`] calls. Block moves with `d_i = 0` land in the
/// trivial subcategory and contribute zero.
pub fn oracle_generator(g: Generator, seq: &Seq) -> Result<ZVec> {
    let (w, moves) = oracle_parts(g)?;
    let d = content(seq);
    let mut acc = ZVec::zero(seq.len());
    for &(i, j) in moves {
        if let Some(target) = shift_content(&d, i, j) {
            acc.add_scaled(&oracle_translation(w, &target, seq), 1)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::class_key;

    fn seq(letters: &[u8]) -> Seq {
        Seq::new(letters.to_vec()).unwrap()
    }

    fn unit(letters: &[u8]) -> ZVec {
        ZVec::single(seq(letters), 1)
    }

    fn sum(labels: &[&[u8]]) -> ZVec {
        let n = labels[0].len();
        ZVec::from_terms(n, labels.iter().map(|l| (seq(l), 1))).unwrap()
    }

    #[test]
    fn square_type_rules_mix_singles_and_pairs() {
        assert_eq!(
            gen_rule(Generator::E1p, &seq(&[2, 3])),
            sum(&[&[4, 3], &[3, 4], &[2, 5]])
        );
        assert_eq!(gen_rule(Generator::E1m, &seq(&[2, 3])), unit(&[3, 4]));
        assert_eq!(
            gen_rule(Generator::F1p, &seq(&[4, 3])),
            sum(&[&[2, 3], &[3, 2]])
        );
    }

    #[test]
    fn single_step_rules() {
        assert_eq!(gen_rule(Generator::E3, &seq(&[0, 7])), unit(&[1, 7]));
        assert!(gen_rule(Generator::E2, &seq(&[0, 0])).is_zero());
        assert!(gen_rule(Generator::F3, &seq(&[0])).is_zero());
    }

    #[test]
    fn h_rules_split_by_sign() {
        assert_eq!(
            gen_rule(Generator::H1p, &seq(&[4, 5])),
            ZVec::single(seq(&[4, 5]), 2)
        );
        assert!(gen_rule(Generator::H1m, &seq(&[4, 5])).is_zero());
        // c_2((1,5)) = -2: the minus flavor carries it
        assert_eq!(
            gen_rule(Generator::H2m, &seq(&[1, 5])),
            ZVec::single(seq(&[1, 5]), 2)
        );
        assert!(gen_rule(Generator::H2p, &seq(&[1, 5])).is_zero());
    }

    #[test]
    fn outputs_are_nonnegative_and_block_coherent() {
        for g in Generator::ALL {
            for r in 0..64 {
                let s = Seq::unrank(2, r).unwrap();
                let out = gen_rule(g, &s);
                assert!(out.is_nonnegative(), "{g} on {s}");
                // every output label lies in the block the generator targets
                if let Ok((_, moves)) = oracle_parts(g) {
                    let d = content(&s);
                    for t in out.support() {
                        let td = content(t);
                        assert!(
                            moves.iter().any(|&(i, j)| shift_content(&d, i, j) == Some(td)),
                            "{g} on {s} produced {t} outside the shifted blocks"
                        );
                    }
                } else {
                    for t in out.support() {
                        assert_eq!(content(t), content(&s), "{g} must preserve the block");
                    }
                }
            }
        }
    }

    #[test]
    fn class_keys_shift_by_cartan_columns() {
        use crate::spin::CARTAN;
        let col = |j: usize| (CARTAN[0][j - 1], CARTAN[1][j - 1], CARTAN[2][j - 1]);
        let expected: &[(Generator, (i64, i64, i64))] = &[
            (Generator::E1p, col(1)),
            (Generator::E1m, col(1)),
            (Generator::E2, col(2)),
            (Generator::E3, col(3)),
            (Generator::F1p, (-col(1).0, -col(1).1, -col(1).2)),
            (Generator::F1m, (-col(1).0, -col(1).1, -col(1).2)),
            (Generator::F2, (-col(2).0, -col(2).1, -col(2).2)),
            (Generator::F3, (-col(3).0, -col(3).1, -col(3).2)),
        ];
        for &(g, (d1, d2, d3)) in expected {
            for r in 0..512 {
                let s = Seq::unrank(3, r).unwrap();
                let from = class_key(&content(&s));
                for t in gen_rule(g, &s).support() {
                    let to = class_key(&content(t));
                    assert_eq!(
                        (to.c1 - from.c1, to.c2 - from.c2, to.c3 - from.c3),
                        (d1, d2, d3),
                        "{g} on {s} -> {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn oracle_translation_examples() {
        // fundamental module, block moved by d_1^2
        let d = content(&seq(&[1, 5]));
        let target = shift_content(&d, 1, 2).unwrap();
        assert_eq!(
            oracle_translation(WeightMultisetId::Fund, &target, &seq(&[1, 5])),
            unit(&[2, 5])
        );
        // symmetric square, block moved by d_2^4
        let d = content(&seq(&[2, 3]));
        let target = shift_content(&d, 2, 4).unwrap();
        assert_eq!(
            oracle_translation(WeightMultisetId::Sym2, &target, &seq(&[2, 3])),
            sum(&[&[4, 3], &[3, 4]])
        );
        // dual fundamental falls off the letter range
        let d = content(&seq(&[0]));
        let target = shift_content(&d, 0, 7).unwrap();
        assert!(oracle_translation(WeightMultisetId::DualFund, &target, &seq(&[0])).is_zero());
    }

    #[test]
    fn oracle_generator_examples() {
        assert_eq!(
            oracle_generator(Generator::E2, &seq(&[1, 5])).unwrap(),
            sum(&[&[2, 5], &[1, 6]])
        );
        assert_eq!(
            oracle_generator(Generator::F1m, &seq(&[4, 3])).unwrap(),
            unit(&[3, 2])
        );
        assert_eq!(
            oracle_generator(Generator::E1p, &seq(&[2, 2])).unwrap(),
            sum(&[&[4, 2], &[2, 4]])
        );
        assert!(matches!(
            oracle_generator(Generator::H1p, &seq(&[0])),
            Err(Error::NoOracle(Generator::H1p))
        ));
    }

    #[test]
    fn pair_terms_cancel_in_the_formal_difference() {
        // [E1p] - [E1m] keeps only the singleton +2 moves, and mirrored for F
        use crate::zmod::{op_equal, ColumnSelection, LinearOp};
        let reduced = |letters: &'static [u8], delta: i8| {
            LinearOp::new("singletons", move |s: &Seq| {
                let mut acc = ZVec::zero(s.len());
                singles_rule(s, (letters, delta), &mut acc)?;
                Ok(acc)
            })
        };
        for n in 1..=4 {
            let e_diff = named_op(Generator::E1p, n).sub(&named_op(Generator::E1m, n));
            let eq = op_equal(&e_diff, &reduced(&[2, 3], 2), n, ColumnSelection::All).unwrap();
            assert!(eq.equal, "E1 difference at n={n}: {:?}", eq.witness);
            let f_diff = named_op(Generator::F1p, n).sub(&named_op(Generator::F1m, n));
            let eq = op_equal(&f_diff, &reduced(&[4, 5], -2), n, ColumnSelection::All).unwrap();
            assert!(eq.equal, "F1 difference at n={n}: {:?}", eq.witness);
        }
    }

    #[test]
    fn oracle_agrees_with_rules_at_small_n() {
        for n in 1..=3 {
            for r in 0..crate::basis::label_count(n) {
                let s = Seq::unrank(n, r).unwrap();
                for g in Generator::TRANSLATION {
                    assert_eq!(
                        oracle_generator(g, &s).unwrap(),
                        gen_rule(g, &s),
                        "{g} on {s}"
                    );
                }
            }
        }
    }
}
