//! The 8-dimensional spin module of so(7,C) and its tensor powers.
//!
//! The Chevalley generators `h_i, e_i, f_i` act on the basis `v_0..v_7` by
//! the fixed table below: each `h_i` is diagonal with eigenvalues in
//! `{-1,0,1}`, and each `e_i`/`f_i` sends a basis vector to another basis
//! vector or to zero. Generators act on n-fold tensors by the Leibniz rule,
//! one position at a time. The letter word `(a_1,…,a_n)` names both the
//! tensor vector and a Verma class, and [`gamma`] is that identification,
//! spelled out so intertwining checks read off the commuting square.

use serde::{Deserialize, Serialize};

use crate::basis::{ClassKey, Letter, Seq, LETTER_COUNT};
use crate::error::{Error, Result};
use crate::zmod::ZVec;

/// A Chevalley generator symbol of so(7,C).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenSymbol {
    #[serde(rename = "h1")]
    H1,
    #[serde(rename = "h2")]
    H2,
    #[serde(rename = "h3")]
    H3,
    #[serde(rename = "e1")]
    E1,
    #[serde(rename = "e2")]
    E2,
    #[serde(rename = "e3")]
    E3,
    #[serde(rename = "f1")]
    F1,
    #[serde(rename = "f2")]
    F2,
    #[serde(rename = "f3")]
    F3,
}

impl GenSymbol {
    pub const ALL: [GenSymbol; 9] = [
        GenSymbol::H1,
        GenSymbol::H2,
        GenSymbol::H3,
        GenSymbol::E1,
        GenSymbol::E2,
        GenSymbol::E3,
        GenSymbol::F1,
        GenSymbol::F2,
        GenSymbol::F3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenSymbol::H1 => "h1",
            GenSymbol::H2 => "h2",
            GenSymbol::H3 => "h3",
            GenSymbol::E1 => "e1",
            GenSymbol::E2 => "e2",
            GenSymbol::E3 => "e3",
            GenSymbol::F1 => "f1",
            GenSymbol::F2 => "f2",
            GenSymbol::F3 => "f3",
        }
    }

    pub fn parse(s: &str) -> Option<GenSymbol> {
        GenSymbol::ALL.into_iter().find(|g| g.name() == s)
    }
}

impl std::fmt::Display for GenSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// h_i eigenvalues on v_0..v_7, row i-1, column k.
const H_EIGEN: [[i64; LETTER_COUNT]; 3] = [
    [0, 0, -1, -1, 1, 1, 0, 0],  // h1
    [0, -1, 1, 0, 0, -1, 1, 0],  // h2
    [-1, 1, -1, 1, -1, 1, -1, 1], // h3
];

/// e_i on v_k: the target letter, or None when e_i kills v_k.
const E_STEP: [[Option<Letter>; LETTER_COUNT]; 3] = [
    // e1: v2 -> v4, v3 -> v5
    [None, None, Some(4), Some(5), None, None, None, None],
    // e2: v1 -> v2, v5 -> v6
    [None, Some(2), None, None, None, Some(6), None, None],
    // e3: v0 -> v1, v2 -> v3, v4 -> v5, v6 -> v7
    [Some(1), None, Some(3), None, Some(5), None, Some(7), None],
];

/// f_i on v_k, mirroring `E_STEP`.
const F_STEP: [[Option<Letter>; LETTER_COUNT]; 3] = [
    // f1: v4 -> v2, v5 -> v3
    [None, None, None, None, Some(2), Some(3), None, None],
    // f2: v2 -> v1, v6 -> v5
    [None, None, Some(1), None, None, None, Some(5), None],
    // f3: v1 -> v0, v3 -> v2, v5 -> v4, v7 -> v6
    [None, Some(0), None, Some(2), None, Some(4), None, Some(6)],
];

/// The `(h1,h2,h3)` eigenvalue triple of `v_k`.
pub fn eigen_triple(k: Letter) -> (i64, i64, i64) {
    let k = k as usize;
    (H_EIGEN[0][k], H_EIGEN[1][k], H_EIGEN[2][k])
}

/// Action of one generator on one basis vector of the spin module (n = 1).
pub fn spin_act(g: GenSymbol, k: Letter) -> ZVec {
    let one = |letter: Letter, coef: i64| {
        ZVec::single(Seq::new(vec![letter]).expect("letters 0..=7"), coef)
    };
    match g {
        GenSymbol::H1 | GenSymbol::H2 | GenSymbol::H3 => {
            let i = match g {
                GenSymbol::H1 => 0,
                GenSymbol::H2 => 1,
                _ => 2,
            };
            one(k, H_EIGEN[i][k as usize])
        }
        GenSymbol::E1 | GenSymbol::E2 | GenSymbol::E3 => {
            let i = match g {
                GenSymbol::E1 => 0,
                GenSymbol::E2 => 1,
                _ => 2,
            };
            match E_STEP[i][k as usize] {
                Some(j) => one(j, 1),
                None => ZVec::zero(1),
            }
        }
        GenSymbol::F1 | GenSymbol::F2 | GenSymbol::F3 => {
            let i = match g {
                GenSymbol::F1 => 0,
                GenSymbol::F2 => 1,
                _ => 2,
            };
            match F_STEP[i][k as usize] {
                Some(j) => one(j, 1),
                None => ZVec::zero(1),
            }
        }
    }
}

/// Leibniz action on one tensor label: sum over positions of acting there.
fn tensor_act_label(g: GenSymbol, seq: &Seq, coef: i64, acc: &mut ZVec) -> Result<()> {
    match g {
        GenSymbol::H1 | GenSymbol::H2 | GenSymbol::H3 => {
            let i = match g {
                GenSymbol::H1 => 0,
                GenSymbol::H2 => 1,
                _ => 2,
            };
            let mut eig: i64 = 0;
            for &a in seq.letters() {
                eig += H_EIGEN[i][a as usize]; // bounded by n <= 21
            }
            let scaled = coef
                .checked_mul(eig)
                .ok_or(Error::Overflow { context: "scaling by an h eigenvalue" })?;
            acc.add_term(seq.clone(), scaled)?;
        }
        _ => {
            let (table, idx) = match g {
                GenSymbol::E1 => (&E_STEP, 0),
                GenSymbol::E2 => (&E_STEP, 1),
                GenSymbol::E3 => (&E_STEP, 2),
                GenSymbol::F1 => (&F_STEP, 0),
                GenSymbol::F2 => (&F_STEP, 1),
                GenSymbol::F3 => (&F_STEP, 2),
                _ => unreachable!(),
            };
            for (m, &a) in seq.letters().iter().enumerate() {
                if let Some(b) = table[idx][a as usize] {
                    acc.add_term(seq.with_letter(m, b), coef)?;
                }
            }
        }
    }
    Ok(())
}

/// Action of one generator on an n-fold tensor, extended ℤ-linearly.
pub fn tensor_act(g: GenSymbol, v: &ZVec) -> Result<ZVec> {
    let mut acc = ZVec::zero(v.n());
    for (seq, coef) in v.iter() {
        tensor_act_label(g, seq, coef, &mut acc)?;
    }
    Ok(acc)
}

/// A word in the generator symbols, applied right-to-left.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GenWord(pub Vec<GenSymbol>);

impl GenWord {
    pub fn new(symbols: impl Into<Vec<GenSymbol>>) -> Self {
        GenWord(symbols.into())
    }
}

/// Applies a word right-to-left; the empty word is the identity.
pub fn word_act(w: &GenWord, v: &ZVec) -> Result<ZVec> {
    let mut out = v.clone();
    for &g in w.0.iter().rev() {
        out = tensor_act(g, &out)?;
    }
    Ok(out)
}

/// The label identification between the Verma class `[M(a_1,…,a_n)]` and the
/// tensor vector `v_{a_1}⊗…⊗v_{a_n}`. It is the identity on labels; it exists
/// as a named map so the two readings of a vector stay distinguishable at
/// call sites.
pub fn gamma(v: &ZVec) -> ZVec {
    v.clone()
}

/// Inverse of [`gamma`]; also the identity on labels.
pub fn gamma_inv(v: &ZVec) -> ZVec {
    v.clone()
}

/// The Cartan matrix of so(7,C) in the convention forced by the action
/// table: `[h_i, e_j] = a_{ij} e_j` on the spin module.
pub const CARTAN: [[i64; 3]; 3] = [[2, -1, 0], [-1, 2, -1], [0, -2, 2]];

/// Serre relation degree `1 - a_{ij}` for `i != j` (1-based indices).
pub fn serre_degree(i: usize, j: usize) -> u32 {
    (1 - CARTAN[i - 1][j - 1]) as u32
}

/// Rederives the Cartan matrix from the action table alone.
///
/// For each pair `(i,j)` the commutator `[h_i, e_j]` is computed on every
/// basis vector and matched against `a_{ij} e_j`; the scalar must be the
/// same for every vector that `e_j` does not kill, and `[h_i, f_j]` must
/// come out as `-a_{ij} f_j`. Errors when the table pins no consistent
/// scalar.
pub fn derive_cartan_from_table() -> Result<[[i64; 3]; 3]> {
    let e = [GenSymbol::E1, GenSymbol::E2, GenSymbol::E3];
    let f = [GenSymbol::F1, GenSymbol::F2, GenSymbol::F3];
    let h = [GenSymbol::H1, GenSymbol::H2, GenSymbol::H3];
    let mut a = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut scalar: Option<i64> = None;
            for k in 0..LETTER_COUNT as u8 {
                let ej_vk = spin_act(e[j], k);
                if ej_vk.is_zero() {
                    continue;
                }
                let comm = tensor_act(h[i], &ej_vk)?
                    .sub(&tensor_act(e[j], &spin_act(h[i], k))?)?;
                // e_j v_k is a single basis vector with coefficient 1, so the
                // commutator must be that same vector scaled
                let target = ej_vk.support().next().expect("nonzero image").clone();
                let c = comm.coef(&target);
                if comm != ZVec::single(target, c) {
                    return Err(Error::SelfCheck(format!(
                        "[h{},e{}] is not a multiple of e{} on v_{k}",
                        i + 1,
                        j + 1,
                        j + 1
                    )));
                }
                match scalar {
                    None => scalar = Some(c),
                    Some(prev) if prev != c => {
                        return Err(Error::SelfCheck(format!(
                            "[h{},e{}] has conflicting scalars {prev} and {c}",
                            i + 1,
                            j + 1
                        )))
                    }
                    _ => {}
                }
            }
            let a_ij =
                scalar.ok_or_else(|| Error::SelfCheck(format!("e{} acts by zero", j + 1)))?;
            // mirror check on the lowering side
            for k in 0..LETTER_COUNT as u8 {
                let fj_vk = spin_act(f[j], k);
                if fj_vk.is_zero() {
                    continue;
                }
                let comm = tensor_act(h[i], &fj_vk)?
                    .sub(&tensor_act(f[j], &spin_act(h[i], k))?)?;
                if comm != fj_vk.scale(-a_ij)? {
                    return Err(Error::SelfCheck(format!(
                        "[h{},f{}] disagrees with -a_{}{} f{} on v_{k}",
                        i + 1,
                        j + 1,
                        i + 1,
                        j + 1,
                        j + 1
                    )));
                }
            }
            a[i][j] = a_ij;
        }
    }
    Ok(a)
}

/// Checks the hardcoded [`CARTAN`] against [`derive_cartan_from_table`].
pub fn cartan_table_self_check() -> Result<()> {
    let derived = derive_cartan_from_table()?;
    if derived != CARTAN {
        return Err(Error::SelfCheck(format!(
            "Cartan matrix from the action table is {derived:?}, expected {CARTAN:?}"
        )));
    }
    Ok(())
}

/// Weight coherence for a single word: the summed `(h1,h2,h3)` eigenvalues
/// of its letters, which must equal the class key of its content.
pub fn weight_of(seq: &Seq) -> ClassKey {
    let (mut c1, mut c2, mut c3) = (0i64, 0i64, 0i64);
    for &a in seq.letters() {
        let (x, y, z) = eigen_triple(a);
        c1 += x;
        c2 += y;
        c3 += z;
    }
    ClassKey { c1, c2, c3, n: seq.len() }
}
