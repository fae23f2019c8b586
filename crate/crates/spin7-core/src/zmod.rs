//! Sparse vectors over the labeled basis and ℤ-linear operators on them.
//!
//! A [`ZVec`] is a finitely supported integer combination of [`Seq`] labels
//! and models an element of the Grothendieck group `K(O^n)`, equivalently of
//! the restricted tensor power it is identified with. A [`LinearOp`] is the
//! ℤ-linear extension of a per-basis-element rule, the shape every induced
//! map `[F]` of an exact functor takes on the Verma basis. Coefficients are
//! `i64` with checked arithmetic throughout; overflow is reported, never
//! wrapped.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{enumerate_class, label_count, ClassKey, Seq};
use crate::error::{Error, Result};

const OVERFLOW_ADD: Error = Error::Overflow { context: "adding coefficients" };
const OVERFLOW_MUL: Error = Error::Overflow { context: "scaling coefficients" };

/// A finitely supported map `Seq -> nonzero i64`, all keys of length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZVec {
    n: usize,
    terms: BTreeMap<Seq, i64>,
}

impl ZVec {
    pub fn zero(n: usize) -> Self {
        ZVec { n, terms: BTreeMap::new() }
    }

    /// The single term `coef * [seq]`.
    pub fn single(seq: Seq, coef: i64) -> Self {
        let n = seq.len();
        let mut terms = BTreeMap::new();
        if coef != 0 {
            terms.insert(seq, coef);
        }
        ZVec { n, terms }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Seq, i64)>) -> Result<Self> {
        let mut v = ZVec::zero(n);
        for (seq, coef) in terms {
            v.add_term(seq, coef)?;
        }
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coef(&self, seq: &Seq) -> i64 {
        self.terms.get(seq).copied().unwrap_or(0)
    }

    /// Terms in rank order.
    pub fn iter(&self) -> impl Iterator<Item = (&Seq, i64)> {
        self.terms.iter().map(|(s, &c)| (s, c))
    }

    /// Support in rank order.
    pub fn support(&self) -> impl Iterator<Item = &Seq> {
        self.terms.keys()
    }

    /// Adds `coef * [seq]` in place; drops the entry when it cancels.
    pub fn add_term(&mut self, seq: Seq, coef: i64) -> Result<()> {
        if coef == 0 {
            return Ok(());
        }
        if seq.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: seq.len() });
        }
        match self.terms.entry(seq) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().checked_add(coef).ok_or(OVERFLOW_ADD)?;
                if sum == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    /// Adds `k * other` in place.
    pub fn add_scaled(&mut self, other: &ZVec, k: i64) -> Result<()> {
        if other.n != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: other.n });
        }
        for (seq, coef) in other.iter() {
            let scaled = coef.checked_mul(k).ok_or(OVERFLOW_MUL)?;
            self.add_term(seq.clone(), scaled)?;
        }
        Ok(())
    }

    pub fn add(&self, other: &ZVec) -> Result<ZVec> {
        let mut out = self.clone();
        out.add_scaled(other, 1)?;
        Ok(out)
    }

    pub fn sub(&self, other: &ZVec) -> Result<ZVec> {
        let mut out = self.clone();
        out.add_scaled(other, -1)?;
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Result<ZVec> {
        let mut out = ZVec::zero(self.n);
        out.add_scaled(self, k)?;
        Ok(out)
    }

    pub fn neg(&self) -> Result<ZVec> {
        self.scale(-1)
    }

    /// True when every coefficient is >= 0.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|&c| c >= 0)
    }
}

impl std::fmt::Display for ZVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (seq, coef)) in self.iter().enumerate() {
            if i == 0 {
                if coef < 0 {
                    write!(f, "-")?;
                }
            } else if coef < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = coef.unsigned_abs();
            if a != 1 {
                write!(f, "{a}·")?;
            }
            write!(f, "{seq}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    seq: Seq,
    coef: i64,
}

#[derive(Serialize, Deserialize)]
struct ZVecRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for ZVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = ZVecRepr {
            n: self.n,
            terms: self
                .iter()
                .map(|(seq, coef)| TermRepr { seq: seq.clone(), coef })
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZVec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ZVecRepr::deserialize(d)?;
        ZVec::from_terms(repr.n, repr.terms.into_iter().map(|t| (t.seq, t.coef)))
            .map_err(D::Error::custom)
    }
}

type Rule = Arc<dyn Fn(&Seq) -> Result<ZVec> + Send + Sync>;

/// A ℤ-linear operator on `K(O^n)`, presented by its rule on basis labels.
///
/// Rules must be pure; everything else (application to vectors, composition,
/// sums, multiplicity scaling) is derived from the rule by linearity.
#[derive(Clone)]
pub struct LinearOp {
    name: String,
    rule: Rule,
}

impl LinearOp {
    pub fn new(
        name: impl Into<String>,
        rule: impl Fn(&Seq) -> Result<ZVec> + Send + Sync + 'static,
    ) -> Self {
        LinearOp { name: name.into(), rule: Arc::new(rule) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Image of a single basis label.
    pub fn rule(&self, seq: &Seq) -> Result<ZVec> {
        (self.rule)(seq)
    }

    /// Linear extension to a whole vector; see the free function [`apply`].
    pub fn apply(&self, v: &ZVec) -> Result<ZVec> {
        apply(self, v)
    }

    pub fn identity() -> Self {
        LinearOp::new("ID", |seq| Ok(ZVec::single(seq.clone(), 1)))
    }

    pub fn zero() -> Self {
        LinearOp::new("0", |seq| Ok(ZVec::zero(seq.len())))
    }

    /// `self ∘ other`: `other` first, then `self`.
    pub fn compose(&self, other: &LinearOp) -> LinearOp {
        let name = format!("({} * {})", self.name, other.name);
        let first = other.rule.clone();
        let second = self.clone();
        LinearOp::new(name, move |seq| {
            let mid = first(seq)?;
            second.apply(&mid)
        })
    }

    /// Pointwise sum of rules (the induced map of a direct sum).
    pub fn add(&self, other: &LinearOp) -> LinearOp {
        let name = format!("({} + {})", self.name, other.name);
        let (a, b) = (self.rule.clone(), other.rule.clone());
        LinearOp::new(name, move |seq| a(seq)?.add(&b(seq)?))
    }

    /// Pointwise difference (a virtual operator; no honest functor behind it).
    pub fn sub(&self, other: &LinearOp) -> LinearOp {
        let name = format!("({} - {})", self.name, other.name);
        let (a, b) = (self.rule.clone(), other.rule.clone());
        LinearOp::new(name, move |seq| a(seq)?.sub(&b(seq)?))
    }

    /// Multiplicity `k`: the induced map of a k-fold direct sum, i.e. `k·[F]`.
    pub fn scale(&self, k: i64) -> LinearOp {
        let name = format!("({} ^ {})", self.name, k);
        let rule = self.rule.clone();
        LinearOp::new(name, move |seq| rule(seq)?.scale(k))
    }
}

impl std::fmt::Debug for LinearOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearOp").field("name", &self.name).finish()
    }
}

/// Parallel fan-out threshold for [`apply`].
const PAR_THRESHOLD: usize = 1 << 12;

/// ℤ-linear extension of the operator's rule to a whole vector.
///
/// Term images are computed independently (in parallel for large inputs) and
/// merged in rank order, so results and overflow detection are deterministic.
pub fn apply(op: &LinearOp, v: &ZVec) -> Result<ZVec> {
    let n = v.n();
    let images: Vec<Result<ZVec>> = if v.len() >= PAR_THRESHOLD {
        let terms: Vec<(&Seq, i64)> = v.iter().collect();
        terms
            .into_par_iter()
            .map(|(seq, coef)| op.rule(seq)?.scale(coef))
            .collect()
    } else {
        v.iter().map(|(seq, coef)| op.rule(seq)?.scale(coef)).collect()
    };
    let mut acc = ZVec::zero(n);
    for image in images {
        acc.add_scaled(&image?, 1)?;
    }
    Ok(acc)
}

/// Which basis columns a check visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnSelection {
    /// Every label of length n, in rank order.
    All,
    /// A deterministic sample of `count` distinct ranks drawn with the seed,
    /// visited in rank order. Falls back to all columns when `count >= 8^n`.
    Sample { seed: u64, count: usize },
}

impl ColumnSelection {
    /// The selected ranks, ascending.
    pub fn ranks(&self, n: usize) -> Vec<u64> {
        let total = label_count(n);
        match *self {
            ColumnSelection::All => (0..total).collect(),
            ColumnSelection::Sample { seed, count } => {
                if count as u64 >= total {
                    return (0..total).collect();
                }
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let mut picked =
                    rand::seq::index::sample(&mut rng, total as usize, count).into_vec();
                picked.sort_unstable();
                picked.into_iter().map(|r| r as u64).collect()
            }
        }
    }
}

/// Outcome of comparing two operators column by column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpEquality {
    pub equal: bool,
    /// First differing column in rank order, with both images.
    pub witness: Option<Witness>,
    /// How many columns were compared.
    pub columns_checked: usize,
}

/// A concrete counterexample: one basis label and the two images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub seq: Seq,
    pub lhs: ZVec,
    pub rhs: ZVec,
}

/// Compares `a` and `b` on the selected columns; on failure reports the
/// first differing label (in rank order) together with both images.
pub fn op_equal(
    a: &LinearOp,
    b: &LinearOp,
    n: usize,
    columns: ColumnSelection,
) -> Result<OpEquality> {
    let ranks = columns.ranks(n);
    let columns_checked = ranks.len();
    let mismatch: Option<Result<Witness>> = ranks
        .into_par_iter()
        .map(|r| {
            let seq = Seq::unrank(n, r).expect("rank < 8^n");
            let lhs = match a.rule(&seq) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            let rhs = match b.rule(&seq) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            if lhs == rhs {
                None
            } else {
                Some(Ok(Witness { seq, lhs, rhs }))
            }
        })
        .find_first(Option::is_some)
        .flatten();
    match mismatch {
        None => Ok(OpEquality { equal: true, witness: None, columns_checked }),
        Some(Ok(w)) => Ok(OpEquality { equal: false, witness: Some(w), columns_checked }),
        Some(Err(e)) => Err(e),
    }
}

/// An exact integer matrix of an operator restricted to one class.
///
/// Column `j` is the image of `source_basis[j]` expanded in `target_basis`;
/// entries are `[row, col, value]` triplets sorted row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseIntMatrix {
    pub source_basis: Vec<Seq>,
    pub target_basis: Vec<Seq>,
    pub entries: Vec<(usize, usize, i64)>,
}

impl SparseIntMatrix {
    pub fn rows(&self) -> usize {
        self.target_basis.len()
    }

    pub fn cols(&self) -> usize {
        self.source_basis.len()
    }

    /// Matrix-vector product against a coefficient vector over the source
    /// basis; returns coefficients over the target basis.
    pub fn mul_vec(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.cols() {
            return Err(Error::LengthMismatch { expected: self.cols(), got: x.len() });
        }
        let mut y = vec![0i64; self.rows()];
        for &(r, c, v) in &self.entries {
            let prod = v.checked_mul(x[c]).ok_or(OVERFLOW_MUL)?;
            y[r] = y[r].checked_add(prod).ok_or(OVERFLOW_ADD)?;
        }
        Ok(y)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|&(_, _, v)| v >= 0)
    }
}

/// The matrix of `op` on the class basis picked out by `source`, columns in
/// rank order; the target basis is the union of column supports, also in
/// rank order.
pub fn matrix_of(op: &LinearOp, n: usize, source: ClassKey) -> Result<SparseIntMatrix> {
    let source_basis: Vec<Seq> = enumerate_class(n, source).collect();
    let images: Vec<ZVec> = source_basis
        .par_iter()
        .map(|seq| op.rule(seq))
        .collect::<Result<_>>()?;

    let mut target_basis: Vec<Seq> = images
        .iter()
        .flat_map(|v| v.support().cloned())
        .collect();
    target_basis.sort_unstable();
    target_basis.dedup();
    let row_of: BTreeMap<&Seq, usize> =
        target_basis.iter().enumerate().map(|(i, s)| (s, i)).collect();

    let mut entries = Vec::new();
    for (col, image) in images.iter().enumerate() {
        for (seq, coef) in image.iter() {
            let row = *row_of.get(seq).expect("support is contained in target basis");
            entries.push((row, col, coef));
        }
    }
    entries.sort_unstable();
    Ok(SparseIntMatrix { source_basis, target_basis, entries })
}
