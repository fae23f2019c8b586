//! Labeled basis bookkeeping.
//!
//! A [`Seq`] is a word over the letters `0..=7`. Read one way it labels the
//! Verma class `[M(a_1,…,a_n)]` inside the block of category O for gl(n)
//! attached to its letter content; read the other way it labels the tensor
//! basis vector `v_{a_1}⊗…⊗v_{a_n}` of the n-th power of the 8-dimensional
//! spin module. [`Content`] records the letter multiplicities (hence the
//! central character/block), and [`ClassKey`] the three linear invariants
//! `(c1,c2,c3)` that classify blocks up to the equivalence used to glue them
//! into weight spaces. The triple equals the so(7) weight of every tensor
//! vector in the class, which is checked as an invariant in the spin module.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of letters; the spin module is 8-dimensional.
pub const LETTER_COUNT: usize = 8;

/// Longest supported word: 8^21 still fits in a u64 rank.
pub const MAX_LEN: usize = 21;

/// A single letter in `0..=7`.
pub type Letter = u8;

/// A length-n word over the letters `0..=7`.
///
/// The derived lexicographic order coincides with rank order for words of
/// equal length, so `BTreeMap<Seq, _>` iterates in rank order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Seq {
    letters: Vec<Letter>,
}

impl Seq {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() || letters.len() > MAX_LEN {
            return Err(Error::InvalidLength(letters.len()));
        }
        if let Some(&bad) = letters.iter().find(|&&a| a >= LETTER_COUNT as u8) {
            return Err(Error::InvalidLetter(bad));
        }
        Ok(Seq { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length is always >= 1
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Base-8 rank, first letter most significant.
    pub fn rank(&self) -> u64 {
        self.letters.iter().fold(0u64, |r, &a| r * 8 + a as u64)
    }

    /// Inverse of [`Seq::rank`]: the `k`-th word of length `n` in rank order.
    pub fn unrank(n: usize, k: u64) -> Result<Self> {
        if n == 0 || n > MAX_LEN {
            return Err(Error::InvalidLength(n));
        }
        if k >= label_count(n) {
            return Err(Error::RankOutOfRange { n, rank: k });
        }
        let mut letters = vec![0u8; n];
        let mut k = k;
        for slot in letters.iter_mut().rev() {
            *slot = (k % 8) as u8;
            k /= 8;
        }
        Ok(Seq { letters })
    }

    /// Copy of the word with position `m` (0-based) replaced by `letter`.
    pub fn with_letter(&self, m: usize, letter: Letter) -> Seq {
        let mut letters = self.letters.clone();
        letters[m] = letter;
        Seq { letters }
    }

    /// Copy with positions `i` and `j` replaced at once.
    pub fn with_two_letters(&self, i: usize, a: Letter, j: usize, b: Letter) -> Seq {
        let mut letters = self.letters.clone();
        letters[i] = a;
        letters[j] = b;
        Seq { letters }
    }
}

impl std::fmt::Display for Seq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

// Seq serializes as a bare JSON array of integers.
impl Serialize for Seq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Seq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let letters = Vec::<Letter>::deserialize(d)?;
        Seq::new(letters).map_err(D::Error::custom)
    }
}

/// Total number of length-n words, i.e. 8^n. Panics past [`MAX_LEN`], where
/// the count would no longer fit in a u64.
pub fn label_count(n: usize) -> u64 {
    assert!(n <= MAX_LEN, "length {n} exceeds MAX_LEN = {MAX_LEN}");
    8u64.pow(n as u32)
}

/// The 8-tuple of letter multiplicities of a word; indexes the block O_d
/// and its central character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Content {
    counts: [u32; LETTER_COUNT],
}

impl Content {
    pub fn new(counts: [u32; LETTER_COUNT]) -> Self {
        Content { counts }
    }

    pub fn counts(&self) -> &[u32; LETTER_COUNT] {
        &self.counts
    }

    pub fn n(&self) -> usize {
        self.counts.iter().map(|&d| d as usize).sum()
    }

    /// The block move `d_i^j`: subtract one at place `i`, add one at place
    /// `j`. `None` when `d_i = 0`, i.e. the move leaves the family of
    /// contents and the target block is the trivial subcategory.
    pub fn shift(&self, i: Letter, j: Letter) -> Option<Content> {
        if self.counts[i as usize] == 0 {
            return None;
        }
        let mut counts = self.counts;
        counts[i as usize] -= 1;
        counts[j as usize] += 1;
        Some(Content { counts })
    }

    /// Number of words with this content (a multinomial coefficient).
    pub fn word_count(&self) -> u64 {
        let n = self.n() as u128;
        let mut num: u128 = 1;
        for k in 2..=n {
            num *= k;
        }
        for &d in &self.counts {
            for k in 2..=(d as u128) {
                num /= k; // divides exactly after the full numerator
            }
        }
        num as u64
    }
}

impl Serialize for Content {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Content", 2)?;
        st.serialize_field("counts", &self.counts)?;
        st.serialize_field("n", &self.n())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Content {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            counts: [u32; LETTER_COUNT],
            n: usize,
        }
        let raw = Raw::deserialize(d)?;
        let c = Content::new(raw.counts);
        if c.n() != raw.n {
            return Err(D::Error::custom(format!(
                "content counts sum to {}, not the declared n = {}",
                c.n(),
                raw.n
            )));
        }
        Ok(c)
    }
}

/// The class invariants `(c1,c2,c3)` of a content, plus the ambient length.
///
/// Two contents of equal `n` are equivalent exactly when their keys agree;
/// the key also equals the so(7) weight of every tensor basis vector whose
/// word has a content in the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassKey {
    pub c1: i64,
    pub c2: i64,
    pub c3: i64,
    pub n: usize,
}

/// Letter multiplicities of a word.
pub fn content(seq: &Seq) -> Content {
    let mut counts = [0u32; LETTER_COUNT];
    for &a in seq.letters() {
        counts[a as usize] += 1;
    }
    Content::new(counts)
}

/// The three invariants:
/// `c1 = d5+d4-d3-d2`, `c2 = d6-d5+d2-d1`, `c3 = d7-d6+d5-d4+d3-d2+d1-d0`.
pub fn class_key(d: &Content) -> ClassKey {
    let c = |k: usize| d.counts()[k] as i64;
    ClassKey {
        c1: c(5) + c(4) - c(3) - c(2),
        c2: c(6) - c(5) + c(2) - c(1),
        c3: c(7) - c(6) + c(5) - c(4) + c(3) - c(2) + c(1) - c(0),
        n: d.n(),
    }
}

/// Key of a word's content.
pub fn seq_class_key(seq: &Seq) -> ClassKey {
    class_key(&content(seq))
}

/// All length-n words whose class key equals `key`, in rank order. Empty
/// when the class is empty (including a mismatched `key.n`).
pub fn enumerate_class(n: usize, key: ClassKey) -> impl Iterator<Item = Seq> {
    let total = if n == 0 || n > MAX_LEN || key.n != n {
        0
    } else {
        label_count(n)
    };
    (0..total)
        .map(move |k| Seq::unrank(n, k).expect("rank < 8^n"))
        .filter(move |s| seq_class_key(s) == key)
}

/// See [`Content::shift`]; free-standing form matching the block notation.
pub fn shift_content(d: &Content, i: Letter, j: Letter) -> Option<Content> {
    d.shift(i, j)
}

/// All contents with letter sum `n`, in lexicographic order of counts.
pub fn all_contents(n: usize) -> Vec<Content> {
    let mut out = Vec::new();
    let mut counts = [0u32; LETTER_COUNT];
    fn rec(place: usize, left: u32, counts: &mut [u32; LETTER_COUNT], out: &mut Vec<Content>) {
        if place == LETTER_COUNT - 1 {
            counts[place] = left;
            out.push(Content::new(*counts));
            return;
        }
        for v in 0..=left {
            counts[place] = v;
            rec(place + 1, left - v, counts, out);
        }
    }
    rec(0, n as u32, &mut counts, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn seq(letters: &[u8]) -> Seq {
        Seq::new(letters.to_vec()).unwrap()
    }

    #[test]
    fn content_counts_letters() {
        assert_eq!(content(&seq(&[2, 3])).counts(), &[0, 0, 1, 1, 0, 0, 0, 0]);
        assert_eq!(content(&seq(&[7, 7, 7])).counts(), &[0, 0, 0, 0, 0, 0, 0, 3]);
        assert_eq!(
            content(&seq(&[0, 1, 2, 3, 4, 5, 6, 7])).counts(),
            &[1, 1, 1, 1, 1, 1, 1, 1]
        );
    }

    #[test]
    fn class_key_formulas() {
        let key = |letters: &[u8]| seq_class_key(&seq(letters));
        assert_eq!(key(&[4, 5]), ClassKey { c1: 2, c2: -1, c3: 0, n: 2 });
        // all mass on letter 0: only the -d0 term of c3 survives
        for n in 1..=4 {
            assert_eq!(
                key(&vec![0u8; n]),
                ClassKey { c1: 0, c2: 0, c3: -(n as i64), n }
            );
        }
        // two sequences of equal length in distinct classes
        let a = key(&[2, 3]);
        let b = key(&[4, 1]);
        assert_eq!(a, ClassKey { c1: -2, c2: 1, c3: 0, n: 2 });
        assert_eq!(b, ClassKey { c1: 1, c2: -1, c3: 0, n: 2 });
        assert_ne!(a, b);
    }

    #[test]
    fn rank_unrank_examples() {
        assert_eq!(seq(&[0, 0]).rank(), 0);
        assert_eq!(seq(&[1, 0]).rank(), 8);
        assert_eq!(Seq::unrank(2, 19).unwrap(), seq(&[2, 3]));
        assert!(matches!(
            Seq::unrank(2, 64),
            Err(Error::RankOutOfRange { n: 2, rank: 64 })
        ));
    }

    #[test]
    fn rank_unrank_roundtrip_everywhere_up_to_n4() {
        for n in 1..=4 {
            for k in 0..label_count(n) {
                assert_eq!(Seq::unrank(n, k).unwrap().rank(), k);
            }
        }
    }

    #[test]
    fn enumerate_class_examples() {
        let only7: Vec<Seq> =
            enumerate_class(1, ClassKey { c1: 0, c2: 0, c3: 1, n: 1 }).collect();
        assert_eq!(only7, vec![seq(&[7])]);

        let none: Vec<Seq> =
            enumerate_class(1, ClassKey { c1: 5, c2: 5, c3: 5, n: 1 }).collect();
        assert!(none.is_empty());

        // classes partition the 64 two-letter words
        let mut sizes: BTreeMap<ClassKey, usize> = BTreeMap::new();
        for k in 0..64 {
            *sizes.entry(seq_class_key(&Seq::unrank(2, k).unwrap())).or_default() += 1;
        }
        assert_eq!(sizes.values().sum::<usize>(), 64);
        for (key, size) in sizes {
            assert_eq!(enumerate_class(2, key).count(), size);
        }
    }

    #[test]
    fn shift_content_moves_one_unit() {
        let d = content(&seq(&[2]));
        let shifted = d.shift(2, 4).unwrap();
        assert_eq!(shifted.counts(), &[0, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(d.shift(5, 3), None); // d_5 = 0: out of the content family
        assert_eq!(d.shift(2, 2), Some(d)); // i = j cancels
    }

    #[test]
    fn class_key_matches_raw_sum_equivalence() {
        // Independent route: the three raw signed sums (t1,t2,t3) defining
        // the equivalence directly. Equality of keys must coincide with
        // equality of raw sums for every pair of contents, n <= 6.
        fn raw(d: &Content) -> (i64, i64, i64) {
            let c = |k: usize| d.counts()[k] as i64;
            (
                c(7) + c(6) + c(5) + c(4) - c(3) - c(2) - c(1) - c(0),
                c(7) + c(6) - c(5) - c(4) + c(3) + c(2) - c(1) - c(0),
                c(7) - c(6) + c(5) - c(4) + c(3) - c(2) + c(1) - c(0),
            )
        }
        for n in 1..=6 {
            let contents = all_contents(n);
            for a in &contents {
                for b in &contents {
                    assert_eq!(
                        class_key(a) == class_key(b),
                        raw(a) == raw(b),
                        "key/raw disagreement at n={n}: {a:?} vs {b:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn word_count_is_multinomial() {
        assert_eq!(content(&seq(&[7, 7, 7])).word_count(), 1);
        assert_eq!(content(&seq(&[0, 1])).word_count(), 2);
        assert_eq!(content(&seq(&[0, 1, 2, 3, 4, 5, 6, 7])).word_count(), 40320);
        // sums over contents reproduce 8^n
        for n in 1..=5 {
            let total: u64 = all_contents(n).iter().map(Content::word_count).sum();
            assert_eq!(total, label_count(n));
        }
    }

    #[test]
    fn serde_shapes() {
        let s = seq(&[2, 3]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[2,3]");
        let back: Seq = serde_json::from_str("[2,3]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<Seq>("[2,9]").is_err());

        let d = content(&s);
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"counts":[0,0,1,1,0,0,0,0],"n":2}"#
        );
        let key = class_key(&d);
        assert_eq!(
            serde_json::to_string(&key).unwrap(),
            r#"{"c1":-2,"c2":1,"c3":0,"n":2}"#
        );
    }
}
