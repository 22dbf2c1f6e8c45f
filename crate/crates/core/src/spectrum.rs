//! Slice-set algebra.
//!
//! A [`SliceSet`] is a set of spectrum slice indices drawn from a universe of
//! `Ω` slices (the slices of one link). It carries both the continuity
//! information (which slices are free) and, through its [fragments], the
//! contiguity information needed to place a demand of `n` adjacent slices.
//!
//! Sets are stored as fixed-width bit vectors, so intersection and superset
//! tests cost `O(Ω / 64)` word operations. Bits at or above `Ω` are always
//! zero, which keeps equality and hashing canonical.
//!
//! [fragments]: SliceSet::fragments

use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

const WORD: usize = 64;

/// Inline storage covers up to 448 slices without touching the heap.
type Words = SmallVec<[u64; 7]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("slice {index} is outside the universe of {universe} slices")]
    IndexOutOfRange { index: usize, universe: usize },
    #[error("slot {slot} does not fit in a universe of {universe} slices")]
    SlotOutOfRange { slot: Slot, universe: usize },
    #[error("slot {slot} is not fully available")]
    SlotNotAvailable { slot: Slot },
    #[error("slot {slot} overlaps slices that are already available")]
    SlotAlreadyAvailable { slot: Slot },
    #[error("no fragment of {set} holds {slices} contiguous slices")]
    Unsupported { set: SliceSet, slices: usize },
    #[error("invalid slice set {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// A maximal run of contiguous slices inside a [`SliceSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fragment {
    pub start: usize,
    pub len: usize,
}

impl Fragment {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

/// `len` contiguous slices starting at `start`, allocated to one connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub start: usize,
    pub len: usize,
}

impl Slot {
    pub fn new(start: usize, len: usize) -> Self {
        Slot { start, len }
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn range(&self) -> Range<usize> {
        self.start..self.end()
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_run(f, self.start, self.len)
    }
}

fn write_run(f: &mut fmt::Formatter<'_>, start: usize, len: usize) -> fmt::Result {
    if len <= 1 {
        write!(f, "{start}")
    } else {
        write!(f, "{}-{}", start, start + len - 1)
    }
}

/// A set of slice indices in `[0, Ω)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SliceSet {
    universe: usize,
    words: Words,
}

fn word_count(universe: usize) -> usize {
    universe.div_ceil(WORD)
}

/// Mask of the bits `[lo, hi)` within one word, `0 <= lo <= hi <= 64`.
fn span_mask(lo: usize, hi: usize) -> u64 {
    if lo >= hi {
        return 0;
    }
    let upper = if hi == WORD { !0 } else { (1u64 << hi) - 1 };
    upper & (!0u64 << lo)
}

impl SliceSet {
    pub fn empty(universe: usize) -> Self {
        SliceSet {
            universe,
            words: SmallVec::from_elem(0, word_count(universe)),
        }
    }

    /// Every slice of the universe.
    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        set.fill_range(0..universe);
        set
    }

    pub fn from_range(universe: usize, range: Range<usize>) -> Result<Self, SpectrumError> {
        if range.end > universe {
            return Err(SpectrumError::IndexOutOfRange {
                index: range.end - 1,
                universe,
            });
        }
        let mut set = Self::empty(universe);
        set.fill_range(range);
        Ok(set)
    }

    pub fn from_indices<I>(universe: usize, indices: I) -> Result<Self, SpectrumError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = Self::empty(universe);
        for index in indices {
            if index >= universe {
                return Err(SpectrumError::IndexOutOfRange { index, universe });
            }
            set.words[index / WORD] |= 1 << (index % WORD);
        }
        Ok(set)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.universe && self.words[index / WORD] & (1 << (index % WORD)) != 0
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let bit = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i * WORD + bit)
            })
        })
    }

    fn check_universe(&self, other: &SliceSet) {
        assert_eq!(
            self.universe, other.universe,
            "slice sets from different universes"
        );
    }

    pub fn intersect(&self, other: &SliceSet) -> SliceSet {
        self.check_universe(other);
        SliceSet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// `true` iff every member of `other` is also in `self`.
    pub fn is_superset(&self, other: &SliceSet) -> bool {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| b & !a == 0)
    }

    pub fn is_subset(&self, other: &SliceSet) -> bool {
        other.is_superset(self)
    }

    /// Maximal contiguous runs, in ascending order of start.
    pub fn fragments(&self) -> Fragments<'_> {
        Fragments { set: self, pos: 0 }
    }

    pub fn fragment_count(&self) -> usize {
        // A run starts wherever a member's lower neighbour is absent.
        let mut count = 0;
        let mut carry = 0u64;
        for &word in &self.words {
            let shifted = (word << 1) | carry;
            count += (word & !shifted).count_ones() as usize;
            carry = word >> (WORD - 1);
        }
        count
    }

    pub fn largest_fragment(&self) -> usize {
        self.fragments().map(|f| f.len).max().unwrap_or(0)
    }

    /// `true` iff some fragment holds at least `slices` contiguous slices.
    pub fn supports(&self, slices: usize) -> bool {
        self.fragments().any(|f| f.len >= slices)
    }

    /// Union of the fragments holding at least `slices` slices.
    pub fn trim(&self, slices: usize) -> SliceSet {
        if slices <= 1 {
            return self.clone();
        }
        let mut out = SliceSet::empty(self.universe);
        for fragment in self.fragments().filter(|f| f.len >= slices) {
            out.fill_range(fragment.start..fragment.end());
        }
        out
    }

    /// Intersection followed by [`trim`](Self::trim), without an intermediate
    /// allocation when the result is unchanged by trimming.
    pub fn intersect_trim(&self, other: &SliceSet, slices: usize) -> SliceSet {
        let joint = self.intersect(other);
        if slices <= 1 || joint.fragments().all(|f| f.len >= slices) {
            joint
        } else {
            joint.trim(slices)
        }
    }

    /// Removes the slot's slices; every one of them must be present.
    pub fn subtract(&self, slot: Slot) -> Result<SliceSet, SpectrumError> {
        self.check_slot(slot)?;
        if !self.contains_range(slot.range()) {
            return Err(SpectrumError::SlotNotAvailable { slot });
        }
        let mut out = self.clone();
        out.clear_range(slot.range());
        Ok(out)
    }

    /// Inserts the slot's slices; none of them may be present.
    pub fn add(&self, slot: Slot) -> Result<SliceSet, SpectrumError> {
        self.check_slot(slot)?;
        if self.intersects_range(slot.range()) {
            return Err(SpectrumError::SlotAlreadyAvailable { slot });
        }
        let mut out = self.clone();
        out.fill_range(slot.range());
        Ok(out)
    }

    fn check_slot(&self, slot: Slot) -> Result<(), SpectrumError> {
        if slot.len == 0 || slot.end() > self.universe {
            return Err(SpectrumError::SlotOutOfRange {
                slot,
                universe: self.universe,
            });
        }
        Ok(())
    }

    pub fn contains_range(&self, range: Range<usize>) -> bool {
        self.range_words(range)
            .all(|(i, mask)| self.words[i] & mask == mask)
    }

    fn intersects_range(&self, range: Range<usize>) -> bool {
        self.range_words(range)
            .any(|(i, mask)| self.words[i] & mask != 0)
    }

    fn fill_range(&mut self, range: Range<usize>) {
        for (i, mask) in self.range_words(range) {
            self.words[i] |= mask;
        }
    }

    fn clear_range(&mut self, range: Range<usize>) {
        for (i, mask) in self.range_words(range) {
            self.words[i] &= !mask;
        }
    }

    /// Per-word masks covering `range`.
    fn range_words(&self, range: Range<usize>) -> impl Iterator<Item = (usize, u64)> {
        let Range { start, end } = range;
        let (first, last) = if start < end {
            (start / WORD, (end - 1) / WORD + 1)
        } else {
            (0, 0)
        };
        (first..last).map(move |i| {
            let lo = start.saturating_sub(i * WORD).min(WORD);
            let hi = (end - i * WORD).min(WORD);
            (i, span_mask(lo, hi))
        })
    }

    /// First member at or after `from`.
    fn next_member(&self, from: usize) -> Option<usize> {
        if from >= self.universe {
            return None;
        }
        let mut i = from / WORD;
        let mut bits = self.words[i] & (!0u64 << (from % WORD));
        loop {
            if bits != 0 {
                return Some(i * WORD + bits.trailing_zeros() as usize);
            }
            i += 1;
            if i == self.words.len() {
                return None;
            }
            bits = self.words[i];
        }
    }

    /// First non-member at or after `from`, or `Ω` if there is none.
    fn next_gap(&self, from: usize) -> usize {
        if from >= self.universe {
            return self.universe;
        }
        let mut i = from / WORD;
        let mut bits = !self.words[i] & (!0u64 << (from % WORD));
        loop {
            if bits != 0 {
                return (i * WORD + bits.trailing_zeros() as usize).min(self.universe);
            }
            i += 1;
            if i == self.words.len() {
                return self.universe;
            }
            bits = !self.words[i];
        }
    }

    /// Parses the textual form, e.g. `"1-2,5,7-9"`; `"-"` or `""` is empty.
    pub fn parse(text: &str, universe: usize) -> Result<Self, SpectrumError> {
        let err = |reason: String| SpectrumError::Parse {
            text: text.to_string(),
            reason,
        };
        let mut set = SliceSet::empty(universe);
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "-" {
            return Ok(set);
        }
        for part in trimmed.split(',') {
            let (lo, hi) = match part.split_once('-') {
                Some((a, b)) => (a, b),
                None => (part, part),
            };
            let lo: usize = lo
                .trim()
                .parse()
                .map_err(|_| err(format!("bad index in {part:?}")))?;
            let hi: usize = hi
                .trim()
                .parse()
                .map_err(|_| err(format!("bad index in {part:?}")))?;
            if hi < lo {
                return Err(err(format!("descending range {part:?}")));
            }
            if hi >= universe {
                return Err(SpectrumError::IndexOutOfRange {
                    index: hi,
                    universe,
                });
            }
            set.fill_range(lo..hi + 1);
        }
        Ok(set)
    }
}

/// Lexicographic order of the ascending member sequences.
impl Ord for SliceSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe
            .cmp(&other.universe)
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for SliceSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Comma-separated inclusive runs, e.g. `1-2,5,7-9`; the empty set is `-`.
impl fmt::Display for SliceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for fragment in self.fragments() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write_run(f, fragment.start, fragment.len)?;
        }
        if first {
            f.write_str("-")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SliceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SliceSet({}/{})", self, self.universe)
    }
}

/// Parses with the universe given as `<set>/<Ω>`, the form produced by `Debug`.
impl FromStr for SliceSet {
    type Err = SpectrumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (set, universe) = s.rsplit_once('/').ok_or_else(|| SpectrumError::Parse {
            text: s.to_string(),
            reason: "expected <set>/<universe>".into(),
        })?;
        let universe = universe.trim().parse().map_err(|_| SpectrumError::Parse {
            text: s.to_string(),
            reason: "bad universe".into(),
        })?;
        SliceSet::parse(set, universe)
    }
}

/// Iterator over the maximal runs of a [`SliceSet`].
pub struct Fragments<'a> {
    set: &'a SliceSet,
    pos: usize,
}

impl Iterator for Fragments<'_> {
    type Item = Fragment;

    fn next(&mut self) -> Option<Fragment> {
        let start = self.set.next_member(self.pos)?;
        let end = self.set.next_gap(start);
        self.pos = end;
        Some(Fragment {
            start,
            len: end - start,
        })
    }
}
