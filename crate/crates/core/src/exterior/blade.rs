use std::cmp::Ordering;

/// A strictly increasing index tuple, stored as a bit mask over coordinate indices.
///
/// `Blade` stands for both `dx_{i1}∧...∧dx_{ik}` and `∂_{i1}∧...∧∂_{ik}`;
/// the owning element decides the variance.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Blade(u64);

/// `(-1)^k` as a small integer.
pub(crate) fn parity_sign(k: u32) -> i8 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn from_bits(bits: u64) -> Self {
        Blade(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn single(i: usize) -> Self {
        Blade(1u64 << i)
    }

    /// Blade of a strictly increasing tuple.
    pub fn from_sorted(indices: &[usize]) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]), "indices must increase");
        Blade(indices.iter().fold(0, |acc, &i| acc | (1u64 << i)))
    }

    /// Sorts an arbitrary index sequence, returning the permutation sign, or
    /// `None` when an index repeats.
    pub fn from_sequence(indices: &[usize]) -> Option<(i8, Blade)> {
        let mut acc = Blade::EMPTY;
        let mut sign = 1i8;
        for &i in indices {
            let (s, b) = acc.merge(Blade::single(i))?;
            sign *= s;
            acc = b;
        }
        Some((sign, acc))
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1u64 << i) != 0
    }

    pub fn is_subset_of(self, other: Blade) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn union(self, other: Blade) -> Blade {
        Blade(self.0 | other.0)
    }

    pub fn difference(self, other: Blade) -> Blade {
        Blade(self.0 & !other.0)
    }

    /// `self ∧ other` on basis elements: `None` when the tuples overlap,
    /// otherwise the sign of the merge permutation and the merged blade.
    pub fn merge(self, other: Blade) -> Option<(i8, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let inversions: u32 = other
            .indices()
            .map(|j| self.0.checked_shr(j as u32 + 1).unwrap_or(0).count_ones())
            .sum();
        Some((parity_sign(inversions), Blade(self.0 | other.0)))
    }

    /// Writes `outer = sign · (inner ∧ rest)`; `None` unless `inner ⊆ outer`.
    pub fn split_off(inner: Blade, outer: Blade) -> Option<(i8, Blade)> {
        if !inner.is_subset_of(outer) {
            return None;
        }
        let rest = outer.difference(inner);
        let (sign, _) = inner.merge(rest)?;
        Some((sign, rest))
    }

    /// All blades of a given grade in a chart of dimension `dim`, in canonical order.
    pub fn all_of_grade(dim: usize, grade: usize) -> Vec<Blade> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(grade);
        fn rec(start: usize, dim: usize, grade: usize, cur: &mut Vec<usize>, out: &mut Vec<Blade>) {
            if cur.len() == grade {
                out.push(Blade::from_sorted(cur));
                return;
            }
            for i in start..dim {
                cur.push(i);
                rec(i + 1, dim, grade, cur, out);
                cur.pop();
            }
        }
        if grade <= dim {
            rec(0, dim, grade, &mut current, &mut out);
        }
        out
    }

    /// Every blade of a chart of dimension `dim`, grade by grade.
    pub fn all(dim: usize) -> Vec<Blade> {
        (0..=dim).flat_map(|k| Self::all_of_grade(dim, k)).collect()
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_signs() {
        let x = Blade::single(0);
        let y = Blade::single(1);
        assert_eq!(x.merge(y), Some((1, Blade::from_sorted(&[0, 1]))));
        assert_eq!(y.merge(x), Some((-1, Blade::from_sorted(&[0, 1]))));
        assert_eq!(x.merge(x), None);
        // (2) ∧ (0,1): two inversions
        assert_eq!(Blade::single(2).merge(Blade::from_sorted(&[0, 1])).unwrap().0, 1);
        // (1) ∧ (0,2): one inversion
        assert_eq!(Blade::single(1).merge(Blade::from_sorted(&[0, 2])).unwrap().0, -1);
    }

    #[test]
    fn sequence_sorting_sign() {
        assert_eq!(Blade::from_sequence(&[2, 0, 1]).unwrap().0, 1);
        assert_eq!(Blade::from_sequence(&[1, 0, 2]).unwrap().0, -1);
        assert!(Blade::from_sequence(&[1, 1]).is_none());
    }

    #[test]
    fn split_off_first_slots() {
        let xyz = Blade::from_sorted(&[0, 1, 2]);
        assert_eq!(Blade::split_off(Blade::single(1), xyz), Some((-1, Blade::from_sorted(&[0, 2]))));
        assert_eq!(Blade::split_off(Blade::single(3), xyz), None);
    }

    #[test]
    fn canonical_order_and_enumeration() {
        let blades = Blade::all(3);
        assert_eq!(blades.len(), 8);
        let mut sorted = blades.clone();
        sorted.sort();
        assert_eq!(blades, sorted);
        assert_eq!(Blade::all_of_grade(4, 2).len(), 6);
        assert!(Blade::from_sorted(&[0, 2]) < Blade::from_sorted(&[1, 2]));
    }
}
