use crate::error::{Error, Result};

/// Sorted set of distinct indices into some ambient dimension.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    /// Validates that `indices` is strictly increasing.
    pub fn from_sorted(indices: Vec<usize>) -> Result<Self> {
        if let Some(pos) = indices.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedIndexSet(pos + 1));
        }
        Ok(IndexSet(indices))
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        IndexSet(indices)
    }

    pub fn range(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    /// All of `0..n` except `skip`.
    pub fn all_except(n: usize, skip: usize) -> Self {
        IndexSet((0..n).filter(|&i| i != skip).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Errors if any index is `>= dim`.
    pub fn check_bound(&self, dim: usize) -> Result<()> {
        match self.max() {
            Some(m) if m >= dim => Err(Error::IndexOutOfRange { index: m, n: dim }),
            _ => Ok(()),
        }
    }

    pub fn insert(&mut self, i: usize) -> bool {
        match self.0.binary_search(&i) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, i);
                true
            }
        }
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        IndexSet(out)
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&i| !other.contains(i)).collect())
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&i| other.contains(i)).collect())
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    /// Maps each element through `map` (e.g. local to global ids) and re-sorts.
    pub fn map_through(&self, map: &[usize]) -> IndexSet {
        IndexSet::from_unsorted(self.0.iter().map(|&i| map[i]).collect())
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        IndexSet::from_unsorted(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a IndexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl std::ops::Index<usize> for IndexSet {
    type Output = usize;

    fn index(&self, pos: usize) -> &usize {
        &self.0[pos]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_duplicates() {
        assert!(IndexSet::from_sorted(vec![0, 2, 2]).is_err());
        assert!(IndexSet::from_sorted(vec![3, 1]).is_err());
        assert!(IndexSet::from_sorted(vec![0, 1, 5]).is_ok());
    }

    #[test]
    fn set_algebra() {
        let a = IndexSet::from_unsorted(vec![5, 1, 3, 1]);
        let b: IndexSet = [3, 4, 5].into_iter().collect();
        assert_eq!(a.as_slice(), &[1, 3, 5]);
        assert_eq!(a.union(&b).as_slice(), &[1, 3, 4, 5]);
        assert_eq!(a.difference(&b).as_slice(), &[1]);
        assert_eq!(a.intersection(&b).as_slice(), &[3, 5]);
        assert!(IndexSet::from_unsorted(vec![3]).is_subset(&a));
        assert_eq!(IndexSet::all_except(4, 2).as_slice(), &[0, 1, 3]);
        assert!(a.check_bound(5).is_err());
        assert!(a.check_bound(6).is_ok());
    }
}
