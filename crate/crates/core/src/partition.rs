use crate::error::{Error, Result};
use crate::index_set::IndexSet;

/// Assignment of every vertex to one of `k` nonempty clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Checks that ids are in `0..k` and every cluster is used.
    pub fn new(assignment: Vec<usize>, k: usize) -> Result<Self> {
        let mut used = vec![false; k];
        for (v, &c) in assignment.iter().enumerate() {
            if c >= k {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} has cluster id {c} but k = {k}"
                )));
            }
            used[c] = true;
        }
        if let Some(empty) = used.iter().position(|u| !u) {
            return Err(Error::InvalidParameter(format!("cluster {empty} is empty")));
        }
        Ok(Partition { assignment, k })
    }

    /// Renumbers arbitrary labels to `0..k` in order of first appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Partition {
            assignment,
            k: map.len(),
        }
    }

    /// Contiguous blocks of the given sizes.
    pub fn contiguous(sizes: &[usize]) -> Result<Self> {
        let assignment = sizes
            .iter()
            .enumerate()
            .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
            .collect();
        Partition::new(assignment, sizes.len())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn cluster(&self, c: usize) -> IndexSet {
        self.assignment
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a == c)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn clusters(&self) -> Vec<IndexSet> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out.into_iter()
            .map(|v| IndexSet::from_sorted(v).expect("built in order"))
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &c in &self.assignment {
            s[c] += 1;
        }
        s
    }

    /// Indicator vector `1_C` of cluster `c`.
    pub fn indicator(&self, c: usize) -> Vec<f64> {
        self.assignment
            .iter()
            .map(|&a| if a == c { 1.0 } else { 0.0 })
            .collect()
    }

    /// Relabels vertex `v` as `perm[v]`, keeping cluster ids.
    pub fn permuted(&self, perm: &[usize]) -> Partition {
        let mut assignment = vec![0; self.n()];
        for (v, &c) in self.assignment.iter().enumerate() {
            assignment[perm[v]] = c;
        }
        Partition { assignment, k: self.k }
    }

    /// Restriction to `keep`, renumbered as the induced subgraph would be.
    /// Clusters that vanish are dropped and ids compacted.
    pub fn restrict(&self, keep: &IndexSet) -> Partition {
        let labels: Vec<usize> = keep.iter().map(|v| self.assignment[v]).collect();
        Partition::from_labels(&labels)
    }
}
