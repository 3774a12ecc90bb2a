use crate::error::{Error, Result};

/// Assignment of each observation to one of `k` non-empty clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    pub fn new(assignment: Vec<usize>, k: usize) -> Result<Self> {
        let mut counts = vec![0usize; k];
        for (i, &c) in assignment.iter().enumerate() {
            if c >= k {
                return Err(Error::InvalidPartition(format!(
                    "observation {i} assigned to cluster {c}, but k = {k}"
                )));
            }
            counts[c] += 1;
        }
        if let Some(empty) = counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidPartition(format!("cluster {empty} is empty")));
        }
        Ok(Partition { assignment, k })
    }

    /// Infers `k` as one more than the largest label.
    pub fn from_assignment(assignment: Vec<usize>) -> Result<Self> {
        let k = assignment.iter().max().map_or(0, |m| m + 1);
        Self::new(assignment, k)
    }

    pub fn single(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            k: usize::from(n > 0),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            k: n,
        }
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == cluster)
            .map(|(i, _)| i)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_cluster_and_out_of_range() {
        assert!(Partition::new(vec![0, 0, 2], 3).is_err());
        assert!(Partition::new(vec![0, 3], 2).is_err());
        let p = Partition::from_assignment(vec![1, 0, 1]).unwrap();
        assert_eq!(p.k(), 2);
        assert_eq!(p.members(1), vec![0, 2]);
    }
}
