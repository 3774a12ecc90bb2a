use super::{check_input, ActiveSet, AgglomerateOptions};
use crate::dendrogram::Dendrogram;
use crate::error::{Error, Result};
use crate::matrix::DissimilarityMatrix;
use crate::method::LinkageMethod;

/// Nearest-neighbor-chain agglomeration, `O(n²)` for reducible methods.
///
/// The chain follows nearest neighbors until two clusters are each other's
/// nearest neighbor, merges them and resumes from what is left of the chain.
/// Merges are found out of height order, so they are re-sorted before node
/// ids are assigned.
pub fn agglomerate_nnchain(
    dissim: &DissimilarityMatrix,
    method: LinkageMethod,
    opts: &AgglomerateOptions,
) -> Result<Dendrogram> {
    if !method.is_reducible() {
        return Err(Error::NonReducible(method));
    }
    let masses = check_input(dissim, method, opts)?;
    let n = dissim.n();
    let mut set = ActiveSet::new(dissim, method, masses);

    let mut merges: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(n - 1);
    // sort key: a merge never sorts ahead of the merges that built its children
    let mut sort_key: Vec<f64> = Vec::with_capacity(n - 1);
    let mut last_merge: Vec<Option<usize>> = vec![None; n];
    let mut chain: Vec<usize> = Vec::with_capacity(n);

    while set.remaining() > 1 {
        if chain.is_empty() {
            chain.push(set.alive[0]);
        }
        loop {
            let a = chain[chain.len() - 1];
            let prev = chain.len().checked_sub(2).map(|i| chain[i]);
            let (mut best, mut best_d) = match prev {
                Some(p) => (p, set.d(a, p)),
                None => (usize::MAX, f64::INFINITY),
            };
            for &k in &set.alive {
                if k == a {
                    continue;
                }
                let d = set.d(a, k);
                if d < best_d {
                    best = k;
                    best_d = d;
                }
            }
            if Some(best) == prev {
                break;
            }
            chain.push(best);
        }
        let a = chain.pop().expect("chain holds a reciprocal pair");
        let b = chain.pop().expect("chain holds a reciprocal pair");
        let (height, size) = set.merge(a, b)?;
        let key = [a, b]
            .iter()
            .filter_map(|&s| last_merge[s])
            .map(|m| sort_key[m])
            .fold(height, f64::max);
        last_merge[a.min(b)] = Some(merges.len());
        merges.push((a, b, height, size));
        sort_key.push(key);
    }

    let mut idx: Vec<usize> = (0..merges.len()).collect();
    idx.sort_by(|&x, &y| sort_key[x].total_cmp(&sort_key[y]));
    let ordered: Vec<_> = idx.into_iter().map(|i| merges[i]).collect();
    Dendrogram::from_slot_merges(n, &ordered, method, dissim.scale())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::agglomerate_naive;
    use crate::matrix::{DataMatrix, Scale};

    #[test]
    fn matches_naive_on_line() {
        let sq = DataMatrix::from_column(&[0.0, 1.0, 10.0]).unwrap().squared_euclidean();
        let opts = AgglomerateOptions::default();
        let chain = agglomerate_nnchain(&sq, LinkageMethod::WardD, &opts).unwrap();
        let naive = agglomerate_naive(&sq, LinkageMethod::WardD, &opts).unwrap();
        assert_eq!(chain, naive);
    }

    #[test]
    fn two_points_merge_once() {
        let d = DissimilarityMatrix::new(2, vec![2.5], Scale::Plain).unwrap();
        let dend = agglomerate_nnchain(&d, LinkageMethod::WardD2, &AgglomerateOptions::default()).unwrap();
        assert_eq!(dend.heights(), vec![2.5]);
        assert_eq!(dend.root_size(), 2.0);
    }

    #[test]
    fn rejects_non_reducible_methods() {
        let d = DissimilarityMatrix::new(3, vec![4.0, 4.0, 4.0], Scale::Squared).unwrap();
        for m in [LinkageMethod::Centroid, LinkageMethod::Median] {
            assert!(matches!(
                agglomerate_nnchain(&d, m, &AgglomerateOptions::default()),
                Err(Error::NonReducible(_))
            ));
        }
    }

    #[test]
    fn out_of_order_merges_are_resorted() {
        // chain starts at 0 but the closest pair is (2, 3)
        let data = DataMatrix::from_column(&[0.0, 3.0, 10.0, 10.5]).unwrap();
        let sq = data.squared_euclidean();
        let opts = AgglomerateOptions::default();
        let chain = agglomerate_nnchain(&sq, LinkageMethod::WardD, &opts).unwrap();
        let naive = agglomerate_naive(&sq, LinkageMethod::WardD, &opts).unwrap();
        assert_eq!(chain, naive);
        let h = chain.heights();
        assert!(h.windows(2).all(|w| w[0] <= w[1]));
    }
}
