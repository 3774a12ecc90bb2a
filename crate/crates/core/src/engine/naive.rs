use super::{check_input, ActiveSet, AgglomerateOptions};
use crate::dendrogram::Dendrogram;
use crate::error::Result;
use crate::matrix::DissimilarityMatrix;
use crate::method::LinkageMethod;

/// Stored-dissimilarity agglomeration that rescans every surviving pair for
/// the global minimum at each step. `O(n³)`; kept simple on purpose since it
/// serves as the reference for the nearest-neighbor chain.
pub fn agglomerate_naive(
    dissim: &DissimilarityMatrix,
    method: LinkageMethod,
    opts: &AgglomerateOptions,
) -> Result<Dendrogram> {
    let masses = check_input(dissim, method, opts)?;
    let n = dissim.n();
    let mut set = ActiveSet::new(dissim, method, masses);
    let mut merges = Vec::with_capacity(n - 1);
    while set.remaining() > 1 {
        let (a, b) = closest_pair(&set);
        let (height, size) = set.merge(a, b)?;
        merges.push((a, b, height, size));
    }
    Dendrogram::from_slot_merges(n, &merges, method, dissim.scale())
}

fn closest_pair(set: &ActiveSet) -> (usize, usize) {
    let mut best = (set.alive[0], set.alive[1]);
    let mut best_d = f64::INFINITY;
    for (ai, &a) in set.alive.iter().enumerate() {
        for &b in &set.alive[ai + 1..] {
            let d = set.d(a, b);
            // strict: the first pair in (a, b) order wins ties
            if d < best_d {
                best_d = d;
                best = (a, b);
            }
        }
    }
    best
}
