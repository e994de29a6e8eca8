/// Maximum bipartite matching by augmenting paths (Kuhn's algorithm).
///
/// `adj[l]` lists the right vertices adjacent to left vertex `l`, in the order
/// they should be tried. `seed` is an initial partial matching (left → right)
/// that augmentation may rearrange. Returns the left → right assignment.
pub(crate) fn max_matching(
    adj: &[Vec<usize>],
    right_count: usize,
    seed: Vec<Option<usize>>,
) -> Vec<Option<usize>> {
    let mut left_of = vec![None; right_count];
    for (l, r) in seed.iter().enumerate() {
        if let Some(r) = *r {
            left_of[r] = Some(l);
        }
    }
    let mut right_of = seed;
    right_of.resize(adj.len(), None);
    for l in 0..adj.len() {
        if right_of[l].is_some() {
            continue;
        }
        let mut visited = vec![false; right_count];
        augment(l, adj, &mut visited, &mut left_of, &mut right_of);
    }
    right_of
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    visited: &mut [bool],
    left_of: &mut [Option<usize>],
    right_of: &mut [Option<usize>],
) -> bool {
    for &r in &adj[l] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        let free = match left_of[r] {
            None => true,
            Some(other) => augment(other, adj, visited, left_of, right_of),
        };
        if free {
            left_of[r] = Some(l);
            right_of[l] = Some(r);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn augments_through_existing_match() {
        // l0 can use r0 or r1, l1 only r0.
        let adj = vec![vec![0, 1], vec![0]];
        let m = max_matching(&adj, 2, vec![Some(0), None]);
        assert_eq!(m, vec![Some(1), Some(0)]);
    }

    #[test]
    fn reports_unmatched() {
        let adj = vec![vec![0], vec![0]];
        let m = max_matching(&adj, 1, vec![]);
        assert_eq!(m.iter().filter(|x| x.is_some()).count(), 1);
    }
}
