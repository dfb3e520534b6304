//! Maximum bipartite matching by augmenting paths (Kuhn's algorithm).
//!
//! Left vertices are processed in ascending order and each adjacency list is
//! scanned in the order given, so the result depends only on the input.

/// Returns, for every left vertex, the right vertex it is matched to.
pub fn max_matching(n_right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let mut match_right: Vec<Option<usize>> = vec![None; n_right];
    for left in 0..adj.len() {
        let mut visited = vec![false; n_right];
        augment(left, adj, &mut visited, &mut match_right);
    }
    let mut match_left = vec![None; adj.len()];
    for (r, l) in match_right.iter().enumerate() {
        if let Some(l) = *l {
            match_left[l] = Some(r);
        }
    }
    match_left
}

fn augment(left: usize, adj: &[Vec<usize>], visited: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
    for &r in &adj[left] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        let free = match match_right[r] {
            None => true,
            Some(other) => augment(other, adj, visited, match_right),
        };
        if free {
            match_right[r] = Some(left);
            return true;
        }
    }
    false
}
