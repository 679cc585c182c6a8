//! Augmenting-path bipartite matching.
//!
//! Two flavours: [`Matcher`] over adjacency lists with reusable buffers, and
//! [`bitset_perfect_matching`] over `u128` vertex masks, which allocates
//! nothing and is what the configuration-graph solver calls in its hot loop.

/// Kuhn's algorithm with buffers kept between calls.
#[derive(Debug, Default)]
pub struct Matcher {
    match_right: Vec<usize>,
    seen: Vec<u32>,
    stamp: u32,
}

const FREE: usize = usize::MAX;

impl Matcher {
    pub fn new(right: usize) -> Self {
        Matcher {
            match_right: vec![FREE; right],
            seen: vec![0; right],
            stamp: 0,
        }
    }

    /// Maximum matching size for `adj[l]` = right neighbours of left vertex `l`.
    pub fn maximum(&mut self, adj: &[Vec<usize>]) -> usize {
        self.match_right.iter_mut().for_each(|m| *m = FREE);
        let mut size = 0;
        for l in 0..adj.len() {
            self.stamp = self.stamp.wrapping_add(1);
            if self.stamp == 0 {
                self.seen.iter_mut().for_each(|s| *s = 0);
                self.stamp = 1;
            }
            if self.augment(l, adj) {
                size += 1;
            }
        }
        size
    }

    /// Left-to-right assignment if a matching saturating both sides exists.
    pub fn perfect(&mut self, adj: &[Vec<usize>]) -> Option<Vec<usize>> {
        if adj.len() != self.match_right.len() || self.maximum(adj) != adj.len() {
            return None;
        }
        let mut out = vec![FREE; adj.len()];
        for (r, &l) in self.match_right.iter().enumerate() {
            out[l] = r;
        }
        Some(out)
    }

    fn augment(&mut self, l: usize, adj: &[Vec<usize>]) -> bool {
        for &r in &adj[l] {
            if self.seen[r] == self.stamp {
                continue;
            }
            self.seen[r] = self.stamp;
            if self.match_right[r] == FREE || self.augment(self.match_right[r], adj) {
                self.match_right[r] = l;
                return true;
            }
        }
        false
    }
}

/// Whether the guards on `left` can be moved one-to-one onto `right` when a
/// guard on vertex `v` may move to any vertex of `closed[v]`.
///
/// Both masks must have the same popcount; vertices are bit positions `< 128`.
pub fn bitset_perfect_matching(left: u128, right: u128, closed: &[u128]) -> bool {
    if left.count_ones() != right.count_ones() {
        return false;
    }
    // everyone stays put
    if left == right {
        return true;
    }
    let mut owner = [u8::MAX; 128];
    let mut rest = left;
    while rest != 0 {
        let l = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let mut visited = 0u128;
        if !augment_bits(l, right, closed, &mut owner, &mut visited) {
            return false;
        }
    }
    true
}

fn augment_bits(l: usize, right: u128, closed: &[u128], owner: &mut [u8; 128], visited: &mut u128) -> bool {
    let mut cand = closed[l] & right & !*visited;
    while cand != 0 {
        let r = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        *visited |= 1u128 << r;
        let o = owner[r];
        if o == u8::MAX || augment_bits(o as usize, right, closed, owner, visited) {
            owner[r] = l as u8;
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kuhn_needs_augmenting_path() {
        // 0-{0,1}, 1-{0}: greedy 0->0 must be undone.
        let adj = vec![vec![0, 1], vec![0]];
        let mut m = Matcher::new(2);
        assert_eq!(m.perfect(&adj), Some(vec![1, 0]));
    }

    #[test]
    fn kuhn_reports_deficiency() {
        let adj = vec![vec![0], vec![0], vec![1, 2]];
        let mut m = Matcher::new(3);
        assert_eq!(m.maximum(&adj), 2);
        assert_eq!(m.perfect(&adj), None);
    }

    #[test]
    fn bitset_on_path() {
        // path 0-1-2-3
        let closed: Vec<u128> = (0..4)
            .map(|v: i32| {
                [v - 1, v, v + 1]
                    .iter()
                    .filter(|&&u| (0..4).contains(&u))
                    .fold(0u128, |acc, &u| acc | 1 << u)
            })
            .collect();
        assert!(bitset_perfect_matching(0b0101, 0b1010, &closed));
        assert!(!bitset_perfect_matching(0b0001, 0b0100, &closed));
        assert!(bitset_perfect_matching(0b0011, 0b0110, &closed));
    }
}
