use std::collections::BTreeMap;

use serde::Serialize;

use crate::mapping::TransitionState;

/// Signed occurrences of `{a, b}` along all paths, the sign alternating from
/// `+1` at the first step of each path.
pub fn weight_along_path(edge: (usize, usize), paths: &[Vec<usize>]) -> i32 {
    let (a, b) = edge;
    let mut total = 0;
    for path in paths {
        let mut sigma = 1;
        for w in path.windows(2) {
            if (w[0] == a && w[1] == b) || (w[0] == b && w[1] == a) {
                total += sigma;
            }
            sigma = -sigma;
        }
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Step {
    pub from: usize,
    pub to: usize,
    pub sign: i32,
}

/// Ordered, signed steps of a search, one group per closed path.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MechanismTrace {
    pub paths: Vec<Vec<Step>>,
}

impl MechanismTrace {
    /// `walks` are closed: each ends with its first vertex.
    pub fn from_walks(walks: &[Vec<usize>]) -> Self {
        let paths = walks
            .iter()
            .map(|w| {
                w.windows(2)
                    .enumerate()
                    .map(|(t, s)| Step {
                        from: s[0],
                        to: s[1],
                        sign: if t % 2 == 0 { 1 } else { -1 },
                    })
                    .collect()
            })
            .collect();
        MechanismTrace { paths }
    }

    pub fn walks(&self) -> Vec<Vec<usize>> {
        self.paths
            .iter()
            .map(|p| {
                let mut w: Vec<usize> = p.iter().map(|s| s.from).collect();
                if let Some(last) = p.last() {
                    w.push(last.to);
                }
                w
            })
            .collect()
    }

    pub fn steps(&self) -> impl Iterator<Item = &Step> {
        self.paths.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.paths.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-pair totals of the signed steps.
    pub fn replay(&self) -> TransitionState {
        TransitionState::from_edges(self.steps().map(|s| ((s.from, s.to), s.sign)))
    }

    /// True if no pair is used with both signs.
    pub fn sign_consistent(&self) -> bool {
        let mut seen: BTreeMap<(usize, usize), i32> = BTreeMap::new();
        for s in self.steps() {
            let k = (s.from.min(s.to), s.from.max(s.to));
            if *seen.entry(k).or_insert(s.sign) != s.sign {
                return false;
            }
        }
        true
    }

    /// Signs alternate inside every path, starting with `+1`.
    pub fn alternates(&self) -> bool {
        self.paths.iter().all(|p| {
            p.iter()
                .enumerate()
                .all(|(t, s)| s.sign == if t % 2 == 0 { 1 } else { -1 })
                && p.len() % 2 == 0
                && p.first().map(|f| f.from) == p.last().map(|l| l.to)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_along_path_signs() {
        let paths = vec![vec![0, 1, 2, 3]];
        assert_eq!(weight_along_path((5, 6), &paths), 0);
        assert_eq!(weight_along_path((0, 1), &paths), 1);
        assert_eq!(weight_along_path((2, 1), &paths), -1);
        let paths = vec![vec![0, 1, 0, 1]];
        assert_eq!(weight_along_path((0, 1), &paths), 1);
        let paths = vec![vec![0, 1, 2, 1, 0]];
        assert_eq!(weight_along_path((1, 0), &paths), 0);
        // Steps 1 and 3 around a loop at 5.
        let paths = vec![vec![4, 5, 5, 4]];
        assert_eq!(weight_along_path((4, 5), &paths), 2);
        assert_eq!(weight_along_path((5, 5), &paths), -1);
    }

    #[test]
    fn replay_of_a_closed_walk() {
        let t = MechanismTrace::from_walks(&[vec![0, 1, 2, 3, 0]]);
        assert!(t.alternates());
        assert!(t.sign_consistent());
        let ts = t.replay();
        assert_eq!(ts.weight(0, 1), 1);
        assert_eq!(ts.weight(3, 0), -1);
        assert_eq!(t.walks(), vec![vec![0, 1, 2, 3, 0]]);
    }
}
