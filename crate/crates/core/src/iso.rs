//! Label-preserving graph isomorphism for small, sparse vertex- and
//! edge-colored graphs.
//!
//! The matcher is VF2-flavoured: vertices of the first graph are visited in a
//! connectivity-first order and each is matched against unmatched vertices of
//! the second graph with the same refined color. Colors are refined jointly
//! on both graphs (1-dimensional Weisfeiler-Leman) before the search, which
//! both rejects most non-isomorphic pairs immediately and keeps backtracking
//! shallow on molecule-like graphs.

/// An undirected graph with `u64` vertex colors and `u64` edge colors.
/// Loops are allowed and carry their own color.
#[derive(Debug, Clone)]
pub struct ColoredGraph {
    colors: Vec<u64>,
    adj: Vec<Vec<(usize, u64)>>,
    loops: Vec<Option<u64>>,
    matrix: Vec<Option<u64>>,
}

impl ColoredGraph {
    pub fn new(colors: Vec<u64>) -> Self {
        let n = colors.len();
        ColoredGraph {
            colors,
            adj: vec![Vec::new(); n],
            loops: vec![None; n],
            matrix: vec![None; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Adds (or overwrites) the edge `{u, v}`.
    pub fn set_edge(&mut self, u: usize, v: usize, color: u64) {
        let n = self.len();
        if u == v {
            self.loops[u] = Some(color);
            self.matrix[u * n + u] = Some(color);
            return;
        }
        if self.matrix[u * n + v].is_none() {
            self.adj[u].push((v, color));
            self.adj[v].push((u, color));
        } else {
            for (x, c) in self.adj[u].iter_mut() {
                if *x == v {
                    *c = color;
                }
            }
            for (x, c) in self.adj[v].iter_mut() {
                if *x == u {
                    *c = color;
                }
            }
        }
        self.matrix[u * n + v] = Some(color);
        self.matrix[v * n + u] = Some(color);
    }

    pub fn set_color(&mut self, v: usize, color: u64) {
        self.colors[v] = color;
    }

    pub fn color(&self, v: usize) -> u64 {
        self.colors[v]
    }

    pub fn edge(&self, u: usize, v: usize) -> Option<u64> {
        self.matrix[u * self.len() + v]
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adj[v]
    }
}

pub(crate) fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

pub(crate) fn combine(a: u64, b: u64) -> u64 {
    mix(a ^ mix(b).rotate_left(17))
}

fn refine_once(g: &ColoredGraph, colors: &[u64]) -> Vec<u64> {
    (0..g.len())
        .map(|v| {
            let mut nbr: Vec<u64> = g.adj[v]
                .iter()
                .map(|&(u, c)| combine(c, colors[u]))
                .collect();
            nbr.sort_unstable();
            let mut h = combine(colors[v], g.loops[v].map_or(0, |c| mix(c) | 1));
            for x in nbr {
                h = combine(h, x);
            }
            h
        })
        .collect()
}

fn class_count(colors: &[u64]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Stable joint color refinement of two graphs. Returns `None` as soon as the
/// color histograms diverge (the graphs cannot be isomorphic).
fn refine_pair(a: &ColoredGraph, b: &ColoredGraph) -> Option<(Vec<u64>, Vec<u64>)> {
    let mut ca = a.colors.clone();
    let mut cb = b.colors.clone();
    let mut classes = 0;
    loop {
        let mut sa = ca.clone();
        let mut sb = cb.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        let now = class_count(&ca);
        if now == classes {
            return Some((ca, cb));
        }
        classes = now;
        ca = refine_once(a, &ca);
        cb = refine_once(b, &cb);
    }
}

/// An isomorphism invariant: equal for isomorphic graphs.
pub fn invariant(g: &ColoredGraph) -> u64 {
    let mut colors = g.colors.clone();
    let mut classes = 0;
    loop {
        let now = class_count(&colors);
        if now == classes {
            break;
        }
        classes = now;
        colors = refine_once(g, &colors);
    }
    colors.sort_unstable();
    colors
        .into_iter()
        .fold(mix(g.len() as u64), combine)
}

struct Matcher<'g> {
    a: &'g ColoredGraph,
    b: &'g ColoredGraph,
    ca: Vec<u64>,
    cb: Vec<u64>,
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    fwd: Vec<usize>,
    rev: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl Matcher<'_> {
    fn feasible(&self, u: usize, p: usize) -> bool {
        if self.ca[u] != self.cb[p] || self.rev[p] != UNSET {
            return false;
        }
        if self.a.loops[u] != self.b.loops[p] {
            return false;
        }
        let mut matched_a = 0;
        for &(x, c) in &self.a.adj[u] {
            let fx = self.fwd[x];
            if fx == UNSET {
                continue;
            }
            matched_a += 1;
            if self.b.edge(p, fx) != Some(c) {
                return false;
            }
        }
        let matched_b = self.b.adj[p]
            .iter()
            .filter(|&&(q, _)| self.rev[q] != UNSET)
            .count();
        matched_a == matched_b
    }

    fn search(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let u = self.order[depth];
        let candidates: Vec<usize> = match self.parent[depth] {
            Some(par) => self.b.adj[self.fwd[par]].iter().map(|&(q, _)| q).collect(),
            None => (0..self.b.len()).collect(),
        };
        for p in candidates {
            if !self.feasible(u, p) {
                continue;
            }
            self.fwd[u] = p;
            self.rev[p] = u;
            if self.search(depth + 1) {
                return true;
            }
            self.fwd[u] = UNSET;
            self.rev[p] = UNSET;
        }
        false
    }
}

/// Connectivity-first visiting order; each vertex after the first of its
/// component records an already-visited neighbor used to restrict candidates.
fn visit_order(g: &ColoredGraph, colors: &[u64]) -> (Vec<usize>, Vec<Option<usize>>) {
    let n = g.len();
    let mut freq = std::collections::HashMap::new();
    for &c in colors {
        *freq.entry(c).or_insert(0usize) += 1;
    }
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    let mut parent = Vec::with_capacity(n);
    let mut par_of = vec![None; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (std::cmp::Reverse(links[v]), freq[&colors[v]], v))
            .unwrap();
        placed[next] = true;
        order.push(next);
        parent.push(if links[next] > 0 { par_of[next] } else { None });
        for &(x, _) in &g.adj[next] {
            if !placed[x] {
                links[x] += 1;
                if par_of[x].is_none() {
                    par_of[x] = Some(next);
                }
            }
        }
    }
    (order, parent)
}

/// Finds a bijection `f` with `color(a, v) = color(b, f(v))` and
/// `edge(a, u, v) = edge(b, f(u), f(v))` for all vertex pairs.
pub fn find_isomorphism(a: &ColoredGraph, b: &ColoredGraph) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let edges_a: usize = a.adj.iter().map(Vec::len).sum();
    let edges_b: usize = b.adj.iter().map(Vec::len).sum();
    if edges_a != edges_b {
        return None;
    }
    let (ca, cb) = refine_pair(a, b)?;
    let (order, parent) = visit_order(a, &ca);
    let n = a.len();
    let mut m = Matcher {
        a,
        b,
        ca,
        cb,
        order,
        parent,
        fwd: vec![UNSET; n],
        rev: vec![UNSET; n],
    };
    m.search(0).then_some(m.fwd)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, rot: usize) -> ColoredGraph {
        let mut g = ColoredGraph::new(vec![1; n]);
        for k in 0..n {
            let u = (k + rot) % n;
            let v = (k + 1 + rot) % n;
            g.set_edge(u, v, if k % 2 == 0 { 2 } else { 1 });
        }
        g
    }

    fn check(a: &ColoredGraph, b: &ColoredGraph, f: &[usize]) {
        for u in 0..a.len() {
            assert_eq!(a.color(u), b.color(f[u]));
            for v in 0..a.len() {
                assert_eq!(a.edge(u, v), b.edge(f[u], f[v]));
            }
        }
    }

    #[test]
    fn rotated_alternating_cycles_match() {
        let a = cycle(6, 0);
        let b = cycle(6, 3);
        let f = find_isomorphism(&a, &b).unwrap();
        check(&a, &b, &f);
        assert_eq!(invariant(&a), invariant(&b));
    }

    #[test]
    fn edge_colors_distinguish() {
        let a = cycle(6, 0);
        let mut b = cycle(6, 0);
        b.set_edge(0, 1, 1);
        assert!(find_isomorphism(&a, &b).is_none());
    }

    #[test]
    fn regular_graphs_need_backtracking() {
        // Two 6-cycles vs. one hexagon pair with chords: K3,3 vs prism.
        let mut k33 = ColoredGraph::new(vec![0; 6]);
        for u in 0..3 {
            for v in 3..6 {
                k33.set_edge(u, v, 1);
            }
        }
        let mut prism = ColoredGraph::new(vec![0; 6]);
        for (u, v) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)] {
            prism.set_edge(u, v, 1);
        }
        assert!(find_isomorphism(&k33, &prism).is_none());
        let mut k33b = ColoredGraph::new(vec![0; 6]);
        for u in [0, 2, 4] {
            for v in [1, 3, 5] {
                k33b.set_edge(u, v, 1);
            }
        }
        let f = find_isomorphism(&k33, &k33b).unwrap();
        check(&k33, &k33b, &f);
    }

    #[test]
    fn loops_are_compared() {
        let mut a = ColoredGraph::new(vec![0, 0]);
        a.set_edge(0, 1, 1);
        a.set_edge(0, 0, 2);
        let mut b = ColoredGraph::new(vec![0, 0]);
        b.set_edge(0, 1, 1);
        b.set_edge(1, 1, 2);
        let f = find_isomorphism(&a, &b).unwrap();
        assert_eq!(f, vec![1, 0]);
        b.set_edge(1, 1, 3);
        assert!(find_isomorphism(&a, &b).is_none());
    }
}
