use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use crate::iso::{combine, mix};
use crate::mapping::{ReactionInstance, TransitionState};
use crate::molgraph::MoleculeGraph;

use super::trace::MechanismTrace;

const UNSET: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// One elementary cycle: exact unit differences, no revisits.
    Elementary,
    /// Revisits, multi-unit changes and several closed paths.
    General,
}

/// A closed set of alternating paths and the partial map it fixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    /// `partial[i]` is the image of educt vertex `i`, if fixed.
    pub partial: Vec<Option<usize>>,
    pub trace: MechanismTrace,
}

impl Candidate {
    pub fn path_weights(&self) -> TransitionState {
        self.trace.replay()
    }

    /// Identity of the candidate up to the order in which its paths were walked.
    pub(crate) fn key(&self) -> Vec<(usize, usize)> {
        self.partial
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (i, p)))
            .collect()
    }
}

/// Static data shared by every search over one instance.
pub(crate) struct Prepared<'a> {
    pub inst: &'a ReactionInstance,
    n: usize,
    by_label2: Vec<Vec<usize>>,
    by_label1: Vec<Vec<usize>>,
    label_index: Vec<usize>,
    label_index2: Vec<usize>,
    /// Smaller product vertices interchangeable with each vertex.
    twins2: Vec<Vec<usize>>,
    charge: Option<(usize, usize)>,
    premapped: Vec<(usize, usize)>,
}

fn twins(g: &MoleculeGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut out = vec![Vec::new(); n];
    for v in 0..n {
        for u in 0..v {
            if g.label(u) != g.label(v) || g.loop_weight(u) != g.loop_weight(v) {
                continue;
            }
            let nu: Vec<(usize, i32)> = g
                .neighbors(u)
                .iter()
                .filter(|&&x| x != v)
                .map(|&x| (x, g.weight(u, x)))
                .collect();
            let nv: Vec<(usize, i32)> = g
                .neighbors(v)
                .iter()
                .filter(|&&x| x != u)
                .map(|&x| (x, g.weight(v, x)))
                .collect();
            if nu == nv {
                out[v].push(u);
            }
        }
    }
    out
}

impl<'a> Prepared<'a> {
    pub fn new(inst: &'a ReactionInstance) -> Self {
        let n = inst.len();
        let mut codes: Vec<u64> = inst.g1().labels().iter().map(|l| l.code()).collect();
        codes.sort_unstable();
        codes.dedup();
        let label_index: Vec<usize> = inst
            .g1()
            .labels()
            .iter()
            .map(|l| codes.binary_search(&l.code()).unwrap())
            .collect();
        let label_index2: Vec<usize> = inst
            .g2()
            .labels()
            .iter()
            .map(|l| codes.binary_search(&l.code()).unwrap())
            .collect();
        let mut by_label1 = vec![Vec::new(); codes.len()];
        let mut by_label2 = vec![Vec::new(); codes.len()];
        for v in 0..n {
            by_label1[label_index[v]].push(v);
            by_label2[label_index2[v]].push(v);
        }
        let mut premapped = Vec::new();
        let charge = inst.g1().charge_vertex().zip(inst.g2().charge_vertex());
        premapped.extend(charge);
        premapped.extend(inst.g1().radical_vertex().zip(inst.g2().radical_vertex()));
        Prepared {
            inst,
            n,
            by_label1,
            by_label2,
            label_index,
            label_index2,
            twins2: twins(inst.g2()),
            charge,
            premapped,
        }
    }

    /// Every label-compatible seed pair in index order.
    pub fn seeds(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            if let Some(&(_, p)) = self.premapped.iter().find(|&&(a, _)| a == i) {
                out.push((i, p));
                continue;
            }
            for &p in &self.by_label2[self.label_index[i]] {
                if self.premapped.iter().any(|&(_, q)| q == p) || !self.twins2[p].is_empty() {
                    continue;
                }
                out.push((i, p));
            }
        }
        out
    }
}

pub(crate) struct Limits<'s> {
    pub deadline: Option<Instant>,
    pub stop: &'s AtomicBool,
}

pub(crate) struct Search<'p, 'a> {
    pre: &'p Prepared<'a>,
    mode: Mode,
    fwd: Vec<usize>,
    rev: Vec<usize>,
    mapped: Vec<usize>,
    wp: Vec<i32>,
    /// Closed paths (each ending with its seed) followed by the open path.
    paths: Vec<Vec<usize>>,
    seeds: Vec<usize>,
    nodes: u64,
    limits: Limits<'p>,
    pub timed_out: bool,
    seen: HashSet<Vec<(usize, usize)>>,
    pub out: Vec<Candidate>,
}

impl<'p, 'a> Search<'p, 'a> {
    pub fn new(pre: &'p Prepared<'a>, mode: Mode, limits: Limits<'p>) -> Self {
        let n = pre.n;
        let mut s = Search {
            pre,
            mode,
            fwd: vec![UNSET; n],
            rev: vec![UNSET; n],
            mapped: Vec::new(),
            wp: vec![0; n * n],
            paths: Vec::new(),
            seeds: Vec::new(),
            nodes: 0,
            limits,
            timed_out: false,
            seen: HashSet::new(),
            out: Vec::new(),
        };
        for &(i, p) in &pre.premapped {
            s.map(i, p);
        }
        s
    }

    fn w1(&self, u: usize, v: usize) -> i32 {
        self.pre.inst.w1(u, v)
    }

    fn w2(&self, p: usize, q: usize) -> i32 {
        self.pre.inst.w2(p, q)
    }

    fn wp(&self, u: usize, v: usize) -> i32 {
        self.wp[u * self.pre.n + v]
    }

    fn add_wp(&mut self, u: usize, v: usize, d: i32) {
        let n = self.pre.n;
        self.wp[u * n + v] += d;
        if u != v {
            self.wp[v * n + u] += d;
        }
    }

    fn map(&mut self, i: usize, p: usize) {
        self.fwd[i] = p;
        self.rev[p] = i;
        self.mapped.push(i);
    }

    fn unmap(&mut self) {
        let i = self.mapped.pop().unwrap();
        self.rev[self.fwd[i]] = UNSET;
        self.fwd[i] = UNSET;
    }

    /// Twice-counted changes at mapped `v` not yet explained by the paths:
    /// differences to mapped vertices (loops doubled) plus, per label, the
    /// cheapest matching of its weights to unmapped vertices on both sides
    /// (sorted lists, padded with zeros).
    fn residual(&self, v: usize, ws: &mut Vec<(usize, i32, bool)>) -> u32 {
        let inst = self.pre.inst;
        let pv = self.fwd[v];
        let mut total = 0u32;
        for &u in &self.mapped {
            let d = self.w2(pv, self.fwd[u]) - self.w1(v, u) - self.wp(v, u);
            total += if u == v { 2 * d.unsigned_abs() } else { d.unsigned_abs() };
        }
        ws.clear();
        for &u in inst.g1().neighbors(v) {
            if self.fwd[u] == UNSET {
                ws.push((self.pre.label_index[u], self.w1(v, u), false));
            }
        }
        for &q in inst.g2().neighbors(pv) {
            if self.rev[q] == UNSET {
                ws.push((self.pre.label_index2[q], self.w2(pv, q), true));
            }
        }
        total + matching_cost(ws)
    }

    /// Lower bound on twice the number of unit changes still needed.
    fn potential(&self) -> u32 {
        let mut ws = Vec::new();
        self.mapped.iter().map(|&v| self.residual(v, &mut ws)).sum()
    }

    /// In a single elementary cycle every vertex takes part in exactly two
    /// unit steps, so a vertex whose steps are done must be fully explained
    /// and the open ends may lack at most one step each.
    fn elementary_feasible(&self) -> bool {
        let path = self.paths.last().unwrap();
        let (seed, head) = (path[0], *path.last().unwrap());
        let mut ws = Vec::new();
        self.mapped.iter().all(|&v| {
            let slack = if !path.contains(&v) {
                2
            } else if path.len() == 1 {
                2
            } else if v == seed || v == head {
                1
            } else {
                0
            };
            self.residual(v, &mut ws) <= slack
        })
    }

    /// Unmapped vertices off the transition state keep their label, loop and
    /// every incident edge, so their environments (neighbors named by pin when
    /// mapped, by label otherwise) agree across the map. Counts the educt
    /// environments left without a product partner; at most the number of
    /// transition-state vertices still to come.
    fn environment_mismatch(&self) -> usize {
        let inst = self.pre.inst;
        let env = |g: &MoleculeGraph, v: usize, labels: &[usize], pin: &dyn Fn(usize) -> usize| {
            let mut h = mix(labels[v] as u64 ^ ((g.loop_weight(v) as u64) << 32));
            for &x in g.neighbors(v) {
                let w = g.weight(v, x) as u64;
                let name = match pin(x) {
                    UNSET => labels[x] as u64,
                    a => (1 << 40) + a as u64,
                };
                h = h.wrapping_add(mix(combine(name, w)));
            }
            h
        };
        let mut left: Vec<u64> = (0..self.pre.n)
            .filter(|&v| self.fwd[v] == UNSET)
            .map(|v| env(inst.g1(), v, &self.pre.label_index, &|x| if self.fwd[x] == UNSET { UNSET } else { x }))
            .collect();
        let mut right: Vec<u64> = (0..self.pre.n)
            .filter(|&q| self.rev[q] == UNSET)
            .map(|q| env(inst.g2(), q, &self.pre.label_index2, &|y| self.rev[y]))
            .collect();
        left.sort_unstable();
        right.sort_unstable();
        let (mut a, mut b, mut common) = (0, 0, 0);
        while a < left.len() && b < right.len() {
            match left[a].cmp(&right[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    common += 1;
                    a += 1;
                    b += 1;
                }
            }
        }
        left.len() - common
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes % 1024 == 0 {
            if self.limits.stop.load(Ordering::Relaxed) {
                self.timed_out = true;
            } else if let Some(d) = self.limits.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                    self.limits.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        !self.timed_out
    }

    /// Runs every search whose first path is seeded at `(i, p)`.
    pub fn run_seed(&mut self, i: usize, p: usize, k: u32) {
        let fresh = self.fwd[i] == UNSET;
        if fresh {
            if self.rev[p] != UNSET {
                return;
            }
            self.map(i, p);
        } else if self.fwd[i] != p {
            return;
        }
        if self.potential() <= 2 * k && self.environment_mismatch() < k as usize {
            self.paths.push(vec![i]);
            self.seeds.push(i);
            self.extend(k, 1);
            self.paths.pop();
            self.seeds.pop();
        }
        if fresh {
            self.unmap();
        }
    }

    fn head(&self) -> usize {
        *self.paths.last().unwrap().last().unwrap()
    }

    fn seed(&self) -> usize {
        *self.seeds.last().unwrap()
    }

    /// Educt/product pairs that could serve as the next step from the head.
    fn step_pairs(&self, sigma: i32) -> Vec<(usize, usize)> {
        let inst = self.pre.inst;
        let h = self.head();
        let a = self.fwd[h];
        let mut pairs = Vec::new();
        let with_j = |s: &Self, j: usize, pairs: &mut Vec<(usize, usize)>| {
            if s.fwd[j] != UNSET {
                pairs.push((j, s.fwd[j]));
            } else {
                for &q in &s.pre.by_label2[s.pre.label_index[j]] {
                    if s.rev[q] == UNSET && !s.pre.twins2[q].iter().any(|&t| s.rev[t] == UNSET) {
                        pairs.push((j, q));
                    }
                }
            }
        };
        let with_q = |s: &Self, q: usize, pairs: &mut Vec<(usize, usize)>| {
            if s.rev[q] != UNSET {
                pairs.push((s.rev[q], q));
            } else if !s.pre.twins2[q].iter().any(|&t| s.rev[t] == UNSET) {
                for &j in &s.pre.by_label1[s.pre.label_index2[q]] {
                    if s.fwd[j] == UNSET {
                        pairs.push((j, q));
                    }
                }
            }
        };
        if sigma < 0 {
            for &j in inst.g1().neighbors(h) {
                with_j(self, j, &mut pairs);
            }
            if inst.g1().loop_weight(h) > 0 {
                pairs.push((h, a));
            }
        } else {
            for &q in inst.g2().neighbors(a) {
                with_q(self, q, &mut pairs);
            }
            if inst.g2().loop_weight(a) > 0 {
                pairs.push((h, a));
            }
        }
        if let Some((c1, c2)) = self.pre.charge {
            pairs.push((c1, c2));
            if h == c1 {
                if sigma < 0 {
                    for &q in inst.g2().neighbors(a) {
                        with_q(self, q, &mut pairs);
                    }
                } else {
                    for &j in inst.g1().neighbors(h) {
                        with_j(self, j, &mut pairs);
                    }
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    fn admissible(&self, h: usize, j: usize, q: usize, sigma: i32) -> bool {
        let a = self.fwd[h];
        let (w1, w2, wp) = (self.w1(h, j), self.w2(a, q), self.wp(h, j));
        match self.mode {
            Mode::Elementary => wp == 0 && w1 + sigma == w2,
            Mode::General => {
                if sigma > 0 {
                    wp >= 0 && w1 + wp + 1 <= w2
                } else {
                    wp <= 0 && w1 + wp - 1 >= w2
                }
            }
        }
    }

    fn extend(&mut self, k: u32, sigma: i32) {
        if !self.tick() {
            return;
        }
        if k == 0 {
            return;
        }
        let h = self.head();
        let seed = self.seed();
        for (j, q) in self.step_pairs(sigma) {
            if self.timed_out {
                return;
            }
            if j < seed {
                continue;
            }
            let fresh = self.fwd[j] == UNSET;
            let closing = j == seed && sigma < 0;
            if self.mode == Mode::Elementary && !fresh {
                // Mapped vertices: the seed (closing only) and pre-mapped
                // special vertices not yet on the path.
                let on_path = self.paths.last().unwrap().contains(&j);
                if on_path && !(closing && k == 1) {
                    continue;
                }
            }
            if self.mode == Mode::Elementary && closing && k != 1 {
                continue;
            }
            if !self.admissible(h, j, q, sigma) {
                continue;
            }
            if fresh {
                self.map(j, q);
            }
            self.add_wp(h, j, sigma);
            self.paths.last_mut().unwrap().push(j);
            let feasible = match self.mode {
                Mode::Elementary => self.elementary_feasible(),
                Mode::General => true,
            };
            let to_come = match (self.mode, closing) {
                (_, true) | (Mode::General, false) => k as usize - 1,
                (Mode::Elementary, false) => (k as usize).saturating_sub(2),
            };
            if feasible && self.potential() <= 2 * (k - 1) && self.environment_mismatch() <= to_come {
                if closing {
                    self.closed(k - 1);
                } else {
                    self.extend(k - 1, -sigma);
                }
            }
            self.paths.last_mut().unwrap().pop();
            self.add_wp(h, j, -sigma);
            if fresh {
                self.unmap();
            }
        }
    }

    fn closed(&mut self, k: u32) {
        if k == 0 {
            self.emit();
            return;
        }
        if self.mode == Mode::Elementary {
            return;
        }
        let from = self.seed();
        for i in from..self.pre.n {
            if self.timed_out {
                return;
            }
            let targets: Vec<usize> = if self.fwd[i] != UNSET {
                vec![self.fwd[i]]
            } else {
                self.pre.by_label2[self.pre.label_index[i]]
                    .iter()
                    .copied()
                    .filter(|&q| {
                        self.rev[q] == UNSET && !self.pre.twins2[q].iter().any(|&t| self.rev[t] == UNSET)
                    })
                    .collect()
            };
            for p in targets {
                let fresh = self.fwd[i] == UNSET;
                if fresh {
                    self.map(i, p);
                }
                if self.potential() <= 2 * k && self.environment_mismatch() < k as usize {
                    self.paths.push(vec![i]);
                    self.seeds.push(i);
                    self.extend(k, 1);
                    self.paths.pop();
                    self.seeds.pop();
                }
                if fresh {
                    self.unmap();
                }
            }
        }
    }

    fn emit(&mut self) {
        let partial: Vec<Option<usize>> = self
            .fwd
            .iter()
            .map(|&p| (p != UNSET).then_some(p))
            .collect();
        let cand = Candidate {
            partial,
            trace: MechanismTrace::from_walks(&self.paths),
        };
        if self.seen.insert(cand.key()) {
            self.out.push(cand);
        }
    }
}

/// Per label, the least total |difference| over pairings of the educt and
/// product weights, missing entries counting as zero.
pub(super) fn matching_cost(ws: &mut [(usize, i32, bool)]) -> u32 {
    ws.sort_unstable_by_key(|&(l, w, side)| (l, side, std::cmp::Reverse(w)));
    let mut total = 0;
    let mut start = 0;
    while start < ws.len() {
        let label = ws[start].0;
        let end = start + ws[start..].iter().take_while(|e| e.0 == label).count();
        let group = &ws[start..end];
        let split = group.iter().take_while(|e| !e.2).count();
        let (a, b) = group.split_at(split);
        if a.len() == b.len() || group.iter().all(|e| e.1 >= 0) {
            for t in 0..a.len().max(b.len()) {
                let x = a.get(t).map_or(0, |e| e.1);
                let y = b.get(t).map_or(0, |e| e.1);
                total += x.abs_diff(y);
            }
        } else {
            // Negative weights: the zero padding has to be sorted in.
            let len = a.len().max(b.len());
            let pad = |side: &[(usize, i32, bool)]| {
                let mut v: Vec<i32> = side.iter().map(|e| e.1).collect();
                v.resize(len, 0);
                v.sort_unstable();
                v
            };
            let (x, y) = (pad(a), pad(b));
            total += x.iter().zip(&y).map(|(p, q)| p.abs_diff(*q)).sum::<u32>();
        }
        start = end;
    }
    total
}
