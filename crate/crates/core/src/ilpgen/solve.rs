use std::time::{Duration, Instant};

use serde::Serialize;

use crate::mapping::{AtomMap, EquivalenceClasses, MapError, ReactionInstance};

use super::{Constraint, Family, IlpModel, Role, Sense};

#[derive(Debug, Clone, Default)]
pub struct ExactOptions {
    pub time_limit: Option<Duration>,
    /// Keep solving at the optimal value, excluding each transition state
    /// found, until no optimum is left.
    pub enumerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Optimal,
    Infeasible,
    /// Stopped by the time limit; `objective` is the best value seen, if any.
    TimeLimit,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactResult {
    pub verdict: Verdict,
    pub objective: Option<i64>,
    /// Full variable vectors of the optima found, in discovery order.
    pub solutions: Vec<Vec<i64>>,
    /// Exclusion cuts added while enumerating.
    pub cuts: Vec<Constraint>,
    pub nodes: u64,
}

impl ExactResult {
    pub fn complete(&self) -> bool {
        self.verdict != Verdict::TimeLimit
    }
}

/// Map variables of a model and the pairwise change coefficients the
/// branch-and-bound needs, read off the model rows.
struct Structure {
    n: usize,
    /// Map variable index of each `(i, p)`, `usize::MAX` if absent.
    map_var: Vec<usize>,
    /// Map variable ids (dense, 0..k) per educt vertex: `(p, model index)`.
    options: Vec<Vec<(usize, usize)>>,
    k: usize,
    /// Dense id of each map variable, by model index.
    dense: Vec<usize>,
    /// ILP2: `up[a * k + b]` is the positive change at `i` seen by the row of
    /// pair `a = (i, p)` when pair `b` is chosen; likewise `down`.
    /// ILP4: `up` holds the absolute change of the pair of pairs, `down` is
    /// unused.
    up: Vec<i64>,
    down: Vec<i64>,
    pair_of: Vec<(usize, usize)>,
}

impl Structure {
    fn new(model: &IlpModel) -> Self {
        let n = model.vertex_count();
        let mut map_var = vec![usize::MAX; n * n];
        let mut dense = vec![usize::MAX; model.variables.len()];
        let mut pair_of = Vec::new();
        let mut options = vec![Vec::new(); n];
        for (v, var) in model.variables.iter().enumerate() {
            if let Role::Map(i, p) = var.role {
                map_var[i * n + p] = v;
                dense[v] = pair_of.len();
                pair_of.push((i, p));
                options[i].push((p, v));
            }
        }
        for o in &mut options {
            o.sort_unstable();
        }
        let k = pair_of.len();
        let mut up = vec![0i64; k * k];
        let mut down = vec![0i64; k * k];
        let role_of = |v: usize| model.variables[v].role;
        for c in &model.constraints {
            match model.family {
                Family::Ilp2 => {
                    let Some(&(cv, _)) = c.terms.iter().find(|&&(v, x)| {
                        x == 1 && matches!(role_of(v), Role::ChangeUp(..) | Role::ChangeDown(..))
                    }) else {
                        continue;
                    };
                    if c.sense != Sense::Ge {
                        continue;
                    }
                    let (table, (i, p)) = match role_of(cv) {
                        Role::ChangeUp(i, p) => (&mut up, (i, p)),
                        Role::ChangeDown(i, p) => (&mut down, (i, p)),
                        _ => unreachable!(),
                    };
                    let a = dense[map_var[i * n + p]];
                    for &(v, x) in &c.terms {
                        if let Role::Map(j, q) = role_of(v) {
                            let b = dense[v];
                            // The row's own map variable also carries -M.
                            let coef = if (j, q) == (i, p) { -x + c.rhs } else { -x };
                            table[a * k + b] = coef;
                        }
                    }
                }
                Family::Ilp4 => {
                    if !c.terms.iter().any(|&(v, _)| matches!(role_of(v), Role::EdgeUp(..))) {
                        continue;
                    }
                    for &(v, x) in &c.terms {
                        match role_of(v) {
                            Role::Product(i, p, j, q) => {
                                let a = dense[map_var[i * n + p]];
                                let b = dense[map_var[j * n + q]];
                                up[a * k + b] = x.abs();
                                up[b * k + a] = x.abs();
                            }
                            Role::Map(..) => {
                                let a = dense[v];
                                up[a * k + a] = x.abs();
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        Structure {
            n,
            map_var,
            options,
            k,
            dense,
            up,
            down,
            pair_of,
        }
    }
}

/// Rows over map variables only with nonnegative coefficients and `<=`:
/// these can be checked on partial assignments.
fn prunable_rows(model: &IlpModel, s: &Structure) -> Vec<(Vec<(usize, i64)>, i64)> {
    model
        .constraints
        .iter()
        .filter(|c| {
            c.sense == Sense::Le
                && c.terms
                    .iter()
                    .all(|&(v, x)| x >= 0 && matches!(model.variables[v].role, Role::Map(..)))
        })
        .map(|c| (c.terms.iter().map(|&(v, x)| (s.dense[v], x)).collect(), c.rhs))
        .collect()
}

struct Bnb<'m> {
    model: &'m IlpModel,
    s: &'m Structure,
    order: Vec<usize>,
    chosen: Vec<usize>,
    used: Vec<bool>,
    /// ILP2 per-vertex partial sums of positive and negative change.
    pos: Vec<i64>,
    neg: Vec<i64>,
    bound: i64,
    rows: Vec<(Vec<(usize, i64)>, i64)>,
    row_load: Vec<i64>,
    rows_of: Vec<Vec<(usize, i64)>>,
    /// Accept leaves up to this value (inclusive); tightened as leaves are found
    /// unless `fixed` is set.
    limit: i64,
    fixed: bool,
    best: Option<(i64, Vec<i64>)>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl<'m> Bnb<'m> {
    fn new(model: &'m IlpModel, s: &'m Structure, limit: i64, fixed: bool, deadline: Option<Instant>) -> Self {
        let mut order: Vec<usize> = (0..s.n).collect();
        order.sort_by_key(|&i| (s.options[i].len(), i));
        let rows = prunable_rows(model, s);
        let mut rows_of = vec![Vec::new(); s.k];
        for (r, (terms, _)) in rows.iter().enumerate() {
            for &(a, x) in terms {
                rows_of[a].push((r, x));
            }
        }
        Bnb {
            model,
            s,
            order,
            chosen: Vec::new(),
            used: vec![false; s.n],
            pos: vec![0; s.n],
            neg: vec![0; s.n],
            bound: 0,
            row_load: vec![0; rows.len()],
            rows,
            rows_of,
            limit,
            fixed,
            best: None,
            nodes: 0,
            deadline,
            timed_out: false,
        }
    }

    fn vertex_term(&self, i: usize) -> i64 {
        2 * self.pos[i].max(self.neg[i])
    }

    /// Adds dense pair `a`, updating the bound.
    fn push(&mut self, a: usize) {
        let s = self.s;
        let k = s.k;
        match self.model.family {
            Family::Ilp2 => {
                let (i, _) = s.pair_of[a];
                let old_i = self.vertex_term(i);
                self.bound -= old_i;
                for &b in self.chosen.iter().chain(std::iter::once(&a)) {
                    self.pos[i] += s.up[a * k + b];
                    self.neg[i] += s.down[a * k + b];
                    if b != a {
                        let (j, _) = s.pair_of[b];
                        let old = self.vertex_term(j);
                        self.pos[j] += s.up[b * k + a];
                        self.neg[j] += s.down[b * k + a];
                        self.bound += self.vertex_term(j) - old;
                    }
                }
                self.bound += self.vertex_term(i);
            }
            Family::Ilp4 => {
                let mut add = s.up[a * k + a];
                for &b in &self.chosen {
                    add += s.up[a * k + b];
                }
                self.bound += add;
            }
        }
        self.chosen.push(a);
        self.used[s.pair_of[a].1] = true;
        for &(r, x) in &self.rows_of[a] {
            self.row_load[r] += x;
        }
    }

    fn pop(&mut self) {
        let s = self.s;
        let k = s.k;
        let a = self.chosen.pop().unwrap();
        self.used[s.pair_of[a].1] = false;
        for &(r, x) in &self.rows_of[a] {
            self.row_load[r] -= x;
        }
        match self.model.family {
            Family::Ilp2 => {
                let (i, _) = s.pair_of[a];
                self.bound -= self.vertex_term(i);
                for &b in self.chosen.iter().chain(std::iter::once(&a)) {
                    self.pos[i] -= s.up[a * k + b];
                    self.neg[i] -= s.down[a * k + b];
                    if b != a {
                        let (j, _) = s.pair_of[b];
                        let old = self.vertex_term(j);
                        self.pos[j] -= s.up[b * k + a];
                        self.neg[j] -= s.down[b * k + a];
                        self.bound += self.vertex_term(j) - old;
                    }
                }
                self.bound += self.vertex_term(i);
            }
            Family::Ilp4 => {
                let mut add = s.up[a * k + a];
                for &b in &self.chosen {
                    add += s.up[a * k + b];
                }
                self.bound -= add;
            }
        }
    }

    fn rows_ok(&self, a: usize) -> bool {
        self.rows_of[a].iter().all(|&(r, _)| self.row_load[r] <= self.rows[r].1)
    }

    fn run(&mut self, depth: usize) {
        self.nodes += 1;
        if self.nodes % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out || (self.fixed && self.best.is_some()) {
            return;
        }
        if depth == self.order.len() {
            self.leaf();
            return;
        }
        let i = self.order[depth];
        for t in 0..self.s.options[i].len() {
            let (p, v) = self.s.options[i][t];
            if self.used[p] {
                continue;
            }
            let a = self.s.dense[v];
            self.push(a);
            if self.bound <= self.limit && self.rows_ok(a) {
                self.run(depth + 1);
            }
            self.pop();
            if self.timed_out || (self.fixed && self.best.is_some()) {
                return;
            }
        }
    }

    fn leaf(&mut self) {
        let values = complete_values(self.model, self.s, &self.chosen);
        if !self.model.is_feasible(&values) {
            return;
        }
        let obj = self.model.objective_value(&values);
        if obj > self.limit {
            return;
        }
        if !self.fixed {
            // Strictly better leaves only from now on.
            self.limit = obj - 1;
        }
        self.best = Some((obj, values));
    }
}

/// Cheapest values of the non-map variables once every map variable is
/// fixed by `chosen` (dense pair ids).
fn complete_values(model: &IlpModel, s: &Structure, chosen: &[usize]) -> Vec<i64> {
    let mut values = vec![0i64; model.variables.len()];
    let mut image = vec![usize::MAX; s.n];
    for &a in chosen {
        let (i, p) = s.pair_of[a];
        image[i] = p;
        values[s.map_var[i * s.n + p]] = 1;
    }
    let var_of = |role: Role| model.variables.iter().position(|v| v.role == role);
    match model.family {
        Family::Ilp2 => {
            let k = s.k;
            for &a in chosen {
                let (i, p) = s.pair_of[a];
                let pos: i64 = chosen.iter().map(|&b| s.up[a * k + b]).sum::<i64>().max(0);
                let neg: i64 = chosen.iter().map(|&b| s.down[a * k + b]).sum::<i64>().max(0);
                let level = pos.max(neg);
                if let Some(v) = var_of(Role::ChangeUp(i, p)) {
                    values[v] = level;
                }
                if let Some(v) = var_of(Role::ChangeDown(i, p)) {
                    values[v] = level;
                }
            }
        }
        Family::Ilp4 => {
            for (v, var) in model.variables.iter().enumerate() {
                if let Role::Product(i, p, j, q) = var.role {
                    values[v] = i64::from(image[i] == p && image[j] == q);
                }
            }
            for c in &model.constraints {
                let parts: Vec<(usize, Role)> = c
                    .terms
                    .iter()
                    .filter(|&&(v, _)| matches!(model.variables[v].role, Role::EdgeUp(..) | Role::EdgeDown(..)))
                    .map(|&(v, _)| (v, model.variables[v].role))
                    .collect();
                if parts.is_empty() {
                    continue;
                }
                let rest: i64 = c
                    .terms
                    .iter()
                    .filter(|&&(v, _)| !parts.iter().any(|x| x.0 == v))
                    .map(|&(v, x)| x * values[v])
                    .sum();
                let change = c.rhs - rest;
                for (v, role) in parts {
                    values[v] = match role {
                        Role::EdgeUp(..) => change.max(0),
                        _ => (-change).max(0),
                    };
                }
            }
        }
    }
    values
}

/// Vertices with a nonzero change under the solution.
fn changed_vertices(model: &IlpModel, values: &[i64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (v, var) in model.variables.iter().enumerate() {
        if values[v] == 0 {
            continue;
        }
        match var.role {
            Role::ChangeUp(i, _) | Role::ChangeDown(i, _) => out.push(i),
            Role::EdgeUp(i, j) | Role::EdgeDown(i, j) => out.extend([i, j]),
            _ => {}
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Educt-to-product map encoded by the map variables of a solution.
pub fn decode(model: &IlpModel, values: &[i64]) -> Vec<usize> {
    let n = model.vertex_count();
    let mut psi = vec![usize::MAX; n];
    for (v, var) in model.variables.iter().enumerate() {
        if let Role::Map(i, p) = var.role {
            if values[v] == 1 {
                psi[i] = p;
            }
        }
    }
    psi
}

/// Depth-first branch-and-bound over the map variables, educt vertices with
/// the fewest candidate images first. The bound is the objective implied by
/// the pairs fixed so far, which only grows as more pairs are fixed.
pub fn solve_exact(model: &IlpModel, options: &ExactOptions) -> ExactResult {
    let deadline = options.time_limit.map(|t| Instant::now() + t);
    let s = Structure::new(model);
    let mut nodes = 0;
    let mut bnb = Bnb::new(model, &s, i64::MAX, false, deadline);
    bnb.run(0);
    nodes += bnb.nodes;
    let Some((opt, first)) = bnb.best.take() else {
        return ExactResult {
            verdict: if bnb.timed_out {
                Verdict::TimeLimit
            } else {
                Verdict::Infeasible
            },
            objective: None,
            solutions: Vec::new(),
            cuts: Vec::new(),
            nodes,
        };
    };
    if bnb.timed_out {
        return ExactResult {
            verdict: Verdict::TimeLimit,
            objective: Some(opt),
            solutions: vec![first],
            cuts: Vec::new(),
            nodes,
        };
    }
    let mut solutions = vec![first];
    let mut cuts = Vec::new();
    let mut verdict = Verdict::Optimal;
    if options.enumerate {
        let mut working = model.clone();
        loop {
            let last = solutions.last().unwrap();
            let changed = changed_vertices(model, last);
            let psi = decode(model, last);
            let terms = changed.iter().map(|&i| (s.map_var[i * s.n + psi[i]], 1));
            let cut = Constraint::new(format!("cut_{}", cuts.len()), terms, Sense::Le, changed.len() as i64 - 1);
            working.add_constraint(cut.clone());
            cuts.push(cut);
            let ws = Structure::new(&working);
            let mut next = Bnb::new(&working, &ws, opt, true, deadline);
            next.run(0);
            nodes += next.nodes;
            if next.timed_out {
                verdict = Verdict::TimeLimit;
                break;
            }
            match next.best {
                Some((_, values)) => solutions.push(values),
                None => break,
            }
        }
    }
    ExactResult {
        verdict,
        objective: Some(opt),
        solutions,
        cuts,
        nodes,
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    /// Map cost (the ILP2 objective is halved).
    pub min_cost: Option<u32>,
    /// One map per equivalence class.
    pub maps: Vec<AtomMap>,
    /// Optima found before filtering by equivalence.
    pub raw: usize,
    pub complete: bool,
}

/// All optimal maps up to equivalence: exclusion cuts on the
/// transition-state vertices of each optimum found, then a filter for
/// symmetric duplicates that come from different partial maps.
pub fn enumerate_optima(inst: &ReactionInstance, model: &IlpModel, time_limit: Option<Duration>) -> Result<Enumeration, MapError> {
    let r = solve_exact(
        model,
        &ExactOptions {
            time_limit,
            enumerate: true,
        },
    );
    let mut classes = EquivalenceClasses::new();
    for values in &r.solutions {
        let map = AtomMap::new(inst, decode(model, values))?;
        classes.insert(inst, map);
    }
    let scale = match model.family {
        Family::Ilp2 => 2,
        Family::Ilp4 => 1,
    };
    Ok(Enumeration {
        min_cost: r.objective.map(|o| (o / scale) as u32),
        raw: r.solutions.len(),
        maps: classes.into_maps(),
        complete: r.complete(),
    })
}
