//! Integer linear programs for minimum-cost atom-atom maps.
//!
//! [`build_ilp2`] uses a Kaufmann-Broeckx style linearization with `O(n^2)`
//! rows: binary map variables `m_i_p`, and per pair integer variables
//! `cp_i_p`/`cm_i_p` bounding the positive and negative weight changes at
//! `i` from below via big-M rows. Every non-loop change is seen from both
//! ends and loop terms are doubled, so the optimum is twice the map cost.
//! [`build_ilp4`] is the naive model with a product variable per pair of map
//! variables; its optimum is the cost itself.
//!
//! Models export to CPLEX LP text and are solved at desk scale by the
//! branch-and-bound in [`solve_exact`].

mod lp;
mod solve;

use std::fmt;

use serde::Serialize;

use crate::mapping::ReactionInstance;

pub use lp::{export_lp, parse_lp, LpError};
pub use solve::{decode, enumerate_optima, solve_exact, Enumeration, ExactOptions, ExactResult, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ilp2,
    Ilp4,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ilp2 => "ilp2",
            Family::Ilp4 => "ilp4",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VarKind {
    Binary,
    /// Nonnegative integer.
    Integer,
}

/// What a variable stands for; recovered from its name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Role {
    /// `m_i_p`: educt vertex `i` maps to product vertex `p`.
    Map(usize, usize),
    /// `cp_i_p`, `cm_i_p`: positive and negative change at `i` when `i -> p`.
    ChangeUp(usize, usize),
    ChangeDown(usize, usize),
    /// `y_i_p_j_q`: both `i -> p` and `j -> q`.
    Product(usize, usize, usize, usize),
    /// `dp_i_j`, `dm_i_j`: positive and negative part of the change of `{i, j}`.
    EdgeUp(usize, usize),
    EdgeDown(usize, usize),
}

impl Role {
    pub fn name(self) -> String {
        match self {
            Role::Map(i, p) => format!("m_{i}_{p}"),
            Role::ChangeUp(i, p) => format!("cp_{i}_{p}"),
            Role::ChangeDown(i, p) => format!("cm_{i}_{p}"),
            Role::Product(i, p, j, q) => format!("y_{i}_{p}_{j}_{q}"),
            Role::EdgeUp(i, j) => format!("dp_{i}_{j}"),
            Role::EdgeDown(i, j) => format!("dm_{i}_{j}"),
        }
    }

    pub fn parse(name: &str) -> Option<Role> {
        let mut parts = name.split('_');
        let tag = parts.next()?;
        let nums: Vec<usize> = parts.map(|s| s.parse().ok()).collect::<Option<_>>()?;
        match (tag, nums.as_slice()) {
            ("m", &[i, p]) => Some(Role::Map(i, p)),
            ("cp", &[i, p]) => Some(Role::ChangeUp(i, p)),
            ("cm", &[i, p]) => Some(Role::ChangeDown(i, p)),
            ("y", &[i, p, j, q]) => Some(Role::Product(i, p, j, q)),
            ("dp", &[i, j]) => Some(Role::EdgeUp(i, j)),
            ("dm", &[i, j]) => Some(Role::EdgeDown(i, j)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Variable {
    pub role: Role,
    pub kind: VarKind,
    pub objective: i64,
}

impl Variable {
    pub fn name(&self) -> String {
        self.role.name()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub name: String,
    /// `(variable index, coefficient)`, sorted by index, no zeros.
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Constraint {
    pub fn new(name: String, terms: impl IntoIterator<Item = (usize, i64)>, sense: Sense, rhs: i64) -> Self {
        let mut t: Vec<(usize, i64)> = terms.into_iter().collect();
        t.sort_unstable_by_key(|x| x.0);
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(t.len());
        for (v, c) in t {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|x| x.1 != 0);
        Constraint {
            name,
            terms: merged,
            sense,
            rhs,
        }
    }

    pub fn lhs(&self, values: &[i64]) -> i64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }
}

/// A minimization MILP with integral data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IlpModel {
    pub family: Family,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModelStats {
    pub variables: usize,
    pub binaries: usize,
    pub integers: usize,
    pub rows: usize,
    pub nonzeros: usize,
}

impl IlpModel {
    pub fn new(family: Family) -> Self {
        IlpModel {
            family,
            variables: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn add_variable(&mut self, role: Role, kind: VarKind, objective: i64) -> usize {
        self.variables.push(Variable { role, kind, objective });
        self.variables.len() - 1
    }

    pub fn add_constraint(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn stats(&self) -> ModelStats {
        let binaries = self.variables.iter().filter(|v| v.kind == VarKind::Binary).count();
        ModelStats {
            variables: self.variables.len(),
            binaries,
            integers: self.variables.len() - binaries,
            rows: self.constraints.len(),
            nonzeros: self.constraints.iter().map(|c| c.terms.len()).sum(),
        }
    }

    pub fn objective_value(&self, values: &[i64]) -> i64 {
        self.variables.iter().zip(values).map(|(v, x)| v.objective * x).sum()
    }

    /// True if `values` satisfies every row, bound and integrality rule.
    pub fn is_feasible(&self, values: &[i64]) -> bool {
        values.len() == self.variables.len()
            && self.variables.iter().zip(values).all(|(v, &x)| match v.kind {
                VarKind::Binary => x == 0 || x == 1,
                VarKind::Integer => x >= 0,
            })
            && self.constraints.iter().all(|c| c.sense.holds(c.lhs(values), c.rhs))
    }

    /// The assignment rows' vertex count: one more than the largest index
    /// used by a map variable on either side.
    pub fn vertex_count(&self) -> usize {
        self.variables
            .iter()
            .filter_map(|v| match v.role {
                Role::Map(i, p) => Some(i.max(p) + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Assignment rows `a1_i` (each educt vertex mapped once) and `a2_p` (each
/// product vertex hit once); returns the map variable of every pair.
fn assignment(model: &mut IlpModel, n: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let m: Vec<usize> = pairs
        .iter()
        .map(|&(i, p)| model.add_variable(Role::Map(i, p), VarKind::Binary, 0))
        .collect();
    for i in 0..n {
        let terms = pairs.iter().zip(&m).filter(|(pr, _)| pr.0 == i).map(|(_, &v)| (v, 1));
        model.add_constraint(Constraint::new(format!("a1_{i}"), terms, Sense::Eq, 1));
    }
    for p in 0..n {
        let terms = pairs.iter().zip(&m).filter(|(pr, _)| pr.1 == p).map(|(_, &v)| (v, 1));
        model.add_constraint(Constraint::new(format!("a2_{p}"), terms, Sense::Eq, 1));
    }
    m
}

/// The big-M constant: no sum of positive (negative) changes that a voided
/// row can see exceeds the largest positive degree on one side plus the
/// largest negative degree on the other. Without charge edges this is the
/// largest weighted degree.
pub fn big_m(inst: &ReactionInstance) -> i64 {
    let n = inst.len();
    let degs = |w: &dyn Fn(usize, usize) -> i32, v: usize| {
        let (mut pos, mut neg) = (0i64, 0i64);
        for u in 0..n {
            let x = w(v, u) as i64 * if u == v { 2 } else { 1 };
            if x > 0 {
                pos += x;
            } else {
                neg -= x;
            }
        }
        (pos, neg)
    };
    let w1 = |u, v| inst.w1(u, v);
    let w2 = |u, v| inst.w2(u, v);
    let d1: Vec<(i64, i64)> = (0..n).map(|v| degs(&w1, v)).collect();
    let d2: Vec<(i64, i64)> = (0..n).map(|v| degs(&w2, v)).collect();
    let max = |d: &[(i64, i64)], f: fn(&(i64, i64)) -> i64| d.iter().map(f).max().unwrap_or(0);
    let a = max(&d2, |x| x.0) + max(&d1, |x| x.1);
    let b = max(&d1, |x| x.0) + max(&d2, |x| x.1);
    a.max(b)
}

pub fn build_ilp2(inst: &ReactionInstance) -> IlpModel {
    let n = inst.len();
    let pairs = inst.compatible_pairs();
    let mut model = IlpModel::new(Family::Ilp2);
    let m = assignment(&mut model, n, &pairs);
    let cp: Vec<usize> = pairs
        .iter()
        .map(|&(i, p)| model.add_variable(Role::ChangeUp(i, p), VarKind::Integer, 1))
        .collect();
    let cm: Vec<usize> = pairs
        .iter()
        .map(|&(i, p)| model.add_variable(Role::ChangeDown(i, p), VarKind::Integer, 1))
        .collect();
    for i in 0..n {
        let terms = pairs
            .iter()
            .enumerate()
            .filter(|(_, pr)| pr.0 == i)
            .flat_map(|(k, _)| [(cp[k], 1), (cm[k], -1)]);
        model.add_constraint(Constraint::new(format!("bal_{i}"), terms, Sense::Eq, 0));
    }
    let big = big_m(inst);
    for (k, &(i, p)) in pairs.iter().enumerate() {
        for (up, var, tag) in [(true, cp[k], "up"), (false, cm[k], "dn")] {
            // var - M m_ip - sum_jq a_jq m_jq >= -M
            let mut terms = vec![(var, 1), (m[k], -big)];
            for (t, &(j, q)) in pairs.iter().enumerate() {
                let d = (inst.w2(p, q) - inst.w1(i, j)) as i64;
                let d = if up { d.max(0) } else { (-d).max(0) };
                let d = if j == i && q == p { 2 * d } else { d };
                // Pairs that can never coexist with i -> p contribute nothing.
                let clash = (j == i) != (q == p);
                if d != 0 && !clash {
                    terms.push((m[t], -d));
                }
            }
            model.add_constraint(Constraint::new(format!("{tag}_{i}_{p}"), terms, Sense::Ge, -big));
        }
    }
    model
}

pub fn build_ilp4(inst: &ReactionInstance) -> IlpModel {
    let n = inst.len();
    let pairs = inst.compatible_pairs();
    let mut model = IlpModel::new(Family::Ilp4);
    let m = assignment(&mut model, n, &pairs);
    let mut index = vec![usize::MAX; n * n];
    for (k, &(i, p)) in pairs.iter().enumerate() {
        index[i * n + p] = m[k];
    }
    // Change of every educt pair {i, j}, i <= j, as the sum over its images.
    let mut change: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n * n];
    for (a, &(i, p)) in pairs.iter().enumerate() {
        let d = (inst.w2(p, p) - inst.w1(i, i)) as i64;
        if d != 0 {
            change[i * n + i].push((m[a], d));
        }
        for &(j, q) in &pairs[a + 1..] {
            if j == i || q == p {
                continue;
            }
            let y = model.add_variable(Role::Product(i, p, j, q), VarKind::Binary, 0);
            let (mi, mj) = (index[i * n + p], index[j * n + q]);
            let name = format!("{i}_{p}_{j}_{q}");
            model.add_constraint(Constraint::new(format!("ya_{name}"), [(y, 1), (mi, -1)], Sense::Le, 0));
            model.add_constraint(Constraint::new(format!("yb_{name}"), [(y, 1), (mj, -1)], Sense::Le, 0));
            model.add_constraint(Constraint::new(
                format!("yc_{name}"),
                [(y, 1), (mi, -1), (mj, -1)],
                Sense::Ge,
                -1,
            ));
            let d = (inst.w2(p, q) - inst.w1(i, j)) as i64;
            if d != 0 {
                change[i * n + j].push((y, d));
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            let terms = &change[i * n + j];
            if terms.is_empty() {
                continue;
            }
            let dp = model.add_variable(Role::EdgeUp(i, j), VarKind::Integer, 1);
            let dm = model.add_variable(Role::EdgeDown(i, j), VarKind::Integer, 1);
            let row = [(dp, 1), (dm, -1)].into_iter().chain(terms.iter().map(|&(v, d)| (v, -d)));
            model.add_constraint(Constraint::new(format!("d_{i}_{j}"), row, Sense::Eq, 0));
        }
    }
    model
}
