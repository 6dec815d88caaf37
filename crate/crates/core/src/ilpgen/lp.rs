use std::collections::HashMap;
use std::fmt::Write;

use super::{Constraint, Family, IlpModel, Role, Sense, VarKind};

const TERMS_PER_LINE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("variable {0} does not follow the m_i_p / cp_i_p / cm_i_p / y_i_p_j_q / dp_i_j / dm_i_j naming scheme")]
    UnknownVariable(String),
    #[error("variable {0} is neither binary nor general")]
    Continuous(String),
}

fn write_terms(out: &mut String, terms: impl Iterator<Item = (String, i64)>) {
    let mut count = 0;
    for (name, c) in terms {
        if count > 0 && count % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if c < 0 { "-" } else { "+" };
        let mag = c.unsigned_abs();
        if count == 0 && c >= 0 {
            if mag == 1 {
                write!(out, " {name}").unwrap();
            } else {
                write!(out, " {mag} {name}").unwrap();
            }
        } else if mag == 1 {
            write!(out, " {sign} {name}").unwrap();
        } else {
            write!(out, " {sign} {mag} {name}").unwrap();
        }
        count += 1;
    }
    if count == 0 {
        out.push_str(" 0");
    }
}

/// CPLEX LP text. Variables are listed in model order in the Bounds section,
/// which is what lets [`parse_lp`] restore the order.
pub fn export_lp(model: &IlpModel) -> String {
    let names: Vec<String> = model.variables.iter().map(|v| v.name()).collect();
    let mut out = String::new();
    writeln!(out, "\\ family: {}", model.family).unwrap();
    out.push_str("Minimize\n obj:");
    let obj = model
        .variables
        .iter()
        .enumerate()
        .filter(|(_, v)| v.objective != 0)
        .map(|(k, v)| (names[k].clone(), v.objective));
    let mut line = String::new();
    write_terms(&mut line, obj);
    if line != " 0" {
        out.push_str(&line);
    }
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        write!(out, " {}:", c.name).unwrap();
        write_terms(&mut out, c.terms.iter().map(|&(v, k)| (names[v].clone(), k)));
        let sense = match c.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        writeln!(out, " {sense} {}", c.rhs).unwrap();
    }
    out.push_str("Bounds\n");
    for (v, name) in model.variables.iter().zip(&names) {
        match v.kind {
            VarKind::Binary => writeln!(out, " 0 <= {name} <= 1").unwrap(),
            VarKind::Integer => writeln!(out, " {name} >= 0").unwrap(),
        }
    }
    for (title, kind) in [("Generals", VarKind::Integer), ("Binaries", VarKind::Binary)] {
        let list: Vec<&String> = model
            .variables
            .iter()
            .zip(&names)
            .filter(|(v, _)| v.kind == kind)
            .map(|(_, n)| n)
            .collect();
        if list.is_empty() {
            continue;
        }
        writeln!(out, "{title}").unwrap();
        for chunk in list.chunks(TERMS_PER_LINE) {
            let joined: Vec<&str> = chunk.iter().map(|s| s.as_str()).collect();
            writeln!(out, " {}", joined.join(" ")).unwrap();
        }
    }
    out.push_str("End\n");
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Num(i64),
    Colon,
    Plus,
    Minus,
    Cmp(Sense),
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Tok>, LpError> {
    let err = |msg: String| LpError::Syntax { line, msg };
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        match c {
            _ if c.is_whitespace() => k += 1,
            ':' => {
                out.push(Tok::Colon);
                k += 1;
            }
            '+' => {
                out.push(Tok::Plus);
                k += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                k += 1;
            }
            '<' | '>' | '=' => {
                let mut op = String::from(c);
                k += 1;
                while k < chars.len() && matches!(chars[k], '<' | '>' | '=') {
                    op.push(chars[k]);
                    k += 1;
                }
                let sense = match op.as_str() {
                    "<" | "<=" | "=<" => Sense::Le,
                    ">" | ">=" | "=>" => Sense::Ge,
                    "=" => Sense::Eq,
                    _ => return Err(err(format!("bad comparison {op}"))),
                };
                out.push(Tok::Cmp(sense));
            }
            _ if c.is_ascii_digit() => {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().collect();
                out.push(Tok::Num(s.parse().map_err(|_| err(format!("bad number {s}")))?));
            }
            _ if c.is_alphanumeric() || c == '_' || c == '.' => {
                let start = k;
                while k < chars.len() && (chars[k].is_alphanumeric() || matches!(chars[k], '_' | '.')) {
                    k += 1;
                }
                out.push(Tok::Word(chars[start..k].iter().collect()));
            }
            _ => return Err(err(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Start,
    Objective,
    Rows,
    Bounds,
    Generals,
    Binaries,
    End,
}

fn section_of(line: &str) -> Option<Section> {
    match line.trim().to_ascii_lowercase().as_str() {
        "minimize" | "minimise" | "min" => Some(Section::Objective),
        "subject to" | "such that" | "st" | "s.t." => Some(Section::Rows),
        "bounds" | "bound" => Some(Section::Bounds),
        "generals" | "general" | "gen" => Some(Section::Generals),
        "binaries" | "binary" | "bin" => Some(Section::Binaries),
        "end" => Some(Section::End),
        _ => None,
    }
}

struct Parser {
    index: HashMap<String, usize>,
    names: Vec<String>,
}

impl Parser {
    fn var(&mut self, name: &str) -> usize {
        if let Some(&k) = self.index.get(name) {
            return k;
        }
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), self.names.len() - 1);
        self.names.len() - 1
    }

    /// `[name :] terms [cmp rhs]` from a token slice.
    fn row(&mut self, toks: &[Tok], line: usize) -> Result<(Option<String>, Vec<(usize, i64)>, Option<(Sense, i64)>), LpError> {
        let err = |msg: &str| LpError::Syntax {
            line,
            msg: msg.to_string(),
        };
        let mut k = 0;
        let mut name = None;
        if let (Some(Tok::Word(w)), Some(Tok::Colon)) = (toks.first(), toks.get(1)) {
            name = Some(w.clone());
            k = 2;
        }
        let mut terms = Vec::new();
        let mut cmp = None;
        while k < toks.len() {
            let mut sign = 1;
            while let Some(t @ (Tok::Plus | Tok::Minus)) = toks.get(k) {
                if *t == Tok::Minus {
                    sign = -sign;
                }
                k += 1;
            }
            match (toks.get(k), toks.get(k + 1)) {
                (Some(Tok::Num(c)), Some(Tok::Word(w))) => {
                    terms.push((self.var(w), sign * c));
                    k += 2;
                }
                (Some(Tok::Num(0)), _) if terms.is_empty() => k += 1,
                (Some(Tok::Word(w)), _) => {
                    terms.push((self.var(w), sign));
                    k += 1;
                }
                (Some(Tok::Cmp(s)), _) => {
                    let s = *s;
                    k += 1;
                    let mut rs = 1;
                    while let Some(t @ (Tok::Plus | Tok::Minus)) = toks.get(k) {
                        if *t == Tok::Minus {
                            rs = -rs;
                        }
                        k += 1;
                    }
                    match toks.get(k) {
                        Some(Tok::Num(r)) => cmp = Some((s, rs * r)),
                        _ => return Err(err("missing right-hand side")),
                    }
                    k += 1;
                    if k != toks.len() {
                        return Err(err("trailing tokens after right-hand side"));
                    }
                }
                _ => return Err(err("expected a term")),
            }
        }
        Ok((name, terms, cmp))
    }
}

/// Reads the LP dialect written by [`export_lp`]: one row per statement
/// (continuation lines allowed), integer coefficients, binary and general
/// variables only.
pub fn parse_lp(text: &str) -> Result<IlpModel, LpError> {
    let mut family = None;
    let mut section = Section::Start;
    let mut p = Parser {
        index: HashMap::new(),
        names: Vec::new(),
    };
    let mut objective: Vec<(usize, i64)> = Vec::new();
    let mut rows: Vec<(String, Vec<(usize, i64)>, Sense, i64)> = Vec::new();
    let mut order: Vec<usize> = Vec::new();
    let mut binaries = Vec::new();
    let mut generals = Vec::new();
    // Rows in progress: tokens of the current statement and its first line.
    let mut pending: Vec<Tok> = Vec::new();
    let mut pending_line = 0;
    let mut objective_toks: Vec<Tok> = Vec::new();

    let flush = |pending: &mut Vec<Tok>, line: usize, p: &mut Parser, rows: &mut Vec<_>| -> Result<(), LpError> {
        if pending.is_empty() {
            return Ok(());
        }
        let (name, terms, cmp) = p.row(pending, line)?;
        let (sense, rhs) = cmp.ok_or(LpError::Syntax {
            line,
            msg: "row without comparison".into(),
        })?;
        let name = name.unwrap_or_else(|| format!("r{}", rows.len()));
        rows.push((name, terms, sense, rhs));
        pending.clear();
        Ok(())
    };

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        if let Some(comment) = raw.trim().strip_prefix('\\') {
            if let Some(f) = comment.trim().strip_prefix("family:") {
                family = match f.trim() {
                    "ilp2" => Some(Family::Ilp2),
                    "ilp4" => Some(Family::Ilp4),
                    _ => None,
                };
            }
            continue;
        }
        let body = raw.split('\\').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        if let Some(s) = section_of(body) {
            flush(&mut pending, pending_line, &mut p, &mut rows)?;
            section = s;
            continue;
        }
        let toks = tokenize(body, line)?;
        match section {
            Section::Start | Section::End => {
                return Err(LpError::Syntax {
                    line,
                    msg: "text outside any section".into(),
                })
            }
            Section::Objective => objective_toks.extend(toks),
            Section::Rows => {
                let starts_row = matches!((toks.first(), toks.get(1)), (Some(Tok::Word(_)), Some(Tok::Colon)));
                if starts_row {
                    flush(&mut pending, pending_line, &mut p, &mut rows)?;
                }
                if pending.is_empty() {
                    pending_line = line;
                }
                pending.extend(toks);
            }
            Section::Bounds => {
                let names: Vec<&String> = toks
                    .iter()
                    .filter_map(|t| match t {
                        Tok::Word(w) if !w.eq_ignore_ascii_case("inf") && !w.eq_ignore_ascii_case("infinity") => Some(w),
                        _ => None,
                    })
                    .collect();
                if names.len() != 1 {
                    return Err(LpError::Syntax {
                        line,
                        msg: "one variable per bound line".into(),
                    });
                }
                let v = p.var(names[0]);
                order.push(v);
            }
            Section::Generals | Section::Binaries => {
                for t in toks {
                    let Tok::Word(w) = t else {
                        return Err(LpError::Syntax {
                            line,
                            msg: "expected variable names".into(),
                        });
                    };
                    let v = p.var(&w);
                    if section == Section::Generals {
                        generals.push(v);
                    } else {
                        binaries.push(v);
                    }
                }
            }
        }
    }
    flush(&mut pending, pending_line, &mut p, &mut rows)?;
    if !objective_toks.is_empty() {
        let (_, terms, cmp) = p.row(&objective_toks, 0)?;
        if cmp.is_some() {
            return Err(LpError::Syntax {
                line: 0,
                msg: "comparison in objective".into(),
            });
        }
        objective = terms;
    }

    // Model order: Bounds order first, then first appearance.
    let total = p.names.len();
    let mut seen = vec![false; total];
    let mut ordered = Vec::with_capacity(total);
    for v in order.into_iter().chain(0..total) {
        if !seen[v] {
            seen[v] = true;
            ordered.push(v);
        }
    }
    let mut position = vec![0; total];
    for (k, &v) in ordered.iter().enumerate() {
        position[v] = k;
    }
    let mut model = IlpModel::new(family.unwrap_or_else(|| {
        if p.names.iter().any(|n| n.starts_with("y_")) {
            Family::Ilp4
        } else {
            Family::Ilp2
        }
    }));
    let mut obj = vec![0i64; total];
    for (v, c) in objective {
        obj[v] += c;
    }
    let mut kinds = vec![None; total];
    for v in generals {
        kinds[v] = Some(VarKind::Integer);
    }
    for v in binaries {
        kinds[v] = Some(VarKind::Binary);
    }
    for &v in &ordered {
        let name = &p.names[v];
        let role = Role::parse(name).ok_or_else(|| LpError::UnknownVariable(name.clone()))?;
        let kind = kinds[v].ok_or_else(|| LpError::Continuous(name.clone()))?;
        model.add_variable(role, kind, obj[v]);
    }
    for (name, terms, sense, rhs) in rows {
        let terms = terms.into_iter().map(|(v, c)| (position[v], c));
        model.add_constraint(Constraint::new(name, terms, sense, rhs));
    }
    Ok(model)
}
