//! Brute-force semantics for differential testing.

use std::collections::{BTreeMap, BTreeSet};

use crate::eg::{Formula, Literal, Names, Node, VarId};
use crate::error::{Error, Result};
use crate::rules::EquivClasses;

/// Default refusal threshold for truth-table enumeration.
pub const MAX_ORACLE_VARS: usize = 24;

pub type Assignment = BTreeMap<VarId, bool>;

fn eval_area(area: &[Node], value: &dyn Fn(VarId) -> bool) -> bool {
    area.iter().all(|n| eval_node(n, value))
}

fn eval_node(n: &Node, value: &dyn Fn(VarId) -> bool) -> bool {
    match n {
        Node::Atom(v) => value(*v),
        Node::Cut(ch) => !eval_area(ch, value),
    }
}

pub fn evaluate(f: &Formula, a: &Assignment) -> Result<bool> {
    for v in f.vars() {
        if !a.contains_key(&v) {
            return Err(Error::MissingVariable(f.names().name(v).to_string()));
        }
    }
    Ok(eval_area(f.root(), &|v| a[&v]))
}

/// Truth value under the assignment whose bit `i` is the value of
/// `vars[i]`.
fn eval_bits(area: &[Node], slot: &[usize], bits: u64) -> bool {
    eval_area(area, &|v: VarId| bits >> slot[v.index()] & 1 == 1)
}

fn check_cap(count: usize, limit: usize) -> Result<()> {
    if count > limit {
        Err(Error::OracleCap { count, limit })
    } else {
        Ok(())
    }
}

/// Whether `a` and `b` together with the class definitions agree on every
/// assignment. Variables are matched by name.
pub fn equiv_check(a: &Formula, b: &Formula, classes: &EquivClasses) -> Result<bool> {
    equiv_check_with_cap(a, b, classes, MAX_ORACLE_VARS)
}

pub fn equiv_check_with_cap(
    a: &Formula,
    b: &Formula,
    classes: &EquivClasses,
    cap: usize,
) -> Result<bool> {
    let mut names: Names = a.names().clone();
    let b2 = b.remap_into(&mut names);
    let defs = classes
        .remap(b.names(), &mut names)
        .definitions_formula(&names);
    let rhs = b2.and(&defs);
    let mut vars: BTreeSet<VarId> = a.vars().into_iter().collect();
    vars.extend(rhs.vars());
    check_cap(vars.len(), cap)?;
    let mut slot = vec![0usize; names.len()];
    for (i, v) in vars.iter().enumerate() {
        slot[v.index()] = i;
    }
    let lhs = a.remap_into(&mut names);
    for bits in 0..(1u64 << vars.len()) {
        if eval_bits(lhs.root(), &slot, bits) != eval_bits(rhs.root(), &slot, bits) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Satisfying assignments of `f` over `vars` (which must cover `f`).
pub fn count_models(f: &Formula, vars: &[VarId]) -> Result<u64> {
    let set: BTreeSet<VarId> = vars.iter().copied().collect();
    check_cap(set.len(), MAX_ORACLE_VARS)?;
    for v in f.vars() {
        if !set.contains(&v) {
            return Err(Error::MissingVariable(f.names().name(v).to_string()));
        }
    }
    let width = f
        .names()
        .len()
        .max(set.iter().map(|v| v.index() + 1).max().unwrap_or(0));
    let mut slot = vec![0usize; width];
    for (i, v) in set.iter().enumerate() {
        slot[v.index()] = i;
    }
    Ok((0..(1u64 << set.len()))
        .filter(|&bits| eval_bits(f.root(), &slot, bits))
        .count() as u64)
}

/// Flat CNF clauses of `f`, or `NotCnf`.
pub fn cnf_clauses(f: &Formula) -> Result<Vec<BTreeSet<Literal>>> {
    if f.is_bottom() {
        return Ok(vec![BTreeSet::new()]);
    }
    f.root()
        .iter()
        .map(|n| {
            n.as_clause()
                .map(|c| c.into_iter().collect())
                .ok_or(Error::NotCnf)
        })
        .collect()
}

/// Fixpoint of unit propagation, subsumption and self-subsuming
/// resolution over a flat CNF, by plain quadratic scans.
pub fn baseline_preprocess(f: &Formula) -> Result<Formula> {
    let mut cls = cnf_clauses(f)?;
    loop {
        if cls.iter().any(|c| c.is_empty()) {
            return Ok(Formula::bottom(f.names().clone()));
        }
        if unit_round(&mut cls) || subsume_round(&mut cls) || strengthen_round(&mut cls) {
            continue;
        }
        break;
    }
    let root = cls
        .iter()
        .map(|c| Node::clause(&c.iter().copied().collect::<Vec<_>>()))
        .collect();
    Ok(Formula::new(root, f.names().clone()))
}

fn unit_round(cls: &mut Vec<BTreeSet<Literal>>) -> bool {
    let units: Vec<Literal> = cls
        .iter()
        .filter(|c| c.len() == 1)
        .map(|c| *c.iter().next().unwrap())
        .collect();
    let mut changed = false;
    for u in units {
        let before = cls.len();
        let mut kept_unit = false;
        cls.retain(|c| {
            if c.len() == 1 && c.contains(&u) && !kept_unit {
                kept_unit = true;
                return true;
            }
            !c.contains(&u)
        });
        changed |= cls.len() != before;
        for c in cls.iter_mut() {
            changed |= c.remove(&!u);
        }
    }
    changed
}

fn subsume_round(cls: &mut Vec<BTreeSet<Literal>>) -> bool {
    let mut dead = vec![false; cls.len()];
    for i in 0..cls.len() {
        if dead[i] {
            continue;
        }
        for j in 0..cls.len() {
            if i != j && !dead[j] && cls[i].is_subset(&cls[j]) {
                dead[j] = true;
            }
        }
    }
    let changed = dead.iter().any(|&d| d);
    let mut k = 0;
    cls.retain(|_| {
        k += 1;
        !dead[k - 1]
    });
    changed
}

fn strengthen_round(cls: &mut [BTreeSet<Literal>]) -> bool {
    let mut changed = false;
    for i in 0..cls.len() {
        for j in 0..cls.len() {
            if i == j {
                continue;
            }
            let hit = cls[i].iter().copied().find(|&l| {
                cls[j].contains(&!l) && cls[i].iter().all(|&m| m == l || cls[j].contains(&m))
            });
            if let Some(l) = hit {
                cls[j].remove(&!l);
                changed = true;
            }
        }
    }
    changed
}
