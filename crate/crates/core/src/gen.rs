//! Seeded random instance generators for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::eg::{Formula, Literal, Names, Node, VarId};

fn names(n: usize) -> Names {
    let mut names = Names::new();
    for i in 0..n {
        names.intern(&format!("v{i}"));
    }
    names
}

/// Random nested formula over `vars` variables with at most `max_depth`
/// nested cuts and about `max_literals` atoms.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    vars: usize,
    max_depth: usize,
    max_literals: usize,
) -> Formula {
    let mut budget = rng.gen_range(1..=max_literals.max(1));
    let mut root = Vec::new();
    while budget > 0 {
        root.push(random_node(rng, vars, 0, max_depth, &mut budget));
    }
    Formula::new(root, names(vars))
}

fn random_node<R: Rng>(
    rng: &mut R,
    vars: usize,
    depth: usize,
    max_depth: usize,
    budget: &mut usize,
) -> Node {
    let atom = depth >= max_depth || *budget <= 1 || rng.gen_bool(0.4);
    if atom {
        *budget = budget.saturating_sub(1);
        return Node::Atom(VarId(rng.gen_range(0..vars) as u32));
    }
    let k = rng.gen_range(1..=3);
    let mut ch = Vec::new();
    for _ in 0..k {
        if *budget == 0 {
            break;
        }
        ch.push(random_node(rng, vars, depth + 1, max_depth, budget));
    }
    Node::Cut(ch)
}

fn random_clause<R: Rng>(rng: &mut R, vars: usize, width: usize) -> Vec<Literal> {
    let mut pool: Vec<u32> = (0..vars as u32).collect();
    pool.shuffle(rng);
    pool[..width.min(vars)]
        .iter()
        .map(|&v| Literal::new(VarId(v), rng.gen_bool(0.5)))
        .collect()
}

/// Random flat CNF; clause widths are uniform in `widths`.
pub fn random_cnf<R: Rng>(
    rng: &mut R,
    vars: usize,
    clauses: usize,
    widths: std::ops::RangeInclusive<usize>,
) -> Formula {
    let root = (0..clauses)
        .map(|_| {
            let w = rng.gen_range(widths.clone());
            Node::clause(&random_clause(rng, vars, w))
        })
        .collect();
    Formula::new(root, names(vars))
}

/// Nested instance dominated by unit clauses: every area holds about eight
/// units over fresh variables, a wider clause and up to two sub-cuts.
pub fn singleton_heavy<R: Rng>(rng: &mut R, literals: usize) -> Formula {
    let vars = literals.max(8);
    let mut budget = literals;
    let mut root = Vec::new();
    while budget > 0 {
        root.push(Node::Cut(singleton_area(rng, vars, 1, &mut budget)));
    }
    Formula::new(root, names(vars))
}

fn singleton_area<R: Rng>(rng: &mut R, vars: usize, depth: usize, budget: &mut usize) -> Vec<Node> {
    let mut area = Vec::new();
    for _ in 0..8 {
        if *budget == 0 {
            break;
        }
        *budget -= 1;
        area.push(Node::literal(Literal::new(
            VarId(rng.gen_range(0..vars) as u32),
            rng.gen_bool(0.5),
        )));
    }
    if *budget >= 3 {
        *budget -= 3;
        area.push(Node::clause(&random_clause(rng, vars, 3)));
    }
    if depth < 4 {
        for _ in 0..2 {
            if *budget < 4 {
                break;
            }
            area.push(Node::Cut(singleton_area(rng, vars, depth + 1, budget)));
        }
    }
    if area.is_empty() {
        area.push(Node::Atom(VarId(0)));
    }
    area
}

/// Flat satisfiable CNF with `clauses` clauses of which half are binary
/// and the rest ternary; every clause agrees with one hidden assignment.
pub fn binary_heavy<R: Rng>(rng: &mut R, clauses: usize) -> Formula {
    let vars = clauses.max(4);
    let hidden: Vec<bool> = (0..vars).map(|_| rng.gen_bool(0.5)).collect();
    let root = (0..clauses)
        .map(|i| {
            let w = if i % 2 == 0 { 2 } else { 3 };
            let mut c = random_clause(rng, vars, w);
            if !c.iter().any(|l| hidden[l.var().index()] == l.is_positive()) {
                c[0] = !c[0];
            }
            Node::clause(&c)
        })
        .collect();
    Formula::new(root, names(vars))
}
