//! Binary implication graphs.
//!
//! Each binary clause `(x | y)` contributes the skew-symmetric edge pair
//! `~x -> y` and `~y -> x`. A graph may be the union of the binary clauses of
//! several nested areas; every clause then carries the layer (nesting
//! position along the scope path) it was taken from.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use crate::eg::Literal;
use crate::error::{Error, Result};

/// Identifier of the clause an edge originates from.
pub type ClauseId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Edge {
    to: usize,
    clause: ClauseId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct BinaryClause {
    a: Literal,
    b: Literal,
    layer: u32,
}

/// An edge reported by [`Big::transitive_reduction_edges`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReducedEdge {
    pub from: Literal,
    pub to: Literal,
    pub clause: ClauseId,
}

#[derive(Clone, Debug, Default)]
pub struct Big {
    // local index i and i ^ 1 hold complementary literals
    lits: Vec<Literal>,
    index: HashMap<Literal, usize>,
    succ: Vec<Vec<Edge>>,
    clauses: BTreeMap<ClauseId, BinaryClause>,
    revision: u64,
    memo: RefCell<HashMap<usize, Rc<BTreeSet<Literal>>>>,
}

impl Big {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bumped on every edge change.
    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    fn node(&mut self, l: Literal) -> usize {
        if let Some(&i) = self.index.get(&l) {
            return i;
        }
        let i = self.lits.len();
        for x in [l, !l] {
            self.index.insert(x, self.lits.len());
            self.lits.push(x);
            self.succ.push(Vec::new());
        }
        i
    }

    fn changed(&mut self) {
        self.revision += 1;
        self.memo.get_mut().clear();
    }

    /// Adds `(a | b)` at layer 0. Tautologies and degenerate pairs are not
    /// represented.
    pub fn add_clause(&mut self, a: Literal, b: Literal, id: ClauseId) -> bool {
        self.add_clause_layered(a, b, id, 0)
    }

    pub fn add_clause_layered(&mut self, a: Literal, b: Literal, id: ClauseId, layer: u32) -> bool {
        if a == !b || a == b || self.clauses.contains_key(&id) {
            return false;
        }
        let (na, nb) = (self.node(!a), self.node(!b));
        let (ia, ib) = (na ^ 1, nb ^ 1);
        self.succ[na].push(Edge { to: ib, clause: id });
        self.succ[nb].push(Edge { to: ia, clause: id });
        self.clauses.insert(id, BinaryClause { a, b, layer });
        self.changed();
        true
    }

    pub fn remove_clause(&mut self, id: ClauseId) -> bool {
        let Some(bc) = self.clauses.remove(&id) else {
            return false;
        };
        for from in [!bc.a, !bc.b] {
            let i = self.index[&from];
            self.succ[i].retain(|e| e.clause != id);
        }
        self.changed();
        true
    }

    pub fn contains_clause(&self, id: ClauseId) -> bool {
        self.clauses.contains_key(&id)
    }

    pub fn clause_literals(&self, id: ClauseId) -> Option<(Literal, Literal)> {
        self.clauses.get(&id).map(|c| (c.a, c.b))
    }

    pub fn clause_layer(&self, id: ClauseId) -> Option<u32> {
        self.clauses.get(&id).map(|c| c.layer)
    }

    pub fn clause_ids(&self) -> impl Iterator<Item = ClauseId> + '_ {
        self.clauses.keys().copied()
    }

    /// Every literal that is a node of the graph (occurring literals and
    /// their negations), in insertion order.
    pub fn nodes(&self) -> &[Literal] {
        &self.lits
    }

    pub fn contains_literal(&self, l: Literal) -> bool {
        self.index.contains_key(&l)
    }

    /// All directed edges with their originating clause.
    pub fn edges(&self) -> Vec<(Literal, Literal, ClauseId)> {
        let mut out = Vec::new();
        for (i, es) in self.succ.iter().enumerate() {
            for e in es {
                out.push((self.lits[i], self.lits[e.to], e.clause));
            }
        }
        out
    }

    pub fn successors(&self, l: Literal) -> Vec<Literal> {
        match self.index.get(&l) {
            Some(&i) => self.succ[i].iter().map(|e| self.lits[e.to]).collect(),
            None => Vec::new(),
        }
    }

    pub fn is_skew_symmetric(&self) -> bool {
        let mut set: HashMap<(Literal, Literal, ClauseId), usize> = HashMap::new();
        for e in self.edges() {
            *set.entry(e).or_default() += 1;
        }
        set.keys().all(|&(a, b, c)| set.contains_key(&(!b, !a, c)))
            && self.edges().iter().all(|(a, b, _)| a != b)
    }

    fn reach(&self, start: usize, skip: impl Fn(&Edge) -> bool) -> BTreeSet<Literal> {
        let mut seen = vec![false; self.lits.len()];
        let mut stack = vec![start];
        let mut out = BTreeSet::new();
        while let Some(i) = stack.pop() {
            for e in &self.succ[i] {
                if skip(e) || seen[e.to] {
                    continue;
                }
                seen[e.to] = true;
                out.insert(self.lits[e.to]);
                stack.push(e.to);
            }
        }
        out
    }

    /// Literals reachable from `l` by at least one edge. Memoized until the
    /// next edge change.
    pub fn descendants(&self, l: Literal) -> Rc<BTreeSet<Literal>> {
        let Some(&i) = self.index.get(&l) else {
            return Rc::new(BTreeSet::new());
        };
        if let Some(d) = self.memo.borrow().get(&i) {
            return Rc::clone(d);
        }
        let d = Rc::new(self.reach(i, |_| false));
        self.memo.borrow_mut().insert(i, Rc::clone(&d));
        d
    }

    /// Descendants of `l` without using the edges of clause `excluded`.
    pub fn descendants_excluding(&self, l: Literal, excluded: ClauseId) -> BTreeSet<Literal> {
        match self.index.get(&l) {
            Some(&i) if self.clauses.contains_key(&excluded) => {
                self.reach(i, |e| e.clause == excluded)
            }
            Some(_) => (*self.descendants(l)).clone(),
            None => BTreeSet::new(),
        }
    }

    /// Literals that reach `l`.
    pub fn ancestors(&self, l: Literal) -> BTreeSet<Literal> {
        self.descendants(!l).iter().map(|&x| !x).collect()
    }

    pub fn reaches(&self, from: Literal, to: Literal) -> bool {
        self.descendants(from).contains(&to)
    }

    /// Strongly connected components of size >= 2, one per skew-symmetric
    /// pair: the side holding the positive literal of the smallest variable.
    /// A component containing both `x` and `~x` is its own mirror and is
    /// reported as is. Each class is sorted, so its first element is the
    /// representative.
    pub fn strongly_connected_classes(&self) -> Vec<Vec<Literal>> {
        let comps = tarjan(&self.succ);
        let mut out: Vec<Vec<Literal>> = Vec::new();
        for comp in comps {
            if comp.len() < 2 {
                continue;
            }
            let mut lits: Vec<Literal> = comp.iter().map(|&i| self.lits[i]).collect();
            lits.sort();
            let min_var = lits[0].var();
            if lits.contains(&Literal::pos(min_var)) {
                out.push(lits);
            }
        }
        out.sort();
        out
    }

    pub fn is_acyclic(&self) -> bool {
        tarjan(&self.succ).iter().all(|c| c.len() < 2)
    }

    /// Clauses whose edges are implied by other paths.
    ///
    /// A clause of layer `k` is redundant when one of its edges `u -> v` has
    /// another path from `u` to `v` through edges of layer `<= k`, so inner
    /// clauses can be explained by outer ones but never the other way round.
    /// Clauses are tested innermost first and removed as they are found, so
    /// of two parallel edges only one goes.
    pub fn transitive_reduction_edges(&self) -> Result<Vec<ReducedEdge>> {
        if !self.is_acyclic() {
            return Err(Error::CyclicGraph);
        }
        let mut order: Vec<(ClauseId, BinaryClause)> =
            self.clauses.iter().map(|(&id, &c)| (id, c)).collect();
        order.sort_by_key(|&(id, c)| (std::cmp::Reverse(c.layer), std::cmp::Reverse(id)));
        let mut removed: BTreeSet<ClauseId> = BTreeSet::new();
        let mut out = Vec::new();
        for (id, c) in order {
            // edge ~a -> b
            let (from, to) = (!c.a, c.b);
            let start = self.index[&from];
            let target = self.index[&to];
            let allowed = |e: &Edge| {
                e.clause != id
                    && !removed.contains(&e.clause)
                    && self.clauses[&e.clause].layer <= c.layer
            };
            let mut seen = vec![false; self.lits.len()];
            let mut stack = vec![start];
            let mut found = false;
            while let Some(i) = stack.pop() {
                if i == target {
                    found = true;
                    break;
                }
                for e in &self.succ[i] {
                    if allowed(e) && !seen[e.to] {
                        seen[e.to] = true;
                        stack.push(e.to);
                    }
                }
            }
            if found {
                removed.insert(id);
                let (f2, t2) = (!c.b, c.a);
                let (from, to) = if from <= f2 { (from, to) } else { (f2, t2) };
                out.push(ReducedEdge {
                    from,
                    to,
                    clause: id,
                });
            }
        }
        out.sort_by_key(|e| e.clause);
        Ok(out)
    }
}

/// Iterative Tarjan over an adjacency list.
fn tarjan(succ: &[Vec<Edge>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    // (node, next edge position)
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, pos)) = call.last() {
            if pos < succ[v].len() {
                let w = succ[v][pos].to;
                if let Some(top) = call.last_mut() {
                    top.1 += 1;
                }
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}
