//! Existential-graph arborescence.
//!
//! A [`Formula`] is a sheet of assertion holding an unordered collection of
//! [`Node`]s. Juxtaposition in an area is conjunction and a [`Node::Cut`]
//! negates the conjunction of its children. Everything built through the
//! public constructors is kept in canonical form:
//!
//! - no cut whose only child is a cut (double cuts are spliced away),
//! - no two structurally equal siblings in one area,
//! - no cut containing an empty cut (such a cut is `true` and is dropped).
//!
//! `false` is the sheet `{Cut{}}`; `true` is the empty sheet.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

/// Dense variable index into a formula's [`Names`] table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A variable together with a polarity, packed as `var << 1 | negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(u32);

impl Literal {
    pub fn new(var: VarId, positive: bool) -> Self {
        Literal(var.0 << 1 | u32::from(!positive))
    }

    pub fn pos(var: VarId) -> Self {
        Self::new(var, true)
    }

    pub fn neg(var: VarId) -> Self {
        Self::new(var, false)
    }

    pub fn var(self) -> VarId {
        VarId(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn from_code(code: u32) -> Self {
        Literal(code)
    }

    /// Signed 1-based integer as used by DIMACS.
    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var().0) + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        Literal(self.0 ^ 1)
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.var().0)
        } else {
            write!(f, "~x{}", self.var().0)
        }
    }
}

/// Injective variable name table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Names {
    names: Vec<String>,
    lookup: HashMap<String, VarId>,
}

impl Names {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `name`, allocating the next dense index if unseen.
    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&id) = self.lookup.get(name) {
            return id;
        }
        let id = VarId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.lookup.insert(name.to_string(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<VarId> {
        self.lookup.get(name).copied()
    }

    pub fn name(&self, var: VarId) -> &str {
        &self.names[var.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &str)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (VarId(i as u32), n.as_str()))
    }

    pub fn literal_name(&self, lit: Literal) -> String {
        if lit.is_positive() {
            self.name(lit.var()).to_string()
        } else {
            format!("~{}", self.name(lit.var()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Atom(VarId),
    Cut(Vec<Node>),
}

impl Node {
    pub fn cut(children: Vec<Node>) -> Node {
        Node::Cut(children)
    }

    /// The occurrence that denotes `lit` inside an area.
    pub fn literal(lit: Literal) -> Node {
        if lit.is_positive() {
            Node::Atom(lit.var())
        } else {
            Node::Cut(vec![Node::Atom(lit.var())])
        }
    }

    /// The cut denoting the disjunction of `lits`.
    ///
    /// A one-literal clause is returned as the bare occurrence.
    pub fn clause(lits: &[Literal]) -> Node {
        if lits.len() == 1 {
            return Node::literal(lits[0]);
        }
        Node::Cut(lits.iter().map(|&l| Node::literal(!l)).collect())
    }

    /// `Some(lit)` when this node is `Atom(v)` or `Cut{Atom(v)}`.
    pub fn as_literal(&self) -> Option<Literal> {
        match self {
            Node::Atom(v) => Some(Literal::pos(*v)),
            Node::Cut(ch) => match ch.as_slice() {
                [Node::Atom(v)] => Some(Literal::neg(*v)),
                _ => None,
            },
        }
    }

    /// Literals of the clause this node denotes when read as a clause view.
    pub fn as_clause(&self) -> Option<Vec<Literal>> {
        match self {
            Node::Atom(v) => Some(vec![Literal::pos(*v)]),
            Node::Cut(ch) if ch.is_empty() => None,
            Node::Cut(ch) => ch.iter().map(|c| c.as_literal().map(|l| !l)).collect(),
        }
    }

    pub fn is_empty_cut(&self) -> bool {
        matches!(self, Node::Cut(ch) if ch.is_empty())
    }

    /// Height of the subtree: atoms have depth 0, a cut one more than its
    /// deepest child.
    pub fn depth(&self) -> usize {
        match self {
            Node::Atom(_) => 0,
            Node::Cut(ch) => 1 + ch.iter().map(Node::depth).max().unwrap_or(0),
        }
    }

    pub fn atom_count(&self) -> usize {
        match self {
            Node::Atom(_) => 1,
            Node::Cut(ch) => ch.iter().map(Node::atom_count).sum(),
        }
    }

    pub fn collect_vars(&self, out: &mut HashSet<VarId>) {
        match self {
            Node::Atom(v) => {
                out.insert(*v);
            }
            Node::Cut(ch) => ch.iter().for_each(|c| c.collect_vars(out)),
        }
    }

    /// Order-independent structural hash.
    pub fn fingerprint(&self) -> u64 {
        match self {
            Node::Atom(v) => splitmix(u64::from(v.0) ^ 0xa5a5_0000_0000_0001),
            Node::Cut(ch) => {
                let mut fps: Vec<u64> = ch.iter().map(Node::fingerprint).collect();
                fps.sort_unstable();
                let mut h = 0x243f_6a88_85a3_08d3u64;
                for fp in fps {
                    h = splitmix(h ^ fp);
                }
                splitmix(h.wrapping_add(0x9e37))
            }
        }
    }

    /// Exact encoding with every area's children sorted; two canonical nodes
    /// are equal as unordered trees iff their keys are equal.
    pub fn sort_key(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.encode(&mut out);
        out
    }

    fn encode(&self, out: &mut Vec<u32>) {
        match self {
            Node::Atom(v) => out.push(v.0 + 2),
            Node::Cut(ch) => {
                let mut keys: Vec<Vec<u32>> = ch.iter().map(Node::sort_key).collect();
                keys.sort();
                out.push(0);
                for k in keys {
                    out.extend(k);
                }
                out.push(1);
            }
        }
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Canonical area holding only `false`.
pub fn bottom_area() -> Vec<Node> {
    vec![Node::Cut(Vec::new())]
}

pub fn is_bottom_area(area: &[Node]) -> bool {
    matches!(area, [n] if n.is_empty_cut())
}

/// Canonicalizes a single node, returning the area it expands to: empty for
/// a cut folded to `true`, several nodes for a spliced double cut.
pub fn canonicalize(node: Node) -> Vec<Node> {
    canonicalize_area(vec![node])
}

/// Canonicalizes the children of one area (bottom-up).
pub fn canonicalize_area(children: Vec<Node>) -> Vec<Node> {
    let mut out: Vec<Node> = Vec::with_capacity(children.len());
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut push = |n: Node, out: &mut Vec<Node>| {
        if seen.insert(n.sort_key()) {
            out.push(n);
        }
    };
    for child in children {
        match child {
            Node::Atom(_) => push(child, &mut out),
            Node::Cut(inner) => {
                let inner = canonicalize_area(inner);
                if is_bottom_area(&inner) {
                    // not(false): true, drop
                    continue;
                }
                if inner.is_empty() {
                    return bottom_area();
                }
                if inner.len() == 1 && matches!(inner[0], Node::Cut(_)) {
                    let Some(Node::Cut(grand)) = inner.into_iter().next() else {
                        unreachable!()
                    };
                    for g in grand {
                        push(g, &mut out);
                    }
                    continue;
                }
                push(Node::Cut(inner), &mut out);
            }
        }
    }
    out
}

/// Checks the canonical-form invariants recursively.
pub fn is_canonical_area(area: &[Node], is_sheet: bool) -> bool {
    if is_bottom_area(area) {
        return is_sheet;
    }
    let mut seen = HashSet::new();
    for n in area {
        if !seen.insert(n.sort_key()) {
            return false;
        }
        if let Node::Cut(ch) = n {
            if ch.is_empty() {
                return false;
            }
            if ch.len() == 1 && matches!(ch[0], Node::Cut(_)) {
                return false;
            }
            if !is_canonical_area(ch, false) {
                return false;
            }
        }
    }
    true
}

/// Unordered-tree equality of two canonical nodes.
pub fn equal_canonical(a: &Node, b: &Node) -> bool {
    a.fingerprint() == b.fingerprint() && a.sort_key() == b.sort_key()
}

/// Unordered-multiset equality of two areas.
pub fn equal_areas(a: &[Node], b: &[Node]) -> bool {
    equal_canonical(&Node::Cut(a.to_vec()), &Node::Cut(b.to_vec()))
}

/// A propositional formula as an existential graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    root: Vec<Node>,
    names: Names,
}

impl Formula {
    /// Builds a canonical formula from an arbitrary sheet.
    pub fn new(root: Vec<Node>, names: Names) -> Self {
        Formula {
            root: canonicalize_area(root),
            names,
        }
    }

    /// Wraps a sheet without canonicalizing it.
    pub fn from_raw(root: Vec<Node>, names: Names) -> Self {
        Formula { root, names }
    }

    pub fn top(names: Names) -> Self {
        Formula {
            root: Vec::new(),
            names,
        }
    }

    pub fn bottom(names: Names) -> Self {
        Formula {
            root: bottom_area(),
            names,
        }
    }

    pub fn root(&self) -> &[Node] {
        &self.root
    }

    pub fn names(&self) -> &Names {
        &self.names
    }

    pub fn into_parts(self) -> (Vec<Node>, Names) {
        (self.root, self.names)
    }

    pub fn is_top(&self) -> bool {
        self.root.is_empty()
    }

    pub fn is_bottom(&self) -> bool {
        is_bottom_area(&self.root)
    }

    pub fn is_canonical(&self) -> bool {
        is_canonical_area(&self.root, true)
    }

    /// Variables occurring in the formula, ascending.
    pub fn vars(&self) -> Vec<VarId> {
        let mut set = HashSet::new();
        self.root.iter().for_each(|n| n.collect_vars(&mut set));
        let mut v: Vec<VarId> = set.into_iter().collect();
        v.sort();
        v
    }

    pub fn equal_canonical(&self, other: &Formula) -> bool {
        equal_areas(&self.root, &other.root)
    }

    /// Same formula expressed over `target`'s variable table, adding names
    /// that are missing there.
    pub fn remap_into(&self, target: &mut Names) -> Formula {
        fn go(n: &Node, src: &Names, dst: &mut Names) -> Node {
            match n {
                Node::Atom(v) => Node::Atom(dst.intern(src.name(*v))),
                Node::Cut(ch) => Node::Cut(ch.iter().map(|c| go(c, src, dst)).collect()),
            }
        }
        let root = self
            .root
            .iter()
            .map(|n| go(n, &self.names, target))
            .collect();
        Formula::new(root, target.clone())
    }

    /// Conjunction of two formulas sharing a name table.
    pub fn and(&self, other: &Formula) -> Formula {
        let mut root = self.root.clone();
        root.extend(other.root.iter().cloned());
        Formula::new(root, self.names.clone())
    }

    /// Negation of the whole formula.
    pub fn negated(&self) -> Formula {
        Formula::new(vec![Node::Cut(self.root.clone())], self.names.clone())
    }
}

/// A path of cuts from the sheet to an area: each entry is a child index in
/// the enclosing area. The empty path is the sheet.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct ScopePath(pub Vec<usize>);

impl ScopePath {
    pub fn root() -> Self {
        ScopePath(Vec::new())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Resolves to the children of the addressed area.
    pub fn resolve<'a>(&self, f: &'a Formula) -> Option<&'a [Node]> {
        let mut area: &[Node] = f.root();
        for &i in &self.0 {
            match area.get(i)? {
                Node::Cut(ch) => area = ch,
                Node::Atom(_) => return None,
            }
        }
        Some(area)
    }
}

/// A clause read off some area: either a bare atom or a cut whose children
/// are all literal occurrences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseView {
    /// Preorder index of the node (the sheet is 0).
    pub id: u32,
    pub area: ScopePath,
    pub literals: Vec<Literal>,
}

impl ClauseView {
    pub fn size(&self) -> usize {
        self.literals.len()
    }
}

/// Whether the children of an area that is a clause-cut are all literal
/// occurrences; such an area is not scanned for further clauses.
fn is_clause_shaped(children: &[Node]) -> bool {
    !children.is_empty() && children.iter().all(|c| c.as_literal().is_some())
}

/// Every clause view of `f`, in preorder.
pub fn clause_views(f: &Formula) -> Vec<ClauseView> {
    fn walk(area: &[Node], path: &mut Vec<usize>, next_id: &mut u32, out: &mut Vec<ClauseView>) {
        for (i, n) in area.iter().enumerate() {
            let id = *next_id;
            *next_id += 1;
            match n {
                Node::Atom(v) => out.push(ClauseView {
                    id,
                    area: ScopePath(path.clone()),
                    literals: vec![Literal::pos(*v)],
                }),
                Node::Cut(ch) if is_clause_shaped(ch) => {
                    let mut lits: Vec<Literal> = n.as_clause().unwrap_or_default();
                    lits.sort();
                    lits.dedup();
                    out.push(ClauseView {
                        id,
                        area: ScopePath(path.clone()),
                        literals: lits,
                    });
                    *next_id += count_nodes(ch) as u32;
                }
                Node::Cut(ch) => {
                    path.push(i);
                    walk(ch, path, next_id, out);
                    path.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut next_id = 1;
    walk(f.root(), &mut Vec::new(), &mut next_id, &mut out);
    out
}

fn count_nodes(area: &[Node]) -> usize {
    area.iter()
        .map(|n| match n {
            Node::Atom(_) => 1,
            Node::Cut(ch) => 1 + count_nodes(ch),
        })
        .sum()
}

/// Size and shape counters of a formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    /// Atom occurrences (l).
    pub literals: usize,
    /// Distinct variables (v).
    pub variables: usize,
    /// Clause views across all areas, units included (c).
    pub clauses: usize,
    /// Unit clause views (s).
    pub singletons: usize,
    /// Size-2 clause views (kappa).
    pub binary_clauses: usize,
    /// Variables occurring in binary clauses (beta).
    pub binary_variables: usize,
    /// Binary variables that also occur in clauses of size > 2 (beta').
    pub binary_variables_in_long_clauses: usize,
    /// Largest clause view (maxL).
    pub max_clause_length: usize,
    /// Cuts of depth > 2 (mu).
    pub deep_cuts: usize,
}

impl Stats {
    pub fn symbols(&self) -> serde_json::Value {
        serde_json::json!({
            "l": self.literals,
            "v": self.variables,
            "c": self.clauses,
            "s": self.singletons,
            "kappa": self.binary_clauses,
            "beta": self.binary_variables,
            "beta_prime": self.binary_variables_in_long_clauses,
            "maxL": self.max_clause_length,
            "mu": self.deep_cuts,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("stats serialize");
        v["symbols"] = self.symbols();
        v
    }
}

pub fn compute_stats(f: &Formula) -> Stats {
    fn deep_cuts(area: &[Node]) -> usize {
        area.iter()
            .map(|n| match n {
                Node::Atom(_) => 0,
                Node::Cut(ch) => usize::from(n.depth() > 2) + deep_cuts(ch),
            })
            .sum()
    }
    let views = clause_views(f);
    let mut binary_vars = HashSet::new();
    let mut long_vars = HashSet::new();
    let mut st = Stats {
        literals: f.root().iter().map(Node::atom_count).sum(),
        variables: f.vars().len(),
        clauses: views.len(),
        deep_cuts: deep_cuts(f.root()),
        ..Stats::default()
    };
    for cv in &views {
        let n = cv.size();
        st.max_clause_length = st.max_clause_length.max(n);
        match n {
            1 => st.singletons += 1,
            2 => {
                st.binary_clauses += 1;
                binary_vars.extend(cv.literals.iter().map(|l| l.var()));
            }
            _ => long_vars.extend(cv.literals.iter().map(|l| l.var())),
        }
    }
    st.binary_variables = binary_vars.len();
    st.binary_variables_in_long_clauses = binary_vars.intersection(&long_vars).count();
    st
}
