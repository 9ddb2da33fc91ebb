//! The five reduction rules: SWR, EPR (with the xor lift), TRR, OSIR and
//! TWSR.
//!
//! Each rule exists in two forms. The `*_at` / `*_unit` functions mutate a
//! [`Work`] and are what the engine drives; the `apply_*` functions take a
//! [`Formula`], run the rule once and hand back the result together with a
//! [`RuleOutcome`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use crate::big::Big;
use crate::eg::{Formula, Literal, Names, Node, ScopePath, VarId};
use crate::error::{Error, Result};
use crate::work::{Kind, NodeId, Work, SHEET};

/// Exported equivalences: every member variable is equal (or opposite) to
/// its representative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivClasses {
    // member -> (representative, opposite)
    members: BTreeMap<VarId, (VarId, bool)>,
}

impl EquivClasses {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of member variables (representatives excluded).
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// The literal `var` is equal to.
    pub fn resolve(&self, var: VarId) -> Literal {
        match self.members.get(&var) {
            Some(&(rep, opp)) => Literal::new(rep, !opp),
            None => Literal::pos(var),
        }
    }

    /// Records a class; the first literal is the representative and must be
    /// positive.
    pub fn add_class(&mut self, class: &[Literal]) {
        let Some((&rep, rest)) = class.split_first() else {
            return;
        };
        assert!(rep.is_positive(), "representative must be positive");
        let rep = self.resolve(rep.var());
        for &m in rest {
            // m == rep_lit, expressed over the final representative
            let target = if m.is_positive() { rep } else { !rep };
            self.bind(m.var(), target);
        }
    }

    fn bind(&mut self, var: VarId, target: Literal) {
        if target.var() == var {
            return;
        }
        let previous: Vec<(VarId, bool)> = self
            .members
            .iter()
            .filter(|(_, &(r, _))| r == var)
            .map(|(&m, &(_, o))| (m, o))
            .collect();
        self.members
            .insert(var, (target.var(), !target.is_positive()));
        for (m, o) in previous {
            self.members
                .insert(m, (target.var(), o ^ !target.is_positive()));
        }
    }

    /// Folds `other` (derived later) into `self`.
    pub fn merge(&mut self, other: &EquivClasses) {
        for (&m, &(r, o)) in &other.members {
            let target = self.resolve(r);
            let target = if o { !target } else { target };
            self.bind(m, target);
        }
    }

    /// `(member, literal it equals)` pairs.
    pub fn definitions(&self) -> Vec<(VarId, Literal)> {
        self.members
            .iter()
            .map(|(&m, &(r, o))| (m, Literal::new(r, !o)))
            .collect()
    }

    /// Classes keyed by representative; members listed with their sign
    /// relative to the representative, representative first.
    pub fn classes(&self) -> BTreeMap<VarId, Vec<Literal>> {
        let mut out: BTreeMap<VarId, Vec<Literal>> = BTreeMap::new();
        for (&m, &(r, o)) in &self.members {
            out.entry(r)
                .or_insert_with(|| vec![Literal::pos(r)])
                .push(Literal::new(m, !o));
        }
        out
    }

    /// `[A]={A,~B}` style rendering, one class per entry.
    pub fn render(&self, names: &Names) -> Vec<String> {
        self.classes()
            .into_iter()
            .map(|(r, lits)| {
                let body: Vec<String> = lits.iter().map(|&l| names.literal_name(l)).collect();
                format!("[{}]={{{}}}", names.name(r), body.join(","))
            })
            .collect()
    }

    pub fn to_json(&self, names: &Names) -> serde_json::Value {
        let classes: Vec<serde_json::Value> = self
            .classes()
            .into_iter()
            .map(|(r, lits)| {
                serde_json::json!({
                    "representative": names.name(r),
                    "members": lits.iter().map(|&l| names.literal_name(l)).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::Value::Array(classes)
    }

    /// Inverse of `to_json`; names are interned into `names`.
    pub fn from_json(value: &serde_json::Value, names: &mut Names) -> Option<EquivClasses> {
        let mut out = EquivClasses::new();
        for class in value.as_array()? {
            let mut lits = Vec::new();
            for m in class.get("members")?.as_array()? {
                let m = m.as_str()?;
                let (body, positive) = match m.strip_prefix('~') {
                    Some(rest) => (rest, false),
                    None => (m, true),
                };
                lits.push(Literal::new(names.intern(body), positive));
            }
            let rep = class.get("representative")?.as_str()?;
            if lits.first() != Some(&Literal::pos(names.intern(rep))) {
                return None;
            }
            out.add_class(&lits);
        }
        Some(out)
    }

    /// Conjunction of the class definitions as a formula over `names`.
    pub fn definitions_formula(&self, names: &Names) -> Formula {
        let mut root = Vec::new();
        for (m, r) in self.definitions() {
            let m = Literal::pos(m);
            root.push(Node::clause(&[!m, r]));
            root.push(Node::clause(&[m, !r]));
        }
        Formula::new(root, names.clone())
    }

    /// Same classes over another name table.
    pub fn remap(&self, from: &Names, to: &mut Names) -> EquivClasses {
        let mut out = EquivClasses::new();
        for (&m, &(r, o)) in &self.members {
            let m2 = to.intern(from.name(m));
            let r2 = to.intern(from.name(r));
            out.members.insert(m2, (r2, o));
        }
        out
    }
}

/// What a single rule application did.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleOutcome {
    pub changed: bool,
    pub deleted_clauses: Vec<NodeId>,
    pub removed_literals: Vec<(NodeId, Literal)>,
    pub added_singletons: Vec<(NodeId, Literal)>,
    pub classes: EquivClasses,
}

impl RuleOutcome {
    fn absorb_deleted(&mut self, w: &mut Work) {
        for d in w.take_deleted() {
            if !self.deleted_clauses.contains(&d) {
                self.deleted_clauses.push(d);
            }
        }
    }

    fn note_shrink(&mut self, w: &Work, clause: NodeId, before: &[Literal]) {
        if !w.is_clause(clause) {
            return;
        }
        let after = w.clause_literals(clause);
        for &l in before {
            if !after.contains(&l) {
                self.removed_literals.push((clause, l));
            }
        }
    }
}

// ---- SWR ----

/// Propagates the unit clause `unit` through its area: equal occurrences
/// are erased, complementary ones become empty cuts.
pub fn swr_unit(w: &mut Work, unit: NodeId, out: &mut RuleOutcome) -> bool {
    if !w.is_clause(unit) || w.clause_size(unit) != 1 {
        return false;
    }
    let lit = w.clause_literals(unit)[0];
    let own = match w.kind(unit) {
        Kind::Atom(_) => unit,
        _ => w
            .children(unit)
            .next()
            .expect("unit occurrence has an atom"),
    };
    let area = w.parent(unit).expect("clause has an area");
    let mut changed = false;
    for a in w.atoms_of(lit.var()) {
        if w.is_bottom() || !w.alive(unit) {
            break;
        }
        if a == own || !w.alive(a) || !w.within(a, area) {
            continue;
        }
        let owner = w.clause_of_atom(a);
        let before = owner.map(|c| w.clause_literals(c)).unwrap_or_default();
        if lit.is_positive() {
            w.delete(a);
        } else {
            w.falsify(a);
        }
        changed = true;
        if let Some(c) = owner {
            out.note_shrink(w, c, &before);
        }
    }
    out.absorb_deleted(w);
    out.changed |= changed;
    changed
}

/// SWR for every unit read directly in `area`.
pub fn swr_at(w: &mut Work, area: NodeId, out: &mut RuleOutcome) -> bool {
    let mut changed = false;
    for u in w.clauses_in(area) {
        if w.is_clause(u) && w.clause_size(u) == 1 {
            changed |= swr_unit(w, u, out);
        }
    }
    changed
}

// ---- EPR ----

/// Equivalence projection on the scope ending at `area`. Classes found at
/// the sheet are recorded in `out.classes`.
pub fn epr_at(w: &mut Work, area: NodeId, out: &mut RuleOutcome) -> bool {
    let g = w.scope_big(area);
    let classes = g.strongly_connected_classes();
    let mut changed = false;
    for class in classes {
        if w.is_bottom() || !w.is_area(area) {
            break;
        }
        changed |= project_class(w, area, &class, out);
    }
    out.absorb_deleted(w);
    out.changed |= changed;
    changed
}

fn project_class(w: &mut Work, area: NodeId, class: &[Literal], out: &mut RuleOutcome) -> bool {
    let set: HashSet<Literal> = class.iter().copied().collect();
    if class.iter().any(|l| set.contains(&!*l)) {
        w.area_false(area);
        return true;
    }
    let mut class = class.to_vec();
    class.sort_by_key(|l| l.var());
    if !class[0].is_positive() {
        for l in class.iter_mut() {
            *l = !*l;
        }
    }
    let rep = class[0].var();
    let side = |l: Literal| -> Option<bool> {
        if set.contains(&l) {
            Some(true)
        } else if set.contains(&!l) {
            Some(false)
        } else {
            None
        }
    };
    let mut retained = HashSet::new();
    if area != SHEET {
        for b in w.binaries_in(area) {
            if let [x, y] = w.clause_literals(b)[..] {
                let s = side(!x);
                if s.is_some() && s == side(y) {
                    retained.insert(b);
                }
            }
        }
    }
    let mut containers = Vec::new();
    let mut touched: BTreeMap<NodeId, Vec<Literal>> = BTreeMap::new();
    for &m in &class[1..] {
        let target = Literal::new(rep, m.is_positive());
        for a in w.atoms_of(m.var()) {
            if w.is_bottom() || !w.is_area(area) {
                return true;
            }
            if !w.alive(a) || !w.within(a, area) {
                continue;
            }
            let owner = w.clause_of_atom(a);
            if owner.is_some_and(|c| retained.contains(&c)) {
                continue;
            }
            if let Some(c) = owner {
                touched.entry(c).or_insert_with(|| w.clause_literals(c));
            }
            containers.push(w.substitute_atom(a, target));
        }
    }
    if containers.is_empty() {
        return false;
    }
    let mut seen = HashSet::new();
    for atom in containers {
        if !w.alive(atom) {
            continue;
        }
        if let Some(c) = w.occurrence_container(atom) {
            if seen.insert(c) {
                w.normalize_occurrences(c);
            }
        }
    }
    for (c, before) in touched {
        if w.is_clause(c) {
            let after = w.clause_literals(c);
            for &l in &before {
                let mapped = substituted(l, &class, rep);
                if !after.contains(&l) && !after.contains(&mapped) {
                    out.removed_literals.push((c, l));
                }
            }
        }
    }
    if area == SHEET {
        out.classes.add_class(&class);
    }
    true
}

fn substituted(l: Literal, class: &[Literal], rep: VarId) -> Literal {
    for &m in class {
        if m.var() == l.var() {
            let to = Literal::new(rep, m.is_positive());
            return if l.is_positive() { to } else { !to };
        }
    }
    l
}

// ---- xor lift ----

/// If `cut` is exactly `~((p|q) & (~p|~q))`, the two clauses `(~p|q)` and
/// `(p|~q)` that replace it in the enclosing area.
pub fn xor_lift(cut: &Node) -> Option<[Vec<Literal>; 2]> {
    let Node::Cut(ch) = cut else { return None };
    let [a, b] = &ch[..] else { return None };
    let ca = a.as_clause()?;
    let cb = b.as_clause()?;
    xor_pair(&ca, &cb)
}

fn xor_pair(ca: &[Literal], cb: &[Literal]) -> Option<[Vec<Literal>; 2]> {
    let ([p, q], [r, s]) = (ca, cb) else {
        return None;
    };
    let neg: BTreeSet<Literal> = [!*p, !*q].into_iter().collect();
    let other: BTreeSet<Literal> = [*r, *s].into_iter().collect();
    if neg != other || p.var() == q.var() {
        return None;
    }
    let mut x = vec![!*p, *q];
    let mut y = vec![*p, !*q];
    x.sort();
    y.sort();
    Some([x, y])
}

/// Replaces a structural cut of xor shape by its two lifted clauses.
pub fn lift_at(w: &mut Work, cut: NodeId, out: &mut RuleOutcome) -> bool {
    if !w.is_area(cut) || w.kind(cut) != Kind::Cut || w.live_count(cut) != 2 {
        return false;
    }
    let kids: Vec<NodeId> = w.children(cut).collect();
    if !kids
        .iter()
        .all(|&k| w.is_clause(k) && w.clause_size(k) == 2)
    {
        return false;
    }
    let Some([x, y]) = xor_pair(&w.clause_literals(kids[0]), &w.clause_literals(kids[1])) else {
        return false;
    };
    let parent = w.parent(cut).expect("cut has a parent");
    w.detach(cut);
    w.add_clause(parent, &x);
    w.add_clause(parent, &y);
    w.settle(parent);
    out.absorb_deleted(w);
    out.changed = true;
    true
}

// ---- TRR ----

/// Removes binary clauses made redundant by implication chains, outermost
/// scope first.
pub fn trr(w: &mut Work, out: &mut RuleOutcome) -> Result<bool> {
    let mut changed = false;
    for area in w.areas() {
        if w.is_bottom() {
            break;
        }
        if !w.is_area(area) {
            continue;
        }
        let own: HashSet<NodeId> = w.binaries_in(area).into_iter().collect();
        if own.is_empty() {
            continue;
        }
        let g = w.scope_big(area);
        for e in g.transitive_reduction_edges()? {
            if own.contains(&e.clause) && w.is_clause(e.clause) {
                w.delete(e.clause);
                changed = true;
            }
        }
    }
    out.absorb_deleted(w);
    out.changed |= changed;
    Ok(changed)
}

// ---- OSIR ----

/// Adds `~l` as a unit of `area` for every literal `l` of the scope graph
/// that implies its own negation, then propagates the new units.
pub fn osir_at(w: &mut Work, area: NodeId, out: &mut RuleOutcome) -> bool {
    let g = w.scope_big(area);
    let mut vars: Vec<VarId> = g.nodes().iter().map(|l| l.var()).collect();
    vars.sort();
    vars.dedup();
    let mut units = Vec::new();
    for v in vars {
        for l in [Literal::pos(v), Literal::neg(v)] {
            if g.reaches(l, !l) {
                units.push(!l);
            }
        }
    }
    if units.is_empty() {
        return false;
    }
    let mut added = Vec::new();
    for u in units {
        if w.is_bottom() || !w.is_area(area) {
            break;
        }
        let id = w.add_occurrence(area, u);
        out.added_singletons.push((area, u));
        added.push(id);
    }
    for id in added {
        if w.is_bottom() {
            break;
        }
        swr_unit(w, id, out);
    }
    out.absorb_deleted(w);
    out.changed = true;
    true
}

// ---- TWSR ----

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwsrAction {
    /// Condition (1): the target is redundant.
    DeleteTarget,
    /// Condition (2): this literal can be dropped from the target.
    RemoveLiteral(Literal),
}

/// Decides whether premise `c` reduces target `d` under `g`. Edges coming
/// from `d` itself (when `d` is binary) are ignored.
pub fn twsr_check(
    c: &[Literal],
    d: &[Literal],
    g: &Big,
    d_id: NodeId,
    injective: bool,
) -> Option<TwsrAction> {
    if c.is_empty() || c.len() > d.len() {
        return None;
    }
    let exclude = g.contains_clause(d_id);
    let des: Vec<Rc<BTreeSet<Literal>>> = c
        .iter()
        .map(|&p| {
            if exclude {
                Rc::new(g.descendants_excluding(p, d_id))
            } else {
                g.descendants(p)
            }
        })
        .collect();
    let mut pos: Vec<Vec<usize>> = vec![Vec::new(); c.len()];
    let mut flip: Vec<Vec<usize>> = vec![Vec::new(); c.len()];
    for (i, &p) in c.iter().enumerate() {
        for (j, &q) in d.iter().enumerate() {
            if q == p || des[i].contains(&q) {
                pos[i].push(j);
            }
            if q == !p || des[i].contains(&!q) {
                flip[i].push(j);
            }
        }
    }
    if covers(&pos, None, None, d.len(), injective) {
        return Some(TwsrAction::DeleteTarget);
    }
    for (i, targets) in flip.iter().enumerate() {
        for &j in targets {
            if covers(&pos, Some(i), Some(j), d.len(), injective) {
                return Some(TwsrAction::RemoveLiteral(d[j]));
            }
        }
    }
    None
}

/// Whether every row except `skip_row` can be assigned a column from its
/// list, never using `skip_col`; rows need distinct columns if `injective`.
fn covers(
    rows: &[Vec<usize>],
    skip_row: Option<usize>,
    skip_col: Option<usize>,
    ncols: usize,
    injective: bool,
) -> bool {
    let active: Vec<usize> = (0..rows.len()).filter(|&i| Some(i) != skip_row).collect();
    if !injective {
        return active
            .iter()
            .all(|&i| rows[i].iter().any(|&j| Some(j) != skip_col));
    }
    // Kuhn's augmenting paths; rows are at most maxL long
    let mut owner: Vec<Option<usize>> = vec![None; ncols];
    for &i in &active {
        let mut seen = vec![false; ncols];
        if !augment(i, rows, skip_col, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(
    i: usize,
    rows: &[Vec<usize>],
    skip_col: Option<usize>,
    owner: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &j in &rows[i] {
        if Some(j) == skip_col || seen[j] {
            continue;
        }
        seen[j] = true;
        let free = match owner[j] {
            None => true,
            Some(k) => augment(k, rows, skip_col, owner, seen),
        };
        if free {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}

/// Applies premise `c` to target `d` if TWSR allows it.
pub fn twsr_at(
    w: &mut Work,
    c: NodeId,
    d: NodeId,
    g: &Big,
    injective: bool,
    out: &mut RuleOutcome,
) -> Option<TwsrAction> {
    if c == d || !w.is_clause(c) || !w.is_clause(d) {
        return None;
    }
    let cl = w.clause_literals(c);
    let dl = w.clause_literals(d);
    let action = twsr_check(&cl, &dl, g, d, injective)?;
    match action {
        TwsrAction::DeleteTarget => w.delete(d),
        TwsrAction::RemoveLiteral(q) => {
            w.remove_literal(d, q);
            if w.is_clause(d) {
                out.removed_literals.push((d, q));
            }
        }
    }
    out.absorb_deleted(w);
    out.changed = true;
    Some(action)
}

// ---- formula-level entry points ----

fn area_of(w: &Work, path: &ScopePath) -> Result<NodeId> {
    w.resolve_path(path).ok_or(Error::InvalidPath)
}

fn finish(w: Work, mut out: RuleOutcome) -> (Formula, RuleOutcome) {
    if !out.changed {
        out = RuleOutcome::default();
    }
    (w.to_formula(), out)
}

pub fn apply_swr(f: &Formula, path: &ScopePath) -> Result<(Formula, RuleOutcome)> {
    let mut w = Work::from_formula(f);
    let area = area_of(&w, path)?;
    let mut out = RuleOutcome::default();
    swr_at(&mut w, area, &mut out);
    Ok(finish(w, out))
}

/// SWR from every area, outermost first, until nothing changes.
pub fn apply_swr_everywhere(f: &Formula) -> (Formula, RuleOutcome) {
    let mut w = Work::from_formula(f);
    let mut out = RuleOutcome::default();
    loop {
        let mut changed = false;
        for area in w.areas() {
            if w.is_bottom() {
                break;
            }
            if w.is_area(area) {
                changed |= swr_at(&mut w, area, &mut out);
            }
        }
        if !changed || w.is_bottom() {
            break;
        }
    }
    finish(w, out)
}

pub fn apply_epr(f: &Formula, path: &ScopePath) -> Result<(Formula, RuleOutcome)> {
    let mut w = Work::from_formula(f);
    let area = area_of(&w, path)?;
    let mut out = RuleOutcome::default();
    epr_at(&mut w, area, &mut out);
    Ok(finish(w, out))
}

pub fn apply_trr(f: &Formula) -> Result<(Formula, RuleOutcome)> {
    let mut w = Work::from_formula(f);
    let mut out = RuleOutcome::default();
    trr(&mut w, &mut out)?;
    Ok(finish(w, out))
}

pub fn apply_osir(f: &Formula, path: &ScopePath) -> Result<(Formula, RuleOutcome)> {
    let mut w = Work::from_formula(f);
    let area = area_of(&w, path)?;
    let mut out = RuleOutcome::default();
    osir_at(&mut w, area, &mut out);
    Ok(finish(w, out))
}

/// One TWSR application with clause views `c` (premise) and `d` (target),
/// using the scope graph of `d`'s area.
pub fn twsr_step(
    f: &Formula,
    c: NodeId,
    d: NodeId,
    injective: bool,
) -> Result<(Formula, RuleOutcome)> {
    let mut w = Work::from_formula(f);
    for id in [c, d] {
        if !w.is_clause(id) {
            return Err(Error::InvalidClause(id));
        }
    }
    let area_c = w.parent(c).expect("clause has an area");
    let area_d = w.parent(d).expect("clause has an area");
    let mut out = RuleOutcome::default();
    if w.clause_size(c) <= w.clause_size(d) && w.within(area_d, area_c) {
        let g = w.scope_big(area_d);
        twsr_at(&mut w, c, d, &g, injective, &mut out);
    }
    Ok(finish(w, out))
}

/// Lifts every xor-shaped cut of `f`.
pub fn apply_xor_lift(f: &Formula) -> (Formula, RuleOutcome) {
    let mut w = Work::from_formula(f);
    let mut out = RuleOutcome::default();
    for cut in w.take_lift_candidates() {
        lift_at(&mut w, cut, &mut out);
    }
    finish(w, out)
}

/// Ids of clause views by their literal sets, for tests and diagnostics.
pub fn clause_ids_by_literals(f: &Formula) -> HashMap<Vec<Literal>, Vec<NodeId>> {
    let mut m: HashMap<Vec<Literal>, Vec<NodeId>> = HashMap::new();
    for cv in crate::eg::clause_views(f) {
        m.entry(cv.literals).or_default().push(cv.id);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_pl;

    fn same(got: &Formula, want: &str) -> bool {
        let mut names = got.names().clone();
        let want = parse_pl(want).unwrap().remap_into(&mut names);
        let got = got.remap_into(&mut names);
        got.equal_canonical(&want)
    }

    fn lit(f: &Formula, s: &str) -> Literal {
        match s.strip_prefix('~') {
            Some(n) => Literal::neg(f.names().get(n).unwrap()),
            None => Literal::pos(f.names().get(s).unwrap()),
        }
    }

    fn clause_id(f: &Formula, lits: &[&str]) -> NodeId {
        let mut key: Vec<Literal> = lits.iter().map(|s| lit(f, s)).collect();
        key.sort();
        clause_ids_by_literals(f)[&key][0]
    }

    /// Path to the first root child that is a structural cut.
    fn complex_path(f: &Formula) -> ScopePath {
        let i = f
            .root()
            .iter()
            .position(|n| matches!(n, Node::Cut(_)) && n.as_clause().is_none())
            .unwrap();
        ScopePath(vec![i])
    }

    #[test]
    fn swr_nested_singletons() {
        let f = parse_pl(
            "P & ((A & D & P & (A -> B) & (~C | D)) | (P & Q & R) | T | (S & T) \
             | ~(X -> (X & Y & Z))) & ~T",
        )
        .unwrap();
        let (g, out) = apply_swr_everywhere(&f);
        assert!(out.changed);
        assert!(same(&g, "P & ~T & ((A&B&D) | (Q&R) | (X & (~Y | ~Z)))"));
    }

    #[test]
    fn swr_trivial() {
        let (g, _) = apply_swr(&parse_pl("P & ~P").unwrap(), &ScopePath::root()).unwrap();
        assert!(g.is_bottom());
        let f = parse_pl("P & Q").unwrap();
        let (g, out) = apply_swr(&f, &ScopePath::root()).unwrap();
        assert!(!out.changed && out == RuleOutcome::default());
        assert!(g.equal_canonical(&f));
    }

    #[test]
    fn epr_collapses_cycle() {
        let f = parse_pl("(~X|Y) & (~Y|Z) & (~Z|U) & (~U|V) & (~U|Y)").unwrap();
        let (g, out) = apply_epr(&f, &ScopePath::root()).unwrap();
        assert!(same(&g, "(~X|Y) & (~Y|V)"));
        assert_eq!(out.classes.render(g.names()), vec!["[Y]={Y,Z,U}"]);
    }

    #[test]
    fn epr_opposite_class_and_contradiction() {
        let f = parse_pl("(A|B) & (~A|~B) & (A|C|D)").unwrap();
        let (g, out) = apply_epr(&f, &ScopePath::root()).unwrap();
        assert!(same(&g, "A|C|D"));
        assert_eq!(out.classes.render(g.names()), vec!["[A]={A,~B}"]);
        // x and ~x in one class
        let f = parse_pl("(~A|B) & (~B|~A) & (A|~B) & (B|A) & C").unwrap();
        let (g, _) = apply_epr(&f, &ScopePath::root()).unwrap();
        assert!(g.is_bottom());
    }

    #[test]
    fn epr_acyclic_unchanged() {
        let f = parse_pl("(~A|B) & (~B|C)").unwrap();
        let (g, out) = apply_epr(&f, &ScopePath::root()).unwrap();
        assert!(!out.changed);
        assert!(g.equal_canonical(&f));
    }

    #[test]
    fn nested_epr_keeps_defining_binaries() {
        let f = parse_pl("(~X|~Y|~A) & ~((A->B) & (B->A) & (~X|~Y|~B))").unwrap();
        let p = complex_path(&f);
        let (g, out) = apply_epr(&f, &p).unwrap();
        assert!(out.classes.is_empty());
        assert!(same(&g, "(~X|~Y|~A) & ~((A->B) & (B->A) & (~X|~Y|~A))"));
    }

    #[test]
    fn xor_lift_shapes() {
        let f = parse_pl("~((A->B) & (B->A))").unwrap();
        let [x, y] = xor_lift(&f.root()[0]).unwrap();
        let (a, b) = (lit(&f, "A"), lit(&f, "B"));
        let mut want = [vec![a, b], vec![!a, !b]];
        want.iter_mut().for_each(|v| v.sort());
        let mut got = [x, y];
        got.sort();
        want.sort();
        assert_eq!(got, want);
        let f = parse_pl("~P").unwrap();
        assert!(xor_lift(&f.root()[0]).is_none());
        let (g, _) = apply_xor_lift(&parse_pl("C & ~((A->B) & (B->A))").unwrap());
        assert!(same(&g, "C & (A|B) & (~A|~B)"));
    }

    #[test]
    fn trr_nested_example() {
        let f = parse_pl("(~A|B) & (~B|C) & ~((C|~A) & X & Y)").unwrap();
        let (g, _) = apply_trr(&f).unwrap();
        assert!(same(&g, "(~A|B)&(~B|C)&(~X|~Y)"));
    }

    #[test]
    fn trr_flat() {
        let (g, _) = apply_trr(&parse_pl("(~a|b)&(~b|c)&(~a|c)").unwrap()).unwrap();
        assert!(same(&g, "(~a|b)&(~b|c)"));
        let f = parse_pl("(~a|b)&(~b|c)").unwrap();
        let (g, out) = apply_trr(&f).unwrap();
        assert!(!out.changed && g.equal_canonical(&f));
    }

    #[test]
    fn osir_nested_example() {
        let f = parse_pl("(~X|~Z) & ((B&~C) | (X&Y&~A) | (A&~B) | (P&A&Q) | (C&A))").unwrap();
        let p = complex_path(&f);
        let (g, out) = apply_osir(&f, &p).unwrap();
        assert_eq!(out.added_singletons.len(), 1);
        assert!(same(&g, "(~X|~Z) & ((B&~C) | (X&Y) | A)"));
    }

    #[test]
    fn osir_flat() {
        let (g, _) = apply_osir(&parse_pl("(~x|y)&(~y|~x)").unwrap(), &ScopePath::root()).unwrap();
        assert!(same(&g, "~x"));
        let f = parse_pl("(~x|y)").unwrap();
        let (_, out) = apply_osir(&f, &ScopePath::root()).unwrap();
        assert!(!out.changed);
    }

    #[test]
    fn twsr_condition_one() {
        let f = parse_pl("(P->R) & (X->Y) & (X|Q|P) & (R|Y|Q)").unwrap();
        let c = clause_id(&f, &["X", "Q", "P"]);
        let d = clause_id(&f, &["R", "Y", "Q"]);
        let (g, out) = twsr_step(&f, c, d, true).unwrap();
        assert_eq!(out.deleted_clauses, vec![d]);
        assert!(same(&g, "(P->R) & (X->Y) & (X|Q|P)"));
    }

    #[test]
    fn twsr_condition_two() {
        let f = parse_pl("(T->S) & (A->B) & (S|~B|Q) & (A|Q|T)").unwrap();
        let c = clause_id(&f, &["A", "Q", "T"]);
        let d = clause_id(&f, &["S", "~B", "Q"]);
        let (g, out) = twsr_step(&f, c, d, true).unwrap();
        assert_eq!(out.removed_literals, vec![(d, lit(&f, "~B"))]);
        assert!(same(&g, "(T->S) & (A->B) & (S|Q) & (A|Q|T)"));
    }

    #[test]
    fn twsr_nested_example() {
        let f = parse_pl("(A->E) & (B->F) & (C->G) & ~((~A|~B|G|~H) & (~A|~B|~C|~D) & (~E|~F|~G))")
            .unwrap();
        let p = clause_id(&f, &["~E", "~F", "~G"]);
        let q = clause_id(&f, &["~A", "~B", "~C", "~D"]);
        let r = clause_id(&f, &["~A", "~B", "G", "~H"]);
        let (g, out) = twsr_step(&f, p, q, true).unwrap();
        assert_eq!(out.deleted_clauses, vec![q]);
        let p2 = clause_id(&g, &["~E", "~F", "~G"]);
        let r2 = clause_id(&g, &["~A", "~B", "G", "~H"]);
        let (h, _) = twsr_step(&g, p2, r2, true).unwrap();
        assert!(same(&h, "(A->E) & (B->F) & (C->G) & ((A&B&H) | (E&F&G))"));
        assert_eq!(h.root().len(), 4);
        assert!(out.removed_literals.is_empty() && r != q);
    }

    #[test]
    fn twsr_unit_matches_swr() {
        let f = parse_pl("P & (P|Q) & (~P|R|S)").unwrap();
        let u = clause_id(&f, &["P"]);
        let d = clause_id(&f, &["P", "Q"]);
        let (g, _) = twsr_step(&f, u, d, true).unwrap();
        let u2 = clause_id(&g, &["P"]);
        let e2 = clause_id(&g, &["~P", "R", "S"]);
        let (g, _) = twsr_step(&g, u2, e2, true).unwrap();
        let (s, _) = apply_swr(&f, &ScopePath::root()).unwrap();
        assert!(g.equal_canonical(&s));
        assert!(same(&s, "P & (R|S)"));
    }

    #[test]
    fn twsr_ignores_targets_own_edges() {
        // (~a|b) must not justify its own removal
        let f = parse_pl("(~a|b) & (~a|b|c)").unwrap();
        let c = clause_id(&f, &["~a", "b"]);
        let (g, _) = twsr_step(&f, c, c, true).unwrap();
        assert!(g.equal_canonical(&f));
        let c = clause_id(&f, &["~a", "b"]);
        let d = clause_id(&f, &["~a", "b", "c"]);
        let (g, _) = twsr_step(&f, c, d, true).unwrap();
        assert!(same(&g, "(~a|b)"));
    }

    #[test]
    fn injective_versus_relaxed() {
        // both p's only reach q1: a matching needs distinct targets
        let c = [Literal::pos(VarId(0)), Literal::pos(VarId(1))];
        let d = [Literal::pos(VarId(2)), Literal::pos(VarId(3))];
        let mut g = Big::new();
        g.add_clause(Literal::neg(VarId(0)), Literal::pos(VarId(2)), 100);
        g.add_clause(Literal::neg(VarId(1)), Literal::pos(VarId(2)), 101);
        assert_eq!(twsr_check(&c, &d, &g, 7, true), None);
        assert_eq!(
            twsr_check(&c, &d, &g, 7, false),
            Some(TwsrAction::DeleteTarget)
        );
    }

    #[test]
    fn classes_compose() {
        let mut e = EquivClasses::new();
        let (a, b, c) = (VarId(0), VarId(1), VarId(2));
        e.add_class(&[Literal::pos(a), Literal::pos(b)]);
        e.add_class(&[Literal::pos(a), Literal::neg(c)]);
        assert_eq!(e.resolve(c), Literal::neg(a));
        // the old representative joins a class with a smaller one
        let mut e2 = EquivClasses::new();
        e2.add_class(&[Literal::pos(b), Literal::neg(c)]);
        e2.add_class(&[Literal::pos(a), Literal::neg(b)]);
        assert_eq!(e2.resolve(b), Literal::neg(a));
        assert_eq!(e2.resolve(c), Literal::pos(a));
        let mut m = EquivClasses::new();
        m.merge(&e2);
        assert_eq!(m, e2);
    }
}
