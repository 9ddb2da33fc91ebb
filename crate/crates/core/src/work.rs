//! Mutable arena form of a formula used while rules are applied.
//!
//! Node ids are preorder positions of the source [`Formula`] (the sheet is
//! 0), so they coincide with [`ClauseView`](crate::eg::ClauseView) ids;
//! nodes created later get fresh ids. Removed nodes stay in the arena as
//! dead slots.
//!
//! Every mutation keeps three things current: the classification of each
//! node (structural area or clause view), the running counters `l`, `v`,
//! `c`, `s`, and the per-area sets of binary clauses.

use std::collections::{BTreeSet, HashMap};

use crate::big::Big;
use crate::eg::{Formula, Literal, Names, Node, ScopePath, VarId};

pub type NodeId = u32;

const NONE: NodeId = NodeId::MAX;
pub const SHEET: NodeId = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Sheet,
    Cut,
    Atom(VarId),
}

#[derive(Clone, Debug)]
struct Slot {
    kind: Kind,
    parent: NodeId,
    children: Vec<NodeId>,
    live: u32,
    alive: bool,
    structural: bool,
    cv: bool,
    cv_size: u32,
    // area whose binary set holds this clause
    bin_area: NodeId,
    dirty: bool,
}

impl Slot {
    fn new(kind: Kind, parent: NodeId) -> Self {
        Slot {
            kind,
            parent,
            children: Vec::new(),
            live: 0,
            alive: true,
            structural: matches!(kind, Kind::Sheet | Kind::Cut),
            cv: false,
            cv_size: 0,
            bin_area: NONE,
            dirty: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Work {
    slots: Vec<Slot>,
    names: Names,
    atoms_by_var: Vec<Vec<NodeId>>,
    var_count: Vec<u32>,
    literals: usize,
    variables: usize,
    clauses: usize,
    singletons: usize,
    bottom: bool,
    dirty: Vec<NodeId>,
    lift_candidates: Vec<NodeId>,
    deleted: Vec<NodeId>,
    binaries: HashMap<NodeId, BTreeSet<NodeId>>,
    bin_revision: u64,
    new_binaries: Vec<NodeId>,
}

/// Running size counters of a [`Work`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct Counters {
    pub variables: usize,
    pub clauses: usize,
    pub literals: usize,
}

impl Work {
    pub fn from_formula(f: &Formula) -> Self {
        let names = f.names().clone();
        let nv = names.len();
        let mut w = Work {
            slots: vec![Slot::new(Kind::Sheet, NONE)],
            names,
            atoms_by_var: vec![Vec::new(); nv],
            var_count: vec![0; nv],
            literals: 0,
            variables: 0,
            clauses: 0,
            singletons: 0,
            bottom: f.is_bottom(),
            dirty: Vec::new(),
            lift_candidates: Vec::new(),
            deleted: Vec::new(),
            binaries: HashMap::new(),
            bin_revision: 0,
            new_binaries: Vec::new(),
        };
        for n in f.root() {
            w.build_raw(SHEET, n);
        }
        // classify bottom-up: shapes first, then clause views
        for id in (0..w.slots.len() as NodeId).rev() {
            w.slots[id as usize].structural = w.compute_structural(id);
        }
        for id in 0..w.slots.len() as NodeId {
            w.update_cv(id);
            if w.kind(id) == Kind::Cut && w.slots[id as usize].structural {
                w.lift_candidates.push(id);
            }
        }
        w.new_binaries.clear();
        w.deleted.clear();
        w
    }

    fn build_raw(&mut self, parent: NodeId, n: &Node) -> NodeId {
        match n {
            Node::Atom(v) => self.alloc(Kind::Atom(*v), parent),
            Node::Cut(ch) => {
                let id = self.alloc(Kind::Cut, parent);
                for c in ch {
                    self.build_raw(id, c);
                }
                id
            }
        }
    }

    fn alloc(&mut self, kind: Kind, parent: NodeId) -> NodeId {
        let id = self.slots.len() as NodeId;
        self.slots.push(Slot::new(kind, parent));
        if parent != NONE {
            let p = &mut self.slots[parent as usize];
            p.children.push(id);
            p.live += 1;
        }
        if let Kind::Atom(v) = kind {
            self.count_atom(v, true);
            self.atoms_by_var[v.index()].push(id);
        }
        id
    }

    fn count_atom(&mut self, v: VarId, add: bool) {
        let c = &mut self.var_count[v.index()];
        if add {
            if *c == 0 {
                self.variables += 1;
            }
            *c += 1;
            self.literals += 1;
        } else {
            *c -= 1;
            if *c == 0 {
                self.variables -= 1;
            }
            self.literals -= 1;
        }
    }

    /// Back to an immutable canonical formula.
    pub fn to_formula(&self) -> Formula {
        if self.bottom {
            return Formula::bottom(self.names.clone());
        }
        let root = self.children(SHEET).map(|c| self.export(c)).collect();
        Formula::new(root, self.names.clone())
    }

    fn export(&self, id: NodeId) -> Node {
        match self.kind(id) {
            Kind::Atom(v) => Node::Atom(v),
            _ => Node::Cut(self.children(id).map(|c| self.export(c)).collect()),
        }
    }

    pub fn export_node(&self, id: NodeId) -> Node {
        self.export(id)
    }

    // ---- queries ----

    pub fn names(&self) -> &Names {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live_count(SHEET) == 0 && !self.bottom
    }

    pub fn is_bottom(&self) -> bool {
        self.bottom
    }

    pub fn is_top(&self) -> bool {
        !self.bottom && self.live_count(SHEET) == 0
    }

    pub fn counters(&self) -> Counters {
        Counters {
            variables: self.variables,
            clauses: self.clauses,
            literals: self.literals,
        }
    }

    pub fn singletons(&self) -> usize {
        self.singletons
    }

    pub fn kind(&self, id: NodeId) -> Kind {
        self.slots[id as usize].kind
    }

    pub fn alive(&self, id: NodeId) -> bool {
        (id as usize) < self.slots.len() && self.slots[id as usize].alive
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        let p = self.slots[id as usize].parent;
        (p != NONE).then_some(p)
    }

    pub fn live_count(&self, id: NodeId) -> usize {
        self.slots[id as usize].live as usize
    }

    pub fn children(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.slots[id as usize]
            .children
            .iter()
            .copied()
            .filter(move |&c| self.slots[c as usize].alive && self.slots[c as usize].parent == id)
    }

    fn only_child(&self, id: NodeId) -> Option<NodeId> {
        if self.slots[id as usize].live != 1 {
            return None;
        }
        self.children(id).next()
    }

    /// `Some(lit)` for `Atom(v)` (lit `v`) and `Cut{Atom(v)}` (lit `~v`).
    pub fn occurrence_literal(&self, id: NodeId) -> Option<Literal> {
        match self.kind(id) {
            Kind::Atom(v) => Some(Literal::pos(v)),
            Kind::Cut => match self.only_child(id).map(|c| self.kind(c)) {
                Some(Kind::Atom(v)) => Some(Literal::neg(v)),
                _ => None,
            },
            Kind::Sheet => None,
        }
    }

    fn is_clause_shaped(&self, id: NodeId) -> bool {
        self.kind(id) == Kind::Cut
            && self.live_count(id) > 0
            && self
                .children(id)
                .all(|c| self.occurrence_literal(c).is_some())
    }

    fn compute_structural(&self, id: NodeId) -> bool {
        match self.kind(id) {
            Kind::Sheet => true,
            Kind::Cut => !self.is_clause_shaped(id),
            Kind::Atom(_) => false,
        }
    }

    /// Whether `id` is an area in which clause views are read.
    pub fn is_area(&self, id: NodeId) -> bool {
        self.alive(id) && self.slots[id as usize].structural
    }

    pub fn is_clause(&self, id: NodeId) -> bool {
        self.alive(id) && self.slots[id as usize].cv
    }

    pub fn clause_size(&self, id: NodeId) -> usize {
        self.slots[id as usize].cv_size as usize
    }

    /// Literals of a clause view, sorted.
    pub fn clause_literals(&self, id: NodeId) -> Vec<Literal> {
        let mut lits: Vec<Literal> = match self.kind(id) {
            Kind::Atom(v) => vec![Literal::pos(v)],
            _ => self
                .children(id)
                .filter_map(|c| self.occurrence_literal(c))
                .map(|l| !l)
                .collect(),
        };
        lits.sort();
        lits.dedup();
        lits
    }

    /// The clause view owning atom `a`.
    pub fn clause_of_atom(&self, a: NodeId) -> Option<NodeId> {
        let mut cur = a;
        for _ in 0..3 {
            if self.is_clause(cur) {
                return Some(cur);
            }
            cur = self.parent(cur)?;
        }
        None
    }

    /// Number of cuts enclosing the area `id` (the sheet is 0).
    pub fn area_depth(&self, id: NodeId) -> usize {
        let mut d = 0;
        let mut cur = id;
        while let Some(p) = self.parent(cur) {
            d += 1;
            cur = p;
        }
        d
    }

    /// Whether `id` lies inside (or is) `area`.
    pub fn within(&self, id: NodeId, area: NodeId) -> bool {
        let mut cur = id;
        loop {
            if cur == area {
                return true;
            }
            match self.parent(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    /// Areas from the sheet down to `area` inclusive.
    pub fn area_path(&self, area: NodeId) -> Vec<NodeId> {
        let mut path = vec![area];
        let mut cur = area;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Live clause views that are direct children of `area`.
    pub fn clauses_in(&self, area: NodeId) -> Vec<NodeId> {
        self.children(area).filter(|&c| self.is_clause(c)).collect()
    }

    /// Every live area in breadth-first (outermost first) order.
    pub fn areas(&self) -> Vec<NodeId> {
        if self.bottom {
            return vec![SHEET];
        }
        let mut out = vec![SHEET];
        let mut i = 0;
        while i < out.len() {
            let a = out[i];
            for c in self.children(a) {
                if self.is_area(c) {
                    out.push(c);
                }
            }
            i += 1;
        }
        out
    }

    /// Every live clause view, ascending id.
    pub fn all_clauses(&self) -> Vec<NodeId> {
        (0..self.slots.len() as NodeId)
            .filter(|&i| self.is_clause(i))
            .collect()
    }

    /// Live atoms of `var`.
    pub fn atoms_of(&self, var: VarId) -> Vec<NodeId> {
        self.atoms_by_var
            .get(var.index())
            .map(|v| {
                v.iter()
                    .copied()
                    .filter(|&a| self.alive(a) && self.kind(a) == Kind::Atom(var))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Live clause views containing `var`, ascending id.
    pub fn clauses_with_var(&self, var: VarId) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self
            .atoms_of(var)
            .into_iter()
            .filter_map(|a| self.clause_of_atom(a))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Binary clauses read directly in `area`.
    pub fn binaries_in(&self, area: NodeId) -> Vec<NodeId> {
        self.binaries
            .get(&area)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default()
    }

    pub fn all_binaries(&self) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = self.binaries.values().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    /// Incremented whenever the set of binary clauses (or one of their
    /// literals) changes.
    pub fn bin_revision(&self) -> u64 {
        self.bin_revision
    }

    /// Union of the binary implication graphs of every area from the sheet
    /// to `area`; layer `k` is the `k`-th area on that path.
    pub fn scope_big(&self, area: NodeId) -> Big {
        let mut g = Big::new();
        for (layer, a) in self.area_path(area).into_iter().enumerate() {
            for id in self.binaries_in(a) {
                let lits = self.clause_literals(id);
                if let [x, y] = lits[..] {
                    g.add_clause_layered(x, y, id, layer as u32);
                }
            }
        }
        g
    }

    /// Binary implication graph over every binary clause of the formula.
    pub fn global_big(&self) -> Big {
        let mut g = Big::new();
        for id in self.all_binaries() {
            let lits = self.clause_literals(id);
            if let [x, y] = lits[..] {
                g.add_clause(x, y, id);
            }
        }
        g
    }

    // ---- event queues ----

    /// Clause views created or modified since the last call.
    pub fn take_dirty(&mut self) -> Vec<NodeId> {
        let d = std::mem::take(&mut self.dirty);
        for &n in &d {
            self.slots[n as usize].dirty = false;
        }
        d
    }

    pub fn take_lift_candidates(&mut self) -> Vec<NodeId> {
        std::mem::take(&mut self.lift_candidates)
    }

    /// Clause views that died since the last call.
    pub fn take_deleted(&mut self) -> Vec<NodeId> {
        std::mem::take(&mut self.deleted)
    }

    /// Binary clauses that appeared (or changed) since the last call.
    pub fn take_new_binaries(&mut self) -> Vec<NodeId> {
        std::mem::take(&mut self.new_binaries)
    }

    fn mark_dirty(&mut self, id: NodeId) {
        let s = &mut self.slots[id as usize];
        if !s.dirty {
            s.dirty = true;
            self.dirty.push(id);
        }
    }

    // ---- classification maintenance ----

    fn update_cv(&mut self, id: NodeId) {
        let alive = self.alive(id);
        let parent = self.slots[id as usize].parent;
        let now = alive
            && parent != NONE
            && self.slots[parent as usize].structural
            && match self.kind(id) {
                Kind::Atom(_) => true,
                Kind::Cut => self.is_clause_shaped(id),
                Kind::Sheet => false,
            };
        let size = if now {
            match self.kind(id) {
                Kind::Atom(_) => 1,
                _ => self.live_count(id) as u32,
            }
        } else {
            0
        };
        let s = &self.slots[id as usize];
        let (was, was_size, was_bin_area) = (s.cv, s.cv_size, s.bin_area);
        if was {
            self.clauses -= 1;
            if was_size == 1 {
                self.singletons -= 1;
            }
        }
        if now {
            self.clauses += 1;
            if size == 1 {
                self.singletons += 1;
            }
        }
        let s = &mut self.slots[id as usize];
        s.cv = now;
        s.cv_size = size;
        if was_bin_area != NONE {
            if let Some(set) = self.binaries.get_mut(&was_bin_area) {
                set.remove(&id);
            }
            self.slots[id as usize].bin_area = NONE;
            self.bin_revision += 1;
        }
        if now && size == 2 {
            self.binaries.entry(parent).or_default().insert(id);
            self.slots[id as usize].bin_area = parent;
            self.bin_revision += 1;
            // a new binary can complete an xor-shaped cut
            if self.kind(parent) == Kind::Cut {
                self.lift_candidates.push(parent);
            }
            self.new_binaries.push(id);
        }
        if now {
            self.mark_dirty(id);
        } else if was && !alive {
            self.deleted.push(id);
        }
    }

    fn update_shape(&mut self, id: NodeId) {
        if !self.alive(id) {
            return;
        }
        let now = self.compute_structural(id);
        if now != self.slots[id as usize].structural {
            self.slots[id as usize].structural = now;
            let kids: Vec<NodeId> = self.children(id).collect();
            for k in kids {
                self.update_cv(k);
            }
        }
    }

    /// Reclassifies after the children of `id` changed.
    fn touched(&mut self, id: NodeId) {
        if !self.alive(id) {
            return;
        }
        self.compact(id);
        self.update_shape(id);
        self.update_cv(id);
        if self.kind(id) == Kind::Cut && self.slots[id as usize].structural {
            self.lift_candidates.push(id);
        }
        if let Some(p) = self.parent(id) {
            self.update_shape(p);
            self.update_cv(p);
        }
    }

    fn compact(&mut self, id: NodeId) {
        let live = self.slots[id as usize].live as usize;
        if self.slots[id as usize].children.len() > 2 * live + 8 {
            let kids: Vec<NodeId> = self.children(id).collect();
            self.slots[id as usize].children = kids;
        }
    }

    // ---- mutation primitives ----

    /// Marks a single node dead without touching its children.
    fn retire(&mut self, id: NodeId) {
        let s = &mut self.slots[id as usize];
        if !s.alive {
            return;
        }
        s.alive = false;
        if let Kind::Atom(v) = s.kind {
            self.count_atom(v, false);
        }
        self.update_cv(id);
        let parent = self.slots[id as usize].parent;
        if parent != NONE {
            self.slots[parent as usize].live -= 1;
        }
    }

    /// Removes the subtree at `id`. The parent is not settled.
    fn kill(&mut self, id: NodeId) {
        if !self.alive(id) {
            return;
        }
        let mut stack: Vec<NodeId> = self.children(id).collect();
        self.retire(id);
        while let Some(n) = stack.pop() {
            stack.extend(self.children(n));
            self.retire(n);
        }
    }

    /// Removes the subtree at `id` leaving its parent unsettled; the caller
    /// must [`settle`](Self::settle) the parent afterwards.
    pub fn detach(&mut self, id: NodeId) {
        self.kill(id);
    }

    /// Removes `id` and restores canonical shape around it.
    pub fn delete(&mut self, id: NodeId) {
        if self.bottom || !self.alive(id) {
            return;
        }
        let p = self.parent(id).expect("cannot delete the sheet");
        self.kill(id);
        self.settle(p);
    }

    /// Replaces `id` by `false` (an empty cut) in its area.
    pub fn falsify(&mut self, id: NodeId) {
        if self.bottom || !self.alive(id) {
            return;
        }
        let p = self.parent(id).expect("cannot falsify the sheet");
        self.kill(id);
        self.area_false(p);
    }

    /// The area `area` has become `false`.
    pub fn area_false(&mut self, area: NodeId) {
        if self.bottom || !self.alive(area) {
            return;
        }
        match self.kind(area) {
            Kind::Sheet => self.make_bottom(),
            _ => {
                // not(... and false) is true: the bounding cut disappears
                let p = self.parent(area).expect("cut has a parent");
                self.kill(area);
                self.settle(p);
            }
        }
    }

    fn make_bottom(&mut self) {
        let kids: Vec<NodeId> = self.children(SHEET).collect();
        for k in kids {
            self.kill(k);
        }
        self.bottom = true;
        self.touched(SHEET);
    }

    /// Restores canonical shape of area `id` after its children changed:
    /// empty cuts make their area false, double cuts are spliced.
    pub fn settle(&mut self, id: NodeId) {
        let mut n = id;
        loop {
            if self.bottom || !self.alive(n) {
                return;
            }
            if self.kind(n) == Kind::Cut {
                if self.live_count(n) == 0 {
                    let p = self.parent(n).expect("cut has a parent");
                    self.kill(n);
                    if self.kind(p) == Kind::Sheet {
                        self.make_bottom();
                        return;
                    }
                    // p holds false: p itself is true and leaves its area
                    let gp = self.parent(p).expect("cut has a parent");
                    self.kill(p);
                    n = gp;
                    continue;
                }
                if let Some(m) = self.only_child(n) {
                    if self.kind(m) == Kind::Cut {
                        let p = self.parent(n).expect("cut has a parent");
                        if self.live_count(m) == 0 {
                            // Cut{Cut{}} is true
                            self.kill(n);
                        } else {
                            self.splice(n, m, p);
                        }
                        n = p;
                        continue;
                    }
                }
            }
            self.touched(n);
            return;
        }
    }

    /// Moves the children of `inner` (the only child of `outer`) into `p`.
    fn splice(&mut self, outer: NodeId, inner: NodeId, p: NodeId) {
        let moved: Vec<NodeId> = self.children(inner).collect();
        self.retire(outer);
        self.slots[inner as usize].live = 0;
        self.retire(inner);
        for &k in &moved {
            self.slots[k as usize].parent = p;
            let ps = &mut self.slots[p as usize];
            ps.children.push(k);
            ps.live += 1;
        }
        self.update_shape(p);
        for &k in &moved {
            self.update_cv(k);
        }
        if self.is_clause_shaped(p) {
            self.normalize_occurrences(p);
        }
    }

    /// Inside `area`, merges duplicate literal occurrences and turns the
    /// area `false` when an occurrence and its complement meet.
    pub fn normalize_occurrences(&mut self, area: NodeId) {
        if self.bottom || !self.alive(area) {
            return;
        }
        let mut seen: HashMap<Literal, NodeId> = HashMap::new();
        let mut dups = Vec::new();
        let kids: Vec<NodeId> = self.children(area).collect();
        for k in kids {
            let Some(l) = self.occurrence_literal(k) else {
                continue;
            };
            if seen.contains_key(&!l) {
                self.area_false(area);
                return;
            }
            if seen.insert(l, k).is_some() {
                dups.push(k);
            }
        }
        if dups.is_empty() {
            return;
        }
        for d in dups {
            self.kill(d);
        }
        self.settle(area);
    }

    /// Appends the occurrence of `lit` to `area`.
    pub fn add_occurrence(&mut self, area: NodeId, lit: Literal) -> NodeId {
        let id = if lit.is_positive() {
            self.alloc(Kind::Atom(lit.var()), area)
        } else {
            let c = self.alloc(Kind::Cut, area);
            self.alloc(Kind::Atom(lit.var()), c);
            self.slots[c as usize].structural = false;
            c
        };
        self.update_cv(id);
        self.touched(area);
        id
    }

    /// Appends a clause with the given literals to `area` and returns the
    /// clause view id.
    pub fn add_clause(&mut self, area: NodeId, lits: &[Literal]) -> NodeId {
        if lits.len() == 1 {
            return self.add_occurrence(area, lits[0]);
        }
        let c = self.alloc(Kind::Cut, area);
        for &l in lits {
            let l = !l;
            if l.is_positive() {
                self.alloc(Kind::Atom(l.var()), c);
            } else {
                let inner = self.alloc(Kind::Cut, c);
                self.alloc(Kind::Atom(l.var()), inner);
                self.slots[inner as usize].structural = false;
            }
        }
        self.slots[c as usize].structural = self.compute_structural(c);
        self.update_cv(c);
        self.touched(area);
        self.normalize_occurrences(c);
        c
    }

    /// Drops the occurrence of `lit` from clause view `clause`.
    pub fn remove_literal(&mut self, clause: NodeId, lit: Literal) {
        if self.bottom || !self.is_clause(clause) {
            return;
        }
        if let Kind::Atom(_) = self.kind(clause) {
            // the unit loses its only literal
            self.falsify(clause);
            return;
        }
        let occ = self
            .children(clause)
            .find(|&c| self.occurrence_literal(c) == Some(!lit));
        if let Some(occ) = occ {
            self.kill(occ);
            self.settle(clause);
        }
    }

    /// Rewrites atom `a` to denote `lit` instead of its variable and returns
    /// the atom now carrying `lit`'s variable.
    pub fn substitute_atom(&mut self, a: NodeId, lit: Literal) -> NodeId {
        let Kind::Atom(old) = self.kind(a) else {
            panic!("substitute_atom on a non-atom")
        };
        self.count_atom(old, false);
        let v = lit.var();
        if lit.is_positive() {
            self.slots[a as usize].kind = Kind::Atom(v);
            self.count_atom(v, true);
            self.atoms_by_var[v.index()].push(a);
            self.update_cv(a);
            if let Some(p) = self.parent(a) {
                self.touched(p);
            }
            a
        } else {
            let s = &mut self.slots[a as usize];
            s.kind = Kind::Cut;
            s.structural = false;
            let atom = self.alloc(Kind::Atom(v), a);
            self.update_cv(a);
            if let Some(p) = self.parent(a) {
                self.settle(p);
            }
            atom
        }
    }

    /// Resolves a path of child indices (in live-children order) to an area.
    pub fn resolve_path(&self, path: &ScopePath) -> Option<NodeId> {
        let mut cur = SHEET;
        for &i in &path.0 {
            cur = self.children(cur).nth(i)?;
        }
        self.is_area(cur).then_some(cur)
    }

    /// Parent of the literal occurrence containing atom `a`.
    pub fn occurrence_container(&self, a: NodeId) -> Option<NodeId> {
        let p = self.parent(a)?;
        if self.kind(p) == Kind::Cut && self.live_count(p) == 1 {
            self.parent(p)
        } else {
            Some(p)
        }
    }

    /// Debug check of all cached classification and counters.
    pub fn check_consistency(&self) -> Result<(), String> {
        if self.bottom {
            return Ok(());
        }
        let mut c = 0;
        let mut s = 0;
        let mut l = 0;
        let mut vars = std::collections::HashSet::new();
        for id in 0..self.slots.len() as NodeId {
            if !self.alive(id) {
                continue;
            }
            let slot = &self.slots[id as usize];
            if slot.structural != self.compute_structural(id) {
                return Err(format!("node {id}: stale structural flag"));
            }
            if slot.cv {
                c += 1;
                if slot.cv_size == 1 {
                    s += 1;
                }
            }
            if let Kind::Atom(v) = slot.kind {
                l += 1;
                vars.insert(v);
            }
            if slot.kind == Kind::Cut && slot.live == 0 {
                return Err(format!("node {id}: empty cut"));
            }
            if let Some(m) = self.only_child(id) {
                if slot.kind == Kind::Cut && self.kind(m) == Kind::Cut {
                    return Err(format!("node {id}: double cut"));
                }
            }
            if self.children(id).count() != slot.live as usize {
                return Err(format!("node {id}: live count mismatch"));
            }
        }
        if (c, s, l, vars.len()) != (self.clauses, self.singletons, self.literals, self.variables) {
            return Err(format!(
                "counters ({}, {}, {}, {}) vs recount ({c}, {s}, {l}, {})",
                self.clauses,
                self.singletons,
                self.literals,
                self.variables,
                vars.len()
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eg::{clause_views, compute_stats};
    use crate::parse::parse_pl;

    fn work(s: &str) -> Work {
        Work::from_formula(&parse_pl(s).unwrap())
    }

    #[test]
    fn ids_match_clause_views() {
        let f = parse_pl("P & (A | ~B) & ~(X & (Y | Z))").unwrap();
        let w = Work::from_formula(&f);
        let ids: Vec<u32> = clause_views(&f).iter().map(|c| c.id).collect();
        assert_eq!(w.all_clauses(), ids);
        for cv in clause_views(&f) {
            assert_eq!(w.clause_literals(cv.id), cv.literals);
        }
        w.check_consistency().unwrap();
    }

    #[test]
    fn counters_match_stats() {
        let f = parse_pl("P & ~T & ((A&B&D) | (Q&R) | (X&(~Y|~Z)))").unwrap();
        let w = Work::from_formula(&f);
        let st = compute_stats(&f);
        let c = w.counters();
        assert_eq!(
            (c.variables, c.clauses, c.literals),
            (st.variables, st.clauses, st.literals)
        );
        assert_eq!(w.singletons(), st.singletons);
    }

    #[test]
    fn deleting_last_clause_of_cut_makes_area_false() {
        // ~(A | B) & C : deleting the clause inside leaves Cut{} -> false
        let mut w = work("C & ~((A|B) & D)");
        let inner: Vec<NodeId> = w
            .all_clauses()
            .into_iter()
            .filter(|&c| w.clause_size(c) == 2)
            .collect();
        w.delete(inner[0]);
        w.check_consistency().unwrap();
        assert!(w.to_formula().equal_canonical(
            &parse_pl("C & ~D")
                .unwrap()
                .remap_into(&mut w.names().clone())
        ));
    }

    #[test]
    fn falsify_inside_cut_drops_the_cut() {
        let mut w = work("C & ~(A & B)");
        let a = w.atoms_of(VarId(1))[0];
        w.falsify(a);
        w.check_consistency().unwrap();
        assert_eq!(w.to_formula().root(), &[Node::Atom(VarId(0))]);
    }

    #[test]
    fn falsify_on_sheet_is_bottom() {
        let mut w = work("C & D");
        let d = w.atoms_of(VarId(1))[0];
        w.falsify(d);
        assert!(w.is_bottom());
        assert!(w.to_formula().is_bottom());
    }

    #[test]
    fn erasing_exposes_double_cut() {
        // ~(a & ~(b & c & d)) with a erased is b & c & d
        let mut w = work("~(a & ~(b & c & d))");
        let a = w.atoms_of(VarId(0))[0];
        w.delete(a);
        w.check_consistency().unwrap();
        assert_eq!(w.counters().clauses, 3);
        assert_eq!(w.singletons(), 3);
    }

    #[test]
    fn remove_literal_to_unit_and_empty() {
        let mut w = work("(A | B) & C");
        let c = w.all_clauses()[0];
        w.remove_literal(c, Literal::pos(VarId(0)));
        w.check_consistency().unwrap();
        let f = w.to_formula();
        assert!(f.equal_canonical(
            &parse_pl("B & C")
                .unwrap()
                .remap_into(&mut w.names().clone())
        ));
        let b = w.clauses_with_var(VarId(1))[0];
        w.remove_literal(b, Literal::pos(VarId(1)));
        assert!(w.is_bottom());
    }

    #[test]
    fn substitution_and_normalization() {
        // (A | ~B) with B := A becomes a tautology and vanishes
        let mut w = work("(A | ~B) & C");
        let b = w.atoms_of(VarId(1))[0];
        w.substitute_atom(b, Literal::pos(VarId(0)));
        let clause = w.clause_of_atom(b).unwrap();
        w.normalize_occurrences(clause);
        w.check_consistency().unwrap();
        assert_eq!(w.to_formula().root(), &[Node::Atom(VarId(2))]);
    }

    #[test]
    fn negative_substitution() {
        // (A | B) with B := ~A
        let mut w = work("(A | B) & C");
        let b = w.atoms_of(VarId(1))[0];
        w.substitute_atom(b, Literal::neg(VarId(0)));
        w.check_consistency().unwrap();
        assert_eq!(w.to_formula().root(), &[Node::Atom(VarId(2))]);
    }

    #[test]
    fn scope_big_is_union_of_path() {
        let w = work("(~A | B) & ~((~B | C) & X) & ~((~C | D) & Y)");
        let areas = w.areas();
        assert_eq!(areas.len(), 3);
        let g1 = w.scope_big(areas[1]);
        let g2 = w.scope_big(areas[2]);
        assert_eq!(g1.clause_count(), 2);
        assert_eq!(g2.clause_count(), 2);
        assert_eq!(w.scope_big(SHEET).clause_count(), 1);
    }

    #[test]
    fn add_clause_and_occurrence() {
        let mut w = work("X");
        let id = w.add_clause(SHEET, &[Literal::pos(VarId(0)), Literal::neg(VarId(0))]);
        // a tautology normalizes away
        assert!(!w.alive(id));
        w.add_occurrence(SHEET, Literal::neg(VarId(0)));
        w.check_consistency().unwrap();
        assert_eq!(w.counters().clauses, 2);
    }
}
