//! Worklist-driven simplification to a fixpoint.
//!
//! Clauses are taken smallest first, then outermost first, then oldest
//! first. A dequeued binary triggers EPR on its area when that area's
//! binary clauses changed since the last EPR there. The clause is then used
//! as a TWSR premise against candidates in its area subtree, and as a TWSR
//! target against candidates in its own and enclosing areas.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::rc::Rc;

use serde::Serialize;

use crate::big::Big;
use crate::eg::{compute_stats, Formula, Literal, Stats, VarId};
use crate::error::{Error, Result};
use crate::oracle;
use crate::rules::{self, EquivClasses, RuleOutcome};
use crate::work::{Counters, NodeId, Work};

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub max_steps: Option<usize>,
    pub injective_twsr: bool,
    pub oracle_check_every_step: bool,
    pub cnf_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_steps: None,
            injective_twsr: true,
            oracle_check_every_step: false,
            cnf_cap: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Removed {
    pub clauses: Vec<NodeId>,
    pub literals: Vec<(NodeId, String)>,
}

/// One productive rule application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: &'static str,
    /// Areas from the sheet to the one the rule acted in.
    pub path: Vec<NodeId>,
    pub acted: Vec<NodeId>,
    pub removed: Removed,
    pub added: Vec<(NodeId, String)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<String>,
    pub stats: Counters,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        let mut s = String::new();
        for step in &self.steps {
            s.push_str(&serde_json::to_string(step).expect("trace serializes"));
            s.push('\n');
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct Simplified {
    pub formula: Formula,
    pub classes: EquivClasses,
    pub trace: ReductionTrace,
    pub stats: Stats,
    /// Counters of the input, in the trace's units.
    pub initial: Counters,
    /// The step limit stopped the run before a fixpoint.
    pub step_limit_hit: bool,
}

/// Read-only variable to clause lookup over a working formula.
pub struct OccurrenceIndex<'a> {
    work: &'a Work,
}

impl<'a> OccurrenceIndex<'a> {
    pub fn new(work: &'a Work) -> Self {
        OccurrenceIndex { work }
    }

    pub fn clauses_with(&self, var: VarId) -> Vec<NodeId> {
        self.work.clauses_with_var(var)
    }

    fn clauses_with_any(&self, vars: &BTreeSet<VarId>) -> BTreeSet<NodeId> {
        vars.iter().flat_map(|&v| self.clauses_with(v)).collect()
    }
}

fn reach_vars(lits: &[Literal], g: &Big, both_polarities: bool) -> BTreeSet<VarId> {
    let mut vars: BTreeSet<VarId> = lits.iter().map(|l| l.var()).collect();
    for &p in lits {
        vars.extend(g.descendants(p).iter().map(|l| l.var()));
        if both_polarities {
            vars.extend(g.descendants(!p).iter().map(|l| l.var()));
        }
    }
    vars
}

/// Possible TWSR targets of premise `c`: clauses of at least its size in
/// its area subtree that share a variable with it or contain a variable
/// reachable in `g` from one of its literals.
pub fn candidate_clauses(idx: &OccurrenceIndex, c: NodeId, g: &Big) -> BTreeSet<NodeId> {
    let w = idx.work;
    let lits = w.clause_literals(c);
    let area = w.parent(c).expect("clause has an area");
    let size = w.clause_size(c);
    idx.clauses_with_any(&reach_vars(&lits, g, false))
        .into_iter()
        .filter(|&d| d != c && w.clause_size(d) >= size && w.within(d, area))
        .collect()
}

/// Possible TWSR premises for target `d`: clauses no larger than it in its
/// own or an enclosing area.
fn candidate_premises(idx: &OccurrenceIndex, d: NodeId, g: &Big) -> BTreeSet<NodeId> {
    let w = idx.work;
    let lits = w.clause_literals(d);
    let size = w.clause_size(d);
    idx.clauses_with_any(&reach_vars(&lits, g, true))
        .into_iter()
        .filter(|&e| {
            e != d
                && w.clause_size(e) <= size
                && w.within(d, w.parent(e).expect("clause has an area"))
        })
        .collect()
}

type Key = Reverse<(u32, u32, u64, NodeId)>;

struct Engine<'a> {
    w: Work,
    cfg: &'a EngineConfig,
    input: &'a Formula,
    oracle_ok: bool,
    heap: BinaryHeap<Key>,
    queued: HashMap<NodeId, u64>,
    seq: u64,
    epr_done: HashMap<NodeId, u64>,
    global: Option<(u64, Rc<Big>)>,
    scopes: HashMap<NodeId, (u64, Rc<Big>)>,
    classes: EquivClasses,
    trace: ReductionTrace,
    limit_hit: bool,
}

impl<'a> Engine<'a> {
    fn new(f: &'a Formula, cfg: &'a EngineConfig) -> Self {
        let oracle_ok = cfg.oracle_check_every_step && f.vars().len() <= oracle::MAX_ORACLE_VARS;
        Engine {
            w: Work::from_formula(f),
            cfg,
            input: f,
            oracle_ok,
            heap: BinaryHeap::new(),
            queued: HashMap::new(),
            seq: 0,
            epr_done: HashMap::new(),
            global: None,
            scopes: HashMap::new(),
            classes: EquivClasses::new(),
            trace: ReductionTrace::default(),
            limit_hit: false,
        }
    }

    fn push(&mut self, c: NodeId) {
        if !self.w.is_clause(c) {
            return;
        }
        self.seq += 1;
        let area = self.w.parent(c).expect("clause has an area");
        let key = (
            self.w.clause_size(c) as u32,
            self.w.area_depth(area) as u32,
            self.seq,
            c,
        );
        self.queued.insert(c, self.seq);
        self.heap.push(Reverse(key));
    }

    fn pop(&mut self) -> Option<NodeId> {
        while let Some(Reverse((_, _, seq, c))) = self.heap.pop() {
            if self.queued.get(&c) == Some(&seq) {
                self.queued.remove(&c);
                if self.w.is_clause(c) {
                    return Some(c);
                }
            }
        }
        None
    }

    fn global(&mut self) -> Rc<Big> {
        let rev = self.w.bin_revision();
        match &self.global {
            Some((r, g)) if *r == rev => g.clone(),
            _ => {
                let g = Rc::new(self.w.global_big());
                self.global = Some((rev, g.clone()));
                g
            }
        }
    }

    fn scope(&mut self, area: NodeId) -> Rc<Big> {
        let rev = self.w.bin_revision();
        if let Some((r, g)) = self.scopes.get(&area) {
            if *r == rev {
                return g.clone();
            }
        }
        if self.scopes.len() > 4096 {
            self.scopes.clear();
        }
        let g = Rc::new(self.w.scope_big(area));
        self.scopes.insert(area, (rev, g.clone()));
        g
    }

    fn out_of_steps(&mut self) -> bool {
        if let Some(max) = self.cfg.max_steps {
            if self.trace.len() >= max {
                self.limit_hit = true;
            }
        }
        self.limit_hit
    }

    fn record(
        &mut self,
        rule: &'static str,
        area: NodeId,
        acted: Vec<NodeId>,
        out: RuleOutcome,
    ) -> Result<()> {
        let names = self.w.names();
        let step = TraceStep {
            rule,
            path: if self.w.alive(area) {
                self.w.area_path(area)
            } else {
                Vec::new()
            },
            acted,
            removed: Removed {
                clauses: out.deleted_clauses,
                literals: out
                    .removed_literals
                    .iter()
                    .map(|&(c, l)| (c, names.literal_name(l)))
                    .collect(),
            },
            added: out
                .added_singletons
                .iter()
                .map(|&(a, l)| (a, names.literal_name(l)))
                .collect(),
            classes: out.classes.render(names),
            stats: self.w.counters(),
        };
        self.classes.merge(&out.classes);
        self.trace.steps.push(step);
        if self.oracle_ok {
            if let Err(msg) = self.w.check_consistency() {
                panic!("arena inconsistent after step {}: {msg}", self.trace.len());
            }
            let now = self.w.to_formula();
            if !oracle::equiv_check(self.input, &now, &self.classes)? {
                return Err(Error::OracleMismatch {
                    step: self.trace.len(),
                });
            }
        }
        Ok(())
    }

    /// Moves pending work from the arena's event queues into the heap.
    fn sync(&mut self) -> Result<()> {
        loop {
            let mut lifted = false;
            for cut in self.w.take_lift_candidates() {
                if self.w.is_bottom() || self.out_of_steps() {
                    break;
                }
                let parent = self.w.parent(cut);
                let mut out = RuleOutcome::default();
                if rules::lift_at(&mut self.w, cut, &mut out) {
                    lifted = true;
                    self.record("XOR", parent.unwrap_or(0), vec![cut], out)?;
                }
            }
            let fresh = self.w.take_new_binaries();
            if !fresh.is_empty() {
                self.requeue_around(&fresh);
            }
            for c in self.w.take_dirty() {
                self.push(c);
            }
            if !lifted {
                return Ok(());
            }
        }
    }

    /// New implication edges can give older clauses new targets.
    fn requeue_around(&mut self, binaries: &[NodeId]) {
        let g = self.global();
        let mut vars = BTreeSet::new();
        for &b in binaries {
            if !self.w.is_clause(b) {
                continue;
            }
            for l in self.w.clause_literals(b) {
                vars.insert(l.var());
                vars.extend(g.descendants(l).iter().map(|x| x.var()));
            }
        }
        let idx = OccurrenceIndex::new(&self.w);
        let hits = idx.clauses_with_any(&vars);
        for c in hits {
            if !self.queued.contains_key(&c) {
                self.push(c);
            }
        }
    }

    fn run(&mut self) -> Result<()> {
        loop {
            if self.w.is_bottom() {
                return Ok(());
            }
            self.sync()?;
            if self.out_of_steps() {
                return Ok(());
            }
            let Some(c) = self.pop() else { return Ok(()) };
            self.process(c)?;
        }
    }

    fn process(&mut self, c: NodeId) -> Result<()> {
        let area = self.w.parent(c).expect("clause has an area");
        let lits = self.w.clause_literals(c);
        if lits.len() != self.w.clause_size(c) || lits.windows(2).any(|p| p[0] == !p[1]) {
            // x and ~x (or two copies of x) inside one clause cut
            self.w.take_deleted();
            self.w.normalize_occurrences(c);
            let mut out = RuleOutcome {
                changed: true,
                ..RuleOutcome::default()
            };
            out.deleted_clauses = self.w.take_deleted();
            self.record("SWR", area, vec![c], out)?;
            return Ok(());
        }
        if self.w.clause_size(c) == 2 {
            let rev = self.w.bin_revision();
            if self.epr_done.get(&area) != Some(&rev) {
                let mut out = RuleOutcome::default();
                let changed = rules::epr_at(&mut self.w, area, &mut out);
                // substitution can close new cycles; only a quiet pass settles the scope
                if !changed {
                    self.epr_done.insert(area, rev);
                }
                if changed {
                    self.record("EPR", area, vec![c], out)?;
                    // c may be untouched; make sure it is seen again
                    self.push(c);
                    return Ok(());
                }
            }
        }
        if self.w.clause_size(c) == 1 {
            let mut out = RuleOutcome::default();
            if rules::swr_unit(&mut self.w, c, &mut out) {
                self.record("SWR", area, vec![c], out)?;
            }
        }
        self.premise_pass(c)?;
        self.target_pass(c)
    }

    fn premise_pass(&mut self, c: NodeId) -> Result<()> {
        if !self.w.is_clause(c) {
            return Ok(());
        }
        let g = self.global();
        let targets = candidate_clauses(&OccurrenceIndex::new(&self.w), c, &g);
        let size = self.w.clause_size(c);
        for d in targets {
            if self.w.is_bottom() || !self.w.is_clause(c) || self.out_of_steps() {
                break;
            }
            if !self.w.is_clause(d) || self.w.clause_size(d) < size {
                continue;
            }
            let darea = self.w.parent(d).expect("clause has an area");
            let g = self.scope(darea);
            let mut out = RuleOutcome::default();
            if rules::twsr_at(&mut self.w, c, d, &g, self.cfg.injective_twsr, &mut out).is_some() {
                self.record("TWSR", darea, vec![c, d], out)?;
            }
        }
        Ok(())
    }

    fn target_pass(&mut self, d: NodeId) -> Result<()> {
        if !self.w.is_clause(d) {
            return Ok(());
        }
        let g = self.global();
        let premises = candidate_premises(&OccurrenceIndex::new(&self.w), d, &g);
        let darea = self.w.parent(d).expect("clause has an area");
        for e in premises {
            if self.w.is_bottom() || !self.w.is_clause(d) || self.out_of_steps() {
                break;
            }
            if !self.w.is_clause(e) || self.w.clause_size(e) > self.w.clause_size(d) {
                continue;
            }
            let g = self.scope(darea);
            let mut out = RuleOutcome::default();
            if rules::twsr_at(&mut self.w, e, d, &g, self.cfg.injective_twsr, &mut out).is_some() {
                self.record("TWSR", darea, vec![e, d], out)?;
                // a modified target is queued again and handled from scratch
                break;
            }
        }
        Ok(())
    }
}

/// Simplifies `f` to a fixpoint of EPR and TWSR (with SWR for units and
/// the xor lift for biconditional residues).
pub fn simplify(f: &Formula, cfg: &EngineConfig) -> Result<Simplified> {
    let mut e = Engine::new(f, cfg);
    let initial = e.w.counters();
    e.run()?;
    let formula = e.w.to_formula();
    let stats = compute_stats(&formula);
    Ok(Simplified {
        formula,
        classes: e.classes,
        trace: e.trace,
        stats,
        initial,
        step_limit_hit: e.limit_hit,
    })
}
