use std::collections::BTreeMap;

use egsimp::big::Big;
use egsimp::eg::{
    canonicalize_area, clause_views, compute_stats, Formula, Literal, Names, Node, VarId,
};
use egsimp::engine::{simplify, EngineConfig};
use egsimp::oracle::{equiv_check, evaluate, Assignment};
use egsimp::parse::{parse_dimacs, parse_pl};
use egsimp::render::{render_pl, to_cnf, DEFAULT_CNF_CAP};
use egsimp::rules::{
    apply_epr, apply_osir, apply_swr_everywhere, apply_trr, apply_xor_lift, EquivClasses,
};
use proptest::prelude::*;

const VARS: u32 = 8;

fn names() -> Names {
    let mut n = Names::new();
    for i in 0..VARS {
        n.intern(&format!("v{i}"));
    }
    n
}

fn node() -> impl Strategy<Value = Node> {
    let leaf = (0..VARS).prop_map(|v| Node::Atom(VarId(v)));
    leaf.prop_recursive(4, 40, 4, |inner| {
        prop::collection::vec(inner, 0..4).prop_map(Node::Cut)
    })
}

fn raw_area() -> impl Strategy<Value = Vec<Node>> {
    prop::collection::vec(node(), 0..5)
}

fn formula() -> impl Strategy<Value = Formula> {
    raw_area().prop_map(|a| Formula::new(a, names()))
}

fn cnf() -> impl Strategy<Value = Formula> {
    // one polarity per variable inside a clause
    let clause = prop::collection::btree_map(0..VARS, any::<bool>(), 1..5).prop_map(|m| {
        m.into_iter()
            .map(|(v, p)| Literal::new(VarId(v), p))
            .collect::<Vec<_>>()
    });
    prop::collection::vec(clause, 0..14)
        .prop_map(|cs| Formula::new(cs.iter().map(|c| Node::clause(c)).collect(), names()))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn checked() -> EngineConfig {
    EngineConfig {
        oracle_check_every_step: true,
        ..EngineConfig::default()
    }
}

fn equivalent(a: &Formula, b: &Formula) -> bool {
    equiv_check(a, b, &EquivClasses::new()).unwrap()
}

// Direct interpreter over rendered text; shares nothing with the library.
struct TextEval<'a> {
    s: &'a [u8],
    i: usize,
    env: &'a BTreeMap<String, bool>,
}

impl TextEval<'_> {
    fn disj(&mut self) -> bool {
        let mut v = self.conj();
        while self.s.get(self.i) == Some(&b'|') {
            self.i += 1;
            v |= self.conj();
        }
        v
    }

    fn conj(&mut self) -> bool {
        let mut v = self.unary();
        while self.s.get(self.i) == Some(&b'&') {
            self.i += 1;
            v &= self.unary();
        }
        v
    }

    fn unary(&mut self) -> bool {
        match self.s[self.i] {
            b'~' => {
                self.i += 1;
                !self.unary()
            }
            b'(' => {
                self.i += 1;
                let v = self.disj();
                assert_eq!(self.s[self.i], b')');
                self.i += 1;
                v
            }
            _ => {
                let start = self.i;
                while self.i < self.s.len()
                    && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_')
                {
                    self.i += 1;
                }
                let word = std::str::from_utf8(&self.s[start..self.i]).unwrap();
                match word {
                    "true" => true,
                    "false" => false,
                    w => self.env[w],
                }
            }
        }
    }
}

fn eval_text(text: &str, env: &BTreeMap<String, bool>) -> bool {
    let mut e = TextEval {
        s: text.as_bytes(),
        i: 0,
        env,
    };
    let v = e.disj();
    assert_eq!(e.i, text.len(), "trailing input in {text}");
    v
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn evaluators_agree(f in formula(), bits in any::<u32>()) {
        let text = render_pl(&f);
        let mut a = Assignment::new();
        let mut env = BTreeMap::new();
        for v in 0..VARS {
            let b = bits >> v & 1 == 1;
            a.insert(VarId(v), b);
            env.insert(format!("v{v}"), b);
        }
        prop_assert_eq!(evaluate(&f, &a).unwrap(), eval_text(&text, &env));
    }
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn canonical_form_keeps_semantics(a in raw_area()) {
        let raw = Formula::from_raw(a.clone(), names());
        let canon = Formula::from_raw(canonicalize_area(a), names());
        prop_assert!(canon.is_canonical());
        prop_assert!(equivalent(&raw, &canon));
    }

    #[test]
    fn stats_ignore_area_order(a in raw_area()) {
        let f = Formula::new(a.clone(), names());
        let mut r = a;
        r.reverse();
        let g = Formula::new(r, names());
        prop_assert!(f.equal_canonical(&g));
        prop_assert_eq!(compute_stats(&f), compute_stats(&g));
    }

    #[test]
    fn pl_round_trip(f in formula()) {
        let text = render_pl(&f);
        let mut n = f.names().clone();
        let back = parse_pl(&text).unwrap().remap_into(&mut n);
        prop_assert!(back.equal_canonical(&f), "{}", text);
    }

    #[test]
    fn cnf_conversion_keeps_semantics(f in formula()) {
        let c = to_cnf(&f, DEFAULT_CNF_CAP).unwrap();
        prop_assert!(equivalent(&f, &c.to_formula()));
        prop_assert!(c.clauses.iter().all(|cl| cl.windows(2).all(|w| w[0].var() != w[1].var())));
    }

    #[test]
    fn dimacs_round_trip(f in cnf()) {
        let text = to_cnf(&f, DEFAULT_CNF_CAP).unwrap().to_dimacs();
        let back = parse_dimacs(&text).unwrap();
        prop_assert!(back.equal_canonical(&f), "{}", text);
    }

    #[test]
    fn equivalence_is_reflexive_and_symmetric(f in formula(), g in formula()) {
        prop_assert!(equivalent(&f, &f));
        prop_assert_eq!(equivalent(&f, &g), equivalent(&g, &f));
    }

    #[test]
    fn single_rules_keep_semantics(f in formula()) {
        let mut areas: Vec<_> = clause_views(&f).into_iter().map(|cv| cv.area).collect();
        areas.dedup();
        for path in &areas {
            let (g, out) = apply_epr(&f, path).unwrap();
            prop_assert!(equiv_check(&f, &g, &out.classes).unwrap());
            let (g, _) = apply_osir(&f, path).unwrap();
            prop_assert!(equivalent(&f, &g));
        }
        let (g, _) = apply_swr_everywhere(&f);
        prop_assert!(equivalent(&f, &g));
        let (g, _) = apply_xor_lift(&f);
        prop_assert!(equivalent(&f, &g));
        // TRR needs an acyclic graph; EPR at the root is its precondition
        if let Ok((g, _)) = apply_trr(&f) {
            prop_assert!(equivalent(&f, &g));
        }
    }

    #[test]
    fn simplify_is_sound_and_shrinking(f in formula()) {
        let r = simplify(&f, &checked()).unwrap();
        prop_assert!(equiv_check(&f, &r.formula, &r.classes).unwrap());
        let mut prev = r.initial;
        for st in &r.trace.steps {
            prop_assert!(st.stats.variables <= prev.variables);
            prop_assert!(st.stats.literals <= prev.literals);
            prev = st.stats;
        }
        prop_assert!(r.trace.len() <= r.initial.clauses + r.initial.literals);
        let before = compute_stats(&f);
        prop_assert!(r.stats.literals <= before.literals);
        prop_assert!(r.stats.variables <= before.variables);
    }

    #[test]
    fn simplify_is_idempotent_and_deterministic(f in cnf()) {
        let a = simplify(&f, &checked()).unwrap();
        let b = simplify(&f, &checked()).unwrap();
        prop_assert_eq!(a.trace.to_json_lines(), b.trace.to_json_lines());
        let again = simplify(&a.formula, &checked()).unwrap();
        prop_assert!(again.formula.equal_canonical(&a.formula));
    }

    #[test]
    fn relaxed_matching_is_sound(f in cnf()) {
        let cfg = EngineConfig { injective_twsr: false, ..checked() };
        let r = simplify(&f, &cfg).unwrap();
        prop_assert!(equiv_check(&f, &r.formula, &r.classes).unwrap());
    }

    #[test]
    fn graph_stays_skew_symmetric(ops in prop::collection::vec((0..2 * VARS, 0..2 * VARS, any::<bool>()), 1..40)) {
        let mut g = Big::new();
        for (id, (a, b, add)) in ops.into_iter().enumerate() {
            let (a, b) = (Literal::from_code(a), Literal::from_code(b));
            if add {
                g.add_clause(a, b, id as u32);
            } else {
                let old = g.clause_ids().next();
                if let Some(old) = old {
                    g.remove_clause(old);
                }
            }
            prop_assert!(g.is_skew_symmetric());
        }
    }
}
