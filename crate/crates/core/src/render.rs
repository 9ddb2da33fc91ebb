//! Text output: propositional syntax, DIMACS, CNF conversion and DOT.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write;

use crate::big::Big;
use crate::eg::{Formula, Literal, Names, Node, Stats};
use crate::error::{Error, Result};

/// Default ceiling on the number of clauses `to_cnf` may produce.
pub const DEFAULT_CNF_CAP: usize = 1_000_000;

/// Renders with `~`, `&`, `|` and parentheses only.
pub fn render_pl(f: &Formula) -> String {
    if f.is_bottom() {
        return "false".into();
    }
    if f.is_top() {
        return "true".into();
    }
    conj(f.root(), f.names())
}

fn conj(area: &[Node], names: &Names) -> String {
    if area.is_empty() {
        return "true".into();
    }
    area.iter()
        .map(|n| element(n, names))
        .collect::<Vec<_>>()
        .join("&")
}

fn element(n: &Node, names: &Names) -> String {
    match n {
        Node::Atom(v) => names.name(*v).to_string(),
        Node::Cut(ch) if ch.is_empty() => "false".into(),
        Node::Cut(ch) => {
            if let Some(l) = n.as_literal() {
                return names.literal_name(l);
            }
            let parts: Vec<String> = ch.iter().map(|c| negated(c, names)).collect();
            format!("({})", parts.join("|"))
        }
    }
}

fn negated(n: &Node, names: &Names) -> String {
    match n {
        Node::Atom(v) => format!("~{}", names.name(*v)),
        Node::Cut(inner) if inner.len() == 1 => element(&inner[0], names),
        Node::Cut(inner) => format!("({})", conj(inner, names)),
    }
}

/// A flat clause list, possibly with repeated clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub clauses: Vec<Vec<Literal>>,
    pub names: Names,
}

impl Cnf {
    pub fn is_unsat_trivially(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }

    /// Counters of the clause list as written (repeats counted).
    pub fn stats(&self) -> Stats {
        let mut st = Stats {
            clauses: self.clauses.len(),
            literals: self.clauses.iter().map(Vec::len).sum(),
            ..Stats::default()
        };
        let mut vars = HashSet::new();
        let mut bin = HashSet::new();
        let mut long = HashSet::new();
        for c in &self.clauses {
            vars.extend(c.iter().map(|l| l.var()));
            st.max_clause_length = st.max_clause_length.max(c.len());
            match c.len() {
                1 => st.singletons += 1,
                2 => {
                    st.binary_clauses += 1;
                    bin.extend(c.iter().map(|l| l.var()));
                }
                0 => {}
                _ => long.extend(c.iter().map(|l| l.var())),
            }
        }
        st.variables = vars.len();
        st.binary_variables = bin.len();
        st.binary_variables_in_long_clauses = bin.intersection(&long).count();
        st
    }

    pub fn to_formula(&self) -> Formula {
        let root = self
            .clauses
            .iter()
            .map(|c| Node::clause(c))
            .collect::<Vec<_>>();
        if self.is_unsat_trivially() {
            return Formula::bottom(self.names.clone());
        }
        Formula::new(root, self.names.clone())
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = String::new();
        for (v, name) in self.names.iter() {
            if name != format!("x{}", v.index() + 1) {
                let _ = writeln!(s, "c {} {}", v.index() + 1, name);
            }
        }
        let _ = writeln!(s, "p cnf {} {}", self.names.len(), self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(s, "{} ", l.to_dimacs());
            }
            s.push_str("0\n");
        }
        s
    }
}

type Clauses = Vec<BTreeSet<Literal>>;

/// Distributes disjunction over conjunction bottom-up, dropping
/// tautological clauses and repeated literals inside a clause. Repeated
/// clauses are kept.
pub fn to_cnf(f: &Formula, cap: usize) -> Result<Cnf> {
    let clauses = if f.is_bottom() {
        vec![BTreeSet::new()]
    } else {
        area_cnf(f.root(), cap)?
    };
    Ok(Cnf {
        clauses: clauses
            .into_iter()
            .map(|c| c.into_iter().collect())
            .collect(),
        names: f.names().clone(),
    })
}

fn area_cnf(area: &[Node], cap: usize) -> Result<Clauses> {
    let mut out = Vec::new();
    for n in area {
        out.extend(node_cnf(n, cap)?);
        if out.len() > cap {
            return Err(Error::CnfCap { cap });
        }
    }
    Ok(out)
}

fn node_cnf(n: &Node, cap: usize) -> Result<Clauses> {
    match n {
        Node::Atom(v) => Ok(vec![BTreeSet::from([Literal::pos(*v)])]),
        Node::Cut(ch) => {
            // not(a1 & a2 & ...) = ~a1 | ~a2 | ...
            let mut acc: Clauses = vec![BTreeSet::new()];
            for c in ch {
                let part = match c {
                    Node::Atom(v) => vec![BTreeSet::from([Literal::neg(*v)])],
                    Node::Cut(inner) => area_cnf(inner, cap)?,
                };
                acc = disjoin(&acc, &part, cap)?;
            }
            Ok(acc)
        }
    }
}

fn disjoin(a: &Clauses, b: &Clauses, cap: usize) -> Result<Clauses> {
    if a.len().saturating_mul(b.len()) > cap {
        return Err(Error::CnfCap { cap });
    }
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut c = x.clone();
            c.extend(y.iter().copied());
            if !c.iter().any(|l| c.contains(&!*l)) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

pub fn render_dimacs(f: &Formula, cap: usize) -> Result<String> {
    Ok(to_cnf(f, cap)?.to_dimacs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DotTarget {
    Eg,
    Big,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT digraph of the containment tree or of the sheet's implication
/// graph.
pub fn export_dot(f: &Formula, target: DotTarget) -> String {
    match target {
        DotTarget::Eg => eg_dot(f),
        DotTarget::Big => big_dot(f),
    }
}

fn eg_dot(f: &Formula) -> String {
    let mut s = String::from("digraph eg {\n  n0 [label=\"sheet\", shape=box];\n");
    let mut next = 1usize;
    fn walk(n: &Node, parent: usize, names: &Names, next: &mut usize, s: &mut String) {
        let id = *next;
        *next += 1;
        let (label, shape) = match (n, n.as_literal()) {
            (Node::Atom(v), _) => (names.name(*v).to_string(), "plaintext"),
            (_, Some(l)) => (names.literal_name(l), "ellipse"),
            _ => ("".to_string(), "ellipse"),
        };
        let _ = writeln!(s, "  n{id} [label={}, shape={shape}];", quote(&label));
        let _ = writeln!(s, "  n{parent} -> n{id};");
        if let (Node::Cut(ch), None) = (n, n.as_literal()) {
            for c in ch {
                walk(c, id, names, next, s);
            }
        }
    }
    if !f.is_bottom() || !f.root().is_empty() {
        for n in f.root() {
            walk(n, 0, f.names(), &mut next, &mut s);
        }
    }
    s.push_str("}\n");
    s
}

fn big_dot(f: &Formula) -> String {
    let mut g = Big::new();
    for cv in crate::eg::clause_views(f) {
        if cv.area.depth() == 0 {
            if let [a, b] = cv.literals[..] {
                g.add_clause(a, b, cv.id);
            }
        }
    }
    let names = f.names();
    let mut s = String::from("digraph big {\n");
    for &l in g.nodes() {
        let _ = writeln!(s, "  {};", quote(&names.literal_name(l)));
    }
    for (a, b, _) in g.edges() {
        let _ = writeln!(
            s,
            "  {} -> {};",
            quote(&names.literal_name(a)),
            quote(&names.literal_name(b))
        );
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_dimacs, parse_pl};

    fn roundtrip(s: &str) {
        let f = parse_pl(s).unwrap();
        let text = render_pl(&f);
        let back = parse_pl(&text).unwrap().remap_into(&mut f.names().clone());
        assert!(back.equal_canonical(&f), "{s} -> {text}");
    }

    #[test]
    fn pl_rendering() {
        let f = parse_pl("(~A|B)&(~B|C)&(~X|~Y)").unwrap();
        assert_eq!(render_pl(&f), "(~A|B)&(~B|C)&(~X|~Y)");
        assert_eq!(render_pl(&parse_pl("true").unwrap()), "true");
        assert_eq!(render_pl(&parse_pl("false").unwrap()), "false");
        for s in [
            "P & ~Q",
            "((P->Q)->P)->P",
            "P & ~T & ((A&B&D) | (Q&R) | (X & (~Y | ~Z)))",
            "~(a & ~(b & c & ~(d | e)))",
            "(a <-> b) | c",
        ] {
            roundtrip(s);
        }
    }

    #[test]
    fn cnf_conversion() {
        let f = parse_pl("(A&B)|C").unwrap();
        let cnf = to_cnf(&f, DEFAULT_CNF_CAP).unwrap();
        let want = parse_pl("(A|C)&(B|C)")
            .unwrap()
            .remap_into(&mut f.names().clone());
        assert!(cnf.to_formula().equal_canonical(&want));
        let t = to_cnf(&parse_pl("A|~A").unwrap(), DEFAULT_CNF_CAP).unwrap();
        assert!(t.clauses.is_empty());
        assert!(t.to_formula().is_top());
        let st = to_cnf(
            &parse_pl("P & ~T & ((A&B&D) | (Q&R) | (X & (~Y | ~Z)))").unwrap(),
            DEFAULT_CNF_CAP,
        )
        .unwrap()
        .stats();
        assert_eq!((st.variables, st.clauses, st.literals), (10, 14, 44));
        assert_eq!(st.max_clause_length, 4);
    }

    #[test]
    fn cnf_cap() {
        let parts: Vec<String> = (0..12).map(|i| format!("(a{i}&b{i})")).collect();
        let f = parse_pl(&parts.join("|")).unwrap();
        assert!(matches!(to_cnf(&f, 1000), Err(Error::CnfCap { cap: 1000 })));
        assert_eq!(to_cnf(&f, 1 << 12).unwrap().clauses.len(), 1 << 12);
    }

    #[test]
    fn dimacs_roundtrip() {
        let f = parse_dimacs("p cnf 3 2\n1 -2 0\n-1 2 3 0\n").unwrap();
        let text = render_dimacs(&f, DEFAULT_CNF_CAP).unwrap();
        let g = parse_dimacs(&text).unwrap();
        assert!(g.equal_canonical(&f));
        assert!(text.starts_with("p cnf 3 2\n"));
    }

    #[test]
    fn dot_output() {
        let f = parse_pl("(~X|Y)&(~Y|Z)&(~Z|U)&(~U|V)&(~U|Y)").unwrap();
        let d = export_dot(&f, DotTarget::Big);
        assert_eq!(d.matches("->").count(), 10);
        assert_eq!(
            d.lines()
                .filter(|l| l.ends_with(';') && !l.contains("->"))
                .count(),
            10
        );
        let e = export_dot(&Formula::top(Names::new()), DotTarget::Eg);
        assert_eq!(e.matches("label").count(), 1);
        let e = export_dot(&parse_pl("P&~Q").unwrap(), DotTarget::Eg);
        assert_eq!(e.matches("label").count(), 3);
        assert_eq!(e.matches("->").count(), 2);
    }
}
