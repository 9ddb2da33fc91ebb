//! Readers for the propositional input language and DIMACS CNF.
//!
//! Precedence, loosest first: `<->`, `->` (right associative), `|`, `&`,
//! `~`. Unicode `¬ ∧ ∨ → ↔` and the constants `true`/`false`/`1`/`0` are
//! accepted as well.

use crate::eg::{Formula, Literal, Names, Node, VarId};
use crate::error::{Error, ParseError, Result};

/// Maximum number of distinct variables a formula may introduce.
pub const MAX_VARIABLES: usize = 1 << 20;

/// Maximum parenthesis/negation nesting accepted by the PL reader.
pub const MAX_NESTING: usize = 512;

/// Each `<->` copies both sides; inputs expanding past this many atom
/// occurrences are rejected.
pub const MAX_EXPANDED_ATOMS: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceSyntax {
    Pl,
    Dimacs,
}

/// A leading `p cnf` header (after DIMACS comment lines) selects DIMACS.
pub fn detect_syntax(text: &str) -> SourceSyntax {
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || is_dimacs_comment(t) {
            continue;
        }
        return if t.starts_with("p cnf") || t.starts_with("p\tcnf") {
            SourceSyntax::Dimacs
        } else {
            SourceSyntax::Pl
        };
    }
    SourceSyntax::Pl
}

fn is_dimacs_comment(t: &str) -> bool {
    t == "c" || t.starts_with("c ") || t.starts_with("c\t")
}

pub fn parse_auto(text: &str) -> Result<Formula> {
    match detect_syntax(text) {
        SourceSyntax::Pl => parse_pl(text),
        SourceSyntax::Dimacs => parse_dimacs(text),
    }
}

pub fn parse_pl(text: &str) -> Result<Formula> {
    parse_pl_with(text, Names::new())
}

/// Parses against an existing name table so that shared variable names map
/// to the same ids.
pub fn parse_pl_with(text: &str, names: Names) -> Result<Formula> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        names,
        depth: 0,
    };
    let area = p.iff()?;
    let tok = p.peek();
    if tok.kind != Tok::Eof {
        return Err(p.error_at(tok, "unexpected trailing input").into());
    }
    if p.names.len() > MAX_VARIABLES {
        return Err(Error::TooManyVariables {
            count: p.names.len(),
            limit: MAX_VARIABLES,
        });
    }
    Ok(Formula::new(area, p.names))
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    kind: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut it = text.chars().peekable();
    while let Some(&c) = it.peek() {
        let (l0, c0) = (line, col);
        let mut bump = |it: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let ch = it.next();
            if ch == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        let kind = match c {
            c if c.is_whitespace() => {
                bump(&mut it);
                continue;
            }
            '~' | '!' | '¬' => {
                bump(&mut it);
                Tok::Not
            }
            '&' | '∧' => {
                bump(&mut it);
                Tok::And
            }
            '|' | '∨' => {
                bump(&mut it);
                Tok::Or
            }
            '→' => {
                bump(&mut it);
                Tok::Imp
            }
            '↔' => {
                bump(&mut it);
                Tok::Iff
            }
            '(' => {
                bump(&mut it);
                Tok::LParen
            }
            ')' => {
                bump(&mut it);
                Tok::RParen
            }
            '-' => {
                bump(&mut it);
                if it.peek() == Some(&'>') {
                    bump(&mut it);
                    Tok::Imp
                } else {
                    return Err(ParseError::new(l0, c0, "expected '->'"));
                }
            }
            '<' => {
                bump(&mut it);
                let ok = it.peek() == Some(&'-') && {
                    bump(&mut it);
                    it.peek() == Some(&'>')
                };
                if !ok {
                    return Err(ParseError::new(l0, c0, "expected '<->'"));
                }
                bump(&mut it);
                Tok::Iff
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut word = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        word.push(d);
                        bump(&mut it);
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "true" | "1" => Tok::True,
                    "false" | "0" => Tok::False,
                    w if w.starts_with(|ch: char| ch.is_ascii_digit()) => {
                        return Err(ParseError::new(
                            l0,
                            c0,
                            format!("identifier may not start with a digit: {w}"),
                        ))
                    }
                    _ => Tok::Ident(word),
                }
            }
            other => {
                return Err(ParseError::new(
                    l0,
                    c0,
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        out.push(Token {
            kind,
            line: l0,
            column: c0,
        });
    }
    out.push(Token {
        kind: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

/// Recursive-descent parser producing areas (conjunctions of EG nodes).
struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    names: Names,
    depth: usize,
}

type Area = Vec<Node>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, tok: &Token, msg: &str) -> ParseError {
        let found = match &tok.kind {
            Tok::Eof => "end of input".to_string(),
            Tok::Ident(s) => format!("identifier {s:?}"),
            k => format!("{k:?}"),
        };
        ParseError::new(tok.line, tok.column, format!("{msg} (found {found})"))
    }

    fn eat(&mut self, kind: &Tok) -> bool {
        if &self.peek().kind == kind {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            let t = self.peek();
            return Err(ParseError::new(t.line, t.column, "nesting too deep"));
        }
        Ok(())
    }

    fn iff(&mut self) -> Result<Area, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let at = self.tokens[self.pos - 1].clone();
            let rhs = self.imp()?;
            let atoms: usize = lhs.iter().chain(&rhs).map(Node::atom_count).sum();
            if 2 * atoms > MAX_EXPANDED_ATOMS {
                return Err(self.error_at(&at, "biconditional expansion too large"));
            }
            let mut both = implies(lhs.clone(), rhs.clone());
            both.extend(implies(rhs, lhs));
            lhs = both;
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Area, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            self.enter()?;
            let rhs = self.imp()?;
            self.depth -= 1;
            return Ok(implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Area, ParseError> {
        let first = self.and()?;
        if self.peek().kind != Tok::Or {
            return Ok(first);
        }
        let mut disjuncts = vec![Node::Cut(first)];
        while self.eat(&Tok::Or) {
            disjuncts.push(Node::Cut(self.and()?));
        }
        Ok(vec![Node::Cut(disjuncts)])
    }

    fn and(&mut self) -> Result<Area, ParseError> {
        let mut area = self.unary()?;
        while self.eat(&Tok::And) {
            area.extend(self.unary()?);
        }
        Ok(area)
    }

    fn unary(&mut self) -> Result<Area, ParseError> {
        let tok = self.next();
        match tok.kind {
            Tok::Not => {
                self.enter()?;
                let inner = self.unary()?;
                self.depth -= 1;
                Ok(vec![Node::Cut(inner)])
            }
            Tok::LParen => {
                self.enter()?;
                let inner = self.iff()?;
                self.depth -= 1;
                let close = self.next();
                if close.kind != Tok::RParen {
                    return Err(self.error_at(&close, "expected ')'"));
                }
                Ok(inner)
            }
            Tok::True => Ok(Vec::new()),
            Tok::False => Ok(vec![Node::Cut(Vec::new())]),
            Tok::Ident(name) => Ok(vec![Node::Atom(self.names.intern(&name))]),
            _ => Err(self.error_at(&tok, "expected a formula")),
        }
    }
}

/// `a -> b` is `Cut{a, Cut{b}}`.
fn implies(lhs: Area, rhs: Area) -> Area {
    let mut inner = lhs;
    inner.push(Node::Cut(rhs));
    vec![Node::Cut(inner)]
}

/// Reads DIMACS CNF. Variable `i` is named `x{i}` and gets id `i - 1`.
pub fn parse_dimacs(text: &str) -> Result<Formula> {
    let (num_vars, clauses) = read_dimacs_clauses(text)?;
    let mut names = Names::new();
    for i in 1..=num_vars {
        names.intern(&format!("x{i}"));
    }
    let root = clauses
        .iter()
        .map(|c| {
            if c.is_empty() {
                Node::Cut(Vec::new())
            } else {
                Node::clause(c)
            }
        })
        .collect();
    Ok(Formula::new(root, names))
}

/// Raw clause list of a DIMACS file (duplicate literals merged).
pub fn read_dimacs_clauses(text: &str) -> Result<(usize, Vec<Vec<Literal>>)> {
    let mut header: Option<usize> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut open_at: Option<(usize, usize)> = None;
    let mut last_pos = (1, 1);
    'lines: for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let t = line.trim_start();
        if t.is_empty() || is_dimacs_comment(t) {
            continue;
        }
        if t.starts_with('%') {
            break;
        }
        if t.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::new(ln, 1, "duplicate header").into());
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            let bad = || ParseError::new(ln, 1, "malformed header, expected 'p cnf V C'");
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(bad().into());
            }
            let v: usize = parts[2].parse().map_err(|_| bad())?;
            let _c: usize = parts[3].parse().map_err(|_| bad())?;
            if v > MAX_VARIABLES {
                return Err(Error::TooManyVariables {
                    count: v,
                    limit: MAX_VARIABLES,
                });
            }
            header = Some(v);
            continue;
        }
        let Some(num_vars) = header else {
            return Err(ParseError::new(ln, 1, "clause before 'p cnf' header").into());
        };
        let mut col = 1;
        for tok in line.split_inclusive(char::is_whitespace) {
            let word = tok.trim();
            let wcol = col + (tok.len() - tok.trim_start().len());
            col += tok.chars().count();
            if word.is_empty() {
                continue;
            }
            if word.starts_with('%') {
                break 'lines;
            }
            let value: i64 = word.parse().map_err(|_| {
                ParseError::new(ln, wcol, format!("expected an integer, found {word:?}"))
            })?;
            last_pos = (ln, wcol);
            if value == 0 {
                current.sort();
                current.dedup();
                clauses.push(std::mem::take(&mut current));
                open_at = None;
                continue;
            }
            let var = value.unsigned_abs() as usize;
            if var > num_vars {
                return Err(ParseError::new(
                    ln,
                    wcol,
                    format!("variable {var} exceeds header count {num_vars}"),
                )
                .into());
            }
            open_at.get_or_insert((ln, wcol));
            current.push(Literal::new(VarId(var as u32 - 1), value > 0));
        }
    }
    let Some(num_vars) = header else {
        return Err(ParseError::new(1, 1, "missing 'p cnf' header").into());
    };
    if !current.is_empty() {
        let (l, c) = open_at.unwrap_or(last_pos);
        return Err(ParseError::new(l, c, "clause is missing its terminating 0").into());
    }
    Ok((num_vars, clauses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eg::{equal_areas, is_bottom_area};

    fn atom(f: &Formula, name: &str) -> Node {
        Node::Atom(f.names().get(name).unwrap())
    }

    #[test]
    fn biconditional_chains_are_bounded() {
        assert!(parse_pl("a <-> b <-> c <-> d").is_ok());
        let chain: Vec<String> = (0..40).map(|i| format!("x{i}")).collect();
        let err = parse_pl(&chain.join(" <-> ")).unwrap_err();
        assert!(matches!(err, Error::Parse(_)), "{err}");
    }

    #[test]
    fn peirce_law_shape() {
        let f = parse_pl("((P->Q)->P)->P").unwrap();
        let p = atom(&f, "P");
        let q = atom(&f, "Q");
        let expected = vec![Node::Cut(vec![
            Node::Cut(vec![
                Node::Cut(vec![p.clone(), Node::Cut(vec![q])]),
                Node::Cut(vec![p.clone()]),
            ]),
            Node::Cut(vec![p]),
        ])];
        assert!(equal_areas(f.root(), &expected));
    }

    #[test]
    fn conjunction_with_negation() {
        let f = parse_pl("P & ~Q").unwrap();
        let expected = vec![atom(&f, "P"), Node::Cut(vec![atom(&f, "Q")])];
        assert!(equal_areas(f.root(), &expected));
    }

    #[test]
    fn double_negation_vanishes() {
        let f = parse_pl("~~P").unwrap();
        assert_eq!(f.root(), &[atom(&f, "P")]);
    }

    #[test]
    fn precedence_and_associativity() {
        let a = parse_pl("A | B & C -> D -> E").unwrap();
        let b = parse_pl("(A | (B & C)) -> (D -> E)").unwrap();
        assert!(a.equal_canonical(&b));
        let c = parse_pl("A <-> B").unwrap();
        let d = parse_pl("(A -> B) & (B -> A)").unwrap();
        assert!(c.equal_canonical(&d));
        let u = parse_pl("¬A ∧ (B ∨ C) → (A ↔ C)").unwrap();
        let v = parse_pl("~A & (B | C) -> (A <-> C)").unwrap();
        assert!(u.equal_canonical(&v));
    }

    #[test]
    fn constants() {
        assert!(parse_pl("true").unwrap().is_top());
        assert!(parse_pl("false").unwrap().is_bottom());
        assert!(parse_pl("A | 1").unwrap().is_top());
        assert!(parse_pl("A & 0").unwrap().is_bottom());
    }

    #[test]
    fn errors_carry_positions() {
        let Error::Parse(e) = parse_pl("A &\n  (B | )").unwrap_err() else {
            panic!()
        };
        assert_eq!((e.line, e.column), (2, 8));
        assert!(parse_pl("A B").is_err());
        assert!(parse_pl("A - B").is_err());
        assert!(parse_pl("(A").is_err());
        assert!(parse_pl("").is_err());
        assert!(parse_pl("1abc").is_err());
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowed() {
        let s = "~".repeat(100_000) + "A";
        assert!(parse_pl(&s).is_err());
        let s = "(".repeat(100_000);
        assert!(parse_pl(&s).is_err());
    }

    #[test]
    fn dimacs_basic() {
        let f = parse_dimacs("p cnf 2 2\n1 -2 0\n-1 2 0\n").unwrap();
        let g = parse_pl("(x1 | ~x2) & (~x1 | x2)").unwrap();
        assert!(f.equal_canonical(&g));
    }

    #[test]
    fn dimacs_empty_clause_is_false() {
        let f = parse_dimacs("p cnf 1 1\n0\n").unwrap();
        assert!(is_bottom_area(f.root()));
    }

    #[test]
    fn dimacs_duplicate_literal_merged() {
        let f = parse_dimacs("p cnf 1 1\n1 1 0\n").unwrap();
        assert_eq!(f.root(), &[Node::Atom(VarId(0))]);
    }

    #[test]
    fn dimacs_errors() {
        assert!(parse_dimacs("p cnf x 1\n1 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 a 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 2\n").is_err());
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
    }

    #[test]
    fn dimacs_comments_and_multiline_clauses() {
        let f = parse_dimacs("c hello\np cnf 3 1\n1\n -2\n3 0\n").unwrap();
        let g = parse_pl("x1 | ~x2 | x3").unwrap();
        let g = g.remap_into(&mut f.names().clone());
        assert!(f.equal_canonical(&g));
    }

    #[test]
    fn syntax_detection() {
        assert_eq!(detect_syntax("c x\np cnf 1 1\n1 0"), SourceSyntax::Dimacs);
        assert_eq!(detect_syntax("c & d"), SourceSyntax::Pl);
        assert_eq!(detect_syntax("P -> Q"), SourceSyntax::Pl);
    }
}
