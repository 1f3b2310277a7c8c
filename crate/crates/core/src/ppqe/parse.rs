use std::fmt::Write;

use super::{Atom, PpError, PpFormula, TermExpr, MAX_VARS};
use crate::Mode;

/// Knobs for [`parse_formula_with`].
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Fixes the free variables and their order; any other undeclared name is an error.
    pub free: Option<Vec<String>>,
    /// In semilattice mode joins are rejected.
    pub mode: Option<Mode>,
}

pub fn parse_formula(text: &str) -> Result<PpFormula, PpError> {
    parse_formula_with(text, &ParseOptions::default())
}

pub fn parse_formula_with(text: &str, options: &ParseOptions) -> Result<PpFormula, PpError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        furthest: None,
    };
    let raw = parser.formula()?;
    resolve(raw, options)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Exists,
    True,
    Dot,
    Amp,
    Eq,
    Le,
    Meet,
    Join,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier {name:?}"),
            Tok::Exists => "'exists'".into(),
            Tok::True => "'true'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Eq => "'='".into(),
            Tok::Le => "'<='".into(),
            Tok::Meet => "'/\\'".into(),
            Tok::Join => "'\\/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(pos: usize, message: impl Into<String>) -> PpError {
    PpError::Syntax {
        pos,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, PpError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = |next: u8| bytes.get(i + 1) == Some(&next);
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'.' => Tok::Dot,
            b'&' => Tok::Amp,
            b'=' => Tok::Eq,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'<' if two(b'=') => Tok::Le,
            b'/' if two(b'\\') => Tok::Meet,
            b'\\' if two(b'/') => Tok::Join,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                let word = &text[start..i];
                out.push((
                    match word {
                        "exists" => Tok::Exists,
                        "true" => Tok::True,
                        _ => Tok::Ident(word.to_string()),
                    },
                    start,
                ));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(i, format!("unexpected character {ch:?}")));
            }
        };
        i += if matches!(tok, Tok::Le | Tok::Meet | Tok::Join) {
            2
        } else {
            1
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Terms with names not yet resolved to indices.
#[derive(Debug, Clone)]
enum RawTerm {
    Var(String),
    Meet(Box<RawTerm>, Box<RawTerm>),
    Join(Box<RawTerm>, Box<RawTerm>),
}

struct RawFormula {
    bound: Vec<String>,
    atoms: Vec<(RawTerm, RawTerm)>,
}

struct Parser<'a> {
    tokens: &'a [(Tok, usize)],
    pos: usize,
    /// Error at the largest input offset seen so far; reported when backtracking runs out.
    furthest: Option<PpError>,
}

type PResult<T> = Result<T, PpError>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&mut self, expected: &str) -> PResult<T> {
        let err = syntax(
            self.offset(),
            format!("expected {expected}, found {}", self.peek().describe()),
        );
        let further = match &self.furthest {
            Some(PpError::Syntax { pos, .. }) => self.offset() >= *pos,
            _ => true,
        };
        if further {
            self.furthest = Some(err.clone());
        }
        Err(self.furthest.clone().unwrap_or(err))
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(expected)
        }
    }

    fn formula(&mut self) -> PResult<RawFormula> {
        let mut bound = Vec::new();
        while *self.peek() == Tok::Exists {
            self.bump();
            let before = bound.len();
            while let Tok::Ident(name) = self.peek().clone() {
                bound.push(name);
                self.bump();
            }
            if bound.len() == before {
                return self.fail("a variable after 'exists'");
            }
            self.expect(Tok::Dot, "'.' after the quantified variables")?;
        }
        let atoms = self.conj()?;
        self.expect(Tok::End, "'&' or end of input")?;
        Ok(RawFormula { bound, atoms })
    }

    fn conj(&mut self) -> PResult<Vec<(RawTerm, RawTerm)>> {
        if *self.peek() == Tok::True {
            self.bump();
            return Ok(Vec::new());
        }
        let mut atoms = self.group()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            if *self.peek() == Tok::True {
                self.bump();
                continue;
            }
            atoms.extend(self.group()?);
        }
        Ok(atoms)
    }

    /// An atom, or a parenthesized conjunction. Tries the atom reading first because
    /// `(x) = y` and `(x = y)` share a prefix.
    fn group(&mut self) -> PResult<Vec<(RawTerm, RawTerm)>> {
        let start = self.pos;
        match self.atom() {
            Ok(atom) => Ok(vec![atom]),
            Err(err) => {
                if self.tokens[start].0 != Tok::LParen {
                    return Err(err);
                }
                self.pos = start + 1;
                let atoms = self.conj()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(atoms)
            }
        }
    }

    fn atom(&mut self) -> PResult<(RawTerm, RawTerm)> {
        let lhs = self.term()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok((lhs, self.term()?))
            }
            Tok::Le => {
                self.bump();
                let rhs = self.term()?;
                Ok((lhs.clone(), RawTerm::Meet(Box::new(lhs), Box::new(rhs))))
            }
            _ => self.fail("'=' or '<='"),
        }
    }

    fn term(&mut self) -> PResult<RawTerm> {
        let mut acc = self.meet_chain()?;
        while *self.peek() == Tok::Join {
            self.bump();
            acc = RawTerm::Join(Box::new(acc), Box::new(self.meet_chain()?));
        }
        Ok(acc)
    }

    fn meet_chain(&mut self) -> PResult<RawTerm> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Meet {
            self.bump();
            acc = RawTerm::Meet(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> PResult<RawTerm> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(RawTerm::Var(name))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => self.fail("a variable or '('"),
        }
    }
}

fn resolve(raw: RawFormula, options: &ParseOptions) -> Result<PpFormula, PpError> {
    let mut free: Vec<String> = options.free.clone().unwrap_or_default();
    let bound = raw.bound;
    for (i, name) in bound.iter().enumerate() {
        if bound[..i].contains(name) || free.contains(name) {
            return Err(PpError::DuplicateVariable(name.clone()));
        }
    }
    fn visit(
        t: &RawTerm,
        free: &mut Vec<String>,
        bound: &[String],
        fixed: bool,
    ) -> Result<(), PpError> {
        match t {
            RawTerm::Var(name) => {
                if !bound.contains(name) && !free.contains(name) {
                    if fixed {
                        return Err(PpError::UnknownVariable(name.clone()));
                    }
                    free.push(name.clone());
                }
                Ok(())
            }
            RawTerm::Meet(a, b) | RawTerm::Join(a, b) => {
                visit(a, free, bound, fixed)?;
                visit(b, free, bound, fixed)
            }
        }
    }
    let fixed = options.free.is_some();
    for (l, r) in &raw.atoms {
        visit(l, &mut free, &bound, fixed)?;
        visit(r, &mut free, &bound, fixed)?;
    }
    if free.len() + bound.len() > MAX_VARS {
        return Err(PpError::TooManyVariables(free.len() + bound.len()));
    }
    let index = |name: &str| {
        free.iter()
            .chain(&bound)
            .position(|v| v == name)
            .expect("resolved above")
    };
    fn convert(t: &RawTerm, index: &dyn Fn(&str) -> usize) -> TermExpr {
        match t {
            RawTerm::Var(name) => TermExpr::Var(index(name)),
            RawTerm::Meet(a, b) => TermExpr::meet(convert(a, index), convert(b, index)),
            RawTerm::Join(a, b) => TermExpr::join(convert(a, index), convert(b, index)),
        }
    }
    let atoms: Vec<Atom> = raw
        .atoms
        .iter()
        .map(|(l, r)| Atom::eq(convert(l, &index), convert(r, &index)))
        .collect();
    let formula = PpFormula::new(free, bound, atoms)?;
    if let Some(mode) = options.mode {
        formula.check_mode(mode)?;
    }
    Ok(formula)
}

/// Writes a term so that parsing the text gives back exactly the same tree: meets bind
/// tighter than joins and both associate to the left.
pub(super) fn write_term(out: &mut String, t: &TermExpr, names: &[String]) {
    match t {
        TermExpr::Var(i) => out.push_str(&names[*i]),
        TermExpr::Meet(a, b) => {
            write_operand(out, a, names, !matches!(**a, TermExpr::Join(..)));
            out.push_str(" /\\ ");
            write_operand(out, b, names, matches!(**b, TermExpr::Var(_)));
        }
        TermExpr::Join(a, b) => {
            write_operand(out, a, names, true);
            out.push_str(" \\/ ");
            write_operand(out, b, names, !matches!(**b, TermExpr::Join(..)));
        }
    }
}

fn write_operand(out: &mut String, t: &TermExpr, names: &[String], bare: bool) {
    if bare {
        write_term(out, t, names);
    } else {
        out.push('(');
        write_term(out, t, names);
        out.push(')');
    }
}

pub(super) fn render_formula(f: &PpFormula) -> String {
    let mut out = String::new();
    if !f.bound_vars().is_empty() {
        let _ = write!(out, "exists {} . ", f.bound_vars().join(" "));
    }
    if f.atoms().is_empty() {
        out.push_str("true");
    }
    for (i, atom) in f.atoms().iter().enumerate() {
        if i > 0 {
            out.push_str(" & ");
        }
        write_term(&mut out, &atom.lhs, f.vars());
        match atom.as_leq() {
            Some(t) => {
                out.push_str(" <= ");
                write_term(&mut out, t, f.vars());
            }
            None => {
                out.push_str(" = ");
                write_term(&mut out, &atom.rhs, f.vars());
            }
        }
    }
    out
}
