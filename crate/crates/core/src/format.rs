//! The presentation file format: a line-oriented reader and printer.
//!
//! ```text
//! operad lie
//! flavor symmetric
//! field Q
//! generator b arity 2
//! action b swap 1 = -b
//! order lex
//! relation b(b(1,2),3) + b(b(2,3),1) + b(b(3,1),2) = 0
//! ```
//!
//! Symmetrized presentations carry, for each generator, the planar letter
//! it unfolds to: `generator m_21 arity 2 from m [2,1]` together with
//! `order lex symmetrized`. Their `precedence` lines rank planar letters.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::element::OperadElement;
use crate::field::{Field, Scalar};
use crate::free::canonicalize;
use crate::generators::{Flavor, GenId, GeneratorModule};
use crate::order::{OrderSpec, PathWordOrder, SymmetrizedOrder, WordOrder};
use crate::perm::Perm;
use crate::presentation::Presentation;
use crate::tree::Tree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

struct Lexer<'a> {
    text: &'a str,
    line: usize,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '^' | '-')
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, line: usize) -> Result<Self, ParseError> {
        let mut toks = Vec::new();
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (at, c) = chars[i];
            let column = text[..at].chars().count() + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c == '#' {
                break;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let end = chars.get(i).map_or(text.len(), |x| x.0);
                toks.push((column, Tok::Int(text[chars[start].0..end].parse().expect("digits"))));
            } else if is_ident_start(c) {
                let start = i;
                // A dash continues an identifier only when followed by a
                // letter or digit, so `m-dend` is one name and `a - b` is not.
                while i < chars.len()
                    && is_ident_char(chars[i].1)
                    && (chars[i].1 != '-' || chars.get(i + 1).is_some_and(|x| x.1.is_alphanumeric()))
                {
                    i += 1;
                }
                let end = chars.get(i).map_or(text.len(), |x| x.0);
                toks.push((column, Tok::Ident(text[chars[start].0..end].to_string())));
            } else if "()[],=+-*/<".contains(c) {
                toks.push((column, Tok::Sym(c)));
                i += 1;
            } else {
                return Err(ParseError { line, column, message: format!("unexpected character `{c}`") });
            }
        }
        Ok(Lexer { text, line, toks, pos: 0 })
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.text.chars().count() + 1, |t| t.0)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column(), message: message.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected `{kw}`"))),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self, what: &str) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn small(&mut self, what: &str) -> Result<usize, ParseError> {
        let col = self.column();
        let n = self.int(what)?;
        usize::try_from(n).map_err(|_| ParseError {
            line: self.line,
            column: col,
            message: format!("{what} is too large"),
        })
    }

    fn signed_int(&mut self, what: &str) -> Result<i64, ParseError> {
        let neg = self.eat('-');
        let col = self.column();
        let n = i64::try_from(self.int(what)?).map_err(|_| ParseError {
            line: self.line,
            column: col,
            message: format!("{what} is too large"),
        })?;
        Ok(if neg { -n } else { n })
    }

    /// `[2,1,3]`
    fn perm(&mut self) -> Result<Perm, ParseError> {
        let col = self.column();
        self.sym('[')?;
        let mut images = Vec::new();
        loop {
            images.push(self.small("a permutation entry")? as u32);
            if !self.eat(',') {
                break;
            }
        }
        self.sym(']')?;
        Perm::new(images).ok_or(ParseError { line: self.line, column: col, message: "not a permutation".into() })
    }

    /// An optional `c*`, `c` or `p/q*` prefix; returns one when absent.
    fn coefficient(&mut self) -> Result<Scalar, ParseError> {
        if !matches!(self.peek(), Some(Tok::Int(_))) {
            return Ok(Scalar::one());
        }
        let num = self.int("a coefficient")?;
        let den = if self.eat('/') {
            let col = self.column();
            let d = self.int("a denominator")?;
            if d.is_zero() {
                return Err(ParseError { line: self.line, column: col, message: "zero denominator".into() });
            }
            d
        } else {
            BigInt::one()
        };
        self.eat('*');
        Ok(Scalar::new(num, den))
    }

    fn tree(&mut self, gens: &GeneratorModule) -> Result<Tree<GenId>, ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let col = self.column();
                let n = self.small("a leaf")?;
                if n == 0 || n > u32::MAX as usize {
                    return Err(ParseError {
                        line: self.line,
                        column: col,
                        message: "leaves are numbered from 1".into(),
                    });
                }
                Ok(Tree::Leaf(n as u32))
            }
            Some(Tok::Ident(_)) => {
                let col = self.column();
                let name = self.ident("a generator")?;
                let g = gens.lookup(&name).map_err(|e| ParseError {
                    line: self.line,
                    column: col,
                    message: e.to_string(),
                })?;
                self.sym('(')?;
                let mut ch = Vec::new();
                loop {
                    ch.push(self.tree(gens)?);
                    if !self.eat(',') {
                        break;
                    }
                }
                self.sym(')')?;
                if ch.len() != gens.arity(g) {
                    return Err(ParseError {
                        line: self.line,
                        column: col,
                        message: format!("`{name}` has arity {} but is applied to {} entries", gens.arity(g), ch.len()),
                    });
                }
                Ok(Tree::Vertex(g, ch))
            }
            _ => Err(self.error("expected a leaf or a generator")),
        }
    }

    /// A signed sum of coefficient-prefixed monomials, canonicalized.
    fn poly(&mut self, gens: &GeneratorModule) -> Result<OperadElement, ParseError> {
        let field = gens.field();
        let mut out = OperadElement::zero(field);
        let mut first = true;
        loop {
            let neg = if self.eat('-') {
                true
            } else if first || self.eat('+') {
                false
            } else {
                break;
            };
            first = false;
            let col = self.column();
            if matches!(self.peek(), Some(Tok::Int(n)) if n.is_zero()) && self.toks.len() == self.pos + 1 {
                self.pos += 1;
                continue;
            }
            let c = self.coefficient()?;
            let c = field.try_reduce(c).ok_or(ParseError {
                line: self.line,
                column: col,
                message: "coefficient is not defined in the field".into(),
            })?;
            let c = if neg { field.neg(&c) } else { c };
            let t = self.tree(gens)?;
            let x = canonicalize(gens, &t).map_err(|e| ParseError {
                line: self.line,
                column: col,
                message: e.to_string(),
            })?;
            out.add_scaled(&c, &x);
        }
        Ok(out)
    }
}

/// Parses an element of the free operad on `gens`.
pub fn parse_element(gens: &GeneratorModule, text: &str) -> Result<OperadElement, ParseError> {
    let mut lx = Lexer::new(text, 1)?;
    let x = lx.poly(gens)?;
    lx.end()?;
    Ok(x)
}

enum Pending {
    Action { line: usize, column: usize, g: String, k: usize, image: Vec<(Scalar, String)> },
    Relation { line: usize, text: String },
}

/// Reads a presentation file.
pub fn parse(text: &str) -> Result<Presentation, ParseError> {
    let mut name = None;
    let mut flavor = None;
    let mut field = Field::Rational;
    let mut declared: Vec<(String, usize, i32, Option<(String, Perm)>, usize)> = Vec::new();
    let mut order: Option<(WordOrder, bool, usize)> = None;
    let mut precedence: Vec<(String, usize, usize)> = Vec::new();
    let mut pending = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let mut lx = Lexer::new(raw, line)?;
        if lx.at_end() {
            continue;
        }
        let column = lx.column();
        let kw = lx.ident("a keyword")?;
        match kw.as_str() {
            "operad" => {
                name = Some(lx.ident("a name")?);
                lx.end()?;
            }
            "flavor" => {
                let f = lx.ident("`symmetric` or `nonsymmetric`")?;
                flavor = Some(match f.as_str() {
                    "symmetric" => Flavor::Symmetric,
                    "nonsymmetric" => Flavor::Nonsymmetric,
                    _ => return Err(ParseError { line, column: column + 7, message: format!("unknown flavor `{f}`") }),
                });
                lx.end()?;
            }
            "field" => {
                let col = lx.column();
                let f = lx.ident("`Q` or `F<p>`")?;
                field = f.parse().map_err(|message| ParseError { line, column: col, message })?;
                lx.end()?;
            }
            "generator" => {
                let g = lx.ident("a generator name")?;
                lx.keyword("arity")?;
                let arity = lx.small("an arity")?;
                let mut degree = 0;
                let mut origin = None;
                while !lx.at_end() {
                    let col = lx.column();
                    match lx.ident("`degree` or `from`")?.as_str() {
                        "degree" => degree = lx.signed_int("a degree")? as i32,
                        "from" => {
                            let base = lx.ident("a planar letter")?;
                            let sigma = lx.perm()?;
                            origin = Some((base, sigma));
                        }
                        other => {
                            return Err(ParseError { line, column: col, message: format!("unexpected `{other}`") })
                        }
                    }
                }
                declared.push((g, arity, degree, origin, line));
            }
            "action" => {
                let g = lx.ident("a generator name")?;
                lx.keyword("swap")?;
                let k = lx.small("a transposition index")?;
                lx.sym('=')?;
                let mut image = Vec::new();
                let mut first = true;
                while !lx.at_end() {
                    let neg = if lx.eat('-') {
                        true
                    } else if first || lx.eat('+') {
                        false
                    } else {
                        return Err(lx.error("expected `+` or `-`"));
                    };
                    first = false;
                    let c = lx.coefficient()?;
                    let h = lx.ident("a generator name")?;
                    image.push((if neg { -c } else { c }, h));
                }
                if image.is_empty() {
                    return Err(lx.error("empty action image"));
                }
                pending.push(Pending::Action { line, column, g, k, image });
            }
            "order" => {
                let col = lx.column();
                let kind = match lx.ident("`lex` or `revlenlex`")?.as_str() {
                    "lex" => WordOrder::Lex,
                    "revlenlex" => WordOrder::RevLenLex,
                    other => return Err(ParseError { line, column: col, message: format!("unknown order `{other}`") }),
                };
                let symmetrized = if lx.at_end() {
                    false
                } else {
                    lx.keyword("symmetrized")?;
                    true
                };
                lx.end()?;
                order = Some((kind, symmetrized, line));
            }
            "precedence" => loop {
                let col = lx.column();
                precedence.push((lx.ident("a generator name")?, line, col));
                if lx.at_end() {
                    break;
                }
                lx.sym('<')?;
            },
            "relation" => {
                let rest = raw[raw.find("relation").expect("keyword") + "relation".len()..].to_string();
                pending.push(Pending::Relation { line, text: rest });
            }
            other => return Err(ParseError { line, column, message: format!("unknown keyword `{other}`") }),
        }
    }
    let at = |line: usize, message: String| ParseError { line, column: 1, message };
    let name = name.ok_or_else(|| at(1, "missing `operad` line".into()))?;
    let flavor = flavor.ok_or_else(|| at(1, "missing `flavor` line".into()))?;
    let (kind, symmetrized, order_line) = order.ok_or_else(|| at(last_line.max(1), "missing `order` line".into()))?;

    let mut gens = GeneratorModule::new(field, flavor);
    let mut bases: Vec<(String, usize)> = Vec::new();
    let mut origin: Vec<(GenId, Perm)> = Vec::new();
    for (g, arity, degree, from, line) in &declared {
        gens.add_generator(g, *arity, *degree).map_err(|e| at(*line, e.to_string()))?;
        if symmetrized {
            let (base, sigma) =
                from.clone().ok_or_else(|| at(*line, format!("`{g}` needs `from` in a symmetrized order")))?;
            if sigma.len() != *arity {
                return Err(at(*line, format!("the permutation of `{g}` must have length {arity}")));
            }
            let b = match bases.iter().position(|x| x.0 == base) {
                Some(b) => {
                    if bases[b].1 != *arity {
                        return Err(at(*line, format!("planar letter `{base}` used with two arities")));
                    }
                    b
                }
                None => {
                    bases.push((base, *arity));
                    bases.len() - 1
                }
            };
            origin.push((b as GenId, sigma));
        } else if from.is_some() {
            return Err(at(*line, "`from` requires `order ... symmetrized`".into()));
        }
    }
    for p in pending.iter() {
        if let Pending::Action { line, column, g, k, image } = p {
            let id = gens.lookup(g).map_err(|e| ParseError { line: *line, column: *column, message: e.to_string() })?;
            let mut comb = Vec::new();
            for (c, h) in image {
                let hid = gens.lookup(h).map_err(|e| at(*line, e.to_string()))?;
                let c = field
                    .try_reduce(c.clone())
                    .ok_or_else(|| at(*line, "coefficient is not defined in the field".into()))?;
                comb.push((hid, c));
            }
            gens.set_action(id, *k, comb).map_err(|e| ParseError {
                line: *line,
                column: *column,
                message: e.to_string(),
            })?;
        }
    }
    if gens.is_symmetric() {
        gens.validate().map_err(|e| at(order_line, e.to_string()))?;
    }

    // Letters named in precedence lines are permuted among their own slots
    // of the default order (by arity, then declaration).
    let letters: Vec<(String, usize)> =
        if symmetrized { bases.clone() } else { gens.generators().iter().map(|g| (g.name.clone(), g.arity)).collect() };
    let mut default: Vec<usize> = (0..letters.len()).collect();
    default.sort_by_key(|&i| (letters[i].1, i));
    let mut listed: Vec<usize> = Vec::new();
    for (n, line, column) in &precedence {
        let i = letters.iter().position(|x| &x.0 == n).ok_or_else(|| ParseError {
            line: *line,
            column: *column,
            message: format!("unknown letter `{n}`"),
        })?;
        if listed.contains(&i) {
            return Err(ParseError { line: *line, column: *column, message: format!("`{n}` ranked twice") });
        }
        listed.push(i);
    }
    let mut queue = listed.iter();
    let sequence: Vec<GenId> = default
        .iter()
        .map(|&i| if listed.contains(&i) { *queue.next().expect("same count") } else { i } as GenId)
        .collect();
    let planar = PathWordOrder::from_sequence(kind, &sequence);
    let order = if symmetrized {
        OrderSpec::Symmetrized(SymmetrizedOrder { planar, origin })
    } else {
        OrderSpec::PathWord(planar)
    };

    let mut relations = Vec::new();
    for p in &pending {
        if let Pending::Relation { line, text } = p {
            let mut lx = Lexer::new(text, *line)?;
            let offset = "relation".len();
            let shift = |mut e: ParseError| {
                e.column += offset;
                e
            };
            let x = lx.poly(&gens).map_err(shift)?;
            lx.sym('=').map_err(shift)?;
            let zero = lx.int("`0`").map_err(shift)?;
            if !zero.is_zero() {
                return Err(ParseError {
                    line: *line,
                    column: 1,
                    message: "relations must be written `... = 0`".into(),
                });
            }
            lx.end().map_err(shift)?;
            if x.weight().is_some_and(|w| w != 2) {
                return Err(at(*line, "relation is not quadratic (weight 2)".into()));
            }
            relations.push(x);
        }
    }
    Presentation::new(&name, gens, order, relations).map_err(|e| at(1, e.to_string()))
}

/// Writes a presentation in the file format; `parse` reads it back to an
/// equal presentation.
/// The same presentation read over another field. Coefficients with a
/// denominator divisible by the new characteristic are rejected.
pub fn with_field(p: &Presentation, field: Field) -> Result<Presentation, ParseError> {
    let text: String = print(p)
        .lines()
        .map(|l| if l.starts_with("field ") { format!("field {field}\n") } else { format!("{l}\n") })
        .collect();
    parse(&text)
}

pub fn print(p: &Presentation) -> String {
    let gens = &p.gens;
    let field = gens.field();
    let mut out = String::new();
    writeln!(out, "operad {}", p.name).unwrap();
    let flavor = if gens.is_symmetric() { "symmetric" } else { "nonsymmetric" };
    writeln!(out, "flavor {flavor}").unwrap();
    writeln!(out, "field {field}").unwrap();
    let sym = match &p.order {
        OrderSpec::Symmetrized(o) => Some(o),
        OrderSpec::PathWord(_) => None,
    };
    let mut base_names: Vec<String> = Vec::new();
    for (i, g) in gens.generators().iter().enumerate() {
        write!(out, "generator {} arity {}", g.name, g.arity).unwrap();
        if g.degree != 0 {
            write!(out, " degree {}", g.degree).unwrap();
        }
        if let Some(o) = sym {
            let (b, sigma) = &o.origin[i];
            let b = *b as usize;
            if base_names.len() <= b {
                base_names.resize(b + 1, String::new());
            }
            if base_names[b].is_empty() {
                base_names[b] = planar_name(&g.name);
            }
            write!(out, " from {} {}", base_names[b], sigma).unwrap();
        }
        out.push('\n');
    }
    if gens.is_symmetric() {
        for g in gens.ids() {
            for k in 1..gens.arity(g) {
                write!(out, "action {} swap {} =", gens.name(g), k).unwrap();
                for (j, (h, c)) in gens.action(g, k).iter().enumerate() {
                    let neg = field.is_negative_repr(c);
                    let abs = if neg { field.neg(c) } else { c.clone() };
                    let sign = match (j, neg) {
                        (0, true) => " -",
                        (0, false) => "",
                        (_, true) => " -",
                        (_, false) => " +",
                    };
                    let coef = if abs.is_one() { String::new() } else { format!("{}*", field.render(&abs)) };
                    write!(out, "{sign} {coef}{}", gens.name(*h)).unwrap();
                }
                out.push('\n');
            }
        }
    }
    let (planar, letters): (&PathWordOrder, Vec<(String, usize)>) = match &p.order {
        OrderSpec::PathWord(o) => (o, gens.generators().iter().map(|g| (g.name.clone(), g.arity)).collect()),
        OrderSpec::Symmetrized(o) => {
            let mut letters = vec![(String::new(), 0); base_names.len()];
            for (i, (b, _)) in o.origin.iter().enumerate() {
                letters[*b as usize] = (base_names[*b as usize].clone(), gens.arity(i as GenId));
            }
            (&o.planar, letters)
        }
    };
    writeln!(out, "order {}{}", planar.kind, if sym.is_some() { " symmetrized" } else { "" }).unwrap();
    let mut default: Vec<usize> = (0..letters.len()).collect();
    default.sort_by_key(|&i| (letters[i].1, i));
    let seq: Vec<usize> = planar.sequence().into_iter().map(|g| g as usize).collect();
    if seq != default {
        let names: Vec<&str> = seq.iter().map(|&i| letters[i].0.as_str()).collect();
        writeln!(out, "precedence {}", names.join(" < ")).unwrap();
    }
    for rel in &p.relations {
        writeln!(out, "relation {} = 0", rel.display(gens)).unwrap();
    }
    out
}

/// The planar letter behind a symmetrized generator name `x_213`.
fn planar_name(name: &str) -> String {
    match name.rsplit_once('_') {
        Some((base, digits)) if !base.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) => base.to_string(),
        _ => format!("{name}_planar"),
    }
}
