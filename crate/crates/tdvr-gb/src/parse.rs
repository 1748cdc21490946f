//! Line-oriented instance files and the element expression grammar.
//!
//! An instance file looks like:
//!
//! ```text
//! # comment
//! ring p=3 a=2 flavor=pi
//! vars x y
//! rank 1
//! order deglex pot
//! gens:
//! pi x + y^2
//! x^3
//! ```
//!
//! `flavor=pi` selects the polynomial coefficient ring F_p[pi]/(pi^a) with its
//! `pi` literal; `flavor=p` selects Z/p^a, where the uniformizer is the prime
//! itself and `pi` is rejected. `rank` (default 1) and `order` (default
//! `degrevlex pot` with identity priority) are optional; `order` takes an
//! optional `priority` list naming components greatest-first, 1-based.
//!
//! Elements are sums of terms; a term multiplies integer literals, `pi^k`
//! (equicharacteristic only), parenthesized scalar expressions, variables with
//! optional `^k`, and — mandatory when the rank exceeds 1 — one component
//! marker `e1`, …, `er`. Factors are juxtaposed or `*`-joined.

use crate::chainring::{Flavor, RingSpec, Scalar};
use crate::error::{Error, Result};
use crate::freemod::{Element, ModuleMode, ModuleMonomial, MonoOrder, Monomial, TermOrder};

pub const MAX_VARS: usize = 32;
pub const MAX_RANK: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
}

fn lex(src: &str, line: u32) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = (i + 1) as u32;
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = tok {
            out.push(Spanned { tok, line, col });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n: u64 = text
                .parse()
                .map_err(|_| Error::parse(line, col, "integer literal too large"))?;
            out.push(Spanned { tok: Tok::Int(n), line, col });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Spanned { tok: Tok::Ident(text), line, col });
            continue;
        }
        return Err(Error::parse(line, col, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

/// Component markers `e1`, `e2`, … (never valid variable names).
fn component_of(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('e')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse::<usize>().ok().map(|l| l - 1)
}

struct ElementParser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    ring: RingSpec,
    order: &'a TermOrder,
    vars: &'a [String],
    line: u32,
}

impl<'a> ElementParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (u32, u32) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or((self.line, self.toks.last().map(|s| s.col + 1).unwrap_or(1)))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::parse(line, col, msg)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_exponent(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected an integer exponent after `^`")),
        }
    }

    /// `pi` with optional `^k`, already past the ident.
    fn pi_power(&mut self) -> Result<Scalar> {
        if self.ring.flavor() != Flavor::EquiChar {
            let s = &self.toks[self.pos - 1];
            return Err(Error::parse(
                s.line,
                s.col,
                "uniformizer literal mismatch: `pi` belongs to flavor=pi; over flavor=p write the prime itself",
            ));
        }
        let k = if self.eat(&Tok::Caret) { self.expect_exponent()? } else { 1 };
        let k = k.min(self.ring.a() as u64) as u32;
        Ok(Scalar::uniformizer_pow(self.ring, k))
    }

    fn scalar_factor(&mut self) -> Result<Scalar> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Scalar::from_u64(self.ring, n)),
            Some(Tok::Ident(name)) if name == "pi" => self.pi_power(),
            Some(Tok::LParen) => {
                let s = self.scalar_expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.err("expected `)` to close a scalar expression"));
                }
                Ok(s)
            }
            Some(t) => {
                self.pos -= 1;
                Err(self.err(format!(
                    "expected a scalar (integer, `pi`, or parenthesized expression), found {}",
                    t.describe()
                )))
            }
            None => Err(self.err("expected a scalar, found end of input")),
        }
    }

    fn scalar_term(&mut self) -> Result<Scalar> {
        let mut acc = self.scalar_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.scalar_factor()?);
                }
                Some(Tok::Int(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.scalar_factor()?);
                }
                Some(Tok::Ident(name)) if name == "pi" => {
                    acc = acc.mul(&self.scalar_factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn scalar_expr(&mut self) -> Result<Scalar> {
        let mut negative = false;
        if self.eat(&Tok::Minus) {
            negative = true;
        } else {
            self.eat(&Tok::Plus);
        }
        let mut acc = self.scalar_term()?;
        if negative {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.scalar_term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.scalar_term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    /// One product of factors; ends at `+`, `-`, `)` or end of input.
    fn term(&mut self) -> Result<(Scalar, ModuleMonomial)> {
        let rank = self.order.rank();
        let mut coeff = Scalar::one(self.ring);
        let mut exps = vec![0u32; self.vars.len()];
        let mut component: Option<usize> = None;
        let mut saw_factor = false;
        loop {
            match self.peek() {
                Some(Tok::Int(_)) | Some(Tok::LParen) => {
                    coeff = coeff.mul(&self.scalar_factor()?);
                }
                Some(Tok::Ident(name)) => {
                    let name = name.clone();
                    if name == "pi" {
                        self.pos += 1;
                        coeff = coeff.mul(&self.pi_power()?);
                    } else if let Some(i) = self.vars.iter().position(|v| *v == name) {
                        self.pos += 1;
                        let k = if self.eat(&Tok::Caret) { self.expect_exponent()? } else { 1 };
                        let k = u32::try_from(k)
                            .map_err(|_| self.err("exponent too large"))?;
                        exps[i] = exps[i]
                            .checked_add(k)
                            .ok_or_else(|| self.err("exponent too large"))?;
                    } else if let Some(l) = component_of(&name) {
                        if component.is_some() {
                            return Err(self.err("more than one component marker in a term"));
                        }
                        if l >= rank {
                            return Err(self.err(format!(
                                "component marker `{name}` exceeds the rank {rank}"
                            )));
                        }
                        self.pos += 1;
                        component = Some(l);
                    } else {
                        return Err(self.err(format!("unknown variable `{name}`")));
                    }
                }
                Some(Tok::Star) => {
                    self.pos += 1;
                    if !saw_factor {
                        return Err(self.err("a term cannot start with `*`"));
                    }
                    continue;
                }
                _ => {
                    if !saw_factor {
                        return Err(self.err("expected a term"));
                    }
                    break;
                }
            }
            saw_factor = true;
        }
        let component = match component {
            Some(l) => l,
            None if rank == 1 => 0,
            None => {
                return Err(self.err(format!(
                    "missing component marker (rank is {rank}; every term needs e1..e{rank})"
                )))
            }
        };
        Ok((coeff, ModuleMonomial::new(Monomial::new(exps), component)))
    }

    fn element(&mut self) -> Result<Element> {
        if self.toks.is_empty() {
            return Err(Error::parse(self.line, 1, "empty element expression"));
        }
        let mut terms = Vec::new();
        let mut negative = false;
        if self.eat(&Tok::Minus) {
            negative = true;
        } else {
            self.eat(&Tok::Plus);
        }
        loop {
            let (c, m) = self.term()?;
            terms.push((if negative { c.neg() } else { c }, m));
            match self.bump() {
                None => break,
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                Some(t) => {
                    self.pos -= 1;
                    return Err(self.err(format!("expected `+`, `-`, or end, found {}", t.describe())));
                }
            }
        }
        Ok(Element::from_terms(self.ring, self.order.clone(), terms))
    }
}

/// Parse one element expression against a ring, order, and variable context.
/// `line` seeds error positions when the source comes from a file.
pub fn parse_element_at(
    ring: RingSpec,
    order: &TermOrder,
    vars: &[String],
    src: &str,
    line: u32,
) -> Result<Element> {
    let toks = lex(src, line)?;
    let mut p = ElementParser { toks, pos: 0, ring, order, vars, line };
    p.element()
}

pub fn parse_element_str(
    ring: RingSpec,
    order: &TermOrder,
    vars: &[String],
    src: &str,
) -> Result<Element> {
    parse_element_at(ring, order, vars, src, 1)
}

/// A fully parsed instance: coefficient ring, term order, variable names, and
/// the generators of the submodule.
#[derive(Debug, Clone)]
pub struct Instance {
    pub ring: RingSpec,
    pub order: TermOrder,
    pub vars: Vec<String>,
    pub rank: usize,
    pub gens: Vec<Element>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_ring_line(rest: &[&str], line: u32) -> Result<RingSpec> {
    let mut p = None;
    let mut a = None;
    let mut flavor = None;
    for part in rest {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::parse(line, 1, format!("expected key=value, found `{part}`")))?;
        match key {
            "p" => {
                p = Some(value.parse::<u64>().map_err(|_| {
                    Error::parse(line, 1, format!("invalid prime `{value}`"))
                })?)
            }
            "a" => {
                a = Some(value.parse::<u32>().map_err(|_| {
                    Error::parse(line, 1, format!("invalid exponent `{value}`"))
                })?)
            }
            "flavor" => {
                flavor = Some(match value {
                    "pi" => Flavor::EquiChar,
                    "p" => Flavor::MixedChar,
                    _ => {
                        return Err(Error::parse(
                            line,
                            1,
                            format!("flavor must be `pi` or `p`, found `{value}`"),
                        ))
                    }
                })
            }
            _ => return Err(Error::parse(line, 1, format!("unknown ring key `{key}`"))),
        }
    }
    let p = p.ok_or_else(|| Error::parse(line, 1, "ring line is missing p="))?;
    let a = a.ok_or_else(|| Error::parse(line, 1, "ring line is missing a="))?;
    let flavor = flavor.ok_or_else(|| Error::parse(line, 1, "ring line is missing flavor="))?;
    RingSpec::new(p, a, flavor).map_err(|e| Error::parse(line, 1, e.to_string()))
}

fn validate_var_name(name: &str, line: u32) -> Result<()> {
    let mut chars = name.chars();
    let head_ok = chars.next().map_or(false, |c| c.is_ascii_alphabetic() || c == '_');
    if !head_ok || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::parse(line, 1, format!("invalid variable name `{name}`")));
    }
    if name == "pi" {
        return Err(Error::parse(line, 1, "`pi` is reserved for the uniformizer"));
    }
    if component_of(name).is_some() {
        return Err(Error::parse(
            line,
            1,
            format!("`{name}` is reserved for component markers"),
        ));
    }
    Ok(())
}

pub fn parse_instance_str(src: &str) -> Result<Instance> {
    let mut ring: Option<RingSpec> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut rank: Option<usize> = None;
    let mut order_line: Option<(Vec<String>, u32)> = None;
    let mut gens: Vec<Element> = Vec::new();
    let mut in_gens: Option<(RingSpec, TermOrder, Vec<String>)> = None;
    let mut gens_seen = 0usize;

    for (idx, raw) in src.lines().enumerate() {
        let lineno = (idx + 1) as u32;
        let text = strip_comment(raw).trim_end_matches('\r').trim();
        if text.is_empty() {
            continue;
        }
        if let Some((ring, order, names)) = &in_gens {
            gens_seen += 1;
            gens.push(parse_element_at(*ring, order, names, text, lineno)?);
            continue;
        }
        let parts: Vec<&str> = text.split_whitespace().collect();
        match parts[0] {
            "ring" => {
                if ring.is_some() {
                    return Err(Error::parse(lineno, 1, "duplicate ring line"));
                }
                ring = Some(parse_ring_line(&parts[1..], lineno)?);
            }
            "vars" => {
                if vars.is_some() {
                    return Err(Error::parse(lineno, 1, "duplicate vars line"));
                }
                let names: Vec<String> = parts[1..].iter().map(|s| s.to_string()).collect();
                if names.is_empty() {
                    return Err(Error::parse(lineno, 1, "vars line declares no variables"));
                }
                if names.len() > MAX_VARS {
                    return Err(Error::parse(
                        lineno,
                        1,
                        format!("too many variables ({} > {MAX_VARS})", names.len()),
                    ));
                }
                for (i, name) in names.iter().enumerate() {
                    validate_var_name(name, lineno)?;
                    if names[..i].contains(name) {
                        return Err(Error::parse(
                            lineno,
                            1,
                            format!("duplicate variable `{name}`"),
                        ));
                    }
                }
                vars = Some(names);
            }
            "rank" => {
                if rank.is_some() {
                    return Err(Error::parse(lineno, 1, "duplicate rank line"));
                }
                if parts.len() != 2 {
                    return Err(Error::parse(lineno, 1, "rank line takes exactly one integer"));
                }
                let r: usize = parts[1]
                    .parse()
                    .map_err(|_| Error::parse(lineno, 1, format!("invalid rank `{}`", parts[1])))?;
                if r == 0 || r > MAX_RANK {
                    return Err(Error::parse(
                        lineno,
                        1,
                        format!("rank must be between 1 and {MAX_RANK}"),
                    ));
                }
                rank = Some(r);
            }
            "order" => {
                if order_line.is_some() {
                    return Err(Error::parse(lineno, 1, "duplicate order line"));
                }
                order_line = Some((parts[1..].iter().map(|s| s.to_string()).collect(), lineno));
            }
            "gens:" => {
                let ring =
                    ring.ok_or_else(|| Error::parse(lineno, 1, "gens: before the ring line"))?;
                let names = vars
                    .take()
                    .ok_or_else(|| Error::parse(lineno, 1, "gens: before the vars line"))?;
                let order = build_order(order_line.take(), rank.unwrap_or(1))?;
                in_gens = Some((ring, order, names));
            }
            other => {
                return Err(Error::parse(
                    lineno,
                    1,
                    format!("unknown directive `{other}` (expected ring, vars, rank, order, or gens:)"),
                ));
            }
        }
    }

    let (ring, order, vars) = in_gens.ok_or_else(|| {
        Error::parse(src.lines().count() as u32 + 1, 1, "missing gens: section")
    })?;
    if gens_seen == 0 {
        return Err(Error::parse(
            src.lines().count() as u32 + 1,
            1,
            "no generators given after gens:",
        ));
    }
    let rank = order.rank();
    Ok(Instance { ring, order, vars, rank, gens })
}

/// Parse an order override like `deglex pot` or `lex top priority 2 1`.
pub fn parse_order_spec(spec: &str, rank: usize) -> Result<TermOrder> {
    let parts: Vec<String> = spec.split_whitespace().map(|s| s.to_string()).collect();
    build_order(Some((parts, 1)), rank)
}

fn build_order(spec: Option<(Vec<String>, u32)>, rank: usize) -> Result<TermOrder> {
    let Some((parts, line)) = spec else {
        return Ok(TermOrder::default_for_rank(rank));
    };
    if parts.len() < 2 {
        return Err(Error::parse(line, 1, "order line needs a monomial order and pot/top"));
    }
    let mono = match parts[0].as_str() {
        "lex" => MonoOrder::Lex,
        "deglex" => MonoOrder::DegLex,
        "degrevlex" => MonoOrder::DegRevLex,
        other => {
            return Err(Error::parse(
                line,
                1,
                format!("unknown monomial order `{other}` (expected lex, deglex, or degrevlex)"),
            ))
        }
    };
    let mode = match parts[1].as_str() {
        "pot" => ModuleMode::Pot,
        "top" => ModuleMode::Top,
        other => {
            return Err(Error::parse(
                line,
                1,
                format!("unknown module mode `{other}` (expected pot or top)"),
            ))
        }
    };
    let priority: Vec<usize> = if parts.len() > 2 {
        if parts[2] != "priority" {
            return Err(Error::parse(
                line,
                1,
                format!("expected `priority`, found `{}`", parts[2]),
            ));
        }
        let mut out = Vec::new();
        for p in &parts[3..] {
            let c: usize = p
                .parse()
                .map_err(|_| Error::parse(line, 1, format!("invalid component `{p}`")))?;
            if c == 0 || c > rank {
                return Err(Error::parse(
                    line,
                    1,
                    format!("priority component {c} out of range 1..={rank}"),
                ));
            }
            out.push(c - 1);
        }
        out
    } else {
        (0..rank).collect()
    };
    TermOrder::new(mono, mode, priority).map_err(|e| Error::parse(line, 1, e.to_string()))
}
