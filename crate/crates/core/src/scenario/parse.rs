//! Parser and printer for scenario scripts.

use std::fmt::Write as _;

use super::{Directive, ExpectKey, Located, ScenarioScript};
use crate::blocks::{BlockKind, ExternalBlock, ExternalTorus, Geometry};
use crate::group::{AbelianInvariants, GroupTag};
use crate::invariants::{parse_label, TriState, UNCLASSIFIED};
use crate::surgery::{Assertion, SurgerySpec};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _text: &'a str,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line,
            _text: text,
        }
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: pos + 1,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|&c| f(c)) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// A state or keyword name: `[A-Za-z_][A-Za-z0-9_]*`.
    fn ident(&mut self, what: &str) -> PResult<String> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == '_' => {
                Ok(self.take_while(|c| c.is_ascii_alphanumeric() || c == '_'))
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    /// A torus id: `[A-Za-z0-9_.]+`.
    fn torus_id(&mut self) -> PResult<String> {
        self.skip_ws();
        let id = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.');
        if id.is_empty() {
            Err(self.error("expected a torus id"))
        } else {
            Ok(id)
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn int(&mut self) -> PResult<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| self.error_at(start, format!("integer `{text}` out of range")))
    }

    fn rest(&mut self) -> String {
        self.skip_ws();
        let s: String = self.chars[self.pos..].iter().collect();
        self.pos = self.chars.len();
        s.trim_end().to_string()
    }

    fn finish(&mut self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }
}

fn unquote(s: &str) -> String {
    let t = s.trim();
    if t.len() >= 2 && t.starts_with('"') && t.ends_with('"') {
        t[1..t.len() - 1].to_string()
    } else {
        t.to_string()
    }
}

/// Checks an expected value against the syntax of its key.
fn validate_expectation(key: ExpectKey, value: &str) -> Result<(), String> {
    let ok = match key {
        ExpectKey::Pi1 => GroupTag::parse(value).is_some(),
        ExpectKey::H1 => AbelianInvariants::parse(value).is_some(),
        ExpectKey::Euler | ExpectKey::Sigma => value.parse::<i64>().is_ok(),
        ExpectKey::B1 | ExpectKey::B2 | ExpectKey::Loci => value.parse::<u32>().is_ok(),
        ExpectKey::Spin | ExpectKey::AlmostComplex => TriState::parse(value).is_some(),
        ExpectKey::Twist => matches!(value, "twisted" | "untwisted"),
        ExpectKey::Parity => matches!(value, "even" | "odd"),
        ExpectKey::Structure => matches!(value, "symplectic" | "twisted-gc" | "unknown"),
        ExpectKey::Homeo => {
            if value == UNCLASSIFIED {
                true
            } else {
                return parse_label(value).map(|_| ()).map_err(|e| e.to_string());
            }
        }
    };
    if ok {
        Ok(())
    } else {
        Err(format!("`{value}` is not a valid value for `{}`", key.name()))
    }
}

fn parse_block_kind(c: &mut Cursor) -> PResult<BlockKind> {
    let start = {
        c.skip_ws();
        c.pos
    };
    let kind = c.ident("a block kind")?;
    let mut args: Vec<(usize, String)> = Vec::new();
    if c.peek() == Some('(') {
        c.pos += 1;
        if c.peek() == Some(')') {
            c.pos += 1;
        } else {
            loop {
                c.skip_ws();
                let at = c.pos;
                let arg = c.take_while(|ch| ch.is_ascii_alphanumeric() || ch == '_');
                if arg.is_empty() {
                    return Err(c.error("expected a block argument"));
                }
                args.push((at, arg));
                match c.peek() {
                    Some(',') => c.pos += 1,
                    Some(')') => {
                        c.pos += 1;
                        break;
                    }
                    _ => return Err(c.error("expected `,` or `)`")),
                }
            }
        }
    }
    let num = |c: &Cursor, (at, s): &(usize, String)| -> PResult<u32> {
        s.parse().map_err(|_| c.error_at(*at, format!("expected a genus, found `{s}`")))
    };
    let arity = |n: usize| -> PResult<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(c.error_at(start, format!("`{kind}` takes {n} argument(s), found {}", args.len())))
        }
    };
    match kind.as_str() {
        "product_surfaces" => {
            let twelve = match args.len() {
                2 => false,
                3 if args[2].1 == "twelve" => true,
                3 => return Err(c.error_at(args[2].0, format!("unknown variant `{}`", args[2].1))),
                n => return Err(c.error_at(start, format!("`product_surfaces` takes 2 or 3 arguments, found {n}"))),
            };
            Ok(BlockKind::ProductSurfaces {
                g: num(c, &args[0])?,
                h: num(c, &args[1])?,
                twelve,
            })
        }
        "t2_x_sigma" => {
            arity(1)?;
            Ok(BlockKind::T2xSigma { g: num(c, &args[0])? })
        }
        "four_torus" => {
            arity(0)?;
            Ok(BlockKind::FourTorus)
        }
        "t2_x_s2" => {
            arity(0)?;
            Ok(BlockKind::T2xS2)
        }
        _ => Err(c.error_at(start, format!("unknown block kind `{kind}`"))),
    }
}

fn parse_external_line(c: &mut Cursor, decl: &mut ExternalBlock) -> PResult<()> {
    let key = c.ident("an external block field")?;
    let key_pos = c.pos - key.len();
    let count = |c: &mut Cursor| -> PResult<u32> {
        let at = {
            c.skip_ws();
            c.pos
        };
        let v = c.int()?;
        u32::try_from(v).map_err(|_| c.error_at(at, "expected a nonnegative integer"))
    };
    match key.as_str() {
        "gens" => {
            while !c.at_end() {
                if c.peek() == Some(',') {
                    c.pos += 1;
                    continue;
                }
                let at = c.pos;
                let g = c.take_while(|ch| ch.is_ascii_alphanumeric() || ch == '_' || ch == '.');
                if g.is_empty() || !g.starts_with(|ch: char| ch.is_ascii_alphabetic() || ch == '_') {
                    return Err(c.error_at(at, "expected a generator name"));
                }
                decl.generators.push(g);
            }
        }
        "rel" => {
            let r = c.rest();
            if r.is_empty() {
                return Err(c.error("expected a relator word"));
            }
            decl.relators.push(r);
        }
        "torus" => {
            let id = c.torus_id()?;
            let geo_at = {
                c.skip_ws();
                c.pos
            };
            let geometry = match c.ident("a geometry tag")?.as_str() {
                "symplectic" => Geometry::Symplectic,
                "lagrangian" => Geometry::Lagrangian,
                other => return Err(c.error_at(geo_at, format!("unknown geometry `{other}`"))),
            };
            let mut t = ExternalTorus {
                id,
                geometry,
                genus: 1,
                essential: true,
                m: String::new(),
                l: String::new(),
                mu: String::new(),
            };
            while !c.at_end() {
                let at = c.pos;
                let field = c.ident("a torus field")?;
                if field == "inessential" {
                    t.essential = false;
                    continue;
                }
                c.expect('=')?;
                if field == "genus" {
                    t.genus = count(c)?;
                    continue;
                }
                c.skip_ws();
                let w = c.take_while(|ch| !ch.is_whitespace());
                if w.is_empty() {
                    return Err(c.error("expected a word"));
                }
                match field.as_str() {
                    "m" => t.m = w,
                    "l" => t.l = w,
                    "mu" => t.mu = w,
                    _ => return Err(c.error_at(at, format!("unknown torus field `{field}`"))),
                }
            }
            if t.m.is_empty() || t.l.is_empty() || t.mu.is_empty() {
                return Err(c.error_at(key_pos, "torus needs m=, l= and mu="));
            }
            decl.tori.push(t);
        }
        "euler" => decl.euler = Some(c.int()?),
        "signature" => decl.signature = Some(c.int()?),
        "hyperbolic" => decl.hyperbolic = Some(count(c)?),
        "plus_one" => decl.plus_one = Some(count(c)?),
        "minus_one" => decl.minus_one = Some(count(c)?),
        "spin" => {
            let at = c.pos;
            let v = c.ident("yes, no or unknown")?;
            decl.spin = Some(TriState::parse(&v).ok_or_else(|| c.error_at(at, format!("bad spin value `{v}`")))?);
        }
        "structure" => {
            let at = c.pos;
            decl.symplectic = match c.ident("symplectic or unknown")?.as_str() {
                "symplectic" => true,
                "unknown" => false,
                other => return Err(c.error_at(at, format!("bad structure `{other}`"))),
            };
        }
        "trust" => decl.trust.push(unquote(&c.rest())),
        _ => return Err(c.error_at(key_pos, format!("unknown external block field `{key}`"))),
    }
    c.finish()
}

fn parse_tuple(c: &mut Cursor) -> PResult<(i32, i32, i32)> {
    c.skip_ws();
    let open = c.pos;
    c.expect('(')?;
    let mut vals = Vec::new();
    if c.peek() != Some(')') {
        loop {
            let at = {
                c.skip_ws();
                c.pos
            };
            let v = c.int()?;
            vals.push(i32::try_from(v).map_err(|_| c.error_at(at, "coefficient out of range"))?);
            match c.peek() {
                Some(',') => c.pos += 1,
                Some(')') => break,
                _ => return Err(c.error("expected `,` or `)` in surgery coefficients")),
            }
        }
    }
    c.expect(')')?;
    match vals.as_slice() {
        &[p, q, r] => Ok((p, q, r)),
        _ => Err(c.error_at(
            open,
            format!("surgery coefficients need 3 entries (p,q,r), found {}", vals.len()),
        )),
    }
}

fn parse_qualified_torus(c: &mut Cursor) -> PResult<(String, String)> {
    let state = c.ident("a state name")?;
    c.expect('.')?;
    let id = c.torus_id()?;
    Ok((state, id))
}

/// Splits `text` at commas outside brackets and parentheses.
fn split_top_level(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

fn parse_ident_map(c: &mut Cursor) -> PResult<Vec<(String, String)>> {
    c.expect('{')?;
    let body_start = c.pos;
    let close = c.chars[body_start..]
        .iter()
        .rposition(|&ch| ch == '}')
        .map(|i| body_start + i)
        .ok_or_else(|| c.error("expected `}` closing the identification"))?;
    let body: String = c.chars[body_start..close].iter().collect();
    let mut map = Vec::new();
    for (offset, part) in split_top_level(&body) {
        let at = body_start + body[..offset].chars().count();
        if part.trim().is_empty() {
            return Err(c.error_at(at, "empty identification entry"));
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| c.error_at(at, format!("expected `generator=word`, found `{}`", part.trim())))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(c.error_at(at, format!("expected `generator=word`, found `{}`", part.trim())));
        }
        map.push((k.to_string(), v.to_string()));
    }
    c.pos = close + 1;
    c.finish()?;
    Ok(map)
}

fn parse_line(c: &mut Cursor) -> PResult<Option<Directive>> {
    let start = {
        c.skip_ws();
        c.pos
    };
    let word = c.ident("a directive")?;
    let d = match word.as_str() {
        "block" => {
            let name = c.ident("a state name")?;
            c.expect('=')?;
            let kind = parse_block_kind(c)?;
            c.finish()?;
            Directive::Block { name, kind }
        }
        "perturb" => {
            let name = c.ident("a state name")?;
            let bracketed = c.peek() == Some('[');
            if bracketed {
                c.pos += 1;
            }
            let mut tori = Vec::new();
            loop {
                match c.peek() {
                    Some(',') => c.pos += 1,
                    Some(']') if bracketed => {
                        c.pos += 1;
                        break;
                    }
                    None if !bracketed => break,
                    None => return Err(c.error("expected `]`")),
                    _ => tori.push(c.torus_id()?),
                }
            }
            c.finish()?;
            Directive::Perturb { name, tori }
        }
        "surgery" => {
            let name = c.ident("a state name")?;
            let torus = c.torus_id()?;
            let (p, q, r) = parse_tuple(c)?;
            c.finish()?;
            Directive::Surgery {
                name,
                spec: SurgerySpec { torus, p, q, r },
            }
        }
        "sum" => {
            let name = c.ident("a state name")?;
            c.expect('=')?;
            let (a, ta) = parse_qualified_torus(c)?;
            c.expect('~')?;
            let (b, tb) = parse_qualified_torus(c)?;
            let ident = parse_ident_map(c)?;
            Directive::Sum {
                name,
                a,
                ta,
                b,
                tb,
                ident,
            }
        }
        "blowup" => {
            let name = c.ident("a state name")?;
            let at = {
                c.skip_ws();
                c.pos
            };
            let k = c.int()?;
            let k = u32::try_from(k).map_err(|_| c.error_at(at, "blow-up count must be nonnegative"))?;
            c.finish()?;
            Directive::BlowUp { name, k }
        }
        "blowdown" => {
            let name = c.ident("a state name")?;
            c.finish()?;
            Directive::BlowDown { name }
        }
        "assert" => {
            let name = c.ident("a state name")?;
            let at = {
                c.skip_ws();
                c.pos
            };
            let assertion = match c.ident("an assertion")?.as_str() {
                "sphere_square_zero" => Assertion::SphereSquareZero,
                "sphere_brane" => Assertion::SphereBrane,
                "claimed_homeo" => {
                    let vat = {
                        c.skip_ws();
                        c.pos
                    };
                    let label = unquote(&c.rest());
                    parse_label(&label).map_err(|e| c.error_at(vat, e.to_string()))?;
                    Assertion::ClaimedHomeo(label)
                }
                other => return Err(c.error_at(at, format!("unknown assertion `{other}`"))),
            };
            c.finish()?;
            Directive::Assert { name, assertion }
        }
        "expect" => {
            let name = c.ident("a state name")?;
            let at = {
                c.skip_ws();
                c.pos
            };
            let key_text = c.take_while(|ch| ch.is_ascii_alphanumeric() || ch == '_');
            let key = ExpectKey::from_name(&key_text)
                .ok_or_else(|| c.error_at(at, format!("unknown expectation key `{key_text}`")))?;
            let vat = {
                c.skip_ws();
                c.pos
            };
            let value = unquote(&c.rest());
            if value.is_empty() {
                return Err(c.error_at(vat, "expected a value"));
            }
            validate_expectation(key, &value).map_err(|m| c.error_at(vat, m))?;
            Directive::Expect { name, key, value }
        }
        _ => return Err(c.error_at(start, format!("unknown directive `{word}`"))),
    };
    Ok(Some(d))
}

/// Parses a script. Lines whose first non-blank character is `#` are
/// comments.
pub fn parse_scenario(name: &str, text: &str) -> Result<ScenarioScript, ParseError> {
    let mut directives = Vec::new();
    let mut lines = text.lines().enumerate();
    while let Some((i, raw)) = lines.next() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut c = Cursor::new(raw, line);
        // `block NAME = external {` opens a multi-line declaration.
        if let Some(name) = external_header(raw) {
            let mut decl = ExternalBlock::default();
            let mut closed = false;
            for (j, body) in lines.by_ref() {
                let t = body.trim();
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                if t == "}" {
                    closed = true;
                    break;
                }
                parse_external_line(&mut Cursor::new(body, j + 1), &mut decl)?;
            }
            if !closed {
                return Err(ParseError {
                    line,
                    column: raw.len(),
                    message: "external block is not closed with `}`".into(),
                });
            }
            directives.push(Located {
                line,
                directive: Directive::Block {
                    name,
                    kind: BlockKind::External(decl),
                },
            });
            continue;
        }
        if let Some(d) = parse_line(&mut c)? {
            directives.push(Located { line, directive: d });
        }
    }
    Ok(ScenarioScript {
        name: name.to_string(),
        directives,
    })
}

fn external_header(raw: &str) -> Option<String> {
    let rest = raw.trim().strip_prefix("block")?;
    let (name, kind) = rest.split_once('=')?;
    let name = name.trim();
    let kind: String = kind.split_whitespace().collect();
    (kind == "external{" && !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'))
        .then(|| name.to_string())
}

fn print_external(out: &mut String, name: &str, d: &ExternalBlock) {
    let _ = writeln!(out, "block {name} = external {{");
    let _ = writeln!(out, "  gens {}", d.generators.join(" "));
    for r in &d.relators {
        let _ = writeln!(out, "  rel {r}");
    }
    for t in &d.tori {
        let _ = writeln!(
            out,
            "  torus {} {} genus={}{} m={} l={} mu={}",
            t.id,
            t.geometry,
            t.genus,
            if t.essential { "" } else { " inessential" },
            t.m,
            t.l,
            t.mu
        );
    }
    let fields = [
        ("euler", d.euler),
        ("signature", d.signature),
        ("hyperbolic", d.hyperbolic.map(i64::from)),
        ("plus_one", d.plus_one.map(i64::from)),
        ("minus_one", d.minus_one.map(i64::from)),
    ];
    for (k, v) in fields {
        if let Some(v) = v {
            let _ = writeln!(out, "  {k} {v}");
        }
    }
    if let Some(s) = d.spin {
        let _ = writeln!(out, "  spin {s}");
    }
    let _ = writeln!(out, "  structure {}", if d.symplectic { "symplectic" } else { "unknown" });
    for t in &d.trust {
        let _ = writeln!(out, "  trust {t}");
    }
    out.push_str("}\n");
}

/// Prints a script in canonical form; parsing the output gives back the
/// same directives.
pub fn print_scenario(s: &ScenarioScript) -> String {
    let mut out = String::new();
    for Located { directive, .. } in &s.directives {
        match directive {
            Directive::Block {
                name,
                kind: BlockKind::External(decl),
            } => print_external(&mut out, name, decl),
            Directive::Block { name, kind } => {
                let _ = writeln!(out, "block {name} = {kind}");
            }
            Directive::Perturb { name, tori } => {
                let _ = writeln!(out, "perturb {name} [{}]", tori.join(", "));
            }
            Directive::Surgery { name, spec } => {
                let _ = writeln!(out, "surgery {name} {} ({}, {}, {})", spec.torus, spec.p, spec.q, spec.r);
            }
            Directive::Sum {
                name,
                a,
                ta,
                b,
                tb,
                ident,
            } => {
                let map: Vec<String> = ident.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(out, "sum {name} = {a}.{ta} ~ {b}.{tb} {{{}}}", map.join(", "));
            }
            Directive::BlowUp { name, k } => {
                let _ = writeln!(out, "blowup {name} {k}");
            }
            Directive::BlowDown { name } => {
                let _ = writeln!(out, "blowdown {name}");
            }
            Directive::Assert { name, assertion } => {
                let _ = writeln!(out, "assert {name} {assertion}");
            }
            Directive::Expect { name, key, value } => {
                let _ = writeln!(out, "expect {name} {} {value}", key.name());
            }
        }
    }
    out
}
