//! The `.san` model document format.
//!
//! ```text
//! san-format 1
//! description "two-state repairable unit"
//! param lambda = 0.1
//! param mu = 9 * lambda          # earlier/later parameters may be referenced
//! place Up = 1
//! place Down = 0
//! activity timed fail rate "lambda" {
//!   input "#Up >= 1" { Up -= 1 }
//!   case "1" { Down += 1 }
//! }
//! activity instant pick {
//!   input "#X >= 1" { X -= 1 }
//!   case "0.85" { A += 1 }
//!   case "0.15" { B += 1 }
//! }
//! reward up = "#Up >= 1"
//! ```
//!
//! Parameters are folded to numbers at load; [`serialize_model`] writes
//! them back as literals, so a round trip is a structural identity.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::expr::{ExprParser, Lexer, Spanned, SyntaxError, Token};
use crate::expr::{EvalError, Expr, MapEnv};
use crate::san::{
    validate, Activity, ActivityKind, CaseSpec, Effect, EffectOp, InputSpec, Parameter, Place,
    RewardPredicate, SanModel,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DocumentError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("semantic error:\n  {}", .0.join("\n  "))]
    Semantic(Vec<String>),
}

struct DocParser<'t> {
    p: ExprParser<'t>,
}

impl<'t> DocParser<'t> {
    fn ident(&mut self, what: &str) -> Result<String, SyntaxError> {
        let t = self.p.peek();
        match &t.token {
            Token::Ident(s) => {
                self.p.advance();
                Ok(s.clone())
            }
            _ => Err(SyntaxError::at(t, &[what])),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.p.eat_keyword(kw) {
            Ok(())
        } else {
            Err(SyntaxError::at(self.p.peek(), &[&format!("`{kw}`")]))
        }
    }

    fn string(&mut self) -> Result<(&'t Spanned, String), SyntaxError> {
        let t = self.p.peek();
        match &t.token {
            Token::Str(s) => {
                self.p.advance();
                Ok((t, s.clone()))
            }
            _ => Err(SyntaxError::at(t, &["quoted string"])),
        }
    }

    /// A quoted expression, with error positions mapped into the document.
    fn quoted_expr(&mut self) -> Result<Expr, SyntaxError> {
        let (tok, text) = self.string()?;
        let tokens = Lexer::with_origin(&text, tok.line, tok.column + 1)
            .tokenize()
            .map_err(SyntaxError::lexical)?;
        let mut inner = ExprParser::new(&tokens);
        let e = inner.parse_expr()?;
        inner.expect_eof()?;
        Ok(e)
    }

    fn quoted_or_bare_expr(&mut self) -> Result<Expr, SyntaxError> {
        if matches!(self.p.peek().token, Token::Str(_)) {
            self.quoted_expr()
        } else {
            self.p.parse_expr()
        }
    }

    fn effects(&mut self) -> Result<Vec<Effect>, SyntaxError> {
        self.p.expect(&Token::LBrace, "`{`")?;
        let mut out = Vec::new();
        loop {
            if self.p.eat(&Token::RBrace) {
                return Ok(out);
            }
            let place = self.ident("place name or `}`")?;
            let op = match self.p.advance() {
                Spanned {
                    token: Token::Assign,
                    ..
                } => EffectOp::Set,
                Spanned {
                    token: Token::PlusAssign,
                    ..
                } => EffectOp::Add,
                Spanned {
                    token: Token::MinusAssign,
                    ..
                } => EffectOp::Sub,
                t => return Err(SyntaxError::at(t, &["`=`", "`+=`", "`-=`"])),
            };
            let value = self.p.parse_expr()?;
            self.p.eat(&Token::Semi);
            out.push(Effect { place, op, value });
        }
    }

    fn activity_body(&mut self, mut a: Activity) -> Result<Activity, SyntaxError> {
        self.p.expect(&Token::LBrace, "`{`")?;
        if self.p.eat_keyword("input") {
            let predicate = if matches!(self.p.peek().token, Token::Str(_)) {
                self.quoted_expr()?
            } else {
                Expr::Num(1.0)
            };
            let effects = self.effects()?;
            a.input = InputSpec { predicate, effects };
        }
        loop {
            if self.p.eat(&Token::RBrace) {
                return Ok(a);
            }
            if !self.p.eat_keyword("case") {
                return Err(SyntaxError::at(self.p.peek(), &["`case`", "`}`"]));
            }
            let probability = self.quoted_or_bare_expr()?;
            let effects = self.effects()?;
            a.cases.push(CaseSpec {
                probability,
                effects,
            });
        }
    }
}

/// Raw parameter declarations before folding.
struct ParamDecl {
    name: String,
    value: Expr,
}

/// Parse a `.san` document into a validated model.
pub fn parse_model(doc: &str) -> Result<SanModel, DocumentError> {
    let tokens = Lexer::new(doc).tokenize().map_err(SyntaxError::lexical)?;
    let mut d = DocParser {
        p: ExprParser::new(&tokens),
    };

    d.keyword("san")?;
    d.p.expect(&Token::Minus, "`-`")?;
    d.keyword("format")?;
    let vt = d.p.advance();
    match vt.token {
        Token::Num(v) if v == f64::from(FORMAT_VERSION) => {}
        _ => {
            return Err(SyntaxError::at(vt, &[&format!("format version {FORMAT_VERSION}")]).into())
        }
    }

    let mut model = SanModel::default();
    let mut params = Vec::new();
    loop {
        let t = d.p.peek();
        let kw = match &t.token {
            Token::Eof => break,
            Token::Ident(s) => s.as_str(),
            _ => {
                return Err(SyntaxError::at(
                    t,
                    &["`param`", "`place`", "`activity`", "`reward`", "`description`"],
                )
                .into())
            }
        };
        match kw {
            "description" => {
                d.p.advance();
                model.description = d.string()?.1;
            }
            "param" => {
                d.p.advance();
                let name = d.ident("parameter name")?;
                d.p.expect(&Token::Assign, "`=`")?;
                let value = d.p.parse_expr()?;
                params.push(ParamDecl { name, value });
            }
            "place" => {
                d.p.advance();
                let name = d.ident("place name")?;
                d.p.expect(&Token::Assign, "`=`")?;
                let neg = d.p.eat(&Token::Minus);
                let nt = d.p.advance();
                let initial_tokens = match nt.token {
                    Token::Num(v) if v.fract() == 0.0 && v.abs() < 1e15 => v as i64,
                    _ => return Err(SyntaxError::at(nt, &["integer"]).into()),
                };
                model.places.push(Place {
                    name,
                    initial_tokens: if neg { -initial_tokens } else { initial_tokens },
                });
            }
            "activity" => {
                d.p.advance();
                let a = if d.p.eat_keyword("timed") {
                    let name = d.ident("activity name")?;
                    d.keyword("rate")?;
                    let rate = d.quoted_expr()?;
                    Activity::timed(&name, rate)
                } else if d.p.eat_keyword("instant") {
                    Activity::instantaneous(&d.ident("activity name")?)
                } else {
                    return Err(SyntaxError::at(d.p.peek(), &["`timed`", "`instant`"]).into());
                };
                model.activities.push(d.activity_body(a)?);
            }
            "reward" => {
                d.p.advance();
                let name = d.ident("reward name")?;
                d.p.expect(&Token::Assign, "`=`")?;
                let predicate = d.quoted_expr()?;
                model.rewards.push(RewardPredicate { name, predicate });
            }
            _ => {
                return Err(SyntaxError::at(
                    t,
                    &["`param`", "`place`", "`activity`", "`reward`", "`description`"],
                )
                .into())
            }
        }
    }

    model.parameters = fold_parameters(params)?;
    let diags = validate(&model);
    if !diags.is_empty() {
        return Err(DocumentError::Semantic(
            diags.iter().map(|d| d.to_string()).collect(),
        ));
    }
    Ok(model)
}

/// Evaluate parameter definitions in dependency order, keeping declaration
/// order in the result.
fn fold_parameters(decls: Vec<ParamDecl>) -> Result<Vec<Parameter>, DocumentError> {
    let mut errors = Vec::new();
    let mut seen = HashMap::new();
    for d in &decls {
        if seen.insert(d.name.as_str(), ()).is_some() {
            errors.push(format!("duplicate parameter name `{}`", d.name));
        }
        if let Some(p) = d.value.places().into_iter().next() {
            errors.push(format!(
                "parameter `{}` references place `#{p}`; parameters must be constant",
                d.name
            ));
        }
    }
    if !errors.is_empty() {
        return Err(DocumentError::Semantic(errors));
    }

    let mut env = MapEnv::new();
    let mut values: Vec<Option<f64>> = vec![None; decls.len()];
    loop {
        let mut progress = false;
        for (i, d) in decls.iter().enumerate() {
            if values[i].is_some() || d.value.params().iter().any(|n| env.params.get(*n).is_none())
            {
                continue;
            }
            let v = d.value.eval(&env).map_err(|e| {
                DocumentError::Semantic(vec![format!("parameter `{}`: {e}", d.name)])
            })?;
            env.params.insert(d.name.clone(), v);
            values[i] = Some(v);
            progress = true;
        }
        if !progress {
            break;
        }
    }
    for (i, d) in decls.iter().enumerate() {
        if values[i].is_none() {
            let missing: Vec<&str> = d
                .value
                .params()
                .into_iter()
                .filter(|n| !decls.iter().any(|o| o.name == *n))
                .collect();
            errors.push(match missing.first() {
                Some(n) => format!(
                    "parameter `{}`: {}",
                    d.name,
                    EvalError::UnknownIdentifier(n.to_string())
                ),
                None => format!("parameter `{}` is defined cyclically", d.name),
            });
        }
    }
    if !errors.is_empty() {
        return Err(DocumentError::Semantic(errors));
    }
    Ok(decls
        .into_iter()
        .zip(values)
        .map(|(d, v)| Parameter {
            name: d.name,
            value: v.unwrap_or_default(),
        })
        .collect())
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn effects(effs: &[Effect]) -> String {
    if effs.is_empty() {
        return "{ }".into();
    }
    let body: Vec<String> = effs.iter().map(|e| e.to_string()).collect();
    format!("{{ {}; }}", body.join("; "))
}

/// Render a model as a `.san` document.
pub fn serialize_model(model: &SanModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "san-format {FORMAT_VERSION}");
    if !model.description.is_empty() {
        let _ = writeln!(out, "description {}", quote(&model.description));
    }
    out.push('\n');
    for p in &model.parameters {
        let _ = writeln!(out, "param {} = {}", p.name, Expr::Num(p.value));
    }
    if !model.parameters.is_empty() {
        out.push('\n');
    }
    for p in &model.places {
        let _ = writeln!(out, "place {} = {}", p.name, p.initial_tokens);
    }
    for a in &model.activities {
        out.push('\n');
        match &a.kind {
            ActivityKind::Timed { rate } => {
                let _ = writeln!(
                    out,
                    "activity timed {} rate {} {{",
                    a.name,
                    quote(&rate.to_string())
                );
            }
            ActivityKind::Instantaneous => {
                let _ = writeln!(out, "activity instant {} {{", a.name);
            }
        }
        let _ = writeln!(
            out,
            "  input {} {}",
            quote(&a.input.predicate.to_string()),
            effects(&a.input.effects)
        );
        for c in &a.cases {
            let _ = writeln!(
                out,
                "  case {} {}",
                quote(&c.probability.to_string()),
                effects(&c.effects)
            );
        }
        out.push_str("}\n");
    }
    if !model.rewards.is_empty() {
        out.push('\n');
    }
    for r in &model.rewards {
        let _ = writeln!(
            out,
            "reward {} = {}",
            r.name,
            quote(&r.predicate.to_string())
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::san::tests::two_state;

    const TWO_STATE: &str = r##"san-format 1
param lambda = 0.1
param mu = 9 * lambda
place Up = 1
place Down = 0
activity timed fail rate "lambda" { input "#Up >= 1" { Up -= 1 } case 1 { Down += 1 } }
activity timed repair rate "mu" { input "#Down >= 1" { Down -= 1 } case "1" { Up += 1 } }
reward up = "#Up >= 1"
"##;

    #[test]
    fn parses_two_state_document() {
        let m = parse_model(TWO_STATE).unwrap();
        assert_eq!(m.places.len(), 2);
        assert_eq!(m.activities.len(), 2);
        assert!((m.param_value("mu").unwrap() - 0.9).abs() < 1e-15);
        assert_eq!(m.rewards[0].name, "up");
    }

    #[test]
    fn round_trip_two_state() {
        let m = two_state(0.1, 0.9);
        let text = serialize_model(&m);
        assert_eq!(parse_model(&text).unwrap(), m);
    }

    #[test]
    fn parameters_resolve_in_any_order() {
        let doc = "san-format 1\nparam b = a * 2\nparam a = 3\nplace P = 1\n";
        let m = parse_model(doc).unwrap();
        assert_eq!(m.param_value("b"), Some(6.0));
        assert_eq!(m.parameters[0].name, "b");
    }

    #[test]
    fn cyclic_and_unknown_parameters() {
        let doc = "san-format 1\nparam a = b\nparam b = a\n";
        let err = parse_model(doc).unwrap_err();
        assert!(err.to_string().contains("cyclically"), "{err}");
        let err = parse_model("san-format 1\nparam a = zz\n").unwrap_err();
        assert!(err.to_string().contains("zz"), "{err}");
        let err = parse_model("san-format 1\nplace P = 1\nparam a = #P\n").unwrap_err();
        assert!(matches!(err, DocumentError::Semantic(_)));
    }

    #[test]
    fn undeclared_place_is_semantic_error() {
        let doc = r##"san-format 1
place Up = 1
activity timed fail rate "1" { input "#Up >= 1" { Up -= 1 } case 1 { Ghost += 1 } }
"##;
        let err = parse_model(doc).unwrap_err();
        let DocumentError::Semantic(msgs) = err else {
            panic!("expected semantic error")
        };
        assert!(msgs[0].contains("Ghost"));
    }

    #[test]
    fn bad_probability_is_semantic_error() {
        let doc = r##"san-format 1
place A = 1
activity instant x { input "#A >= 1" { A -= 1 } case 0.9 { A += 1 } case 0.2 { A += 1 } }
"##;
        let err = parse_model(doc).unwrap_err();
        assert!(err.to_string().contains("sum to 1.1"), "{err}");
    }

    #[test]
    fn syntax_error_inside_quoted_expression_has_document_position() {
        let doc = "san-format 1\nplace A = 1\nreward up = \"#A >= * 1\"\n";
        let DocumentError::Syntax(err) = parse_model(doc).unwrap_err() else {
            panic!("expected syntax error")
        };
        assert_eq!((err.line, err.column), (3, 20));
    }

    #[test]
    fn header_is_required() {
        assert!(parse_model("place A = 1\n").is_err());
        assert!(parse_model("san-format 2\nplace A = 1\n").is_err());
        assert!(parse_model("san-format 1\n# just a comment\n").is_ok());
    }

    #[test]
    fn description_is_escaped() {
        let mut m = two_state(0.1, 0.9);
        m.description = "a \"quoted\" \\ line\nand another".into();
        assert_eq!(parse_model(&serialize_model(&m)).unwrap(), m);
    }

    #[test]
    fn negative_tokens_in_document_are_reported() {
        let err = parse_model("san-format 1\nplace A = -1\n").unwrap_err();
        assert!(err.to_string().contains("negative initial tokens"), "{err}");
    }

    proptest::proptest! {
        #[test]
        fn document_parser_never_panics(s in "\\PC{0,200}") {
            let _ = parse_model(&s);
            let _ = parse_model(&format!("san-format 1\n{s}"));
        }
    }
}
