//! Presentations `vars | relations ; nil k` of Weil algebras.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::AlgebraError;
use crate::parse::{ast_to_polynomial, ParseError, ParseErrorKind, Parser, Token};
use crate::poly::Polynomial;
use crate::rational::to_compact_string;

/// Generators, relations and a nilpotency bound `k`: every monomial of total
/// degree `>= k` is declared to lie in the ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    vars: Vec<String>,
    relations: Vec<Polynomial>,
    nilpotency_bound: u32,
}

impl Presentation {
    pub fn new(vars: Vec<String>, relations: Vec<Polynomial>, nilpotency_bound: u32) -> Result<Self, AlgebraError> {
        let invalid = |msg: String| Err(AlgebraError::InvalidPresentation(msg));
        if nilpotency_bound == 0 {
            return invalid("nilpotency bound must be at least 1".into());
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return invalid(format!("duplicate variable '{v}'"));
            }
        }
        if relations.is_empty() && !vars.is_empty() {
            return invalid("relation list may be empty only when there are no variables".into());
        }
        for r in &relations {
            if r.nvars() != vars.len() {
                return invalid("relation uses a different variable count".into());
            }
            if !r.constant_term().is_zero() {
                return invalid(format!("relation {} has nonzero constant term", r.display(&vars)));
            }
        }
        Ok(Presentation { vars, relations, nilpotency_bound })
    }

    /// The presentation of ℝ itself: no generators.
    pub fn real_line() -> Self {
        Presentation { vars: Vec::new(), relations: Vec::new(), nilpotency_bound: 1 }
    }

    /// Parses `vars | relations ; nil k`, e.g. `x,y | x^2, y^2, x*y ; nil 2`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut p = Parser::new(text)?;
        let mut vars: Vec<String> = Vec::new();
        if *p.peek() != Token::Pipe {
            loop {
                let pos = p.pos();
                match p.next().0 {
                    Token::Ident(name) => {
                        if vars.contains(&name) {
                            return Err(ParseError::new(pos, ParseErrorKind::DuplicateVariable(name)));
                        }
                        vars.push(name);
                    }
                    _ => {
                        return Err(ParseError::new(
                            pos,
                            ParseErrorKind::Unexpected { expected: "a variable name".into(), found: "other".into() },
                        ))
                    }
                }
                if !p.eat(&Token::Comma) {
                    break;
                }
            }
        }
        p.expect(&Token::Pipe)?;
        let mut relations = Vec::new();
        if *p.peek() != Token::Semicolon {
            loop {
                let start = p.pos();
                let ast = p.expr()?;
                let poly = ast_to_polynomial(&ast, &vars)?;
                let c = poly.constant_term();
                if !c.is_zero() {
                    return Err(ParseError::new(start, ParseErrorKind::NonzeroConstant(to_compact_string(&c))));
                }
                relations.push(poly);
                if !p.eat(&Token::Comma) {
                    break;
                }
            }
        }
        let semicolon = p.expect(&Token::Semicolon)?;
        if relations.is_empty() && !vars.is_empty() {
            return Err(ParseError::new(
                semicolon,
                ParseErrorKind::Invalid("relation list may be empty only when there are no variables".into()),
            ));
        }
        match p.peek().clone() {
            Token::Ident(kw) if kw == "nil" => {
                p.next();
            }
            _ => return Err(p.unexpected("'nil'")),
        }
        let (token, pos) = p.next();
        let bound = match token {
            Token::Number(text) => text.parse::<u32>().ok().filter(|&k| k >= 1),
            _ => None,
        }
        .ok_or_else(|| {
            ParseError::new(pos, ParseErrorKind::Invalid("nilpotency bound must be a positive integer".into()))
        })?;
        p.expect_eof()?;
        Ok(Presentation { vars, relations, nilpotency_bound: bound })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn nilpotency_bound(&self) -> u32 {
        self.nilpotency_bound
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.display(&self.vars)).collect()
    }

    /// Same generators and bound, relations in a different order.
    pub fn with_relations(&self, relations: Vec<Polynomial>) -> Result<Self, AlgebraError> {
        Presentation::new(self.vars.clone(), relations, self.nilpotency_bound)
    }

    /// Same relations with renamed generators.
    pub fn renamed(&self, vars: Vec<String>) -> Result<Self, AlgebraError> {
        if vars.len() != self.vars.len() {
            return Err(AlgebraError::InvalidPresentation("rename changes the generator count".into()));
        }
        Presentation::new(vars, self.relations.clone(), self.nilpotency_bound)
    }

    pub(crate) fn from_parts_unchecked(vars: Vec<String>, relations: Vec<Polynomial>, nilpotency_bound: u32) -> Self {
        Presentation { vars, relations, nilpotency_bound }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars.join(",");
        let rels = self.relation_strings().join(", ");
        match (vars.is_empty(), rels.is_empty()) {
            (true, true) => write!(f, "| ; nil {}", self.nilpotency_bound),
            (true, false) => write!(f, "| {} ; nil {}", rels, self.nilpotency_bound),
            _ => write!(f, "{} | {} ; nil {}", vars, rels, self.nilpotency_bound),
        }
    }
}

/// Names not already in `taken`, drawn from `x, y, z, u, v, w, s, t, a, b, ...`
/// and then `x1, x2, ...`.
pub(crate) fn fresh_name(taken: &[String]) -> String {
    const POOL: &[&str] =
        &["x", "y", "z", "u", "v", "w", "s", "t", "a", "b", "c", "d", "e", "f", "g", "h", "p", "q", "r"];
    for name in POOL {
        if !taken.iter().any(|t| t == name) {
            return name.to_string();
        }
    }
    (1..).map(|i| format!("x{i}")).find(|n| !taken.contains(n)).unwrap()
}

/// Concatenates two variable lists, renaming collisions in `right`.
pub(crate) fn juxtapose_names(left: &[String], right: &[String]) -> Vec<String> {
    let mut out: Vec<String> = left.to_vec();
    let mut taken: Vec<String> = left.iter().chain(right).cloned().collect();
    for name in right {
        if left.contains(name) {
            let fresh = fresh_name(&taken);
            taken.push(fresh.clone());
            out.push(fresh);
        } else {
            out.push(name.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::Pos;

    #[test]
    fn parses_dual_numbers() {
        let p = Presentation::parse("x | x^2 ; nil 2").unwrap();
        assert_eq!(p.vars(), ["x"]);
        assert_eq!(p.relation_strings(), ["x^2"]);
        assert_eq!(p.nilpotency_bound(), 2);
        assert_eq!(p.to_string(), "x | x^2 ; nil 2");
    }

    #[test]
    fn parses_first_order_two_dim() {
        let p = Presentation::parse("x,y | x^2, y^2, x*y ; nil 2").unwrap();
        assert_eq!(p.nvars(), 2);
        assert_eq!(p.relations().len(), 3);
    }

    #[test]
    fn parses_real_line() {
        let p = Presentation::parse(" | ; nil 1").unwrap();
        assert_eq!(p, Presentation::real_line());
        assert_eq!(Presentation::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn rejects_constant_term() {
        let err = Presentation::parse("x | x^2 + 1 ; nil 2").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NonzeroConstant("1".into()));
        assert_eq!(err.pos, Pos { line: 1, column: 5 });
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            Presentation::parse("x | y^2 ; nil 2").unwrap_err().kind,
            ParseErrorKind::UndeclaredVariable(_)
        ));
        assert!(matches!(
            Presentation::parse("x, x | x^2 ; nil 2").unwrap_err().kind,
            ParseErrorKind::DuplicateVariable(_)
        ));
        assert!(Presentation::parse("x | ; nil 2").is_err());
        assert!(Presentation::parse("x | x^2 ; nil 0").is_err());
        assert!(Presentation::parse("x | x^2 ; nil").is_err());
        assert!(Presentation::parse("x | x^2 nil 2").is_err());
    }

    #[test]
    fn renaming_avoids_collisions() {
        let l = ["x".to_string()];
        let r = ["x".to_string()];
        assert_eq!(juxtapose_names(&l, &r), ["x", "y"]);
        let l = ["x".to_string(), "y".to_string()];
        let r = ["x".to_string(), "z".to_string()];
        assert_eq!(juxtapose_names(&l, &r), ["x", "y", "u", "z"]);
    }
}
