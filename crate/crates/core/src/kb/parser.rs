use std::collections::HashMap;

use super::lexer::{tokenize, Tok, Token};
use super::{KnowledgeBase, ParseError, RoleDecl, TBoxAxiom};
use crate::syntax::{Assertion, Concept, Individual, Role, RoleIndex, Sort, Term};

const KEYWORDS: &[&str] = &[
    "obj", "feat", "roles", "box", "dia", "and", "or", "not", "I", "equiv", "sub", "Rbox", "Rdia",
];

/// True for words the grammar reserves, including `box3`, `Rdia1` and so on.
pub(crate) fn is_reserved(word: &str) -> bool {
    if KEYWORDS.contains(&word) {
        return true;
    }
    ["Rbox", "Rdia", "box", "dia"].iter().any(|p| {
        word.strip_prefix(p)
            .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    })
}

struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    sorts: HashMap<String, Sort>,
    /// When set, role uses are checked on the spot; otherwise they are
    /// collected and checked against the document's own declaration.
    fixed_roles: Option<RoleDecl>,
    role_uses: Vec<(Role, usize, usize)>,
}

type PResult<T> = Result<T, ParseError>;

impl<'t> Parser<'t> {
    fn new(toks: &'t [Token]) -> Self {
        Parser {
            toks,
            pos: 0,
            sorts: HashMap::new(),
            fixed_roles: None,
            role_uses: Vec::new(),
        }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Token {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)]
    }

    fn advance(&mut self) -> &Token {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error_here(format!("expected {wanted}, found {}", self.peek().tok.describe()))
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == word)
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.peek().tok == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn int(&mut self) -> PResult<u32> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.advance();
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    /// Matches `prefix N` or `prefixN` and returns `N`.
    fn indexed_keyword(&mut self, prefix: &str) -> PResult<Option<u32>> {
        let Tok::Ident(word) = &self.peek().tok else {
            return Ok(None);
        };
        if word == prefix {
            self.advance();
            return self.int().map(Some);
        }
        match word.strip_prefix(prefix) {
            Some(rest) if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) => {
                let n = rest
                    .parse()
                    .map_err(|_| self.error_here(format!("index in `{word}` out of range")))?;
                self.advance();
                Ok(Some(n))
            }
            _ => Ok(None),
        }
    }

    fn role_index(&mut self, prefix: &str, line: usize, col: usize) -> PResult<Option<RoleIndex>> {
        let Some(n) = self.indexed_keyword(prefix)? else {
            return Ok(None);
        };
        let idx = RoleIndex::try_from(n)
            .ok()
            .filter(|&i| i >= 1)
            .ok_or(ParseError::Syntax {
                line,
                col,
                message: format!("role index {n} out of range (indices start at 1)"),
            })?;
        let role = match prefix {
            "box" | "Rbox" => Role::Box(idx),
            _ => Role::Diamond(idx),
        };
        self.use_role(role, line, col)?;
        Ok(Some(idx))
    }

    fn use_role(&mut self, role: Role, line: usize, col: usize) -> PResult<()> {
        match self.fixed_roles {
            Some(decl) if !decl.declares(role) => Err(ParseError::UndeclaredRole { line, col, role }),
            Some(_) => Ok(()),
            None => {
                self.role_uses.push((role, line, col));
                Ok(())
            }
        }
    }

    fn name(&mut self, what: &str) -> PResult<(String, usize, usize)> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(s) if !is_reserved(&s) => {
                self.advance();
                Ok((s, t.line, t.col))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn bind_sort(&mut self, name: &str, sort: Sort, line: usize, col: usize) -> PResult<Individual> {
        match self.sorts.get(name) {
            Some(&known) if known != sort => Err(ParseError::Sort {
                line,
                col,
                name: name.to_owned(),
                expected: known,
                found: sort,
            }),
            Some(_) => Ok(Individual::named(sort, name)),
            None => {
                self.sorts.insert(name.to_owned(), sort);
                Ok(Individual::named(sort, name))
            }
        }
    }

    fn individual(&mut self, sort: Sort) -> PResult<Individual> {
        let what = match sort {
            Sort::Object => "an object name",
            Sort::Feature => "a feature name",
        };
        let (n, line, col) = self.name(what)?;
        self.bind_sort(&n, sort, line, col)
    }

    // concept := disjunct (("or" | "∨") concept)?
    fn concept(&mut self) -> PResult<Concept> {
        let lhs = self.conjunct()?;
        if self.is_word("or") || self.peek().tok == Tok::Vee {
            self.advance();
            let rhs = self.concept()?;
            return Ok(Concept::join(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conjunct(&mut self) -> PResult<Concept> {
        let lhs = self.unary()?;
        if self.is_word("and") || self.peek().tok == Tok::Wedge {
            self.advance();
            let rhs = self.conjunct()?;
            return Ok(Concept::meet(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Concept> {
        let (line, col) = (self.peek().line, self.peek().col);
        if let Some(i) = self.role_index("box", line, col)? {
            return Ok(Concept::boxed(i, self.unary()?));
        }
        if let Some(i) = self.role_index("dia", line, col)? {
            return Ok(Concept::diamond(i, self.unary()?));
        }
        if self.peek().tok == Tok::LParen {
            self.advance();
            let c = self.concept()?;
            self.expect(Tok::RParen)?;
            return Ok(c);
        }
        let (n, _, _) = self.name("a concept")?;
        Ok(Concept::atom(n.as_str()))
    }

    fn at_assertion(&self) -> bool {
        let first_is_name = matches!(&self.peek().tok, Tok::Ident(s) if !is_reserved(s));
        if !first_is_name {
            return false;
        }
        match &self.peek_at(1).tok {
            Tok::Colon | Tok::DoubleColon => true,
            Tok::Ident(s) => {
                s == "I"
                    || s == "Rbox"
                    || s == "Rdia"
                    || (is_reserved(s) && (s.starts_with("Rbox") || s.starts_with("Rdia")))
            }
            _ => false,
        }
    }

    fn assertion_body(&mut self) -> PResult<Term> {
        let (lhs, line, col) = self.name("an individual name")?;
        let t = self.peek().clone();
        match &t.tok {
            Tok::Colon => {
                self.advance();
                let b = self.bind_sort(&lhs, Sort::Object, line, col)?;
                Ok(Term::MemberObj(b, self.concept()?))
            }
            Tok::DoubleColon => {
                self.advance();
                let y = self.bind_sort(&lhs, Sort::Feature, line, col)?;
                Ok(Term::MemberFeat(y, self.concept()?))
            }
            Tok::Ident(w) if w == "I" => {
                self.advance();
                let b = self.bind_sort(&lhs, Sort::Object, line, col)?;
                Ok(Term::RelI(b, self.individual(Sort::Feature)?))
            }
            _ => {
                if let Some(i) = self.role_index("Rbox", t.line, t.col)? {
                    let b = self.bind_sort(&lhs, Sort::Object, line, col)?;
                    return Ok(Term::RelBox(b, i, self.individual(Sort::Feature)?));
                }
                if let Some(i) = self.role_index("Rdia", t.line, t.col)? {
                    let y = self.bind_sort(&lhs, Sort::Feature, line, col)?;
                    return Ok(Term::RelDiamond(y, i, self.individual(Sort::Object)?));
                }
                Err(self.unexpected("`:`, `::`, `I`, `RboxN` or `RdiaN`"))
            }
        }
    }

    fn assertion(&mut self) -> PResult<Assertion> {
        let negated = if self.is_word("not") || self.peek().tok == Tok::Not {
            self.advance();
            true
        } else {
            false
        };
        let term = self.assertion_body()?;
        Ok(if negated {
            Assertion::Neg(term)
        } else {
            Assertion::Pos(term)
        })
    }

    fn declaration(&mut self, sort: Sort) -> PResult<()> {
        self.advance();
        loop {
            if self.peek().tok == Tok::Dot {
                self.advance();
                return Ok(());
            }
            self.individual(sort)?;
        }
    }

    fn roles_decl(&mut self) -> PResult<RoleDecl> {
        self.advance();
        let boxes = match self.indexed_keyword("box")? {
            Some(n) => n,
            None => return Err(self.unexpected("`box`")),
        };
        let diamonds = match self.indexed_keyword("dia")? {
            Some(n) => n,
            None => return Err(self.unexpected("`dia`")),
        };
        self.expect(Tok::Dot)?;
        let conv =
            |n: u32, p: &Self| RoleIndex::try_from(n).map_err(|_| p.error_here(format!("role count {n} out of range")));
        Ok(RoleDecl {
            boxes: conv(boxes, self)?,
            diamonds: conv(diamonds, self)?,
        })
    }

    fn document(&mut self) -> PResult<KnowledgeBase> {
        let mut kb = KnowledgeBase::default();
        let mut roles: Option<RoleDecl> = None;
        while self.peek().tok != Tok::Eof {
            if self.is_word("obj") {
                self.declaration(Sort::Object)?;
            } else if self.is_word("feat") {
                self.declaration(Sort::Feature)?;
            } else if self.is_word("roles") {
                if roles.is_some() {
                    return Err(self.error_here("roles declared twice"));
                }
                roles = Some(self.roles_decl()?);
            } else if self.is_word("not") || self.peek().tok == Tok::Not || self.at_assertion() {
                let a = self.assertion()?;
                self.expect(Tok::Dot)?;
                kb.abox.insert(a);
            } else {
                let lhs = self.concept()?;
                let axiom = if self.is_word("equiv") {
                    self.advance();
                    TBoxAxiom::equiv(lhs, self.concept()?)
                } else if self.is_word("sub") {
                    self.advance();
                    TBoxAxiom::subsume(lhs, self.concept()?)
                } else {
                    return Err(self.unexpected("`equiv` or `sub`"));
                };
                self.expect(Tok::Dot)?;
                kb.tbox.push(axiom);
            }
        }
        kb.roles = roles.unwrap_or_default();
        if let Some(&(role, line, col)) = self.role_uses.iter().find(|(r, ..)| !kb.roles.declares(*r)) {
            return Err(ParseError::UndeclaredRole { line, col, role });
        }
        for (name, sort) in self.sorts.drain() {
            match sort {
                Sort::Object => kb.objects.insert(name),
                Sort::Feature => kb.features.insert(name),
            };
        }
        Ok(kb)
    }
}

pub(crate) fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    let toks = tokenize(text)?;
    Parser::new(&toks).document()
}

/// Parses a single concept, checking roles against `roles`.
pub fn parse_concept(text: &str, roles: RoleDecl) -> Result<Concept, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser::new(&toks);
    p.fixed_roles = Some(roles);
    let c = p.concept()?;
    p.expect_eof()?;
    Ok(c)
}

/// Parses one assertion (trailing `.` optional) using the sorts and roles of
/// `kb`. Names unknown to the KB get the sort their position implies.
pub fn parse_assertion(text: &str, kb: &KnowledgeBase) -> Result<Assertion, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser::new(&toks);
    p.fixed_roles = Some(kb.roles);
    p.sorts.extend(kb.objects.iter().map(|n| (n.clone(), Sort::Object)));
    p.sorts.extend(kb.features.iter().map(|n| (n.clone(), Sort::Feature)));
    let a = p.assertion()?;
    if p.peek().tok == Tok::Dot {
        p.advance();
    }
    p.expect_eof()?;
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: &str) -> Concept {
        Concept::atom(n)
    }

    #[test]
    fn minimal_document() {
        let kb = parse_kb("obj m4. feat f1. m4 : IM.").unwrap();
        assert_eq!(kb.abox.len(), 1);
        assert!(kb.objects.contains("m4") && kb.features.contains("f1"));
        let a = *kb.abox.first().unwrap();
        assert_eq!(a, Assertion::Pos(Term::MemberObj(Individual::object("m4"), c("IM"))));
    }

    #[test]
    fn and_binds_tighter_and_associates_right() {
        let roles = RoleDecl::default();
        let got = parse_concept("A or B and C or D", roles).unwrap();
        let want = Concept::join(c("A"), Concept::join(Concept::meet(c("B"), c("C")), c("D")));
        assert_eq!(got, want);
        let got = parse_concept("A ∧ B ∧ C", roles).unwrap();
        assert_eq!(got, Concept::meet(c("A"), Concept::meet(c("B"), c("C"))));
    }

    #[test]
    fn modal_prefixes_bind_tightest() {
        let roles = RoleDecl { boxes: 2, diamonds: 1 };
        let got = parse_concept("box1 DM and box 2 DM", roles).unwrap();
        let want = Concept::meet(Concept::boxed(1, c("DM")), Concept::boxed(2, c("DM")));
        assert_eq!(got, want);
        let got = parse_concept("box2 dia1 RM", roles).unwrap();
        assert_eq!(got, Concept::boxed(2, Concept::diamond(1, c("RM"))));
    }

    #[test]
    fn truncated_input_reports_end() {
        let err = parse_kb("m4 : IM ∧").unwrap_err();
        match err {
            ParseError::Syntax { line, col, message } => {
                assert_eq!((line, col), (1, 10));
                assert!(message.contains("end of input"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sort_clash() {
        let err = parse_kb("obj m. m :: D.").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Sort {
                line: 1,
                col: 8,
                expected: Sort::Object,
                ..
            }
        ));
        let err = parse_kb("a I b. b I c.").unwrap_err();
        assert!(matches!(err, ParseError::Sort { col: 8, .. }));
    }

    #[test]
    fn undeclared_roles() {
        let err = parse_kb("m : box1 D.").unwrap_err();
        assert!(matches!(
            err,
            ParseError::UndeclaredRole {
                role: Role::Box(1),
                col: 5,
                ..
            }
        ));
        let err = parse_kb("roles box 1 dia 0. m Rdia1 y.").unwrap_err();
        assert!(matches!(
            err,
            ParseError::UndeclaredRole {
                role: Role::Diamond(1),
                ..
            }
        ));
        // the declaration may follow its uses
        assert!(parse_kb("m Rbox1 y. roles box 1 dia 0.").is_ok());
    }

    #[test]
    fn role_terms_fix_sorts() {
        let kb = parse_kb("roles box1 dia1. m Rbox1 f. f Rdia1 m. not m I f.").unwrap();
        assert_eq!(kb.abox.len(), 3);
        let m = Individual::object("m");
        let f = Individual::feature("f");
        assert!(kb.abox.contains(&Assertion::Pos(Term::RelDiamond(f, 1, m))));
        assert!(kb.abox.contains(&Assertion::Neg(Term::RelI(m, f))));
    }

    #[test]
    fn axioms() {
        let kb = parse_kb("EUM equiv GM or FM. IM sub EUM.").unwrap();
        assert_eq!(
            kb.tbox,
            vec![
                TBoxAxiom::equiv(c("EUM"), Concept::join(c("GM"), c("FM"))),
                TBoxAxiom::subsume(c("IM"), c("EUM")),
            ]
        );
    }

    #[test]
    fn reserved_words_are_not_names() {
        assert!(is_reserved("box12") && is_reserved("Rdia3") && is_reserved("I"));
        assert!(!is_reserved("boxes") && !is_reserved("box_1") && !is_reserved("m1"));
        assert!(parse_kb("obj and.").is_err());
    }

    #[test]
    fn single_assertion_uses_kb_sorts() {
        let kb = parse_kb("roles box 1 dia 1. obj m. feat f.").unwrap();
        let a = parse_assertion("not m Rbox1 f", &kb).unwrap();
        assert_eq!(
            a,
            Assertion::Neg(Term::RelBox(Individual::object("m"), 1, Individual::feature("f")))
        );
        assert!(matches!(parse_assertion("f : D", &kb), Err(ParseError::Sort { .. })));
        assert!(matches!(
            parse_assertion("m : box2 D", &kb),
            Err(ParseError::UndeclaredRole { .. })
        ));
    }
}
