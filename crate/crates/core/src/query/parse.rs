//! Text form of queries, one per line:
//!
//! ```text
//! rel m3 I f4
//! member m4 : FDM
//! subsume box2 RDM sub box2 DM
//! disj m4 : FDM ; m4 : IM
//! neg m3 Rbox1 f4
//! neg GM sub F
//! sep m4 m2 [ROLE]
//! sep Rbox1 I m4
//! dif m2 m4 [ROLE]
//! identity m1 m3
//! list-related m3 I
//! list-related I f4
//! list-members [extent|intent] RM and DM
//! ```

use super::{Extension, Query, QueryError, Reasoner, Side};
use crate::kb::{parse_assertion, parse_concept};
use crate::syntax::{Assertion, Concept, Individual, Role, Term};
use crate::tableau::ExtraRule;

fn parse_role(word: &str) -> Option<Role> {
    if word == "I" {
        return Some(Role::I);
    }
    let (ctor, digits): (fn(u16) -> Role, &str) = match word.strip_prefix("Rbox") {
        Some(d) => (Role::Box, d),
        None => (Role::Diamond, word.strip_prefix("Rdia")?),
    };
    digits.parse::<u16>().ok().filter(|&i| i > 0).map(ctor)
}

fn usage(msg: impl Into<String>) -> QueryError {
    QueryError::Unsupported(msg.into())
}

struct Ctx<'a> {
    r: &'a Reasoner,
}

impl Ctx<'_> {
    fn role(&self, word: &str) -> Result<Role, QueryError> {
        let role = parse_role(word).ok_or_else(|| usage(format!("`{word}` is not a role")))?;
        if !self.r.kb().roles.declares(role) {
            return Err(usage(format!("role {role} is not declared")));
        }
        Ok(role)
    }

    fn concept(&self, text: &str) -> Result<Concept, QueryError> {
        Ok(parse_concept(text, self.r.kb().roles)?)
    }

    fn assertion(&self, text: &str) -> Result<Assertion, QueryError> {
        Ok(parse_assertion(text.trim(), self.r.kb())?)
    }

    fn name(&self, word: &str) -> Result<Individual, QueryError> {
        self.r.individual(word)
    }

    fn subsumption(&self, text: &str) -> Result<Option<(Concept, Concept)>, QueryError> {
        let words: Vec<&str> = text.split_whitespace().collect();
        let Some(k) = words.iter().position(|&w| w == "sub") else {
            return Ok(None);
        };
        let lhs = self.concept(&words[..k].join(" "))?;
        let rhs = self.concept(&words[k + 1..].join(" "))?;
        Ok(Some((lhs, rhs)))
    }
}

fn member_parts(a: Assertion) -> Result<(Individual, Concept), QueryError> {
    match a {
        Assertion::Pos(Term::MemberObj(i, c) | Term::MemberFeat(i, c)) => Ok((i, c)),
        other => Err(usage(format!("`{other}` is not a membership assertion"))),
    }
}

fn pair<'w>(words: &[&'w str], what: &str) -> Result<(&'w str, &'w str, Option<&'w str>), QueryError> {
    match *words {
        [a, b] => Ok((a, b, None)),
        [a, b, c] => Ok((a, b, Some(c))),
        _ => Err(usage(format!("{what} expects two names and an optional role"))),
    }
}

/// Parses one query line against the names and roles of `r`'s KB.
pub fn parse_query(text: &str, r: &Reasoner) -> Result<Query, QueryError> {
    let cx = Ctx { r };
    let text = text.trim();
    let (kind, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let words: Vec<&str> = rest.split_whitespace().collect();
    match kind {
        "rel" => match cx.assertion(rest)? {
            Assertion::Pos(t) if t.is_relational() => Ok(Query::Rel(t)),
            other => Err(usage(format!("`{other}` is not a positive relational term"))),
        },
        "member" => {
            let (i, c) = member_parts(cx.assertion(rest)?)?;
            Ok(Query::Member(i, c))
        }
        "subsume" => {
            let (a, b) = cx.subsumption(rest)?.ok_or_else(|| usage("expected `C1 sub C2`"))?;
            Ok(Query::Subsume(a, b))
        }
        "disj" => {
            let ts = rest
                .split(';')
                .map(|t| cx.assertion(t))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Query::Disjunctive(ts))
        }
        "neg" => {
            let body = rest.strip_prefix("not ").map_or(rest, str::trim);
            if let Some((a, b)) = cx.subsumption(body)? {
                return Ok(Query::NegSubsume(a, b));
            }
            match parse_assertion(body, r.kb())? {
                Assertion::Pos(t) if t.is_relational() => Ok(Query::NegRel(t)),
                Assertion::Pos(Term::MemberObj(i, c) | Term::MemberFeat(i, c)) => Ok(Query::NegMember(i, c)),
                Assertion::Neg(t) => Err(usage(format!("double negation in `not {t}`"))),
                Assertion::Pos(_) => unreachable!("every term is relational or a membership"),
            }
        }
        "sep" => {
            let (a, b, c) = pair(&words, "sep")?;
            if let (Some(from), Some(to)) = (parse_role(a), parse_role(b)) {
                let at = c.ok_or_else(|| usage("sep with roles expects an individual"))?;
                let (from, to) = (cx.role(&from.to_string())?, cx.role(&to.to_string())?);
                return Ok(Query::Separation(ExtraRule::inclusion(from, to, cx.name(at)?)?));
            }
            let (from, to) = (cx.name(a)?, cx.name(b)?);
            let role = c.map(|w| cx.role(w)).transpose()?.unwrap_or(Role::I);
            if from.sort() != to.sort() {
                return Err(usage(format!("`{a}` and `{b}` have different sorts")));
            }
            Ok(Query::Separation(Reasoner::sep_rule(from, to, role)))
        }
        "dif" => {
            let (a, b, c) = pair(&words, "dif")?;
            let role = c.map(|w| cx.role(w)).transpose()?.unwrap_or(Role::I);
            Ok(Query::Differentiation {
                left: cx.name(a)?,
                right: cx.name(b)?,
                role,
            })
        }
        "identity" => match *words {
            [a, b] => Ok(Query::Identity(cx.name(a)?, cx.name(b)?)),
            _ => Err(usage("identity expects two names")),
        },
        "list-related" => match *words {
            [a, b] if parse_role(a).is_some() => Ok(Query::ListRel {
                anchor: cx.name(b)?,
                role: cx.role(a)?,
                side: Side::Left,
            }),
            [a, b] => Ok(Query::ListRel {
                anchor: cx.name(a)?,
                role: cx.role(b)?,
                side: Side::Right,
            }),
            _ => Err(usage("list-related expects `NAME ROLE` or `ROLE NAME`")),
        },
        "list-members" => {
            let (ext, body) = match words.first() {
                Some(&"extent") if words.len() > 1 => (Extension::Extent, &words[1..]),
                Some(&"intent") if words.len() > 1 => (Extension::Intent, &words[1..]),
                _ => (Extension::Extent, &words[..]),
            };
            Ok(Query::ListMembers(cx.concept(&body.join(" "))?, ext))
        }
        "" => Err(usage("empty query")),
        other => Err(usage(format!("unknown query kind `{other}`"))),
    }
}
