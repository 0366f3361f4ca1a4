use std::fmt::Write as _;

use thiserror::Error;

use super::lexer::{is_ident_continue, is_ident_start};
use super::parser::is_reserved;
use super::KnowledgeBase;
use crate::syntax::Concept;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializeError {
    #[error("synthetic individual `{0}` has no surface syntax")]
    Synthetic(String),
    #[error("`{0}` is not a valid name")]
    BadName(String),
}

pub(crate) const HEADER: &str = "# LE-ALC knowledge base\n";

fn check_name(name: &str) -> Result<(), SerializeError> {
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(is_ident_start) && chars.all(is_ident_continue) && !is_reserved(name);
    if ok {
        Ok(())
    } else {
        Err(SerializeError::BadName(name.to_owned()))
    }
}

fn check_concept(c: Concept) -> Result<(), SerializeError> {
    c.atoms().into_iter().try_for_each(|n| check_name(n.as_str()))
}

pub(crate) fn write_kb(kb: &KnowledgeBase) -> Result<String, SerializeError> {
    let mut out = String::from(HEADER);
    if kb.roles.boxes > 0 || kb.roles.diamonds > 0 {
        let _ = writeln!(out, "roles box {} dia {}.", kb.roles.boxes, kb.roles.diamonds);
    }
    for (kw, names) in [("obj", &kb.objects), ("feat", &kb.features)] {
        if names.is_empty() {
            continue;
        }
        names.iter().try_for_each(|n| check_name(n))?;
        let joined: Vec<&str> = names.iter().map(String::as_str).collect();
        let _ = writeln!(out, "{kw} {}.", joined.join(" "));
    }
    if !kb.tbox.is_empty() {
        out.push('\n');
        for ax in &kb.tbox {
            check_concept(ax.lhs)?;
            check_concept(ax.rhs)?;
            let _ = writeln!(out, "{ax}.");
        }
    }
    if !kb.abox.is_empty() {
        out.push('\n');
        for a in &kb.abox {
            let t = a.term();
            if let Some(ind) = t.individuals().into_iter().find(|i| !i.is_named()) {
                return Err(SerializeError::Synthetic(ind.to_string()));
            }
            for ind in t.individuals() {
                check_name(ind.name().expect("named").as_str())?;
            }
            if let Some(c) = t.concept() {
                check_concept(c)?;
            }
            let _ = writeln!(out, "{a}.");
        }
    }
    Ok(out)
}
