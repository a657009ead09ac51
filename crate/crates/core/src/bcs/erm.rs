//! Embedded Relational Model facts and their ASCII rendering.

use std::fmt;

use serde::Serialize;

use super::{Granule, GranuleTree, Label};
use crate::error::ErmSyntaxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErmRelation {
    /// `->`
    Sequence,
    /// `>`
    Include,
    /// `<->`. Never produced from MiniC, which has no concurrent constructs.
    Concurrent,
}

impl ErmRelation {
    pub fn token(self) -> &'static str {
        match self {
            ErmRelation::Sequence => "->",
            ErmRelation::Include => ">",
            ErmRelation::Concurrent => "<->",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErmFact {
    pub left: Label,
    pub rel: ErmRelation,
    pub right: Label,
}

impl fmt::Display for ErmFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.rel.token(), self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ErmExpression {
    pub facts: Vec<ErmFact>,
}

impl ErmExpression {
    pub fn lines(&self) -> Vec<String> {
        self.facts.iter().map(ToString::to_string).collect()
    }
}

fn emit(list: &[Granule], out: &mut Vec<ErmFact>) {
    for w in list.windows(2) {
        out.push(ErmFact {
            left: w[0].label.clone(),
            rel: ErmRelation::Sequence,
            right: w[1].label.clone(),
        });
    }
    for g in list {
        for arm in &g.arms {
            if let Some(first) = arm.first() {
                out.push(ErmFact {
                    left: g.label.clone(),
                    rel: ErmRelation::Include,
                    right: first.label.clone(),
                });
            }
            emit(arm, out);
        }
    }
}

/// Sequence facts between siblings of one arm, and an include fact from each
/// structured granule to the head of each of its arms.
pub fn serialize_erm(g: &GranuleTree) -> ErmExpression {
    let mut facts = Vec::new();
    emit(&g.roots, &mut facts);
    ErmExpression { facts }
}

/// One fact per line.
pub fn render_erm(e: &ErmExpression) -> String {
    let mut s = String::new();
    for f in &e.facts {
        s.push_str(&f.to_string());
        s.push('\n');
    }
    s
}

/// Parse the rendering of [`render_erm`]. Blank lines and `#` or `//`
/// comment lines are skipped.
pub fn parse_erm(text: &str) -> Result<ErmExpression, ErmSyntaxError> {
    let mut facts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("//") {
            continue;
        }
        let err = |message: String| ErmSyntaxError { line: i + 1, message };
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [l, r, rt] = parts.as_slice() else {
            return Err(err(format!("expected `LABEL REL LABEL`, found `{line}`")));
        };
        let rel = match *r {
            "->" => ErmRelation::Sequence,
            ">" => ErmRelation::Include,
            "<->" => ErmRelation::Concurrent,
            other => return Err(err(format!("unknown relation `{other}`"))),
        };
        facts.push(ErmFact {
            left: l.parse().map_err(err)?,
            rel,
            right: rt.parse().map_err(err)?,
        });
    }
    Ok(ErmExpression { facts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcs::decompose;
    use crate::corpus;
    use crate::frontend::parse_source;
    use crate::scope::build_scope_tree;

    fn erm(src: &str) -> ErmExpression {
        let t = parse_source("t.mc", src).unwrap();
        let s = build_scope_tree(&t).unwrap();
        serialize_erm(&decompose(&t, &s)[0])
    }

    #[test]
    fn example4_facts() {
        let e = erm(corpus::EXAMPLE4);
        assert_eq!(
            e.lines(),
            [
                "G1 -> G2",
                "G1 > G(1,1)",
                "G(1,1) -> G(1,2)",
                "G(1,2) -> G(1,3)",
                "G(1,2) > G(1,2,1)",
                "G2 > G(2,1)",
            ]
        );
        assert_eq!(parse_erm(&render_erm(&e)).unwrap(), e);
    }

    #[test]
    fn single_granule_has_no_facts() {
        assert!(erm(corpus::UNIT).facts.is_empty());
    }

    #[test]
    fn parse_rejects_bad_relation() {
        let e = parse_erm("G1 <> G2").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(parse_erm("G1 -> G(2)").is_err());
        assert!(parse_erm("G1 ->").is_err());
    }

    #[test]
    fn parse_one_fact_with_comments() {
        let e = parse_erm("# erm\n\nG1 -> G2\n").unwrap();
        assert_eq!(e.facts.len(), 1);
        assert_eq!(e.facts[0].rel, ErmRelation::Sequence);
    }
}
