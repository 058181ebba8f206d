//! Sub-corpus slicing: filter grants by agency/country/start-year and papers
//! by discipline group, then prune links (and the orphaned side, when the
//! filter constrains it) to a consistent fixpoint.

use std::collections::BTreeSet;

use super::CorpusStore;
use crate::error::{Error, Result};

const VALID_ATTRIBUTES: &str = "agency, country, year, discipline";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Cmp {
    fn eval(self, lhs: i32, rhs: i32) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Eq => lhs == rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
        }
    }
}

#[derive(Debug, Clone)]
enum Clause {
    Agency(String),
    Country(String),
    GrantYear(Cmp, i32),
    /// Paper primary field must belong to the group.
    Discipline(BTreeSet<usize>),
}

impl Clause {
    fn is_grant_side(&self) -> bool {
        !matches!(self, Clause::Discipline(_))
    }
}

/// Conjunction of attribute clauses parsed from expressions such as
/// `agency=NSF`, `year<2000,country=US` or `discipline=3|7`.
#[derive(Debug, Clone, Default)]
pub struct CorpusFilter {
    clauses: Vec<Clause>,
}

impl CorpusFilter {
    /// The always-true filter.
    pub fn all() -> Self {
        Self::default()
    }

    pub fn parse(expr: &str) -> Result<Self> {
        let mut clauses = Vec::new();
        for part in expr.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            clauses.push(parse_clause(part)?);
        }
        Ok(Self { clauses })
    }

    fn has_grant_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_grant_side)
    }

    fn has_paper_clause(&self) -> bool {
        self.clauses.iter().any(|c| !c.is_grant_side())
    }

    fn grant_passes(&self, grant: &super::Grant) -> bool {
        self.clauses.iter().all(|c| match c {
            Clause::Agency(a) => grant.agency == *a,
            Clause::Country(cc) => grant.country == *cc,
            Clause::GrantYear(op, y) => op.eval(grant.start_year, *y),
            Clause::Discipline(_) => true,
        })
    }

    fn paper_passes(&self, paper: &super::Paper) -> bool {
        self.clauses.iter().all(|c| match c {
            Clause::Discipline(group) => group.contains(&paper.primary_field()),
            _ => true,
        })
    }
}

fn parse_clause(part: &str) -> Result<Clause> {
    let op_at = part
        .find(|c| ['<', '>', '='].contains(&c))
        .ok_or_else(|| Error::InvalidFilter(part.to_string()))?;
    let attr = part[..op_at].trim();
    let rest = &part[op_at..];
    let (op, value) = if let Some(v) = rest.strip_prefix(">=") {
        (Cmp::Ge, v)
    } else if let Some(v) = rest.strip_prefix("<=") {
        (Cmp::Le, v)
    } else if let Some(v) = rest.strip_prefix('>') {
        (Cmp::Gt, v)
    } else if let Some(v) = rest.strip_prefix('<') {
        (Cmp::Lt, v)
    } else if let Some(v) = rest.strip_prefix('=') {
        (Cmp::Eq, v)
    } else {
        return Err(Error::InvalidFilter(part.to_string()));
    };
    let value = value.trim();

    match attr {
        "agency" | "country" => {
            if op != Cmp::Eq {
                return Err(Error::InvalidFilter(format!(
                    "{attr} supports only `=`, got `{part}`"
                )));
            }
            Ok(if attr == "agency" {
                Clause::Agency(value.to_string())
            } else {
                Clause::Country(value.to_string())
            })
        }
        "year" => {
            let y: i32 = value
                .parse()
                .map_err(|_| Error::InvalidFilter(format!("bad year in `{part}`")))?;
            Ok(Clause::GrantYear(op, y))
        }
        "discipline" => {
            if op != Cmp::Eq {
                return Err(Error::InvalidFilter(format!(
                    "discipline supports only `=`, got `{part}`"
                )));
            }
            let group = value
                .split('|')
                .map(|f| {
                    f.trim().parse::<usize>().map_err(|_| {
                        Error::InvalidFilter(format!("bad discipline id in `{part}`"))
                    })
                })
                .collect::<Result<BTreeSet<usize>>>()?;
            if group.is_empty() {
                return Err(Error::InvalidFilter(part.to_string()));
            }
            Ok(Clause::Discipline(group))
        }
        other => Err(Error::UnknownFilterAttribute {
            attr: other.to_string(),
            valid: VALID_ATTRIBUTES.to_string(),
        }),
    }
}

/// Restrict the store to the sub-corpus satisfying the filter.
///
/// Grant-side clauses drop papers that lose all supporting grants, and
/// paper-side clauses drop grants that lose all supported papers; pruning
/// iterates to a fixpoint so the result is stable under re-application.
pub fn slice_corpus(store: &CorpusStore, filter: &CorpusFilter) -> Result<CorpusStore> {
    let mut paper_alive: Vec<bool> = store
        .papers
        .iter()
        .map(|p| filter.paper_passes(p))
        .collect();
    let mut grant_alive: Vec<bool> = store
        .grants
        .iter()
        .map(|g| filter.grant_passes(g))
        .collect();

    let paper_pos: std::collections::HashMap<&str, usize> = store
        .papers
        .iter()
        .enumerate()
        .map(|(i, p)| (p.id.as_str(), i))
        .collect();
    let grant_pos: std::collections::HashMap<&str, usize> = store
        .grants
        .iter()
        .enumerate()
        .map(|(i, g)| (g.id.as_str(), i))
        .collect();

    let link_idx: Vec<(usize, usize)> = store
        .links
        .iter()
        .filter_map(|(g, p)| Some((*grant_pos.get(g.as_str())?, *paper_pos.get(p.as_str())?)))
        .collect();

    let require_grant_link = filter.has_grant_clause();
    let require_paper_link = filter.has_paper_clause();
    loop {
        let mut changed = false;
        if require_grant_link {
            let mut linked = vec![false; store.papers.len()];
            for &(g, p) in &link_idx {
                if grant_alive[g] {
                    linked[p] = true;
                }
            }
            for (alive, linked) in paper_alive.iter_mut().zip(&linked) {
                if *alive && !linked {
                    *alive = false;
                    changed = true;
                }
            }
        }
        if require_paper_link {
            let mut linked = vec![false; store.grants.len()];
            for &(g, p) in &link_idx {
                if paper_alive[p] {
                    linked[g] = true;
                }
            }
            for (alive, linked) in grant_alive.iter_mut().zip(&linked) {
                if *alive && !linked {
                    *alive = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let papers: Vec<_> = store
        .papers
        .iter()
        .zip(&paper_alive)
        .filter(|(_, &alive)| alive)
        .map(|(p, _)| p.clone())
        .collect();
    let grants: Vec<_> = store
        .grants
        .iter()
        .zip(&grant_alive)
        .filter(|(_, &alive)| alive)
        .map(|(g, _)| g.clone())
        .collect();
    let links: Vec<_> = store
        .links
        .iter()
        .filter(|(g, p)| {
            grant_pos.get(g.as_str()).is_some_and(|&i| grant_alive[i])
                && paper_pos.get(p.as_str()).is_some_and(|&i| paper_alive[i])
        })
        .cloned()
        .collect();

    Ok(CorpusStore::new(
        store.taxonomy.clone(),
        papers,
        grants,
        links,
        store.externals.clone(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Citer, FieldTaxonomy, Grant, Paper};
    use std::collections::BTreeMap;

    fn paper(id: &str, field: usize) -> Paper {
        Paper {
            id: id.into(),
            year: 2000,
            abstract_text: String::new(),
            field_labels: vec![(field, 1.0)],
            references: vec!["r".into()],
            citers: vec![Citer {
                id: "c".into(),
                year: Some(2001),
            }],
            n_authors: 1,
            n_institutes: 0,
            max_author_citations: None,
        }
    }

    fn grant(id: &str, agency: &str, year: i32) -> Grant {
        Grant {
            id: id.into(),
            agency: agency.into(),
            country: "US".into(),
            start_year: year,
            amount_usd: Some(1.0),
            abstract_text: String::new(),
        }
    }

    fn store() -> CorpusStore {
        CorpusStore::new(
            FieldTaxonomy::new(vec!["a".into(), "b".into()]).unwrap(),
            vec![paper("p1", 0), paper("p2", 1), paper("p3", 0)],
            vec![grant("g1", "NSF", 1995), grant("g2", "NIH", 2005)],
            vec![
                ("g1".into(), "p1".into()),
                ("g2".into(), "p2".into()),
                ("g1".into(), "p3".into()),
            ],
            BTreeMap::new(),
        )
    }

    #[test]
    fn agency_filter_keeps_linked_papers_only() {
        let s = slice_corpus(&store(), &CorpusFilter::parse("agency=NSF").unwrap()).unwrap();
        assert_eq!(s.grants.len(), 1);
        assert_eq!(s.grants[0].id, "g1");
        let ids: Vec<_> = s.papers.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["p1", "p3"]);
        assert_eq!(s.links.len(), 2);
    }

    #[test]
    fn always_true_filter_is_identity() {
        let original = store();
        let sliced = slice_corpus(&original, &CorpusFilter::all()).unwrap();
        assert_eq!(
            serde_json::to_vec(&original).unwrap(),
            serde_json::to_vec(&sliced).unwrap()
        );
    }

    #[test]
    fn year_filter_selects_grants() {
        let s = slice_corpus(&store(), &CorpusFilter::parse("year<2000").unwrap()).unwrap();
        assert_eq!(s.grants.len(), 1);
        assert_eq!(s.grants[0].id, "g1");
    }

    #[test]
    fn discipline_filter_prunes_orphaned_grants() {
        let s = slice_corpus(&store(), &CorpusFilter::parse("discipline=1").unwrap()).unwrap();
        let ids: Vec<_> = s.papers.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["p2"]);
        assert_eq!(s.grants.len(), 1);
        assert_eq!(s.grants[0].id, "g2");
    }

    #[test]
    fn unknown_attribute_lists_valid_ones() {
        let err = CorpusFilter::parse("funder=NSF").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("funder"));
        assert!(msg.contains("agency, country, year, discipline"));
    }

    #[test]
    fn slicing_is_idempotent() {
        let f = CorpusFilter::parse("agency=NSF,year<2000").unwrap();
        let once = slice_corpus(&store(), &f).unwrap();
        let twice = slice_corpus(&once, &f).unwrap();
        assert_eq!(
            serde_json::to_vec(&once).unwrap(),
            serde_json::to_vec(&twice).unwrap()
        );
    }
}
