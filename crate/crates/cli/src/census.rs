//! Grid evaluation of counted quantities and the degeneration verdict.

use std::collections::BTreeSet;

use extraspecial::orbits::{self, partial_order_bruteforce, Verdict, Witness};
use extraspecial::{Caps, CountReport, Error, Execution, GroupId, GroupKind, Quantity};
use rayon::prelude::*;
use serde::Serialize;

/// A census column: a counted quantity or the degeneration verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Column {
    Count(Quantity),
    PartialOrder,
}

impl Column {
    pub fn name(self) -> &'static str {
        match self {
            Column::Count(q) => q.name(),
            Column::PartialOrder => "partial_order",
        }
    }

    pub fn parse(s: &str) -> Result<Column, Error> {
        if s.trim().eq_ignore_ascii_case("partial_order") {
            return Ok(Column::PartialOrder);
        }
        s.parse().map(Column::Count)
    }

    fn families(self) -> Vec<Option<GroupKind>> {
        match self {
            Column::Count(q) if !q.per_family() => vec![None],
            _ => vec![Some(GroupKind::Es1), Some(GroupKind::Es2)],
        }
    }

    fn ks(self, n: usize) -> Vec<Option<usize>> {
        match self {
            Column::Count(q) if q.takes_k() => (0..=n).map(Some).collect(),
            _ => vec![None],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum MatchFlag {
    Known(bool),
    Unknown(&'static str),
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusRow {
    pub group: Option<GroupKind>,
    pub p: u32,
    pub n: usize,
    pub quantity: &'static str,
    pub k: Option<usize>,
    pub formula_value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_value: Option<String>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    pub matches: Option<MatchFlag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CensusRow {
    fn sort_key(&self) -> (&'static str, u32, usize, Option<usize>, Option<GroupKind>) {
        (self.quantity, self.p, self.n, self.k, self.group)
    }
}

#[derive(Debug, Clone)]
pub struct Grid {
    pub primes: Vec<u64>,
    pub ranks: Vec<usize>,
    pub columns: Vec<Column>,
    pub oracle: bool,
}

struct Task {
    column: Column,
    family: Option<GroupKind>,
    p: u64,
    n: usize,
    k: Option<usize>,
}

fn from_report(r: CountReport, oracle: bool) -> CensusRow {
    let skipped = oracle && r.oracle_value.is_none();
    CensusRow {
        group: r.group,
        p: r.p,
        n: r.n,
        quantity: r.quantity.name(),
        k: r.k,
        formula_value: r.formula_value.to_string(),
        oracle_value: match (&r.oracle_value, skipped) {
            (Some(v), _) => Some(v.to_string()),
            (None, true) => Some("skipped".into()),
            (None, false) => None,
        },
        matches: match (r.matches, skipped) {
            (Some(m), _) => Some(MatchFlag::Known(m)),
            (None, true) => Some(MatchFlag::Unknown("n/a")),
            (None, false) => None,
        },
        detail: if oracle { r.detail } else { None },
        witness: None,
    }
}

fn partial_order_row(
    group: GroupId,
    oracle: bool,
    exec: Execution,
    caps: &Caps,
) -> Result<CensusRow, Error> {
    let report = orbits::partial_order_report(&group, exec, caps)?;
    let mut row = CensusRow {
        group: Some(group.kind()),
        p: group.p(),
        n: group.n(),
        quantity: Column::PartialOrder.name(),
        k: None,
        formula_value: report.verdict.to_string(),
        oracle_value: None,
        matches: None,
        detail: report
            .witness
            .as_ref()
            .map(|w| format!("{} <-> {}", w.g, w.h)),
        witness: report.witness,
    };
    if oracle {
        match partial_order_bruteforce(&group, caps) {
            Ok(pairs) => {
                let set: BTreeSet<_> = pairs.iter().copied().collect();
                let mutual = pairs.iter().any(|&(x, y)| set.contains(&(y, x)));
                let verdict = if mutual {
                    Verdict::NoPartialOrder
                } else {
                    Verdict::PartialOrder
                };
                row.matches = Some(MatchFlag::Known(verdict == report.verdict));
                row.oracle_value = Some(verdict.to_string());
            }
            Err(Error::Resource { what, .. }) => {
                row.oracle_value = Some("skipped".into());
                row.matches = Some(MatchFlag::Unknown("n/a"));
                row.detail = Some(format!("skipped: {what} over cap"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(row)
}

fn run_task(t: &Task, oracle: bool, exec: Execution, caps: &Caps) -> Result<CensusRow, Error> {
    match t.column {
        Column::Count(q) => CountReport::compute(q, t.family, t.p, t.n, t.k, oracle, exec, caps)
            .map(|r| from_report(r, oracle)),
        Column::PartialOrder => {
            let group = GroupId::new(t.family.expect("per-family column"), t.p, t.n)?;
            partial_order_row(group, oracle, exec, caps)
        }
    }
}

/// Every row of the grid, sorted by quantity, `p`, `n`, `k`, then family.
pub fn run(grid: &Grid, exec: Execution, caps: &Caps) -> Result<Vec<CensusRow>, Error> {
    let mut tasks = Vec::new();
    for &column in &grid.columns {
        for &p in &grid.primes {
            for &n in &grid.ranks {
                for family in column.families() {
                    for k in column.ks(n) {
                        tasks.push(Task {
                            column,
                            family,
                            p,
                            n,
                            k,
                        });
                    }
                }
            }
        }
    }
    let mut rows = match exec {
        Execution::Parallel => tasks
            .par_iter()
            .map(|t| run_task(t, grid.oracle, exec, caps))
            .collect::<Result<Vec<_>, _>>()?,
        Execution::Sequential => tasks
            .iter()
            .map(|t| run_task(t, grid.oracle, exec, caps))
            .collect::<Result<Vec<_>, _>>()?,
    };
    rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    rows.dedup_by(|a, b| a.sort_key() == b.sort_key());
    Ok(rows)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV with a header row. Absent fields are empty.
pub fn to_csv(rows: &[CensusRow]) -> String {
    let mut out = String::from("group,p,n,quantity,k,formula_value,oracle_value,match,detail\n");
    for r in rows {
        let fields = [
            r.group.map(|g| g.to_string()).unwrap_or_default(),
            r.p.to_string(),
            r.n.to_string(),
            r.quantity.to_string(),
            r.k.map(|k| k.to_string()).unwrap_or_default(),
            r.formula_value.clone(),
            r.oracle_value.clone().unwrap_or_default(),
            match &r.matches {
                Some(MatchFlag::Known(b)) => b.to_string(),
                Some(MatchFlag::Unknown(s)) => s.to_string(),
                None => String::new(),
            },
            r.detail.clone().unwrap_or_default(),
        ];
        let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
