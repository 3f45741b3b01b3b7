//! Consistency checks between independently built cover presentations.
//!
//! Each check compares invariants computed from two different presentations
//! that should present isomorphic groups. Agreement is evidence, not a proof.
//! A homomorphism search that runs out of budget yields an inconclusive
//! check, never a failed one.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::covering::{
    branched_presentation, branched_presentation_with_last_orbit, direct_branched_presentation,
    CoverError,
};
use crate::diagrams::Diagram;
use crate::invariants::{
    abelian_invariants, hom_count_with, FiniteGroup, HomCountError, HomSearch,
};
use crate::presentations::Presentation;
use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subject {
    /// Core group vs. double branched cover of an oriented diagram.
    CoreDoubleCover,
    /// Core group vs. double branched cover of an unoriented diagram.
    UnorientedDoubleCover,
    /// Reduced branched presentation vs. direct cover times free factors.
    CyclicCover,
    /// Omitted relator orbit of the branched presentation.
    Redundancy,
}

impl Subject {
    pub fn tag(self) -> &'static str {
        match self {
            Subject::CoreDoubleCover => "core-double-cover",
            Subject::UnorientedDoubleCover => "unoriented-double-cover",
            Subject::CyclicCover => "cyclic-cover",
            Subject::Redundancy => "redundancy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

impl Check {
    fn compare(name: impl Into<String>, expected: impl ToString, computed: impl ToString) -> Check {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let status = if expected == computed {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            name: name.into(),
            expected,
            computed,
            status,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: Subject,
    pub inputs: String,
    pub checks: Vec<Check>,
    pub overall: Status,
}

impl VerificationReport {
    fn new(subject: Subject, inputs: String, checks: Vec<Check>) -> Self {
        let overall = if checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if checks.iter().any(|c| c.status == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        };
        VerificationReport {
            subject,
            inputs,
            checks,
            overall,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "subject: {}", self.subject.tag())?;
        writeln!(f, "inputs:  {}", self.inputs)?;
        let w_name = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let w_exp = self
            .checks
            .iter()
            .map(|c| c.expected.len())
            .max()
            .unwrap_or(8)
            .max(8);
        let w_comp = self
            .checks
            .iter()
            .map(|c| c.computed.len())
            .max()
            .unwrap_or(8)
            .max(8);
        writeln!(
            f,
            "{:<w_name$}  {:<w_exp$}  {:<w_comp$}  status",
            "check", "expected", "computed"
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "{:<w_name$}  {:<w_exp$}  {:<w_comp$}  {}",
                c.name, c.expected, c.computed, c.status
            )?;
        }
        write!(f, "overall: {}", self.overall)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Cover(#[from] CoverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VerifyOptions {
    pub search: HomSearch,
    /// Transversal generator for the direct cover construction.
    pub axis: usize,
}

/// One abelianization check plus one homomorphism-count check per target.
fn invariant_checks(
    label: &str,
    expected: &Presentation,
    computed: &Presentation,
    targets: &[FiniteGroup],
    search: &HomSearch,
) -> Vec<Check> {
    let mut checks = vec![Check::compare(
        format!("{label}abelian invariants"),
        abelian_invariants(expected),
        abelian_invariants(computed),
    )];
    for t in targets {
        let name = format!("{label}homs to {}", t.name());
        let show = |r: &Result<_, HomCountError>| match r {
            Ok(n) => format!("{n}"),
            Err(HomCountError::BudgetExhausted { .. }) => "budget exhausted".to_string(),
        };
        let e = hom_count_with(expected, t, search);
        let c = hom_count_with(computed, t, search);
        let check = if e.is_err() || c.is_err() {
            Check {
                name,
                expected: show(&e),
                computed: show(&c),
                status: Status::Inconclusive,
            }
        } else {
            Check::compare(name, show(&e), show(&c))
        };
        checks.push(check);
    }
    checks
}

/// Multiset of canonical forms of the nontrivial relators, rendered with the
/// presentation's own generator names.
fn normalized_relators(p: &Presentation) -> BTreeMap<Word, usize> {
    let mut m = BTreeMap::new();
    for r in p.relators() {
        let n = r.cyclic_normalize();
        if !n.is_empty() {
            *m.entry(n).or_insert(0) += 1;
        }
    }
    m
}

fn render_multiset(m: &BTreeMap<Word, usize>, names: &[String]) -> String {
    let items: Vec<String> = m
        .iter()
        .flat_map(|(w, &count)| std::iter::repeat_n(w.display_with(names).to_string(), count))
        .collect();
    format!("{{{}}}", items.join(", "))
}

/// Compares the core presentation of `d` with the double branched cover of its
/// Wirtinger-type group (unoriented variant for unoriented diagrams):
/// the relators must coincide after normalization under `y{i}.0 ↦ y_i`, and
/// the core group's invariants must match those of the direct double cover
/// times `Z`.
pub fn verify_core_double_cover(
    d: &Diagram,
    targets: &[FiniteGroup],
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let base = d.base_presentation();
    let core = d.core_presentation();
    let branched = branched_presentation(&base, 2)?;
    let direct_z =
        direct_branched_presentation(&base, 2, opts.axis)?.free_product(&Presentation::free(1));

    // for k = 2 generator y{i}.0 of the branched presentation has index i
    let names = core.generators();
    let mut checks = vec![Check::compare(
        "normalized relators",
        render_multiset(&normalized_relators(&core), names),
        render_multiset(&normalized_relators(&branched), names),
    )];
    checks.extend(invariant_checks(
        "",
        &core,
        &direct_z,
        targets,
        &opts.search,
    ));

    let subject = if d.is_oriented() {
        Subject::CoreDoubleCover
    } else {
        Subject::UnorientedDoubleCover
    };
    let inputs = format!(
        "diagram {} ({}, {} regions, {} arcs); targets {}",
        d.name(),
        if d.is_oriented() {
            "oriented"
        } else {
            "unoriented"
        },
        d.regions().len(),
        d.arcs().len(),
        target_list(targets)
    );
    Ok(VerificationReport::new(subject, inputs, checks))
}

/// Checks that appending the omitted last relator orbit to the branched
/// presentation changes no invariant.
pub fn verify_redundancy(
    base: &Presentation,
    k: usize,
    targets: &[FiniteGroup],
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let checks = redundancy_checks(base, k, targets, opts)?;
    let inputs = format!("{}; k = {k}; targets {}", base, target_list(targets));
    Ok(VerificationReport::new(Subject::Redundancy, inputs, checks))
}

fn redundancy_checks(
    base: &Presentation,
    k: usize,
    targets: &[FiniteGroup],
    opts: &VerifyOptions,
) -> Result<Vec<Check>, VerifyError> {
    let reduced = branched_presentation(base, k)?;
    let full = branched_presentation_with_last_orbit(base, k)?;
    Ok(invariant_checks(
        "with last orbit: ",
        &reduced,
        &full,
        targets,
        &opts.search,
    ))
}

/// Compares the reduced branched presentation of `base` at degree `k` with
/// the direct cover presentation free-producted with `k - 1` copies of `Z`,
/// and includes the redundancy checks.
pub fn verify_cyclic_cover(
    base: &Presentation,
    k: usize,
    targets: &[FiniteGroup],
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let branched = branched_presentation(base, k)?;
    let direct = direct_branched_presentation(base, k, opts.axis)?;
    let direct_free = direct.free_product(&Presentation::free(k - 1));

    let (n, m) = (base.generator_count(), base.relator_count());
    let mut checks = vec![Check::compare(
        "branched shape (generators, relators)",
        format!("({}, {})", n * (k - 1), m * (k - 1)),
        format!(
            "({}, {})",
            branched.generator_count(),
            branched.relator_count()
        ),
    )];
    checks.extend(invariant_checks(
        "",
        &branched,
        &direct_free,
        targets,
        &opts.search,
    ));
    checks.extend(redundancy_checks(base, k, targets, opts)?);

    let inputs = format!("{}; k = {k}; targets {}", base, target_list(targets));
    Ok(VerificationReport::new(
        Subject::CyclicCover,
        inputs,
        checks,
    ))
}

fn target_list(targets: &[FiniteGroup]) -> String {
    if targets.is_empty() {
        "none".to_string()
    } else {
        targets
            .iter()
            .map(|t| t.name())
            .collect::<Vec<_>>()
            .join(",")
    }
}
