//! Counting homomorphisms from a presented group into a finite group.
//!
//! The count covers every homomorphism, trivial and non-surjective ones
//! included, so it is multiplicative over free products. The search assigns
//! generator images depth first and tests each relator as soon as all of its
//! generators are assigned. The first generator only ranges over conjugacy
//! class representatives; each subtree is weighted by its class size.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::exec::Execution;
use crate::invariants::groups::FiniteGroup;
use crate::presentations::Presentation;
use crate::words::Sign;

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Nodes a worker visits between updates of the shared counter.
const FLUSH_INTERVAL: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomCountError {
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomSearch {
    /// Upper bound on assignment nodes visited over the whole search.
    pub budget: u64,
    pub execution: Execution,
}

impl Default for HomSearch {
    fn default() -> Self {
        HomSearch {
            budget: DEFAULT_NODE_BUDGET,
            execution: Execution::default(),
        }
    }
}

impl HomSearch {
    pub fn with_budget(budget: u64) -> Self {
        HomSearch {
            budget,
            ..Default::default()
        }
    }
}

pub fn hom_count(p: &Presentation, target: &FiniteGroup) -> Result<BigUint, HomCountError> {
    hom_count_with(p, target, &HomSearch::default())
}

/// A relator compiled against the search order: (depth, inverted) pairs.
type Compiled = Vec<(usize, bool)>;

struct Plan {
    /// Generators in assignment order.
    order: Vec<usize>,
    /// `checks[d]` holds relators whose last generator is assigned at depth d.
    checks: Vec<Vec<Compiled>>,
    /// Generators that occur in no relator.
    free: usize,
}

impl Plan {
    fn new(p: &Presentation) -> Plan {
        let n = p.generator_count();
        let relators: Vec<Vec<usize>> = p
            .relators()
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let mut g: Vec<usize> = r.letters().iter().map(|l| l.generator).collect();
                g.sort_unstable();
                g.dedup();
                g
            })
            .collect();
        let mut occurrences = vec![0usize; n];
        for r in p.relators() {
            for l in r.letters() {
                occurrences[l.generator] += 1;
            }
        }

        // greedy order: complete as many relators as early as possible
        let mut placed = vec![false; n];
        let mut order = Vec::new();
        let constrained = occurrences.iter().filter(|&&c| c > 0).count();
        while order.len() < constrained {
            let score = |g: usize| {
                let mut completes = 0;
                let mut touches = 0;
                for r in relators.iter().filter(|r| r.contains(&g)) {
                    let missing = r.iter().filter(|&&x| !placed[x]).count();
                    if missing == 1 {
                        completes += 1;
                    } else if missing < r.len() {
                        touches += 1;
                    }
                }
                (completes, touches, occurrences[g])
            };
            let best = (0..n)
                .filter(|&g| !placed[g] && occurrences[g] > 0)
                .max_by(|&a, &b| score(a).cmp(&score(b)).then(b.cmp(&a)))
                .expect("constrained generator left");
            placed[best] = true;
            order.push(best);
        }

        let mut depth_of = vec![usize::MAX; n];
        for (d, &g) in order.iter().enumerate() {
            depth_of[g] = d;
        }
        let mut checks = vec![Vec::new(); order.len()];
        for r in p.relators().iter().filter(|r| !r.is_empty()) {
            let compiled: Compiled = r
                .letters()
                .iter()
                .map(|l| (depth_of[l.generator], l.sign == Sign::Neg))
                .collect();
            let last = compiled.iter().map(|&(d, _)| d).max().expect("nonempty");
            checks[last].push(compiled);
        }
        Plan {
            order,
            checks,
            free: n - constrained,
        }
    }
}

struct Search<'a> {
    plan: &'a Plan,
    group: &'a FiniteGroup,
    budget: u64,
    nodes: &'a AtomicU64,
    aborted: &'a AtomicBool,
}

struct Worker<'a> {
    search: &'a Search<'a>,
    assignment: Vec<usize>,
    pending: u64,
}

impl<'a> Worker<'a> {
    fn new(search: &'a Search<'a>) -> Self {
        Worker {
            search,
            assignment: vec![0; search.plan.order.len()],
            pending: 0,
        }
    }

    fn satisfied(&self, depth: usize) -> bool {
        let g = self.search.group;
        self.search.plan.checks[depth].iter().all(|rel| {
            let mut acc = g.identity();
            for &(d, inverted) in rel {
                let x = self.assignment[d];
                acc = g.mul(acc, if inverted { g.inv(x) } else { x });
            }
            acc == g.identity()
        })
    }

    /// Records one node; returns false once the global budget is gone.
    fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending >= FLUSH_INTERVAL {
            self.flush();
        }
        !self.search.aborted.load(Ordering::Relaxed)
    }

    fn flush(&mut self) {
        let total = self.search.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if total > self.search.budget {
            self.search.aborted.store(true, Ordering::Relaxed);
        }
    }

    /// Places `value` at `depth` and counts completions below it.
    fn place(&mut self, depth: usize, value: usize) -> Option<u128> {
        self.assignment[depth] = value;
        if !self.tick() {
            return None;
        }
        if !self.satisfied(depth) {
            return Some(0);
        }
        if depth + 1 == self.assignment.len() {
            return Some(1);
        }
        let mut total = 0;
        for v in 0..self.search.group.order() {
            total += self.place(depth + 1, v)?;
        }
        Some(total)
    }
}

pub fn hom_count_with(
    p: &Presentation,
    target: &FiniteGroup,
    opts: &HomSearch,
) -> Result<BigUint, HomCountError> {
    let plan = Plan::new(p);
    let order = target.order();
    let free_factor = BigUint::from(order).pow(plan.free as u32);
    if plan.order.is_empty() {
        return Ok(free_factor);
    }

    let nodes = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let search = Search {
        plan: &plan,
        group: target,
        budget: opts.budget,
        nodes: &nodes,
        aborted: &aborted,
    };

    // tasks: (class representative, class size, optional second image)
    let classes = target.conjugacy_classes();
    let split_second = plan.order.len() > 1;
    let per_class = if split_second { order } else { 1 };
    let results: Vec<Option<u128>> =
        opts.execution
            .map_indexed(classes.len() * per_class, |task| {
                let class = &classes[task / per_class];
                let mut worker = Worker::new(&search);
                let count = if split_second {
                    worker.assignment[0] = class[0];
                    if !worker.tick() {
                        None
                    } else if !worker.satisfied(0) {
                        Some(0)
                    } else {
                        worker.place(1, task % per_class)
                    }
                } else {
                    worker.place(0, class[0])
                };
                worker.flush();
                count.map(|c| c * class.len() as u128)
            });

    if aborted.load(Ordering::Relaxed) || nodes.load(Ordering::Relaxed) > opts.budget {
        return Err(HomCountError::BudgetExhausted {
            budget: opts.budget,
        });
    }
    let total: u128 = results.into_iter().map(|r| r.expect("not aborted")).sum();
    Ok(BigUint::from(total) * free_factor)
}

/// Brute-force count over every assignment, without pruning or symmetry.
/// Exponential; meant as an independent check on small inputs.
pub fn hom_count_brute_force(p: &Presentation, target: &FiniteGroup) -> BigUint {
    let n = p.generator_count();
    let order = target.order();
    let mut assignment = vec![0usize; n];
    let mut count = BigUint::default();
    loop {
        let ok = p.relators().iter().all(|r| {
            let acc = r.letters().iter().fold(target.identity(), |acc, l| {
                let x = assignment[l.generator];
                target.mul(
                    acc,
                    if l.sign == Sign::Neg {
                        target.inv(x)
                    } else {
                        x
                    },
                )
            });
            acc == target.identity()
        });
        if ok {
            count += BigUint::one();
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            assignment[i] += 1;
            if assignment[i] < order {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    fn group(name: &str) -> FiniteGroup {
        FiniteGroup::builtin(name).unwrap()
    }

    fn core_trefoil() -> Presentation {
        let p = Presentation::from_names(&["a", "b", "c"], vec![]);
        let lookup = |n: &str| p.generator_index(n);
        let rels = ["a b^-1 a c^-1", "b c^-1 b a^-1", "c a^-1 c b^-1"]
            .iter()
            .map(|s| Word::parse_with(s, lookup).unwrap())
            .collect();
        p.with_relators(rels).unwrap()
    }

    #[test]
    fn examples() {
        let y = Presentation::from_names(&["y"], vec![]);
        assert_eq!(hom_count(&y, &group("S3")).unwrap(), 6u32.into());
        let x2 = Presentation::from_names(&["x"], vec![Word::power(0, 2)]);
        assert_eq!(hom_count(&x2, &group("Z3")).unwrap(), 1u32.into());
        assert_eq!(
            hom_count(&core_trefoil(), &group("S3")).unwrap(),
            18u32.into()
        );
    }

    #[test]
    fn brute_force_agrees_on_core_trefoil() {
        // 6³ = 216 assignments enumerated directly
        assert_eq!(
            hom_count_brute_force(&core_trefoil(), &group("S3")),
            18u32.into()
        );
        for name in ["Z3", "Z4", "D4", "Q8", "A4"] {
            let g = group(name);
            assert_eq!(
                hom_count(&core_trefoil(), &g).unwrap(),
                hom_count_brute_force(&core_trefoil(), &g),
                "{name}"
            );
        }
    }

    #[test]
    fn trivial_presentations() {
        let empty = Presentation::free(0);
        assert_eq!(hom_count(&empty, &group("S4")).unwrap(), 1u32.into());
        let free3 = Presentation::free(3);
        assert_eq!(hom_count(&free3, &group("S4")).unwrap(), 13824u32.into());
    }

    #[test]
    fn budget_is_reported_distinctly() {
        let search = HomSearch::with_budget(10);
        assert_eq!(
            hom_count_with(&core_trefoil(), &group("S4"), &search),
            Err(HomCountError::BudgetExhausted { budget: 10 })
        );
        // a relator-free group needs no search at all
        assert!(hom_count_with(&Presentation::free(5), &group("S4"), &search).is_ok());
    }

    #[test]
    fn budget_verdict_is_schedule_independent() {
        for budget in [50, 200, 1000, 5000] {
            let seq = hom_count_with(
                &core_trefoil(),
                &group("S4"),
                &HomSearch {
                    budget,
                    execution: Execution::Sequential,
                },
            );
            let par = hom_count_with(
                &core_trefoil(),
                &group("S4"),
                &HomSearch {
                    budget,
                    execution: Execution::Parallel,
                },
            );
            assert_eq!(seq, par, "budget {budget}");
        }
    }

    #[test]
    fn single_constrained_generator() {
        let p = Presentation::from_names(&["x", "y"], vec![Word::power(0, 3)]);
        // x ↦ element of order dividing 3 in S3: 3 choices; y free: 6
        assert_eq!(hom_count(&p, &group("S3")).unwrap(), 18u32.into());
        assert_eq!(hom_count_brute_force(&p, &group("S3")), 18u32.into());
    }
}
