//! Finitely presented groups as plain data.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::matrix::IntegerMatrix;
use crate::words::{Letter, Sign, Word};

/// Longest replacement word `simplify` will substitute for an eliminated
/// generator.
pub const MAX_SUBSTITUTION_LEN: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("relator {relator} references generator index {generator}, but only {count} generators exist")]
    GeneratorOutOfRange {
        relator: usize,
        generator: usize,
        count: usize,
    },
}

/// Whether `name` can be used as a generator or region name in the text
/// format: nonempty, no whitespace, no `^`, no `=`, no `#`, and not `1`.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "1"
        && !name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '^' | '=' | '#' | ',' | '<' | '>' | '|'))
}

/// A group presentation `<generators | relators>`. Relators are stored
/// freely reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !is_valid_name(g) {
                return Err(PresentationError::InvalidName(g.clone()));
            }
            if !seen.insert(g.as_str()) {
                return Err(PresentationError::DuplicateGenerator(g.clone()));
            }
        }
        for (i, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_generator().filter(|&g| g >= generators.len()) {
                return Err(PresentationError::GeneratorOutOfRange {
                    relator: i,
                    generator: g,
                    count: generators.len(),
                });
            }
        }
        let relators = relators.iter().map(Word::free_reduce).collect();
        Ok(Presentation {
            generators,
            relators,
        })
    }

    /// Convenience constructor from string slices; panics on invalid input.
    pub fn from_names(generators: &[&str], relators: Vec<Word>) -> Self {
        Presentation::new(generators.iter().map(|s| s.to_string()).collect(), relators)
            .expect("valid presentation")
    }

    /// Free group of the given rank on `x1, ..., xn`.
    pub fn free(rank: usize) -> Self {
        Presentation {
            generators: (1..=rank).map(|i| format!("x{i}")).collect(),
            relators: Vec::new(),
        }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Same group with the relator list replaced; relators are reduced.
    pub fn with_relators(&self, relators: Vec<Word>) -> Result<Self, PresentationError> {
        Presentation::new(self.generators.clone(), relators)
    }

    pub fn with_generator_names(&self, names: Vec<String>) -> Result<Self, PresentationError> {
        assert_eq!(
            names.len(),
            self.generators.len(),
            "generator count mismatch"
        );
        Presentation::new(names, self.relators.clone())
    }

    /// Reorders generators so that old generator `i` becomes `perm[i]`.
    pub fn permute_generators(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.generators.len());
        let mut names = vec![String::new(); perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            names[p] = self.generators[i].clone();
        }
        let relators = self
            .relators
            .iter()
            .map(|r| r.map_generators(|g| perm[g]))
            .collect();
        Presentation::new(names, relators).expect("permutation preserves validity")
    }

    /// Free product `self * other`. Names from `other` that collide get a
    /// `'` suffix until unique.
    pub fn free_product(&self, other: &Presentation) -> Presentation {
        let mut used: HashSet<String> = self.generators.iter().cloned().collect();
        let mut generators = self.generators.clone();
        for name in &other.generators {
            let fresh = fresh_name(name, &used);
            used.insert(fresh.clone());
            generators.push(fresh);
        }
        let shift = self.generators.len();
        let mut relators = self.relators.clone();
        relators.extend(
            other
                .relators
                .iter()
                .map(|r| r.map_generators(|g| g + shift)),
        );
        Presentation {
            generators,
            relators,
        }
    }

    /// Appends `m` free generators named `x<index>` (1-based position).
    pub fn add_free_generators(&self, m: usize) -> Presentation {
        let mut used: HashSet<String> = self.generators.iter().cloned().collect();
        let mut generators = self.generators.clone();
        for _ in 0..m {
            let fresh = fresh_name(&format!("x{}", generators.len() + 1), &used);
            used.insert(fresh.clone());
            generators.push(fresh);
        }
        Presentation {
            generators,
            relators: self.relators.clone(),
        }
    }

    /// Exponent-sum matrix: entry (s, i) is the exponent of generator `i`
    /// in relator `s`.
    pub fn relator_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.relators.len(), self.generators.len());
        for (s, r) in self.relators.iter().enumerate() {
            let mut row = vec![0i64; self.generators.len()];
            for l in r.letters() {
                row[l.generator] += l.sign.value();
            }
            for (i, v) in row.into_iter().enumerate() {
                m.set(s, i, BigInt::from(v));
            }
        }
        m
    }

    /// Conservative Tietze simplification: drops trivial and duplicate
    /// relators and eliminates generators that occur exactly once in some
    /// relator, when the replacement word has at most
    /// [`MAX_SUBSTITUTION_LEN`] letters. Repeats until nothing changes.
    pub fn simplify(&self) -> Presentation {
        let mut generators = self.generators.clone();
        let mut relators: Vec<Word> = self.relators.clone();
        loop {
            relators = relators
                .iter()
                .map(Word::cyclically_reduce)
                .filter(|r| !r.is_empty())
                .collect();
            let mut seen = HashSet::new();
            relators.retain(|r| seen.insert(r.cyclic_normalize()));

            let Some((ri, g, replacement)) = elimination_candidate(&relators) else {
                break;
            };
            relators.remove(ri);
            let shift = |x: usize| if x > g { x - 1 } else { x };
            let replacement = replacement.map_generators(shift);
            let replacement_inv = replacement.invert();
            relators = relators
                .iter()
                .map(|r| {
                    r.substitute(|l| match (l.generator == g, l.sign) {
                        (true, Sign::Pos) => replacement.clone(),
                        (true, Sign::Neg) => replacement_inv.clone(),
                        (false, sign) => Word::letter(Letter::new(shift(l.generator), sign)),
                    })
                })
                .collect();
            generators.remove(g);
        }
        Presentation {
            generators,
            relators,
        }
    }
}

/// Finds the shortest substitution `g = w` readable from a single relator in
/// which `g` occurs exactly once.
fn elimination_candidate(relators: &[Word]) -> Option<(usize, usize, Word)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (ri, r) in relators.iter().enumerate() {
        let len = r.len() - 1;
        if len > MAX_SUBSTITUTION_LEN {
            continue;
        }
        let mut gens: Vec<usize> = r.letters().iter().map(|l| l.generator).collect();
        gens.sort_unstable();
        gens.dedup();
        for g in gens {
            if r.occurrences(g) != 1 {
                continue;
            }
            // ties go to the later generator so earlier names survive
            let better = match best {
                None => true,
                Some((blen, _, bg)) => len < blen || (len == blen && g > bg),
            };
            if better {
                best = Some((len, ri, g));
            }
        }
    }
    let (_, ri, g) = best?;
    let r = &relators[ri];
    let pos = r.letters().iter().position(|l| l.generator == g)?;
    let rotated = r.rotate_left(pos);
    let rest = Word::new(rotated.letters()[1..].to_vec());
    // g·rest = 1 gives g = rest⁻¹; g⁻¹·rest = 1 gives g = rest
    let replacement = if rotated.letters()[0].sign == Sign::Pos {
        rest.invert()
    } else {
        rest
    };
    Some((ri, g, replacement.free_reduce()))
}

fn fresh_name(base: &str, used: &HashSet<String>) -> String {
    let mut name = base.to_string();
    while used.contains(&name) {
        name.push('\'');
    }
    name
}

/// Renders `<a, b | a b^-1, ...>`.
impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} |", self.generators.join(", "))?;
        for (i, r) in self.relators.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write!(f, "{}", r.display_with(&self.generators))?;
        }
        f.write_str(">")
    }
}
