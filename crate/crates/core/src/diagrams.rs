//! Combinatorial projection data: visibility regions and double-point arcs.
//!
//! A [`Diagram`] records, for each double-point stratum, the region passing
//! over it and the two regions meeting under it. Nothing checks that the
//! data comes from an actual embedding; the builders only read the
//! combinatorics.

use std::collections::HashSet;

use thiserror::Error;

use crate::presentations::{is_valid_name, Presentation};
use crate::words::{Letter, Sign, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("duplicate region name `{0}`")]
    DuplicateRegion(String),
    #[error("invalid region name `{0}`")]
    InvalidName(String),
    #[error("arc {arc} references region index {region}, but only {count} regions exist")]
    RegionOutOfRange {
        arc: usize,
        region: usize,
        count: usize,
    },
    #[error(
        "orientation required: diagram `{0}` is unoriented (use the unoriented Wirtinger builder)"
    )]
    OrientationRequired(String),
}

/// One double-point stratum. `over` is the higher region; `under_from` and
/// `under_to` are the lower regions it separates. Indices point into the
/// diagram's region list and may coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub over: usize,
    pub under_from: usize,
    pub under_to: usize,
    pub sign: Sign,
}

impl Arc {
    pub fn new(over: usize, under_from: usize, under_to: usize, sign: Sign) -> Self {
        Arc {
            over,
            under_from,
            under_to,
            sign,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    name: String,
    oriented: bool,
    regions: Vec<String>,
    arcs: Vec<Arc>,
}

impl Diagram {
    /// Validates names and indices. On an unoriented diagram every arc sign
    /// is stored as `+`.
    pub fn new(
        name: impl Into<String>,
        oriented: bool,
        regions: Vec<String>,
        mut arcs: Vec<Arc>,
    ) -> Result<Self, DiagramError> {
        let mut seen = HashSet::new();
        for r in &regions {
            if !is_valid_name(r) {
                return Err(DiagramError::InvalidName(r.clone()));
            }
            if !seen.insert(r.as_str()) {
                return Err(DiagramError::DuplicateRegion(r.clone()));
            }
        }
        for (i, a) in arcs.iter().enumerate() {
            for region in [a.over, a.under_from, a.under_to] {
                if region >= regions.len() {
                    return Err(DiagramError::RegionOutOfRange {
                        arc: i,
                        region,
                        count: regions.len(),
                    });
                }
            }
        }
        if !oriented {
            for a in &mut arcs {
                a.sign = Sign::Pos;
            }
        }
        Ok(Diagram {
            name: name.into(),
            oriented,
            regions,
            arcs,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    pub fn regions(&self) -> &[String] {
        &self.regions
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn region_index(&self, name: &str) -> Option<usize> {
        self.regions.iter().position(|r| r == name)
    }

    /// Wirtinger-type presentation: `x_i x_p x_i⁻¹ x_q⁻¹` for a positive
    /// arc, `x_i x_p⁻¹ x_i⁻¹ x_q` for a negative one.
    pub fn wirtinger_presentation(&self) -> Result<Presentation, DiagramError> {
        if !self.oriented {
            return Err(DiagramError::OrientationRequired(self.name.clone()));
        }
        Ok(self.presentation(self.arcs.iter().map(wirtinger_relator).collect()))
    }

    /// Core (quandle-type) presentation with one relator `y_i y_p⁻¹ y_i y_q⁻¹`
    /// per arc. Arc signs are ignored.
    pub fn core_presentation(&self) -> Presentation {
        let relators = self
            .arcs
            .iter()
            .map(|a| {
                Word::new(vec![
                    Letter::pos(a.over),
                    Letter::neg(a.under_from),
                    Letter::pos(a.over),
                    Letter::neg(a.under_to),
                ])
            })
            .collect();
        self.presentation(relators)
    }

    /// Wirtinger relators read with every sign `+`, plus `x_i²` for every
    /// region. Valid for any diagram.
    pub fn unoriented_wirtinger(&self) -> Presentation {
        let mut relators: Vec<Word> = self
            .arcs
            .iter()
            .map(|a| {
                wirtinger_relator(&Arc {
                    sign: Sign::Pos,
                    ..*a
                })
            })
            .collect();
        relators.extend((0..self.regions.len()).map(|i| Word::power(i, 2)));
        self.presentation(relators)
    }

    /// The group every cover construction starts from: the Wirtinger
    /// presentation when oriented, the unoriented variant otherwise.
    pub fn base_presentation(&self) -> Presentation {
        if self.oriented {
            self.wirtinger_presentation().expect("oriented")
        } else {
            self.unoriented_wirtinger()
        }
    }

    fn presentation(&self, relators: Vec<Word>) -> Presentation {
        Presentation::new(self.regions.clone(), relators).expect("diagram indices are validated")
    }
}

fn wirtinger_relator(a: &Arc) -> Word {
    let (i, p, q) = (a.over, a.under_from, a.under_to);
    match a.sign {
        Sign::Pos => Word::new(vec![
            Letter::pos(i),
            Letter::pos(p),
            Letter::neg(i),
            Letter::neg(q),
        ]),
        Sign::Neg => Word::new(vec![
            Letter::pos(i),
            Letter::neg(p),
            Letter::neg(i),
            Letter::pos(q),
        ]),
    }
}
