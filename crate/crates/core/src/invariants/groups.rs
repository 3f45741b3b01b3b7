//! Finite groups given by multiplication tables, used as homomorphism targets.

use std::collections::HashMap;

use thiserror::Error;

/// Names accepted by [`FiniteGroup::builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "S3", "S4", "A4", "D4",
    "Q8",
];

/// Associativity is verified exhaustively up to this order.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("unknown group `{0}` (known: {known})", known = BUILTIN_NAMES.join(", "))]
    Unknown(String),
    #[error("table has {len} entries, expected {order}²")]
    BadShape { order: usize, len: usize },
    #[error("table entry {0} is out of range")]
    OutOfRange(usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("empty group")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from a row-major `order × order` product table.
    pub fn from_table(
        name: impl Into<String>,
        order: usize,
        table: Vec<u32>,
    ) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::Empty);
        }
        if table.len() != order * order {
            return Err(GroupError::BadShape {
                order,
                len: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= order) {
            return Err(GroupError::OutOfRange(bad as usize));
        }
        let mul = |a: usize, b: usize| table[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| mul(e, g) == g && mul(g, e) == g))
            .ok_or(GroupError::NoIdentity)?;
        let inverses = (0..order)
            .map(|g| {
                (0..order)
                    .find(|&h| mul(g, h) == identity && mul(h, g) == identity)
                    .ok_or(GroupError::NoInverse(g))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if order <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    let ab = mul(a, b);
                    for c in 0..order {
                        if mul(ab, c) != mul(a, mul(b, c)) {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name: name.into(),
            order,
            table,
            identity,
            inverses,
        })
    }

    /// The group generated by permutations of `0..degree`. Elements are
    /// numbered in breadth-first order from the identity.
    pub fn from_permutations(name: impl Into<String>, generators: &[Vec<usize>]) -> Self {
        let degree = generators.first().map_or(0, Vec::len);
        let compose =
            |a: &[usize], b: &[usize]| -> Vec<usize> { (0..degree).map(|x| a[b[x]]).collect() };
        let mut elements: Vec<Vec<usize>> = vec![(0..degree).collect()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(elements[0].clone(), 0)]);
        let mut frontier = 0;
        while frontier < elements.len() {
            for g in generators {
                let next = compose(&elements[frontier], g);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            frontier += 1;
        }
        let order = elements.len();
        let mut table = Vec::with_capacity(order * order);
        for a in &elements {
            for b in &elements {
                table.push(index[&compose(a, b)] as u32);
            }
        }
        FiniteGroup::from_table(name, order, table).expect("permutation groups are groups")
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
            .collect();
        FiniteGroup::from_table(format!("Z{n}"), n, table).expect("cyclic table")
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`.
    fn quaternion() -> Self {
        // units 1, i, j, k; unit product as (sign flip, unit)
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let mut table = Vec::with_capacity(64);
        for a in 0..8 {
            for b in 0..8 {
                let (flip, unit) = UNIT[a % 4][b % 4];
                let negative = (a >= 4) ^ (b >= 4) ^ flip;
                table.push((unit + if negative { 4 } else { 0 }) as u32);
            }
        }
        FiniteGroup::from_table("Q8", 8, table).expect("quaternion table")
    }

    pub fn builtin(name: &str) -> Result<Self, GroupError> {
        if let Some(n) = name.strip_prefix('Z').and_then(|d| d.parse::<usize>().ok()) {
            if (2..=12).contains(&n) && name == format!("Z{n}") {
                return Ok(FiniteGroup::cyclic(n));
            }
        }
        match name {
            "S3" => Ok(FiniteGroup::from_permutations(
                "S3",
                &[vec![1, 0, 2], vec![1, 2, 0]],
            )),
            "S4" => Ok(FiniteGroup::from_permutations(
                "S4",
                &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]],
            )),
            "A4" => Ok(FiniteGroup::from_permutations(
                "A4",
                &[vec![1, 2, 0, 3], vec![0, 2, 3, 1]],
            )),
            "D4" => Ok(FiniteGroup::from_permutations(
                "D4",
                &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]],
            )),
            "Q8" => Ok(FiniteGroup::quaternion()),
            _ => Err(GroupError::Unknown(name.to_string())),
        }
    }

    /// All builtin groups, in [`BUILTIN_NAMES`] order.
    pub fn all_builtin() -> Vec<FiniteGroup> {
        BUILTIN_NAMES
            .iter()
            .map(|n| FiniteGroup::builtin(n).expect("builtin"))
            .collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for g in 0..self.order {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order)
                .map(|h| self.mul(self.mul(h, g), self.inv(h)))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                class_of[c] = classes.len();
            }
            classes.push(class);
        }
        classes
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }
}
