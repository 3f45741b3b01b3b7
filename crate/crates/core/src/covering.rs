//! Cyclic covers of presentations whose relators are balanced modulo `k`.
//!
//! Everything here is built on one letter-streaming Reidemeister–Schreier
//! rewriter over the transversal `{x_s^u : 0 ≤ u < k}`, where `x_s` is either
//! an adjoined free generator (the kernel and branched constructions) or an
//! existing generator (the direct construction).
//!
//! For the adjoined case the free generators of the kernel are
//! `t = x_s^k` and `τ^j(y_i) = x_s^j x_i x_s^{-(j+1)}` for `0 ≤ j < k`, where
//! `τ` is conjugation by `x_s`. The rewriter emits words in exactly that basis.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exec::Execution;
use crate::presentations::Presentation;
use crate::words::{Letter, Sign, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("cover degree must be at least 2, got {0}")]
    InvalidDegree(usize),
    #[error("word is not in the kernel: exponent sum is {residue} mod {k}")]
    NotInKernel { residue: usize, k: usize },
    #[error("relator {relator} has exponent sum {residue} mod {k}; it must be 0")]
    UnbalancedRelator {
        relator: usize,
        residue: usize,
        k: usize,
    },
    #[error("base presentation has no generators")]
    EmptyBase,
    #[error("generator index {index} is out of range for {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },
}

/// Free generator of the kernel alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelSymbol {
    /// `t = x_s^k`.
    T,
    /// `τ^sheet(y_generator)`. `generator` is an index in the ambient
    /// alphabet and is never the special generator.
    Y { generator: usize, sheet: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelLetter {
    pub symbol: KernelSymbol,
    pub sign: Sign,
}

impl KernelLetter {
    pub fn new(symbol: KernelSymbol, sign: Sign) -> Self {
        KernelLetter { symbol, sign }
    }

    fn t(sign: Sign) -> Self {
        KernelLetter::new(KernelSymbol::T, sign)
    }

    fn y(generator: usize, sheet: usize, sign: Sign) -> Self {
        KernelLetter::new(KernelSymbol::Y { generator, sheet }, sign)
    }

    pub fn inverse(self) -> Self {
        KernelLetter::new(self.symbol, -self.sign)
    }

    fn cancels(self, other: KernelLetter) -> bool {
        self.symbol == other.symbol && self.sign != other.sign
    }
}

/// A word over the kernel alphabet `{t, τ^j(y_i)}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct KernelWord(Vec<KernelLetter>);

impl KernelWord {
    pub fn new(letters: Vec<KernelLetter>) -> Self {
        KernelWord(letters)
    }

    pub fn reduced(letters: impl IntoIterator<Item = KernelLetter>) -> Self {
        let mut out: Vec<KernelLetter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        KernelWord(out)
    }

    pub fn letters(&self) -> &[KernelLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn free_reduce(&self) -> KernelWord {
        KernelWord::reduced(self.0.iter().copied())
    }

    pub fn concat(&self, other: &KernelWord) -> KernelWord {
        KernelWord(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn invert(&self) -> KernelWord {
        KernelWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }
}

/// Prints `t`, `y1.0`, `y2.1^-1`, ...; generator numbers are 1-based.
impl fmt::Display for KernelWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (n, l) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            match l.symbol {
                KernelSymbol::T => f.write_str("t")?,
                KernelSymbol::Y { generator, sheet } => write!(f, "y{}.{}", generator + 1, sheet)?,
            }
            if l.sign == Sign::Neg {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed kernel token `{0}`")]
pub struct KernelParseError(pub String);

impl FromStr for KernelWord {
    type Err = KernelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens == ["1"] {
            return Ok(KernelWord::default());
        }
        tokens
            .into_iter()
            .map(|tok| {
                let bad = || KernelParseError(tok.to_string());
                let (body, sign) = match tok.split_once('^') {
                    None => (tok, Sign::Pos),
                    Some((b, "-1")) => (b, Sign::Neg),
                    Some(_) => return Err(bad()),
                };
                if body == "t" {
                    return Ok(KernelLetter::t(sign));
                }
                let (g, j) = body
                    .strip_prefix('y')
                    .and_then(|r| r.split_once('.'))
                    .ok_or_else(bad)?;
                let canonical = |d: &str| {
                    !d.is_empty()
                        && d.bytes().all(|b| b.is_ascii_digit())
                        && (d == "0" || !d.starts_with('0'))
                };
                if !canonical(g) || !canonical(j) {
                    return Err(bad());
                }
                let g: usize = g.parse().map_err(|_| bad())?;
                let j: usize = j.parse().map_err(|_| bad())?;
                if g == 0 {
                    return Err(bad());
                }
                Ok(KernelLetter::y(g - 1, j, sign))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(KernelWord)
    }
}

fn check_degree(k: usize) -> Result<(), CoverError> {
    if k < 2 {
        Err(CoverError::InvalidDegree(k))
    } else {
        Ok(())
    }
}

/// Image of `w` under the map sending every generator to `1 ∈ Z_k`.
pub fn gk_image(w: &Word, k: usize) -> usize {
    w.exponent_sum().rem_euclid(k as i64) as usize
}

/// `x_special^j · w · x_special^{-j}`, reduced. Negative `j` conjugates the
/// other way.
pub fn tau_power_conjugate(w: &Word, j: i64, special: usize) -> Word {
    w.conjugate(&Word::power(special, j))
}

/// Rewrites a kernel element into the `{t, τ^j(y_i)}` basis by streaming its
/// letters through the coset automaton.
pub fn rewrite_kernel_word(w: &Word, k: usize, special: usize) -> Result<KernelWord, CoverError> {
    check_degree(k)?;
    let residue = gk_image(w, k);
    if residue != 0 {
        return Err(CoverError::NotInKernel { residue, k });
    }
    let mut out = Vec::with_capacity(w.len() + w.len() / k + 1);
    let mut u = 0usize;
    for l in w.letters() {
        let is_special = l.generator == special;
        match l.sign {
            Sign::Pos => {
                if !is_special {
                    out.push(KernelLetter::y(l.generator, u, Sign::Pos));
                }
                if u == k - 1 {
                    out.push(KernelLetter::t(Sign::Pos));
                }
                u = (u + 1) % k;
            }
            Sign::Neg => {
                if u == 0 {
                    out.push(KernelLetter::t(Sign::Neg));
                }
                u = (u + k - 1) % k;
                if !is_special {
                    out.push(KernelLetter::y(l.generator, u, Sign::Neg));
                }
            }
        }
    }
    debug_assert_eq!(u, 0);
    Ok(KernelWord::reduced(out))
}

/// Substitutes `t ↦ x_s^k` and `τ^j(y_i) ↦ x_s^j x_i x_s^{-(j+1)}`.
pub fn expand_kernel_word(kw: &KernelWord, k: usize, special: usize) -> Word {
    let mut letters = Vec::new();
    for l in kw.letters() {
        let image = match l.symbol {
            KernelSymbol::T => Word::power(special, k as i64),
            KernelSymbol::Y { generator, sheet } => Word::power(special, sheet as i64)
                .concat(&Word::letter(Letter::pos(generator)))
                .concat(&Word::power(special, -(sheet as i64 + 1))),
        };
        match l.sign {
            Sign::Pos => letters.extend_from_slice(image.letters()),
            Sign::Neg => letters.extend_from_slice(image.invert().letters()),
        }
    }
    Word::reduced(letters)
}

fn check_balanced(base: &Presentation, k: usize) -> Result<(), CoverError> {
    check_degree(k)?;
    for (s, r) in base.relators().iter().enumerate() {
        let residue = gk_image(r, k);
        if residue != 0 {
            return Err(CoverError::UnbalancedRelator {
                relator: s,
                residue,
                k,
            });
        }
    }
    Ok(())
}

/// Kernel rewrites of `τ^j(r_s)` for every relator and the given sheets, in
/// `(s ascending, j ascending)` order.
fn kernel_relator_orbits(
    base: &Presentation,
    k: usize,
    sheets: std::ops::Range<usize>,
    exec: Execution,
) -> Vec<KernelWord> {
    let special = base.generator_count();
    let per = sheets.len();
    let start = sheets.start;
    exec.map_indexed(base.relator_count() * per, |idx| {
        let (s, j) = (idx / per, start + idx % per);
        let conj = tau_power_conjugate(&base.relators()[s], j as i64, special);
        rewrite_kernel_word(&conj, k, special)
            .expect("conjugates of balanced relators lie in the kernel")
    })
}

fn y_name(i: usize, j: usize) -> String {
    format!("y{}.{}", i + 1, j)
}

/// Presentation of the kernel of `G * Z → Z_k` (all generators to 1), where
/// the adjoined `Z` is the special generator. Generators are `t` followed by
/// `y{i}.{j}` for `i` ascending then `j` ascending; relators are the rewrites
/// of `τ^j(r_s)` for `0 ≤ j < k`.
pub fn kernel_presentation(base: &Presentation, k: usize) -> Result<Presentation, CoverError> {
    kernel_presentation_with(base, k, Execution::default())
}

pub fn kernel_presentation_with(
    base: &Presentation,
    k: usize,
    exec: Execution,
) -> Result<Presentation, CoverError> {
    check_balanced(base, k)?;
    let n = base.generator_count();
    let index = |sym: KernelSymbol| match sym {
        KernelSymbol::T => 0,
        KernelSymbol::Y { generator, sheet } => 1 + generator * k + sheet,
    };
    let mut names = vec!["t".to_string()];
    names.extend((0..n).flat_map(|i| (0..k).map(move |j| y_name(i, j))));
    let relators = kernel_relator_orbits(base, k, 0..k, exec)
        .iter()
        .map(|kw| {
            kw.letters()
                .iter()
                .map(|l| Letter::new(index(l.symbol), l.sign))
                .collect()
        })
        .collect();
    Ok(Presentation::new(names, relators).expect("kernel alphabet is consistent"))
}

/// Deletes `t`, replaces `τ^{k-1}(y_i)` by `(y_i τ(y_i) ⋯ τ^{k-2}(y_i))⁻¹`,
/// and indexes `τ^j(y_i)` as `i (k-1) + j`.
fn eliminate_last_sheet(kw: &KernelWord, k: usize) -> Word {
    let m = k - 1;
    Word::reduced(kw.letters().iter().flat_map(|l| -> Vec<Letter> {
        match l.symbol {
            KernelSymbol::T => Vec::new(),
            KernelSymbol::Y { generator, sheet } if sheet < m => {
                vec![Letter::new(generator * m + sheet, l.sign)]
            }
            KernelSymbol::Y { generator, .. } => {
                let product: Vec<Letter> = (0..m).map(|j| Letter::pos(generator * m + j)).collect();
                match l.sign {
                    // τ^{k-1}(y_i) = (y_i ⋯ τ^{k-2}(y_i))⁻¹
                    Sign::Pos => product.iter().rev().map(|x| x.inverse()).collect(),
                    Sign::Neg => product,
                }
            }
        }
    }))
}

fn branched_names(n: usize, k: usize) -> Vec<String> {
    (0..n)
        .flat_map(|i| (0..k - 1).map(move |j| y_name(i, j)))
        .collect()
}

/// Presentation of the kernel of `G * Z → Z_k` modulo `k`-th powers of all
/// generators, on the `n(k-1)` generators `τ^j(y_i)`, `j < k-1`. The sheet
/// `k-1` relator orbit is omitted since it follows from the others.
pub fn branched_presentation(base: &Presentation, k: usize) -> Result<Presentation, CoverError> {
    branched_presentation_with(base, k, Execution::default())
}

pub fn branched_presentation_with(
    base: &Presentation,
    k: usize,
    exec: Execution,
) -> Result<Presentation, CoverError> {
    check_balanced(base, k)?;
    let relators = kernel_relator_orbits(base, k, 0..k - 1, exec)
        .iter()
        .map(|kw| eliminate_last_sheet(kw, k))
        .collect();
    Ok(
        Presentation::new(branched_names(base.generator_count(), k), relators)
            .expect("consistent alphabet"),
    )
}

/// [`branched_presentation`] with the omitted sheet `k-1` orbit appended,
/// processed the same way. Presents the same group.
pub fn branched_presentation_with_last_orbit(
    base: &Presentation,
    k: usize,
) -> Result<Presentation, CoverError> {
    check_balanced(base, k)?;
    let relators = kernel_relator_orbits(base, k, 0..k, Execution::default())
        .iter()
        .map(|kw| eliminate_last_sheet(kw, k))
        .collect();
    Ok(
        Presentation::new(branched_names(base.generator_count(), k), relators)
            .expect("consistent alphabet"),
    )
}

/// The same group as [`branched_presentation`] before any elimination: the
/// kernel presentation plus the relators `t` and `y_i τ(y_i) ⋯ τ^{k-1}(y_i)`.
pub fn branched_presentation_unreduced(
    base: &Presentation,
    k: usize,
) -> Result<Presentation, CoverError> {
    let kernel = kernel_presentation(base, k)?;
    let n = base.generator_count();
    let mut relators = kernel.relators().to_vec();
    relators.push(Word::letter(Letter::pos(0)));
    relators.extend((0..n).map(|i| (0..k).map(|j| Letter::pos(1 + i * k + j)).collect::<Word>()));
    Ok(kernel.with_relators(relators).expect("consistent alphabet"))
}

/// Schreier-generator bookkeeping for the transversal `{x_a^u}` inside the
/// base group itself.
struct SchreierTable {
    k: usize,
    axis: usize,
    /// `slot[u * n + i]` is the generator index of `s(u, x_i)`, or `None`
    /// when that Schreier generator is trivial.
    slot: Vec<Option<usize>>,
    n: usize,
}

impl SchreierTable {
    fn new(n: usize, k: usize, axis: usize) -> Self {
        let mut slot = vec![None; n * k];
        let mut next = 0;
        for i in 0..n {
            for u in 0..k {
                if i == axis && u < k - 1 {
                    continue;
                }
                slot[u * n + i] = Some(next);
                next += 1;
            }
        }
        SchreierTable { k, axis, slot, n }
    }

    fn rewrite(&self, w: &Word) -> Word {
        let k = self.k;
        let mut u = 0;
        let mut out = Vec::new();
        for l in w.letters() {
            match l.sign {
                Sign::Pos => {
                    if let Some(g) = self.slot[u * self.n + l.generator] {
                        out.push(Letter::pos(g));
                    }
                    u = (u + 1) % k;
                }
                Sign::Neg => {
                    u = (u + k - 1) % k;
                    if let Some(g) = self.slot[u * self.n + l.generator] {
                        out.push(Letter::neg(g));
                    }
                }
            }
        }
        debug_assert_eq!(u, 0);
        Word::reduced(out)
    }

    fn names(&self, base: &Presentation) -> Vec<String> {
        let mut names = Vec::new();
        for i in 0..self.n {
            for u in 0..self.k {
                if self.slot[u * self.n + i].is_some() {
                    names.push(format!("{}.{}", base.generators()[i], u));
                }
            }
        }
        names
    }

    fn axis_power(&self, e: i64) -> Word {
        Word::power(self.axis, e)
    }
}

/// Presentation of the kernel of `G → Z_k` (all generators to 1) modulo the
/// normal closure of every generator's `k`-th power, by Reidemeister–Schreier
/// over the transversal of powers of generator `axis`.
///
/// Generators are the nontrivial Schreier generators
/// `s(u, x_i) = x_a^u x_i x_a^{-((u+1) mod k)}`, named `<name>.<u>`.
pub fn direct_branched_presentation(
    base: &Presentation,
    k: usize,
    axis: usize,
) -> Result<Presentation, CoverError> {
    direct_branched_presentation_with(base, k, axis, Execution::default())
}

pub fn direct_branched_presentation_with(
    base: &Presentation,
    k: usize,
    axis: usize,
    exec: Execution,
) -> Result<Presentation, CoverError> {
    check_degree(k)?;
    let n = base.generator_count();
    if n == 0 {
        return Err(CoverError::EmptyBase);
    }
    if axis >= n {
        return Err(CoverError::GeneratorOutOfRange {
            index: axis,
            count: n,
        });
    }
    check_balanced(base, k)?;
    let table = SchreierTable::new(n, k, axis);
    let m = base.relator_count();
    // relator conjugates first, then conjugates of every k-th power
    let relators = exec.map_indexed((m + n) * k, |idx| {
        let (block, u) = (idx / k, (idx % k) as i64);
        let inner = if block < m {
            base.relators()[block].clone()
        } else {
            Word::power(block - m, k as i64)
        };
        let conj = table
            .axis_power(u)
            .concat(&inner)
            .concat(&table.axis_power(-u));
        table.rewrite(&conj)
    });
    Ok(Presentation::new(table.names(base), relators).expect("consistent alphabet"))
}

/// A base presentation together with a cover degree; bundles the three
/// constructions behind one validated value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    base: Presentation,
    k: usize,
}

impl CoverSpec {
    pub fn new(base: Presentation, k: usize) -> Result<Self, CoverError> {
        check_balanced(&base, k)?;
        Ok(CoverSpec { base, k })
    }

    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kernel(&self) -> Presentation {
        kernel_presentation(&self.base, self.k).expect("validated")
    }

    pub fn branched(&self) -> Presentation {
        branched_presentation(&self.base, self.k).expect("validated")
    }

    pub fn direct(&self, axis: usize) -> Result<Presentation, CoverError> {
        direct_branched_presentation(&self.base, self.k, axis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn kw(s: &str) -> KernelWord {
        s.parse().unwrap()
    }

    fn trefoil() -> Presentation {
        Presentation::free(3)
            .with_relators(vec![
                w("x1 x2 x1^-1 x3^-1"),
                w("x2 x3 x2^-1 x1^-1"),
                w("x3 x1 x3^-1 x2^-1"),
            ])
            .unwrap()
    }

    #[test]
    fn gk_examples() {
        assert_eq!(gk_image(&w("x1 x2 x1^-1 x3^-1"), 3), 0);
        assert_eq!(gk_image(&w("x1 x2 x1"), 2), 1);
        for k in [2, 3, 5] {
            assert_eq!(gk_image(&Word::power(3, k as i64), k), 0);
        }
        assert_eq!(gk_image(&w("x1^-1"), 3), 2);
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_power_conjugate(&w("x1"), 1, 3), w("x4 x1 x4^-1"));
        assert_eq!(tau_power_conjugate(&w("x1 x2"), 0, 3), w("x1 x2"));
        assert_eq!(tau_power_conjugate(&w("x4 x1 x4^-1"), -1, 3), w("x1"));
    }

    #[test]
    fn rewrite_examples() {
        // special generator x3 (index 2)
        assert_eq!(
            rewrite_kernel_word(&w("x1 x2^-1"), 2, 2).unwrap(),
            kw("y1.0 y2.0^-1")
        );
        for k in [2, 3, 5] {
            assert_eq!(
                rewrite_kernel_word(&Word::power(4, k as i64), k, 4).unwrap(),
                kw("t")
            );
        }
        // special x2 (index 1)
        assert_eq!(
            rewrite_kernel_word(&w("x1 x1"), 2, 1).unwrap(),
            kw("y1.0 y1.1 t")
        );
    }

    #[test]
    fn rewrite_of_wirtinger_relator_matches_hand_trace() {
        // x_i x_p x_i⁻¹ x_q⁻¹ with i, p, q = 1, 2, 3 and special x4, k = 2
        let r = rewrite_kernel_word(&w("x1 x2 x1^-1 x3^-1"), 2, 3).unwrap();
        assert_eq!(r, kw("y1.0 y2.1 y1.1^-1 y3.0^-1"));
    }

    #[test]
    fn rewrite_rejects_non_kernel() {
        assert_eq!(
            rewrite_kernel_word(&w("x1 x2 x1"), 2, 3),
            Err(CoverError::NotInKernel { residue: 1, k: 2 })
        );
        assert_eq!(
            rewrite_kernel_word(&w("x1"), 1, 3),
            Err(CoverError::InvalidDegree(1))
        );
    }

    #[test]
    fn expand_examples() {
        assert_eq!(expand_kernel_word(&kw("t"), 3, 1), w("x2 x2 x2"));
        assert_eq!(expand_kernel_word(&kw("y1.0"), 3, 1), w("x1 x2^-1"));
        assert_eq!(
            expand_kernel_word(&kw("y1.2^-1"), 3, 1),
            w("x2 x2 x2 x1^-1 x2^-1 x2^-1")
        );
    }

    #[test]
    fn kernel_word_text_round_trip() {
        for s in ["t", "y1.0 y2.1^-1 t^-1", "1", "y12.10"] {
            assert_eq!(kw(s).to_string(), s);
        }
        for bad in ["y0.1", "y1", "y1.x", "t^2", "z", "y01.0"] {
            assert!(bad.parse::<KernelWord>().is_err(), "{bad}");
        }
    }

    #[test]
    fn kernel_presentation_examples() {
        let p = kernel_presentation(&Presentation::free(1), 2).unwrap();
        assert_eq!(p.generators(), ["t", "y1.0", "y1.1"]);
        assert_eq!(p.relator_count(), 0);
        let p = kernel_presentation(&trefoil(), 2).unwrap();
        assert_eq!((p.generator_count(), p.relator_count()), (7, 6));
        let p = kernel_presentation(&Presentation::free(1), 5).unwrap();
        assert_eq!((p.generator_count(), p.relator_count()), (6, 0));
    }

    #[test]
    fn kernel_presentation_rejects_unbalanced() {
        let p = Presentation::free(2)
            .with_relators(vec![w("x1 x2")])
            .unwrap();
        assert_eq!(
            kernel_presentation(&p, 3),
            Err(CoverError::UnbalancedRelator {
                relator: 0,
                residue: 2,
                k: 3
            })
        );
        assert!(kernel_presentation(&p, 2).is_ok());
    }

    #[test]
    fn branched_examples() {
        let p = branched_presentation(&Presentation::free(1), 2).unwrap();
        assert_eq!(p.generators(), ["y1.0"]);
        assert_eq!(p.relator_count(), 0);

        let p = branched_presentation(&trefoil(), 2).unwrap();
        let rel: Vec<String> = p
            .relators()
            .iter()
            .map(|r| r.display_with(p.generators()).to_string())
            .collect();
        assert_eq!(
            rel,
            [
                "y1.0 y2.0^-1 y1.0 y3.0^-1",
                "y2.0 y3.0^-1 y2.0 y1.0^-1",
                "y3.0 y1.0^-1 y3.0 y2.0^-1"
            ]
        );

        let p = branched_presentation(&trefoil(), 3).unwrap();
        assert_eq!((p.generator_count(), p.relator_count()), (6, 6));
    }

    #[test]
    fn unreduced_branched_shape() {
        let p = branched_presentation_unreduced(&trefoil(), 3).unwrap();
        assert_eq!(p.generator_count(), 10);
        assert_eq!(p.relator_count(), 9 + 1 + 3);
        assert_eq!(p.relators()[9], w("x1"));
        let with_last = branched_presentation_with_last_orbit(&trefoil(), 3).unwrap();
        assert_eq!(with_last.relator_count(), 9);
    }

    #[test]
    fn direct_examples() {
        let p = direct_branched_presentation(&Presentation::free(1), 3, 0).unwrap();
        assert_eq!(p.generators(), ["x1.2"]);
        assert!(p.relators().iter().all(|r| r == &w("x1")));
        for n in 1..=4 {
            for k in 2..=5 {
                let p = direct_branched_presentation(&Presentation::free(n), k, 0).unwrap();
                assert_eq!(p.generator_count(), k * (n - 1) + 1);
                assert_eq!(p.relator_count(), n * k);
            }
        }
    }

    #[test]
    fn direct_errors() {
        let empty = Presentation::free(0);
        assert_eq!(
            direct_branched_presentation(&empty, 2, 0),
            Err(CoverError::EmptyBase)
        );
        assert_eq!(
            direct_branched_presentation(&trefoil(), 2, 3),
            Err(CoverError::GeneratorOutOfRange { index: 3, count: 3 })
        );
        let p = Presentation::free(2).with_relators(vec![w("x1")]).unwrap();
        assert!(matches!(
            direct_branched_presentation(&p, 2, 0),
            Err(CoverError::UnbalancedRelator { .. })
        ));
    }

    #[test]
    fn cover_spec_bundles_constructions() {
        let spec = CoverSpec::new(trefoil(), 2).unwrap();
        assert_eq!(spec.kernel().generator_count(), 7);
        assert_eq!(spec.branched().generator_count(), 3);
        assert_eq!(spec.direct(1).unwrap().generator_count(), 5);
        assert!(CoverSpec::new(trefoil(), 1).is_err());
    }

    #[test]
    fn execution_modes_agree() {
        let seq = branched_presentation_with(&trefoil(), 4, Execution::Sequential).unwrap();
        let par = branched_presentation_with(&trefoil(), 4, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        let seq =
            direct_branched_presentation_with(&trefoil(), 3, 1, Execution::Sequential).unwrap();
        let par = direct_branched_presentation_with(&trefoil(), 3, 1, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
    }

    /// Expands the Schreier generators of the direct construction back into
    /// base words; independent of `SchreierTable::rewrite`.
    fn expand_direct(
        word: &Word,
        names: &[String],
        base: &Presentation,
        k: usize,
        axis: usize,
    ) -> Word {
        word.substitute(|l| {
            let (g, u) = names[l.generator].rsplit_once('.').unwrap();
            let i = base.generator_index(g).unwrap();
            let u: i64 = u.parse().unwrap();
            let s = Word::power(axis, u)
                .concat(&Word::letter(Letter::pos(i)))
                .concat(&Word::power(axis, -((u + 1) % k as i64)));
            if l.sign == Sign::Pos {
                s
            } else {
                s.invert()
            }
        })
    }

    fn arb_word(n: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..n, any::<bool>()), 0..=max_len).prop_map(|v| {
            Word::reduced(
                v.into_iter()
                    .map(|(g, p)| Letter::new(g, if p { Sign::Pos } else { Sign::Neg })),
            )
        })
    }

    /// Appends `x_0` powers until the exponent sum is 0 mod k.
    fn balance(word: Word, k: usize, filler: usize) -> Word {
        let r = gk_image(&word, k);
        if r == 0 {
            word
        } else {
            &word * &Word::power(filler, (k - r) as i64)
        }
    }

    proptest! {
        #[test]
        fn rewrite_round_trips(word in arb_word(5, 40), k in prop::sample::select(vec![2usize, 3, 5]), special in 0usize..5) {
            let word = balance(word, k, 0);
            let r = rewrite_kernel_word(&word, k, special).unwrap();
            prop_assert_eq!(expand_kernel_word(&r, k, special), word.free_reduce());
        }

        #[test]
        fn rewrite_is_a_homomorphism(a in arb_word(4, 20), b in arb_word(4, 20), k in 2usize..6) {
            let a = balance(a, k, 1);
            let b = balance(b, k, 2);
            let ra = rewrite_kernel_word(&a, k, 3).unwrap();
            let rb = rewrite_kernel_word(&b, k, 3).unwrap();
            let rab = rewrite_kernel_word(&a.concat(&b), k, 3).unwrap();
            prop_assert_eq!(rab, ra.concat(&rb).free_reduce());
        }

        #[test]
        fn direct_rewrite_round_trips(word in arb_word(3, 30), k in 2usize..5, axis in 0usize..3) {
            let word = balance(word, k, 0);
            let base = Presentation::free(3).with_relators(vec![word.clone()]).unwrap();
            let p = direct_branched_presentation(&base, k, axis).unwrap();
            let expanded = expand_direct(&p.relators()[0], p.generators(), &base, k, axis);
            prop_assert_eq!(expanded, word.free_reduce());
        }
    }
}
