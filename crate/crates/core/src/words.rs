//! Free-group words over an indexed generator alphabet.
//!
//! A [`Word`] is an immutable sequence of signed generator letters. Every
//! operation returns a new word; nothing here mutates in place, so words can
//! be shared freely between threads.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use thiserror::Error;

/// Exponent sign of a letter. `Pos` orders before `Neg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn from_exponent(e: i64) -> Option<Self> {
        match e {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        })
    }
}

/// A generator index together with an exponent of +1 or -1.
///
/// The derived order is (generator ascending, then `Pos` before `Neg`), which
/// is the letter order used for canonical relator forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub sign: Sign,
}

impl Letter {
    pub const fn new(generator: usize, sign: Sign) -> Self {
        Letter { generator, sign }
    }

    pub const fn pos(generator: usize) -> Self {
        Letter::new(generator, Sign::Pos)
    }

    pub const fn neg(generator: usize) -> Self {
        Letter::new(generator, Sign::Neg)
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.generator, -self.sign)
    }

    /// True when `self · other` freely cancels.
    pub fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.sign != other.sign
    }

    /// Parses a single token `name` or `name^-1`, resolving the name through
    /// `lookup`.
    pub fn parse_token<F>(token: &str, lookup: F) -> Result<Letter, TokenError>
    where
        F: Fn(&str) -> Option<usize>,
    {
        let (name, sign) = match token.split_once('^') {
            None => (token, Sign::Pos),
            Some((name, "-1")) => (name, Sign::Neg),
            Some(_) => return Err(TokenError::Malformed(token.to_string())),
        };
        if name.is_empty() {
            return Err(TokenError::Malformed(token.to_string()));
        }
        let generator =
            lookup(name).ok_or_else(|| TokenError::UnknownGenerator(name.to_string()))?;
        Ok(Letter::new(generator, sign))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenError {
    #[error("malformed token `{0}` (expected `name` or `name^-1`)")]
    Malformed(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("token {position}: {source}")]
pub struct WordParseError {
    /// Zero-based index of the offending whitespace-separated token.
    pub position: usize,
    #[source]
    pub source: TokenError,
}

/// A word in a free group. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Wraps `letters` as-is, without reduction.
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds the reduced form of `letters`.
    pub fn reduced(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// `x_generator^exponent`.
    pub fn power(generator: usize, exponent: i64) -> Self {
        let sign = if exponent >= 0 { Sign::Pos } else { Sign::Neg };
        Word(vec![
            Letter::new(generator, sign);
            exponent.unsigned_abs() as usize
        ])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&a), Some(&b)) if self.0.len() > 1 => !b.cancels(a),
                _ => true,
            }
    }

    pub fn free_reduce(&self) -> Word {
        Word::reduced(self.0.iter().copied())
    }

    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Reduced form of `c · self · c⁻¹`.
    pub fn conjugate(&self, c: &Word) -> Word {
        Word::reduced(
            c.0.iter()
                .copied()
                .chain(self.0.iter().copied())
                .chain(c.0.iter().rev().map(|l| l.inverse())),
        )
    }

    /// Reduces and then strips matching inverse pairs from both ends.
    pub fn cyclically_reduce(&self) -> Word {
        let w = self.free_reduce();
        let mut lo = 0;
        let mut hi = w.0.len();
        while hi - lo > 1 && w.0[hi - 1].cancels(w.0[lo]) {
            lo += 1;
            hi -= 1;
        }
        Word(w.0[lo..hi].to_vec())
    }

    pub fn rotate_left(&self, n: usize) -> Word {
        if self.0.is_empty() {
            return Word::identity();
        }
        let mut letters = self.0.clone();
        letters.rotate_left(n % self.0.len());
        Word(letters)
    }

    /// Canonical representative of the conjugacy-and-inversion class: the
    /// least cyclic rotation of the cyclically reduced word or of its inverse.
    pub fn cyclic_normalize(&self) -> Word {
        let base = self.cyclically_reduce();
        if base.is_empty() {
            return base;
        }
        let inv = base.invert();
        let n = base.len();
        (0..n)
            .flat_map(|i| [base.rotate_left(i), inv.rotate_left(i)])
            .min()
            .expect("nonempty word has rotations")
    }

    pub fn exponent_sum(&self) -> i64 {
        self.0.iter().map(|l| l.sign.value()).sum()
    }

    /// Total exponent of a single generator.
    pub fn exponent_of(&self, generator: usize) -> i64 {
        self.0
            .iter()
            .filter(|l| l.generator == generator)
            .map(|l| l.sign.value())
            .sum()
    }

    pub fn occurrences(&self, generator: usize) -> usize {
        self.0.iter().filter(|l| l.generator == generator).count()
    }

    pub fn contains_generator(&self, generator: usize) -> bool {
        self.0.iter().any(|l| l.generator == generator)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Replaces every letter by a word and reduces the result. The image of an
    /// inverse letter must be supplied by `image` as well.
    pub fn substitute<F>(&self, mut image: F) -> Word
    where
        F: FnMut(Letter) -> Word,
    {
        Word::reduced(self.0.iter().flat_map(|&l| image(l).0))
    }

    /// Applies an index map to every generator. No reduction happens.
    pub fn map_generators<F>(&self, f: F) -> Word
    where
        F: Fn(usize) -> usize,
    {
        Word(
            self.0
                .iter()
                .map(|l| Letter::new(f(l.generator), l.sign))
                .collect(),
        )
    }

    /// Parses whitespace-separated tokens; `1` on its own is the empty word.
    pub fn parse_with<F>(text: &str, lookup: F) -> Result<Word, WordParseError>
    where
        F: Fn(&str) -> Option<usize>,
    {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens == ["1"] {
            return Ok(Word::identity());
        }
        tokens
            .iter()
            .enumerate()
            .map(|(position, t)| {
                Letter::parse_token(t, &lookup)
                    .map_err(|source| WordParseError { position, source })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Displays the word with the given generator names.
    pub fn display_with<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> impl fmt::Display + 'a {
        NamedWord { word: self, names }
    }
}

struct NamedWord<'a, S> {
    word: &'a Word,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for NamedWord<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.word.0, |g| match self.names.get(g) {
            Some(name) => name.as_ref().to_string(),
            None => format!("?{}", g + 1),
        })
    }
}

fn write_letters<N>(f: &mut fmt::Formatter<'_>, letters: &[Letter], name: N) -> fmt::Result
where
    N: Fn(usize) -> String,
{
    if letters.is_empty() {
        return f.write_str("1");
    }
    for (i, l) in letters.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        f.write_str(&name(l.generator))?;
        if l.sign == Sign::Neg {
            f.write_str("^-1")?;
        }
    }
    Ok(())
}

/// Default rendering with generator names `x1, x2, ...`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0, |g| format!("x{}", g + 1))
    }
}

/// Parses the default `x1 x2^-1 ...` rendering.
impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse_with(s, |name| {
            let digits = name.strip_prefix('x')?;
            if digits.starts_with('0') || digits.starts_with('+') {
                return None;
            }
            digits
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .map(|n| n - 1)
        })
    }
}

impl Mul for &Word {
    type Output = Word;

    /// Reduced product.
    fn mul(self, rhs: &Word) -> Word {
        Word::reduced(self.0.iter().chain(rhs.0.iter()).copied())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}
