//! Group presentations over signed generator indices, their length-based
//! complexities, triangular form, Tietze cleanup and abelianization.

use num_bigint::BigInt;
use thiserror::Error;

use crate::homology::AbelianInvariants;
use crate::matrix::{smith_normal_form, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("relator letter 0 is not a generator")]
    ZeroLetter,
    #[error("letter {letter} exceeds generator count {generator_count}")]
    LetterOutOfRange { letter: i32, generator_count: usize },
    #[error("malformed word token {0:?}")]
    BadToken(String),
}

/// A finite presentation: `generator_count` generators and relator words.
/// Letters are nonzero signed 1-based generator indices; `-k` is the inverse
/// of generator `k`. Empty relators are dropped at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generator_count: usize,
    relators: Vec<Vec<i32>>,
}

/// Total relator length and the two derived upper bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationStats {
    /// Sum of the relator word lengths.
    pub length: usize,
    /// Upper bound for the minimal presentation length of the group.
    pub c_upper: usize,
    /// Upper bound for the T-invariant: sum of max(|r| - 2, 0).
    pub t_upper: usize,
}

impl Presentation {
    pub fn new(generator_count: usize, relators: Vec<Vec<i32>>) -> Result<Self, PresentationError> {
        for word in &relators {
            for &letter in word {
                if letter == 0 {
                    return Err(PresentationError::ZeroLetter);
                }
                if letter.unsigned_abs() as usize > generator_count {
                    return Err(PresentationError::LetterOutOfRange {
                        letter,
                        generator_count,
                    });
                }
            }
        }
        let relators = relators.into_iter().filter(|w| !w.is_empty()).collect();
        Ok(Presentation {
            generator_count,
            relators,
        })
    }

    pub fn free(rank: usize) -> Self {
        Presentation {
            generator_count: rank,
            relators: Vec::new(),
        }
    }

    /// The cyclic group presentation `<a | a^m>`.
    pub fn cyclic(m: usize) -> Self {
        Presentation {
            generator_count: 1,
            relators: vec![vec![1; m]],
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Vec<i32>] {
        &self.relators
    }

    pub fn stats(&self) -> PresentationStats {
        let length = self.relators.iter().map(|w| w.len()).sum();
        let t_upper = self
            .relators
            .iter()
            .map(|w| w.len().saturating_sub(2))
            .sum();
        PresentationStats {
            length,
            c_upper: length,
            t_upper,
        }
    }

    /// Splits every relator of length at least four with fresh generators
    /// until all relators have length at most three. The number of length-3
    /// relators in the output is at most the `t_upper` of the input.
    pub fn triangularize(&self) -> Presentation {
        let mut generator_count = self.generator_count;
        let mut relators = Vec::new();
        for word in &self.relators {
            let mut current = word.clone();
            while current.len() > 3 {
                generator_count += 1;
                let fresh = generator_count as i32;
                relators.push(vec![-fresh, current[0], current[1]]);
                let mut rest = vec![fresh];
                rest.extend_from_slice(&current[2..]);
                current = rest;
            }
            relators.push(current);
        }
        Presentation {
            generator_count,
            relators,
        }
    }

    /// Abelian invariants of the presented group: Smith normal form of the
    /// relator exponent matrix.
    pub fn abelianization(&self) -> AbelianInvariants {
        let mut m = IntMatrix::zeros(self.relators.len(), self.generator_count);
        for (i, word) in self.relators.iter().enumerate() {
            for &letter in word {
                let j = letter.unsigned_abs() as usize - 1;
                let delta = if letter > 0 { 1 } else { -1 };
                let v = m.get(i, j) + delta;
                m.set(i, j, v);
            }
        }
        let snf = smith_normal_form(&m);
        AbelianInvariants {
            free_rank: self.generator_count - snf.rank,
            torsion: snf.torsion_factors(),
        }
    }

    /// Fixed point of elementary Tietze cleanup steps: free and cyclic
    /// reduction, dropping empty and duplicate relators, killing generators
    /// with length-1 relators, and substituting generators defined by
    /// length-2 relators. The presented group is unchanged and the total
    /// length never increases.
    pub fn tietze_simplify(&self) -> Presentation {
        let mut generator_count = self.generator_count;
        let mut relators = self.relators.clone();
        loop {
            let mut changed = false;

            for word in &mut relators {
                let reduced = cyclic_free_reduce(word);
                if reduced.len() != word.len() {
                    *word = reduced;
                    changed = true;
                }
            }
            relators.retain(|w| !w.is_empty());

            // Drop relators duplicated up to rotation and inversion.
            let mut seen = std::collections::BTreeSet::new();
            let before = relators.len();
            relators.retain(|w| seen.insert(cyclic_canonical(w)));
            if relators.len() != before {
                changed = true;
            }

            // Kill a generator appearing in a length-1 relator.
            if let Some(pos) = relators.iter().position(|w| w.len() == 1) {
                let gen = relators[pos][0].unsigned_abs() as usize;
                relators.remove(pos);
                for word in &mut relators {
                    word.retain(|l| l.unsigned_abs() as usize != gen);
                }
                remove_generator(&mut relators, &mut generator_count, gen);
                changed = true;
            } else if let Some(pos) = relators
                .iter()
                .position(|w| w.len() == 2 && w[0].unsigned_abs() != w[1].unsigned_abs())
            {
                // x y = 1 with distinct generators: eliminate the larger one.
                let (x, y) = (relators[pos][0], relators[pos][1]);
                let (kept, gone) = if x.unsigned_abs() > y.unsigned_abs() {
                    (y, x)
                } else {
                    (x, y)
                };
                // gone^(sign) equals kept^(-1); solve for the letter `gone`.
                let replacement = if gone > 0 { -kept } else { kept };
                let gen = gone.unsigned_abs() as usize;
                relators.remove(pos);
                for word in &mut relators {
                    for letter in word.iter_mut() {
                        if letter.unsigned_abs() as usize == gen {
                            *letter = if *letter > 0 {
                                replacement
                            } else {
                                -replacement
                            };
                        }
                    }
                }
                remove_generator(&mut relators, &mut generator_count, gen);
                changed = true;
            }

            if !changed {
                break;
            }
        }
        let out = Presentation {
            generator_count,
            relators,
        };
        debug_assert!(out.stats().length <= self.stats().length);
        out
    }
}

fn cyclic_free_reduce(word: &[i32]) -> Vec<i32> {
    let mut stack: Vec<i32> = Vec::with_capacity(word.len());
    for &letter in word {
        if stack.last() == Some(&-letter) {
            stack.pop();
        } else {
            stack.push(letter);
        }
    }
    while stack.len() >= 2 && *stack.first().unwrap() == -*stack.last().unwrap() {
        stack.pop();
        stack.remove(0);
    }
    stack
}

/// Lexicographically least word among all rotations of the word and of its
/// inverse; rotations and inversion preserve the normal closure.
fn cyclic_canonical(word: &[i32]) -> Vec<i32> {
    let inverse: Vec<i32> = word.iter().rev().map(|&l| -l).collect();
    let mut best: Option<Vec<i32>> = None;
    for w in [word.to_vec(), inverse] {
        for r in 0..w.len().max(1) {
            let mut rot = w.clone();
            rot.rotate_left(r % w.len().max(1));
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// Deletes generator `gen` (1-based) from the index space, shifting higher
/// letters down. The caller has already removed all occurrences.
fn remove_generator(relators: &mut [Vec<i32>], generator_count: &mut usize, gen: usize) {
    for word in relators.iter_mut() {
        for letter in word.iter_mut() {
            let abs = letter.unsigned_abs() as usize;
            debug_assert_ne!(abs, gen);
            if abs > gen {
                *letter -= letter.signum();
            }
        }
    }
    *generator_count -= 1;
}

/// Parses a space-separated word like `a1 a2^-1 a1^3` over `n` generators.
pub fn parse_word(input: &str, generator_count: usize) -> Result<Vec<i32>, PresentationError> {
    let mut word = Vec::new();
    for token in input.split_whitespace() {
        let rest = token
            .strip_prefix('a')
            .ok_or_else(|| PresentationError::BadToken(token.to_string()))?;
        let (idx_str, exp) = match rest.split_once('^') {
            Some((i, e)) => (
                i,
                e.parse::<i32>()
                    .map_err(|_| PresentationError::BadToken(token.to_string()))?,
            ),
            None => (rest, 1),
        };
        let idx: usize = idx_str
            .parse()
            .map_err(|_| PresentationError::BadToken(token.to_string()))?;
        if idx == 0 || idx > generator_count {
            return Err(PresentationError::LetterOutOfRange {
                letter: idx as i32,
                generator_count,
            });
        }
        let letter = if exp >= 0 { idx as i32 } else { -(idx as i32) };
        for _ in 0..exp.unsigned_abs() {
            word.push(letter);
        }
    }
    Ok(word)
}

/// Formats a word in the `a1 a2^-1` syntax, grouping equal adjacent letters.
pub fn format_word(word: &[i32]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let letter = word[i];
        let mut run = 1;
        while i + run < word.len() && word[i + run] == letter {
            run += 1;
        }
        let idx = letter.unsigned_abs();
        let exp = if letter > 0 {
            run as i32
        } else {
            -(run as i32)
        };
        if exp == 1 {
            parts.push(format!("a{idx}"));
        } else {
            parts.push(format!("a{idx}^{exp}"));
        }
        i += run;
    }
    parts.join(" ")
}

/// Exact check that an abelianization matches an expected (rank, chain).
pub fn abelian_matches(inv: &AbelianInvariants, rank: usize, chain: &[u64]) -> bool {
    inv.free_rank == rank
        && inv.torsion.len() == chain.len()
        && inv
            .torsion
            .iter()
            .zip(chain)
            .all(|(a, &b)| *a == BigInt::from(b))
}

impl std::fmt::Display for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<")?;
        for k in 1..=self.generator_count {
            if k > 1 {
                write!(f, " ")?;
            }
            write!(f, "a{k}")?;
        }
        write!(f, " |")?;
        for (i, w) in self.relators.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { ", " }, format_word(w))?;
        }
        write!(f, ">")
    }
}
