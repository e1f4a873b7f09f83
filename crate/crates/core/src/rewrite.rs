//! A small driver for rewriting systems on words: each word is inspected by a
//! step function which either accepts it, kills it, or replaces a factor.

use crate::error::{Error, Result};
use crate::fp::LinComb;

/// Default bound on the number of rewrite steps.
pub const DEFAULT_GUARD: usize = 1_000_000;

pub enum Step<L: Ord> {
    /// The word is in normal form.
    Done,
    /// The word is zero.
    Zero,
    /// Replace `len` letters starting at `at` by the given combination.
    Replace {
        at: usize,
        len: usize,
        with: LinComb<Vec<L>>,
    },
}

/// Rewrites every term of `input` until all surviving words are accepted.
pub fn normalize<L, F>(input: LinComb<Vec<L>>, guard: usize, mut step: F) -> Result<LinComb<Vec<L>>>
where
    L: Ord + Clone,
    F: FnMut(&[L]) -> Result<Step<L>>,
{
    let p = input.prime();
    let mut pending = input;
    let mut done = LinComb::zero(p);
    let mut steps = 0usize;
    while let Some((word, c)) = pending.pop_first() {
        steps += 1;
        if steps > guard {
            return Err(Error::IterationGuard(guard));
        }
        match step(&word)? {
            Step::Done => done.add_term(word, c),
            Step::Zero => {}
            Step::Replace { at, len, with } => {
                for (mid, d) in with.iter() {
                    let mut w = Vec::with_capacity(word.len() - len + mid.len());
                    w.extend_from_slice(&word[..at]);
                    w.extend_from_slice(mid);
                    w.extend_from_slice(&word[at + len..]);
                    pending.add_term(w, p.mul(c, d));
                }
            }
        }
    }
    Ok(done)
}
