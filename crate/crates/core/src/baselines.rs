//! Topological entropy and linguistic complexity.
//!
//! Both rest on `A_l(s)`, the number of distinct length-`l` substrings of
//! `s`. [`distinct_counts`] obtains every `A_l` at once from a suffix
//! automaton: each state accounts for the substrings whose lengths lie in
//! `(len(link), len]`, so a difference array over those ranges yields the
//! whole profile in linear time.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Distinct-substring profile of one sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubstringIndex {
    len: usize,
    /// `counts[l - 1] = A_l`.
    counts: Vec<u64>,
}

impl SubstringIndex {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `A_l`, for `1 <= l <= len`.
    pub fn count(&self, l: usize) -> Option<u64> {
        l.checked_sub(1).and_then(|i| self.counts.get(i)).copied()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `A(s) = sum_l A_l`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

struct State<S> {
    len: usize,
    link: Option<usize>,
    next: Vec<(S, usize)>,
}

impl<S: Copy + Eq> State<S> {
    fn get(&self, c: S) -> Option<usize> {
        self.next.iter().find(|(s, _)| *s == c).map(|&(_, t)| t)
    }

    fn set(&mut self, c: S, target: usize) {
        match self.next.iter_mut().find(|(s, _)| *s == c) {
            Some(entry) => entry.1 = target,
            None => self.next.push((c, target)),
        }
    }
}

fn suffix_automaton<S: Copy + Eq>(s: &[S]) -> Vec<State<S>> {
    let mut st = Vec::with_capacity(2 * s.len());
    st.push(State {
        len: 0,
        link: None,
        next: Vec::new(),
    });
    let mut last = 0;
    for &c in s {
        let cur = st.len();
        st.push(State {
            len: st[last].len + 1,
            link: None,
            next: Vec::new(),
        });
        let mut p = Some(last);
        while let Some(q) = p {
            if st[q].get(c).is_some() {
                break;
            }
            st[q].set(c, cur);
            p = st[q].link;
        }
        match p {
            None => st[cur].link = Some(0),
            Some(p) => {
                let q = st[p].get(c).expect("transition found above");
                if st[p].len + 1 == st[q].len {
                    st[cur].link = Some(q);
                } else {
                    let clone = st.len();
                    let cloned = State {
                        len: st[p].len + 1,
                        link: st[q].link,
                        next: st[q].next.clone(),
                    };
                    st.push(cloned);
                    let mut walk = Some(p);
                    while let Some(w) = walk {
                        if st[w].get(c) != Some(q) {
                            break;
                        }
                        st[w].set(c, clone);
                        walk = st[w].link;
                    }
                    st[q].link = Some(clone);
                    st[cur].link = Some(clone);
                }
            }
        }
        last = cur;
    }
    st
}

/// `A_l(s)` for every `l` in `1..=|s|`.
pub fn distinct_counts<S: Copy + Eq>(s: &[S]) -> Result<SubstringIndex> {
    if s.is_empty() {
        return Err(Error::EmptySequence);
    }
    let automaton = suffix_automaton(s);
    // diff[l] accumulates +1 at the start and -1 past the end of each range.
    let mut diff = vec![0i64; s.len() + 2];
    for state in &automaton[1..] {
        let shortest = automaton[state.link.expect("non-root states have links")].len + 1;
        diff[shortest] += 1;
        diff[state.len + 1] -= 1;
    }
    let mut running = 0i64;
    let counts = diff[1..=s.len()]
        .iter()
        .map(|d| {
            running += d;
            running as u64
        })
        .collect();
    Ok(SubstringIndex {
        len: s.len(),
        counts,
    })
}

/// `min(k^l, n - l + 1)` without overflow.
fn max_distinct(k: usize, l: usize, n: usize) -> u64 {
    let room = (n - l + 1) as u64;
    match u32::try_from(l)
        .ok()
        .and_then(|e| (k as u64).checked_pow(e))
    {
        Some(p) => p.min(room),
        None => room,
    }
}

/// Realized and maximal substring counts and their ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LcBreakdown<T> {
    /// `A(s)`.
    pub actual: u64,
    /// `M(s) = sum_l min(k^l, |s| - l + 1)`.
    pub maximal: u64,
    /// `A(s) / M(s)`.
    pub lc: T,
}

pub fn linguistic_complexity<S: Copy + Eq, T: Scalar>(s: &[S], k: usize) -> Result<LcBreakdown<T>> {
    if k < 2 {
        return Err(Error::AlphabetTooSmall(k));
    }
    let index = distinct_counts(s)?;
    let n = s.len();
    let actual = index.total();
    let maximal: u64 = (1..=n).map(|l| max_distinct(k, l, n)).sum();
    let lc = T::from_u64(actual).expect("count fits") / T::from_u64(maximal).expect("count fits");
    Ok(LcBreakdown {
        actual,
        maximal,
        lc,
    })
}

fn log_k<T: Scalar>(count: u64, k: usize) -> T {
    T::from_u64(count).expect("count fits").ln() / T::from_count(k).ln()
}

/// `H_l(s) = log_k(A_l(s)) / l`.
pub fn entropy_fixed_length<S: Copy + Eq, T: Scalar>(s: &[S], l: usize, k: usize) -> Result<T> {
    if k < 2 {
        return Err(Error::AlphabetTooSmall(k));
    }
    if l == 0 || l > s.len() {
        return Err(Error::LengthOutOfRange { l, len: s.len() });
    }
    let count = distinct_counts(s)?.count(l).expect("l checked above");
    Ok(log_k::<T>(count, k) / T::from_count(l))
}

/// Largest `l` with `k^l + l - 1 <= n`. When `n = k^(l+1) + l` both `l` and
/// `l + 1` satisfy the defining inequality; the larger is taken.
pub fn entropy_word_length(n: usize, k: usize) -> Option<usize> {
    let fits = |l: usize| {
        u32::try_from(l)
            .ok()
            .and_then(|e| k.checked_pow(e))
            .and_then(|p| p.checked_add(l - 1))
            .is_some_and(|need| need <= n)
    };
    if k < 2 || !fits(1) {
        return None;
    }
    let mut l = 1;
    while fits(l + 1) {
        l += 1;
    }
    Some(l)
}

/// Topological entropy: `log_k(A_l(prefix)) / l`, where `l` comes from
/// [`entropy_word_length`] and `prefix` is the first `k^l + l - 1` symbols.
pub fn topological_entropy<S: Copy + Eq, T: Scalar>(s: &[S], k: usize) -> Result<T> {
    if k < 2 {
        return Err(Error::AlphabetTooSmall(k));
    }
    let l = entropy_word_length(s.len(), k).ok_or(Error::SequenceTooShort { len: s.len(), k })?;
    let prefix = &s[..k.pow(l as u32) + l - 1];
    let count = distinct_counts(prefix)?
        .count(l)
        .expect("prefix is at least l long");
    Ok(log_k::<T>(count, k) / T::from_count(l))
}
