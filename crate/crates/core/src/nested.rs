//! Well-nested words over push (`ā`) and pop (`a`) moves: the encoding of a
//! parse tree, matching pairs, harmonics and oscillation.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tree::ParseTree;

pub const DEFAULT_HARMONIC_CAP: usize = 20;
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Push,
    Pop,
}

/// A balanced sequence of moves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WellNestedWord {
    moves: Vec<Move>,
}

impl WellNestedWord {
    pub fn new(moves: Vec<Move>) -> Result<Self> {
        check_balanced(&moves)?;
        Ok(WellNestedWord { moves })
    }

    pub fn empty() -> Self {
        WellNestedWord::default()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn matching_pairs(&self) -> MatchingPairs {
        matching_pairs(&self.moves).expect("balanced by construction")
    }

    pub fn oscillation(&self) -> usize {
        oscillation(&self.moves).expect("balanced by construction")
    }
}

fn check_balanced(moves: &[Move]) -> Result<()> {
    let mut depth = 0usize;
    for (i, m) in moves.iter().enumerate() {
        match m {
            Move::Push => depth += 1,
            Move::Pop => {
                depth = depth.checked_sub(1).ok_or(Error::Unbalanced { position: i + 1 })?;
            }
        }
    }
    if depth != 0 {
        return Err(Error::Unbalanced { position: moves.len() });
    }
    Ok(())
}

impl fmt::Display for WellNestedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.moves {
            f.write_str(match m {
                Move::Push => "ā",
                Move::Pop => "a",
            })?;
        }
        Ok(())
    }
}

/// Parses moves written as `ā`/`a` or `(`/`)`; whitespace is ignored.
pub fn parse_moves(s: &str) -> Result<Vec<Move>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .enumerate()
        .map(|(i, c)| match c {
            'ā' | '(' => Ok(Move::Push),
            'a' | ')' => Ok(Move::Pop),
            other => Err(Error::Syntax {
                line: 1,
                column: i + 1,
                message: format!("unexpected move `{other}`"),
            }),
        })
        .collect()
}

impl FromStr for WellNestedWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WellNestedWord::new(parse_moves(s)?)
    }
}

/// Positions `(i, j)`, 1-based, where the push at `i` is closed by the pop at
/// `j`; sorted by `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingPairs {
    pub pairs: Vec<(usize, usize)>,
}

pub fn matching_pairs(moves: &[Move]) -> Result<MatchingPairs> {
    check_balanced(moves)?;
    let mut stack = Vec::new();
    let mut pairs = Vec::with_capacity(moves.len() / 2);
    for (i, m) in moves.iter().enumerate() {
        match m {
            Move::Push => stack.push(i + 1),
            Move::Pop => pairs.push((stack.pop().expect("balanced"), i + 1)),
        }
    }
    pairs.sort_unstable();
    Ok(MatchingPairs { pairs })
}

/// `h_0 = ε`, `h_{k+1} = ā h_k a ā h_k a`. Fails when `k` exceeds the default
/// cap, since the length doubles with every level.
pub fn harmonic(k: usize) -> Result<WellNestedWord> {
    harmonic_with_cap(k, DEFAULT_HARMONIC_CAP)
}

pub fn harmonic_with_cap(k: usize, cap: usize) -> Result<WellNestedWord> {
    if k > cap {
        return Err(Error::CapExceeded { what: format!("harmonic order {k}"), cap });
    }
    Ok(WellNestedWord { moves: harmonic_moves(k) })
}

fn harmonic_moves(k: usize) -> Vec<Move> {
    let mut h = Vec::new();
    for _ in 0..k {
        let mut next = Vec::with_capacity(2 * h.len() + 4);
        for _ in 0..2 {
            next.push(Move::Push);
            next.extend_from_slice(&h);
            next.push(Move::Pop);
        }
        h = next;
    }
    h
}

/// The push/pop word of a parse tree: the root contributes a push followed by
/// its own node word; a leaf is a single pop; a node with `k` children is a
/// pop, `k` pushes, then the words of the children in order.
pub fn alpha_of_tree(t: &ParseTree) -> WellNestedWord {
    let mut moves = Vec::with_capacity(2 * t.node_count());
    moves.push(Move::Push);
    let mut stack = vec![t];
    while let Some(n) = stack.pop() {
        moves.push(Move::Pop);
        moves.extend(std::iter::repeat_n(Move::Push, n.children.len()));
        stack.extend(n.children.iter().rev());
    }
    WellNestedWord { moves }
}

#[derive(Clone, Copy, Default)]
struct Frame {
    /// Largest and second largest subtree maxima of `c` among the roots of
    /// this forest.
    top: [Option<usize>; 2],
    /// Best `min(c(u), c(v))` over incomparable pairs inside the forest.
    best: Option<usize>,
}

impl Frame {
    fn offer(&mut self, subtree_max: usize, inner_best: Option<usize>) {
        match self.top {
            [None, _] => self.top[0] = Some(subtree_max),
            [Some(a), second] if subtree_max > a => {
                self.top = [Some(subtree_max), Some(a.max(second.unwrap_or(0)))];
            }
            [a, None] => self.top = [a, Some(subtree_max)],
            [a, Some(b)] => self.top = [a, Some(b.max(subtree_max))],
        }
        self.best = self.best.max(inner_best);
    }

    /// Oscillation of the forest: 0 without incomparable pairs, otherwise one
    /// more than the best pair.
    fn pair_value(&self) -> Option<usize> {
        let across = match self.top {
            [Some(_), Some(b)] => Some(b),
            _ => None,
        };
        self.best.max(across)
    }

    fn oscillation(&self) -> usize {
        self.pair_value().map_or(0, |v| v + 1)
    }
}

/// Largest `k` such that deleting some matching pairs leaves exactly `h_k`.
///
/// Works on the forest of matching pairs: a pair can carry `h_j` inside it
/// when the forest strictly inside reaches `j`, and a forest reaches `k + 1`
/// when it holds two incomparable pairs that both carry `h_k`. One left to
/// right pass with a stack of frames.
pub fn oscillation(moves: &[Move]) -> Result<usize> {
    check_balanced(moves)?;
    let mut stack = vec![Frame::default()];
    for m in moves {
        match m {
            Move::Push => stack.push(Frame::default()),
            Move::Pop => {
                let inside = stack.pop().expect("balanced");
                let carried = inside.oscillation();
                let subtree_max = carried.max(inside.top[0].unwrap_or(0));
                stack
                    .last_mut()
                    .expect("balanced")
                    .offer(subtree_max, inside.pair_value());
            }
        }
    }
    Ok(stack[0].oscillation())
}

/// Literal search: tries every subset of matching pairs to delete and keeps
/// the largest harmonic left over. Exponential; refuses words longer than
/// `cap` moves.
pub fn oscillation_bruteforce(moves: &[Move], cap: usize) -> Result<usize> {
    if moves.len() > cap {
        return Err(Error::CapExceeded { what: format!("word of {} moves", moves.len()), cap });
    }
    let pairs = matching_pairs(moves)?.pairs;
    let harmonics: Vec<Vec<Move>> = (0..)
        .map(harmonic_moves)
        .take_while(|h| h.len() <= moves.len())
        .collect();
    let mut best = 0;
    let mut keep = vec![false; moves.len()];
    for mask in 0u64..(1u64 << pairs.len()) {
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            let kept = mask >> bit & 1 == 1;
            keep[i - 1] = kept;
            keep[j - 1] = kept;
        }
        let rest: Vec<Move> = moves
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(&m, _)| m)
            .collect();
        if let Some(k) = harmonics.iter().position(|h| *h == rest) {
            best = best.max(k);
        }
    }
    Ok(best)
}
