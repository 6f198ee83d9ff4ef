//! Discrete homotopy of q-loops in the Coxeter complex: grids, the moves
//! T1-T3, the loop/word dictionary f and g, homotopy decision with replayable
//! certificates, fundamental-group presentations of the 2-complexes, and the
//! level-lowering constructions for k > 3.
//!
//! The base chamber is always the identity element.

use std::collections::VecDeque;

use crate::complex::TwoComplex;
use crate::coxeter::{ElemId, Group};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::relaxed::{RelaxedSystem, WordMove};
use crate::toddcox::{enumerate_cosets, EnumerationOutcome};
use crate::word::Word;

/// A based q-loop: a chamber sequence whose consecutive entries are q-near
/// or equal, starting and ending at the base.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QLoop {
    q: usize,
    chambers: Vec<ElemId>,
}

impl QLoop {
    /// Validates nearness and the basepoint condition (first = last).
    pub fn new(group: &Group, q: usize, chambers: Vec<ElemId>) -> Result<QLoop> {
        if chambers.is_empty() {
            return Err(Error::InvalidLoop {
                position: 0,
                reason: "a loop has at least its base chamber".into(),
            });
        }
        if chambers.first() != chambers.last() {
            return Err(Error::InvalidLoop {
                position: chambers.len() - 1,
                reason: "a loop ends at its base".into(),
            });
        }
        for (i, pair) in chambers.windows(2).enumerate() {
            if !crate::complex::q_near(group, pair[0], pair[1], q)? {
                return Err(Error::InvalidLoop {
                    position: i,
                    reason: format!("chambers at {i} and {} are not {q}-near", i + 1),
                });
            }
        }
        Ok(QLoop { q, chambers })
    }

    pub fn trivial(q: usize, base: ElemId) -> QLoop {
        QLoop {
            q,
            chambers: vec![base],
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn base(&self) -> ElemId {
        self.chambers[0]
    }

    pub fn chambers(&self) -> &[ElemId] {
        &self.chambers
    }

    /// Number of chambers; never zero (a loop contains at least its base).
    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    /// Concatenation of two loops with the same base and level.
    pub fn concat(&self, other: &QLoop) -> Result<QLoop> {
        if self.q != other.q || self.base() != other.base() {
            return Err(Error::LoopMismatch {
                reason: "concatenation needs equal base and level".into(),
            });
        }
        let mut chambers = self.chambers.clone();
        chambers.extend_from_slice(&other.chambers[1..]);
        Ok(QLoop {
            q: self.q,
            chambers,
        })
    }

    /// The reversed loop (the inverse class).
    pub fn reversed(&self) -> QLoop {
        let mut chambers = self.chambers.clone();
        chambers.reverse();
        QLoop {
            q: self.q,
            chambers,
        }
    }

    /// Drops consecutive duplicate chambers.
    pub fn destretched(&self) -> QLoop {
        let mut chambers: Vec<ElemId> = Vec::with_capacity(self.chambers.len());
        for &c in &self.chambers {
            if chambers.last() != Some(&c) {
                chambers.push(c);
            }
        }
        QLoop {
            q: self.q,
            chambers,
        }
    }
}

/// A rectangular homotopy grid of chambers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyGrid {
    q: usize,
    rows: Vec<Vec<ElemId>>,
}

impl HomotopyGrid {
    pub fn new(q: usize, rows: Vec<Vec<ElemId>>) -> HomotopyGrid {
        HomotopyGrid { q, rows }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn rows(&self) -> &[Vec<ElemId>] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.rows.first().map(|r| r.len()).unwrap_or(0)
    }
}

/// Verdict of `verify_grid`: pass, or the first offending cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridCheck {
    Pass,
    Fail {
        row: usize,
        col: usize,
        reason: String,
    },
}

impl GridCheck {
    pub fn is_pass(&self) -> bool {
        matches!(self, GridCheck::Pass)
    }
}

/// Checks that every row is a q-loop based at the grid base, every column a
/// q-chain, and the matrix is rectangular.
pub fn verify_grid(group: &Group, grid: &HomotopyGrid) -> GridCheck {
    let q = grid.q();
    let rows = grid.rows();
    if rows.is_empty() || rows[0].is_empty() {
        return GridCheck::Fail {
            row: 0,
            col: 0,
            reason: "empty grid".into(),
        };
    }
    let width = rows[0].len();
    let base = rows[0][0];
    for (r, row) in rows.iter().enumerate() {
        if row.len() != width {
            return GridCheck::Fail {
                row: r,
                col: row.len(),
                reason: "grid is not rectangular".into(),
            };
        }
        if row[0] != base || row[width - 1] != base {
            return GridCheck::Fail {
                row: r,
                col: 0,
                reason: "row is not based at the grid base".into(),
            };
        }
        for c in 0..width - 1 {
            match crate::complex::q_near(group, row[c], row[c + 1], q) {
                Ok(true) => {}
                _ => {
                    return GridCheck::Fail {
                        row: r,
                        col: c,
                        reason: "row entries are not q-near".into(),
                    }
                }
            }
        }
    }
    for r in 0..rows.len() - 1 {
        for c in 0..width {
            match crate::complex::q_near(group, rows[r][c], rows[r + 1][c], q) {
                Ok(true) => {}
                _ => {
                    return GridCheck::Fail {
                        row: r,
                        col: c,
                        reason: "column entries are not q-near".into(),
                    }
                }
            }
        }
    }
    GridCheck::Pass
}

/// The top nearness level n - 2, where adjacent chambers differ by single
/// generators; the loop/word dictionary needs rank at least 2.
pub fn top_level(group: &Group) -> Result<usize> {
    let n = group.rank();
    if n < 2 {
        return Err(Error::RankOutOfRange {
            given: n,
            lo: 2,
            hi: 64,
        });
    }
    Ok(n - 2)
}

/// The word f(sigma) of a top-level loop: one letter per proper step,
/// repeated chambers contributing nothing.
pub fn word_of_loop(group: &Group, l: &QLoop) -> Result<Word> {
    if l.q() != top_level(group)? {
        return Err(Error::LoopMismatch {
            reason: format!("the word map reads (n-2)-loops, got level {}", l.q()),
        });
    }
    let mut letters = Vec::new();
    for (i, pair) in l.chambers().windows(2).enumerate() {
        if pair[0] == pair[1] {
            continue;
        }
        let d = group.mul(group.inv(pair[0]), pair[1]);
        let w = group.word_of(d);
        if w.len() != 1 {
            return Err(Error::InvalidLoop {
                position: i,
                reason: "consecutive chambers differ by more than one generator".into(),
            });
        }
        letters.push(w.letters()[0]);
    }
    Ok(Word(letters))
}

/// The chain g(w) of partial products from a base chamber.
pub fn chain_of_word(group: &Group, base: ElemId, w: &Word) -> Result<Vec<ElemId>> {
    w.check_rank(group.rank())?;
    let mut chambers = vec![base];
    let mut cur = base;
    for &l in w.letters() {
        cur = group.right_mul(cur, l);
        chambers.push(cur);
    }
    Ok(chambers)
}

/// g(w) as a based (n-2)-loop; errors when w is not the identity in W.
pub fn loop_of_word(group: &Group, w: &Word) -> Result<QLoop> {
    let top = top_level(group)?;
    let chambers = chain_of_word(group, Group::IDENTITY, w)?;
    if *chambers.last().unwrap() != Group::IDENTITY {
        return Err(Error::NotInKernel {
            word: w.to_string(),
        });
    }
    QLoop::new(group, top, chambers)
}

// ---------------------------------------------------------------------------
// Moves and grids.

/// An elementary homotopy move on a loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopMove {
    /// T1: repeat the chamber at the position.
    Stretch { pos: usize },
    /// T1 inverse: drop a repeated chamber (entries at pos, pos+1 equal).
    Destretch { pos: usize },
    /// T2: insert (c.s, c) after position pos holding chamber c.
    InsertSquare { pos: usize, letter: u8 },
    /// T2 inverse: remove the pattern (c, c.s, c) at positions pos..pos+2.
    RemoveSquare { pos: usize },
    /// T3: rewrite (w, w.s, w.st) at pos..pos+2 into (w, w.t, w.st);
    /// requires m(s, t) = 2.
    Exchange { pos: usize },
}

/// A move script: the certificate skeleton replayed into one grid.
pub type MoveScript = Vec<LoopMove>;

/// Incremental grid construction: every primitive operation appends one row
/// differing from its predecessor in a column-wise q-near way; rows are
/// padded to a common width with the base chamber at finalization.
struct GridBuilder {
    q: usize,
    base: ElemId,
    current: Vec<ElemId>,
    rows: Vec<Vec<ElemId>>,
}

impl GridBuilder {
    fn new(l: &QLoop) -> GridBuilder {
        GridBuilder {
            q: l.q(),
            base: l.base(),
            current: l.chambers().to_vec(),
            rows: vec![l.chambers().to_vec()],
        }
    }

    fn push_current(&mut self) {
        self.rows.push(self.current.clone());
    }

    fn stretch(&mut self, pos: usize) {
        let c = self.current[pos];
        self.current.insert(pos + 1, c);
        self.push_current();
    }

    fn destretch(&mut self, pos: usize) {
        debug_assert_eq!(self.current[pos], self.current[pos + 1]);
        self.current.remove(pos + 1);
        self.push_current();
    }

    /// Replaces cells in one step (one new row).
    fn replace(&mut self, cells: &[(usize, ElemId)]) {
        for &(pos, c) in cells {
            self.current[pos] = c;
        }
        self.push_current();
    }

    fn finalize(self) -> HomotopyGrid {
        let width = self.rows.iter().map(|r| r.len()).max().unwrap_or(1);
        let rows = self
            .rows
            .into_iter()
            .map(|mut r| {
                r.resize(width, self.base);
                r
            })
            .collect();
        HomotopyGrid {
            q: self.q,
            rows,
        }
    }

    fn current_loop(&self, group: &Group) -> Result<QLoop> {
        QLoop::new(group, self.q, self.current.clone())
    }
}

/// Applies one move to a builder, validating its side conditions.
fn apply_move_to_builder(group: &Group, b: &mut GridBuilder, mv: LoopMove) -> Result<()> {
    let cur = &b.current;
    let bad = |pos: usize, reason: &str| Error::InvalidMove {
        step: pos,
        reason: reason.into(),
    };
    match mv {
        LoopMove::Stretch { pos } => {
            if pos >= cur.len() {
                return Err(bad(pos, "stretch past the end of the loop"));
            }
            b.stretch(pos);
        }
        LoopMove::Destretch { pos } => {
            if pos + 1 >= cur.len() || cur[pos] != cur[pos + 1] {
                return Err(bad(pos, "destretch needs a repeated chamber"));
            }
            b.destretch(pos);
        }
        LoopMove::InsertSquare { pos, letter } => {
            if pos >= cur.len() || letter as usize >= group.rank() {
                return Err(bad(pos, "insertion position or letter out of range"));
            }
            let c = cur[pos];
            let cs = group.right_mul(c, letter);
            b.stretch(pos);
            b.stretch(pos);
            b.replace(&[(pos + 1, cs)]);
        }
        LoopMove::RemoveSquare { pos } => {
            if pos + 2 >= cur.len() || cur[pos] != cur[pos + 2] {
                return Err(bad(pos, "square removal needs the pattern (c, c.s, c)"));
            }
            let c = cur[pos];
            let mid = cur[pos + 1];
            let d = group.mul(group.inv(c), mid);
            if group.length(d) != 1 {
                return Err(bad(pos, "square removal needs the pattern (c, c.s, c)"));
            }
            b.replace(&[(pos + 1, c)]);
            b.destretch(pos + 1);
            b.destretch(pos);
        }
        LoopMove::Exchange { pos } => {
            if pos + 2 >= cur.len() {
                return Err(bad(pos, "exchange past the end of the loop"));
            }
            let (w, ws, wst) = (cur[pos], cur[pos + 1], cur[pos + 2]);
            let s_el = group.mul(group.inv(w), ws);
            let t_el = group.mul(group.inv(ws), wst);
            let (sw, tw) = (group.word_of(s_el).clone(), group.word_of(t_el).clone());
            if sw.len() != 1 || tw.len() != 1 {
                return Err(bad(pos, "exchange needs two single-generator steps"));
            }
            let (s, t) = (sw.letters()[0], tw.letters()[0]);
            if s == t || group.system().bond(s as usize, t as usize) != Some(2) {
                return Err(bad(pos, "exchange needs distinct commuting generators"));
            }
            let wt = group.right_mul(w, t);
            // (w, ws, wst) -> stretch -> (w, ws, wst, wst)
            //              -> replace -> (w, w, wt, wst)
            //              -> destretch -> (w, wt, wst)
            b.stretch(pos + 2);
            b.replace(&[(pos + 1, w), (pos + 2, wt)]);
            b.destretch(pos);
        }
    }
    Ok(())
}

/// Applies a single move to a loop, returning the moved loop and the grid
/// fragment realizing the move.
pub fn apply_move(group: &Group, l: &QLoop, mv: LoopMove) -> Result<(QLoop, HomotopyGrid)> {
    let mut b = GridBuilder::new(l);
    apply_move_to_builder(group, &mut b, mv)?;
    let out = b.current_loop(group)?;
    Ok((out, b.finalize()))
}

/// Outcome of the homotopy decision.
#[derive(Debug, Clone)]
pub enum HomotopyDecision {
    Equivalent {
        script: MoveScript,
        grid: HomotopyGrid,
    },
    NotEquivalent {
        normal_form_left: Word,
        normal_form_right: Word,
    },
}

impl HomotopyDecision {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, HomotopyDecision::Equivalent { .. })
    }
}

/// Decides discrete homotopy of two top-level loops through normal forms in
/// the relaxed group, emitting a move script and a stitched grid certificate
/// on equivalence and the two distinct normal forms otherwise.
pub fn decide_homotopic(
    rsys: &RelaxedSystem,
    left: &QLoop,
    right: &QLoop,
) -> Result<HomotopyDecision> {
    let group = rsys.base();
    let top = top_level(group)?;
    if left.q() != top || right.q() != top {
        return Err(Error::LoopMismatch {
            reason: "homotopy decision works on (n-2)-loops".into(),
        });
    }
    if left.base() != right.base() {
        return Err(Error::LoopMismatch {
            reason: "loops have different base chambers".into(),
        });
    }
    let w_left = word_of_loop(group, left)?;
    let w_right = word_of_loop(group, right)?;
    let (nf_left, trace_left) = rsys.normalize_with_trace(&w_left)?;
    let (nf_right, trace_right) = rsys.normalize_with_trace(&w_right)?;
    if nf_left != nf_right {
        return Ok(HomotopyDecision::NotEquivalent {
            normal_form_left: nf_left,
            normal_form_right: nf_right,
        });
    }

    // Certificate: left -> destretch -> g(w_left) -> word moves -> g(nf)
    // -> inverted word moves -> g(w_right) -> stretch -> right.
    let mut script: MoveScript = Vec::new();
    let mut b = GridBuilder::new(left);

    destretch_moves(&mut b, &mut script, group)?;
    for &mv in &trace_left {
        push_word_move(group, &mut b, &mut script, mv)?;
    }
    for &mv in trace_right.iter().rev() {
        push_word_move(group, &mut b, &mut script, mv.inverse())?;
    }
    restretch_to(&mut b, &mut script, group, right)?;

    debug_assert_eq!(b.current, right.chambers());
    Ok(HomotopyDecision::Equivalent {
        script,
        grid: b.finalize(),
    })
}

/// Removes all consecutive duplicates from the builder's loop.
fn destretch_moves(b: &mut GridBuilder, script: &mut MoveScript, group: &Group) -> Result<()> {
    let mut pos = 0;
    while pos + 1 < b.current.len() {
        if b.current[pos] == b.current[pos + 1] {
            let mv = LoopMove::Destretch { pos };
            apply_move_to_builder(group, b, mv)?;
            script.push(mv);
        } else {
            pos += 1;
        }
    }
    Ok(())
}

/// Re-stretches the builder's destretched loop into the given target, which
/// must be a stretching of it.
fn restretch_to(
    b: &mut GridBuilder,
    script: &mut MoveScript,
    group: &Group,
    target: &QLoop,
) -> Result<()> {
    let tgt = target.chambers();
    let mut pos = 0;
    while pos < tgt.len() {
        if pos < b.current.len() && b.current[pos] == tgt[pos] {
            pos += 1;
            continue;
        }
        // Target repeats the previous chamber here.
        if pos == 0 || tgt[pos] != tgt[pos - 1] {
            return Err(Error::LoopMismatch {
                reason: "target is not a stretching of the decided loop".into(),
            });
        }
        let mv = LoopMove::Stretch { pos: pos - 1 };
        apply_move_to_builder(group, b, mv)?;
        script.push(mv);
        pos += 1;
    }
    if b.current.len() != tgt.len() {
        return Err(Error::LoopMismatch {
            reason: "target is not a stretching of the decided loop".into(),
        });
    }
    Ok(())
}

/// Translates a word move on f(current) into loop moves on the builder's
/// destretched loop (chamber i+1 sits after letter i).
fn push_word_move(
    group: &Group,
    b: &mut GridBuilder,
    script: &mut MoveScript,
    mv: WordMove,
) -> Result<()> {
    let loop_move = match mv {
        WordMove::Commute { pos } => LoopMove::Exchange { pos },
        WordMove::NilRemove { pos, .. } => LoopMove::RemoveSquare { pos },
        WordMove::NilInsert { pos, letter } => LoopMove::InsertSquare { pos, letter },
    };
    apply_move_to_builder(group, b, loop_move)?;
    script.push(loop_move);
    Ok(())
}

// ---------------------------------------------------------------------------
// Fundamental group of the 2-complexes.

/// Spanning-tree presentation data: the presentation plus the non-tree edge
/// carried by each generator.
pub struct Pi1Presentation {
    pub presentation: Presentation,
    /// Non-tree edge (u, v), u < v, of generator i.
    pub generator_edges: Vec<(ElemId, ElemId)>,
    /// BFS tree parent edge of every vertex except the base.
    pub tree_parent: Vec<Option<ElemId>>,
}

/// Spanning-tree presentation of pi_1 of a 2-complex at a base chamber:
/// generators are non-tree edges, relators the 2-cell boundaries.
pub fn pi1_presentation(complex: &TwoComplex, base: ElemId) -> Result<Pi1Presentation> {
    let graph = complex.graph();
    let n = graph.num_vertices();

    // BFS tree with neighbors scanned in ascending id order.
    let mut parent: Vec<Option<ElemId>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[base as usize] = true;
    let mut queue = VecDeque::from([base]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in graph.neighbors(u) {
            if !seen[v as usize] {
                seen[v as usize] = true;
                parent[v as usize] = Some(u);
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    if reached != n {
        return Err(Error::DisconnectedGraph {
            unreached: n - reached,
        });
    }

    let tree_edge: std::collections::BTreeSet<(ElemId, ElemId)> = (0..n as ElemId)
        .filter_map(|v| parent[v as usize].map(|p| ordered(p, v)))
        .collect();
    let mut generator_edges = Vec::new();
    let mut gen_of_edge = std::collections::HashMap::new();
    for &(u, v) in graph.edges() {
        if !tree_edge.contains(&(u, v)) {
            gen_of_edge.insert((u, v), generator_edges.len());
            generator_edges.push((u, v));
        }
    }

    let mut relators = Vec::new();
    for cell in complex.cells() {
        let k = cell.len();
        let mut relator: Vec<i32> = Vec::new();
        for i in 0..k {
            let (a, bv) = (cell[i], cell[(i + 1) % k]);
            let key = ordered(a, bv);
            if let Some(&g) = gen_of_edge.get(&key) {
                let sign = if a < bv { 1 } else { -1 };
                relator.push(sign * (g as i32 + 1));
            }
        }
        let relator = Presentation::free_reduce(&relator);
        if !relator.is_empty() {
            relators.push(relator);
        }
    }

    let names = (0..generator_edges.len())
        .map(|i| format!("x{}", i + 1))
        .collect();
    Ok(Pi1Presentation {
        presentation: Presentation::new(names, relators),
        generator_edges,
        tree_parent: parent,
    })
}

fn ordered(a: ElemId, b: ElemId) -> (ElemId, ElemId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// First homology of a 2-complex: Betti number and torsion coefficients via
/// the abelianized spanning-tree presentation.
pub fn h1_of_complex(complex: &TwoComplex) -> Result<crate::presentation::Abelianization> {
    let pi1 = pi1_presentation(complex, 0)?;
    Ok(pi1.presentation.abelianization())
}

// ---------------------------------------------------------------------------
// Level-lowering constructions for k > 3.

/// Reinterprets an (n-2)-loop at the coarser level n-k+1 (valid because
/// closer chambers stay q-near for smaller q).
pub fn level_project(group: &Group, l: &QLoop, k: usize) -> Result<QLoop> {
    let n = group.rank();
    if k <= 3 || k > n + 1 {
        return Err(Error::KOutOfRange {
            given: k,
            lo: 4,
            hi: n + 1,
        });
    }
    if l.q() != n - 2 {
        return Err(Error::LoopMismatch {
            reason: "level projection starts from an (n-2)-loop".into(),
        });
    }
    QLoop::new(group, n + 1 - k, l.chambers().to_vec())
}

/// Refines a q-loop (q = n-k+1) into a loop whose consecutive chambers are
/// adjacent or equal, walking inside the face coset shared by each q-near
/// pair; returns the refined loop and a grid certificate of q-equivalence.
pub fn normalize_to_gallery(
    group: &Group,
    l: &QLoop,
    k: usize,
) -> Result<(QLoop, HomotopyGrid)> {
    let n = group.rank();
    if k <= 3 || k > n + 1 {
        return Err(Error::KOutOfRange {
            given: k,
            lo: 4,
            hi: n + 1,
        });
    }
    if l.q() != n + 1 - k {
        return Err(Error::LoopMismatch {
            reason: format!("expected a loop at level n-k+1 = {}", n + 1 - k),
        });
    }
    let mut b = GridBuilder::new(l);
    let mut pos = 0;
    while pos + 1 < b.current.len() {
        let (u, v) = (b.current[pos], b.current[pos + 1]);
        let d = group.mul(group.inv(u), v);
        if group.length(d) <= 1 {
            pos += 1;
            continue;
        }
        // Path from u to v inside the coset u W_K, K = support(u^-1 v);
        // the canonical word of the difference walks it.
        let word = group.word_of(d).clone();
        debug_assert!(word.support().len() <= k - 2);
        let mut c = u;
        for (j, &letter) in word.letters()[..word.len() - 1].iter().enumerate() {
            c = group.right_mul(c, letter);
            b.stretch(pos + j);
            b.replace(&[(pos + j + 1, c)]);
        }
        pos += word.len();
    }
    let refined = b.current_loop(group)?;
    Ok((refined, b.finalize()))
}

/// The contraction grid for a conjugated braid relator: a q-homotopy
/// (q = n-k+1) from g(u (st)^m u^-1) down to the constant loop.
pub fn contract_relator_grid(
    group: &Group,
    k: usize,
    conjugator: &Word,
    s: u8,
    t: u8,
) -> Result<HomotopyGrid> {
    let n = group.rank();
    if k <= 3 || k > n + 1 {
        return Err(Error::KOutOfRange {
            given: k,
            lo: 4,
            hi: n + 1,
        });
    }
    let q = n + 1 - k;
    if s == t || s as usize >= n || t as usize >= n {
        return Err(Error::BadParameter {
            name: "generators",
            given: format!("s{} s{}", s + 1, t + 1),
            reason: "the relator needs two distinct generators".into(),
        });
    }
    let m = group
        .system()
        .bond(s as usize, t as usize)
        .ok_or(Error::InfiniteSystem {
            description: format!("m(s{},s{}) is infinite", s + 1, t + 1),
        })? as usize;
    conjugator.check_rank(n)?;

    let relator = crate::relaxed::relator_word(s, t, m as u32);
    let full = conjugator.concat(&relator).concat(&conjugator.reversed());
    let chambers = chain_of_word(group, Group::IDENTITY, &full)?;
    debug_assert_eq!(*chambers.last().unwrap(), Group::IDENTITY);
    let start = QLoop::new(group, q, chambers)?;
    let mut b = GridBuilder::new(&start);

    // Contract the relator cycle one column at a time: every entry of the
    // cycle lies in the coset tau0 W_{s,t}, so replacing it by tau0 keeps
    // rows and columns q-near (their differences have support in {s, t},
    // of size at most k - 2).
    let offset = conjugator.len(); // index of tau0 in the row
    let tau0 = b.current[offset];
    for i in 1..2 * m {
        b.replace(&[(offset + i, tau0)]);
    }
    // The middle is now constant: destretch the 2m duplicates away.
    for _ in 0..2 * m {
        b.destretch(offset);
    }
    // What remains is g(u u^-1): cancel the nil pairs at the apex.
    for _ in 0..conjugator.len() {
        let apex = b.current.len() / 2;
        // pattern (c, c.s, c) centered at the apex
        b.replace(&[(apex, b.current[apex - 1])]);
        b.destretch(apex);
        b.destretch(apex - 1);
    }
    debug_assert_eq!(b.current, vec![Group::IDENTITY]);
    Ok(b.finalize())
}

// ---------------------------------------------------------------------------
// Triviality probe.

/// Evidence that a finitely presented group is nontrivial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NontrivialEvidence {
    /// The abelianization is nonzero.
    NonzeroH1 {
        free_rank: usize,
        torsion: Vec<num_bigint::BigInt>,
    },
    /// Coset enumeration completed with more than one coset.
    FiniteOrder(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeOutcome {
    Trivial,
    Nontrivial(NontrivialEvidence),
    Inconclusive { reason: String },
}

/// Size guard above which the probe skips the abelianization step.
const H1_NONZERO_GUARD: usize = 2_000_000;

/// Tri-state triviality test: abelianization certificate for nontriviality,
/// coset enumeration (bounded by `coset_cap`) for triviality, and an honest
/// inconclusive otherwise.
pub fn pi1_triviality_probe(p: &Presentation, coset_cap: usize) -> ProbeOutcome {
    let volume: usize = p.relators().iter().map(|r| r.len()).sum();
    if volume <= H1_NONZERO_GUARD {
        let ab = p.abelianization();
        if !ab.is_trivial() {
            return ProbeOutcome::Nontrivial(NontrivialEvidence::NonzeroH1 {
                free_rank: ab.free_rank,
                torsion: ab.torsion,
            });
        }
    }
    match enumerate_cosets(p, coset_cap) {
        EnumerationOutcome::Complete { cosets: 1 } => ProbeOutcome::Trivial,
        EnumerationOutcome::Complete { cosets } => {
            ProbeOutcome::Nontrivial(NontrivialEvidence::FiniteOrder(cosets))
        }
        EnumerationOutcome::Capped => ProbeOutcome::Inconclusive {
            reason: format!("coset enumeration capped at {coset_cap}"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_two_complex, DEFAULT_CELL_CAP};
    use crate::relaxed::RelaxedSystem;
    use std::sync::Arc;

    fn group(label: &str) -> Arc<Group> {
        Arc::new(Group::from_label(label).unwrap())
    }

    fn w(letters: Vec<u8>) -> Word {
        Word(letters)
    }

    #[test]
    fn words_of_simple_loops() {
        let g = group("A2");
        let trivial = QLoop::trivial(0, 0);
        assert_eq!(word_of_loop(&g, &trivial).unwrap(), Word::empty());

        let l = loop_of_word(&g, &w(vec![0, 0])).unwrap();
        assert_eq!(l.chambers().len(), 3);
        assert_eq!(word_of_loop(&g, &l).unwrap(), w(vec![0, 0]));

        // Hexagon gallery: (s1 s2)^3.
        let hex = loop_of_word(&g, &crate::relaxed::relator_word(0, 1, 3)).unwrap();
        assert_eq!(hex.chambers().len(), 7);
        assert_eq!(
            word_of_loop(&g, &hex).unwrap(),
            crate::relaxed::relator_word(0, 1, 3)
        );
    }

    #[test]
    fn chain_of_non_identity_word_is_not_a_loop() {
        let g = group("A2");
        assert!(matches!(
            loop_of_word(&g, &w(vec![0, 1])),
            Err(Error::NotInKernel { .. })
        ));
        let chain = chain_of_word(&g, 0, &w(vec![0, 1])).unwrap();
        assert_eq!(chain.len(), 3);
        assert_ne!(*chain.last().unwrap(), 0);
    }

    #[test]
    fn grid_verification() {
        let g = group("A3");
        let l = loop_of_word(&g, &w(vec![0, 0, 2, 2])).unwrap();
        let rows = vec![l.chambers().to_vec(), l.chambers().to_vec()];
        assert!(verify_grid(&g, &HomotopyGrid::new(1, rows)).is_pass());

        // Break one cell.
        let mut rows = vec![l.chambers().to_vec(), l.chambers().to_vec()];
        let far = g.eval_word(&w(vec![0, 1, 0])).unwrap();
        rows[1][2] = far;
        match verify_grid(&g, &HomotopyGrid::new(1, rows)) {
            GridCheck::Fail { row: 1, .. } => {}
            other => panic!("expected a failure witness, got {other:?}"),
        }
    }

    #[test]
    fn moves_emit_valid_grids() {
        let g = group("A3");
        let l = loop_of_word(&g, &w(vec![0, 2, 0, 2])).unwrap();

        let (stretched, grid) = apply_move(&g, &l, LoopMove::Stretch { pos: 2 }).unwrap();
        assert!(verify_grid(&g, &grid).is_pass());
        assert_eq!(stretched.len(), l.len() + 1);
        assert_eq!(word_of_loop(&g, &stretched).unwrap(), w(vec![0, 2, 0, 2]));

        let (inserted, grid) =
            apply_move(&g, &l, LoopMove::InsertSquare { pos: 1, letter: 1 }).unwrap();
        assert!(verify_grid(&g, &grid).is_pass());
        assert_eq!(
            word_of_loop(&g, &inserted).unwrap(),
            w(vec![0, 1, 1, 2, 0, 2])
        );

        let (exchanged, grid) = apply_move(&g, &l, LoopMove::Exchange { pos: 0 }).unwrap();
        assert!(verify_grid(&g, &grid).is_pass());
        assert_eq!(word_of_loop(&g, &exchanged).unwrap(), w(vec![2, 0, 0, 2]));

        // T3 on a non-commuting pair is rejected.
        let braid = loop_of_word(&g, &crate::relaxed::relator_word(0, 1, 3)).unwrap();
        assert!(matches!(
            apply_move(&g, &braid, LoopMove::Exchange { pos: 0 }),
            Err(Error::InvalidMove { .. })
        ));
    }

    #[test]
    fn decide_nil_loop_contractible() {
        let g = group("A2");
        let rs = RelaxedSystem::relax(Arc::clone(&g));
        let l = loop_of_word(&g, &w(vec![0, 0])).unwrap();
        let trivial = QLoop::trivial(0, 0);
        match decide_homotopic(&rs, &l, &trivial).unwrap() {
            HomotopyDecision::Equivalent { script, grid } => {
                assert!(verify_grid(&g, &grid).is_pass());
                assert!(!script.is_empty());
            }
            other => panic!("expected equivalence, got {other:?}"),
        }
    }

    #[test]
    fn decide_hexagon_not_contractible() {
        let g = group("A2");
        let rs = RelaxedSystem::relax(Arc::clone(&g));
        let hex = loop_of_word(&g, &crate::relaxed::relator_word(0, 1, 3)).unwrap();
        let trivial = QLoop::trivial(0, 0);
        match decide_homotopic(&rs, &hex, &trivial).unwrap() {
            HomotopyDecision::NotEquivalent {
                normal_form_left, ..
            } => {
                assert_eq!(normal_form_left, crate::relaxed::relator_word(0, 1, 3));
            }
            other => panic!("expected obstruction, got {other:?}"),
        }
    }

    #[test]
    fn decide_commuting_square_with_certificate() {
        let g = group("A3");
        let rs = RelaxedSystem::relax(Arc::clone(&g));
        let l = loop_of_word(&g, &w(vec![0, 2, 0, 2])).unwrap();
        let trivial = QLoop::trivial(1, 0);
        match decide_homotopic(&rs, &l, &trivial).unwrap() {
            HomotopyDecision::Equivalent { script, grid } => {
                assert!(verify_grid(&g, &grid).is_pass());
                // Replay the script independently.
                let mut cur = l.clone();
                for mv in script {
                    let (next, frag) = apply_move(&g, &cur, mv).unwrap();
                    assert!(verify_grid(&g, &frag).is_pass());
                    cur = next;
                }
                assert_eq!(cur.chambers(), trivial.chambers());
            }
            other => panic!("expected equivalence, got {other:?}"),
        }
    }

    #[test]
    fn decide_respects_stretching() {
        let g = group("A3");
        let rs = RelaxedSystem::relax(Arc::clone(&g));
        let l = loop_of_word(&g, &w(vec![0, 1, 1, 0])).unwrap();
        let (stretched, _) = apply_move(&g, &l, LoopMove::Stretch { pos: 1 }).unwrap();
        let (stretched, _) =
            apply_move(&g, &stretched, LoopMove::Stretch { pos: 3 }).unwrap();
        match decide_homotopic(&rs, &stretched, &l).unwrap() {
            HomotopyDecision::Equivalent { grid, .. } => {
                assert!(verify_grid(&g, &grid).is_pass());
            }
            other => panic!("expected equivalence, got {other:?}"),
        }
    }

    #[test]
    fn pi1_of_hexagon_is_free_rank_one() {
        let g = group("A2");
        let x = build_two_complex(&g, 0, DEFAULT_CELL_CAP).unwrap();
        let pi1 = pi1_presentation(&x, 0).unwrap();
        assert_eq!(pi1.presentation.num_generators(), 1);
        assert_eq!(pi1.presentation.num_relators(), 0);
        let h1 = h1_of_complex(&x).unwrap();
        assert_eq!(h1.free_rank, 1);
        assert!(h1.torsion.is_empty());
    }

    #[test]
    fn pi1_counts_for_a3_and_b3() {
        let g = group("A3");
        let x = build_two_complex(&g, 1, DEFAULT_CELL_CAP).unwrap();
        let pi1 = pi1_presentation(&x, 0).unwrap();
        assert_eq!(pi1.presentation.num_generators(), 13);
        assert_eq!(pi1.presentation.num_relators(), 6);
        let h1 = h1_of_complex(&x).unwrap();
        assert_eq!(h1.free_rank, 7);
        assert!(h1.torsion.is_empty());

        let gb = group("B3");
        let xb = build_two_complex(&gb, 1, DEFAULT_CELL_CAP).unwrap();
        let pi1b = pi1_presentation(&xb, 0).unwrap();
        assert_eq!(pi1b.presentation.num_generators(), 25);
        assert_eq!(pi1b.presentation.num_relators(), 12);
        let h1b = h1_of_complex(&xb).unwrap();
        assert_eq!(h1b.free_rank, 13);
        assert!(h1b.torsion.is_empty());
    }

    #[test]
    fn level_projection_and_gallery_refinement() {
        let g = group("A3");
        // k = 4, q = 0: a loop jumping by s1 s2 s1 within a shared face.
        let jump = g.eval_word(&w(vec![0, 1, 0])).unwrap();
        let l = QLoop::new(&g, 0, vec![0, jump, 0]).unwrap();
        let (refined, grid) = normalize_to_gallery(&g, &l, 4).unwrap();
        assert!(verify_grid(&g, &grid).is_pass());
        for pair in refined.chambers().windows(2) {
            let d = g.mul(g.inv(pair[0]), pair[1]);
            assert!(g.length(d) <= 1);
        }
        // The refined loop projects back: types match.
        assert_eq!(refined.q(), 0);

        // An already-adjacent loop is unchanged.
        let tight = loop_of_word(&g, &w(vec![0, 0])).unwrap();
        let projected = level_project(&g, &tight, 4).unwrap();
        let (same, grid) = normalize_to_gallery(&g, &projected, 4).unwrap();
        assert!(verify_grid(&g, &grid).is_pass());
        assert_eq!(same.chambers(), projected.chambers());
    }

    #[test]
    fn relator_contraction_grids() {
        let g = group("A3");
        // Hexagon relator (s1 s2)^3 at k = 4, bare and conjugated.
        let grid = contract_relator_grid(&g, 4, &Word::empty(), 0, 1).unwrap();
        assert!(verify_grid(&g, &grid).is_pass());
        assert!(grid.rows().last().unwrap().iter().all(|&c| c == 0));

        let grid = contract_relator_grid(&g, 4, &w(vec![2]), 0, 1).unwrap();
        assert!(verify_grid(&g, &grid).is_pass());
        assert!(grid.rows().last().unwrap().iter().all(|&c| c == 0));

        let gb = group("B3");
        let grid = contract_relator_grid(&gb, 4, &Word::empty(), 0, 1).unwrap();
        assert!(verify_grid(&gb, &grid).is_pass());
    }

    #[test]
    fn probe_outcomes() {
        // < a | a > is trivial.
        let p = Presentation::new(vec!["a".into()], vec![vec![1]]);
        assert_eq!(pi1_triviality_probe(&p, 1000), ProbeOutcome::Trivial);
        // Free of rank 1: nontrivial by H1.
        let free = Presentation::new(vec!["a".into()], vec![]);
        assert!(matches!(
            pi1_triviality_probe(&free, 1000),
            ProbeOutcome::Nontrivial(NontrivialEvidence::NonzeroH1 { free_rank: 1, .. })
        ));
        // Z/2: nontrivial by torsion.
        let z2 = Presentation::new(vec!["a".into()], vec![vec![1, 1]]);
        assert!(matches!(
            pi1_triviality_probe(&z2, 1000),
            ProbeOutcome::Nontrivial(NontrivialEvidence::NonzeroH1 { .. })
        ));
    }

    #[test]
    fn a3_low_level_complex_is_trivial() {
        let g = group("A3");
        let x = build_two_complex(&g, 0, DEFAULT_CELL_CAP).unwrap();
        let pi1 = pi1_presentation(&x, 0).unwrap();
        assert_eq!(
            pi1_triviality_probe(&pi1.presentation, 100_000),
            ProbeOutcome::Trivial
        );
    }

    #[test]
    fn disconnected_graph_rejected() {
        // q = n-1 makes the nearness threshold zero, so the graph is edgeless.
        let g = group("A3");
        let x = build_two_complex(&g, 2, DEFAULT_CELL_CAP).unwrap();
        assert_eq!(x.graph().num_edges(), 0);
        assert!(matches!(
            pi1_presentation(&x, 0),
            Err(Error::DisconnectedGraph { unreached: 23 })
        ));
    }
}
