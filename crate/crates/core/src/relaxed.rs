//! The relaxed group W': the Coxeter group on the same generators as W with
//! every braid relation dropped except the commutations.
//!
//! In the default full relaxation m'(s,t) = 2 where m(s,t) = 2 and infinity
//! elsewhere, which makes W' a right-angled Coxeter group: words have exact
//! normal forms (square-free up to commutation, lexicographically least), and
//! normalization can emit the nil/commutation move trace that the homotopy
//! certificates replay. The selective mode relaxes only a chosen
//! conjugation-closed collection of rank-2 parabolics and keeps the other
//! finite labels; its word problem runs through a bounded nil/braid search
//! that reports inconclusive rather than guessing.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::arrangements::ParabolicSubgroup;
use crate::classify::{CoxeterMatrix, INFINITE};
use crate::coxeter::{ElemId, Group, GroupElement};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelaxMode {
    /// All labels > 2 become infinite.
    Full,
    /// Labels become infinite exactly on a chosen collection of rank-2
    /// parabolics; other finite labels are retained.
    Selective,
}

/// W' together with the surjection phi' onto the base group W.
pub struct RelaxedSystem {
    base: Arc<Group>,
    matrix: CoxeterMatrix,
    mode: RelaxMode,
}

/// Default node bound for the selective-mode word search.
pub const DEFAULT_SEARCH_BOUND: usize = 200_000;

impl RelaxedSystem {
    /// Full relaxation: replace every label > 2 by infinity.
    pub fn relax(base: Arc<Group>) -> RelaxedSystem {
        let n = base.rank();
        let m = base.system().coxeter_matrix();
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = match m.entry(i, j) {
                    1 => 1,
                    2 => 2,
                    _ => INFINITE,
                };
            }
        }
        let matrix = CoxeterMatrix::new(n, entries).expect("relaxation preserves validity");
        RelaxedSystem {
            base,
            matrix,
            mode: RelaxMode::Full,
        }
    }

    /// Selective relaxation on a conjugation-closed collection of rank-2
    /// parabolics: m'(s,t) = infinity iff <s,t> is in the collection.
    pub fn relax_selective(
        base: Arc<Group>,
        collection: &[ParabolicSubgroup],
    ) -> Result<RelaxedSystem> {
        for p in collection {
            if p.rank() != 2 {
                return Err(Error::BadParameter {
                    name: "collection",
                    given: format!("rank {}", p.rank()),
                    reason: "selective relaxation takes rank-2 parabolics".into(),
                });
            }
        }
        // Conjugation closure, witnessed by the conjugating element.
        let keys: BTreeSet<&[ElemId]> = collection.iter().map(|p| p.reflections()).collect();
        for p in collection {
            for w in 0..base.order() as ElemId {
                let mut conj: Vec<ElemId> = p
                    .reflections()
                    .iter()
                    .map(|&t| base.conjugate(w, t))
                    .collect();
                conj.sort_unstable();
                if !keys.contains(conj.as_slice()) {
                    return Err(Error::NotConjugationClosed {
                        word: base.word_of(w).to_string(),
                    });
                }
            }
        }

        let n = base.rank();
        let m = base.system().coxeter_matrix();
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = m.entry(i, j);
            }
        }
        for s in 0..n {
            for t in (s + 1)..n {
                let gens = [base.right_mul(0, s as u8), base.right_mul(0, t as u8)];
                let sub = base.subgroup_closure(&gens);
                let mut refl: Vec<ElemId> = sub
                    .iter()
                    .copied()
                    .filter(|&e| {
                        // Reflections of the rank-2 standard parabolic:
                        // elements of odd length in the dihedral group.
                        base.length(e) % 2 == 1
                    })
                    .collect();
                refl.sort_unstable();
                if keys.contains(refl.as_slice()) {
                    entries[s * n + t] = INFINITE;
                    entries[t * n + s] = INFINITE;
                }
            }
        }
        let matrix = CoxeterMatrix::new(n, entries)?;
        Ok(RelaxedSystem {
            base,
            matrix,
            mode: RelaxMode::Selective,
        })
    }

    pub fn base(&self) -> &Arc<Group> {
        &self.base
    }

    pub fn mode(&self) -> RelaxMode {
        self.mode
    }

    pub fn relaxed_matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    pub fn commutes(&self, s: u8, t: u8) -> bool {
        self.matrix.entry(s as usize, t as usize) == 2
    }

    /// True when every off-diagonal relaxed label is 2 or infinite, i.e. the
    /// exact right-angled normal form applies.
    pub fn has_exact_normal_form(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..i).all(|j| matches!(self.matrix.entry(i, j), 2 | INFINITE)))
    }

    /// phi'(w): evaluation of the word in the base group W.
    pub fn project(&self, w: &Word) -> Result<GroupElement> {
        self.base.reduce(w)
    }

    /// Kernel membership of phi', with the image as witness.
    pub fn kernel_membership(&self, w: &Word) -> Result<KernelWitness> {
        let image = self.project(w)?;
        Ok(KernelWitness {
            in_kernel: image.is_identity(),
            word: w.clone(),
            image,
        })
    }

    /// Exact normal form in W'. The full relaxation (and any right-angled matrix)
    /// uses the trace normal form; otherwise a bounded nil/braid search with
    /// the default bound.
    pub fn normal_form(&self, w: &Word) -> Result<RelaxedElement> {
        w.check_rank(self.rank())?;
        if self.has_exact_normal_form() {
            let (nf, _) = self.normalize_with_trace(w)?;
            Ok(RelaxedElement { normal_form: nf })
        } else {
            let nf = self.normal_form_bounded(w, DEFAULT_SEARCH_BOUND)?;
            Ok(RelaxedElement { normal_form: nf })
        }
    }

    pub fn equal_in_relaxed(&self, a: &Word, b: &Word) -> Result<bool> {
        Ok(self.normal_form(a)? == self.normal_form(b)?)
    }

    /// Right-angled normal form together with the elementary move trace
    /// (commutations and nil removals) that transforms the input into it.
    pub fn normalize_with_trace(&self, w: &Word) -> Result<(Word, Vec<WordMove>)> {
        if !self.has_exact_normal_form() {
            return Err(Error::BadParameter {
                name: "mode",
                given: "selective".into(),
                reason: "move traces exist only for the right-angled relaxation".into(),
            });
        }
        w.check_rank(self.rank())?;
        let mut cur = w.letters().to_vec();
        let mut moves = Vec::new();

        // Phase 1: cancel squares modulo commutation. A pair (i, j) with
        // equal letters cancels when everything strictly between commutes
        // with that letter; bubble j next to i and remove.
        loop {
            let mut cancel: Option<(usize, usize)> = None;
            'search: for i in 0..cur.len() {
                for j in (i + 1)..cur.len() {
                    if cur[j] == cur[i] {
                        cancel = Some((i, j));
                        break 'search;
                    }
                    if !self.commutes(cur[i], cur[j]) {
                        break;
                    }
                }
            }
            let Some((i, mut j)) = cancel else { break };
            while j > i + 1 {
                cur.swap(j - 1, j);
                moves.push(WordMove::Commute { pos: j - 1 });
                j -= 1;
            }
            let letter = cur[i];
            cur.drain(i..=i + 1);
            moves.push(WordMove::NilRemove { pos: i, letter });
        }

        // Phase 2: lexicographically least linearization; repeatedly move the
        // least available letter to the front of the unsorted suffix.
        let len = cur.len();
        for done in 0..len {
            let mut best: Option<usize> = None;
            'scan: for p in done..len {
                for q in done..p {
                    if !self.commutes(cur[q], cur[p]) {
                        continue 'scan;
                    }
                }
                if best.map(|b| cur[p] < cur[b]).unwrap_or(true) {
                    best = Some(p);
                }
            }
            let mut p = best.expect("suffix is nonempty");
            while p > done {
                cur.swap(p - 1, p);
                moves.push(WordMove::Commute { pos: p - 1 });
                p -= 1;
            }
        }
        Ok((Word(cur), moves))
    }

    /// Bounded Tits-style search: braid closures at each length, taking nil
    /// reductions greedily; exact when it completes, explicit error when the
    /// node bound is exceeded.
    pub fn normal_form_bounded(&self, w: &Word, bound: usize) -> Result<Word> {
        w.check_rank(self.rank())?;
        let mut visited_total = 0usize;
        let mut current = w.letters().to_vec();
        loop {
            let closure = self.braid_closure(&current, bound, &mut visited_total)?;
            let mut shortened = None;
            'outer: for word in &closure {
                for i in 0..word.len().saturating_sub(1) {
                    if word[i] == word[i + 1] {
                        let mut shorter = word.clone();
                        shorter.drain(i..=i + 1);
                        shortened = Some(shorter);
                        break 'outer;
                    }
                }
            }
            match shortened {
                Some(s) => current = s,
                None => {
                    let least = closure.into_iter().min().expect("closure contains input");
                    return Ok(Word(least));
                }
            }
        }
    }

    /// All words reachable by braid moves (finite relaxed labels only).
    fn braid_closure(
        &self,
        start: &[u8],
        bound: usize,
        visited_total: &mut usize,
    ) -> Result<BTreeSet<Vec<u8>>> {
        let n = self.rank();
        let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<u8>> = VecDeque::new();
        seen.insert(start.to_vec());
        queue.push_back(start.to_vec());
        while let Some(word) = queue.pop_front() {
            *visited_total += 1;
            if *visited_total > bound {
                return Err(Error::Inconclusive {
                    what: "relaxed-word braid search".into(),
                    bound,
                });
            }
            for s in 0..n as u8 {
                for t in 0..n as u8 {
                    if s == t {
                        continue;
                    }
                    let m = match self.matrix.bond(s as usize, t as usize) {
                        Some(m) if m >= 2 => m as usize,
                        _ => continue,
                    };
                    if word.len() < m {
                        continue;
                    }
                    for i in 0..=(word.len() - m) {
                        let alternating = (0..m).all(|k| {
                            word[i + k] == if k % 2 == 0 { s } else { t }
                        });
                        if !alternating {
                            continue;
                        }
                        let mut next = word.clone();
                        for (k, slot) in next[i..i + m].iter_mut().enumerate() {
                            *slot = if k % 2 == 0 { t } else { s };
                        }
                        if seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        Ok(seen)
    }
}

/// An element of W' in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelaxedElement {
    normal_form: Word,
}

impl RelaxedElement {
    pub fn normal_form(&self) -> &Word {
        &self.normal_form
    }

    pub fn is_identity(&self) -> bool {
        self.normal_form.is_empty()
    }
}

impl std::fmt::Display for RelaxedElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.normal_form)
    }
}

/// Evidence about phi'-kernel membership of a word.
#[derive(Debug, Clone)]
pub struct KernelWitness {
    pub word: Word,
    pub image: GroupElement,
    pub in_kernel: bool,
}

/// An elementary rewriting move on a word over S.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordMove {
    /// Remove the equal letters at positions pos, pos + 1.
    NilRemove { pos: usize, letter: u8 },
    /// Insert the letter twice, the copies landing at positions pos, pos + 1.
    NilInsert { pos: usize, letter: u8 },
    /// Swap the commuting letters at positions pos, pos + 1.
    Commute { pos: usize },
}

impl WordMove {
    pub fn inverse(self) -> WordMove {
        match self {
            WordMove::NilRemove { pos, letter } => WordMove::NilInsert { pos, letter },
            WordMove::NilInsert { pos, letter } => WordMove::NilRemove { pos, letter },
            WordMove::Commute { pos } => WordMove::Commute { pos },
        }
    }
}

/// Applies a move, validating its side conditions against the relaxation.
pub fn apply_word_move(rsys: &RelaxedSystem, word: &Word, mv: WordMove) -> Result<Word> {
    let mut v = word.letters().to_vec();
    match mv {
        WordMove::NilRemove { pos, letter } => {
            if pos + 1 >= v.len() || v[pos] != v[pos + 1] || v[pos] != letter {
                return Err(Error::InvalidMove {
                    step: pos,
                    reason: "nil removal needs equal adjacent letters".into(),
                });
            }
            v.drain(pos..=pos + 1);
        }
        WordMove::NilInsert { pos, letter } => {
            if pos > v.len() {
                return Err(Error::InvalidMove {
                    step: pos,
                    reason: "insertion past the end of the word".into(),
                });
            }
            v.insert(pos, letter);
            v.insert(pos, letter);
        }
        WordMove::Commute { pos } => {
            if pos + 1 >= v.len() {
                return Err(Error::InvalidMove {
                    step: pos,
                    reason: "swap past the end of the word".into(),
                });
            }
            if !rsys.commutes(v[pos], v[pos + 1]) {
                return Err(Error::InvalidMove {
                    step: pos,
                    reason: "letters do not commute".into(),
                });
            }
            v.swap(pos, pos + 1);
        }
    }
    Ok(Word(v))
}

/// Reads a top-level loop as a word of ker phi' (one direction of the
/// loop/kernel dictionary). Loop words always project to the identity.
pub fn loop_to_kernel_word(
    rsys: &RelaxedSystem,
    l: &crate::homotopy::QLoop,
) -> Result<KernelWitness> {
    let word = crate::homotopy::word_of_loop(rsys.base(), l)?;
    let witness = rsys.kernel_membership(&word)?;
    debug_assert!(witness.in_kernel, "loop words evaluate to the identity");
    Ok(witness)
}

/// Realizes a kernel word as a based top-level loop (the other direction);
/// rejects words outside the kernel, whose chains do not close.
pub fn kernel_word_to_loop(
    rsys: &RelaxedSystem,
    w: &Word,
) -> Result<crate::homotopy::QLoop> {
    crate::homotopy::loop_of_word(rsys.base(), w)
}

/// The alternating relator word (s t)^m.
pub fn relator_word(s: u8, t: u8, m: u32) -> Word {
    Word(
        (0..2 * m as usize)
            .map(|i| if i % 2 == 0 { s } else { t })
            .collect(),
    )
}

/// Reidemeister-Schreier data for ker phi' <= W' over the Cayley transversal.
pub struct SchreierPresentation {
    pub presentation: Presentation,
    /// Non-tree Cayley edges (u, v) with u.s = v, indexed by generator; the
    /// indexing is shared edge-for-edge with the spanning-tree presentation
    /// of the top-level q-graph.
    pub edge_of_generator: Vec<(ElemId, ElemId)>,
}

/// Rewrites the defining relators of W' over Schreier generators of the
/// kernel. The transversal is the shortlex BFS tree of the Cayley graph of
/// W, so coset representatives are exactly the canonical words.
///
/// The s^2 relators rewrite to freely trivial words (traversing one edge
/// forth and back), so only the commutation relators contribute.
pub fn schreier_kernel_presentation(rsys: &RelaxedSystem) -> Result<SchreierPresentation> {
    if !rsys.has_exact_normal_form() {
        return Err(Error::BadParameter {
            name: "mode",
            given: "selective".into(),
            reason: "the kernel presentation is built for the right-angled relaxation".into(),
        });
    }
    let group = rsys.base();
    let n = group.rank();
    let order = group.order();

    // Non-tree edges in canonical order; tree edges map to no generator.
    let mut tree_edge: BTreeSet<(ElemId, ElemId)> = BTreeSet::new();
    for e in 1..order as ElemId {
        let (parent, _) = group.bfs_parent(e).expect("non-identity");
        tree_edge.insert(ordered(parent, e));
    }
    let mut edge_of_generator: Vec<(ElemId, ElemId)> = Vec::new();
    let mut generator_of_edge: HashMap<(ElemId, ElemId), usize> = HashMap::new();
    for u in 0..order as ElemId {
        for s in 0..n as u8 {
            let v = group.right_mul(u, s);
            if u < v {
                let key = (u, v);
                if !tree_edge.contains(&key) {
                    generator_of_edge.insert(key, edge_of_generator.len());
                    edge_of_generator.push(key);
                }
            }
        }
    }

    // Schreier rewriting of (s t s t) from every coset, for commuting pairs.
    let mut relators: Vec<Vec<i32>> = Vec::new();
    for u in 0..order as ElemId {
        for s in 0..n as u8 {
            for t in (s + 1)..n as u8 {
                if !rsys.commutes(s, t) {
                    continue;
                }
                let path = [s, t, s, t];
                let mut cur = u;
                let mut relator: Vec<i32> = Vec::new();
                for &letter in &path {
                    let next = group.right_mul(cur, letter);
                    let key = ordered(cur, next);
                    if let Some(&g) = generator_of_edge.get(&key) {
                        let sign = if cur < next { 1 } else { -1 };
                        relator.push(sign * (g as i32 + 1));
                    }
                    cur = next;
                }
                debug_assert_eq!(cur, u, "commutation relator closes");
                let relator = Presentation::free_reduce(&relator);
                if !relator.is_empty() {
                    relators.push(relator);
                }
            }
        }
    }
    let names = (0..edge_of_generator.len())
        .map(|i| format!("y{}", i + 1))
        .collect();
    Ok(SchreierPresentation {
        presentation: Presentation::new(names, relators),
        edge_of_generator,
    })
}

fn ordered(a: ElemId, b: ElemId) -> (ElemId, ElemId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}
