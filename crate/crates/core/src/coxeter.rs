//! Abstract finite Coxeter systems: construction, enumeration, canonical
//! words and group operations.
//!
//! A `Group` is built once per system by a shortlex Cayley BFS: elements are
//! discovered through their faithful signed-permutation action on the
//! positive roots, and the first word reaching an element is its canonical
//! (shortlex-least reduced) representative. Every later operation — word
//! reduction, products, inverses, supports — is a table walk.

use std::collections::HashMap;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::classify::{classify, standard_matrix, Classification, CoxeterMatrix};
use crate::error::{Error, Result};
use crate::roots::{compose_signed, ReflectionRep};
use crate::word::Word;

/// Identifies the system an element belongs to (derived from the matrix, so
/// equal matrices yield interchangeable elements).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SystemId(u64);

/// A Coxeter system (W, S) described by its Coxeter matrix.
#[derive(Debug, Clone)]
pub struct CoxeterSystem {
    matrix: CoxeterMatrix,
    type_label: Option<String>,
    classification: Classification,
    id: SystemId,
}

impl CoxeterSystem {
    /// Builds a system from a Cartan-Killing type label (`A3`, `B3`, `I2(7)`, ...).
    pub fn from_label(label: &str) -> Result<CoxeterSystem> {
        let (matrix, canonical) = standard_matrix(label)?;
        Ok(Self::build(matrix, Some(canonical)))
    }

    /// Builds a system from an explicit Coxeter matrix.
    pub fn from_matrix(matrix: CoxeterMatrix) -> Result<CoxeterSystem> {
        if matrix.rank() > 64 {
            return Err(Error::RankOutOfRange {
                given: matrix.rank(),
                lo: 1,
                hi: 64,
            });
        }
        Ok(Self::build(matrix, None))
    }

    fn build(matrix: CoxeterMatrix, type_label: Option<String>) -> CoxeterSystem {
        let classification = classify(&matrix);
        let mut h = DefaultHasher::new();
        matrix.hash(&mut h);
        CoxeterSystem {
            id: SystemId(h.finish()),
            matrix,
            type_label,
            classification,
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn coxeter_matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn bond(&self, i: usize, j: usize) -> Option<u32> {
        self.matrix.bond(i, j)
    }

    pub fn type_label(&self) -> Option<&str> {
        self.type_label.as_deref()
    }

    pub fn classification(&self) -> &Classification {
        &self.classification
    }

    pub fn is_finite(&self) -> bool {
        self.classification.is_finite()
    }

    pub fn order(&self) -> Option<u128> {
        self.classification.order()
    }

    pub fn id(&self) -> SystemId {
        self.id
    }

    /// A short human-readable description, preferring the declared label.
    pub fn describe(&self) -> String {
        self.type_label
            .clone()
            .unwrap_or_else(|| self.classification.label())
    }
}

/// A group element in canonical form: the shortlex-least reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    system: SystemId,
    word: Word,
}

impl GroupElement {
    pub fn canonical_word(&self) -> &Word {
        &self.word
    }

    pub fn system(&self) -> SystemId {
        self.system
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.word)
    }
}

/// Internal element index (shortlex discovery order; 0 is the identity).
pub type ElemId = u32;

/// Default bound on how many elements `Group::new` will enumerate.
pub const DEFAULT_ENUMERATION_CAP: usize = 300_000;

/// A fully enumerated finite Coxeter group with its right-multiplication
/// Cayley table.
pub struct Group {
    system: Arc<CoxeterSystem>,
    rep: ReflectionRep,
    words: Vec<Word>,
    /// Flat |W| x n table of e * s_i.
    cayley: Vec<ElemId>,
    /// BFS tree: (parent, letter) per non-identity element.
    parents: Vec<(ElemId, u8)>,
    inverses: Vec<ElemId>,
    /// Bitmask of the letters of the canonical word.
    supports: Vec<u64>,
    perm_index: HashMap<Vec<i32>, ElemId>,
}

impl Group {
    pub fn new(system: Arc<CoxeterSystem>) -> Result<Group> {
        Self::with_cap(system, DEFAULT_ENUMERATION_CAP)
    }

    pub fn from_label(label: &str) -> Result<Group> {
        Group::new(Arc::new(CoxeterSystem::from_label(label)?))
    }

    pub fn with_cap(system: Arc<CoxeterSystem>, cap: usize) -> Result<Group> {
        if !system.is_finite() {
            return Err(Error::InfiniteSystem {
                description: system.classification.label(),
            });
        }
        let order = system.order().expect("finite classification has an order");
        if order > cap as u128 {
            return Err(Error::CapExceeded {
                what: format!("enumeration of {} elements", order),
                cap,
            });
        }
        let order = order as usize;
        let n = system.rank();
        let rep = ReflectionRep::new(&system.matrix)?;

        let mut perm_index: HashMap<Vec<i32>, ElemId> = HashMap::with_capacity(order);
        let identity: Vec<i32> = (1..=rep.num_positive_roots() as i32).collect();
        perm_index.insert(identity.clone(), 0);
        let mut perms = vec![identity];
        let mut words = vec![Word::empty()];
        let mut parents = vec![(0u32, 0u8)];
        let mut cayley: Vec<ElemId> = Vec::new();

        // Shortlex BFS: processing elements in discovery order and letters in
        // increasing order yields candidates in global shortlex order, so the
        // first word reaching an element is its canonical form.
        let mut cursor = 0usize;
        while cursor < perms.len() {
            for letter in 0..n {
                let image = compose_signed(&perms[cursor], &rep.simple_action[letter]);
                let id = match perm_index.get(&image) {
                    Some(&id) => id,
                    None => {
                        let id = perms.len() as ElemId;
                        perm_index.insert(image.clone(), id);
                        perms.push(image);
                        let mut w = words[cursor].clone();
                        w.0.push(letter as u8);
                        words.push(w);
                        parents.push((cursor as ElemId, letter as u8));
                        id
                    }
                };
                cayley.push(id);
            }
            cursor += 1;
        }
        debug_assert_eq!(perms.len(), order, "BFS must close at the classified order");

        let supports: Vec<u64> = words
            .iter()
            .map(|w| w.letters().iter().fold(0u64, |m, &l| m | (1 << l)))
            .collect();

        let mut group = Group {
            system,
            rep,
            words,
            cayley,
            parents,
            inverses: Vec::new(),
            supports,
            perm_index,
        };
        group.inverses = (0..order as ElemId)
            .map(|e| group.eval_letters(group.words[e as usize].reversed().letters()))
            .collect();
        Ok(group)
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.system
    }

    pub fn rank(&self) -> usize {
        self.system.rank()
    }

    pub fn order(&self) -> usize {
        self.words.len()
    }

    pub(crate) fn rep(&self) -> &ReflectionRep {
        &self.rep
    }

    pub const IDENTITY: ElemId = 0;

    pub fn right_mul(&self, e: ElemId, letter: u8) -> ElemId {
        self.cayley[e as usize * self.rank() + letter as usize]
    }

    fn eval_letters(&self, letters: &[u8]) -> ElemId {
        letters
            .iter()
            .fold(Self::IDENTITY, |e, &l| self.right_mul(e, l))
    }

    /// Evaluates an arbitrary word from the identity.
    pub fn eval_word(&self, w: &Word) -> Result<ElemId> {
        w.check_rank(self.rank())?;
        Ok(self.eval_letters(w.letters()))
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.words[b as usize]
            .letters()
            .iter()
            .fold(a, |e, &l| self.right_mul(e, l))
    }

    pub fn inv(&self, e: ElemId) -> ElemId {
        self.inverses[e as usize]
    }

    pub fn conjugate(&self, w: ElemId, e: ElemId) -> ElemId {
        self.mul(self.mul(w, e), self.inv(w))
    }

    pub fn word_of(&self, e: ElemId) -> &Word {
        &self.words[e as usize]
    }

    pub fn length(&self, e: ElemId) -> usize {
        self.words[e as usize].len()
    }

    pub fn support_mask(&self, e: ElemId) -> u64 {
        self.supports[e as usize]
    }

    pub fn support_size(&self, e: ElemId) -> usize {
        self.supports[e as usize].count_ones() as usize
    }

    /// BFS spanning tree edge into each non-identity element: (parent, letter).
    pub fn bfs_parent(&self, e: ElemId) -> Option<(ElemId, u8)> {
        if e == Self::IDENTITY {
            None
        } else {
            Some(self.parents[e as usize])
        }
    }

    pub(crate) fn id_of_perm(&self, perm: &[i32]) -> Option<ElemId> {
        self.perm_index.get(perm).copied()
    }

    pub fn element(&self, e: ElemId) -> GroupElement {
        GroupElement {
            system: self.system.id(),
            word: self.words[e as usize].clone(),
        }
    }

    /// Index of a canonical element, checking system identity.
    pub fn id_of(&self, el: &GroupElement) -> Result<ElemId> {
        if el.system != self.system.id() {
            return Err(Error::MismatchedSystems);
        }
        self.eval_word(&el.word)
    }

    /// Reduces an arbitrary word to canonical form.
    pub fn reduce(&self, w: &Word) -> Result<GroupElement> {
        Ok(self.element(self.eval_word(w)?))
    }

    /// Group product in canonical form.
    pub fn product(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let (ia, ib) = (self.id_of(a)?, self.id_of(b)?);
        Ok(self.element(self.mul(ia, ib)))
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        Ok(self.element(self.inv(self.id_of(a)?)))
    }

    pub fn identity(&self) -> GroupElement {
        self.element(Self::IDENTITY)
    }

    /// All elements in shortlex discovery order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order() as ElemId).map(move |e| self.element(e))
    }

    /// Order of an element as a group member.
    pub fn element_order(&self, e: ElemId) -> usize {
        let mut cur = e;
        let mut k = 1;
        while cur != Self::IDENTITY {
            cur = self.mul(cur, e);
            k += 1;
        }
        k
    }

    /// Closure of a set of elements under multiplication (subgroup generated).
    pub fn subgroup_closure(&self, generators: &[ElemId]) -> Vec<ElemId> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![Self::IDENTITY];
        let mut stack = vec![Self::IDENTITY];
        while let Some(e) = stack.pop() {
            for &g in generators {
                let f = self.mul(e, g);
                if !seen[f as usize] {
                    seen[f as usize] = true;
                    out.push(f);
                    stack.push(f);
                }
            }
        }
        out.sort_unstable();
        out
    }
}
