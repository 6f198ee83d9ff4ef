//! Todd-Coxeter coset enumeration over the trivial subgroup.
//!
//! HLT strategy with full coincidence processing. Enumeration over the
//! trivial subgroup of a finitely presented group computes the group order
//! when it completes; it is a semi-decision procedure, so the caller supplies
//! an effort bound and gets an explicit `Capped` outcome instead of an answer
//! when the bound is hit.

use crate::presentation::Presentation;

const UNDEF: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumerationOutcome {
    /// The coset table closed; the group has exactly this many elements.
    Complete { cosets: usize },
    /// The bound on coset definitions was reached before closure.
    Capped,
}

struct CosetTable {
    n_letters: usize,
    /// Row-major table of live and dead rows.
    table: Vec<u32>,
    /// Union-find over coset ids.
    parent: Vec<u32>,
    defined: usize,
    cap: usize,
    /// Pending coincidences.
    queue: Vec<(u32, u32)>,
}

fn inv(letter: usize) -> usize {
    letter ^ 1
}

impl CosetTable {
    fn new(n_letters: usize, cap: usize) -> CosetTable {
        CosetTable {
            n_letters,
            table: vec![UNDEF; n_letters],
            parent: vec![0],
            defined: 1,
            cap,
            queue: Vec::new(),
        }
    }

    fn find(&mut self, mut c: u32) -> u32 {
        while self.parent[c as usize] != c {
            let p = self.parent[c as usize];
            self.parent[c as usize] = self.parent[p as usize];
            c = self.parent[c as usize];
        }
        c
    }

    fn get(&self, c: u32, letter: usize) -> u32 {
        self.table[c as usize * self.n_letters + letter]
    }

    fn set(&mut self, c: u32, letter: usize, d: u32) {
        self.table[c as usize * self.n_letters + letter] = d;
    }

    fn num_live(&mut self) -> usize {
        (0..self.parent.len() as u32)
            .filter(|&c| self.find(c) == c)
            .count()
    }

    /// Defines a fresh coset for (c, letter). Returns None when capped.
    fn define(&mut self, c: u32, letter: usize) -> Option<u32> {
        if self.defined >= self.cap {
            return None;
        }
        let d = self.parent.len() as u32;
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(UNDEF, self.n_letters));
        self.defined += 1;
        self.set(c, letter, d);
        self.set(d, inv(letter), c);
        Some(d)
    }

    /// Records a deduced or scanned equality of table entries.
    fn deduce(&mut self, c: u32, letter: usize, d: u32) {
        let existing = self.get(c, letter);
        if existing == UNDEF {
            self.set(c, letter, d);
            let back = self.get(d, inv(letter));
            if back == UNDEF {
                self.set(d, inv(letter), c);
            } else if self.find(back) != self.find(c) {
                self.queue.push((back, c));
            }
        } else if self.find(existing) != self.find(d) {
            self.queue.push((existing, d));
        }
    }

    /// Merges all pending coincidences.
    fn process_coincidences(&mut self) {
        while let Some((a, b)) = self.queue.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, drop) = if a < b { (a, b) } else { (b, a) };
            self.parent[drop as usize] = keep;
            // Migrate the dropped row into the kept row.
            for letter in 0..self.n_letters {
                let d = self.get(drop, letter);
                if d == UNDEF {
                    continue;
                }
                let keep_now = self.find(keep);
                let existing = self.get(keep_now, letter);
                if existing == UNDEF {
                    self.set(keep_now, letter, d);
                    let df = self.find(d);
                    let back = self.get(df, inv(letter));
                    if back == UNDEF {
                        self.set(df, inv(letter), keep_now);
                    } else if self.find(back) != keep_now {
                        self.queue.push((back, keep_now));
                    }
                } else if self.find(existing) != self.find(d) {
                    self.queue.push((existing, d));
                }
            }
        }
    }

    /// Scans a relator at a coset, filling gaps by definition (HLT).
    /// Returns false when the cap was hit.
    fn scan_and_fill(&mut self, coset: u32, relator: &[usize]) -> bool {
        let mut start = self.find(coset);
        loop {
            // Scan forward as far as possible.
            let mut f = start;
            let mut i = 0;
            while i < relator.len() {
                let next = self.get(f, relator[i]);
                if next == UNDEF {
                    break;
                }
                f = self.find(next);
                i += 1;
            }
            if i == relator.len() {
                // Complete scan: it must close back to start.
                if f != start {
                    self.queue.push((f, start));
                    self.process_coincidences();
                }
                return true;
            }
            // Scan backward from the end.
            let mut b = start;
            let mut j = relator.len();
            while j > i {
                let prev = self.get(b, inv(relator[j - 1]));
                if prev == UNDEF {
                    break;
                }
                b = self.find(prev);
                j -= 1;
            }
            if j == i {
                // The scans met at one node from both sides: coincidence.
                if self.find(f) != self.find(b) {
                    self.queue.push((f, b));
                    self.process_coincidences();
                }
                return true;
            }
            if j == i + 1 {
                // Exactly one gap letter: deduction joins the scan fronts.
                self.deduce(f, relator[i], b);
                self.process_coincidences();
                return true;
            }
            // Fill the first gap with a new coset and rescan.
            match self.define(f, relator[i]) {
                Some(_) => {}
                None => return false,
            }
            self.process_coincidences();
            start = self.find(coset);
        }
    }
}

/// Enumerates cosets of the trivial subgroup. `cap` bounds the total number
/// of coset definitions (the effort), not just the live count.
pub fn enumerate_cosets(p: &Presentation, cap: usize) -> EnumerationOutcome {
    let n_letters = 2 * p.num_generators();
    if p.num_generators() == 0 {
        return EnumerationOutcome::Complete { cosets: 1 };
    }
    let relator_paths: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| {
            r.iter()
                .map(|&g| {
                    let idx = 2 * (g.unsigned_abs() as usize - 1);
                    if g > 0 {
                        idx
                    } else {
                        idx + 1
                    }
                })
                .collect()
        })
        .filter(|r: &Vec<usize>| !r.is_empty())
        .collect();
    // Generators act trivially only through relators; letters never touched
    // by a relator still need table entries, which forces definitions.
    let mut t = CosetTable::new(n_letters, cap);

    let mut current: u32 = 0;
    while (current as usize) < t.parent.len() {
        if t.find(current) != current {
            current += 1;
            continue;
        }
        for r in &relator_paths {
            if !t.scan_and_fill(current, r) {
                return EnumerationOutcome::Capped;
            }
            if t.find(current) != current {
                break;
            }
        }
        if t.find(current) == current {
            for letter in 0..n_letters {
                if t.get(current, letter) == UNDEF && t.define(current, letter).is_none() {
                    return EnumerationOutcome::Capped;
                }
            }
        }
        current += 1;
    }
    EnumerationOutcome::Complete {
        cosets: t.num_live(),
    }
}
