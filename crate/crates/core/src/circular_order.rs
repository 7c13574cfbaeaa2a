//! Finite circular orders: a sign function on ordered triples of distinct
//! elements, antisymmetric under transpositions and satisfying the cocycle
//! condition that makes intervals behave like arcs of a circle.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::error::Error;

pub type Sign = i8;

#[derive(Clone)]
enum OrientSource {
    /// Element `i` sits at cyclic position `positions[i]`.
    Positions(Vec<usize>),
    /// Explicit value for every ordered triple of element indices.
    Table(HashMap<(usize, usize, usize), Sign>),
    /// Arbitrary oracle by element index.
    Func(Rc<dyn Fn(usize, usize, usize) -> Sign>),
}

#[derive(Clone)]
pub struct CircularOrder<T: Ord + Clone> {
    elements: Vec<T>,
    index: BTreeMap<T, usize>,
    source: OrientSource,
}

impl<T: Ord + Clone + std::fmt::Debug> std::fmt::Debug for CircularOrder<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CircularOrder({:?})", self.elements)
    }
}

fn cyclic_sign(pa: usize, pb: usize, pc: usize, n: usize) -> Sign {
    let db = (pb + n - pa) % n;
    let dc = (pc + n - pa) % n;
    if db < dc {
        1
    } else {
        -1
    }
}

impl<T: Ord + Clone> CircularOrder<T> {
    /// Order given by listing the elements once around the circle in
    /// positive direction.
    pub fn from_cycle(cycle: Vec<T>) -> Result<CircularOrder<T>, Error> {
        if cycle.len() < 3 {
            return Err(Error::UniverseTooSmall(cycle.len()));
        }
        let mut index = BTreeMap::new();
        for (i, e) in cycle.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::InvalidScenario(
                    "repeated element in cycle".into(),
                ));
            }
        }
        let positions = (0..cycle.len()).collect();
        Ok(CircularOrder {
            elements: cycle,
            index,
            source: OrientSource::Positions(positions),
        })
    }

    /// Order backed by an explicit per-triple table (no axioms assumed, so
    /// deliberately broken orders can be built for testing `verify_axioms`).
    pub fn from_table(
        elements: Vec<T>,
        table: HashMap<(usize, usize, usize), Sign>,
    ) -> Result<CircularOrder<T>, Error> {
        if elements.len() < 3 {
            return Err(Error::UniverseTooSmall(elements.len()));
        }
        let mut index = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            index.insert(e.clone(), i);
        }
        Ok(CircularOrder {
            elements,
            index,
            source: OrientSource::Table(table),
        })
    }

    pub fn from_fn(
        elements: Vec<T>,
        orient: impl Fn(usize, usize, usize) -> Sign + 'static,
    ) -> Result<CircularOrder<T>, Error> {
        if elements.len() < 3 {
            return Err(Error::UniverseTooSmall(elements.len()));
        }
        let mut index = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            index.insert(e.clone(), i);
        }
        Ok(CircularOrder {
            elements,
            index,
            source: OrientSource::Func(Rc::new(orient)),
        })
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, e: &T) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn orient_idx(&self, a: usize, b: usize, c: usize) -> Sign {
        debug_assert!(a != b && b != c && a != c);
        match &self.source {
            OrientSource::Positions(p) => cyclic_sign(p[a], p[b], p[c], self.elements.len()),
            OrientSource::Table(t) => *t
                .get(&(a, b, c))
                .expect("orientation table covers all ordered triples"),
            OrientSource::Func(f) => f(a, b, c),
        }
    }

    pub fn orient(&self, a: &T, b: &T, c: &T) -> Sign {
        let ia = self.index[a];
        let ib = self.index[b];
        let ic = self.index[c];
        self.orient_idx(ia, ib, ic)
    }

    /// `t` lies in the open positively-oriented interval `(a, b)`.
    pub fn in_interval(&self, a: &T, t: &T, b: &T) -> bool {
        t != a && t != b && self.orient(a, t, b) == 1
    }

    pub fn interval(&self, a: &T, b: &T) -> Vec<T> {
        self.elements
            .iter()
            .filter(|t| self.in_interval(a, t, b))
            .cloned()
            .collect()
    }

    /// The elements listed once around the circle in positive direction,
    /// starting from the smallest element. Assumes the axioms hold.
    pub fn to_cycle(&self) -> Vec<T> {
        let first = self
            .elements
            .iter()
            .min()
            .expect("nonempty universe")
            .clone();
        let mut rest: Vec<T> = self
            .elements
            .iter()
            .filter(|e| **e != first)
            .cloned()
            .collect();
        rest.sort_by(|a, b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if self.orient(&first, a, b) == 1 {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let mut out = vec![first];
        out.extend(rest);
        out
    }

    pub fn verify_axioms(&self) -> Result<AxiomReport<T>, Error> {
        let n = self.elements.len();
        if n < 3 {
            return Err(Error::UniverseTooSmall(n));
        }
        let mut report = AxiomReport {
            antisymmetry_violations: Vec::new(),
            cocycle_violations: Vec::new(),
        };
        for a in 0..n {
            for b in 0..n {
                if b == a {
                    continue;
                }
                for c in 0..n {
                    if c == a || c == b {
                        continue;
                    }
                    let s = self.orient_idx(a, b, c);
                    let ok = s == 1 || s == -1;
                    // A transposition must flip the sign; a 3-cycle must
                    // preserve it.
                    let anti = ok
                        && self.orient_idx(b, a, c) == -s
                        && self.orient_idx(a, c, b) == -s
                        && self.orient_idx(b, c, a) == s
                        && self.orient_idx(c, a, b) == s;
                    if !anti {
                        report.antisymmetry_violations.push([
                            self.elements[a].clone(),
                            self.elements[b].clone(),
                            self.elements[c].clone(),
                        ]);
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if b == a {
                    continue;
                }
                for c in 0..n {
                    if c == a || c == b {
                        continue;
                    }
                    for d in 0..n {
                        if d == a || d == b || d == c {
                            continue;
                        }
                        if self.orient_idx(a, b, c) == 1
                            && self.orient_idx(a, c, d) == 1
                            && !(self.orient_idx(a, b, d) == 1
                                && self.orient_idx(b, c, d) == 1)
                        {
                            report.cocycle_violations.push([
                                self.elements[a].clone(),
                                self.elements[b].clone(),
                                self.elements[c].clone(),
                                self.elements[d].clone(),
                            ]);
                        }
                    }
                }
            }
        }
        Ok(report)
    }

    /// Ordered pairs `(a, b)` whose open interval contains no element.
    pub fn gaps(&self) -> Vec<(T, T)> {
        let mut out = Vec::new();
        for a in &self.elements {
            for b in &self.elements {
                if a != b && self.interval(a, b).is_empty() {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out.sort();
        out
    }

    /// Two disjoint pairs link when each separates the other on the circle.
    pub fn linked(&self, p: (&T, &T), q: (&T, &T)) -> bool {
        let (x, y) = p;
        let (z, w) = q;
        debug_assert!(x != y && z != w && x != z && x != w && y != z && y != w);
        self.in_interval(x, z, y) != self.in_interval(x, w, y)
    }

    /// Does `a_set` separate `b_set` from `c_set`: is there a pair
    /// `a, a'` in `a_set` with all of `b_set` strictly inside `(a, a')` and
    /// all of `c_set` strictly inside `(a', a)`? Returns the witness pair.
    pub fn separates(&self, a_set: &[T], b_set: &[T], c_set: &[T]) -> Option<(T, T)> {
        for a in a_set {
            for a2 in a_set {
                if a == a2 {
                    continue;
                }
                let b_in = b_set.iter().all(|b| self.in_interval(a, b, a2));
                let c_in = c_set.iter().all(|c| self.in_interval(a2, c, a));
                if b_in && c_in {
                    return Some((a.clone(), a2.clone()));
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone)]
pub struct AxiomReport<T> {
    pub antisymmetry_violations: Vec<[T; 3]>,
    pub cocycle_violations: Vec<[T; 4]>,
}

impl<T> AxiomReport<T> {
    pub fn is_valid(&self) -> bool {
        self.antisymmetry_violations.is_empty() && self.cocycle_violations.is_empty()
    }
}

/// A countable circular order revealed level by level: `level(d)` lists the
/// elements known at depth `d`, in positive cyclic order, and each level's
/// listing must refine the previous one.
#[derive(Clone)]
pub struct LazyOrder<T: Ord + Clone> {
    levels: Rc<dyn Fn(u32) -> Vec<T>>,
}

impl<T: Ord + Clone> LazyOrder<T> {
    pub fn new(levels: impl Fn(u32) -> Vec<T> + 'static) -> LazyOrder<T> {
        LazyOrder {
            levels: Rc::new(levels),
        }
    }

    pub fn level(&self, d: u32) -> Vec<T> {
        (self.levels)(d)
    }

    pub fn snapshot(&self, d: u32) -> Result<CircularOrder<T>, Error> {
        CircularOrder::from_cycle(self.level(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five() -> CircularOrder<u32> {
        CircularOrder::from_cycle(vec![0, 1, 2, 3, 4]).unwrap()
    }

    #[test]
    fn five_cycle_satisfies_axioms() {
        assert!(five().verify_axioms().unwrap().is_valid());
    }

    #[test]
    fn transposition_flips_orientation() {
        let o = five();
        assert_eq!(o.orient(&0, &1, &2), 1);
        assert_eq!(o.orient(&1, &0, &2), -1);
        assert_eq!(o.orient(&0, &2, &4), 1);
        assert_eq!(o.orient(&4, &2, &0), -1);
    }

    #[test]
    fn flipped_triple_breaks_antisymmetry() {
        let base = five();
        let n = 5;
        let mut table = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a != b && b != c && a != c {
                        table.insert((a, b, c), base.orient_idx(a, b, c));
                    }
                }
            }
        }
        // Corrupt one ordered triple only.
        let v = table[&(0, 1, 2)];
        table.insert((0, 1, 2), -v);
        let bad = CircularOrder::from_table(vec![0u32, 1, 2, 3, 4], table).unwrap();
        let report = bad.verify_axioms().unwrap();
        assert!(!report.is_valid());
        assert!(!report.antisymmetry_violations.is_empty());
    }

    #[test]
    fn n_cycle_has_n_gaps() {
        for n in 3..8u32 {
            let o = CircularOrder::from_cycle((0..n).collect()).unwrap();
            assert_eq!(o.gaps().len() as u32, n);
        }
    }

    #[test]
    fn interval_membership() {
        let o = five();
        assert_eq!(o.interval(&1, &4), vec![2, 3]);
        assert_eq!(o.interval(&4, &1), vec![0]);
    }

    #[test]
    fn linked_pairs() {
        let o = five();
        assert!(o.linked((&0, &2), (&1, &3)));
        assert!(!o.linked((&0, &1), (&2, &3)));
    }

    #[test]
    fn separation_with_witnesses() {
        let o = CircularOrder::from_cycle(vec![0, 1, 2, 3, 4, 5]).unwrap();
        // {0,3} separates {1,2} from {4,5}.
        let w = o.separates(&[0, 3], &[1, 2], &[4, 5]);
        assert_eq!(w, Some((0, 3)));
        assert!(o.separates(&[1, 2], &[0], &[3, 4]).is_none());
    }

    #[test]
    fn lazy_snapshot_gap_count() {
        let lazy = LazyOrder::new(|d| {
            let denom = 1u32 << d;
            (0..denom).collect::<Vec<u32>>()
        });
        for d in 2..5 {
            let snap = lazy.snapshot(d).unwrap();
            assert_eq!(snap.gaps().len(), 1usize << d);
        }
    }

    #[test]
    fn to_cycle_round_trip() {
        let o = CircularOrder::from_cycle(vec![3u32, 1, 4, 0, 2]).unwrap();
        let cyc = o.to_cycle();
        let rebuilt = CircularOrder::from_cycle(cyc).unwrap();
        for a in o.elements() {
            for b in o.elements() {
                for c in o.elements() {
                    if a != b && b != c && a != c {
                        assert_eq!(o.orient(a, b, c), rebuilt.orient(a, b, c));
                    }
                }
            }
        }
    }
}
