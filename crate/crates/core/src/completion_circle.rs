//! Circle embeddings and the order completion. A finite circularly ordered
//! set embeds into the rational circle by repeated interval bisection; a
//! lazily refined set is completed by adjoining one ideal point per gap
//! that keeps refining, and the result is collapsed along the gaps whose
//! points evaporate under iterated isolated-point removal.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::circular_order::{CircularOrder, LazyOrder, Sign};
use crate::error::Error;

/// A point of the circle R/Z, stored as an exact rational in [0,1).
/// Embeddings of finite orders only ever produce dyadic angles; general
/// rationals appear as fixed points of piecewise-linear circle maps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CirclePoint {
    angle: BigRational,
}

impl CirclePoint {
    pub fn new(angle: BigRational) -> CirclePoint {
        let one = BigRational::one();
        let mut a = angle % &one;
        if a.is_negative() {
            a += one;
        }
        CirclePoint { angle: a }
    }

    pub fn from_ratio(num: i64, den: i64) -> CirclePoint {
        CirclePoint::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> CirclePoint {
        CirclePoint::new(BigRational::zero())
    }

    pub fn angle(&self) -> &BigRational {
        &self.angle
    }

    pub fn is_dyadic(&self) -> bool {
        let mut d = self.angle.denom().clone();
        let two = BigInt::from(2);
        while (&d % &two).is_zero() {
            d /= &two;
        }
        d.is_one()
    }

    /// Counterclockwise distance from `self` to `other`, in [0,1).
    pub fn gap_to(&self, other: &CirclePoint) -> BigRational {
        let mut d = &other.angle - &self.angle;
        if d.is_negative() {
            d += BigRational::one();
        }
        d
    }

    /// Midpoint of the counterclockwise arc from `self` to `other`;
    /// the antipode when the points coincide.
    pub fn midpoint_ccw(&self, other: &CirclePoint) -> CirclePoint {
        let gap = if self == other {
            BigRational::one()
        } else {
            self.gap_to(other)
        };
        CirclePoint::new(&self.angle + gap / BigRational::from(BigInt::from(2)))
    }

    /// Orientation of a triple on the circle: `+1` when walking
    /// counterclockwise from `a` meets `b` before `c`.
    pub fn orient(a: &CirclePoint, b: &CirclePoint, c: &CirclePoint) -> Sign {
        if a == b || b == c || a == c {
            return 0;
        }
        if a.gap_to(b) < a.gap_to(c) {
            1
        } else {
            -1
        }
    }

    /// Membership in the open counterclockwise interval (a, b).
    pub fn in_open_interval(&self, a: &CirclePoint, b: &CirclePoint) -> bool {
        if a == b {
            return false;
        }
        self != a && self != b && a.gap_to(self) < a.gap_to(b)
    }

    /// Membership in the closed counterclockwise interval [a, b].
    pub fn in_closed_interval(&self, a: &CirclePoint, b: &CirclePoint) -> bool {
        self == a || self == b || self.in_open_interval(a, b)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.angle.numer(), self.angle.denom())
    }
}

/// Order-preserving injection of a finite circular order into the circle.
/// The first two inserted elements go to 0 and 1/2; every later element
/// goes to the dyadic midpoint of the unique gap of already-placed points
/// that contains it.
pub fn embed_circle<T: Ord + Clone>(
    order: &CircularOrder<T>,
    insertion: &[T],
) -> Result<BTreeMap<T, CirclePoint>, Error> {
    if insertion.len() != order.len() {
        return Err(Error::InvalidScenario(format!(
            "insertion lists {} elements, the order has {}",
            insertion.len(),
            order.len()
        )));
    }
    for e in insertion {
        if order.index_of(e).is_none() {
            return Err(Error::InvalidScenario(
                "insertion mentions an element outside the order".into(),
            ));
        }
    }
    let mut placed: Vec<(CirclePoint, T)> = Vec::with_capacity(insertion.len());
    placed.push((CirclePoint::zero(), insertion[0].clone()));
    placed.push((CirclePoint::from_ratio(1, 2), insertion[1].clone()));
    for x in &insertion[2..] {
        // Gaps of the placed set, in angle order; exactly one contains x.
        let mut slot: Option<usize> = None;
        for i in 0..placed.len() {
            let j = (i + 1) % placed.len();
            let inside = if placed.len() == 2 {
                order.orient(&placed[i].1, x, &placed[j].1) == 1
            } else {
                order.in_interval(&placed[i].1, x, &placed[j].1)
            };
            if inside {
                if slot.is_some() {
                    return Err(Error::OrderViolation);
                }
                slot = Some(i);
            }
        }
        let i = slot.ok_or(Error::OrderViolation)?;
        let j = (i + 1) % placed.len();
        let mid = placed[i].0.midpoint_ccw(&placed[j].0);
        placed.insert(i + 1, (mid, x.clone()));
        placed.sort();
    }
    Ok(placed.into_iter().map(|(a, t)| (t, a)).collect())
}

pub fn embed_circle_default<T: Ord + Clone>(
    order: &CircularOrder<T>,
) -> Result<BTreeMap<T, CirclePoint>, Error> {
    embed_circle(order, order.elements())
}

/// Element of a completed order: either a point of the source or an ideal
/// cut adjoined in a gap that kept refining.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Completed<T> {
    Original(T),
    Cut(usize),
}

impl<T: fmt::Display> fmt::Display for Completed<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Completed::Original(t) => write!(f, "{t}"),
            Completed::Cut(i) => write!(f, "cut[{i}]"),
        }
    }
}

/// Finite truncation of a nested sequence of closed intervals whose
/// intersection is empty at the truncation depth. `intervals[i]` holds the
/// endpoints at refinement level `i`.
#[derive(Debug, Clone)]
pub struct AdmissibleSequence<T> {
    pub intervals: Vec<(T, T)>,
}

impl<T: Ord + Clone> AdmissibleSequence<T> {
    /// Nesting check against a reference order containing every endpoint.
    pub fn is_nested(&self, order: &CircularOrder<T>) -> bool {
        self.intervals.windows(2).all(|w| {
            let (ref a, ref b) = w[0];
            let (ref c, ref d) = w[1];
            closed_contains(order, a, b, c) && closed_contains(order, a, b, d)
        })
    }

    /// Two truncated sequences are equivalent when each interval of one
    /// contains some interval of the other, in both directions.
    pub fn equivalent(&self, other: &AdmissibleSequence<T>, order: &CircularOrder<T>) -> bool {
        let contains_some = |outer: &[(T, T)], inner: &[(T, T)]| {
            outer.iter().all(|(a, b)| {
                inner
                    .iter()
                    .any(|(c, d)| closed_contains(order, a, b, c) && closed_contains(order, a, b, d))
            })
        };
        contains_some(&self.intervals, &other.intervals)
            && contains_some(&other.intervals, &self.intervals)
    }
}

fn closed_contains<T: Ord + Clone>(order: &CircularOrder<T>, a: &T, b: &T, x: &T) -> bool {
    x == a || x == b || (a != b && order.in_interval(a, x, b))
}

/// A depth-`d` order completion: the source elements at depth `d` plus one
/// cut per gap that still refines one level deeper, each witnessed by an
/// admissible sequence.
pub struct Completion<T: Ord + Clone> {
    pub order: CircularOrder<Completed<T>>,
    pub cuts: Vec<AdmissibleSequence<T>>,
    /// Gap of the depth-`d` snapshot each cut was adjoined to.
    pub cut_gaps: Vec<(T, T)>,
}

/// Complete a lazily refined circular order at depth `d`. Levels must be
/// cumulative (each level's elements reappear at the next) and listed in
/// cyclic order. A gap of the depth-`d` snapshot receives a cut exactly
/// when an element of depth `d+1` lands strictly inside it.
pub fn complete<T: Ord + Clone>(lazy: &LazyOrder<T>, d: u32) -> Result<Completion<T>, Error> {
    let now = lazy.level(d);
    let next = lazy.level(d + 1);
    let snap = lazy.snapshot(d)?;
    let deep = lazy.snapshot(d + 1)?;
    for e in &now {
        if deep.index_of(e).is_none() {
            return Err(Error::InvalidScenario(
                "lazy order is not cumulative: an element vanished one level deeper".into(),
            ));
        }
    }
    let cycle = snap.to_cycle();
    let mut out: Vec<Completed<T>> = Vec::new();
    let mut cuts: Vec<AdmissibleSequence<T>> = Vec::new();
    let mut cut_gaps: Vec<(T, T)> = Vec::new();
    for (i, u) in cycle.iter().enumerate() {
        let v = &cycle[(i + 1) % cycle.len()];
        out.push(Completed::Original(u.clone()));
        let refines = next
            .iter()
            .any(|w| deep.index_of(w).is_some() && u != w && v != w && deep.in_interval(u, w, v));
        if refines {
            // Witness: at every shallower level, the closed interval
            // spanned by the nearest enclosing pair of that level.
            let mut intervals = Vec::new();
            for lvl in 0..=d {
                let coarse = lazy.level(lvl);
                if coarse.len() < 3 {
                    continue;
                }
                let (a, b) = enclosing_pair(&deep, &coarse, u, v)?;
                intervals.push((a, b));
            }
            intervals.push((u.clone(), v.clone()));
            cuts.push(AdmissibleSequence { intervals });
            cut_gaps.push((u.clone(), v.clone()));
            out.push(Completed::Cut(cuts.len() - 1));
        }
    }
    let order = CircularOrder::from_cycle(out)?;
    Ok(Completion {
        order,
        cuts,
        cut_gaps,
    })
}

/// Smallest closed interval with endpoints in `coarse` containing the
/// closed interval [u, v], measured in the reference order.
fn enclosing_pair<T: Ord + Clone>(
    reference: &CircularOrder<T>,
    coarse: &[T],
    u: &T,
    v: &T,
) -> Result<(T, T), Error> {
    if coarse.len() < 3 {
        return Err(Error::UniverseTooSmall(coarse.len()));
    }
    // Walk the coarse elements in reference cyclic order; [u,v] sits inside
    // exactly one gap of the coarse set, or has an endpoint in it.
    let mut ordered: Vec<T> = Vec::new();
    for e in reference.to_cycle() {
        if coarse.contains(&e) {
            ordered.push(e);
        }
    }
    let n = ordered.len();
    for i in 0..n {
        let a = &ordered[i];
        let b = &ordered[(i + 1) % n];
        if closed_contains(reference, a, b, u) && closed_contains(reference, a, b, v) {
            return Ok((a.clone(), b.clone()));
        }
    }
    Err(Error::OrderViolation)
}

/// The finite surrogate for the universal circle: an order-preserving
/// marking of the source on the rational circle together with the list of
/// collapsed closed intervals.
#[derive(Debug, Clone)]
pub struct UniversalCircle<T: Ord + Clone> {
    pub marked: BTreeMap<T, CirclePoint>,
    pub collapsed: Vec<(CirclePoint, CirclePoint)>,
}

impl<T: Ord + Clone> UniversalCircle<T> {
    /// Angle a source element ends up at after collapsing.
    pub fn angle_of(&self, t: &T) -> Option<&CirclePoint> {
        self.marked.get(t)
    }
}

/// Universal circle of a finite order: the embedding itself, nothing
/// collapsed.
pub fn universal_circle_finite<T: Ord + Clone>(
    order: &CircularOrder<T>,
) -> Result<UniversalCircle<T>, Error> {
    Ok(UniversalCircle {
        marked: embed_circle_default(order)?,
        collapsed: Vec::new(),
    })
}

/// Universal circle of a lazily refined order at depth `d`: embed the
/// depth-`d` completion, strip isolated points (iterated to a fixed point,
/// with isolation probed one level deeper), and collapse the closures of
/// the gaps whose points were stripped.
pub fn universal_circle<T: Ord + Clone>(
    lazy: &LazyOrder<T>,
    d: u32,
) -> Result<UniversalCircle<T>, Error> {
    let completion = complete(lazy, d)?;
    let embedding = embed_circle_default(&completion.order)?;
    if completion.cuts.is_empty() {
        let marked = embedding
            .into_iter()
            .filter_map(|(e, a)| match e {
                Completed::Original(t) => Some((t, a)),
                Completed::Cut(_) => None,
            })
            .collect();
        return Ok(UniversalCircle {
            marked,
            collapsed: Vec::new(),
        });
    }
    // Combined depth-(d+1) cycle with each cut spliced in just after the
    // left endpoint of its gap; betweenness of deep elements against cuts
    // is read off from positions in this cycle.
    let deep = lazy.snapshot(d + 1)?;
    let mut combined: Vec<Completed<T>> = Vec::new();
    for e in deep.to_cycle() {
        combined.push(Completed::Original(e.clone()));
        for (ci, (u, _)) in completion.cut_gaps.iter().enumerate() {
            if *u == e {
                combined.push(Completed::Cut(ci));
            }
        }
    }
    let pos: BTreeMap<&Completed<T>, usize> =
        combined.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let shallow: Vec<bool> = combined
        .iter()
        .map(|e| match e {
            Completed::Original(t) => lazy.level(d).contains(t),
            Completed::Cut(_) => true,
        })
        .collect();
    let deep_between = |a: &Completed<T>, b: &Completed<T>| -> bool {
        // Any depth-(d+1) element strictly inside the gap (a, b)?
        let (ia, ib) = (pos[a], pos[b]);
        let n = combined.len();
        let mut i = (ia + 1) % n;
        while i != ib {
            if !shallow[i] {
                return true;
            }
            i = (i + 1) % n;
        }
        false
    };
    // Iterated isolated-point removal over the completed cycle. Cuts are
    // accumulation points by construction and never removed.
    let mut remaining: Vec<Completed<T>> = completion.order.to_cycle();
    for _ in 0..=(d + 1) {
        let n = remaining.len();
        if n <= 2 {
            break;
        }
        let isolated: Vec<bool> = (0..n)
            .map(|i| {
                matches!(remaining[i], Completed::Original(_))
                    && !deep_between(&remaining[(i + n - 1) % n], &remaining[i])
                    && !deep_between(&remaining[i], &remaining[(i + 1) % n])
            })
            .collect();
        if !isolated.iter().any(|&b| b) {
            break;
        }
        remaining = remaining
            .into_iter()
            .zip(isolated)
            .filter_map(|(e, iso)| (!iso).then_some(e))
            .collect();
    }
    // Collapse the closure of every core gap that lost points.
    let full_cycle = completion.order.to_cycle();
    let core: Vec<&Completed<T>> = full_cycle
        .iter()
        .filter(|e| remaining.contains(e))
        .collect();
    let removed: Vec<&Completed<T>> = full_cycle
        .iter()
        .filter(|e| !remaining.contains(e))
        .collect();
    let mut collapsed: Vec<(CirclePoint, CirclePoint)> = Vec::new();
    let m = core.len();
    for i in 0..m {
        let a = &embedding[core[i]];
        let b = &embedding[core[(i + 1) % m]];
        let lost = removed
            .iter()
            .any(|r| embedding[*r].in_open_interval(a, b));
        if lost {
            collapsed.push((a.clone(), b.clone()));
        }
    }
    let collapse = |p: &CirclePoint| -> CirclePoint {
        for (lo, hi) in &collapsed {
            if p.in_closed_interval(lo, hi) {
                return lo.clone();
            }
        }
        p.clone()
    };
    let marked = embedding
        .iter()
        .filter_map(|(e, a)| match e {
            Completed::Original(t) => Some((t.clone(), collapse(a))),
            Completed::Cut(_) => None,
        })
        .collect();
    Ok(UniversalCircle { marked, collapsed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> CircularOrder<u32> {
        CircularOrder::from_cycle((0..n).collect()).unwrap()
    }

    #[test]
    fn four_points_land_on_known_dyadics() {
        let o = cycle(4);
        let f = embed_circle_default(&o).unwrap();
        assert_eq!(f[&0], CirclePoint::zero());
        assert_eq!(f[&1], CirclePoint::from_ratio(1, 2));
        assert_eq!(f[&2], CirclePoint::from_ratio(3, 4));
        assert_eq!(f[&3], CirclePoint::from_ratio(7, 8));
    }

    #[test]
    fn three_points_land_on_known_dyadics() {
        let o = cycle(3);
        let f = embed_circle_default(&o).unwrap();
        assert_eq!(f[&0], CirclePoint::zero());
        assert_eq!(f[&1], CirclePoint::from_ratio(1, 2));
        assert_eq!(f[&2], CirclePoint::from_ratio(3, 4));
    }

    #[test]
    fn embedding_preserves_every_triple() {
        for n in 3..=7u32 {
            let o = cycle(n);
            let f = embed_circle_default(&o).unwrap();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if a != b && b != c && a != c {
                            assert_eq!(
                                o.orient(&a, &b, &c),
                                CirclePoint::orient(&f[&a], &f[&b], &f[&c]),
                                "triple ({a},{b},{c}) of the {n}-cycle"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn embedding_is_dyadic_and_injective() {
        let o = cycle(7);
        let f = embed_circle_default(&o).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for p in f.values() {
            assert!(p.is_dyadic());
            assert!(seen.insert(p.clone()));
        }
    }

    #[test]
    fn any_insertion_order_is_order_preserving() {
        let o = cycle(5);
        let insertions = [
            vec![0u32, 1, 2, 3, 4],
            vec![4, 2, 0, 3, 1],
            vec![2, 4, 1, 0, 3],
        ];
        for ins in &insertions {
            let f = embed_circle(&o, ins).unwrap();
            for a in 0..5u32 {
                for b in 0..5 {
                    for c in 0..5 {
                        if a != b && b != c && a != c {
                            assert_eq!(
                                o.orient(&a, &b, &c),
                                CirclePoint::orient(&f[&a], &f[&b], &f[&c])
                            );
                        }
                    }
                }
            }
        }
    }

    fn constant_lazy(n: u32) -> LazyOrder<u32> {
        LazyOrder::new(move |_| (0..n).collect())
    }

    #[test]
    fn completing_a_finite_cycle_adds_nothing() {
        let lazy = constant_lazy(5);
        let c = complete(&lazy, 3).unwrap();
        assert!(c.cuts.is_empty());
        assert_eq!(c.order.len(), 5);
        assert!(c.order.verify_axioms().unwrap().is_valid());
    }

    fn dyadic_lazy() -> LazyOrder<CirclePoint> {
        LazyOrder::new(|d| {
            let den = 1i64 << d;
            (0..den).map(|k| CirclePoint::from_ratio(k, den)).collect()
        })
    }

    #[test]
    fn dyadics_get_one_cut_per_gap() {
        let lazy = dyadic_lazy();
        for d in 2..=4u32 {
            let c = complete(&lazy, d).unwrap();
            assert_eq!(c.cuts.len(), 1usize << d);
            assert!(c.order.verify_axioms().unwrap().is_valid());
            for cut in &c.cuts {
                assert!(cut.is_nested(&lazy.snapshot(d).unwrap()));
            }
        }
    }

    #[test]
    fn completion_is_idempotent_at_depth() {
        let lazy = constant_lazy(6);
        let once = complete(&lazy, 2).unwrap();
        let cycle_once: Vec<Completed<u32>> = once.order.to_cycle();
        let again_lazy = LazyOrder::new(move |_| cycle_once.clone());
        let twice = complete(&again_lazy, 2).unwrap();
        assert!(twice.cuts.is_empty());
        assert_eq!(twice.order.len(), once.order.len());
    }

    #[test]
    fn source_stays_dense_in_the_completion() {
        let lazy = dyadic_lazy();
        let d = 3;
        let c = complete(&lazy, d).unwrap();
        // Between any two cuts there is an original element.
        let cyc = c.order.to_cycle();
        let n = cyc.len();
        for i in 0..n {
            if matches!(cyc[i], Completed::Cut(_)) {
                assert!(matches!(cyc[(i + 1) % n], Completed::Original(_)));
            }
        }
    }

    #[test]
    fn finite_universal_circle_collapses_nothing() {
        let o = cycle(6);
        let u = universal_circle_finite(&o).unwrap();
        assert_eq!(u.marked.len(), 6);
        assert!(u.collapsed.is_empty());
    }

    #[test]
    fn convergent_sequence_collapses_onto_its_limit() {
        // Level d lists d+1 sequence points approaching a limit marker.
        // Element n is the n-th sequence point; u32::MAX is the limit.
        let lazy = LazyOrder::new(|d| {
            let mut v: Vec<u32> = (0..=d + 2).collect();
            v.push(u32::MAX);
            v
        });
        let d = 4;
        let u = universal_circle(&lazy, d).unwrap();
        assert_eq!(u.collapsed.len(), 1);
        // Every early sequence point shares the collapsed image.
        let img0 = u.angle_of(&0).unwrap();
        for i in 1..=d {
            assert_eq!(u.angle_of(&i).unwrap(), img0);
        }
        // The limit is the representative the tail collapses onto.
        assert_eq!(u.angle_of(&u32::MAX).unwrap(), img0);
    }

    #[test]
    fn dense_lazy_order_collapses_nothing() {
        let lazy = dyadic_lazy();
        let u = universal_circle(&lazy, 3).unwrap();
        assert!(u.collapsed.is_empty());
        assert_eq!(u.marked.len(), 8);
    }
}
