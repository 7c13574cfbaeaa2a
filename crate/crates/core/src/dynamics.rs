//! Orientation-preserving grid isometries acting on a scene, the actions
//! they induce on ends and on the marked circle, and the fixed-point
//! taxonomy of piecewise-linear circle maps that certifies closed orbits.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::circular_order::Sign;
use crate::completion_circle::CirclePoint;
use crate::ends::{class_rays, ends, End};
use crate::error::Error;
use crate::plane_model::{Cell, Continuum, Ray, TailLine};
use crate::triad_order::EndSystem;

/// An orientation-preserving isometry of the grid plane: a rotation by
/// `quarter_turns` quarter turns about the origin followed by an integer
/// shift. Rotations about arbitrary cell centers and all translations are
/// expressible; reflections are not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaneMap {
    quarter_turns: u8,
    shift: (i64, i64),
}

fn rot(q: u8, p: (i64, i64)) -> (i64, i64) {
    match q % 4 {
        0 => p,
        1 => (-p.1, p.0),
        2 => (-p.0, -p.1),
        _ => (p.1, -p.0),
    }
}

impl PlaneMap {
    pub fn identity() -> PlaneMap {
        PlaneMap {
            quarter_turns: 0,
            shift: (0, 0),
        }
    }

    pub fn translation(dx: i64, dy: i64) -> PlaneMap {
        PlaneMap {
            quarter_turns: 0,
            shift: (dx, dy),
        }
    }

    /// Counterclockwise rotation by `quarter_turns`·90° about the center
    /// of `center`.
    pub fn rotation(quarter_turns: u8, center: Cell) -> PlaneMap {
        let q = quarter_turns % 4;
        let rc = rot(q, (center.x, center.y));
        PlaneMap {
            quarter_turns: q,
            shift: (center.x - rc.0, center.y - rc.1),
        }
    }

    pub fn quarter_turns(&self) -> u8 {
        self.quarter_turns
    }

    pub fn is_identity(&self) -> bool {
        self.quarter_turns == 0 && self.shift == (0, 0)
    }

    pub fn apply(&self, c: &Cell) -> Cell {
        let r = rot(self.quarter_turns, (c.x, c.y));
        Cell::new(r.0 + self.shift.0, r.1 + self.shift.1)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PlaneMap) -> PlaneMap {
        let rs = rot(self.quarter_turns, other.shift);
        PlaneMap {
            quarter_turns: (self.quarter_turns + other.quarter_turns) % 4,
            shift: (rs.0 + self.shift.0, rs.1 + self.shift.1),
        }
    }

    pub fn inverse(&self) -> PlaneMap {
        let q = (4 - self.quarter_turns) % 4;
        let rs = rot(q, self.shift);
        PlaneMap {
            quarter_turns: q,
            shift: (-rs.0, -rs.1),
        }
    }

    pub fn apply_direction(&self, d: crate::plane_model::Direction) -> crate::plane_model::Direction {
        d.rotate_ccw_by(self.quarter_turns)
    }

    pub fn apply_tail_line(&self, t: &TailLine) -> TailLine {
        let dir = self.apply_direction(t.direction);
        let p0 = self.apply(&t.cell_at(t.start));
        if dir.is_horizontal() {
            TailLine {
                direction: dir,
                cross: p0.y,
                start: p0.x,
            }
        } else {
            TailLine {
                direction: dir,
                cross: p0.x,
                start: p0.y,
            }
        }
    }

    pub fn apply_continuum(&self, k: &Continuum) -> Continuum {
        Continuum {
            id: k.id.clone(),
            core: k.core.iter().map(|c| self.apply(c)).collect(),
            rays: k
                .rays
                .iter()
                .map(|r| Ray {
                    path: r.path.iter().map(|c| self.apply(c)).collect(),
                    direction: self.apply_direction(r.direction),
                })
                .collect(),
        }
    }
}

/// A bijection of the ends of a scenario induced by a plane map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndPermutation {
    pub map: BTreeMap<End, End>,
}

impl EndPermutation {
    pub fn apply(&self, e: &End) -> Option<&End> {
        self.map.get(e)
    }

    pub fn identity(ends: &[End]) -> EndPermutation {
        EndPermutation {
            map: ends.iter().map(|e| (e.clone(), e.clone())).collect(),
        }
    }
}

/// Signature used to match a transformed continuum against the scenario:
/// the cells inside a common box plus the (direction, cross) lines of the
/// tails, which together pin down the set exactly.
fn continuum_signature(
    k: &Continuum,
    b: i64,
) -> (Vec<Cell>, Vec<(crate::plane_model::Direction, i64)>) {
    let mut lines: Vec<_> = k
        .tail_lines()
        .into_iter()
        .map(|t| (t.direction, t.cross))
        .collect();
    lines.sort();
    (k.cells_within(b).into_iter().collect(), lines)
}

/// The permutation of ends induced by `f`, provided `f` maps every
/// continuum of the scenario onto a continuum of the scenario. The result
/// is checked to preserve the circular order on all triples.
pub fn induced_end_map(f: &PlaneMap, sys: &EndSystem) -> Result<EndPermutation, Error> {
    let continua = sys.scenario.continua();
    let mut b = 0i64;
    for k in continua {
        let img = f.apply_continuum(k);
        for c in img
            .finite_cells()
            .iter()
            .chain(k.finite_cells().iter())
        {
            b = b.max(c.radius());
        }
        for t in img.tail_lines().iter().chain(k.tail_lines().iter()) {
            b = b.max(t.cross.abs()).max(t.start.abs());
        }
    }
    b += 2;
    let mut map: BTreeMap<End, End> = BTreeMap::new();
    for k in continua {
        let img = f.apply_continuum(k);
        let sig = continuum_signature(&img, b);
        let target = continua
            .iter()
            .find(|j| continuum_signature(j, b) == sig)
            .ok_or_else(|| Error::NotDecompositionPreserving(k.id.clone()))?;
        for e in ends(k)? {
            let rep = class_rays(k, &e)[0];
            let line = f.apply_tail_line(&k.rays[rep].tail_line());
            let e2 = ends(target)?
                .into_iter()
                .find(|e2| {
                    class_rays(target, e2).iter().any(|&ri| {
                        let t = target.rays[ri].tail_line();
                        t.direction == line.direction && t.cross == line.cross
                    })
                })
                .ok_or_else(|| Error::NotDecompositionPreserving(k.id.clone()))?;
            map.insert(e.clone(), e2);
        }
    }
    // Bijective?
    let images: std::collections::BTreeSet<&End> = map.values().collect();
    if images.len() != map.len() || map.len() != sys.ends.len() {
        return Err(Error::NotDecompositionPreserving(
            "induced end map is not a bijection".into(),
        ));
    }
    // Preserves the circular order on every triple.
    let n = sys.ends.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let (a, bb, c) = (&sys.ends[i], &sys.ends[j], &sys.ends[k]);
                if sys.order.orient(a, bb, c)
                    != sys.order.orient(&map[a], &map[bb], &map[c])
                {
                    return Err(Error::OrderViolation);
                }
            }
        }
    }
    Ok(EndPermutation { map })
}

/// An orientation-preserving piecewise-linear circle homeomorphism given
/// by breakpoints (point, image), linear in between.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLCircleMap {
    /// Sorted by source angle; images in the same cyclic order.
    pub breakpoints: Vec<(CirclePoint, CirclePoint)>,
}

impl PLCircleMap {
    pub fn new(mut breakpoints: Vec<(CirclePoint, CirclePoint)>) -> Result<PLCircleMap, Error> {
        if breakpoints.len() < 3 {
            return Err(Error::UniverseTooSmall(breakpoints.len()));
        }
        breakpoints.sort();
        let n = breakpoints.len();
        for i in 0..n {
            if breakpoints[i].0 == breakpoints[(i + 1) % n].0
                || breakpoints[i].1 == breakpoints[(i + 1) % n].1
            {
                return Err(Error::OrderViolation);
            }
        }
        for i in 0..n {
            let a = &breakpoints[i].1;
            let b = &breakpoints[(i + 1) % n].1;
            let c = &breakpoints[(i + 2) % n].1;
            if CirclePoint::orient(a, b, c) != 1 {
                return Err(Error::OrderViolation);
            }
        }
        Ok(PLCircleMap { breakpoints })
    }

    /// The segment index whose half-open source interval [pᵢ, pᵢ₊₁)
    /// contains `x`.
    fn segment_of(&self, x: &CirclePoint) -> usize {
        let n = self.breakpoints.len();
        for i in 0..n {
            let p = &self.breakpoints[i].0;
            let q = &self.breakpoints[(i + 1) % n].0;
            if x == p || x.in_open_interval(p, q) {
                return i;
            }
        }
        unreachable!("segments cover the circle")
    }

    pub fn eval(&self, x: &CirclePoint) -> CirclePoint {
        let n = self.breakpoints.len();
        let i = self.segment_of(x);
        let (p, q) = (&self.breakpoints[i], &self.breakpoints[(i + 1) % n]);
        let s = p.0.gap_to(&q.0);
        let t = p.1.gap_to(&q.1);
        let u = p.0.gap_to(x);
        CirclePoint::new(p.1.angle() + u * t / s)
    }

    /// Slope of the segment starting at breakpoint `i`.
    fn slope(&self, i: usize) -> BigRational {
        let n = self.breakpoints.len();
        let (p, q) = (&self.breakpoints[i], &self.breakpoints[(i + 1) % n]);
        p.1.gap_to(&q.1) / p.0.gap_to(&q.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointKind {
    Attracting,
    Repelling,
    Indifferent,
}

/// Exact fixed-point inventory of a PL circle map. Slope-one segments that
/// fix every point are reported as `fixed_arcs` rather than enumerated.
#[derive(Debug, Clone)]
pub struct FixedPointReport {
    pub fixed: Vec<(CirclePoint, FixedPointKind)>,
    pub fixed_arcs: Vec<(CirclePoint, CirclePoint)>,
    pub none_flag: bool,
}

pub fn classify_fixed_points(m: &PLCircleMap) -> FixedPointReport {
    let n = m.breakpoints.len();
    let one = BigRational::one();
    let mut points: Vec<CirclePoint> = Vec::new();
    let mut fixed_arcs: Vec<(CirclePoint, CirclePoint)> = Vec::new();
    for i in 0..n {
        let (p, q) = (&m.breakpoints[i], &m.breakpoints[(i + 1) % n]);
        let s = p.0.gap_to(&q.0);
        let t = p.1.gap_to(&q.1);
        // On the segment x = p + u, u ∈ [0, s): f(x) − x = δ + u·(t−s)/s
        // modulo 1, with δ the displacement at the left endpoint.
        let delta = p.0.gap_to(&p.1); // in [0, 1)
        if t == s {
            if delta.is_zero() {
                fixed_arcs.push((p.0.clone(), q.0.clone()));
            }
            continue;
        }
        let rate = (&t - &s) / &s;
        for k in [-1i64, 0, 1] {
            let u = (BigRational::from(BigInt::from(k)) - &delta) / &rate;
            if !u.is_negative() && u < s {
                let x = CirclePoint::new(p.0.angle() + u);
                if !points.contains(&x) {
                    points.push(x);
                }
            }
        }
    }
    // Close the fixed set: an endpoint of a fixed arc is itself fixed and
    // classified with the arc's slope on that side.
    for (a, b) in &fixed_arcs {
        for x in [a, b] {
            points.retain(|p| p != x);
        }
    }
    points.sort();
    let classify = |x: &CirclePoint| -> FixedPointKind {
        // Slopes immediately left and right of x.
        let i = m.segment_of(x);
        let right = m.slope(i);
        let left = if *x == m.breakpoints[i].0 {
            m.slope((i + n - 1) % n)
        } else {
            right.clone()
        };
        if left < one && right < one {
            FixedPointKind::Attracting
        } else if left > one && right > one {
            FixedPointKind::Repelling
        } else {
            FixedPointKind::Indifferent
        }
    };
    let fixed: Vec<(CirclePoint, FixedPointKind)> =
        points.iter().map(|x| (x.clone(), classify(x))).collect();
    let none_flag = fixed.is_empty() && fixed_arcs.is_empty();
    FixedPointReport {
        fixed,
        fixed_arcs,
        none_flag,
    }
}

/// The PL circle map induced on the marked circle by a permutation of the
/// marked elements: each marked angle goes to its image's marked angle.
pub fn induced_circle_map(
    perm: &EndPermutation,
    embedding: &BTreeMap<End, CirclePoint>,
) -> Result<PLCircleMap, Error> {
    let mut breakpoints = Vec::with_capacity(embedding.len());
    for (e, a) in embedding {
        let img = perm
            .apply(e)
            .ok_or_else(|| Error::NotDecompositionPreserving(format!("end {e} unmapped")))?;
        let b = embedding
            .get(img)
            .ok_or_else(|| Error::NotDecompositionPreserving(format!("end {img} unmarked")))?;
        breakpoints.push((a.clone(), b.clone()));
    }
    PLCircleMap::new(breakpoints)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertReason {
    NoFixedPoints,
    TwoIndifferent,
    MoreThanTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certified(CertReason),
    MoebiusLikeConsistent,
}

/// The closed-orbit case analysis: a certificate fires on no fixed points,
/// two indifferent fixed points, or more than two (a fixed arc counts as
/// more than two); one fixed point or an attracting–repelling pair is
/// consistent with a Möbius-like element and certifies nothing.
pub fn closed_orbit_criterion(report: &FixedPointReport) -> Verdict {
    if report.none_flag {
        return Verdict::Certified(CertReason::NoFixedPoints);
    }
    if !report.fixed_arcs.is_empty() {
        return Verdict::Certified(CertReason::MoreThanTwo);
    }
    match report.fixed.len() {
        0 => Verdict::Certified(CertReason::NoFixedPoints),
        1 => Verdict::MoebiusLikeConsistent,
        2 => {
            if report
                .fixed
                .iter()
                .all(|(_, k)| *k == FixedPointKind::Indifferent)
            {
                Verdict::Certified(CertReason::TwoIndifferent)
            } else {
                Verdict::MoebiusLikeConsistent
            }
        }
        _ => Verdict::Certified(CertReason::MoreThanTwo),
    }
}

/// Finite evidence (not proof) that the forward orbit of `k`'s finite part
/// under `f` stays bounded: every iterate up to `n_max` keeps its finite
/// cells within twice the largest radius in sight.
pub fn bounded_orbit_probe(f: &PlaneMap, k: &Continuum, n_max: u32) -> bool {
    let r0 = k.max_finite_radius().max(1);
    let bound = 2 * r0;
    let mut cur = k.clone();
    for _ in 0..=n_max {
        if cur.finite_cells().iter().any(|c| c.radius() > bound) {
            return false;
        }
        cur = f.apply_continuum(&cur);
    }
    true
}

/// Signature preservation check used by property tests: `perm` preserves
/// `order` on every triple.
pub fn preserves_order(perm: &EndPermutation, sys: &EndSystem) -> bool {
    let n = sys.ends.len();
    let o = |a: &End, b: &End, c: &End| -> Sign { sys.order.orient(a, b, c) };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let (a, b, c) = (&sys.ends[i], &sys.ends[j], &sys.ends[k]);
                if o(a, b, c) != o(&perm.map[a], &perm.map[b], &perm.map[c]) {
                    return false;
                }
            }
        }
    }
    true
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion_circle::embed_circle_default;
    use crate::plane_model::{star, Direction, Scenario};
    use crate::triad_order::ends_order;

    fn wheel4() -> Scenario {
        Scenario::new(vec![star(
            "w",
            Cell::new(0, 0),
            &[
                Direction::PosX,
                Direction::PosY,
                Direction::NegX,
                Direction::NegY,
            ],
        )])
        .unwrap()
    }

    #[test]
    fn rotation_about_a_cell_fixes_it() {
        let f = PlaneMap::rotation(1, Cell::new(3, -2));
        assert_eq!(f.apply(&Cell::new(3, -2)), Cell::new(3, -2));
        assert_eq!(f.apply(&Cell::new(4, -2)), Cell::new(3, -1));
        let mut g = PlaneMap::identity();
        for _ in 0..4 {
            g = f.compose(&g);
        }
        assert!(g.is_identity());
        assert!(f.compose(&f.inverse()).is_identity());
    }

    #[test]
    fn identity_induces_identity_permutation() {
        let s = wheel4();
        let sys = ends_order(&s).unwrap();
        let p = induced_end_map(&PlaneMap::identity(), &sys).unwrap();
        for e in &sys.ends {
            assert_eq!(p.apply(e), Some(e));
        }
    }

    #[test]
    fn half_turn_of_the_wheel_swaps_opposite_ends() {
        let s = wheel4();
        let sys = ends_order(&s).unwrap();
        let p = induced_end_map(&PlaneMap::rotation(2, Cell::new(0, 0)), &sys).unwrap();
        // Each ray class maps to the one with the reversed direction.
        for (e, img) in &p.map {
            assert_ne!(e, img);
            assert_eq!(p.map[img], *e);
        }
        assert!(preserves_order(&p, &sys));
    }

    #[test]
    fn translation_off_the_pattern_is_rejected() {
        let s = wheel4();
        let sys = ends_order(&s).unwrap();
        match induced_end_map(&PlaneMap::translation(1, 0), &sys) {
            Err(Error::NotDecompositionPreserving(_)) => {}
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn quarter_turn_induces_a_fixed_point_free_circle_map() {
        let s = wheel4();
        let sys = ends_order(&s).unwrap();
        let emb = embed_circle_default(&sys.order).unwrap();
        let p = induced_end_map(&PlaneMap::rotation(1, Cell::new(0, 0)), &sys).unwrap();
        let m = induced_circle_map(&p, &emb).unwrap();
        let report = classify_fixed_points(&m);
        assert!(report.none_flag);
        assert_eq!(
            closed_orbit_criterion(&report),
            Verdict::Certified(CertReason::NoFixedPoints)
        );
    }

    #[test]
    fn identity_circle_map_fixes_everything_indifferently() {
        let pts: Vec<CirclePoint> = (0..4).map(|k| CirclePoint::from_ratio(k, 4)).collect();
        let m = PLCircleMap::new(pts.iter().map(|p| (p.clone(), p.clone())).collect()).unwrap();
        let report = classify_fixed_points(&m);
        assert!(!report.none_flag);
        assert_eq!(report.fixed_arcs.len(), 4);
        assert_eq!(
            closed_orbit_criterion(&report),
            Verdict::Certified(CertReason::MoreThanTwo)
        );
    }

    #[test]
    fn attracting_repelling_pair_is_moebius_like() {
        // Fixed points at 0 and 1/2; slope 1/2 on both sides of 0 and
        // slope 3/2 on both sides of 1/2.
        let m = PLCircleMap::new(vec![
            (CirclePoint::zero(), CirclePoint::zero()),
            (CirclePoint::from_ratio(1, 4), CirclePoint::from_ratio(1, 8)),
            (CirclePoint::from_ratio(1, 2), CirclePoint::from_ratio(1, 2)),
            (CirclePoint::from_ratio(3, 4), CirclePoint::from_ratio(7, 8)),
        ])
        .unwrap();
        let report = classify_fixed_points(&m);
        assert_eq!(report.fixed.len(), 2);
        let kinds: Vec<FixedPointKind> = report.fixed.iter().map(|(_, k)| *k).collect();
        assert!(kinds.contains(&FixedPointKind::Attracting));
        assert!(kinds.contains(&FixedPointKind::Repelling));
        assert_eq!(closed_orbit_criterion(&report), Verdict::MoebiusLikeConsistent);
    }

    #[test]
    fn rotation_map_has_no_fixed_points() {
        let quarter = |k: i64| CirclePoint::from_ratio(k, 4);
        let m = PLCircleMap::new(
            (0..4).map(|k| (quarter(k), quarter(k + 1))).collect(),
        )
        .unwrap();
        let report = classify_fixed_points(&m);
        assert!(report.none_flag);
        assert_eq!(m.eval(&CirclePoint::from_ratio(1, 8)), CirclePoint::from_ratio(3, 8));
    }

    #[test]
    fn functoriality_on_the_wheel_group() {
        let s = wheel4();
        let sys = ends_order(&s).unwrap();
        let emb = embed_circle_default(&sys.order).unwrap();
        let r = PlaneMap::rotation(1, Cell::new(0, 0));
        let mut group = vec![PlaneMap::identity()];
        for _ in 0..3 {
            let last = *group.last().unwrap();
            group.push(r.compose(&last));
        }
        for f in &group {
            for g in &group {
                let pf = induced_end_map(f, &sys).unwrap();
                let pg = induced_end_map(g, &sys).unwrap();
                let pfg = induced_end_map(&f.compose(g), &sys).unwrap();
                let mf = induced_circle_map(&pf, &emb).unwrap();
                let mg = induced_circle_map(&pg, &emb).unwrap();
                let mfg = induced_circle_map(&pfg, &emb).unwrap();
                for (x, _) in &mfg.breakpoints {
                    assert_eq!(mfg.eval(x), mf.eval(&mg.eval(x)));
                }
            }
        }
    }

    #[test]
    fn orbit_probe_distinguishes_drift_from_rotation() {
        let k = star("k", Cell::new(1, 0), &[Direction::PosY]);
        assert!(bounded_orbit_probe(&PlaneMap::identity(), &k, 32));
        assert!(bounded_orbit_probe(
            &PlaneMap::rotation(1, Cell::new(0, 0)),
            &k,
            32
        ));
        assert!(!bounded_orbit_probe(&PlaneMap::translation(1, 0), &k, 32));
    }
}
