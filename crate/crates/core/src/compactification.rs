//! The end compactification of a scene: the plane plus its marked circle,
//! with neighborhoods of boundary points given by peripheral sets. A
//! peripheral set pairs a positive side region of an arc between two
//! subordinate sets with the boundary interval running between their ends.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::completion_circle::{embed_circle_default, CirclePoint};
use crate::error::Error;
use crate::plane_model::{
    perimeter_ccw_coord, perimeter_cell, Cell, Continuum, GridArc, Ray, TailLine,
};
use crate::region::CellRegion;
use crate::triad_order::{side_regions, EndSystem, SideRegions};
use crate::ends::End;

/// An unbounded piece of one continuum beyond a bounded square: the tails
/// of a set of its ends, represented as a synthetic continuum whose core is
/// the ring cells where those tails cross the cut radius.
#[derive(Debug, Clone)]
pub struct SubordinateSet {
    pub base: String,
    pub ends: Vec<End>,
    pub proxy: Continuum,
}

fn proxy_from_tails(id: String, tails: &[TailLine], ring: i64) -> Continuum {
    let mut core = BTreeSet::new();
    let mut rays = Vec::new();
    for t in tails {
        let anchor = t.ring_cell(ring);
        core.insert(anchor);
        rays.push(Ray {
            path: vec![anchor],
            direction: t.direction,
        });
    }
    Continuum { id, core, rays }
}

/// The subordinate set carrying a single end, cut at `ring` (which must be
/// beyond the scenario's stabilization radius).
pub fn subordinate_end(sys: &EndSystem, end: &End, ring: i64) -> Result<SubordinateSet, Error> {
    let comp = sys
        .comps
        .iter()
        .find(|c| c.end == *end)
        .ok_or_else(|| Error::InsufficientEnds(format!("unknown end {end}")))?;
    if ring < sys.ring() {
        return Err(Error::Geometry(format!(
            "cut radius {ring} is inside the stabilization square"
        )));
    }
    Ok(SubordinateSet {
        base: end.continuum.clone(),
        ends: vec![end.clone()],
        proxy: proxy_from_tails(format!("{end}|sub"), &comp.tails, ring),
    })
}

/// The subordinate set carrying every end of one continuum.
pub fn subordinate(sys: &EndSystem, id: &str, ring: i64) -> Result<SubordinateSet, Error> {
    let ends = sys.ends_of(id);
    if ends.is_empty() {
        return Err(Error::InsufficientEnds(format!(
            "continuum `{id}` has no ends in this scenario"
        )));
    }
    if ring < sys.ring() {
        return Err(Error::Geometry(format!(
            "cut radius {ring} is inside the stabilization square"
        )));
    }
    let tails: Vec<TailLine> = sys
        .comps
        .iter()
        .filter(|c| c.end.continuum == id)
        .flat_map(|c| c.tails.iter().cloned())
        .collect();
    Ok(SubordinateSet {
        base: id.to_string(),
        ends,
        proxy: proxy_from_tails(format!("{id}|sub"), &tails, ring),
    })
}

/// A point of the compactified plane: an interior grid cell or a boundary
/// circle point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompactifiedPoint {
    Interior(Cell),
    Boundary(CirclePoint),
}

/// A basic neighborhood at infinity: the positive side of an arc between
/// two subordinate sets, together with the open boundary interval running
/// from an end of the first to an end of the second on that side. The
/// interval can be absent when the sides interleave the wrong way.
#[derive(Debug, Clone)]
pub struct PeripheralSet {
    pub k: SubordinateSet,
    pub l: SubordinateSet,
    pub arc: GridArc,
    pub region: CellRegion,
    pub interval: Option<(CirclePoint, CirclePoint)>,
    /// The ends whose marked angles bound the interval.
    pub interval_ends: Option<(End, End)>,
}

impl PeripheralSet {
    pub fn contains(&self, p: &CompactifiedPoint) -> bool {
        match p {
            CompactifiedPoint::Interior(c) => self.region.contains(c),
            CompactifiedPoint::Boundary(x) => match &self.interval {
                Some((a, b)) => x.in_open_interval(a, b),
                None => false,
            },
        }
    }
}

/// The first ring cell strictly clockwise of `from` on the ring of radius
/// `r` that is not occupied by the two obstacles or the arc.
fn probe_clockwise(
    from: &Cell,
    r: i64,
    k: &Continuum,
    l: &Continuum,
    arc: &GridArc,
) -> Option<Cell> {
    let start = perimeter_ccw_coord(from, r)?;
    for step in 1..(8 * r) {
        let c = perimeter_cell(start - step, r);
        if !k.contains(&c) && !l.contains(&c) && !arc.cells.contains(&c) {
            return Some(c);
        }
    }
    None
}

/// The peripheral set determined by two subordinate sets and an arc from
/// the first to the second. The boundary interval is the unique gap from an
/// end of `k` to an end of `l`, free of their other ends, whose boundary
/// sector lies on the arc's positive side.
pub fn peripheral_set(
    sys: &EndSystem,
    k: &SubordinateSet,
    l: &SubordinateSet,
    arc: &GridArc,
) -> Result<PeripheralSet, Error> {
    let regions = side_regions(&k.proxy, &l.proxy, arc)?;
    peripheral_from_regions(sys, k, l, arc, regions)
}

fn peripheral_from_regions(
    sys: &EndSystem,
    k: &SubordinateSet,
    l: &SubordinateSet,
    arc: &GridArc,
    regions: SideRegions,
) -> Result<PeripheralSet, Error> {
    let marked = embed_circle_default(&sys.order)?;
    let own: Vec<&End> = k.ends.iter().chain(l.ends.iter()).collect();
    let b = regions.positive.box_radius;
    let mut chosen: Option<(End, End)> = None;
    for a in &k.ends {
        for z in &l.ends {
            if a == z {
                continue;
            }
            // No other end of k or l strictly inside (a, z).
            let clean = own.iter().all(|e| {
                **e == *a || **e == *z || !sys.order.in_interval(a, e, z)
            });
            if !clean {
                continue;
            }
            // Sector test: the ring sector just clockwise of a's exit must
            // lie in the positive region.
            let exit = end_tail(sys, a)?.ring_cell(b);
            let probe = match probe_clockwise(&exit, b, &k.proxy, &l.proxy, arc) {
                Some(c) => c,
                None => continue,
            };
            if regions.positive.contains(&probe) {
                if chosen.is_some() {
                    return Err(Error::Geometry(
                        "ambiguous boundary interval for peripheral set".into(),
                    ));
                }
                chosen = Some((a.clone(), z.clone()));
            }
        }
    }
    let interval = match &chosen {
        Some((a, z)) => Some((marked[a].clone(), marked[z].clone())),
        None => None,
    };
    Ok(PeripheralSet {
        k: k.clone(),
        l: l.clone(),
        arc: arc.clone(),
        region: regions.positive,
        interval,
        interval_ends: chosen,
    })
}

fn end_tail<'a>(sys: &'a EndSystem, e: &End) -> Result<&'a TailLine, Error> {
    sys.comps
        .iter()
        .find(|c| c.end == *e)
        .map(|c| &c.tails[0])
        .ok_or_else(|| Error::InsufficientEnds(format!("unknown end {e}")))
}

/// A nested chain of peripheral neighborhoods around the boundary point
/// `p`, one per depth step, each cut further out and verified to contain
/// the next. The flanking ends are the marked ends on either side of `p`
/// (its own neighbors, when `p` is itself marked).
pub fn neighborhood_chain(
    p: &CirclePoint,
    sys: &EndSystem,
    depth: usize,
) -> Result<Vec<PeripheralSet>, Error> {
    let marked = embed_circle_default(&sys.order)?;
    if sys.ends.len() < 3 {
        return Err(Error::InsufficientEnds(
            "need at least 3 ends to flank a boundary point".into(),
        ));
    }
    // Sort marked ends by angle and locate the flanking pair.
    let mut by_angle: Vec<(&CirclePoint, &End)> =
        marked.iter().map(|(e, a)| (a, e)).collect();
    by_angle.sort();
    let n = by_angle.len();
    let pinch = by_angle.iter().position(|(a, _)| *a == p);
    let (lo, hi) = match pinch {
        // Pinch onto the marked end: flank it with both neighbors so the
        // open interval still contains it.
        Some(i) => ((i + n - 1) % n, (i + 1) % n),
        None => {
            let mut lo = n - 1;
            for (i, (a, _)) in by_angle.iter().enumerate() {
                if (*a).angle() < p.angle() {
                    lo = i;
                }
            }
            (lo, (lo + 1) % n)
        }
    };
    let (ea, eb) = (by_angle[lo].1.clone(), by_angle[hi].1.clone());
    let mut chain: Vec<PeripheralSet> = Vec::new();
    for i in 0..depth {
        let ring = sys.ring() + i as i64;
        let ka = subordinate_end(sys, &ea, ring)?;
        let kb = subordinate_end(sys, &eb, ring)?;
        let prev_region = chain.last().map(|u| u.region.clone());
        let u = peripheral_between(sys, &ka, &kb, ring, prev_region.as_ref())?;
        if let Some(prev) = chain.last() {
            if !prev.region.contains_region(&u.region) {
                return Err(Error::Geometry(format!(
                    "neighborhood chain fails to nest at step {i}"
                )));
            }
            if prev.interval_ends != u.interval_ends {
                return Err(Error::Geometry(
                    "neighborhood chain changed its boundary trace".into(),
                ));
            }
        }
        chain.push(u);
    }
    Ok(chain)
}

/// A peripheral set between two single-end subordinates whose arc is kept
/// outside the square of radius `ring` (and inside `within`, when given),
/// oriented so that the positive side is the outer sector between the two
/// tails.
fn peripheral_between(
    sys: &EndSystem,
    ka: &SubordinateSet,
    kb: &SubordinateSet,
    ring: i64,
    within: Option<&CellRegion>,
) -> Result<PeripheralSet, Error> {
    use crate::plane_model::{shortest_arc, ObstacleGrid};
    let b = ring + 3;
    let mut grid = ObstacleGrid::new(b);
    grid.paint_continuum(0, &ka.proxy);
    grid.paint_continuum(1, &kb.proxy);
    let allowed = |c: &Cell| -> bool {
        c.radius() > ring && within.map_or(true, |w| w.contains(c))
    };
    let cells = shortest_arc(&grid, 1, 2, 3, Some(&allowed)).ok_or(Error::NoArc {
        from: ka.proxy.id.clone(),
        to: kb.proxy.id.clone(),
    })?;
    let forward = GridArc {
        cells: cells.clone(),
        source: ka.proxy.id.clone(),
        target: kb.proxy.id.clone(),
    };
    let u = peripheral_set(sys, ka, kb, &forward)?;
    if u.interval.is_some() {
        return Ok(u);
    }
    // Wrong side: reverse the arc so the outer sector becomes positive.
    let mut rev = cells;
    rev.reverse();
    let backward = GridArc {
        cells: rev,
        source: kb.proxy.id.clone(),
        target: ka.proxy.id.clone(),
    };
    peripheral_set(sys, kb, ka, &backward)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideClass {
    Positive,
    Negative,
    OnArc,
}

/// Verdict of cutting the compactified disc along a spanning arc: the two
/// interior sides plus the boundary intervals `(a, b)` and `(b, a)`
/// attached to them. When the curve fails to separate (for instance after
/// puncturing it), `separates` is false and one side carries everything.
#[derive(Debug, Clone)]
pub struct SpanningReport {
    pub separates: bool,
    pub positive: CellRegion,
    pub negative: CellRegion,
    pub a: CirclePoint,
    pub b: CirclePoint,
}

impl SpanningReport {
    pub fn classify(&self, p: &CompactifiedPoint, curve: &Continuum) -> SideClass {
        match p {
            CompactifiedPoint::Interior(c) => {
                if curve.contains(c) {
                    SideClass::OnArc
                } else if self.positive.contains(c) {
                    SideClass::Positive
                } else {
                    SideClass::Negative
                }
            }
            CompactifiedPoint::Boundary(x) => {
                if x == &self.a || x == &self.b {
                    SideClass::OnArc
                } else if !self.separates || x.in_open_interval(&self.a, &self.b) {
                    SideClass::Positive
                } else {
                    SideClass::Negative
                }
            }
        }
    }
}

/// Cut the disc along a properly embedded curve with two ends, whose
/// boundary points are `a` (the end of `curve.rays[0]`) and `b` (the end of
/// `curve.rays[1]`). The positive side is the left of the curve traversed
/// from `a` to `b`.
pub fn spanning_arc_separates(
    curve: &Continuum,
    a: &CirclePoint,
    b: &CirclePoint,
) -> Result<SpanningReport, Error> {
    spanning_arc_separates_with(curve, a, b, &BTreeSet::new())
}

/// Same cut, but with some of the curve's cells punctured out of the
/// obstacle. Any puncture lets the two sides meet, which the report shows
/// as `separates == false`.
pub fn spanning_arc_separates_with(
    curve: &Continuum,
    a: &CirclePoint,
    b: &CirclePoint,
    punctures: &BTreeSet<Cell>,
) -> Result<SpanningReport, Error> {
    if curve.rays.len() != 2 {
        return Err(Error::NotSpanning(format!(
            "curve has {} ends; a spanning arc has exactly 2",
            curve.rays.len()
        )));
    }
    curve
        .validate()
        .map_err(|e| Error::NotSpanning(e.to_string()))?;
    if a == b {
        return Err(Error::NotSpanning(
            "boundary endpoints must be distinct".into(),
        ));
    }
    let r0 = crate::ends::continuum_stabilization_radius(curve);
    let bx = r0 + 2;
    // Ordered traversal from the first ray's far cell to the second's.
    let cells: BTreeSet<Cell> = curve.cells_within(bx).into_iter().collect();
    let start = curve.rays[0].tail_line().ring_cell(bx);
    let goal = curve.rays[1].tail_line().ring_cell(bx);
    let mut seq = vec![start];
    let mut prev: Option<Cell> = None;
    let mut cur = start;
    while cur != goal {
        let next = cur
            .neighbors4()
            .into_iter()
            .find(|c| cells.contains(c) && Some(*c) != prev)
            .ok_or_else(|| Error::NotSpanning("curve is not a simple path".into()))?;
        prev = Some(cur);
        cur = next;
        seq.push(cur);
        if seq.len() > cells.len() {
            return Err(Error::NotSpanning("curve traversal does not close".into()));
        }
    }
    // Flood the complement, split by co-orientation seeds.
    use crate::plane_model::ObstacleGrid;
    use crate::region::Outside;
    use std::collections::VecDeque;
    let mut grid = ObstacleGrid::new(bx);
    grid.paint_continuum(0, curve);
    let virt_prev = curve.rays[0].tail_line().ring_cell(bx + 1);
    let virt_next = curve.rays[1].tail_line().ring_cell(bx + 1);
    let (left, right) = crate::triad_order::arc_side_seeds(&seq, virt_prev, virt_next);
    let free =
        |c: &Cell| grid.idx(c).is_some() && (grid.get(c) == 0 || punctures.contains(c));
    let flood = |seeds: &[Cell]| -> BTreeSet<Cell> {
        let mut seen = BTreeSet::new();
        let mut q = VecDeque::new();
        for s in seeds {
            if free(s) && seen.insert(*s) {
                q.push_back(*s);
            }
        }
        while let Some(c) = q.pop_front() {
            for nb in c.neighbors4() {
                if free(&nb) && seen.insert(nb) {
                    q.push_back(nb);
                }
            }
        }
        seen
    };
    let pos = flood(&left);
    let neg = flood(&right);
    let separates = pos.intersection(&neg).next().is_none();
    let outside = Outside::Sectors {
        world_tails: curve.tail_lines(),
    };
    let (pos_cells, neg_cells) = if separates {
        (pos, neg)
    } else {
        (pos.union(&neg).cloned().collect(), BTreeSet::new())
    };
    Ok(SpanningReport {
        separates,
        positive: CellRegion {
            cells: pos_cells,
            box_radius: bx,
            outside: outside.clone(),
        },
        negative: CellRegion {
            cells: neg_cells,
            box_radius: bx,
            outside,
        },
        a: a.clone(),
        b: b.clone(),
    })
}

/// Boundary trace of a subordinate set: the marked angles of its ends. The
/// closure of a continuum in the compactified disc is its cells plus this
/// trace.
pub fn boundary_trace(
    sys: &EndSystem,
    id: &str,
) -> Result<BTreeMap<End, CirclePoint>, Error> {
    let marked = embed_circle_default(&sys.order)?;
    Ok(marked
        .into_iter()
        .filter(|(e, _)| e.continuum == id)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_model::{star, Direction, Scenario};
    use crate::triad_order::ends_order;

    fn wheel6() -> Scenario {
        // Six rays from separate bases arranged around the origin.
        Scenario::new(vec![
            star("e", Cell::new(6, 0), &[Direction::PosX]),
            star("ne", Cell::new(4, 4), &[Direction::PosY]),
            star("nw", Cell::new(-4, 4), &[Direction::PosY]),
            star("w", Cell::new(-6, 0), &[Direction::NegX]),
            star("sw", Cell::new(-4, -4), &[Direction::NegY]),
            star("se", Cell::new(4, -4), &[Direction::NegY]),
        ])
        .unwrap()
    }

    #[test]
    fn peripheral_set_between_neighbor_rays() {
        let s = wheel6();
        let sys = ends_order(&s).unwrap();
        let ring = sys.ring();
        let ka = subordinate(&sys, "ne", ring).unwrap();
        let kb = subordinate(&sys, "e", ring).unwrap();
        // From ne to e the positive side is the empty sector between the
        // two tails; the complementary direction walks the long way around
        // and picks up every other end.
        let u = peripheral_between(&sys, &ka, &kb, ring, None).unwrap();
        let (a, b) = u.interval.clone().unwrap();
        assert!(u.contains(&CompactifiedPoint::Boundary(a.midpoint_ccw(&b))));
        let w_end = &sys.ends_of("w")[0];
        let marked = embed_circle_default(&sys.order).unwrap();
        assert!(!u.contains(&CompactifiedPoint::Boundary(marked[w_end].clone())));
        assert!(u.region.is_unbounded());
        let v = peripheral_between(&sys, &kb, &ka, ring, None).unwrap();
        assert!(v.contains(&CompactifiedPoint::Boundary(marked[w_end].clone())));
    }

    #[test]
    fn neighborhood_chain_nests_and_stays_far_out() {
        let s = wheel6();
        let sys = ends_order(&s).unwrap();
        let marked = embed_circle_default(&sys.order).unwrap();
        let angles: Vec<&CirclePoint> = marked.values().collect();
        let p = angles[0].midpoint_ccw(angles[1]);
        let chain = neighborhood_chain(&p, &sys, 4).unwrap();
        assert_eq!(chain.len(), 4);
        for (i, u) in chain.iter().enumerate() {
            let d = sys.ring() + i as i64;
            assert!(u.region.cells.iter().all(|c| c.radius() > d));
            assert!(u.contains(&CompactifiedPoint::Boundary(p.clone())));
        }
        for w in chain.windows(2) {
            assert!(w[0].region.contains_region(&w[1].region));
        }
    }

    #[test]
    fn chain_pinches_onto_a_marked_end() {
        let s = wheel6();
        let sys = ends_order(&s).unwrap();
        let marked = embed_circle_default(&sys.order).unwrap();
        let e = &sys.ends_of("ne")[0];
        let p = marked[e].clone();
        let chain = neighborhood_chain(&p, &sys, 3).unwrap();
        for u in &chain {
            assert!(u.contains(&CompactifiedPoint::Boundary(p.clone())));
        }
    }

    fn vertical_line(id: &str) -> Continuum {
        star(id, Cell::new(0, 0), &[Direction::PosY, Direction::NegY])
    }

    #[test]
    fn vertical_line_splits_the_disc() {
        let curve = vertical_line("c");
        let a = CirclePoint::from_ratio(0, 1);
        let b = CirclePoint::from_ratio(1, 2);
        let rep = spanning_arc_separates(&curve, &a, &b).unwrap();
        assert!(rep.separates);
        // rays[0] points up: traversing downward from top, the left side is
        // x > 0.
        assert_eq!(
            rep.classify(&CompactifiedPoint::Interior(Cell::new(2, 0)), &curve),
            SideClass::Positive
        );
        assert_eq!(
            rep.classify(&CompactifiedPoint::Interior(Cell::new(-2, 0)), &curve),
            SideClass::Negative
        );
        assert_eq!(
            rep.classify(&CompactifiedPoint::Interior(Cell::new(0, 1)), &curve),
            SideClass::OnArc
        );
        assert_eq!(
            rep.classify(
                &CompactifiedPoint::Boundary(CirclePoint::from_ratio(1, 4)),
                &curve
            ),
            SideClass::Positive
        );
        assert_eq!(
            rep.classify(
                &CompactifiedPoint::Boundary(CirclePoint::from_ratio(3, 4)),
                &curve
            ),
            SideClass::Negative
        );
        assert_eq!(
            rep.classify(&CompactifiedPoint::Boundary(a.clone()), &curve),
            SideClass::OnArc
        );
    }

    #[test]
    fn punctured_curve_does_not_separate() {
        let curve = vertical_line("c");
        let a = CirclePoint::zero();
        let b = CirclePoint::from_ratio(1, 2);
        let punctures: BTreeSet<Cell> = [Cell::new(0, 0)].into_iter().collect();
        let rep = spanning_arc_separates_with(&curve, &a, &b, &punctures).unwrap();
        assert!(!rep.separates);
        assert_eq!(
            rep.classify(&CompactifiedPoint::Interior(Cell::new(2, 0)), &curve),
            rep.classify(&CompactifiedPoint::Interior(Cell::new(-2, 0)), &curve),
        );
    }

    #[test]
    fn disconnected_curve_is_rejected() {
        let mut curve = vertical_line("c");
        curve.rays[0].path = vec![Cell::new(1, 1)];
        match spanning_arc_separates(&curve, &CirclePoint::zero(), &CirclePoint::from_ratio(1, 2))
        {
            Err(Error::NotSpanning(_)) => {}
            other => panic!("expected NotSpanning, got {other:?}"),
        }
    }

    #[test]
    fn boundary_trace_lists_each_end_once() {
        let s = wheel6();
        let sys = ends_order(&s).unwrap();
        let tr = boundary_trace(&sys, "e").unwrap();
        assert_eq!(tr.len(), 1);
    }
}
