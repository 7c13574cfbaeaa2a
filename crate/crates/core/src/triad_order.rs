//! Geometric orientation of triples of unbounded sets. An oriented arc from
//! K to M splits the complement of `K ∪ M` locally into a left and a right
//! side; the sign of a triple (K, L, M) records which side L falls on. The
//! positive side is the left of the oriented arc, with the plane oriented
//! counterclockwise. Applied to the components of the continua beyond the
//! stabilization radius this yields a circular order on all ends of a scene.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::circular_order::{CircularOrder, Sign};
use crate::ends::{class_rays, ends, End};
use crate::error::Error;
use crate::plane_model::{
    find_arc, shortest_arc, stabilization_radius, Cell, Continuum, GridArc, ObstacleGrid,
    Scenario, TailLine,
};
use crate::region::{CellRegion, Outside};

/// The two sides of the complement of `K ∪ M` cut along an oriented arc.
#[derive(Debug, Clone)]
pub struct SideRegions {
    pub positive: CellRegion,
    pub negative: CellRegion,
}

fn rotl(d: (i64, i64)) -> (i64, i64) {
    (-d.1, d.0)
}

fn rotr(d: (i64, i64)) -> (i64, i64) {
    (d.1, -d.0)
}

fn add(c: &Cell, d: (i64, i64)) -> Cell {
    Cell::new(c.x + d.0, c.y + d.1)
}

fn sub(a: &Cell, b: &Cell) -> (i64, i64) {
    (a.x - b.x, a.y - b.y)
}

/// Cells co-oriented to the left and right of a directed 4-connected path.
/// `prev` and `next` extend the path virtually at its two endpoints (into
/// the source and target sets), so endpoint cells get classified too. At a
/// turn both free slots lie on the outside of the corner.
pub(crate) fn arc_side_seeds(
    cells: &[Cell],
    prev: Cell,
    next: Cell,
) -> (Vec<Cell>, Vec<Cell>) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let n = cells.len();
    for i in 0..n {
        let p = if i == 0 { prev } else { cells[i - 1] };
        let a = cells[i];
        let x = if i + 1 == n { next } else { cells[i + 1] };
        let din = sub(&a, &p);
        let dout = sub(&x, &a);
        if din == dout {
            left.push(add(&a, rotl(dout)));
            right.push(add(&a, rotr(dout)));
        } else if dout == rotl(din) {
            // Left turn: the two free slots sweep around the outside,
            // which is the right side of the motion.
            right.push(add(&a, din));
            right.push(add(&a, rotr(din)));
        } else if dout == rotr(din) {
            left.push(add(&a, din));
            left.push(add(&a, rotl(din)));
        }
        // dout == -din cannot happen on a simple path with distinct
        // virtual endpoints.
    }
    (left, right)
}

fn lex_min_neighbor_in(
    cell: &Cell,
    test: impl Fn(&Cell) -> bool,
) -> Option<Cell> {
    let mut best: Option<Cell> = None;
    for n in cell.neighbors4() {
        if test(&n) && best.map_or(true, |b| n < b) {
            best = Some(n);
        }
    }
    best
}

/// Flood the complement of `K ∪ M ∪ γ` inside a box and split it along the
/// arc's co-orientation. Returns unbounded exact regions; the world beyond
/// the box consists only of the tails of `K` and `M`.
pub fn side_regions(k: &Continuum, m: &Continuum, arc: &GridArc) -> Result<SideRegions, Error> {
    if arc.cells.is_empty() {
        return Err(Error::DegenerateArc("arc has no cells".into()));
    }
    let pair_r = stabilization_radius(&[k.clone(), m.clone()])?;
    let b = pair_r.max(arc.max_radius()) + 2;
    side_regions_in_box(k, m, arc, b)
}

pub fn side_regions_in_box(
    k: &Continuum,
    m: &Continuum,
    arc: &GridArc,
    b: i64,
) -> Result<SideRegions, Error> {
    let mut grid = ObstacleGrid::new(b);
    grid.paint_continuum(0, k);
    grid.paint_continuum(1, m);
    grid.paint(2, arc.cells.iter().copied());
    for c in &arc.cells {
        if k.contains(c) || m.contains(c) {
            return Err(Error::DegenerateArc(format!(
                "arc cell {c} lies inside an endpoint set"
            )));
        }
    }
    let prev = lex_min_neighbor_in(&arc.cells[0], |c| k.contains(c)).ok_or_else(|| {
        Error::DegenerateArc("first arc cell is not adjacent to the source".into())
    })?;
    let last = arc.cells.last().unwrap();
    let next = lex_min_neighbor_in(last, |c| m.contains(c)).ok_or_else(|| {
        Error::DegenerateArc("last arc cell is not adjacent to the target".into())
    })?;
    let (left, right) = arc_side_seeds(&arc.cells, prev, next);

    // Label free components.
    let w = 2 * b + 1;
    let n = (w * w) as usize;
    let mut comp: Vec<i32> = vec![-1; n];
    let free = |c: &Cell| grid.get(c) & 0b111 == 0;
    let mut next_label = 0i32;
    for start_idx in 0..n {
        let c0 = grid.cell(start_idx);
        if comp[start_idx] >= 0 || !free(&c0) {
            continue;
        }
        let mut queue = VecDeque::new();
        comp[start_idx] = next_label;
        queue.push_back(c0);
        while let Some(c) = queue.pop_front() {
            for nb in c.neighbors4() {
                if let Some(j) = grid.idx(&nb) {
                    if comp[j] < 0 && free(&nb) {
                        comp[j] = next_label;
                        queue.push_back(nb);
                    }
                }
            }
        }
        next_label += 1;
    }
    let label_of = |c: &Cell| grid.idx(c).map(|i| comp[i]).filter(|&l| l >= 0);
    let mut pos_labels = BTreeSet::new();
    let mut neg_labels = BTreeSet::new();
    for s in &left {
        if let Some(l) = label_of(s) {
            pos_labels.insert(l);
        }
    }
    for s in &right {
        if let Some(l) = label_of(s) {
            neg_labels.insert(l);
        }
    }
    if pos_labels.intersection(&neg_labels).next().is_some() {
        return Err(Error::Geometry(
            "arc does not separate: left and right seeds meet".into(),
        ));
    }
    let world_tails: Vec<TailLine> = k
        .tail_lines()
        .into_iter()
        .chain(m.tail_lines())
        .collect();
    let collect = |labels: &BTreeSet<i32>| -> CellRegion {
        let mut cells = BTreeSet::new();
        for i in 0..n {
            if comp[i] >= 0 && labels.contains(&comp[i]) {
                cells.insert(grid.cell(i));
            }
        }
        CellRegion {
            cells,
            box_radius: b,
            outside: Outside::Sectors {
                world_tails: world_tails.clone(),
            },
        }
    };
    Ok(SideRegions {
        positive: collect(&pos_labels),
        negative: collect(&neg_labels),
    })
}

/// Orientation of a triple of pairwise disjoint, mutually non-separating
/// continua: `+1` when `l` lies on the positive (left) side of an arc from
/// `k` to `m`, `-1` otherwise. Independent of the arc chosen.
pub fn triad_orient(k: &Continuum, l: &Continuum, m: &Continuum) -> Result<Sign, Error> {
    let mini = Scenario::new(vec![k.clone(), l.clone(), m.clone()])?.with_corridors(3)?;
    // Precondition: no element separates the other two.
    let triples = [
        (0usize, 1usize, 2usize),
        (1, 0, 2),
        (2, 0, 1),
    ];
    for (sep, a, b) in triples {
        let ids: Vec<&str> = mini.continua().iter().map(|c| c.id.as_str()).collect();
        match find_arc(&mini, ids[a], ids[b], &BTreeSet::new()) {
            Ok(_) => {}
            Err(Error::NoArc { .. }) => {
                return Err(Error::NotATriad {
                    separator: mini.continua()[sep].id.clone(),
                })
            }
            Err(e) => return Err(e),
        }
    }
    let rk = &mini.continua()[0];
    let rl = &mini.continua()[1];
    let rm = &mini.continua()[2];
    let arc = find_arc(&mini, &rk.id, &rm.id, &BTreeSet::new())?;
    triad_orient_via(rk, rl, rm, &arc)
}

/// Orientation computed with a caller-supplied arc from `k` to `m` whose
/// cells avoid `l` as well.
pub fn triad_orient_via(
    k: &Continuum,
    l: &Continuum,
    m: &Continuum,
    arc: &GridArc,
) -> Result<Sign, Error> {
    for c in &arc.cells {
        if l.contains(c) {
            return Err(Error::DegenerateArc(format!(
                "arc passes through the middle set at {c}"
            )));
        }
    }
    let regions = side_regions(k, m, arc)?;
    let b = regions.positive.box_radius;
    let l_cells = l.cells_within(b);
    let mut sign: Option<Sign> = None;
    for c in &l_cells {
        let s = if regions.positive.contains(c) {
            1
        } else if regions.negative.contains(c) {
            -1
        } else {
            return Err(Error::Geometry(format!(
                "cell {c} of the middle set is on neither side"
            )));
        };
        match sign {
            None => sign = Some(s),
            Some(prev) if prev != s => {
                return Err(Error::Geometry(
                    "middle set straddles both sides of the arc".into(),
                ))
            }
            _ => {}
        }
    }
    sign.ok_or_else(|| Error::Geometry("middle set is invisible in the box".into()))
}

/// One end's component beyond the distinguishing radius, reduced to the
/// data the orientation engine needs.
#[derive(Debug, Clone)]
pub struct EndComp {
    pub end: End,
    pub tails: Vec<TailLine>,
    /// A cell of the component on the first ring beyond the distinguishing
    /// radius; used to locate the component during floods.
    pub rep: Cell,
}

/// All ends of a scenario together with their geometric circular order.
pub struct EndSystem {
    pub scenario: Scenario,
    pub ends: Vec<End>,
    pub order: CircularOrder<End>,
    pub comps: Vec<EndComp>,
    grid: ObstacleGrid,
    ring: i64,
}

/// The circular order the scene induces on its ends, computed by orienting
/// the triple of distinguished components for every triple of ends.
pub fn ends_order(scenario: &Scenario) -> Result<EndSystem, Error> {
    EndSystem::build(scenario, 0)
}

impl EndSystem {
    /// `offset` enlarges the distinguishing radius past the stabilization
    /// radius; the resulting order must not depend on it.
    pub fn build(scenario: &Scenario, offset: i64) -> Result<EndSystem, Error> {
        let rd = scenario.r0() + offset;
        let ring = rd + 1;
        let b = rd + 3;
        let mut all_ends = Vec::new();
        let mut comps = Vec::new();
        for k in scenario.continua() {
            for e in ends(k)? {
                let tails: Vec<TailLine> = class_rays(k, &e)
                    .into_iter()
                    .map(|i| k.rays[i].tail_line())
                    .collect();
                let rep = tails[0].ring_cell(ring);
                comps.push(EndComp {
                    end: e.clone(),
                    tails,
                    rep,
                });
                all_ends.push(e);
            }
        }
        let n = all_ends.len();
        if n < 3 {
            return Err(Error::InsufficientEnds(format!(
                "scenario has {n} ends; the circular order needs at least 3"
            )));
        }
        if n > 60 {
            return Err(Error::InvalidScenario(format!(
                "too many ends ({n}) for the orientation engine"
            )));
        }
        let mut grid = ObstacleGrid::new(b);
        for (i, comp) in comps.iter().enumerate() {
            for t in &comp.tails {
                grid.paint(
                    i as u32,
                    t.cells_within(b).into_iter().filter(|c| c.radius() >= ring),
                );
            }
        }
        let sys = EndSystem {
            scenario: scenario.clone(),
            ends: all_ends.clone(),
            order: CircularOrder::from_cycle(vec![
                all_ends[0].clone(),
                all_ends[1].clone(),
                all_ends[2].clone(),
            ])?, // placeholder, replaced below
            comps,
            grid,
            ring,
        };
        let mut table: HashMap<(usize, usize, usize), Sign> = HashMap::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let s = sys.orient_comps(i, j, k)?;
                    // Extend over the six orderings by permutation parity.
                    table.insert((i, j, k), s);
                    table.insert((j, k, i), s);
                    table.insert((k, i, j), s);
                    table.insert((j, i, k), -s);
                    table.insert((i, k, j), -s);
                    table.insert((k, j, i), -s);
                }
            }
        }
        let order = CircularOrder::from_table(all_ends, table)?;
        Ok(EndSystem { order, ..sys })
    }

    /// First ring radius beyond the distinguishing radius.
    pub fn ring(&self) -> i64 {
        self.ring
    }

    pub fn ends_of(&self, id: &str) -> Vec<End> {
        self.ends
            .iter()
            .filter(|e| e.continuum == id)
            .cloned()
            .collect()
    }

    /// Orientation of three distinguished components, by arc and flood.
    fn orient_comps(&self, i: usize, j: usize, k: usize) -> Result<Sign, Error> {
        let bits = |xs: &[usize]| xs.iter().fold(0u64, |m, &x| m | (1 << x));
        let block_arc = bits(&[i, j, k]);
        let arc = shortest_arc(&self.grid, 1 << i, 1 << k, block_arc, None).ok_or_else(|| {
            Error::Geometry(format!(
                "no arc between end components {} and {}",
                self.ends[i], self.ends[k]
            ))
        })?;
        let has_bit = |c: &Cell, bit: usize| {
            self.grid.idx(c).is_some() && self.grid.get(c) & (1 << bit) != 0
        };
        let prev = lex_min_neighbor_in(&arc[0], |c| has_bit(c, i))
            .ok_or_else(|| Error::Geometry("arc start detached".into()))?;
        let next = lex_min_neighbor_in(arc.last().unwrap(), |c| has_bit(c, k))
            .ok_or_else(|| Error::Geometry("arc end detached".into()))?;
        let (left, right) = arc_side_seeds(&arc, prev, next);
        // Flood the complement of comp_i ∪ comp_k ∪ arc from the left seeds
        // and see whether comp_j's representative is reached.
        let block_flood = bits(&[i, k]);
        let arc_set: BTreeSet<Cell> = arc.iter().copied().collect();
        let free = |c: &Cell| {
            self.grid.idx(c).is_some()
                && self.grid.get(c) & block_flood == 0
                && !arc_set.contains(c)
        };
        let rep = self.comps[j].rep;
        // (found rep, any seed was free at all)
        let reach = |seeds: &[Cell], check_other: &[Cell]| -> Result<(bool, bool), Error> {
            let mut seen: BTreeSet<Cell> = BTreeSet::new();
            let mut queue = VecDeque::new();
            for s in seeds {
                if free(s) && seen.insert(*s) {
                    queue.push_back(*s);
                }
            }
            let seeded = !seen.is_empty();
            let mut found = false;
            while let Some(c) = queue.pop_front() {
                if c == rep {
                    found = true;
                    break;
                }
                for nb in c.neighbors4() {
                    if free(&nb) && seen.insert(nb) {
                        queue.push_back(nb);
                    }
                }
            }
            for o in check_other {
                if free(o) && seen.contains(o) {
                    return Err(Error::Geometry(
                        "arc sides meet: left flood reached a right seed".into(),
                    ));
                }
            }
            Ok((found, seeded))
        };
        let (l_found, l_seeded) = reach(&left, &right)?;
        if l_found {
            return Ok(1);
        }
        let (r_found, r_seeded) = reach(&right, &[])?;
        if r_found {
            return Ok(-1);
        }
        // The stubs of comp_i and comp_k both touch the box boundary, so
        // comp_i ∪ arc ∪ comp_k leaves exactly two sides. When one side has
        // no free cell next to the arc (a tight elbow between adjacent
        // stubs), the other flood is still exhaustive, and the missing
        // representative must sit on the unexplorable side.
        if r_seeded && !l_seeded {
            return Ok(1);
        }
        if l_seeded && !r_seeded {
            return Ok(-1);
        }
        Err(Error::Geometry(format!(
            "component of {} not reached from either side",
            self.ends[j]
        )))
    }
}

/// Whether `k` separates `l` from `m`, decided twice: once geometrically
/// (no arc from `l` to `m` avoiding `k`) and once order-theoretically (the
/// ends of `k` separate the ends of `l` from the ends of `m` on the
/// circle). The two answers agree on valid scenes.
#[derive(Debug, Clone)]
pub struct SeparationReport {
    pub geometric: bool,
    pub order_theoretic: bool,
    pub witnesses: Option<(End, End)>,
}

pub fn detect_separation(
    k: &Continuum,
    l: &Continuum,
    m: &Continuum,
) -> Result<SeparationReport, Error> {
    let mini = Scenario::new(vec![k.clone(), l.clone(), m.clone()])?.with_corridors(3)?;
    let geometric = match find_arc(&mini, &mini.continua()[1].id, &mini.continua()[2].id, &BTreeSet::new())
    {
        Ok(_) => false,
        Err(Error::NoArc { .. }) => true,
        Err(e) => return Err(e),
    };
    let sys = ends_order(&mini)?;
    let ek = sys.ends_of(&mini.continua()[0].id);
    let el = sys.ends_of(&mini.continua()[1].id);
    let em = sys.ends_of(&mini.continua()[2].id);
    let witnesses = sys.order.separates(&ek, &el, &em);
    Ok(SeparationReport {
        geometric,
        order_theoretic: witnesses.is_some(),
        witnesses,
    })
}

/// Of all the sub-arcs of an embedded grid circle running from `k` to `m`,
/// the outermost one: the arc whose positive side meets the circle only in
/// pieces that start and end on the same set.
pub fn outermost_arc(circle: &[Cell], k: &Continuum, m: &Continuum) -> Result<GridArc, Error> {
    let n = circle.len();
    if n < 4 {
        return Err(Error::InvalidScenario("circle too short".into()));
    }
    let mut seen = BTreeSet::new();
    for c in circle {
        if !seen.insert(*c) {
            return Err(Error::InvalidScenario(format!(
                "circle revisits cell {c}"
            )));
        }
    }
    for i in 0..n {
        if !circle[i].is_adjacent(&circle[(i + 1) % n]) {
            return Err(Error::InvalidScenario(
                "circle cells are not consecutive".into(),
            ));
        }
    }
    // Normalize to counterclockwise orientation.
    let mut cells: Vec<Cell> = circle.to_vec();
    let shoelace: i64 = (0..n)
        .map(|i| {
            let a = cells[i];
            let b = cells[(i + 1) % n];
            a.x * b.y - b.x * a.y
        })
        .sum();
    if shoelace < 0 {
        cells.reverse();
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Label {
        InK,
        InM,
        Free,
    }
    let labels: Vec<Label> = cells
        .iter()
        .map(|c| {
            if k.contains(c) {
                Label::InK
            } else if m.contains(c) {
                Label::InM
            } else {
                Label::Free
            }
        })
        .collect();
    if !labels.iter().any(|l| *l == Label::InK) {
        return Err(Error::NoCrossing(k.id.clone()));
    }
    if !labels.iter().any(|l| *l == Label::InM) {
        return Err(Error::NoCrossing(m.id.clone()));
    }
    // Maximal free runs, with the labels just before and after each run.
    let mut runs: Vec<(Label, Vec<Cell>, Label)> = Vec::new();
    let start = (0..n)
        .find(|&i| labels[i] != Label::Free)
        .expect("circle meets k and m");
    let mut i = start;
    loop {
        let next = (i + 1) % n;
        if labels[next] == Label::Free {
            let from = labels[i];
            let mut run = Vec::new();
            let mut j = next;
            while labels[j] == Label::Free {
                run.push(cells[j]);
                j = (j + 1) % n;
            }
            runs.push((from, run, labels[j]));
            i = j;
        } else {
            i = next;
        }
        if i == start {
            break;
        }
    }
    let mut candidates: Vec<GridArc> = Vec::new();
    for (from, run, to) in &runs {
        match (from, to) {
            (Label::InK, Label::InM) => candidates.push(GridArc {
                cells: run.clone(),
                source: k.id.clone(),
                target: m.id.clone(),
            }),
            (Label::InM, Label::InK) => {
                let mut rev = run.clone();
                rev.reverse();
                candidates.push(GridArc {
                    cells: rev,
                    source: k.id.clone(),
                    target: m.id.clone(),
                });
            }
            _ => {}
        }
    }
    if candidates.is_empty() {
        return Err(Error::NoCrossing(format!(
            "no sub-arc of the circle runs from `{}` to `{}`",
            k.id, m.id
        )));
    }
    // The candidates are linearly ordered by "lies on the positive side
    // of"; the outermost arc is the maximum.
    let above = |lo: &GridArc, hi: &GridArc| -> Result<bool, Error> {
        let regions = side_regions(k, m, lo)?;
        Ok(hi.cells.iter().all(|c| regions.positive.contains(c)))
    };
    let mut best = 0usize;
    for c in 1..candidates.len() {
        if above(&candidates[best], &candidates[c])? {
            best = c;
        }
    }
    for c in 0..candidates.len() {
        if c != best && !above(&candidates[c], &candidates[best])? {
            return Err(Error::Geometry(
                "sub-arcs are not linearly ordered by side containment".into(),
            ));
        }
    }
    Ok(candidates.swap_remove(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_model::{star, Direction};

    fn upray(id: &str, x: i64) -> Continuum {
        star(id, Cell::new(x, 0), &[Direction::PosY])
    }

    #[test]
    fn side_regions_of_base_arc() {
        let k = upray("k", 0);
        let m = upray("m", 6);
        let mini = Scenario::new(vec![k.clone(), m.clone()]).unwrap();
        let arc = find_arc(&mini, "k", "m", &BTreeSet::new()).unwrap();
        let regions = side_regions(&k, &m, &arc).unwrap();
        assert!(regions.positive.contains(&Cell::new(3, 10)));
        assert!(regions.negative.contains(&Cell::new(3, -10)));
        assert!(regions.positive.is_unbounded());
        assert!(regions.negative.is_unbounded());
    }

    #[test]
    fn middle_ray_is_on_the_positive_side() {
        let k = upray("k", 0);
        let l = upray("l", 2);
        let m = upray("m", 4);
        assert_eq!(triad_orient(&k, &l, &m).unwrap(), 1);
        assert_eq!(triad_orient(&m, &l, &k).unwrap(), -1);
    }

    #[test]
    fn separating_line_is_not_a_triad() {
        let wall = star(
            "wall",
            Cell::new(0, 0),
            &[Direction::PosX, Direction::NegX],
        );
        let l = star("l", Cell::new(0, 4), &[Direction::PosY]);
        let m = star("m", Cell::new(0, -4), &[Direction::NegY]);
        match triad_orient(&l, &wall, &m) {
            Err(Error::NotATriad { separator }) => assert_eq!(separator, "wall"),
            other => panic!("expected NotATriad, got {other:?}"),
        }
    }

    #[test]
    fn ends_order_of_four_ray_wheel_is_cyclic() {
        let wheel = star(
            "w",
            Cell::new(0, 0),
            &[
                Direction::PosX,
                Direction::PosY,
                Direction::NegX,
                Direction::NegY,
            ],
        );
        let s = Scenario::new(vec![wheel]).unwrap();
        let sys = ends_order(&s).unwrap();
        assert_eq!(sys.ends.len(), 4);
        assert!(sys.order.verify_axioms().unwrap().is_valid());
    }

    #[test]
    fn order_is_stable_under_larger_distinguishing_radius() {
        let s = Scenario::new(vec![upray("a", 0), upray("b", 3), star("c", Cell::new(-4, -4), &[Direction::NegY])])
            .unwrap();
        let base = EndSystem::build(&s, 0).unwrap();
        for offset in 1..=3 {
            let other = EndSystem::build(&s, offset).unwrap();
            for a in &base.ends {
                for b in &base.ends {
                    for c in &base.ends {
                        if a != b && b != c && a != c {
                            assert_eq!(
                                base.order.orient(a, b, c),
                                other.order.orient(a, b, c)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn detect_separation_both_routes_agree() {
        let wall = star(
            "wall",
            Cell::new(0, 0),
            &[Direction::PosX, Direction::NegX],
        );
        let l = star("l", Cell::new(0, 4), &[Direction::PosY]);
        let m = star("m", Cell::new(0, -4), &[Direction::NegY]);
        let rep = detect_separation(&wall, &l, &m).unwrap();
        assert!(rep.geometric);
        assert!(rep.order_theoretic);
        assert!(rep.witnesses.is_some());

        let a = upray("a", -4);
        let bq = upray("b", 0);
        let c = upray("c", 4);
        let rep2 = detect_separation(&bq, &a, &c).unwrap();
        assert!(!rep2.geometric);
        assert!(!rep2.order_theoretic);
    }

    #[test]
    fn outermost_arc_on_a_rectangle() {
        // Vertical lines at x = 0 and x = 6, rectangle circle around the
        // origin crossing both.
        let k = star("k", Cell::new(0, 0), &[Direction::PosY, Direction::NegY]);
        let m = star("m", Cell::new(6, 0), &[Direction::PosY, Direction::NegY]);
        let (x0, x1, y0, y1) = (-2i64, 8i64, -3i64, 3i64);
        let mut circle = Vec::new();
        for x in x0..=x1 {
            circle.push(Cell::new(x, y0));
        }
        for y in (y0 + 1)..=y1 {
            circle.push(Cell::new(x1, y));
        }
        for x in (x0..x1).rev() {
            circle.push(Cell::new(x, y1));
        }
        for y in ((y0 + 1)..y1).rev() {
            circle.push(Cell::new(x0, y));
        }
        let arc = outermost_arc(&circle, &k, &m).unwrap();
        // Two candidate sub-arcs, along the top and the bottom of the strip
        // between the lines. The outermost one is the top arc: nothing of
        // the circle lies on its positive side, while the bottom arc sees
        // the top one on its own positive side.
        assert!(arc.cells.iter().all(|c| c.y == y1));
        let regions = side_regions(&k, &m, &arc).unwrap();
        assert!(regions.negative.contains(&Cell::new(3, y0)));
    }
}
