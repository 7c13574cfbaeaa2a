//! Integer grid model of the plane and of finitely-described unbounded
//! continua: a finite core plus finitely many rays, each ray a finite path
//! that continues as an infinite axis-parallel tail. All coordinates are
//! exact `i64`s; a cell is a unit square, adjacency is 4-adjacency.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub x: i64,
    pub y: i64,
}

impl Cell {
    pub fn new(x: i64, y: i64) -> Cell {
        Cell { x, y }
    }

    /// Chebyshev distance to the origin; the cell lies in the square of
    /// radius `r` exactly when `self.radius() <= r`.
    pub fn radius(&self) -> i64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn neighbors4(&self) -> [Cell; 4] {
        [
            Cell::new(self.x + 1, self.y),
            Cell::new(self.x - 1, self.y),
            Cell::new(self.x, self.y + 1),
            Cell::new(self.x, self.y - 1),
        ]
    }

    pub fn is_adjacent(&self, other: &Cell) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Cell {
        Cell::new(self.x + dx, self.y + dy)
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "+x")]
    PosX,
    #[serde(rename = "-x")]
    NegX,
    #[serde(rename = "+y")]
    PosY,
    #[serde(rename = "-y")]
    NegY,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::PosX,
        Direction::NegX,
        Direction::PosY,
        Direction::NegY,
    ];

    pub fn delta(&self) -> (i64, i64) {
        match self {
            Direction::PosX => (1, 0),
            Direction::NegX => (-1, 0),
            Direction::PosY => (0, 1),
            Direction::NegY => (0, -1),
        }
    }

    pub fn is_horizontal(&self) -> bool {
        matches!(self, Direction::PosX | Direction::NegX)
    }

    /// Counterclockwise quarter turn.
    pub fn rotate_ccw(&self) -> Direction {
        match self {
            Direction::PosX => Direction::PosY,
            Direction::PosY => Direction::NegX,
            Direction::NegX => Direction::NegY,
            Direction::NegY => Direction::PosX,
        }
    }

    pub fn rotate_ccw_by(&self, quarter_turns: u8) -> Direction {
        let mut d = *self;
        for _ in 0..(quarter_turns % 4) {
            d = d.rotate_ccw();
        }
        d
    }

    pub fn reverse(&self) -> Direction {
        self.rotate_ccw_by(2)
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Direction::PosX => "+x",
            Direction::NegX => "-x",
            Direction::PosY => "+y",
            Direction::NegY => "-y",
        };
        f.write_str(s)
    }
}

/// The infinite straight part of a ray: all cells `(t, cross)` (horizontal)
/// or `(cross, t)` (vertical) with `t` on the appropriate side of `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TailLine {
    pub direction: Direction,
    /// The fixed perpendicular coordinate of the line.
    pub cross: i64,
    /// The first coordinate along `direction` that belongs to the tail.
    pub start: i64,
}

impl TailLine {
    pub fn contains(&self, c: &Cell) -> bool {
        match self.direction {
            Direction::PosX => c.y == self.cross && c.x >= self.start,
            Direction::NegX => c.y == self.cross && c.x <= self.start,
            Direction::PosY => c.x == self.cross && c.y >= self.start,
            Direction::NegY => c.x == self.cross && c.y <= self.start,
        }
    }

    pub fn cell_at(&self, t: i64) -> Cell {
        match self.direction {
            Direction::PosX | Direction::NegX => Cell::new(t, self.cross),
            Direction::PosY | Direction::NegY => Cell::new(self.cross, t),
        }
    }

    /// The single cell where the tail crosses the boundary ring of the
    /// square of radius `r`. Only meaningful when `r > max(|cross|, |start|)`
    /// or the crossing would not be unique.
    pub fn ring_cell(&self, r: i64) -> Cell {
        match self.direction {
            Direction::PosX => Cell::new(r, self.cross),
            Direction::NegX => Cell::new(-r, self.cross),
            Direction::PosY => Cell::new(self.cross, r),
            Direction::NegY => Cell::new(self.cross, -r),
        }
    }

    pub fn cells_within(&self, b: i64) -> Vec<Cell> {
        let mut out = Vec::new();
        let (lo, hi) = match self.direction {
            Direction::PosX | Direction::PosY => (self.start, b),
            Direction::NegX | Direction::NegY => (-b, self.start),
        };
        let mut t = lo;
        while t <= hi {
            let c = self.cell_at(t);
            if c.radius() <= b {
                out.push(c);
            }
            t += 1;
        }
        out
    }

    pub fn translate(&self, dx: i64, dy: i64) -> TailLine {
        let (dc, ds) = if self.direction.is_horizontal() {
            (dy, dx)
        } else {
            (dx, dy)
        };
        TailLine {
            direction: self.direction,
            cross: self.cross + dc,
            start: self.start + ds,
        }
    }

    /// True when `other` covers a final segment of `self` (same line, same
    /// direction, start at least as deep).
    pub fn is_suffix_of(&self, other: &TailLine) -> bool {
        self.direction == other.direction
            && self.cross == other.cross
            && match self.direction {
                Direction::PosX | Direction::PosY => self.start >= other.start,
                Direction::NegX | Direction::NegY => self.start <= other.start,
            }
    }
}

/// A ray: a finite simple 4-connected path followed by the infinite
/// axis-parallel continuation of its last cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub path: Vec<Cell>,
    pub direction: Direction,
}

impl Ray {
    pub fn anchor(&self) -> Cell {
        *self.path.last().expect("ray path is nonempty")
    }

    pub fn tail_line(&self) -> TailLine {
        let a = self.anchor();
        let (d, cross, along) = match self.direction {
            Direction::PosX => (Direction::PosX, a.y, a.x + 1),
            Direction::NegX => (Direction::NegX, a.y, a.x - 1),
            Direction::PosY => (Direction::PosY, a.x, a.y + 1),
            Direction::NegY => (Direction::NegY, a.x, a.y - 1),
        };
        TailLine {
            direction: d,
            cross,
            start: along,
        }
    }

    pub fn contains(&self, c: &Cell) -> bool {
        self.path.contains(c) || self.tail_line().contains(c)
    }

    pub fn cells_within(&self, b: i64) -> Vec<Cell> {
        let mut out: Vec<Cell> = self.path.iter().filter(|c| c.radius() <= b).copied().collect();
        out.extend(self.tail_line().cells_within(b));
        out
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Ray {
        Ray {
            path: self.path.iter().map(|c| c.translate(dx, dy)).collect(),
            direction: self.direction,
        }
    }
}

/// A closed unbounded 4-connected subset of the grid plane with a finite
/// description: a finite core plus finitely many rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Continuum {
    pub id: String,
    pub core: BTreeSet<Cell>,
    pub rays: Vec<Ray>,
}

impl Continuum {
    pub fn contains(&self, c: &Cell) -> bool {
        self.core.contains(c) || self.rays.iter().any(|r| r.contains(c))
    }

    /// All core and path cells (everything except the infinite tails).
    pub fn finite_cells(&self) -> BTreeSet<Cell> {
        let mut out = self.core.clone();
        for r in &self.rays {
            out.extend(r.path.iter().copied());
        }
        out
    }

    pub fn cells_within(&self, b: i64) -> BTreeSet<Cell> {
        let mut out: BTreeSet<Cell> = self
            .core
            .iter()
            .filter(|c| c.radius() <= b)
            .copied()
            .collect();
        for r in &self.rays {
            out.extend(r.cells_within(b));
        }
        out
    }

    pub fn tail_lines(&self) -> Vec<TailLine> {
        self.rays.iter().map(|r| r.tail_line()).collect()
    }

    pub fn max_finite_radius(&self) -> i64 {
        self.finite_cells()
            .iter()
            .map(|c| c.radius())
            .max()
            .unwrap_or(0)
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Continuum {
        Continuum {
            id: self.id.clone(),
            core: self.core.iter().map(|c| c.translate(dx, dy)).collect(),
            rays: self.rays.iter().map(|r| r.translate(dx, dy)).collect(),
        }
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        Error::MalformedContinuum {
            id: self.id.clone(),
            reason: reason.into(),
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.rays.is_empty() {
            return Err(self.err("a continuum must be unbounded: it needs at least one ray"));
        }
        if self.core.is_empty() && self.rays.len() != 1 {
            return Err(self.err("empty core requires exactly one ray"));
        }
        for (i, ray) in self.rays.iter().enumerate() {
            if ray.path.is_empty() {
                return Err(self.err(format!("ray {i} has an empty path")));
            }
            let mut seen = BTreeSet::new();
            for c in &ray.path {
                if !seen.insert(*c) {
                    return Err(self.err(format!("ray {i} path revisits cell {c}")));
                }
            }
            for w in ray.path.windows(2) {
                if !w[0].is_adjacent(&w[1]) {
                    return Err(self.err(format!(
                        "ray {i} path cells {} and {} are not adjacent",
                        w[0], w[1]
                    )));
                }
            }
            if !self.core.is_empty() {
                if !self.core.contains(&ray.path[0]) {
                    return Err(self.err(format!(
                        "ray {i} path must start at a core cell, got {}",
                        ray.path[0]
                    )));
                }
                for c in &ray.path[1..] {
                    if self.core.contains(c) {
                        return Err(self.err(format!("ray {i} path re-enters the core at {c}")));
                    }
                }
            }
            // The infinite tail must not re-enter the finite part of the set.
            let tl = ray.tail_line();
            for c in self.core.iter() {
                if tl.contains(c) {
                    return Err(self.err(format!("ray {i} tail re-enters the core at {c}")));
                }
            }
            for (j, other) in self.rays.iter().enumerate() {
                for c in &other.path {
                    if tl.contains(c) {
                        return Err(self.err(format!(
                            "ray {i} tail re-enters the path of ray {j} at {c}"
                        )));
                    }
                }
            }
        }
        // Rays are pairwise disjoint outside the core.
        for i in 0..self.rays.len() {
            for j in (i + 1)..self.rays.len() {
                let (a, b) = (&self.rays[i], &self.rays[j]);
                for c in a.path.iter().skip(if self.core.is_empty() { 0 } else { 1 }) {
                    if b.contains(c) && !self.core.contains(c) {
                        return Err(
                            self.err(format!("rays {i} and {j} share the non-core cell {c}"))
                        );
                    }
                }
                match tail_pair_events(&a.tail_line(), &b.tail_line()) {
                    Ok(events) => {
                        // Shared tail cells are forbidden within one continuum.
                        for c in &events.shared {
                            return Err(
                                self.err(format!("tails of rays {i} and {j} share cell {c}"))
                            );
                        }
                    }
                    Err(TailClash::UnboundedOverlap) => {
                        return Err(self.err(format!("tails of rays {i} and {j} overlap forever")))
                    }
                    // Forever-adjacent tails inside one continuum are legal:
                    // the two rays then converge to the same end.
                    Err(TailClash::ForeverAdjacent) => {}
                }
            }
        }
        // The finite part must be 4-connected (tails attach to path anchors).
        let finite = self.finite_cells();
        if let Some(first) = finite.iter().next() {
            let mut seen = BTreeSet::new();
            let mut queue = VecDeque::new();
            seen.insert(*first);
            queue.push_back(*first);
            while let Some(c) = queue.pop_front() {
                for n in c.neighbors4() {
                    if finite.contains(&n) && seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
            if seen.len() != finite.len() {
                return Err(self.err("core plus ray paths is not 4-connected"));
            }
        }
        Ok(())
    }
}

/// Bounded interaction cells between two tail lines.
pub(crate) struct TailEvents {
    pub shared: Vec<Cell>,
    pub adjacent: Vec<Cell>,
}

pub(crate) enum TailClash {
    /// Same line, same direction: the tails coincide from some point on.
    UnboundedOverlap,
    /// Parallel lines one apart, same direction: adjacent forever.
    ForeverAdjacent,
}

pub(crate) fn tail_pair_events(a: &TailLine, b: &TailLine) -> Result<TailEvents, TailClash> {
    let mut ev = TailEvents {
        shared: Vec::new(),
        adjacent: Vec::new(),
    };
    if a.direction.is_horizontal() == b.direction.is_horizontal() {
        let dc = (a.cross - b.cross).abs();
        let same_dir = a.direction == b.direction;
        match (dc, same_dir) {
            (0, true) => return Err(TailClash::UnboundedOverlap),
            (1, true) => return Err(TailClash::ForeverAdjacent),
            (0, false) => {
                // Opposite directions on one line: a bounded overlap segment
                // (possibly empty).
                let (pos, neg) = if matches!(a.direction, Direction::PosX | Direction::PosY) {
                    (a, b)
                } else {
                    (b, a)
                };
                if pos.start <= neg.start {
                    ev.shared.push(pos.cell_at(pos.start));
                    ev.shared.push(pos.cell_at(neg.start));
                }
            }
            (1, false) => {
                let (pos, neg) = if matches!(a.direction, Direction::PosX | Direction::PosY) {
                    (a, b)
                } else {
                    (b, a)
                };
                if pos.start <= neg.start {
                    ev.adjacent.push(pos.cell_at(pos.start));
                    ev.adjacent.push(pos.cell_at(neg.start));
                    ev.adjacent.push(neg.cell_at(pos.start));
                    ev.adjacent.push(neg.cell_at(neg.start));
                }
            }
            _ => {}
        }
        return Ok(ev);
    }
    // Perpendicular lines: everything happens near the virtual crossing
    // point. `v` is the vertical line, `h` the horizontal one.
    let (v, h) = if a.direction.is_horizontal() {
        (b, a)
    } else {
        (a, b)
    };
    for dy in -1..=1 {
        let c = Cell::new(v.cross, h.cross + dy);
        if v.contains(&c) {
            if dy == 0 && h.contains(&c) {
                ev.shared.push(c);
            }
            for n in c.neighbors4() {
                if h.contains(&n) {
                    ev.adjacent.push(c);
                    ev.adjacent.push(n);
                }
            }
        }
    }
    for dx in [-1i64, 1] {
        let c = Cell::new(v.cross + dx, h.cross);
        if h.contains(&c) {
            for n in c.neighbors4() {
                if v.contains(&n) {
                    ev.adjacent.push(c);
                    ev.adjacent.push(n);
                }
            }
        }
    }
    Ok(ev)
}

/// A deterministic arc between two continua: a 4-connected simple path whose
/// first cell is adjacent to the source set, last cell adjacent to the
/// target set, and whose cells avoid both sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridArc {
    pub cells: Vec<Cell>,
    pub source: String,
    pub target: String,
}

impl GridArc {
    pub fn max_radius(&self) -> i64 {
        self.cells.iter().map(|c| c.radius()).max().unwrap_or(0)
    }
}

/// A full scene: a finite list of continua forming a (generalized)
/// decomposition of the plane, plus the stabilization radius beyond which
/// every set is a disjoint union of straight, pairwise non-adjacent tails.
#[derive(Debug, Clone)]
pub struct Scenario {
    continua: Vec<Continuum>,
    r0: i64,
}

impl Scenario {
    pub fn new(continua: Vec<Continuum>) -> Result<Scenario, Error> {
        if continua.is_empty() {
            return Err(Error::InvalidScenario("no continua".into()));
        }
        let mut ids = BTreeSet::new();
        for k in &continua {
            k.validate()?;
            if !ids.insert(k.id.clone()) {
                return Err(Error::InvalidScenario(format!("duplicate id `{}`", k.id)));
            }
        }
        let r0 = stabilization_radius_centered(&continua, Cell::new(0, 0))?;
        // Pairwise disjointness. Every tail interaction is inside the
        // stabilization square, so checking shared cells there is enough.
        for i in 0..continua.len() {
            let cells = continua[i].cells_within(r0 + 1);
            for j in (i + 1)..continua.len() {
                if cells.iter().any(|c| continua[j].contains(c)) {
                    return Err(Error::InvalidScenario(format!(
                        "continua `{}` and `{}` intersect",
                        continua[i].id, continua[j].id
                    )));
                }
            }
        }
        Ok(Scenario { continua, r0 })
    }

    pub fn continua(&self) -> &[Continuum] {
        &self.continua
    }

    pub fn r0(&self) -> i64 {
        self.r0
    }

    /// Radius of the box inside which arcs are searched for.
    pub fn search_radius(&self) -> i64 {
        self.r0 + 2
    }

    pub fn index(&self, id: &str) -> Result<usize, Error> {
        self.continua
            .iter()
            .position(|k| k.id == id)
            .ok_or_else(|| Error::InvalidScenario(format!("unknown continuum `{id}`")))
    }

    pub fn is_obstacle(&self, c: &Cell) -> bool {
        self.continua.iter().any(|k| k.contains(c))
    }

    pub fn all_tail_lines(&self) -> Vec<(usize, usize, TailLine)> {
        let mut out = Vec::new();
        for (i, k) in self.continua.iter().enumerate() {
            for (j, r) in k.rays.iter().enumerate() {
                out.push((i, j, r.tail_line()));
            }
        }
        out
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Result<Scenario, Error> {
        Scenario::new(
            self.continua
                .iter()
                .map(|k| k.translate(dx, dy))
                .collect(),
        )
    }

    /// Subdivide the grid by two: cell `c` becomes `2c`, and the midpoint
    /// between adjacent cells of one set is filled in. Distinct continua
    /// that were merely adjacent gain a one-cell corridor between them.
    pub fn refine(&self) -> Result<Scenario, Error> {
        let continua = self.continua.iter().map(refine_continuum).collect();
        Scenario::new(continua)
    }

    /// Refine until no two distinct continua have adjacent cells inside the
    /// search box, so that arcs can pass between anything that is not
    /// actually joined. Gives up after `max_rounds` subdivisions.
    pub fn with_corridors(&self, max_rounds: usize) -> Result<Scenario, Error> {
        let mut cur = self.clone();
        for _ in 0..=max_rounds {
            if !cur.has_touching_pair() {
                return Ok(cur);
            }
            cur = cur.refine()?;
        }
        Err(Error::DegenerateArc(format!(
            "continua still touching after {max_rounds} grid subdivisions"
        )))
    }

    fn has_touching_pair(&self) -> bool {
        let b = self.search_radius();
        for i in 0..self.continua.len() {
            let cells = self.continua[i].cells_within(b);
            for j in 0..self.continua.len() {
                if i == j {
                    continue;
                }
                let other = &self.continua[j];
                for c in &cells {
                    // Diagonal contact counts: it pinches arcs and their
                    // side regions just like edge contact does.
                    for dx in -1..=1 {
                        for dy in -1..=1 {
                            if other.contains(&Cell::new(c.x + dx, c.y + dy)) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }
}

fn refine_continuum(k: &Continuum) -> Continuum {
    let scale = |c: &Cell| Cell::new(2 * c.x, 2 * c.y);
    let mid = |a: &Cell, b: &Cell| Cell::new(a.x + b.x, a.y + b.y);
    let mut core: BTreeSet<Cell> = k.core.iter().map(scale).collect();
    let core_cells: Vec<Cell> = k.core.iter().copied().collect();
    for a in &core_cells {
        for n in a.neighbors4() {
            if k.core.contains(&n) {
                core.insert(mid(a, &n));
            }
        }
    }
    let rays = k
        .rays
        .iter()
        .map(|r| {
            let mut path = Vec::new();
            for (i, c) in r.path.iter().enumerate() {
                if i > 0 {
                    path.push(mid(&r.path[i - 1], c));
                }
                path.push(scale(c));
            }
            Ray {
                path,
                direction: r.direction,
            }
        })
        .collect();
    Continuum {
        id: k.id.clone(),
        core,
        rays,
    }
}

/// Least radius `R` (of squares centered at `center`) past which the scene
/// has settled: every finite cell is inside the square, the tails of
/// different rays no longer meet or touch, so outside the square each
/// continuum is a disjoint union of straight tails and the cyclic order of
/// their boundary exits no longer changes.
pub fn stabilization_radius_centered(
    continua: &[Continuum],
    center: Cell,
) -> Result<i64, Error> {
    let rad = |c: &Cell| (c.x - center.x).abs().max((c.y - center.y).abs());
    let mut r = 0i64;
    for k in continua {
        for c in k.finite_cells() {
            r = r.max(rad(&c));
        }
    }
    // Pairwise tail interactions, over all rays of all continua.
    let mut tails: Vec<(usize, TailLine)> = Vec::new();
    for (i, k) in continua.iter().enumerate() {
        for ray in &k.rays {
            tails.push((i, ray.tail_line()));
        }
    }
    for i in 0..tails.len() {
        for j in (i + 1)..tails.len() {
            let (ka, a) = &tails[i];
            let (kb, b) = &tails[j];
            match tail_pair_events(a, b) {
                Ok(ev) => {
                    for c in ev.shared.iter().chain(ev.adjacent.iter()) {
                        r = r.max(rad(c));
                    }
                }
                Err(TailClash::UnboundedOverlap) => {
                    return Err(Error::InvalidScenario(format!(
                        "two ray tails coincide from some point on ({} / {})",
                        continua[*ka].id, continua[*kb].id
                    )));
                }
                Err(TailClash::ForeverAdjacent) => {
                    return Err(Error::InvalidScenario(format!(
                        "two ray tails are adjacent forever ({} / {})",
                        continua[*ka].id, continua[*kb].id
                    )));
                }
            }
        }
    }
    // Tails meeting or touching the finite part of a different continuum.
    for (i, k) in continua.iter().enumerate() {
        for (j, tl) in &tails {
            if i == *j {
                continue;
            }
            for c in k.finite_cells() {
                if tl.contains(&c) {
                    r = r.max(rad(&c));
                }
                for n in c.neighbors4() {
                    if tl.contains(&n) {
                        r = r.max(rad(&c)).max(rad(&n));
                    }
                }
            }
        }
    }
    Ok(r)
}

pub fn stabilization_radius(continua: &[Continuum]) -> Result<i64, Error> {
    stabilization_radius_centered(continua, Cell::new(0, 0))
}

/// 4-connected components of a finite cell set, sorted by their minimum
/// cell so the result is deterministic.
pub fn connected_components(cells: &BTreeSet<Cell>) -> Vec<BTreeSet<Cell>> {
    let mut unseen: BTreeSet<Cell> = cells.clone();
    let mut comps = Vec::new();
    while let Some(&start) = unseen.iter().next() {
        let mut comp = BTreeSet::new();
        let mut queue = VecDeque::new();
        unseen.remove(&start);
        comp.insert(start);
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            for n in c.neighbors4() {
                if unseen.remove(&n) {
                    comp.insert(n);
                    queue.push_back(n);
                }
            }
        }
        comps.push(comp);
    }
    comps.sort_by_key(|c| *c.iter().next().unwrap());
    comps
}

/// Dense occupancy grid over the square of radius `b`: one bitmask per cell,
/// one bit per painted set. Cells outside the box count as blocked.
pub struct ObstacleGrid {
    pub b: i64,
    w: i64,
    bits: Vec<u64>,
}

impl ObstacleGrid {
    pub fn new(b: i64) -> ObstacleGrid {
        let w = 2 * b + 1;
        ObstacleGrid {
            b,
            w,
            bits: vec![0; (w * w) as usize],
        }
    }

    pub fn idx(&self, c: &Cell) -> Option<usize> {
        if c.radius() > self.b {
            None
        } else {
            Some(((c.y + self.b) * self.w + (c.x + self.b)) as usize)
        }
    }

    pub fn cell(&self, idx: usize) -> Cell {
        let x = (idx as i64) % self.w - self.b;
        let y = (idx as i64) / self.w - self.b;
        Cell::new(x, y)
    }

    pub fn get(&self, c: &Cell) -> u64 {
        match self.idx(c) {
            Some(i) => self.bits[i],
            None => u64::MAX,
        }
    }

    pub fn paint(&mut self, bit: u32, cells: impl IntoIterator<Item = Cell>) {
        for c in cells {
            if let Some(i) = self.idx(&c) {
                self.bits[i] |= 1 << bit;
            }
        }
    }

    pub fn paint_continuum(&mut self, bit: u32, k: &Continuum) {
        self.paint(bit, k.cells_within(self.b));
    }

    pub fn paint_scenario(scenario: &Scenario, b: i64) -> ObstacleGrid {
        let mut g = ObstacleGrid::new(b);
        for (i, k) in scenario.continua().iter().enumerate() {
            g.paint_continuum(i as u32, k);
        }
        g
    }
}

/// Shortest free path whose first cell touches a `source`-marked cell and
/// whose last cell touches a `target`-marked cell, avoiding every cell whose
/// bitmask meets `block`. Ties are broken lexicographically, so the result
/// is a deterministic function of the inputs. `allowed` further restricts
/// which free cells may be used.
pub(crate) fn shortest_arc(
    grid: &ObstacleGrid,
    source: u64,
    target: u64,
    block: u64,
    allowed: Option<&dyn Fn(&Cell) -> bool>,
) -> Option<Vec<Cell>> {
    let free = |c: &Cell| -> bool {
        grid.idx(c).is_some()
            && grid.get(c) & block == 0
            && allowed.map_or(true, |f| f(c))
    };
    let n = grid.bits.len();
    let mut dist: Vec<i32> = vec![-1; n];
    let mut queue = VecDeque::new();
    // Breadth-first from the target side: dist 0 = free cells adjacent to
    // the target set.
    for i in 0..n {
        let c = grid.cell(i);
        if free(&c)
            && c.neighbors4()
                .iter()
                .any(|x| grid.idx(x).is_some() && grid.get(x) & target != 0)
        {
            dist[i] = 0;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let c = grid.cell(i);
        for nb in c.neighbors4() {
            if let Some(j) = grid.idx(&nb) {
                if dist[j] < 0 && free(&nb) {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
    }
    // Best start: adjacent to the source, minimal distance, then minimal
    // cell in lexicographic order.
    let mut best: Option<(i32, Cell)> = None;
    for i in 0..n {
        if dist[i] < 0 {
            continue;
        }
        let c = grid.cell(i);
        if c
            .neighbors4()
            .iter()
            .any(|x| grid.idx(x).is_some() && grid.get(x) & source != 0)
        {
            let cand = (dist[i], c);
            if best.map_or(true, |b| cand < b) {
                best = Some(cand);
            }
        }
    }
    let (d0, start) = best?;
    let mut path = vec![start];
    let mut cur = start;
    let mut d = d0;
    while d > 0 {
        let mut next: Option<Cell> = None;
        for nb in cur.neighbors4() {
            if let Some(j) = grid.idx(&nb) {
                if dist[j] == d - 1 && next.map_or(true, |n| nb < n) {
                    next = Some(nb);
                }
            }
        }
        cur = next.expect("breadth-first predecessor exists");
        path.push(cur);
        d -= 1;
    }
    Some(path)
}

/// A shortest arc between two continua of the scenario, avoiding every
/// listed continuum and the explicitly forbidden cells. Deterministic:
/// shortest length first, lexicographic tie-break.
pub fn find_arc(
    scenario: &Scenario,
    from: &str,
    to: &str,
    forbidden: &BTreeSet<Cell>,
) -> Result<GridArc, Error> {
    let ki = scenario.index(from)?;
    let mi = scenario.index(to)?;
    let b = scenario.search_radius();
    let mut grid = ObstacleGrid::paint_scenario(scenario, b);
    const FORBIDDEN_BIT: u32 = 63;
    grid.paint(FORBIDDEN_BIT, forbidden.iter().copied());
    let source = 1u64 << ki;
    let target = 1u64 << mi;
    let cells = shortest_arc(&grid, source, target, u64::MAX, None).ok_or(Error::NoArc {
        from: from.to_string(),
        to: to.to_string(),
    })?;
    Ok(GridArc {
        cells,
        source: from.to_string(),
        target: to.to_string(),
    })
}

/// Counterclockwise coordinate of a boundary-ring cell along the perimeter
/// of the square of radius `r`, starting at the corner `(r, -r)`.
pub fn perimeter_ccw_coord(c: &Cell, r: i64) -> Option<i64> {
    if c.radius() != r || r == 0 {
        return None;
    }
    if c.x == r {
        return Some(c.y + r);
    }
    if c.y == r {
        return Some(2 * r + (r - c.x));
    }
    if c.x == -r {
        return Some(4 * r + (r - c.y));
    }
    Some(6 * r + (c.x + r))
}

/// Inverse of [`perimeter_ccw_coord`]: the ring cell at a counterclockwise
/// perimeter coordinate, taken modulo the perimeter length `8r`.
pub fn perimeter_cell(coord: i64, r: i64) -> Cell {
    let c = coord.rem_euclid(8 * r);
    if c < 2 * r {
        Cell::new(r, -r + c)
    } else if c < 4 * r {
        Cell::new(r - (c - 2 * r), r)
    } else if c < 6 * r {
        Cell::new(-r, r - (c - 4 * r))
    } else {
        Cell::new(-r + (c - 6 * r), -r)
    }
}

/// Convenience: a continuum made of straight rays from a common base cell.
pub fn star(id: &str, base: Cell, dirs: &[Direction]) -> Continuum {
    let mut core = BTreeSet::new();
    core.insert(base);
    Continuum {
        id: id.to_string(),
        core,
        rays: dirs
            .iter()
            .map(|d| Ray {
                path: vec![base],
                direction: *d,
            })
            .collect(),
    }
}
