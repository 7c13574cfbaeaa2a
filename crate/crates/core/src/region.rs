//! Exact representation of unbounded cell regions that are only materialized
//! inside a finite box. What lies beyond the box is described either by
//! tail lines (for subsets of a continuum) or by the box-boundary cells the
//! region owns (for components of a complement, which fan out into sectors).

use std::collections::BTreeSet;

use crate::plane_model::{perimeter_ccw_coord, Cell, TailLine};

#[derive(Debug, Clone)]
pub enum Outside {
    /// Beyond the box the region consists exactly of these tails.
    Tails(BTreeSet<TailLine>),
    /// Beyond the box the region continues straight outward from its
    /// boundary-ring cells; `world_tails` are the only obstacles out there.
    Sectors { world_tails: Vec<TailLine> },
}

#[derive(Debug, Clone)]
pub struct CellRegion {
    pub cells: BTreeSet<Cell>,
    pub box_radius: i64,
    pub outside: Outside,
}

impl CellRegion {
    pub fn is_unbounded(&self) -> bool {
        match &self.outside {
            Outside::Tails(t) => !t.is_empty(),
            Outside::Sectors { .. } => {
                self.cells.iter().any(|c| c.radius() == self.box_radius)
            }
        }
    }

    /// Exact membership for an arbitrary cell, including cells beyond the
    /// materialized box.
    pub fn contains(&self, c: &Cell) -> bool {
        if c.radius() <= self.box_radius {
            return self.cells.contains(c);
        }
        match &self.outside {
            Outside::Tails(tails) => tails.iter().any(|t| t.contains(c)),
            Outside::Sectors { world_tails } => {
                if world_tails.iter().any(|t| t.contains(c)) {
                    return false;
                }
                // March straight toward the box. Beyond the stabilization
                // radius the only obstacles are outward tails, and those run
                // along the axes, so clipping one coordinate at a time can
                // only hit a tail that would also cover the query cell.
                let b = self.box_radius;
                let mut cur = *c;
                while cur.x.abs() > b {
                    cur.x -= cur.x.signum();
                    if world_tails.iter().any(|t| t.contains(&cur)) {
                        return false;
                    }
                }
                while cur.y.abs() > b {
                    cur.y -= cur.y.signum();
                    if world_tails.iter().any(|t| t.contains(&cur)) {
                        return false;
                    }
                }
                self.cells.contains(&cur)
            }
        }
    }

    /// Containment of the visible (in-box) part of `other`, plus whatever
    /// `other` promises beyond its box.
    pub fn contains_region(&self, other: &CellRegion) -> bool {
        if !other.cells.iter().all(|c| self.contains(c)) {
            return false;
        }
        match &other.outside {
            Outside::Tails(tails) => tails.iter().all(|t| match &self.outside {
                Outside::Tails(mine) => mine.iter().any(|m| t.is_suffix_of(m)),
                Outside::Sectors { .. } => {
                    // Spot-check a few cells deep along the tail.
                    (1..=3).all(|k| {
                        let depth = other.box_radius + k;
                        self.contains(&t.ring_cell(depth))
                    })
                }
            }),
            Outside::Sectors { .. } => {
                // Each boundary-ring cell continues outward; check a short
                // outward probe from every owned ring cell.
                other
                    .cells
                    .iter()
                    .filter(|c| c.radius() == other.box_radius)
                    .all(|c| {
                        let probe = outward_probe(c, other.box_radius + 2);
                        self.contains(&probe)
                    })
            }
        }
    }

    /// Maximal runs of owned boundary-ring cells, in counterclockwise
    /// perimeter order. Each run is one "sector" through which the region
    /// escapes to infinity.
    pub fn ring_arcs(&self) -> Vec<Vec<Cell>> {
        let r = self.box_radius;
        if r == 0 {
            return Vec::new();
        }
        let mut ring: Vec<(i64, Cell)> = self
            .cells
            .iter()
            .filter(|c| c.radius() == r)
            .map(|c| (perimeter_ccw_coord(c, r).unwrap(), *c))
            .collect();
        if ring.is_empty() {
            return Vec::new();
        }
        ring.sort();
        let total = 8 * r;
        if ring.len() as i64 == total {
            return vec![ring.into_iter().map(|(_, c)| c).collect()];
        }
        // Split at gaps in the cyclic perimeter coordinate.
        let mut runs: Vec<Vec<Cell>> = Vec::new();
        let mut cur: Vec<(i64, Cell)> = Vec::new();
        for &(p, c) in &ring {
            if let Some(&(q, _)) = cur.last() {
                if p != q + 1 {
                    runs.push(cur.drain(..).map(|(_, c)| c).collect());
                }
            }
            cur.push((p, c));
        }
        if !cur.is_empty() {
            runs.push(cur.into_iter().map(|(_, c)| c).collect());
        }
        // Merge a run ending at the last coordinate with one starting at 0.
        if runs.len() > 1 {
            let first_starts_at_zero =
                perimeter_ccw_coord(&runs[0][0], r) == Some(0);
            let last_ends_at_top = perimeter_ccw_coord(runs.last().unwrap().last().unwrap(), r)
                == Some(total - 1);
            if first_starts_at_zero && last_ends_at_top {
                let first = runs.remove(0);
                runs.last_mut().unwrap().extend(first);
            }
        }
        runs
    }
}

fn outward_probe(ring_cell: &Cell, depth: i64) -> Cell {
    let mut c = *ring_cell;
    let r = ring_cell.radius();
    if c.x.abs() == r {
        c.x = c.x.signum() * depth;
    } else {
        c.y = c.y.signum() * depth;
    }
    c
}
