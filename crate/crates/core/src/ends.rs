//! Ends of an unbounded continuum: for each radius `R`, removing the square
//! of radius `R` splits the set into components; an end is a coherent choice
//! of unbounded component for every large enough `R`. With finitely many
//! eventually-straight rays this data is finite: each end is a class of rays
//! whose tails stay in one component of the set outside every large square.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::plane_model::{
    connected_components, tail_pair_events, Cell, Continuum, Ray, TailClash,
};
use crate::region::{CellRegion, Outside};

/// An end of a continuum, named by the smallest index of a ray converging
/// to it. `witness_radius` is a radius past which the end's component is
/// already separated from every other end; it does not take part in
/// equality or ordering.
#[derive(Debug, Clone)]
pub struct End {
    pub continuum: String,
    pub ray_class: usize,
    pub witness_radius: i64,
}

impl PartialEq for End {
    fn eq(&self, other: &Self) -> bool {
        self.continuum == other.continuum && self.ray_class == other.ray_class
    }
}
impl Eq for End {}
impl PartialOrd for End {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for End {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.continuum, self.ray_class).cmp(&(&other.continuum, other.ray_class))
    }
}
impl std::hash::Hash for End {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.continuum.hash(state);
        self.ray_class.hash(state);
    }
}

impl std::fmt::Display for End {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}#{}", self.continuum, self.ray_class)
    }
}

/// Radius past which a single continuum has settled: every finite cell is
/// inside the square and all bounded tail interactions are over. Tails that
/// stay adjacent forever are allowed here (the rays then share an end).
pub fn continuum_stabilization_radius(k: &Continuum) -> i64 {
    let mut r = k.max_finite_radius();
    let tails: Vec<_> = k.tail_lines();
    for i in 0..tails.len() {
        for j in (i + 1)..tails.len() {
            match tail_pair_events(&tails[i], &tails[j]) {
                Ok(ev) => {
                    for c in ev.shared.iter().chain(ev.adjacent.iter()) {
                        r = r.max(c.radius());
                    }
                }
                Err(TailClash::ForeverAdjacent) => {}
                Err(TailClash::UnboundedOverlap) => {
                    // Rejected by Continuum::validate; unreachable for
                    // validated input.
                }
            }
        }
    }
    r
}

/// The ends of `k`, one per class of rays whose tails stay connected
/// arbitrarily far out. Two tails do so exactly when they run in the same
/// direction on lines one apart (possibly through a chain of such tails).
pub fn ends(k: &Continuum) -> Result<Vec<End>, Error> {
    k.validate()?;
    let r_k = continuum_stabilization_radius(k);
    let n = k.rays.len();
    let mut class: Vec<usize> = (0..n).collect();
    fn find(class: &mut Vec<usize>, i: usize) -> usize {
        if class[i] != i {
            let root = find(class, class[i]);
            class[i] = root;
        }
        class[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let a = k.rays[i].tail_line();
            let b = k.rays[j].tail_line();
            if a.direction == b.direction && (a.cross - b.cross).abs() == 1 {
                let (ri, rj) = (find(&mut class, i), find(&mut class, j));
                let (lo, hi) = (ri.min(rj), ri.max(rj));
                class[hi] = lo;
            }
        }
    }
    let mut reps: Vec<usize> = (0..n).map(|i| find(&mut class, i)).collect();
    reps.sort();
    reps.dedup();
    Ok(reps
        .into_iter()
        .map(|ray_class| End {
            continuum: k.id.clone(),
            ray_class,
            witness_radius: r_k,
        })
        .collect())
}

/// Ray indices of `k` belonging to the class of `end`.
pub fn class_rays(k: &Continuum, end: &End) -> Vec<usize> {
    let all = ends(k).expect("validated continuum");
    debug_assert!(all.contains(end));
    let n = k.rays.len();
    let mut class: Vec<usize> = (0..n).collect();
    fn find(class: &mut Vec<usize>, i: usize) -> usize {
        if class[i] != i {
            let root = find(class, class[i]);
            class[i] = root;
        }
        class[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let a = k.rays[i].tail_line();
            let b = k.rays[j].tail_line();
            if a.direction == b.direction && (a.cross - b.cross).abs() == 1 {
                let (ri, rj) = (find(&mut class, i), find(&mut class, j));
                let (lo, hi) = (ri.min(rj), ri.max(rj));
                class[hi] = lo;
            }
        }
    }
    (0..n)
        .filter(|&i| find(&mut class, i) == end.ray_class)
        .collect()
}

/// The component of `k` minus the square of radius `r` that the end runs
/// into. `r = -1` removes nothing and returns all of `k` (clipped).
pub fn end_component(k: &Continuum, end: &End, r: i64) -> Result<CellRegion, Error> {
    let r_k = continuum_stabilization_radius(k);
    let b = r.max(r_k) + 2;
    let cells: BTreeSet<Cell> = k
        .cells_within(b)
        .into_iter()
        .filter(|c| c.radius() > r)
        .collect();
    let comps = connected_components(&cells);
    let rep_ray = &k.rays[end.ray_class];
    let marker = rep_ray.tail_line().ring_cell(b);
    let comp = comps
        .into_iter()
        .find(|c| c.contains(&marker))
        .ok_or_else(|| Error::Geometry(format!("end {end} has no component at radius {r}")))?;
    let tails: BTreeSet<_> = k
        .rays
        .iter()
        .map(Ray::tail_line)
        .filter(|t| comp.contains(&t.ring_cell(b)))
        .collect();
    Ok(CellRegion {
        cells: comp,
        box_radius: b,
        outside: Outside::Tails(tails),
    })
}

/// Components of the complement of `k`, materialized just beyond the
/// continuum's stabilization radius, sorted by minimum cell.
pub fn complement_components(k: &Continuum) -> Result<Vec<CellRegion>, Error> {
    complement_components_at(k, continuum_stabilization_radius(k) + 2)
}

pub fn complement_components_at(k: &Continuum, b: i64) -> Result<Vec<CellRegion>, Error> {
    k.validate()?;
    let occupied = k.cells_within(b);
    let mut free = BTreeSet::new();
    for x in -b..=b {
        for y in -b..=b {
            let c = Cell::new(x, y);
            if !occupied.contains(&c) {
                free.insert(c);
            }
        }
    }
    let world_tails = k.tail_lines();
    Ok(connected_components(&free)
        .into_iter()
        .map(|cells| CellRegion {
            cells,
            box_radius: b,
            outside: Outside::Sectors {
                world_tails: world_tails.clone(),
            },
        })
        .collect())
}

/// Number of ends of a complement component `u` of `k`. Bounded components
/// have none; unbounded ones always turn out to have exactly one, because a
/// path between two different boundary sectors would have to cross the
/// connected set `k`.
pub fn complement_end_count(k: &Continuum, u: &CellRegion) -> Result<usize, Error> {
    if !u.is_unbounded() {
        return Ok(0);
    }
    let count = u.ring_arcs().len();
    // Stability probe: recompute one box further out and recount for the
    // component containing the same material.
    let b2 = u.box_radius + 1;
    let comps = complement_components_at(k, b2)?;
    let marker = u
        .cells
        .iter()
        .next()
        .ok_or_else(|| Error::Geometry("empty complement component".into()))?;
    let again = comps
        .iter()
        .find(|c| c.cells.contains(marker))
        .map(|c| c.ring_arcs().len())
        .unwrap_or(count);
    if count != again {
        return Err(Error::Geometry(format!(
            "complement end count unstable: {count} vs {again}"
        )));
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_model::{star, Direction};

    #[test]
    fn vertical_line_has_two_ends() {
        let k = star(
            "k",
            Cell::new(0, 0),
            &[Direction::PosY, Direction::NegY],
        );
        let e = ends(&k).unwrap();
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn single_ray_has_one_end() {
        let k = star("k", Cell::new(0, 0), &[Direction::PosX]);
        assert_eq!(ends(&k).unwrap().len(), 1);
    }

    #[test]
    fn adjacent_parallel_tails_merge() {
        let k = Continuum {
            id: "k".into(),
            core: [Cell::new(0, 0), Cell::new(1, 0)].into_iter().collect(),
            rays: vec![
                Ray {
                    path: vec![Cell::new(0, 0)],
                    direction: Direction::PosY,
                },
                Ray {
                    path: vec![Cell::new(1, 0)],
                    direction: Direction::PosY,
                },
            ],
        };
        assert_eq!(ends(&k).unwrap().len(), 1);
    }

    #[test]
    fn end_components_nest() {
        let k = star(
            "k",
            Cell::new(0, 0),
            &[Direction::PosY, Direction::NegY, Direction::PosX],
        );
        let e = &ends(&k).unwrap()[0];
        let outer = end_component(&k, e, 1).unwrap();
        let inner = end_component(&k, e, 3).unwrap();
        assert!(outer.contains_region(&inner));
        assert!(!inner.contains_region(&outer));
    }

    #[test]
    fn whole_set_at_radius_minus_one() {
        let k = star("k", Cell::new(0, 0), &[Direction::PosY]);
        let e = &ends(&k).unwrap()[0];
        let all = end_component(&k, e, -1).unwrap();
        assert!(all.contains(&Cell::new(0, 0)));
        assert!(all.contains(&Cell::new(0, 100)));
        assert!(!all.contains(&Cell::new(1, 0)));
    }

    #[test]
    fn complement_of_line_has_two_one_ended_sides() {
        let k = star(
            "k",
            Cell::new(0, 0),
            &[Direction::PosY, Direction::NegY],
        );
        let comps = complement_components(&k).unwrap();
        let unbounded: Vec<_> = comps.iter().filter(|c| c.is_unbounded()).collect();
        assert_eq!(unbounded.len(), 2);
        for u in unbounded {
            assert_eq!(complement_end_count(&k, u).unwrap(), 1);
        }
    }

    #[test]
    fn complement_of_single_ray_is_one_ended() {
        let k = star("k", Cell::new(0, 0), &[Direction::PosY]);
        let comps = complement_components(&k).unwrap();
        let unbounded: Vec<_> = comps.iter().filter(|c| c.is_unbounded()).collect();
        assert_eq!(unbounded.len(), 1);
        assert_eq!(complement_end_count(&k, unbounded[0]).unwrap(), 1);
    }
}
