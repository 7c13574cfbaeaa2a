//! Independent cross-checks used by the test suite: slow, direct
//! recomputations that the fast implementations are compared against.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::circular_order::CircularOrder;
use crate::completion_circle::CirclePoint;
use crate::dynamics::{FixedPointReport, PLCircleMap};
use crate::ends::{class_rays, ends, End};
use crate::error::Error;
use crate::plane_model::{perimeter_ccw_coord, Continuum, GridArc, Scenario};
use crate::triad_order::side_regions;

/// The circular order of ends read straight off the boundary square: each
/// end exits the square of radius `r0 + 1` at one ring cell, and the ends
/// are listed in clockwise perimeter order.
pub fn exit_order(scenario: &Scenario) -> Result<CircularOrder<End>, Error> {
    let r = scenario.r0() + 1;
    let mut exits: Vec<(i64, End)> = Vec::new();
    for k in scenario.continua() {
        for e in ends(k)? {
            let rep = class_rays(k, &e)[0];
            let cell = k.rays[rep].tail_line().ring_cell(r);
            let coord = perimeter_ccw_coord(&cell, r).ok_or_else(|| {
                Error::Geometry(format!("exit cell {cell} is not on the ring"))
            })?;
            exits.push((coord, e));
        }
    }
    exits.sort();
    exits.reverse(); // clockwise = decreasing counterclockwise coordinate
    CircularOrder::from_cycle(exits.into_iter().map(|(_, e)| e).collect())
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// Dense-sampling check of a fixed-point report: every reported point is
/// genuinely fixed, every sampled sign change of the displacement brackets
/// a reported fixed point or arc, and a `none_flag` report shows no zeros
/// at all.
pub fn fixed_points_consistent(
    m: &PLCircleMap,
    report: &FixedPointReport,
    log2_samples: u32,
) -> bool {
    for (x, _) in &report.fixed {
        if m.eval(x) != *x {
            return false;
        }
    }
    for (a, b) in &report.fixed_arcs {
        if m.eval(a) != *a || m.eval(b) != *b {
            return false;
        }
    }
    let n = 1i64 << log2_samples;
    let samples: Vec<CirclePoint> = (0..n).map(|i| CirclePoint::from_ratio(i, n)).collect();
    // Forward displacement at each sample, then a continuous lift of it:
    // a point is fixed exactly when the lift sits on an integer, so a
    // crossing of an integer between consecutive samples brackets a fixed
    // point. The nearest-representative continuation is valid as long as
    // the true displacement moves by less than a half turn per step, which
    // the sample density guarantees for the slopes we generate.
    let disp: Vec<BigRational> = samples.iter().map(|x| x.gap_to(&m.eval(x))).collect();
    let mut lift: Vec<BigRational> = Vec::with_capacity(n as usize + 1);
    lift.push(disp[0].clone());
    for i in 1..=n as usize {
        let mut step = &disp[i % n as usize] - &disp[i - 1];
        while step > half() {
            step -= BigRational::one();
        }
        while step < -half() {
            step += BigRational::one();
        }
        let next = &lift[i - 1] + step;
        lift.push(next);
    }
    let has_fixed_in = |lo: &CirclePoint, hi: &CirclePoint| -> bool {
        report
            .fixed
            .iter()
            .any(|(x, _)| x.in_closed_interval(lo, hi))
            || report.fixed_arcs.iter().any(|(a, b)| {
                a.in_closed_interval(lo, hi)
                    || b.in_closed_interval(lo, hi)
                    || lo.in_closed_interval(a, b)
            })
    };
    for i in 0..n as usize {
        let j = (i + 1) % n as usize;
        let crossing = lift[i].is_integer() || lift[i].floor() != lift[i + 1].floor();
        if crossing && !has_fixed_in(&samples[i], &samples[j]) {
            return false;
        }
        if report.none_flag && crossing {
            return false;
        }
    }
    true
}

/// Direct enumeration of the outermost-arc property: a sub-arc of the
/// circle from `k` to `m` qualifies when every free piece of the circle on
/// its positive side starts and ends on the same set. Returns the number
/// of qualifying sub-arcs (the uniqueness statement expects exactly one).
pub fn qualifying_subarc_count(
    circle: &[Cell],
    k: &Continuum,
    m: &Continuum,
) -> Result<usize, Error> {
    let (candidates, runs) = circle_runs(circle, k, m)?;
    let mut count = 0;
    for cand in &candidates {
        let regions = side_regions(k, m, cand)?;
        let bad = runs.iter().any(|(from, run, to)| {
            from != to && run.iter().all(|c| regions.positive.contains(c))
        });
        if !bad {
            count += 1;
        }
    }
    Ok(count)
}

use crate::plane_model::Cell;

/// The free runs of a grid circle relative to two sets, and the candidate
/// sub-arcs from `k` to `m` among them. Shared helper for the enumeration
/// oracle.
pub fn circle_runs(
    circle: &[Cell],
    k: &Continuum,
    m: &Continuum,
) -> Result<(Vec<GridArc>, Vec<(u8, Vec<Cell>, u8)>), Error> {
    let n = circle.len();
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
    let label = |c: &Cell| -> u8 {
        if k.contains(c) {
            1
        } else if m.contains(c) {
            2
        } else {
            0
        }
    };
    let labels: Vec<u8> = cells.iter().map(label).collect();
    let start = labels
        .iter()
        .position(|&l| l != 0)
        .ok_or_else(|| Error::NoCrossing("circle misses both sets".into()))?;
    let mut runs: Vec<(u8, Vec<Cell>, u8)> = Vec::new();
    let mut i = start;
    loop {
        let next = (i + 1) % n;
        if labels[next] == 0 {
            let from = labels[i];
            let mut run = Vec::new();
            let mut j = next;
            while labels[j] == 0 {
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
    let mut candidates = Vec::new();
    for (from, run, to) in &runs {
        if (*from, *to) == (1, 2) {
            candidates.push(GridArc {
                cells: run.clone(),
                source: k.id.clone(),
                target: m.id.clone(),
            });
        } else if (*from, *to) == (2, 1) {
            let mut rev = run.clone();
            rev.reverse();
            candidates.push(GridArc {
                cells: rev,
                source: k.id.clone(),
                target: m.id.clone(),
            });
        }
    }
    Ok((candidates, runs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::classify_fixed_points;
    use crate::plane_model::{star, Direction};
    use crate::triad_order::ends_order;

    #[test]
    fn exit_order_matches_the_geometric_order_on_a_wheel() {
        let s = Scenario::new(vec![star(
            "w",
            Cell::new(0, 0),
            &[
                Direction::PosX,
                Direction::PosY,
                Direction::NegX,
                Direction::NegY,
            ],
        )])
        .unwrap();
        let sys = ends_order(&s).unwrap();
        let oracle = exit_order(&s).unwrap();
        for a in &sys.ends {
            for b in &sys.ends {
                for c in &sys.ends {
                    if a != b && b != c && a != c {
                        assert_eq!(sys.order.orient(a, b, c), oracle.orient(a, b, c));
                    }
                }
            }
        }
    }

    #[test]
    fn sampling_agrees_with_exact_classification() {
        let quarter = |j: i64| CirclePoint::from_ratio(j, 4);
        let rotation =
            PLCircleMap::new((0..4).map(|j| (quarter(j), quarter(j + 1))).collect()).unwrap();
        let report = classify_fixed_points(&rotation);
        assert!(fixed_points_consistent(&rotation, &report, 8));

        let pair = PLCircleMap::new(vec![
            (CirclePoint::zero(), CirclePoint::zero()),
            (CirclePoint::from_ratio(1, 4), CirclePoint::from_ratio(1, 8)),
            (CirclePoint::from_ratio(1, 2), CirclePoint::from_ratio(1, 2)),
            (CirclePoint::from_ratio(3, 4), CirclePoint::from_ratio(7, 8)),
        ])
        .unwrap();
        let report = classify_fixed_points(&pair);
        assert!(fixed_points_consistent(&pair, &report, 8));
    }

    #[test]
    fn rectangle_has_exactly_one_qualifying_subarc() {
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
        assert_eq!(qualifying_subarc_count(&circle, &k, &m).unwrap(), 1);
    }
}
