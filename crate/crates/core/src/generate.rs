//! Seeded random configurations for fuzz-style tests. Everything is
//! driven by a `ChaCha8Rng` so failures reproduce from the seed alone.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::completion_circle::CirclePoint;
use crate::dynamics::PLCircleMap;
use crate::plane_model::{star, Cell, Continuum, Direction, Scenario};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const DIRS: [Direction; 4] = [
    Direction::PosX,
    Direction::NegX,
    Direction::PosY,
    Direction::NegY,
];

fn random_star(rng: &mut ChaCha8Rng, id: &str, max_rays: usize) -> Continuum {
    let base = Cell::new(rng.gen_range(-14..=14), rng.gen_range(-14..=14));
    let n = rng.gen_range(1..=max_rays);
    let mut dirs = DIRS;
    // Fisher-Yates prefix shuffle picks n distinct directions.
    for i in 0..n {
        let j = rng.gen_range(i..4);
        dirs.swap(i, j);
    }
    star(id, base, &dirs[..n])
}

/// A random valid scenario: up to `max_continua` star-shaped continua with
/// between 3 and 12 ends in total, all finite coordinates in `[-20, 20]`.
pub fn random_scenario(rng: &mut ChaCha8Rng, max_continua: usize) -> Scenario {
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=max_continua);
        let mut continua = Vec::new();
        let mut ends = 0usize;
        for i in 0..n {
            let max_rays = 4.min(12 - ends).max(1);
            let k = random_star(rng, &format!("k{i}"), max_rays.min(4));
            ends += k.rays.len();
            continua.push(k);
            if ends >= 12 {
                break;
            }
        }
        if ends < 3 {
            continue;
        }
        if let Ok(s) = Scenario::new(continua) {
            return s;
        }
    }
    panic!("random scenario generation failed to converge");
}

/// Three single-ray continua at pairwise Chebyshev distance at least 3;
/// single rays never separate, so the triple always has an orientation.
pub fn random_triad(rng: &mut ChaCha8Rng) -> Scenario {
    for _ in 0..10_000 {
        let mut continua = Vec::new();
        for id in ["a", "b", "c"] {
            continua.push(random_star(rng, id, 1));
        }
        let far = |a: &Continuum, b: &Continuum| {
            let p = *a.core.iter().next().unwrap();
            let q = *b.core.iter().next().unwrap();
            (p.x - q.x).abs().max((p.y - q.y).abs()) >= 3
        };
        if !(far(&continua[0], &continua[1])
            && far(&continua[0], &continua[2])
            && far(&continua[1], &continua[2]))
        {
            continue;
        }
        if let Ok(s) = Scenario::new(continua) {
            return s;
        }
    }
    panic!("random triad generation failed to converge");
}

/// A wall (full grid line) with one ray on each side: the wall separates
/// the two rays.
pub fn separating_config(rng: &mut ChaCha8Rng) -> Scenario {
    for _ in 0..10_000 {
        let c = rng.gen_range(-6..=6);
        let off1 = rng.gen_range(-6..=6);
        let off2 = rng.gen_range(-6..=6);
        let gap = rng.gen_range(2..=5);
        let continua = if rng.gen_bool(0.5) {
            vec![
                star("wall", Cell::new(0, c), &[Direction::PosX, Direction::NegX]),
                star("l", Cell::new(off1, c + gap), &[Direction::PosY]),
                star("m", Cell::new(off2, c - gap), &[Direction::NegY]),
            ]
        } else {
            vec![
                star("wall", Cell::new(c, 0), &[Direction::PosY, Direction::NegY]),
                star("l", Cell::new(c + gap, off1), &[Direction::PosX]),
                star("m", Cell::new(c - gap, off2), &[Direction::NegX]),
            ]
        };
        if let Ok(s) = Scenario::new(continua) {
            return s;
        }
    }
    panic!("separating config generation failed to converge");
}

/// A wall with both rays on the same side: nothing separates anything.
pub fn nonseparating_config(rng: &mut ChaCha8Rng) -> Scenario {
    for _ in 0..10_000 {
        let c = rng.gen_range(-6..=6);
        let x1 = rng.gen_range(-6..=6);
        let x2 = rng.gen_range(-6..=6);
        if x1 == x2 {
            continue;
        }
        let g1 = rng.gen_range(2..=5);
        let g2 = rng.gen_range(2..=5);
        let continua = vec![
            star("wall", Cell::new(0, c), &[Direction::PosX, Direction::NegX]),
            star("l", Cell::new(x1, c + g1), &[Direction::PosY]),
            star("m", Cell::new(x2, c + g2), &[Direction::PosY]),
        ];
        if let Ok(s) = Scenario::new(continua) {
            return s;
        }
    }
    panic!("nonseparating config generation failed to converge");
}

/// `lines` parallel vertical walls plus a rectangular grid circle crossing
/// all of them, with randomized extents. Returns the circle as a cyclic
/// cell list together with the walls.
pub fn circle_config(rng: &mut ChaCha8Rng, lines: usize) -> (Vec<Cell>, Vec<Continuum>) {
    assert!(lines >= 2);
    let spacing = rng.gen_range(4..=6) as i64;
    let walls: Vec<Continuum> = (0..lines)
        .map(|i| {
            star(
                &format!("w{i}"),
                Cell::new(i as i64 * spacing, rng.gen_range(-2..=2)),
                &[Direction::PosY, Direction::NegY],
            )
        })
        .collect();
    let x0 = -rng.gen_range(2..=4) as i64;
    let x1 = (lines as i64 - 1) * spacing + rng.gen_range(2..=4) as i64;
    let y1 = rng.gen_range(4..=8) as i64;
    let y0 = -rng.gen_range(4..=8) as i64;
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
    (circle, walls)
}

/// A random orientation-preserving piecewise-linear circle map: distinct
/// dyadic breakpoints whose images are a cyclic shift of another distinct
/// dyadic list, so image triples stay positively ordered.
pub fn random_pl_map(rng: &mut ChaCha8Rng) -> PLCircleMap {
    loop {
        let n = rng.gen_range(3..=8usize);
        let den = 64i64;
        let mut picks: Vec<i64> = (0..den).collect();
        for i in 0..n {
            let j = rng.gen_range(i..picks.len());
            picks.swap(i, j);
        }
        let mut sources: Vec<i64> = picks[..n].to_vec();
        sources.sort();
        for i in 0..n {
            let j = rng.gen_range(i..picks.len());
            picks.swap(i, j);
        }
        let mut images: Vec<i64> = picks[..n].to_vec();
        images.sort();
        let shift = rng.gen_range(0..n);
        let bps: Vec<(CirclePoint, CirclePoint)> = (0..n)
            .map(|i| {
                (
                    CirclePoint::from_ratio(sources[i], den),
                    CirclePoint::from_ratio(images[(i + shift) % n], den),
                )
            })
            .collect();
        if let Ok(m) = PLCircleMap::new(bps) {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ends::ends;

    #[test]
    fn scenarios_respect_the_end_budget() {
        let mut r = rng(7);
        for _ in 0..50 {
            let s = random_scenario(&mut r, 8);
            let total: usize = s
                .continua()
                .iter()
                .map(|k| ends(k).unwrap().len())
                .sum();
            assert!((3..=12).contains(&total), "got {total} ends");
            assert!(s.continua().len() <= 8);
        }
    }

    #[test]
    fn pl_maps_are_valid_and_reproducible() {
        let a: Vec<_> = {
            let mut r = rng(11);
            (0..20).map(|_| random_pl_map(&mut r)).collect()
        };
        let b: Vec<_> = {
            let mut r = rng(11);
            (0..20).map(|_| random_pl_map(&mut r)).collect()
        };
        assert_eq!(a, b);
    }
}
