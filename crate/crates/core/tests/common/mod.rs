//! Shared oracle implementations for integration tests.
//!
//! Everything here is written from the defining formulas with deliberately
//! different code structure than the library (direct map scans and
//! quantifier translations instead of array passes), so agreement is
//! meaningful evidence rather than a tautology.

#![allow(dead_code)]

use shelfplan_core::rng::Xoshiro256StarStar;
use shelfplan_core::{Arrangement, Cell, ObjectId, ObjectSpec, ProblemInstance, ShelfGrid};

/// Naive surrogate evaluation: per-object (y, b) plus the expected cost.
pub fn naive_surrogate(
    instance: &ProblemInstance,
    arr: &Arrangement,
) -> (Vec<(f64, u32)>, f64) {
    let grid = instance.grid();
    let occupied = |i: i32, j: i32| -> bool {
        if j < 1 || j > grid.m_y as i32 {
            return false;
        }
        if i < 1 || i > grid.m_x as i32 {
            return true; // side walls act as occupied
        }
        arr.object_at(Cell::new(i as u16, j as u16)).is_some()
    };
    let clear_front = |i: i32, j: i32| -> bool {
        if i < 1 || i > grid.m_x as i32 {
            return false; // walls never have a clear front
        }
        !occupied(i, j) && (1..j).all(|jf| !occupied(i, jf))
    };
    // cavity: empty cell with something occupied in front of it
    let cavity = |i: i32, j: i32| -> bool {
        if i < 1 || i > grid.m_x as i32 {
            return false;
        }
        !occupied(i, j) && (1..j).any(|jf| occupied(i, jf))
    };
    let pushable = |i: i32, j: i32| -> bool { !(occupied(i - 1, j) && occupied(i + 1, j)) };
    let tuckable = |i: i32, j: i32| -> bool {
        occupied(i, j) && (cavity(i - 1, j) || cavity(i + 1, j))
    };
    let leading_empties = |i: i32| -> u32 {
        (1..=grid.m_y as i32).filter(|&j| clear_front(i, j)).count() as u32
    };

    let mut per_object = Vec::new();
    let mut expected = 0.0;
    for spec in instance.objects() {
        let Some(cell) = arr.cell_of(spec.id) else {
            per_object.push((0.0, 0));
            continue;
        };
        let (ci, cj) = (cell.i as i32, cell.j as i32);
        let mut y = 0.0;
        let mut obstacles = 0i64;
        for jf in 1..cj {
            if let Some(ob) = arr.object_at(Cell::new(cell.i, jf as u16)) {
                obstacles += 1;
                let ospec = instance.object(ob);
                y += if pushable(ci, jf) { ospec.c_push } else { ospec.c_suction };
            }
        }
        let tucks: i64 = (1..cj).filter(|&jf| tuckable(ci, jf)).count() as i64;
        let spare: i64 = (1..=grid.m_x as i32)
            .filter(|&i| i != ci)
            .map(|i| leading_empties(i) as i64)
            .sum();
        let b = (obstacles - tucks - spare).max(0) as u32;
        expected += spec.p * (y + instance.c_removal() * b as f64);
        per_object.push((y, b));
    }
    (per_object, expected)
}

/// All labeled arrangements of `n` objects, enumerated by assigning object
/// 1, 2, … to free cells in (i, j) lexicographic order. The sequence itself
/// is lexicographic in the placement vector (object 1's cell, then 2's, …).
pub fn all_arrangements(grid: ShelfGrid, n: usize) -> Vec<Arrangement> {
    let cells: Vec<Cell> = grid.cells().collect();
    let mut out = Vec::new();
    let mut current: Vec<Cell> = Vec::with_capacity(n);
    fn recurse(
        cells: &[Cell],
        n: usize,
        current: &mut Vec<Cell>,
        out: &mut Vec<Arrangement>,
    ) {
        if current.len() == n {
            out.push(Arrangement::from_pairs(
                current.iter().enumerate().map(|(k, &c)| (k as ObjectId + 1, c)),
            ));
            return;
        }
        for &cell in cells {
            if !current.contains(&cell) {
                current.push(cell);
                recurse(cells, n, current, out);
                current.pop();
            }
        }
    }
    recurse(&cells, n, &mut current, &mut out);
    out
}

/// Random instance in the experiment style: push costs uniform on {1..10},
/// suction = ψ·push, retrieval probabilities proportional to n..1.
pub fn random_instance(
    grid: ShelfGrid,
    n: usize,
    psi: f64,
    c_r: f64,
    rng: &mut Xoshiro256StarStar,
) -> ProblemInstance {
    let total: f64 = (n * (n + 1) / 2) as f64;
    let objects = (1..=n)
        .map(|l| {
            let c_push = rng.gen_range_inclusive(1, 10) as f64;
            ObjectSpec::new(
                l as ObjectId,
                (n + 1 - l) as f64 / total,
                c_push,
                psi * c_push,
            )
        })
        .collect();
    ProblemInstance::new(grid, objects, c_r).unwrap()
}

/// Uniform random labeled arrangement (used where exhaustion is too big).
pub fn random_arrangement(
    grid: ShelfGrid,
    n: usize,
    rng: &mut Xoshiro256StarStar,
) -> Arrangement {
    let mut cells: Vec<Cell> = grid.cells().collect();
    rng.partial_shuffle(&mut cells, n);
    Arrangement::from_pairs((1..=n as ObjectId).zip(cells.into_iter()))
}
