//! Non-preemptive surrogate cost.
//!
//! For a fixed arrangement, every decision quantity of the linearized model
//! is materialized directly from its defining formula: occupancy `a`, prefix
//! counts `e`, clear-front flags `f`, leading-empty counts `d`, pushability
//! `δ`, tucked-pushability `δ̃`, per-object relocation cost `y`, and removal
//! count `b`. The expected surrogate cost Ĉ(S) is the exact objective the
//! branch-and-bound solver minimizes and an upper bound on the true expected
//! retrieval cost.

use crate::arrangement::{Arrangement, ArrangementError};
use crate::grid::ShelfGrid;
use crate::instance::{ObjectId, ProblemInstance};
use std::collections::BTreeMap;

/// All intermediate surrogate quantities for one arrangement.
///
/// Grid-shaped vectors (`a`, `e`, `f`, `delta`, `tucked`) are indexed by
/// [`ShelfGrid::index_of`]; `d` is indexed by column (i − 1); object-shaped
/// vectors (`delta_push`, `delta_suction`, `y`, `b`) are indexed by id − 1
/// and hold each object's value at its own cell (the quantity is zero at
/// every other cell, and identically zero for objects not placed).
#[derive(Clone, Debug, PartialEq)]
pub struct SurrogateBreakdown {
    pub a: Vec<bool>,
    pub e: Vec<u32>,
    pub f: Vec<bool>,
    pub d: Vec<u32>,
    pub delta: Vec<bool>,
    pub tucked: Vec<bool>,
    pub delta_push: Vec<bool>,
    pub delta_suction: Vec<bool>,
    pub y: Vec<f64>,
    pub b: Vec<u32>,
}

/// Surrogate evaluation of a full arrangement.
#[derive(Clone, Debug, PartialEq)]
pub struct SurrogateReport {
    /// ĉost(l) = y_l + c_r·b_l per object.
    pub per_object_cost: BTreeMap<ObjectId, f64>,
    /// b_l per object.
    pub per_object_removals: BTreeMap<ObjectId, u32>,
    /// Ĉ(S) = Σ_l p_l·ĉost(l), summed in ascending object id order.
    pub expected_cost: f64,
    pub breakdown: SurrogateBreakdown,
}

/// Occupancy in cell-index order: object id at each cell, 0 when empty.
pub(crate) fn occupancy_ids(grid: ShelfGrid, arr: &Arrangement) -> Vec<ObjectId> {
    let mut occ = vec![0; grid.cell_count()];
    for (id, cell) in arr.iter() {
        occ[grid.index_of(cell)] = id;
    }
    occ
}

/// Evaluates the breakdown and expected cost over an occupancy array.
///
/// Works for partial occupancies too (absent objects contribute zero);
/// `expected` sums p_l·ĉost(l) over the objects present, ascending id. This
/// one code path defines the canonical summation order, so solver incumbent
/// values are bit-identical to `evaluate_surrogate`.
pub(crate) fn evaluate_occupancy(
    instance: &ProblemInstance,
    occ: &[ObjectId],
) -> (SurrogateBreakdown, f64) {
    let grid = instance.grid();
    let (m_x, m_y) = (grid.m_x as usize, grid.m_y as usize);
    debug_assert_eq!(occ.len(), grid.cell_count());
    let n = instance.n();

    let a: Vec<bool> = occ.iter().map(|&id| id != 0).collect();

    // e: per-column prefix counts; f: nothing in front (e == 0); d: per column
    let mut e = vec![0u32; occ.len()];
    let mut f = vec![false; occ.len()];
    let mut d = vec![0u32; m_x];
    for i in 0..m_x {
        let mut prefix = 0u32;
        for j in 0..m_y {
            let idx = i * m_y + j;
            if a[idx] {
                prefix += 1;
            }
            e[idx] = prefix;
            f[idx] = prefix == 0;
            if f[idx] {
                d[i] += 1;
            }
        }
    }

    // side-neighbor views with the wall convention: out-of-bounds columns
    // behave as occupied cells with nothing in front (a=1, f=0)
    let occupied_or_wall = |i: isize, j: usize| -> bool {
        if i < 0 || i >= m_x as isize {
            true
        } else {
            a[i as usize * m_y + j]
        }
    };
    let blocked_for_tuck = |i: isize, j: usize| -> bool {
        // a ∨ f: a neighbor that is occupied, or empty with a clear front,
        // cannot host a tucked object; walls count as blocked
        if i < 0 || i >= m_x as isize {
            true
        } else {
            let idx = i as usize * m_y + j;
            a[idx] || f[idx]
        }
    };

    let mut delta = vec![false; occ.len()];
    let mut tucked = vec![false; occ.len()];
    for i in 0..m_x {
        for j in 0..m_y {
            let idx = i * m_y + j;
            let (left, right) = (i as isize - 1, i as isize + 1);
            delta[idx] = !(occupied_or_wall(left, j) && occupied_or_wall(right, j));
            tucked[idx] = a[idx] && !(blocked_for_tuck(left, j) && blocked_for_tuck(right, j));
        }
    }

    // per-object quantities at each object's own cell
    let mut delta_push = vec![false; n];
    let mut delta_suction = vec![false; n];
    let mut y = vec![0.0f64; n];
    let mut b = vec![0u32; n];
    let d_total: u32 = d.iter().sum();
    for i in 0..m_x {
        for j in 0..m_y {
            let idx = i * m_y + j;
            let id = occ[idx];
            if id == 0 {
                continue;
            }
            let l = (id - 1) as usize;
            delta_push[l] = delta[idx];
            delta_suction[l] = !delta[idx];
            // y: each obstacle strictly in front, priced by its own cell's δ
            let mut relocation = 0.0;
            let mut tucks_in_front = 0u32;
            for jf in 0..j {
                let fidx = i * m_y + jf;
                if let Some(ob) = occ.get(fidx).copied().filter(|&o| o != 0) {
                    let spec = instance.object(ob);
                    relocation += if delta[fidx] { spec.c_push } else { spec.c_suction };
                }
                if tucked[fidx] {
                    tucks_in_front += 1;
                }
            }
            y[l] = relocation;
            let obstacles = e[idx] - 1;
            let slots_elsewhere = d_total - d[i];
            b[l] = obstacles.saturating_sub(tucks_in_front + slots_elsewhere);
        }
    }

    // canonical objective summation: ascending object id
    let mut expected = 0.0;
    for l in 0..n {
        let spec = &instance.objects()[l];
        expected += spec.p * (y[l] + instance.c_removal() * b[l] as f64);
    }

    (
        SurrogateBreakdown { a, e, f, d, delta, tucked, delta_push, delta_suction, y, b },
        expected,
    )
}

/// Evaluates the surrogate cost of a complete arrangement.
pub fn evaluate_surrogate(
    instance: &ProblemInstance,
    arr: &Arrangement,
) -> Result<SurrogateReport, ArrangementError> {
    arr.validate_total(instance)?;
    let occ = occupancy_ids(instance.grid(), arr);
    let (breakdown, expected_cost) = evaluate_occupancy(instance, &occ);
    let mut per_object_cost = BTreeMap::new();
    let mut per_object_removals = BTreeMap::new();
    for (k, o) in instance.objects().iter().enumerate() {
        per_object_cost
            .insert(o.id, breakdown.y[k] + instance.c_removal() * breakdown.b[k] as f64);
        per_object_removals.insert(o.id, breakdown.b[k]);
    }
    Ok(SurrogateReport { per_object_cost, per_object_removals, expected_cost, breakdown })
}

/// Surrogate retrieval cost of one target: (ĉost(target), removal count).
///
/// Accepts partial arrangements (mid-episode shelf states); only bounds,
/// injectivity, and the target's presence are required.
pub fn surrogate_retrieval_cost(
    instance: &ProblemInstance,
    arr: &Arrangement,
    target: ObjectId,
) -> Result<(f64, u32), ArrangementError> {
    arr.validate(instance.grid())?;
    if instance.try_object(target).is_none() {
        return Err(ArrangementError::UnknownObject(target));
    }
    if arr.cell_of(target).is_none() {
        return Err(ArrangementError::Unplaced(target));
    }
    let occ = occupancy_ids(instance.grid(), arr);
    let (breakdown, _) = evaluate_occupancy(instance, &occ);
    let l = (target - 1) as usize;
    let removals = breakdown.b[l];
    Ok((breakdown.y[l] + instance.c_removal() * removals as f64, removals))
}

/// True iff the surrogate reports zero removals for every object.
pub fn verify_no_removal(
    instance: &ProblemInstance,
    arr: &Arrangement,
) -> Result<bool, ArrangementError> {
    let report = evaluate_surrogate(instance, arr)?;
    Ok(report.breakdown.b.iter().all(|&b| b == 0))
}
