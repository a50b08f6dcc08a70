//! Arrangements: injective object→cell assignments, plus the geometric
//! notions built on them — accessibility, cavities, consolidation, and the
//! constructive removal-free witness behind the density theorem.

use crate::grid::{Cell, ShelfGrid};
use crate::instance::{is_dense_for, ObjectId, ProblemInstance};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ArrangementError {
    #[error("object {id} placed out of bounds at {cell}")]
    OutOfBounds { id: ObjectId, cell: Cell },
    #[error("objects {a} and {b} share cell {cell}")]
    Overlap { a: ObjectId, b: ObjectId, cell: Cell },
    #[error("object {0} is not placed")]
    Unplaced(ObjectId),
    #[error("arrangement places {placed} objects, instance has {expected}")]
    WrongObjectCount { placed: usize, expected: usize },
    #[error("arrangement places unknown object {0}")]
    UnknownObject(ObjectId),
}

/// Injective assignment of objects to cells.
///
/// May be partial (mid-episode states in the sequential simulation); use
/// [`Arrangement::validate_total`] when an instance requires every object
/// placed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Arrangement {
    placement: BTreeMap<ObjectId, Cell>,
}

impl Arrangement {
    pub fn new() -> Self {
        Arrangement { placement: BTreeMap::new() }
    }

    pub fn from_pairs<I: IntoIterator<Item = (ObjectId, Cell)>>(pairs: I) -> Self {
        Arrangement { placement: pairs.into_iter().collect() }
    }

    pub fn place(&mut self, id: ObjectId, cell: Cell) {
        self.placement.insert(id, cell);
    }

    pub fn remove(&mut self, id: ObjectId) -> Option<Cell> {
        self.placement.remove(&id)
    }

    #[inline]
    pub fn cell_of(&self, id: ObjectId) -> Option<Cell> {
        self.placement.get(&id).copied()
    }

    pub fn object_at(&self, cell: Cell) -> Option<ObjectId> {
        self.placement.iter().find(|(_, c)| **c == cell).map(|(id, _)| *id)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.placement.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.placement.is_empty()
    }

    /// Placements in ascending object id order.
    pub fn iter(&self) -> impl Iterator<Item = (ObjectId, Cell)> + '_ {
        self.placement.iter().map(|(id, c)| (*id, *c))
    }

    /// Checks bounds and injectivity against a grid.
    pub fn validate(&self, grid: ShelfGrid) -> Result<(), ArrangementError> {
        let mut seen: BTreeMap<Cell, ObjectId> = BTreeMap::new();
        for (id, cell) in self.iter() {
            if !grid.contains(cell) {
                return Err(ArrangementError::OutOfBounds { id, cell });
            }
            if let Some(prev) = seen.insert(cell, id) {
                return Err(ArrangementError::Overlap { a: prev, b: id, cell });
            }
        }
        Ok(())
    }

    /// Validates against an instance, additionally requiring every object of
    /// the instance to be placed and nothing else.
    pub fn validate_total(&self, instance: &ProblemInstance) -> Result<(), ArrangementError> {
        self.validate(instance.grid())?;
        if self.len() != instance.n() {
            return Err(ArrangementError::WrongObjectCount {
                placed: self.len(),
                expected: instance.n(),
            });
        }
        for (id, _) in self.iter() {
            if instance.try_object(id).is_none() {
                return Err(ArrangementError::UnknownObject(id));
            }
        }
        Ok(())
    }

    /// Occupancy bitmap in `(i, j)` lexicographic cell order.
    pub fn occupancy(&self, grid: ShelfGrid) -> Vec<bool> {
        let mut occ = vec![false; grid.cell_count()];
        for (_, cell) in self.iter() {
            occ[grid.index_of(cell)] = true;
        }
        occ
    }
}

/// True iff every cell in front of the object's cell is empty.
pub fn is_accessible(
    arr: &Arrangement,
    grid: ShelfGrid,
    id: ObjectId,
) -> Result<bool, ArrangementError> {
    let cell = arr.cell_of(id).ok_or(ArrangementError::Unplaced(id))?;
    let occ = arr.occupancy(grid);
    Ok(grid
        .cells_in_front(cell)
        .all(|c| !occ[grid.index_of(c)]))
}

/// Empty cells that have at least one occupied cell in front of them. The
/// arrangement is called hollow iff this set is non-empty.
pub fn cavities(arr: &Arrangement, grid: ShelfGrid) -> Vec<Cell> {
    let occ = arr.occupancy(grid);
    let mut out = Vec::new();
    for i in 1..=grid.m_x {
        let mut blocked = false;
        for j in 1..=grid.m_y {
            let cell = Cell::new(i, j);
            if occ[grid.index_of(cell)] {
                blocked = true;
            } else if blocked {
                out.push(cell);
            }
        }
    }
    out
}

/// Packs every column's objects against the back wall, preserving their
/// front-to-back order. The result has no cavities; per-column object
/// multisets are unchanged.
pub fn consolidate(arr: &Arrangement, grid: ShelfGrid) -> Arrangement {
    // collect per column in depth order (BTreeMap iteration is by id, so sort)
    let mut columns: BTreeMap<u16, Vec<(u16, ObjectId)>> = BTreeMap::new();
    for (id, cell) in arr.iter() {
        columns.entry(cell.i).or_default().push((cell.j, id));
    }
    let mut out = Arrangement::new();
    for (i, mut objs) in columns {
        objs.sort_unstable();
        let count = objs.len() as u16;
        for (slot, (_, id)) in objs.into_iter().enumerate() {
            let j = grid.m_y - count + 1 + slot as u16;
            out.place(id, Cell::new(i, j));
        }
    }
    out
}

/// Removal-free witness construction.
///
/// Returns `None` exactly when the shelf is dense. Otherwise builds the
/// constructive witness: the back rows are filled completely and the
/// remaining objects are packed column by column (left to right) directly
/// against the back block, choosing the smallest front-row count k with
/// k·m_x ≥ m_y + r − 1. The result is consolidated and every object's
/// surrogate removal count is zero.
pub fn removal_free_arrangement(instance: &ProblemInstance) -> Option<Arrangement> {
    let grid = instance.grid();
    let n = instance.n();
    if is_dense_for(n, grid) {
        return None;
    }
    let (m_x, m_y) = (grid.m_x as usize, grid.m_y as usize);
    let mut chosen = None;
    for k in 0..=m_y {
        let full_rows = m_y - k;
        let Some(r) = n.checked_sub(full_rows * m_x) else { continue };
        if r > 0 && k * m_x < m_y + r - 1 {
            continue;
        }
        if r > k * m_x {
            continue;
        }
        chosen = Some((k, r));
        break;
    }
    // Theorem guarantees a feasible k for every non-dense instance.
    let (k, r) = chosen.expect("non-dense instance must admit a witness");
    let mut cells = Vec::with_capacity(n);
    // back block: rows j in k+1..=m_y, all columns
    for j in (k + 1)..=m_y {
        for i in 1..=m_x {
            cells.push(Cell::new(i as u16, j as u16));
        }
    }
    // front objects: fill columns left to right, each packed against the
    // back block (deepest front rows first) so no cavities appear
    let mut remaining = r;
    for i in 1..=m_x {
        let q = remaining.min(k);
        for slot in 0..q {
            let j = k - q + 1 + slot;
            cells.push(Cell::new(i as u16, j as u16));
        }
        remaining -= q;
        if remaining == 0 {
            break;
        }
    }
    debug_assert_eq!(cells.len(), n);
    // deterministic labeling: object ids in ascending order over the cell
    // list sorted (i, j)-lexicographically
    cells.sort_unstable();
    let mut arr = Arrangement::new();
    for (idx, cell) in cells.into_iter().enumerate() {
        arr.place(idx as ObjectId + 1, cell);
    }
    Some(arr)
}

/// Boolean form of [`removal_free_arrangement`]; equals `!is_dense`.
pub fn removal_free_arrangement_exists(instance: &ProblemInstance) -> bool {
    !instance.is_dense()
}
