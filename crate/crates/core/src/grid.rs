//! Shelf geometry: grid dimensions and cell coordinates.
//!
//! Cells are addressed by 1-based `(i, j)` where `i` is the column (x-axis,
//! 1..=m_x) and `j` the depth (y-axis, 1..=m_y). Depth `j = 1` is the shelf
//! FRONT: the row from which objects are retrieved. "In front of (i, j)"
//! always means the cells (i, j') with j' < j.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A shelf cell, 1-based. Ordering is lexicographic by `(i, j)` (column
/// first), which is the canonical cell enumeration order project-wide.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cell {
    pub i: u16,
    pub j: u16,
}

impl Cell {
    #[inline]
    pub fn new(i: u16, j: u16) -> Self {
        Cell { i, j }
    }

    /// Key for sorting by depth first (front rows before back rows), then
    /// column. Used by the priority-greedy baseline and branch-and-bound.
    #[inline]
    pub fn depth_major(self) -> (u16, u16) {
        (self.j, self.i)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (self.i, self.j).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (i, j) = <(u16, u16)>::deserialize(deserializer)?;
        if i == 0 || j == 0 {
            return Err(D::Error::custom("cell coordinates are 1-based"));
        }
        Ok(Cell { i, j })
    }
}

/// Shelf dimensions. `m_x` columns across, `m_y` rows deep.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ShelfGrid {
    pub m_x: u16,
    pub m_y: u16,
}

impl ShelfGrid {
    pub fn new(m_x: u16, m_y: u16) -> Self {
        assert!(m_x >= 1 && m_y >= 1, "grid dimensions must be positive");
        ShelfGrid { m_x, m_y }
    }

    /// Total number of cells.
    #[inline]
    pub fn cell_count(&self) -> usize {
        self.m_x as usize * self.m_y as usize
    }

    #[inline]
    pub fn contains(&self, cell: Cell) -> bool {
        (1..=self.m_x).contains(&cell.i) && (1..=self.m_y).contains(&cell.j)
    }

    /// Dense index of a cell in `(i, j)` lexicographic order.
    #[inline]
    pub fn index_of(&self, cell: Cell) -> usize {
        debug_assert!(self.contains(cell));
        (cell.i as usize - 1) * self.m_y as usize + (cell.j as usize - 1)
    }

    /// Inverse of [`ShelfGrid::index_of`].
    #[inline]
    pub fn cell_at(&self, index: usize) -> Cell {
        debug_assert!(index < self.cell_count());
        Cell {
            i: (index / self.m_y as usize) as u16 + 1,
            j: (index % self.m_y as usize) as u16 + 1,
        }
    }

    /// All cells in `(i, j)` lexicographic order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let my = self.m_y;
        (1..=self.m_x).flat_map(move |i| (1..=my).map(move |j| Cell { i, j }))
    }

    /// The cells strictly in front of `cell` in its column, front row first.
    pub fn cells_in_front(&self, cell: Cell) -> impl Iterator<Item = Cell> {
        let i = cell.i;
        (1..cell.j).map(move |j| Cell { i, j })
    }
}
