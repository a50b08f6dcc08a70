//! Problem instances: per-object retrieval probabilities and action costs on
//! a shelf grid, plus the density classification that decides whether
//! removal-free arrangements exist at all.

use crate::grid::ShelfGrid;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Object label. Ids are 1-based and contiguous within an instance.
pub type ObjectId = u32;

/// Per-object parameters: retrieval probability and action costs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub id: ObjectId,
    /// Retrieval probability p_l. The instance constructor normalizes the
    /// vector to sum to 1.
    pub p: f64,
    /// Cost of one push action on this object.
    pub c_push: f64,
    /// Cost of one suction (pick and place) action on this object. Never
    /// below `c_push`.
    pub c_suction: f64,
}

impl ObjectSpec {
    pub fn new(id: ObjectId, p: f64, c_push: f64, c_suction: f64) -> Self {
        ObjectSpec { id, p, c_push, c_suction }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("instance must contain at least one object")]
    NoObjects,
    #[error("{n} objects cannot fit on a grid with {cells} cells")]
    TooManyObjects { n: usize, cells: usize },
    #[error("object ids must be exactly 1..={n}, got id {got}")]
    BadIds { n: usize, got: ObjectId },
    #[error("object {id}: costs must be finite and non-negative")]
    BadCost { id: ObjectId },
    #[error("object {id}: c_suction must be at least c_push")]
    SuctionBelowPush { id: ObjectId },
    #[error("object {id}: probability must be finite and non-negative")]
    BadProbability { id: ObjectId },
    #[error("probabilities must have positive total mass")]
    ZeroMass,
    #[error("removal penalty must be finite and non-negative")]
    BadRemovalPenalty,
}

/// Immutable problem input: grid, objects (sorted by id), removal penalty.
///
/// Construct via [`ProblemInstance::new`]; deserialization funnels through
/// the same validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct ProblemInstance {
    grid: ShelfGrid,
    objects: Vec<ObjectSpec>,
    c_removal: f64,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    m_x: u16,
    m_y: u16,
    c_removal: f64,
    objects: Vec<ObjectSpec>,
}

impl From<ProblemInstance> for RawInstance {
    fn from(inst: ProblemInstance) -> Self {
        RawInstance {
            m_x: inst.grid.m_x,
            m_y: inst.grid.m_y,
            c_removal: inst.c_removal,
            objects: inst.objects,
        }
    }
}

impl TryFrom<RawInstance> for ProblemInstance {
    type Error = InstanceError;
    fn try_from(raw: RawInstance) -> Result<Self, Self::Error> {
        ProblemInstance::new(
            ShelfGrid::new(raw.m_x.max(1), raw.m_y.max(1)),
            raw.objects,
            raw.c_removal,
        )
    }
}

impl ProblemInstance {
    /// Validates and normalizes an instance.
    ///
    /// Objects are sorted by id; ids must be exactly 1..=n. Probabilities are
    /// divided by their sum unless the sum is already within 1e-9 of 1, so
    /// hand-written exact vectors survive bit-for-bit.
    pub fn new(
        grid: ShelfGrid,
        mut objects: Vec<ObjectSpec>,
        c_removal: f64,
    ) -> Result<Self, InstanceError> {
        if objects.is_empty() {
            return Err(InstanceError::NoObjects);
        }
        let n = objects.len();
        if n > grid.cell_count() {
            return Err(InstanceError::TooManyObjects { n, cells: grid.cell_count() });
        }
        if !c_removal.is_finite() || c_removal < 0.0 {
            return Err(InstanceError::BadRemovalPenalty);
        }
        objects.sort_by_key(|o| o.id);
        let mut mass = 0.0;
        for (k, o) in objects.iter().enumerate() {
            if o.id as usize != k + 1 {
                return Err(InstanceError::BadIds { n, got: o.id });
            }
            if !o.c_push.is_finite() || !o.c_suction.is_finite() || o.c_push < 0.0 {
                return Err(InstanceError::BadCost { id: o.id });
            }
            if o.c_suction < o.c_push {
                return Err(InstanceError::SuctionBelowPush { id: o.id });
            }
            if !o.p.is_finite() || o.p < 0.0 {
                return Err(InstanceError::BadProbability { id: o.id });
            }
            mass += o.p;
        }
        if mass <= 0.0 {
            return Err(InstanceError::ZeroMass);
        }
        if (mass - 1.0).abs() > 1e-9 {
            for o in &mut objects {
                o.p /= mass;
            }
        }
        Ok(ProblemInstance { grid, objects, c_removal })
    }

    #[inline]
    pub fn grid(&self) -> ShelfGrid {
        self.grid
    }

    /// Objects sorted by id (index k holds id k+1).
    #[inline]
    pub fn objects(&self) -> &[ObjectSpec] {
        &self.objects
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.objects.len()
    }

    #[inline]
    pub fn c_removal(&self) -> f64 {
        self.c_removal
    }

    /// Spec of an object by id. Panics on an id outside 1..=n.
    #[inline]
    pub fn object(&self, id: ObjectId) -> &ObjectSpec {
        &self.objects[(id - 1) as usize]
    }

    pub fn try_object(&self, id: ObjectId) -> Option<&ObjectSpec> {
        if id >= 1 && (id as usize) <= self.objects.len() {
            Some(&self.objects[(id - 1) as usize])
        } else {
            None
        }
    }

    /// Shelf density ρ = n / (m_x · m_y), exact.
    pub fn density(&self) -> Ratio {
        density_for(self.n(), self.grid)
    }

    /// True iff ρ strictly exceeds 1 − 1/m_x + 1/(m_x·m_y).
    pub fn is_dense(&self) -> bool {
        is_dense_for(self.n(), self.grid)
    }
}

/// Exact non-negative rational, kept in lowest terms. Just enough arithmetic
/// for density-threshold comparisons without floating point.
#[derive(Clone, Copy, Debug, Eq)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Ratio { num: num / g, den: den / g }
    }

    #[inline]
    pub fn num(&self) -> u64 {
        self.num
    }

    #[inline]
    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // cross-multiply in u128: no overflow for any u64 operands
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Density as a pure function of the object count and grid.
pub fn density_for(n: usize, grid: ShelfGrid) -> Ratio {
    Ratio::new(n as u64, grid.cell_count() as u64)
}

/// Dense-shelf threshold 1 − 1/m_x + 1/(m_x·m_y) as an exact rational.
pub fn dense_threshold(grid: ShelfGrid) -> Ratio {
    let cells = grid.cell_count() as u64;
    Ratio::new(cells - grid.m_y as u64 + 1, cells)
}

/// Dense iff ρ strictly exceeds the threshold; equivalent to the integer
/// test n > m_x·m_y − m_y + 1, which avoids rationals entirely.
pub fn is_dense_for(n: usize, grid: ShelfGrid) -> bool {
    n > grid.cell_count() - grid.m_y as usize + 1
}
