//! Instance and arrangement files.
//!
//! Instances travel as JSON objects with the shape
//! `{"m_x", "m_y", "c_removal", "objects": [{"id", "p", "c_push", "c_suction"}]}`;
//! arrangements as a map from object id to `[i, j]`.

use anyhow::Context;
use serde::{Deserialize, Serialize};
use shelfplan_core::instance::ObjectSpec;
use shelfplan_core::{Arrangement, ProblemInstance, ShelfGrid};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub m_x: u16,
    pub m_y: u16,
    pub c_removal: f64,
    pub objects: Vec<ObjectSpec>,
}

impl InstanceFile {
    pub fn from_instance(instance: &ProblemInstance) -> Self {
        let grid = instance.grid();
        InstanceFile {
            m_x: grid.m_x,
            m_y: grid.m_y,
            c_removal: instance.c_removal(),
            objects: instance.objects().to_vec(),
        }
    }

    pub fn into_instance(self) -> anyhow::Result<ProblemInstance> {
        ProblemInstance::new(ShelfGrid::new(self.m_x, self.m_y), self.objects, self.c_removal)
            .context("invalid instance file")
    }
}

pub fn read_instance(path: &Path) -> anyhow::Result<ProblemInstance> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading instance {}", path.display()))?;
    let file: InstanceFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.into_instance()
}

pub fn write_instance(path: &Path, instance: &ProblemInstance) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(&InstanceFile::from_instance(instance))?;
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_arrangement(path: &Path) -> anyhow::Result<Arrangement> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading arrangement {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_arrangement(path: &Path, arr: &Arrangement) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(arr)?;
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
