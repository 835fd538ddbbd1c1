use serde::{Deserialize, Serialize};

/// Resource caps shared by every constructor that can blow up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest vertex count of any materialized graph.
    pub max_vertices: usize,
    /// Deepest tree level used to separate group elements.
    pub max_depth: u32,
    /// Largest dimension handled by the dense eigensolver.
    pub dense_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: 1 << 20,
            max_depth: 20,
            dense_cap: 1 << 12,
        }
    }
}

impl Limits {
    pub(crate) fn check_vertices(&self, count: usize, what: &str) -> crate::Result<()> {
        if count > self.max_vertices {
            return Err(crate::Error::ResourceLimit(format!(
                "{what} needs {count} vertices, cap is {}",
                self.max_vertices
            )));
        }
        Ok(())
    }
}
