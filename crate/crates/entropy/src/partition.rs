use measure_core::{Error, Result, TypeSet};
use serde::{Deserialize, Serialize};

/// A partition of a type set into disjoint, non-empty, covering blocks of
/// type positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from blocks of positions, validating it against `k` types.
    pub fn from_indices(k: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; k];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::Invalid("empty block".into()));
            }
            for &i in block {
                if i >= k {
                    return Err(Error::Invalid(format!("type position {i} out of range")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::Invalid(format!(
                        "type position {i} appears in two blocks"
                    )));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::Invalid(format!("type position {i} is not covered")));
        }
        Ok(Self { blocks })
    }

    /// Builds a partition from blocks of labels.
    pub fn from_labels<S: AsRef<str>>(types: &TypeSet, blocks: &[Vec<S>]) -> Result<Self> {
        let blocks = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|l| {
                        types.index_of(l.as_ref()).ok_or_else(|| {
                            Error::Invalid(format!("unknown label {:?}", l.as_ref()))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(types.len(), blocks)
    }

    /// The partition into singletons.
    pub fn singletons(k: usize) -> Self {
        Self {
            blocks: (0..k).map(|i| vec![i]).collect(),
        }
    }

    /// The trivial one-block partition.
    pub fn whole(k: usize) -> Self {
        Self {
            blocks: vec![(0..k).collect()],
        }
    }

    /// Blocks of positions.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of types covered.
    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Indicator of a block as a boolean mask over `k` positions.
    pub(crate) fn mask(&self, b: usize, k: usize) -> Vec<bool> {
        let mut m = vec![false; k];
        for &i in &self.blocks[b] {
            m[i] = true;
        }
        m
    }
}
