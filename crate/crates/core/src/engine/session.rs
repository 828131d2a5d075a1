use alloc::string::String;
use alloc::vec::Vec;

use super::{
    dynacola_insert, dynasafe_insert, naive_redraw_insert, EngineError, EngineParams, LayoutState,
};
use crate::geometry::Point2;
use crate::tree::{EvolvingTree, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    DynaCola,
    DynaSafe,
    Naive,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::DynaCola => "dynacola",
            Algorithm::DynaSafe => "dynasafe",
            Algorithm::Naive => "naive",
        }
    }

    /// Whether the engine promises a crossing-free drawing.
    pub fn crossing_free(self) -> bool {
        !matches!(self, Algorithm::Naive)
    }
}

impl core::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dynacola" => Ok(Algorithm::DynaCola),
            "dynasafe" => Ok(Algorithm::DynaSafe),
            "naive" => Ok(Algorithm::Naive),
            other => Err(alloc::format!("unknown algorithm `{other}`")),
        }
    }
}

/// A tree growing under one engine, one insertion at a time.
#[derive(Debug, Clone)]
pub struct LayoutSession {
    algorithm: Algorithm,
    params: EngineParams,
    tree: EvolvingTree,
    layout: LayoutState,
}

impl LayoutSession {
    pub fn new(algorithm: Algorithm, params: EngineParams) -> Result<Self, EngineError> {
        params.validate()?;
        Ok(LayoutSession {
            algorithm,
            params,
            tree: EvolvingTree::new(),
            layout: LayoutState::default(),
        })
    }

    /// Adds the root at the origin.
    pub fn insert_root(&mut self, label: impl Into<String>) -> Result<NodeId, EngineError> {
        let id = self.tree.add_root(label)?;
        self.layout = LayoutState {
            positions: alloc::vec![Point2::ORIGIN],
            timestep: 0,
        };
        Ok(id)
    }

    /// Adds a child edge and relaxes the drawing with the session's engine.
    pub fn insert_child(
        &mut self,
        parent: NodeId,
        label: impl Into<String>,
        desired_length: f64,
    ) -> Result<NodeId, EngineError> {
        let edge = self.tree.add_child(parent, label, desired_length)?;
        let child = self.tree.edge(edge).expect("just added").child;
        self.layout = match self.algorithm {
            Algorithm::DynaCola => dynacola_insert(&mut self.tree, &self.layout, edge, &self.params)?,
            Algorithm::DynaSafe => dynasafe_insert(&self.tree, &self.layout, edge, &self.params)?,
            Algorithm::Naive => naive_redraw_insert(&self.tree, &self.layout, edge, &self.params)?,
        };
        Ok(child)
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn params(&self) -> &EngineParams {
        &self.params
    }

    pub fn tree(&self) -> &EvolvingTree {
        &self.tree
    }

    pub fn layout(&self) -> &LayoutState {
        &self.layout
    }

    /// Every drawn segment of the current layout.
    pub fn segments(&self) -> Vec<(NodeId, NodeId)> {
        self.tree.segments().collect()
    }

    /// Exact crossing count of the current drawing.
    pub fn crossings(&self) -> usize {
        crate::metrics::count_crossings(&self.layout.positions, &self.segments())
    }
}
