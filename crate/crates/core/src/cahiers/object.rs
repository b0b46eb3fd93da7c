use std::fmt;
use std::sync::Arc;

use crate::poly::{binomial, monomials_in_blocks, Monomial};
use crate::weil::{tensor, WeilAlgebra};

/// An object `C^inf(R^n) (x) W` of the site, with its base variables split
/// into blocks. Degree bounds on fragment carriers apply per block, so the
/// coproduct of two objects keeps each factor's bound.
#[derive(Clone)]
pub struct DObject {
    blocks: Vec<usize>,
    weil: Arc<WeilAlgebra>,
}

impl DObject {
    pub fn new(base_arity: usize, weil: &Arc<WeilAlgebra>) -> DObject {
        let blocks = if base_arity == 0 { Vec::new() } else { vec![base_arity] };
        DObject { blocks, weil: weil.clone() }
    }

    /// `(n, W)` with an explicit block partition of the `n` base variables.
    pub fn with_blocks(blocks: Vec<usize>, weil: &Arc<WeilAlgebra>) -> DObject {
        let blocks = blocks.into_iter().filter(|&b| b > 0).collect();
        DObject { blocks, weil: weil.clone() }
    }

    pub fn base_arity(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn weil(&self) -> &Arc<WeilAlgebra> {
        &self.weil
    }

    /// Base monomials with degree at most `d` in each block.
    pub fn monomials(&self, d: u32) -> Vec<Monomial> {
        monomials_in_blocks(&self.blocks, d)
    }

    /// Number of base monomials of block degree at most `d`.
    pub fn monomial_count(&self, d: u32) -> u64 {
        self.blocks.iter().map(|&b| binomial(b as u64 + d as u64, d as u64)).product()
    }

    /// Degree of `m` within each block.
    pub fn block_degrees(&self, m: &Monomial) -> Vec<u32> {
        let mut start = 0;
        self.blocks
            .iter()
            .map(|&b| {
                let d = m.partial_degree(start..start + b);
                start += b;
                d
            })
            .collect()
    }
}

impl PartialEq for DObject {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks && WeilAlgebra::same(&self.weil, &other.weil)
    }
}

impl fmt::Display for DObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C(R^{}) (x) W[{}; dim {}]", self.base_arity(), self.weil.names().join(","), self.weil.dimension())
    }
}

impl fmt::Debug for DObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} blocks {:?}", self.blocks)
    }
}

/// Coproduct `(n + m, W (x) W')`: base variables of `c` first, then `c2`;
/// Weil variables likewise.
pub fn dobj_coproduct(c: &DObject, c2: &DObject) -> DObject {
    let mut blocks = c.blocks.clone();
    blocks.extend(&c2.blocks);
    DObject { blocks, weil: tensor(&c.weil, &c2.weil).algebra }
}
