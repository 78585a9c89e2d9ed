//! Maps `F: C^m → C^{m'}` given by coefficient-valued components.

use num_complex::Complex64;

use crate::coeff::{Coeff, Point};
use crate::error::{Error, Result};
use crate::expr::Expr;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap<C: Coeff> {
    source_dim: usize,
    components: Vec<C>,
    holomorphic: bool,
}

impl<C: Coeff> PolyMap<C> {
    pub fn new(source_dim: usize, components: Vec<C>) -> Self {
        let holomorphic = components.iter().all(Coeff::is_holomorphic);
        Self { source_dim, components, holomorphic }
    }

    pub fn identity(m: usize) -> Self {
        Self::new(m, (0..m).map(|i| C::z(m, i)).collect())
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[C] {
        &self.components
    }

    /// Recomputed from the components at construction.
    pub fn is_holomorphic(&self) -> bool {
        self.holomorphic
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyMap<C>) -> Result<Self> {
        if inner.target_dim() != self.source_dim {
            return Err(Error::Dimension { expected: self.source_dim, found: inner.target_dim() });
        }
        let conjs: Vec<C> = inner.components.iter().map(Coeff::conj).collect();
        let comps = self
            .components
            .iter()
            .map(|c| c.substitute(inner.source_dim, &inner.components, &conjs))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(inner.source_dim, comps))
    }

    pub fn apply(&self, pt: &Point<Complex64>) -> Result<Point<Complex64>> {
        if pt.dim() != self.source_dim {
            return Err(Error::Dimension { expected: self.source_dim, found: pt.dim() });
        }
        Ok(Point::new(self.components.iter().map(|c| c.eval_c64(pt)).collect::<Result<_>>()?))
    }

    pub fn to_expr(&self) -> PolyMap<Expr> {
        PolyMap::new(self.source_dim, self.components.iter().map(Coeff::to_expr).collect())
    }
}
