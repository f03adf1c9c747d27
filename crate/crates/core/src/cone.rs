//! The cone pseudo-metric and cone balls.
//!
//! For an ambient set `A`, an inner set `Y ⊂ A`, a root `x ∈ A \ Y` and an
//! apex `y ∈ Y`, every `z ∈ Y` gets the potential
//! `pot(z) = d_A(x, z) - d_Y(y, z)`; the cone distance is the absolute
//! potential difference and the cone ball of radius `r` is
//! `{ z ∈ Y : d_A(x, y) + d_Y(y, z) - d_A(x, z) <= r }`.

use crate::error::{precondition, Result};
use crate::graph::{sssp, within, DistanceMap, Graph, VertexSet};

#[derive(Clone, Debug)]
pub struct ConeContext {
    ambient: VertexSet,
    inner: VertexSet,
    root: usize,
    apex: usize,
    from_root: DistanceMap,
    from_apex: DistanceMap,
    unit: bool,
}

impl ConeContext {
    pub fn new(
        g: &Graph,
        ambient: &VertexSet,
        inner: &VertexSet,
        root: usize,
        apex: usize,
    ) -> Result<Self> {
        if !inner.is_subset(ambient) {
            return precondition("cone inner set must lie inside the ambient set");
        }
        if !ambient.contains(root) || inner.contains(root) {
            return precondition(format!("cone root {root} must be in ambient \\ inner"));
        }
        if !inner.contains(apex) {
            return precondition(format!("cone apex {apex} must be in the inner set"));
        }
        Ok(ConeContext {
            ambient: ambient.clone(),
            inner: inner.clone(),
            root,
            apex,
            from_root: sssp(g, ambient, root)?,
            from_apex: sssp(g, inner, apex)?,
            unit: g.is_unit(),
        })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn apex(&self) -> usize {
        self.apex
    }

    pub fn inner(&self) -> &VertexSet {
        &self.inner
    }

    pub fn ambient(&self) -> &VertexSet {
        &self.ambient
    }

    pub fn root_distances(&self) -> &DistanceMap {
        &self.from_root
    }

    pub fn apex_distances(&self) -> &DistanceMap {
        &self.from_apex
    }

    fn check_inner(&self, v: usize) -> Result<()> {
        if self.inner.contains(v) {
            Ok(())
        } else {
            precondition(format!("vertex {v} is not in the cone's inner set"))
        }
    }

    /// `d_A(x, z) - d_Y(y, z)`; `-inf` when `z` is cut off from the apex inside `Y`.
    pub fn potential(&self, z: usize) -> Result<f64> {
        self.check_inner(z)?;
        Ok(self.from_root.dist(z) - self.from_apex.dist(z))
    }

    /// The cone distance between two inner vertices.
    pub fn distance(&self, u: usize, v: usize) -> Result<f64> {
        let (pu, pv) = (self.potential(u)?, self.potential(v)?);
        if pu == pv {
            return Ok(0.0);
        }
        Ok((pu - pv).abs())
    }

    /// The detour `d_A(x, y) + d_Y(y, z) - d_A(x, z)`; `+inf` when `z` is
    /// cut off from the apex inside `Y`.
    pub fn threshold(&self, z: usize) -> Result<f64> {
        self.check_inner(z)?;
        Ok(self.threshold_unchecked(z))
    }

    #[inline]
    fn threshold_unchecked(&self, z: usize) -> f64 {
        let dz = self.from_apex.dist(z);
        if dz.is_infinite() {
            return f64::INFINITY;
        }
        self.from_root.dist(self.apex) + dz - self.from_root.dist(z)
    }

    /// The cone ball of radius `r` around the apex.
    pub fn ball(&self, r: f64) -> Result<VertexSet> {
        if r.is_nan() || r < 0.0 {
            return precondition(format!("cone ball radius must be non-negative, got {r}"));
        }
        Ok(VertexSet::from_vertices(
            self.inner.universe(),
            self.from_apex
                .settled()
                .iter()
                .copied()
                .filter(|&z| within(self.threshold_unchecked(z), r, self.unit)),
        ))
    }
}
