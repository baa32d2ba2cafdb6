use super::shape::Shape;
use crate::{Error, Result};

/// Minimum number of interior nodes along each coordinate direction.
pub const MIN_NODES_ACROSS: usize = 20;

/// Interior nodes `origin + h·(i, j)` of a region, ordered with `i` outer.
#[derive(Debug, Clone)]
pub struct Grid {
    pub origin: [f64; 2],
    pub h: f64,
    i0: i64,
    j0: i64,
    nx: usize,
    ny: usize,
    /// `usize::MAX` marks nodes outside the region.
    index: Vec<usize>,
    nodes: Vec<(i64, i64)>,
}

const OUTSIDE: usize = usize::MAX;

impl Grid {
    /// Nodes strictly inside `shape`; boundary and exterior nodes are
    /// Dirichlet zeros.
    pub fn rasterize(shape: &Shape, origin: [f64; 2], h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidInput("grid spacing must be positive".into()));
        }
        let [x0, x1, y0, y1] = shape.bounding_box();
        let i0 = ((x0 - origin[0]) / h).floor() as i64 - 1;
        let i1 = ((x1 - origin[0]) / h).ceil() as i64 + 1;
        let j0 = ((y0 - origin[1]) / h).floor() as i64 - 1;
        let j1 = ((y1 - origin[1]) / h).ceil() as i64 + 1;
        let nx = (i1 - i0 + 1) as usize;
        let ny = (j1 - j0 + 1) as usize;
        let mut index = vec![OUTSIDE; nx * ny];
        let mut nodes = Vec::new();
        for a in 0..nx {
            for b in 0..ny {
                let (i, j) = (i0 + a as i64, j0 + b as i64);
                let p = [origin[0] + i as f64 * h, origin[1] + j as f64 * h];
                if shape.contains(p) {
                    index[a * ny + b] = nodes.len();
                    nodes.push((i, j));
                }
            }
        }
        if nodes.is_empty() {
            return Err(Error::TooCoarse {
                nodes: 0,
                required: MIN_NODES_ACROSS,
                required_spacing: (x1 - x0).min(y1 - y0) / (MIN_NODES_ACROSS as f64 + 1.0),
            });
        }
        Ok(Self {
            origin,
            h,
            i0,
            j0,
            nx,
            ny,
            index,
            nodes,
        })
    }

    /// Rejects grids with fewer than [`MIN_NODES_ACROSS`] nodes in either
    /// direction, naming a spacing that would pass.
    pub fn check_resolution(&self) -> Result<()> {
        let (ni, nj) = self.extent();
        let nodes = ni.min(nj);
        if nodes < MIN_NODES_ACROSS {
            let span = (nodes + 1) as f64 * self.h;
            return Err(Error::TooCoarse {
                nodes,
                required: MIN_NODES_ACROSS,
                required_spacing: span / (MIN_NODES_ACROSS as f64 + 1.0),
            });
        }
        Ok(())
    }

    /// Number of distinct `i` and `j` indices among interior nodes.
    pub fn extent(&self) -> (usize, usize) {
        let (mut imin, mut imax, mut jmin, mut jmax) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for &(i, j) in &self.nodes {
            imin = imin.min(i);
            imax = imax.max(i);
            jmin = jmin.min(j);
            jmax = jmax.max(j);
        }
        ((imax - imin + 1) as usize, (jmax - jmin + 1) as usize)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn point(&self, k: usize) -> [f64; 2] {
        let (i, j) = self.nodes[k];
        [self.origin[0] + i as f64 * self.h, self.origin[1] + j as f64 * self.h]
    }

    pub fn points(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.len()).map(|k| self.point(k))
    }

    pub fn lattice(&self, k: usize) -> (i64, i64) {
        self.nodes[k]
    }

    /// Index of the lattice node `(i, j)` if it is interior.
    pub fn node_at(&self, i: i64, j: i64) -> Option<usize> {
        let (a, b) = (i - self.i0, j - self.j0);
        if a < 0 || b < 0 || a as usize >= self.nx || b as usize >= self.ny {
            return None;
        }
        let k = self.index[a as usize * self.ny + b as usize];
        (k != OUTSIDE).then_some(k)
    }

    /// Interior neighbour of node `k` at lattice offset `(di, dj)`.
    pub fn neighbor(&self, k: usize, di: i64, dj: i64) -> Option<usize> {
        let (i, j) = self.nodes[k];
        self.node_at(i + di, j + dj)
    }

    /// Lattice nodes outside the region that touch an interior node; a grid
    /// function supported in the region vanishes there.
    pub fn exterior_ring(&self) -> Vec<[f64; 2]> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for &(i, j) in &self.nodes {
            for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let q = (i + di, j + dj);
                if self.node_at(q.0, q.1).is_none() && seen.insert(q) {
                    out.push([self.origin[0] + q.0 as f64 * self.h, self.origin[1] + q.1 as f64 * self.h]);
                }
            }
        }
        out
    }

    /// `h² Σ u v`, the node quadrature used for all inner products.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.h * self.h * u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_node_count_tracks_area() {
        let g = Grid::rasterize(&Shape::Disc { center: [0.0, 0.0], radius: 1.0 }, [0.0, 0.0], 0.01).unwrap();
        let area = g.len() as f64 * 1e-4;
        assert!((area - std::f64::consts::PI).abs() < 1e-2);
        assert!(g.check_resolution().is_ok());
        assert_eq!(g.node_at(0, 0), Some(g.node_at(0, 0).unwrap()));
        assert!(g.node_at(100, 0).is_none());
    }

    #[test]
    fn coarse_grid_rejected() {
        let g = Grid::rasterize(&Shape::Disc { center: [0.0, 0.0], radius: 1.0 }, [0.0, 0.0], 0.2).unwrap();
        match g.check_resolution() {
            Err(Error::TooCoarse { required_spacing, .. }) => {
                let g2 = Grid::rasterize(&Shape::Disc { center: [0.0, 0.0], radius: 1.0 }, [0.0, 0.0], required_spacing)
                    .unwrap();
                assert!(g2.check_resolution().is_ok());
            }
            other => panic!("{other:?}"),
        }
    }
}
