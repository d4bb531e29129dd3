//! Uniform-grid spatial hash over a fixed point set.
//!
//! Points are bucketed into cubic cells of edge `cell_size`; a query visits
//! the 3^d cells around its own, which contain every point within
//! `cell_size` of it. Candidates come back sorted by point index.

use std::collections::HashMap;

use crate::points::PointSet;

#[derive(Debug, Clone)]
pub struct GridIndex {
    cell_size: f64,
    origin: Vec<f64>,
    dims: Vec<u64>,
    /// Point indices sorted by (cell key, index).
    order: Vec<u32>,
    /// Cell key -> range into `order`.
    cells: HashMap<u64, (u32, u32)>,
}

impl GridIndex {
    /// Returns `None` when the flattened cell count would overflow `u64`
    /// or the point count does not fit the index type.
    pub fn build(points: &PointSet, cell_size: f64) -> Option<Self> {
        assert!(cell_size > 0.0 && cell_size.is_finite());
        let d = points.dim();
        if points.is_empty() || points.len() > u32::MAX as usize {
            return None;
        }
        let mut origin = vec![f64::INFINITY; d];
        let mut max = vec![f64::NEG_INFINITY; d];
        for p in points.iter() {
            for i in 0..d {
                origin[i] = origin[i].min(p[i]);
                max[i] = max[i].max(p[i]);
            }
        }
        let mut dims = Vec::with_capacity(d);
        let mut total: u64 = 1;
        for i in 0..d {
            let n = ((max[i] - origin[i]) / cell_size).floor() as u64 + 1;
            total = total.checked_mul(n)?;
            dims.push(n);
        }

        let mut keyed: Vec<(u64, u32)> = points
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let mut key = 0u64;
                for i in (0..d).rev() {
                    let c = (((p[i] - origin[i]) / cell_size).floor() as u64).min(dims[i] - 1);
                    key = key * dims[i] + c;
                }
                (key, j as u32)
            })
            .collect();
        keyed.sort_unstable();

        let mut cells = HashMap::new();
        let mut start = 0usize;
        while start < keyed.len() {
            let key = keyed[start].0;
            let mut end = start;
            while end < keyed.len() && keyed[end].0 == key {
                end += 1;
            }
            cells.insert(key, (start as u32, end as u32));
            start = end;
        }
        Some(Self {
            cell_size,
            origin,
            dims,
            order: keyed.into_iter().map(|(_, j)| j).collect(),
            cells,
        })
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn occupied_cells(&self) -> usize {
        self.cells.len()
    }

    /// Indices of every point in the 3^d cells around `x`, ascending.
    /// Always a superset of the points within `cell_size` of `x`.
    pub fn candidates(&self, x: &[f64], out: &mut Vec<u32>) {
        out.clear();
        let d = self.dims.len();
        let center: Vec<i64> = (0..d)
            .map(|i| {
                let c = ((x[i] - self.origin[i]) / self.cell_size).floor();
                // keep far-away queries from overflowing
                c.clamp(-2.0, self.dims[i] as f64 + 1.0) as i64
            })
            .collect();
        let mut offset = vec![-1i64; d];
        'cells: loop {
            let mut key = 0u64;
            let mut inside = true;
            for i in (0..d).rev() {
                let c = center[i] + offset[i];
                if c < 0 || c >= self.dims[i] as i64 {
                    inside = false;
                    break;
                }
                key = key * self.dims[i] + c as u64;
            }
            if inside {
                if let Some(&(a, b)) = self.cells.get(&key) {
                    out.extend_from_slice(&self.order[a as usize..b as usize]);
                }
            }
            for i in 0..d {
                offset[i] += 1;
                if offset[i] <= 1 {
                    continue 'cells;
                }
                offset[i] = -1;
            }
            break;
        }
        out.sort_unstable();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::squared_distance;
    use crate::sampling::{sample_centers, BoxDomain, SamplingLaw};

    #[test]
    fn candidates_cover_the_ball() {
        for d in 1..=3 {
            let dom = BoxDomain::cube(0.0, 1.0, d).unwrap();
            let pts = sample_centers(&SamplingLaw::Uniform, &dom, 500, d as u64).unwrap();
            let queries =
                sample_centers(&SamplingLaw::Uniform, &BoxDomain::cube(-0.2, 1.2, d).unwrap(), 50, 99).unwrap();
            let r = 0.13;
            let grid = GridIndex::build(&pts, r).unwrap();
            let mut cand = Vec::new();
            for q in queries.iter() {
                grid.candidates(q, &mut cand);
                assert!(cand.windows(2).all(|w| w[0] < w[1]));
                for (j, p) in pts.iter().enumerate() {
                    if squared_distance(p, q) < r * r {
                        assert!(cand.binary_search(&(j as u32)).is_ok(), "missed {j} in d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn far_query_has_no_candidates() {
        let pts = PointSet::new(2, vec![0.0, 0.0, 0.1, 0.1]).unwrap();
        let grid = GridIndex::build(&pts, 0.05).unwrap();
        let mut cand = Vec::new();
        grid.candidates(&[1e300, -1e300], &mut cand);
        assert!(cand.is_empty());
    }
}
