//! Parametric mesh fixtures: polygonal circles, disks, boxes, segments
//! and point sets.  These are the standard inputs for studies and tests;
//! general mesh generation is out of scope.

use super::{ManifoldFunction, SimplicialManifold};

/// Closed polygonal approximation of a circle (k = 1 in the plane),
/// with zero vertex values.
pub fn circle_boundary(center: [f64; 2], radius: f64, segments: usize) -> ManifoldFunction {
    assert!(segments >= 3);
    let mut vertices = Vec::with_capacity(segments * 2);
    for i in 0..segments {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / segments as f64;
        vertices.push(center[0] + radius * theta.cos());
        vertices.push(center[1] + radius * theta.sin());
    }
    let simplices = (0..segments)
        .map(|i| vec![i, (i + 1) % segments])
        .collect();
    let manifold = SimplicialManifold::new(2, 1, vertices, simplices).unwrap();
    ManifoldFunction::zero(manifold)
}

/// Boundary of a regular polygon with `sides` corners, each edge split
/// into `per_side` segments.
pub fn regular_polygon_boundary(
    center: [f64; 2],
    circumradius: f64,
    sides: usize,
    per_side: usize,
) -> ManifoldFunction {
    assert!(sides >= 3 && per_side >= 1);
    let corner = |i: usize| -> [f64; 2] {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / sides as f64;
        [
            center[0] + circumradius * theta.cos(),
            center[1] + circumradius * theta.sin(),
        ]
    };
    let mut vertices = Vec::new();
    for i in 0..sides {
        let a = corner(i);
        let b = corner((i + 1) % sides);
        for j in 0..per_side {
            let t = j as f64 / per_side as f64;
            vertices.push(a[0] + t * (b[0] - a[0]));
            vertices.push(a[1] + t * (b[1] - a[1]));
        }
    }
    let total = sides * per_side;
    let simplices = (0..total).map(|i| vec![i, (i + 1) % total]).collect();
    let manifold = SimplicialManifold::new(2, 1, vertices, simplices).unwrap();
    ManifoldFunction::zero(manifold)
}

/// Triangulated disk (k = 2): `rings` concentric rings of `segments`
/// points around the center, fan-connected.
pub fn disk(center: [f64; 2], radius: f64, rings: usize, segments: usize) -> ManifoldFunction {
    assert!(rings >= 1 && segments >= 3);
    let mut vertices = vec![center[0], center[1]];
    for ring in 1..=rings {
        let r = radius * ring as f64 / rings as f64;
        for i in 0..segments {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / segments as f64;
            vertices.push(center[0] + r * theta.cos());
            vertices.push(center[1] + r * theta.sin());
        }
    }
    let ring_start = |ring: usize| 1 + (ring - 1) * segments;
    let mut simplices = Vec::new();
    // Innermost fan.
    for i in 0..segments {
        let a = ring_start(1) + i;
        let b = ring_start(1) + (i + 1) % segments;
        simplices.push(vec![0, a, b]);
    }
    // Quads between rings, split into two triangles.
    for ring in 1..rings {
        for i in 0..segments {
            let a = ring_start(ring) + i;
            let b = ring_start(ring) + (i + 1) % segments;
            let c = ring_start(ring + 1) + i;
            let e = ring_start(ring + 1) + (i + 1) % segments;
            simplices.push(vec![a, c, e]);
            simplices.push(vec![a, e, b]);
        }
    }
    let manifold = SimplicialManifold::new(2, 2, vertices, simplices).unwrap();
    ManifoldFunction::zero(manifold)
}

/// Axis-aligned rectangle triangulated on an `nx` by `ny` grid.
pub fn rectangle(origin: [f64; 2], width: f64, height: f64, nx: usize, ny: usize) -> ManifoldFunction {
    assert!(nx >= 1 && ny >= 1);
    let mut vertices = Vec::new();
    for iy in 0..=ny {
        for ix in 0..=nx {
            vertices.push(origin[0] + width * ix as f64 / nx as f64);
            vertices.push(origin[1] + height * iy as f64 / ny as f64);
        }
    }
    let at = |ix: usize, iy: usize| iy * (nx + 1) + ix;
    let mut simplices = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let (a, b, c, d) = (at(ix, iy), at(ix + 1, iy), at(ix + 1, iy + 1), at(ix, iy + 1));
            simplices.push(vec![a, b, c]);
            simplices.push(vec![a, c, d]);
        }
    }
    let manifold = SimplicialManifold::new(2, 2, vertices, simplices).unwrap();
    ManifoldFunction::zero(manifold)
}

/// The whole unit square as two triangles.
pub fn unit_square() -> ManifoldFunction {
    rectangle([0.0, 0.0], 1.0, 1.0, 1, 1)
}

/// Axis-aligned box in 3-d, each grid cell cut into six tetrahedra
/// (Kuhn triangulation).
pub fn box_tets(origin: [f64; 3], sizes: [f64; 3], divisions: [usize; 3]) -> ManifoldFunction {
    let [nx, ny, nz] = divisions;
    assert!(nx >= 1 && ny >= 1 && nz >= 1);
    let mut vertices = Vec::new();
    for iz in 0..=nz {
        for iy in 0..=ny {
            for ix in 0..=nx {
                vertices.push(origin[0] + sizes[0] * ix as f64 / nx as f64);
                vertices.push(origin[1] + sizes[1] * iy as f64 / ny as f64);
                vertices.push(origin[2] + sizes[2] * iz as f64 / nz as f64);
            }
        }
    }
    let at = |ix: usize, iy: usize, iz: usize| (iz * (ny + 1) + iy) * (nx + 1) + ix;
    // Kuhn: six tets per cell along vertex permutation paths.
    const PATHS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut simplices = Vec::new();
    for iz in 0..nz {
        for iy in 0..ny {
            for ix in 0..nx {
                for path in PATHS {
                    let mut corner = [ix, iy, iz];
                    let mut tet = vec![at(corner[0], corner[1], corner[2])];
                    for &axis in &path {
                        corner[axis] += 1;
                        tet.push(at(corner[0], corner[1], corner[2]));
                    }
                    simplices.push(tet);
                }
            }
        }
    }
    let manifold = SimplicialManifold::new(3, 3, vertices, simplices).unwrap();
    ManifoldFunction::zero(manifold)
}

/// A single segment between two points (any ambient dimension).
pub fn segment(a: &[f64], b: &[f64]) -> ManifoldFunction {
    assert_eq!(a.len(), b.len());
    let mut vertices = a.to_vec();
    vertices.extend_from_slice(b);
    let manifold = SimplicialManifold::new(a.len(), 1, vertices, vec![vec![0, 1]]).unwrap();
    ManifoldFunction::zero(manifold)
}

/// A finite point set (k = 0) with the given values.
pub fn point_set(d: usize, points: &[f64], values: &[f64]) -> ManifoldFunction {
    let count = points.len() / d;
    assert_eq!(values.len(), count);
    let simplices = (0..count).map(|i| vec![i]).collect();
    let manifold = SimplicialManifold::new(d, 0, points.to_vec(), simplices).unwrap();
    ManifoldFunction::new(manifold, values.to_vec()).unwrap()
}
