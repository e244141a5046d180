//! Uniform (Hausdorff-proportional) random sampling on a manifold.

use rand::Rng;

use super::{GeometryError, ManifoldFunction};

/// Draws `count` points uniformly with respect to `H^k`: a simplex is
/// chosen with probability proportional to its measure, then a point is
/// placed uniformly inside it (Dirichlet barycentric coordinates via
/// normalized exponential spacings).  Returns flattened points and the
/// PL-interpolated function values at them.
pub fn sample_uniform(
    mf: &ManifoldFunction,
    count: usize,
    rng: &mut impl Rng,
) -> Result<(Vec<f64>, Vec<f64>), GeometryError> {
    let man = &mf.manifold;
    let d = man.ambient_dim();
    let k = man.intrinsic_dim();
    let mut cumulative = Vec::with_capacity(man.simplices().len());
    let mut total = 0.0;
    for s in 0..man.simplices().len() {
        total += man.simplex_measure_at(s)?;
        cumulative.push(total);
    }
    let mut points = Vec::with_capacity(count * d);
    let mut values = Vec::with_capacity(count);
    let mut bary = vec![0.0; k + 1];
    for _ in 0..count {
        let u = rng.gen_range(0.0..total);
        let s = cumulative.partition_point(|&c| c <= u);
        let s = s.min(man.simplices().len() - 1);
        if k == 0 {
            bary[0] = 1.0;
        } else {
            let mut sum = 0.0;
            for b in bary.iter_mut() {
                // Exponential spacings: -ln(U) with U in (0,1].
                let e = -(1.0 - rng.gen::<f64>()).ln();
                *b = e;
                sum += e;
            }
            for b in bary.iter_mut() {
                *b /= sum;
            }
        }
        let verts = &man.simplices()[s];
        for j in 0..d {
            let mut x = 0.0;
            for (v, &b) in verts.iter().zip(&bary) {
                x += b * man.vertex(*v)[j];
            }
            points.push(x);
        }
        values.push(mf.value_at(s, &bary));
    }
    Ok((points, values))
}
