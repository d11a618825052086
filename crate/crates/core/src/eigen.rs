//! Symmetric eigensolvers.
//!
//! Two routes produce the same [`Eigen`] contract: a dense solver for general
//! real symmetric matrices and an O(n²) secular-equation solver for arrowhead
//! matrices `[[α, zᵀ], [z, diag(d)]]`. The arrowhead case covers a single
//! excitation coupled to a large mode bath, and a single mode coupled to many
//! excitations in the rotating-wave model.
//!
//! Eigenvalues are returned ascending (stable on ties) and every eigenvector
//! has its largest-magnitude component positive.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Eigenpairs of a real symmetric matrix. `vectors` holds one eigenvector per column.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl Eigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    fn from_unsorted(values: Vec<f64>, vectors: DMatrix<f64>) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let mut sorted = DMatrix::zeros(vectors.nrows(), n);
        let mut sorted_values = Vec::with_capacity(n);
        for (dst, &src) in order.iter().enumerate() {
            sorted_values.push(values[src]);
            sorted.set_column(dst, &vectors.column(src));
        }
        fix_signs(&mut sorted);
        Eigen {
            values: sorted_values,
            vectors: sorted,
        }
    }
}

/// Makes the largest-magnitude entry of every column positive (first index on ties).
pub fn fix_signs(vectors: &mut DMatrix<f64>) {
    for mut col in vectors.column_iter_mut() {
        let mut best = 0;
        let mut best_abs = -1.0;
        for (i, v) in col.iter().enumerate() {
            if v.abs() > best_abs {
                best_abs = v.abs();
                best = i;
            }
        }
        if !col.is_empty() && col[best] < 0.0 {
            col.neg_mut();
        }
    }
}

fn diagnostics(m: &DMatrix<f64>) -> Error {
    let max_abs = m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let diag = m.diagonal();
    let (lo, hi) = diag
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    Error::NonConvergence {
        dim: m.nrows(),
        max_abs,
        diag_span: hi - lo,
    }
}

/// Dense symmetric eigendecomposition (implicit QL via nalgebra).
pub fn symmetric_dense(m: DMatrix<f64>) -> Result<Eigen> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(diagnostics(&m));
    }
    let n = m.nrows();
    if (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == 0.0)) {
        return Ok(Eigen::from_unsorted(
            m.diagonal().iter().copied().collect(),
            DMatrix::identity(n, n),
        ));
    }
    let max_iter = 10_000 * n.max(1);
    let failure = diagnostics(&m);
    let eig = m
        .try_symmetric_eigen(f64::EPSILON, max_iter)
        .ok_or(failure)?;
    Ok(Eigen::from_unsorted(
        eig.eigenvalues.iter().copied().collect(),
        eig.eigenvectors,
    ))
}

/// Tail slot of an arrowhead matrix after deflation: diagonal entry, spoke,
/// and the combination of original tail coordinates it represents.
#[derive(Debug, Clone)]
struct Slot {
    d: f64,
    z: f64,
    basis: Vec<(usize, f64)>,
}

/// A secular root stored as an offset from its nearest pole.
#[derive(Debug, Clone, Copy)]
struct Root {
    pole: usize,
    offset: f64,
}

/// Eigendecomposition of the arrowhead matrix with head `alpha`, spokes `z`
/// and diagonal tail `d`. Row/column 0 is the head; row `1 + j` is tail `j`.
pub fn arrowhead(alpha: f64, z: &[f64], d: &[f64]) -> Result<Eigen> {
    assert_eq!(
        z.len(),
        d.len(),
        "arrowhead spokes and tail differ in length"
    );
    let n = d.len();
    let dim = n + 1;
    let finite = alpha.is_finite() && z.iter().chain(d).all(|v| v.is_finite());
    let scale = z
        .iter()
        .chain(d)
        .fold(alpha.abs(), |a, v| a.max(v.abs()))
        .max(z.iter().map(|v| v * v).sum::<f64>().sqrt());
    if !finite {
        return Err(Error::NonConvergence {
            dim,
            max_abs: scale,
            diag_span: f64::NAN,
        });
    }
    let tol = 8.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));

    // Deflation: negligible spokes, then (near-)coincident poles.
    let mut deflated: Vec<(f64, Vec<(usize, f64)>)> = Vec::new();
    let mut active: Vec<Slot> = Vec::with_capacity(n);
    for &j in &order {
        if z[j].abs() <= tol {
            deflated.push((d[j], vec![(j, 1.0)]));
            continue;
        }
        let slot = Slot {
            d: d[j],
            z: z[j],
            basis: vec![(j, 1.0)],
        };
        match active.last_mut() {
            Some(prev) if slot.d - prev.d <= tol => {
                let r = prev.z.hypot(slot.z);
                let (c, s) = (prev.z / r, slot.z / r);
                // Decoupled direction (−s·prev + c·slot) keeps its pole; the
                // coupled direction carries the combined spoke.
                let mut dead = Vec::with_capacity(prev.basis.len() + 1);
                dead.extend(prev.basis.iter().map(|&(i, w)| (i, -s * w)));
                dead.extend(slot.basis.iter().map(|&(i, w)| (i, c * w)));
                deflated.push((s * s * prev.d + c * c * slot.d, dead));
                let mut live = Vec::with_capacity(prev.basis.len() + 1);
                live.extend(prev.basis.iter().map(|&(i, w)| (i, c * w)));
                live.extend(slot.basis.iter().map(|&(i, w)| (i, s * w)));
                prev.d = c * c * prev.d + s * s * slot.d;
                prev.z = r;
                prev.basis = live;
            }
            _ => active.push(slot),
        }
    }

    let r = active.len();
    let ds: Vec<f64> = active.iter().map(|s| s.d).collect();
    let zs: Vec<f64> = active.iter().map(|s| s.z).collect();
    let znorm = zs.iter().map(|v| v * v).sum::<f64>().sqrt();

    let roots: Vec<Root> = if r == 0 {
        Vec::new()
    } else {
        (0..=r)
            .into_par_iter()
            .map(|i| secular_root(alpha, &zs, &ds, znorm, i))
            .collect::<Result<_>>()?
    };

    let mut values = Vec::with_capacity(dim);
    let mut vectors = DMatrix::zeros(dim, dim);
    let mut col = 0;

    if r == 0 {
        values.push(alpha);
        vectors[(0, col)] = 1.0;
        col += 1;
    } else {
        let gap = |i: usize, j: usize| -> f64 {
            // λ_i − d_j, formed from pole differences to avoid cancellation.
            let root = roots[i];
            (ds[root.pole] - ds[j]) + root.offset
        };
        let zhat: Vec<f64> = (0..r)
            .into_par_iter()
            .map(|j| {
                let mut prod = gap(j, j) * gap(j + 1, j);
                for k in 0..r {
                    if k < j {
                        prod *= gap(k, j) / (ds[k] - ds[j]);
                    } else if k > j {
                        prod *= gap(k + 1, j) / (ds[k] - ds[j]);
                    }
                }
                // prod = −ẑ_j²
                (-prod).max(0.0).sqrt().copysign(zs[j])
            })
            .collect();
        let columns: Vec<(f64, Vec<f64>)> = (0..=r)
            .into_par_iter()
            .map(|i| {
                let root = roots[i];
                let lambda = ds[root.pole] + root.offset;
                let mut u: Vec<f64> = (0..r).map(|j| zhat[j] / gap(i, j)).collect();
                let norm = (1.0 + u.iter().map(|v| v * v).sum::<f64>()).sqrt();
                u.iter_mut().for_each(|v| *v /= norm);
                u.insert(0, 1.0 / norm);
                (lambda, u)
            })
            .collect();
        for (lambda, u) in columns {
            values.push(lambda);
            vectors[(0, col)] = u[0];
            for (slot, &w) in active.iter().zip(&u[1..]) {
                for &(j, c) in &slot.basis {
                    vectors[(1 + j, col)] += c * w;
                }
            }
            col += 1;
        }
    }
    for (value, basis) in deflated {
        values.push(value);
        for (j, c) in basis {
            vectors[(1 + j, col)] = c;
        }
        col += 1;
    }
    debug_assert_eq!(col, dim);
    Ok(Eigen::from_unsorted(values, vectors))
}

/// Root `i` of f(λ) = α − λ + Σ z_j²/(λ − d_j) for strictly increasing `d`.
/// Root 0 lies below d_0, root r above d_{r−1}, root i in (d_{i−1}, d_i).
fn secular_root(alpha: f64, z: &[f64], d: &[f64], znorm: f64, i: usize) -> Result<Root> {
    let r = d.len();
    // Outer roots lie within ‖z‖ of the extreme diagonal entries; the factor 2
    // keeps f strictly signed at the bracket ends.
    let (pole, lo, hi) = if i == 0 {
        let bottom = alpha.min(d[0]) - 2.0 * znorm;
        (0, bottom - d[0], 0.0)
    } else if i == r {
        let top = alpha.max(d[r - 1]) + 2.0 * znorm;
        (r - 1, 0.0, top - d[r - 1])
    } else {
        let mid = 0.5 * (d[i - 1] + d[i]);
        let f_mid = alpha - mid
            + z.iter()
                .zip(d)
                .map(|(zj, dj)| zj * zj / (mid - dj))
                .sum::<f64>();
        if f_mid >= 0.0 {
            (i, mid - d[i], 0.0)
        } else {
            (i - 1, 0.0, mid - d[i - 1])
        }
    };
    let shift = alpha - d[pole];
    // τ·f(d_p + τ): finite at τ = 0, equal to z_p² there.
    let scaled = |tau: f64| -> f64 {
        let mut acc = tau * (shift - tau) + z[pole] * z[pole];
        let mut s = 0.0;
        for (j, (zj, dj)) in z.iter().zip(d).enumerate() {
            if j != pole {
                s += zj * zj / ((d[pole] - dj) + tau);
            }
        }
        acc += tau * s;
        acc
    };
    let offset = brent(scaled, lo, hi).ok_or(Error::NonConvergence {
        dim: r + 1,
        max_abs: znorm.max(alpha.abs()),
        diag_span: d[r - 1] - d[0],
    })?;
    Ok(Root { pole, offset })
}

/// Brent's bracketing root finder, iterated to machine precision.
fn brent(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Option<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let (mut c, mut fc) = (a, fa);
    let mut e = b - a;
    let mut step = e;
    for _ in 0..400 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            e = b - a;
            step = e;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + f64::MIN_POSITIVE;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Some(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let rb = fb / fc;
                p = s * (2.0 * m * qa * (qa - rb) - (b - a) * (rb - 1.0));
                q = (qa - 1.0) * (rb - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = step;
                step = p / q;
            } else {
                step = m;
                e = m;
            }
        } else {
            step = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if step.abs() > tol {
            step
        } else {
            tol.copysign(m)
        };
        fb = f(b);
    }
    None
}
