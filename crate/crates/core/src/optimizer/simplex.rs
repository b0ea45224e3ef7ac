//! Nelder–Mead downhill simplex for small fixed-size problems.

/// Outcome of one simplex run.
#[derive(Clone, Copy, Debug)]
pub struct SimplexResult<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimises `f` starting from an axis-aligned simplex of edge `step` at `x0`.
///
/// Stops when the spread of function values over the simplex is at most
/// `tolerance` or after `max_iterations` iterations. The starting point is a
/// vertex of the initial simplex, so the returned value never exceeds `f(x0)`.
pub fn minimize<const N: usize, F>(
    f: F,
    x0: [f64; N],
    step: f64,
    tolerance: f64,
    max_iterations: usize,
) -> SimplexResult<N>
where
    F: Fn(&[f64; N]) -> f64,
{
    let mut evaluations = 0;
    let mut eval = |x: &[f64; N]| {
        evaluations += 1;
        f(x)
    };

    let mut vertices: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    vertices.push((x0, eval(&x0)));
    for i in 0..N {
        let mut x = x0;
        x[i] += step;
        let fx = eval(&x);
        vertices.push((x, fx));
    }

    let mut converged = false;
    for _ in 0..max_iterations {
        // stable sort keeps earlier vertices first among equal values
        vertices.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = vertices[0].1;
        let worst = vertices[N].1;
        if (worst - best).abs() <= tolerance {
            converged = true;
            break;
        }

        let mut centroid = [0.0; N];
        for (x, _) in &vertices[..N] {
            for k in 0..N {
                centroid[k] += x[k] / N as f64;
            }
        }
        let along = |t: f64| {
            let mut y = [0.0; N];
            for k in 0..N {
                y[k] = centroid[k] + t * (vertices[N].0[k] - centroid[k]);
            }
            y
        };

        let xr = along(-REFLECTION);
        let fr = eval(&xr);
        if fr < best {
            let xe = along(-EXPANSION);
            let fe = eval(&xe);
            vertices[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < vertices[N - 1].1 {
            vertices[N] = (xr, fr);
            continue;
        }

        let (xc, fc) = if fr < worst {
            let xc = along(-CONTRACTION);
            (xc, eval(&xc))
        } else {
            let xc = along(CONTRACTION);
            (xc, eval(&xc))
        };
        if fc < worst.min(fr) {
            vertices[N] = (xc, fc);
            continue;
        }

        let x_best = vertices[0].0;
        for v in vertices.iter_mut().skip(1) {
            for (x, b) in v.0.iter_mut().zip(x_best) {
                *x = b + SHRINK * (*x - b);
            }
            v.1 = eval(&v.0);
        }
    }

    vertices.sort_by(|a, b| a.1.total_cmp(&b.1));
    SimplexResult {
        x: vertices[0].0,
        value: vertices[0].1,
        evaluations,
        converged,
    }
}
