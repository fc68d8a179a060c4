//! Gauss–Legendre reference panels: nodes, weights, barycentric Lagrange
//! interpolation, differentiation and cumulative integration on `[-1, 1]`.

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        // Tricomi initial guess, refined by Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Barycentric weights for an arbitrary node set.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    (0..nodes.len())
        .map(|j| {
            let prod: f64 = (0..nodes.len())
                .filter(|&k| k != j)
                .map(|k| nodes[j] - nodes[k])
                .product();
            1.0 / prod
        })
        .collect()
}

/// Values `l_j(x)` of every Lagrange basis polynomial at `x`.
pub fn lagrange_basis(nodes: &[f64], bary: &[f64], x: f64) -> Vec<f64> {
    if let Some(j) = nodes.iter().position(|&xj| xj == x) {
        let mut out = vec![0.0; nodes.len()];
        out[j] = 1.0;
        return out;
    }
    let terms: Vec<f64> = nodes
        .iter()
        .zip(bary)
        .map(|(&xj, &wj)| wj / (x - xj))
        .collect();
    let denom: f64 = terms.iter().sum();
    terms.into_iter().map(|t| t / denom).collect()
}

/// A Gauss–Legendre panel on `[-1, 1]` with its precomputed operators.
#[derive(Debug, Clone)]
pub struct ReferencePanel {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub bary: Vec<f64>,
    /// `diff[i * order + j] = l_j'(x_i)`
    pub diff: Vec<f64>,
    /// `cumulative[i * order + j] = ∫_{-1}^{x_i} l_j(x) dx`
    pub cumulative: Vec<f64>,
}

impl ReferencePanel {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        let bary = barycentric_weights(&nodes);
        let mut diff = vec![0.0; order * order];
        for i in 0..order {
            let mut diag = 0.0;
            for j in 0..order {
                if i != j {
                    let d = (bary[j] / bary[i]) / (nodes[i] - nodes[j]);
                    diff[i * order + j] = d;
                    diag -= d;
                }
            }
            diff[i * order + i] = diag;
        }
        let mut cumulative = vec![0.0; order * order];
        for i in 0..order {
            // Map the panel's own rule onto [-1, x_i]; exact for degree < 2·order.
            let half = 0.5 * (nodes[i] + 1.0);
            for (&xq, &wq) in nodes.iter().zip(&weights) {
                let x = -1.0 + half * (xq + 1.0);
                let basis = lagrange_basis(&nodes, &bary, x);
                for j in 0..order {
                    cumulative[i * order + j] += half * wq * basis[j];
                }
            }
        }
        Self { nodes, weights, bary, diff, cumulative }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Weights of the 4-point (or shorter) Lagrange interpolant through `xs` at `x`.
pub fn lagrange_weights_at(xs: &[f64], x: f64) -> Vec<f64> {
    (0..xs.len())
        .map(|j| {
            (0..xs.len())
                .filter(|&k| k != j)
                .map(|k| (x - xs[k]) / (xs[j] - xs[k]))
                .product()
        })
        .collect()
}
