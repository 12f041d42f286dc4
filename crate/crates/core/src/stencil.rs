//! Finite-difference weights on arbitrary nodes (Fornberg's recursion).

/// Weights `w[k][i]` such that `f^(k)(z) ≈ Σ_i w[k][i] f(x_i)` for `k ≤ max_order`.
pub fn fornberg_weights(z: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Stencil width giving eighth-order accuracy for derivative `order` (1..=3).
pub fn eighth_order_width(order: usize) -> usize {
    if order <= 2 {
        9
    } else {
        11
    }
}

/// Integer-offset weights for derivative `order` at offset 0 of `offsets`,
/// in units of a unit grid spacing.
pub fn offset_weights(order: usize, offsets: &[i64]) -> Vec<f64> {
    let nodes: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
    fornberg_weights(0.0, &nodes, order).swap_remove(order)
}
