//! Reference computations that share no code with the core crate.

/// `F_0 = 0, F_1 = 1` by plain addition.
pub fn fib_iter(n: u64) -> i128 {
    let (mut a, mut b) = (0i128, 1i128);
    for _ in 0..n {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Symmetric `l`-excitation state of `n` two-level sites in the full
/// `2ⁿ`-dimensional product basis. Bit `i` set means site `i` is in `|1⟩`.
pub fn dicke_vector(n: u32, l: u32) -> Vec<f64> {
    let norm = binomial(n, l).sqrt().recip();
    (0..1usize << n).map(|b| if b.count_ones() == l { norm } else { 0.0 }).collect()
}

/// `Σᵢ σᵢ⁺` on a product-basis vector.
pub fn collective_raise(n: u32, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (b, &amp) in v.iter().enumerate() {
        for i in 0..n {
            if b & (1 << i) == 0 {
                out[b | (1 << i)] += amp;
            }
        }
    }
    out
}

/// `Σᵢ σᵢ⁻` on a product-basis vector.
pub fn collective_lower(n: u32, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (b, &amp) in v.iter().enumerate() {
        for i in 0..n {
            if b & (1 << i) != 0 {
                out[b & !(1 << i)] += amp;
            }
        }
    }
    out
}

/// `⟨v|Σᵢ σᵢ₃|v⟩` with `σ₃ = ½ diag(1, −1)` on `(|1⟩, |0⟩)`.
pub fn collective_s3(n: u32, v: &[f64]) -> f64 {
    v.iter()
        .enumerate()
        .map(|(b, &a)| a * a * (b.count_ones() as f64 - n as f64 / 2.0))
        .sum()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `max |u − c·w|`.
pub fn residual(u: &[f64], c: f64, w: &[f64]) -> f64 {
    u.iter().zip(w).map(|(x, y)| (x - c * y).abs()).fold(0.0, f64::max)
}

/// `−Σ Wₙ ln Wₙ` with `Wₙ = tanh²ⁿθ / cosh²θ`, summed until terms vanish.
pub fn entropy_by_weights(theta: f64) -> f64 {
    let c2 = theta.cosh().powi(2);
    let r = theta.tanh().powi(2);
    let mut s = 0.0;
    let mut w = 1.0 / c2;
    while w > 1e-300 {
        s -= w * w.ln();
        w *= r;
        if r == 0.0 {
            break;
        }
    }
    s
}

/// `d/dθ [ω sinh²θ − S(θ)/β]`.
pub fn free_energy_slope(theta: f64, omega: f64, beta: f64) -> f64 {
    let (s2, c2) = (theta.sinh().powi(2), theta.cosh().powi(2));
    let ds2 = 2.0 * theta.sinh() * theta.cosh();
    omega * ds2 - ds2 * (c2.ln() - s2.ln()) / beta
}
