//! Gaussian rules built from three-term recurrences.
//!
//! Nodes are the eigenvalues of the Jacobi matrix, located by Sturm-sequence
//! bisection and polished with Newton steps on the orthonormal polynomial.
//! Weights come from the Christoffel function `1 / sum_k p_k(x)^2`, which keeps
//! full relative accuracy even when the weights are tiny (Laguerre tails).

#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `sum_k p_k(x_i)^2` for each node; weights are its reciprocal.
    christoffel: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Weights multiplied by `exp(x_i)`. For Laguerre rules these are the
    /// weights with respect to plain Lebesgue measure on the half line.
    pub fn exp_scaled_weights(&self) -> Vec<f64> {
        self.nodes
            .iter()
            .zip(&self.christoffel)
            .map(|(x, s)| (x - s.ln()).exp())
            .collect()
    }

    /// Affine map of a rule on [-1, 1] onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nodes = self.nodes.iter().map(|x| mid + half * x).collect();
        let weights = self.weights.iter().map(|w| w * half).collect();
        (nodes, weights)
    }
}

/// Monic recurrence `p_{k+1} = (x - diag_k) p_k - offdiag2_k p_{k-1}` together
/// with the zeroth moment of the weight function.
struct Recurrence {
    diag: Vec<f64>,
    /// `beta_k` for k = 1..n-1 (index 0 unused).
    beta: Vec<f64>,
    mu0: f64,
}

impl Recurrence {
    fn sturm_count(&self, x: f64) -> usize {
        // Number of eigenvalues strictly below x.
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for k in 1..self.diag.len() {
            let prev = if q == 0.0 { f64::EPSILON * (1.0 + x.abs()) } else { q };
            q = (self.diag[k] - x) - self.beta[k] / prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let off = |k: usize| if k >= 1 && k < n { self.beta[k].sqrt() } else { 0.0 };
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..n {
            let r = off(k) + off(k + 1);
            lo = lo.min(self.diag[k] - r);
            hi = hi.max(self.diag[k] + r);
        }
        (lo, hi)
    }

    /// Orthonormal polynomial values: returns (p_n(x), p_n'(x), sum_{k<n} p_k(x)^2).
    fn evaluate(&self, x: f64) -> (f64, f64, f64) {
        let n = self.diag.len();
        let mut p_prev = 0.0;
        let mut dp_prev = 0.0;
        let mut p = 1.0 / self.mu0.sqrt();
        let mut dp = 0.0;
        let mut sum = 0.0;
        for k in 0..n {
            sum += p * p;
            let sb_next = if k + 1 < n { self.beta[k + 1].sqrt() } else { 1.0 };
            let sb = if k >= 1 { self.beta[k].sqrt() } else { 0.0 };
            let p_next = ((x - self.diag[k]) * p - sb * p_prev) / sb_next;
            let dp_next = (p + (x - self.diag[k]) * dp - sb * dp_prev) / sb_next;
            p_prev = p;
            dp_prev = dp;
            p = p_next;
            dp = dp_next;
        }
        (p, dp, sum)
    }

    fn rule(&self) -> GaussRule {
        let n = self.diag.len();
        let (glo, ghi) = self.gershgorin();
        let mut nodes = Vec::with_capacity(n);
        for k in 0..n {
            // k-th smallest eigenvalue: sturm_count(x) <= k < sturm_count(y).
            let (mut lo, mut hi) = (glo, ghi);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.sturm_count(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let mut x = 0.5 * (lo + hi);
            for _ in 0..3 {
                let (p, dp, _) = self.evaluate(x);
                if dp == 0.0 || !dp.is_finite() {
                    break;
                }
                let step = p / dp;
                let candidate = x - step;
                if (candidate - x).abs() <= (hi - lo).abs().max(1e-15 * (1.0 + x.abs())) * 4.0 {
                    x = candidate;
                } else {
                    break;
                }
            }
            nodes.push(x);
        }
        let christoffel: Vec<f64> = nodes.iter().map(|&x| self.evaluate(x).2).collect();
        let weights = christoffel.iter().map(|s| 1.0 / s).collect();
        GaussRule { nodes, weights, christoffel }
    }
}

/// Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> GaussRule {
    assert!(n >= 1, "Gauss rule needs at least one node");
    gauss_jacobi(n, 0.0, 0.0)
}

/// Gauss-Laguerre rule for the weight `exp(-x)` on (0, inf).
pub fn gauss_laguerre(n: usize) -> GaussRule {
    assert!(n >= 1, "Gauss rule needs at least one node");
    let diag = (0..n).map(|k| 2.0 * k as f64 + 1.0).collect();
    let beta = (0..n).map(|k| (k * k) as f64).collect();
    Recurrence { diag, beta, mu0: 1.0 }.rule()
}

/// Gauss-Jacobi rule for the weight `(1 - x)^a (1 + x)^b` on [-1, 1].
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> GaussRule {
    assert!(n >= 1, "Gauss rule needs at least one node");
    assert!(a > -1.0 && b > -1.0, "Jacobi exponents must exceed -1");
    let ab = a + b;
    let mut diag = Vec::with_capacity(n);
    let mut beta = vec![0.0; n];
    for k in 0..n {
        let kf = k as f64;
        let d = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        diag.push(d);
        if k >= 1 {
            let s = 2.0 * kf + ab;
            beta[k] = if k == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
        }
    }
    let mu0 = 2f64.powf(ab + 1.0) * beta_fn(a + 1.0, b + 1.0);
    Recurrence { diag, beta, mu0 }.rule()
}

fn beta_fn(x: f64, y: f64) -> f64 {
    (libm::lgamma(x) + libm::lgamma(y) - libm::lgamma(x + y)).exp()
}
