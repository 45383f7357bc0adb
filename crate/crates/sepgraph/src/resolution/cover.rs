use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DeltaMatrix, ResolutionError};

/// The map from `⟨x_1..x_n, y_1..y_m | Σ x_i = Σ y_j⟩` to the free abelian
/// monoid on `a_ij` sending `x_i ↦ Σ_j δ_ij a_ij` and `y_j ↦ Σ_i δ_ij a_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeCover {
    delta: DeltaMatrix,
}

/// Coefficients `(xs, ys)` of `Σ xs_i x_i + Σ ys_j y_j`.
pub type Coefficients = (Vec<u64>, Vec<u64>);

/// Outcome of the exhaustive injectivity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityReport {
    pub checked: usize,
    /// Two distinct normal forms `(xs, ys)` with the same image.
    pub collision: Option<(Coefficients, Coefficients)>,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.collision.is_none()
    }
}

/// One sampled instance of `image(u) + v = image(u')`, with the preimage
/// of `v` found by solving for the shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitaritySample {
    pub u: Coefficients,
    pub u_prime: Coefficients,
    pub preimage: Option<Coefficients>,
}

impl FreeCover {
    pub fn new(delta: DeltaMatrix) -> Result<Self, ResolutionError> {
        let cols = delta.first().map_or(0, Vec::len);
        if delta.is_empty() || cols == 0 || delta.iter().any(|r| r.len() != cols) {
            return Err(ResolutionError::DeltaShape("free cover".into()));
        }
        if delta.iter().flatten().any(|&d| d == 0) {
            return Err(ResolutionError::NonPositiveDelta("free cover".into()));
        }
        Ok(FreeCover { delta })
    }

    pub fn rows(&self) -> usize {
        self.delta.len()
    }

    pub fn cols(&self) -> usize {
        self.delta[0].len()
    }

    /// Image of `Σ xs_i x_i + Σ ys_j y_j`: coefficient of `a_ij` at `i*m + j`,
    /// namely `(xs_i + ys_j) δ_ij`.
    pub fn image(&self, xs: &[u64], ys: &[u64]) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for (i, row) in self.delta.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                out.push((xs[i] + ys[j]) * d as u64);
            }
        }
        out
    }

    /// Each `a_ij` lies below the image of `x_i`.
    pub fn is_cofinal(&self) -> bool {
        (0..self.rows()).all(|i| {
            let mut xs = vec![0; self.rows()];
            xs[i] = 1;
            let img = self.image(&xs, &vec![0; self.cols()]);
            (0..self.cols()).all(|j| img[i * self.cols() + j] >= 1)
        })
    }

    /// Checks that distinct normal forms (some `ys_j = 0`, all coefficients
    /// at most `bound`) have distinct images.
    pub fn injectivity_test(&self, bound: u64) -> InjectivityReport {
        let (n, m) = (self.rows(), self.cols());
        let mut seen: HashMap<Vec<u64>, Coefficients> = HashMap::new();
        let mut checked = 0;
        for xs in tuples(n, bound) {
            for ys in tuples(m, bound).filter(|ys| ys.contains(&0)) {
                checked += 1;
                let img = self.image(&xs, &ys);
                if let Some(prev) = seen.insert(img, (xs.clone(), ys.clone())) {
                    return InjectivityReport {
                        checked,
                        collision: Some((prev, (xs, ys))),
                    };
                }
            }
        }
        InjectivityReport {
            checked,
            collision: None,
        }
    }

    /// Given `image(u) ≤ image(u')`, finds `w` with `image(u) + image(w) =
    /// image(u')` by the shift `t = max_i (xs_i - xs'_i)`, which is at most
    /// `min_j (ys'_j - ys_j)`.
    pub fn solve_difference(&self, u: &Coefficients, u_prime: &Coefficients) -> Option<Coefficients> {
        let lo = (0..self.rows())
            .map(|i| u.0[i] as i64 - u_prime.0[i] as i64)
            .max()?;
        let hi = (0..self.cols())
            .map(|j| u_prime.1[j] as i64 - u.1[j] as i64)
            .min()?;
        if lo > hi {
            return None;
        }
        let xs: Vec<u64> = (0..self.rows())
            .map(|i| (u_prime.0[i] as i64 + lo - u.0[i] as i64) as u64)
            .collect();
        let ys: Vec<u64> = (0..self.cols())
            .map(|j| (u_prime.1[j] as i64 - u.1[j] as i64 - lo) as u64)
            .collect();
        let (a, b) = (self.image(&u.0, &u.1), self.image(&u_prime.0, &u_prime.1));
        let diff: Vec<u64> = a.iter().zip(&b).map(|(x, y)| y - x).collect();
        (self.image(&xs, &ys) == diff).then_some((xs, ys))
    }

    /// Samples `u` and `w`, sets `u' = u + w` and rewrites `u'` by a random
    /// number of uses of `Σ x_i = Σ y_j` before solving for the difference.
    pub fn unitarity_samples(&self, seed: u64, samples: usize, bound: u64) -> Vec<UnitaritySample> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, m) = (self.rows(), self.cols());
        let draw = |len: usize, rng: &mut ChaCha8Rng| -> Vec<u64> {
            (0..len).map(|_| rng.gen_range(0..=bound)).collect()
        };
        (0..samples)
            .map(|_| {
                let u = (draw(n, &mut rng), draw(m, &mut rng));
                let w = (draw(n, &mut rng), draw(m, &mut rng));
                let mut up: Coefficients = (
                    u.0.iter().zip(&w.0).map(|(a, b)| a + b).collect(),
                    u.1.iter().zip(&w.1).map(|(a, b)| a + b).collect(),
                );
                let max_shift = *up.0.iter().min().expect("n >= 1");
                let shift = rng.gen_range(0..=max_shift);
                up.0.iter_mut().for_each(|x| *x -= shift);
                up.1.iter_mut().for_each(|y| *y += shift);
                let preimage = self.solve_difference(&u, &up);
                UnitaritySample {
                    u,
                    u_prime: up,
                    preimage,
                }
            })
            .collect()
    }
}

/// All `len`-tuples with entries in `0..=bound`, in lexicographic order.
fn tuples(len: usize, bound: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = (bound + 1).pow(len as u32);
    (0..total).map(move |mut code| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = code % (bound + 1);
            code /= bound + 1;
        }
        t
    })
}
