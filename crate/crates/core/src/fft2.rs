//! Two-dimensional complex FFT on row-major `n0 x n1` arrays.

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Planned forward/inverse transforms for one array shape.
#[derive(Clone)]
pub struct Fft2 {
    n0: usize,
    n1: usize,
    fwd0: Arc<dyn Fft<f64>>,
    fwd1: Arc<dyn Fft<f64>>,
    inv0: Arc<dyn Fft<f64>>,
    inv1: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Fft2({}x{})", self.n0, self.n1)
    }
}

impl Fft2 {
    pub fn new(n0: usize, n1: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n0,
            n1,
            fwd0: planner.plan_fft_forward(n0),
            fwd1: planner.plan_fft_forward(n1),
            inv0: planner.plan_fft_inverse(n0),
            inv1: planner.plan_fft_inverse(n1),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n0, self.n1)
    }

    pub fn len(&self) -> usize {
        self.n0 * self.n1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// In-place unnormalized forward transform, `Σ x_j e^{-2πi m·j/n}`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.fwd0, &self.fwd1);
    }

    /// In-place inverse transform including the `1/(n0 n1)` factor.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inv0, &self.inv1);
        let s = 1.0 / self.len() as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }

    fn run(&self, data: &mut [Complex64], t0: &Arc<dyn Fft<f64>>, t1: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len(), self.len());
        // rows are contiguous
        t1.process(data);
        let mut col = vec![Complex64::new(0.0, 0.0); self.n0];
        let mut scratch = vec![Complex64::new(0.0, 0.0); t0.get_inplace_scratch_len()];
        for j in 0..self.n1 {
            for i in 0..self.n0 {
                col[i] = data[i * self.n1 + j];
            }
            t0.process_with_scratch(&mut col, &mut scratch);
            for i in 0..self.n0 {
                data[i * self.n1 + j] = col[i];
            }
        }
    }
}

/// Shared plan for a shape; planning is done once per process.
pub fn plan(n0: usize, n1: usize) -> Fft2 {
    static PLANS: OnceLock<Mutex<HashMap<(usize, usize), Fft2>>> = OnceLock::new();
    let mut cache = PLANS
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .unwrap();
    cache
        .entry((n0, n1))
        .or_insert_with(|| Fft2::new(n0, n1))
        .clone()
}

/// Signed frequency index of bin `j` for length `n`.
pub fn signed_index(j: usize, n: usize) -> i64 {
    if j < n.div_ceil(2) {
        j as i64
    } else {
        j as i64 - n as i64
    }
}
