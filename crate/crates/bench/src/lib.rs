//! Shared fixtures for the criterion benchmarks.

use mce_core::{BrownianPath, RandomStream, SdeModel};

/// A fixed Ginzburg–Landau path of depth `depth` and its increments at `2^depth` steps.
pub fn gl_fixture(depth: u32) -> (SdeModel, BrownianPath, Vec<f64>) {
    let model = SdeModel::ginzburg_landau();
    let path = BrownianPath::sample(RandomStream::new(2024, 1), model.horizon(), depth).expect("valid depth");
    let incs = path.increments(1 << depth).expect("power of two");
    (model, path, incs)
}
