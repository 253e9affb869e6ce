//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use nldiff_core::grid::mirror_pad_2d;
use nldiff_core::harmonic::{boundary_tables, build_basis};
use nldiff_core::synth::{SpikeTrain, TestCard};
use nldiff_core::{BoundaryTables, Image2D, Signal1D, SolverParams, Window2D};

pub fn spike_train(len: usize) -> Signal1D {
    let train = SpikeTrain {
        len,
        ..SpikeTrain::default()
    };
    train.generate(7).expect("valid spike train").noisy
}

pub fn test_card(n: usize) -> Image2D {
    TestCard::new(n)
        .and_then(|c| c.generate(0.05, 1))
        .expect("valid test card")
        .noisy
}

/// Default window with `modes` wavenumbers and `mesh` boundary points.
pub fn tables(modes: usize, mesh: usize) -> Arc<BoundaryTables> {
    let w = Window2D::square(2).expect("valid window");
    Arc::new(boundary_tables(&build_basis(w, modes), mesh).expect("valid tables"))
}

/// The test card padded for the default window.
pub fn padded_card(n: usize) -> Image2D {
    mirror_pad_2d(&test_card(n), 2, 2).expect("card is large enough")
}

pub fn params_1d() -> SolverParams {
    SolverParams {
        tau: 0.1,
        steps: 1,
        ..SolverParams::default()
    }
}
