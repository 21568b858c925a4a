//! Truncated n-mode Fock space and the operator matrices acting on it.

mod builders;
mod check;
mod matrix;
pub mod relations;
mod space;

pub use builders::{
    build_annihilator, build_creator, build_fock_state, build_number, build_scale,
    build_scale_product,
};
pub use check::{check_relation, sector_residual, CheckReport, Expectation};
pub use matrix::{LinearMap, OpProduct, OperatorMatrix, StateVector};
pub use space::{FockSpace, MultiIndex, SafeSector};

use crate::error::Result;
use crate::qcore::QParam;

/// `Q_from ... Q_n` written out for report labels.
pub(crate) fn scale_product_label(from: usize, n: usize) -> String {
    match from.cmp(&n) {
        std::cmp::Ordering::Less => format!("Q{from}...Q{n}"),
        std::cmp::Ordering::Equal => format!("Q{n}"),
        std::cmp::Ordering::Greater => "1".to_string(),
    }
}

/// All single-mode building blocks of one space, built once.
#[derive(Debug, Clone)]
pub struct ModeOperators {
    annihilators: Vec<OperatorMatrix>,
    creators: Vec<OperatorMatrix>,
    numbers: Vec<OperatorMatrix>,
    scales: Vec<OperatorMatrix>,
    scale_products: Vec<OperatorMatrix>,
}

impl ModeOperators {
    pub fn new(space: &FockSpace, qp: &QParam) -> Result<Self> {
        let n = space.n_modes();
        let modes = 1..=n;
        Ok(ModeOperators {
            annihilators: modes.clone().map(|i| build_annihilator(space, qp, i)).collect::<Result<_>>()?,
            creators: modes.clone().map(|i| build_creator(space, qp, i)).collect::<Result<_>>()?,
            numbers: modes.clone().map(|i| build_number(space, i)).collect::<Result<_>>()?,
            scales: modes.map(|i| build_scale(space, qp, i)).collect::<Result<_>>()?,
            scale_products: (1..=n + 1)
                .map(|i| build_scale_product(space, qp, i))
                .collect::<Result<_>>()?,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.annihilators.len()
    }

    pub fn annihilator(&self, mode: usize) -> &OperatorMatrix {
        &self.annihilators[mode - 1]
    }

    pub fn creator(&self, mode: usize) -> &OperatorMatrix {
        &self.creators[mode - 1]
    }

    pub fn number(&self, mode: usize) -> &OperatorMatrix {
        &self.numbers[mode - 1]
    }

    pub fn scale(&self, mode: usize) -> &OperatorMatrix {
        &self.scales[mode - 1]
    }

    /// `Q_mode ... Q_n`; `mode = n + 1` is the identity.
    pub fn scale_product(&self, mode: usize) -> &OperatorMatrix {
        &self.scale_products[mode - 1]
    }

    /// `a†_i a_i`
    pub fn number_product(&self, mode: usize) -> Result<OperatorMatrix> {
        self.creator(mode).mul(self.annihilator(mode))
    }
}
