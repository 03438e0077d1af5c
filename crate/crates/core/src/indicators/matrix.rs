use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::HourlySeries;

use super::{Column, Indicator, WindowSpec};

/// Window lengths for the TA block: one default plus per-indicator overrides.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TaConfig {
    #[serde(default)]
    pub window: WindowSpec,
    #[serde(default)]
    pub overrides: BTreeMap<Indicator, WindowSpec>,
}

impl TaConfig {
    pub fn window_for(&self, ind: Indicator) -> WindowSpec {
        self.overrides.get(&ind).copied().unwrap_or(self.window)
    }

    /// Shortest series for which every column has at least one defined row.
    pub fn min_len(&self) -> usize {
        Indicator::ALL
            .iter()
            .map(|i| i.warm_up(self.window_for(*i).get()) + 1)
            .max()
            .unwrap_or(1)
    }
}

/// The 30-column technical-analysis feature block.
#[derive(Debug, Clone, PartialEq)]
pub struct TaMatrix<T> {
    columns: Vec<(Indicator, Column<T>)>,
}

impl<T: Scalar> TaMatrix<T> {
    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, |(_, c)| c.len())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.columns.iter().map(|(i, _)| i.name()).collect()
    }

    pub fn column(&self, ind: Indicator) -> Option<&Column<T>> {
        self.columns.iter().find(|(i, _)| *i == ind).map(|(_, c)| c)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Indicator, &Column<T>)> {
        self.columns.iter().map(|(i, c)| (*i, c))
    }

    pub fn row(&self, r: usize) -> Vec<Option<T>> {
        self.columns.iter().map(|(_, c)| c[r]).collect()
    }
}

/// Computes every indicator over a complete (imputed) series.
pub fn ta_feature_matrix<T: Scalar>(s: &HourlySeries<T>, cfg: &TaConfig) -> Result<TaMatrix<T>> {
    s.require_complete()?;
    let needed = cfg.min_len();
    if s.len() < needed {
        return Err(Error::TooShort {
            needed,
            have: s.len(),
        });
    }
    let ys = s.values();
    let columns = Indicator::ALL
        .par_iter()
        .map(|ind| (*ind, ind.compute(ys, cfg.window_for(*ind))))
        .collect();
    Ok(TaMatrix { columns })
}
