// Copyright 2026 The qitime Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Plain-text table of the closed-form bounds and query counts per
//! expansion order.

use std::fmt::Write as _;

use qitime::bounds::{
    min_distance_bound, min_distance_bound_asymptotic, resource_counts, tau_bar_star,
    truncation_bound, truncation_order_for_error,
};
use qitime::Result;

use crate::config::ExperimentConfig;
use crate::sweep::model_spectral;

/// One line per configured order: register widths, query counts, the
/// crossover-time lower bound, both minimal-distance bounds, and an
/// inverse check that the order formula recovers N from its own bound.
pub fn bounds_report(cfg: &ExperimentConfig) -> Result<String> {
    let (sd, terms, dim) = model_spectral(cfg)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "spectral gap {:.6}, ground overlap {:.6}, excited overlap {:.6}",
        sd.delta_e, sd.psi_ground, sd.psi_exc
    );
    let _ = writeln!(
        out,
        "{:>4} {:>7} {:>8} {:>9} {:>9} {:>10} {:>12} {:>8}",
        "N", "n_abar", "select", "prepare", "tau_bar", "bound", "asymptotic", "N_check"
    );
    for &order in &cfg.orders {
        let rc = resource_counts(order, terms, dim)?;
        let tau_bar = tau_bar_star(&sd, order)?;
        let bound = min_distance_bound(&sd, order)?;
        let asymptotic = min_distance_bound_asymptotic(&sd, order)?;
        // the inverse check only applies while the remainder bound is
        // meaningful (below one)
        let eps = truncation_bound(tau_bar, order);
        let n_check = if eps < 1.0 {
            truncation_order_for_error(tau_bar, eps)?.to_string()
        } else {
            "-".to_string()
        };
        let _ = writeln!(
            out,
            "{:>4} {:>7} {:>8} {:>9} {:>9.4} {:>10.4} {:>12.4e} {:>8}",
            order,
            rc.expansion_qubits,
            rc.select_queries,
            rc.prepare_queries,
            tau_bar,
            bound,
            asymptotic,
            n_check
        );
    }
    if let Some(&n_max) = cfg.orders.iter().max() {
        let rc = resource_counts(n_max, terms, dim)?;
        let _ = writeln!(
            out,
            "qubits at N = {n_max}: {} system + {} encoding + {} expansion = {} total",
            rc.system_qubits, rc.encoding_qubits, rc.expansion_qubits, rc.total_qubits
        );
        let _ = writeln!(
            out,
            "non-Clifford cost order N^2 L log2(L) + N log2(N) ~ {:.3e} at N = {n_max}",
            rc.toffoli_order
        );
    }
    Ok(out)
}
