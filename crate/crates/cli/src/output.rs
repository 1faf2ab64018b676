//! CSV tables.

use gpc_core::classical::{stochastic_map, wigner_evolution_from_eigen};

use crate::error::Result;
use crate::pipeline::{GammaColumns, Outcome};

/// Column-oriented table; every column has one value per grid node.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    fn push(&mut self, name: String, values: Vec<f64>) {
        self.header.push(name);
        self.columns.push(values);
    }

    /// Header row, then one row per node with `{:.16e}` values (17
    /// significant digits, so values round-trip exactly).
    pub fn to_csv(&self) -> String {
        let rows = self.columns.first().map_or(0, Vec::len);
        let mut out = self.header.join(",");
        out.push('\n');
        for j in 0..rows {
            let row: Vec<String> = self.columns.iter().map(|c| format!("{:.16e}", c[j])).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn time_column(outcome: &Outcome) -> Vec<f64> {
    outcome.grid().nodes().collect()
}

fn push_lambda_p(table: &mut Table, outcome: &Outcome) {
    for (a, l) in outcome.trajectory.eigenvalues().iter().enumerate() {
        table.push(format!("lambda_{}", a + 1), l.values().to_vec());
    }
    for (a, p) in outcome.trajectory.probabilities().iter().enumerate() {
        table.push(format!("p_{a}"), p.values().to_vec());
    }
}

fn push_gamma(table: &mut Table, outcome: &Outcome) {
    let n = outcome.grid().len();
    match &outcome.gamma {
        Some(GammaColumns::Rates(r)) => {
            for (a, g) in r.gamma().iter().enumerate() {
                table.push(format!("gamma_{}", a + 1), g.values().to_vec());
            }
        }
        Some(GammaColumns::Undefined(_)) => {
            for a in 0..=outcome.d() {
                table.push(format!("gamma_{}", a + 1), vec![f64::NAN; n]);
            }
        }
        None => {}
    }
}

/// `T^(α)` entries, column-major per α, named `T{α}_r{i}c{j}`.
fn push_stochastic(table: &mut Table, outcome: &Outcome) -> Result<()> {
    let d = outcome.d();
    let n = outcome.grid().len();
    for alpha in 0..=d {
        let maps = (0..n)
            .map(|j| Ok(stochastic_map(&outcome.trajectory.state_at(j)?, alpha)?))
            .collect::<Result<Vec<_>>>()?;
        for c in 0..d {
            for r in 0..d {
                table.push(format!("T{}_r{r}c{c}", alpha + 1), maps.iter().map(|m| m.matrix()[(r, c)]).collect());
            }
        }
    }
    Ok(())
}

/// Qubit phase-space map `S`, column-major, named `S_r{i}c{j}`.
fn push_wigner(table: &mut Table, outcome: &Outcome) -> Result<()> {
    let maps = wigner_evolution_from_eigen(&outcome.trajectory)?;
    for c in 0..4 {
        for r in 0..4 {
            table.push(format!("S_r{r}c{c}"), maps.iter().map(|m| m[(r, c)]).collect());
        }
    }
    Ok(())
}

/// `t, lambda_*, p_*`, then the optional gamma, T and S blocks.
pub fn trajectory_table(outcome: &Outcome, gamma: bool, classical: bool, wigner: bool) -> Result<Table> {
    let mut table = Table::default();
    table.push("t".into(), time_column(outcome));
    push_lambda_p(&mut table, outcome);
    if gamma {
        push_gamma(&mut table, outcome);
    }
    if classical {
        push_stochastic(&mut table, outcome)?;
    }
    if wigner {
        push_wigner(&mut table, outcome)?;
    }
    Ok(table)
}

pub fn classical_table(outcome: &Outcome) -> Result<Table> {
    let mut table = Table::default();
    table.push("t".into(), time_column(outcome));
    push_stochastic(&mut table, outcome)?;
    Ok(table)
}

pub fn wigner_table(outcome: &Outcome) -> Result<Table> {
    let mut table = Table::default();
    table.push("t".into(), time_column(outcome));
    push_wigner(&mut table, outcome)?;
    Ok(table)
}
