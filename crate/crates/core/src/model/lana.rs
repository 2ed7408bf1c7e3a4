//! Budget allocation model for six bean products (K1..K6) of the LANA food
//! company, with the two reference production plans reported for it.

use super::{build_model, Constraint, LpModel, Relation, Sense};

/// Profit per unit of K1..K6.
const PROFIT: [f64; 6] = [8.073, 6.398, 3.9965, 5.943, 5.52175, 7.1955];

/// Right-hand side of the profit cap row, which is also the optimal profit.
pub const LANA_PROFIT_CAP: f64 = 765_056.25;

/// Reference plan computed with WinQSB (profit 765,005 after rounding).
pub const REFERENCE_WINQSB: [f64; 6] = [40053.0, 16750.0, 8801.0, 2200.0, 48971.0, 2201.0];

/// Reference plan computed with QM (profit 765,056 after rounding).
pub const REFERENCE_QM: [f64; 6] = [22856.0, 33619.0, 8800.0, 2200.0, 54579.0, 2200.0];

fn unit(j: usize) -> Vec<f64> {
    let mut v = vec![0.0; 6];
    v[j] = 1.0;
    v
}

pub fn lana_instance() -> LpModel {
    use Relation::{Ge, Le};

    let mut rows = vec![
        Constraint::new("total_min", vec![1.0; 6], Ge, 74_500.0),
        Constraint::new("total_max", vec![1.0; 6], Le, 130_000.0),
        Constraint::new(
            "revenue_min",
            vec![29.601, 19.194, 21.5811, 22.923, 21.2375, 19.188],
            Ge,
            1_823_806.45,
        ),
        Constraint::new("profit_min", PROFIT.to_vec(), Ge, 467_663.125),
        Constraint::new("profit_cap", PROFIT.to_vec(), Le, LANA_PROFIT_CAP),
        Constraint::new("capacity_1", vec![0.5, 1.0, 0.5, 0.25, 0.0, 0.0], Le, 50_000.0),
        Constraint::new("capacity_2", vec![0.25, 0.0, 0.25, 0.25, 0.5, 0.0], Le, 40_000.0),
        Constraint::new("capacity_3", vec![0.25, 0.0, 0.25, 0.5, 0.5, 1.0], Le, 40_000.0),
    ];
    let minimums = [11_000.0, 2_200.0, 8_800.0, 2_200.0, 4_400.0, 2_200.0];
    for (j, &lo) in minimums.iter().enumerate() {
        rows.push(Constraint::new(format!("k{}_min", j + 1), unit(j), Ge, lo));
    }
    rows.push(Constraint::new("k6_max", unit(5), Le, 6_500.0));

    build_model(
        Sense::Maximize,
        (1..=6).map(|j| format!("K{j}")).collect(),
        PROFIT.to_vec(),
        rows,
    )
    .expect("LANA fixture is well formed")
}
