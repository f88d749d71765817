//! Two-way fixed-effects ANOVA with Type II sums of squares.
//!
//! Sums of squares come from nested least-squares fits, so unbalanced
//! designs are handled without closed-form shortcuts:
//!
//! * `SS(A | B)   = RSS(B) − RSS(A + B)`
//! * `SS(B | A)   = RSS(A) − RSS(A + B)`
//! * `SS(AB | A,B) = RSS(A + B) − RSS(cells)`
//!
//! If any combination of present levels has no observations the interaction
//! is not fitted; main effects and the residual then come from the additive
//! model and a warning is attached to the table.

use nalgebra::{DMatrix, DVector};

use crate::distributions::f_upper_p;
use crate::summary::compensated_sum;
use crate::StatsError;

const SS_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub a: usize,
    pub b: usize,
    pub value: f64,
}

/// Observations classified by two declared factors.
#[derive(Debug, Clone)]
pub struct ObservationTable {
    factor_a: String,
    factor_b: String,
    levels_a: Vec<String>,
    levels_b: Vec<String>,
    rows: Vec<Observation>,
}

impl ObservationTable {
    pub fn new<S: Into<String>>(
        factor_a: S,
        levels_a: Vec<String>,
        factor_b: S,
        levels_b: Vec<String>,
    ) -> Self {
        Self {
            factor_a: factor_a.into(),
            factor_b: factor_b.into(),
            levels_a,
            levels_b,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, level_a: &str, level_b: &str, value: f64) -> Result<(), StatsError> {
        let a = self.levels_a.iter().position(|l| l == level_a).ok_or_else(|| {
            StatsError::Domain(format!("level {level_a:?} is not declared for {}", self.factor_a))
        })?;
        let b = self.levels_b.iter().position(|l| l == level_b).ok_or_else(|| {
            StatsError::Domain(format!("level {level_b:?} is not declared for {}", self.factor_b))
        })?;
        if !value.is_finite() {
            return Err(StatsError::Domain(format!("non-finite observation {value}")));
        }
        self.rows.push(Observation { a, b, value });
        Ok(())
    }

    pub fn rows(&self) -> &[Observation] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn levels_a(&self) -> &[String] {
        &self.levels_a
    }

    pub fn levels_b(&self) -> &[String] {
        &self.levels_b
    }

    pub fn factor_names(&self) -> (&str, &str) {
        (&self.factor_a, &self.factor_b)
    }

    pub fn cell_count(&self, a: usize, b: usize) -> usize {
        self.rows.iter().filter(|r| r.a == a && r.b == b).count()
    }

    /// Values at one level of factor A, in insertion order.
    pub fn values_at_a(&self, a: usize) -> Vec<f64> {
        self.rows.iter().filter(|r| r.a == a).map(|r| r.value).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectKind {
    FactorA,
    FactorB,
    Interaction,
    Residual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnovaEffect {
    pub kind: EffectKind,
    pub name: String,
    pub ss: f64,
    pub df: f64,
    pub ms: f64,
    /// `None` on the residual row.
    pub f: Option<f64>,
    pub p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnovaTable {
    pub effects: Vec<AnovaEffect>,
    pub n: usize,
    pub nonempty_cells: usize,
    pub interaction_fitted: bool,
    /// All observations identical: every SS is zero.
    pub degenerate: bool,
    pub warnings: Vec<String>,
}

impl AnovaTable {
    pub fn effect(&self, kind: EffectKind) -> Option<&AnovaEffect> {
        self.effects.iter().find(|e| e.kind == kind)
    }

    pub fn residual(&self) -> &AnovaEffect {
        self.effect(EffectKind::Residual).expect("residual row is always present")
    }
}

/// Residual sum of squares of the least-squares fit of `y` on `x`.
fn residual_ss(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<f64, StatsError> {
    if x.ncols() == 0 {
        return Ok(compensated_sum(y.iter().map(|v| v * v)));
    }
    let svd = x.clone().svd(true, true);
    let beta = svd
        .solve(y, 1e-12)
        .map_err(|e| StatsError::Domain(format!("least-squares fit failed: {e}")))?;
    let fitted = x * beta;
    Ok(compensated_sum(y.iter().zip(fitted.iter()).map(|(a, b)| (a - b) * (a - b))))
}

struct Design<'a> {
    rows: &'a [Observation],
    present_a: Vec<usize>,
    present_b: Vec<usize>,
    cells: Vec<(usize, usize)>,
}

impl Design<'_> {
    /// Intercept plus treatment-coded dummies for the requested terms.
    fn matrix(&self, with_a: bool, with_b: bool, cell_means: bool) -> DMatrix<f64> {
        let mut columns: Vec<Box<dyn Fn(&Observation) -> f64>> = Vec::new();
        if cell_means {
            for &(a, b) in &self.cells {
                columns.push(Box::new(move |o| f64::from(u8::from(o.a == a && o.b == b))));
            }
        } else {
            columns.push(Box::new(|_| 1.0));
            if with_a {
                for &a in self.present_a.iter().skip(1) {
                    columns.push(Box::new(move |o| f64::from(u8::from(o.a == a))));
                }
            }
            if with_b {
                for &b in self.present_b.iter().skip(1) {
                    columns.push(Box::new(move |o| f64::from(u8::from(o.b == b))));
                }
            }
        }
        DMatrix::from_fn(self.rows.len(), columns.len(), |i, j| columns[j](&self.rows[i]))
    }
}

fn effect_row(kind: EffectKind, name: String, ss: f64, df: f64, residual_ms: f64) -> AnovaEffect {
    let ss = if ss.abs() < SS_FLOOR { 0.0 } else { ss.max(0.0) };
    let ms = if df > 0.0 { ss / df } else { 0.0 };
    let (f, p) = if df == 0.0 || ss == 0.0 {
        (0.0, 1.0)
    } else if residual_ms == 0.0 {
        (f64::INFINITY, 0.0)
    } else {
        (ms / residual_ms, f64::NAN)
    };
    AnovaEffect { kind, name, ss, df, ms, f: Some(f), p: Some(p) }
}

/// Type II two-way ANOVA over `table`.
pub fn two_way_anova(table: &ObservationTable) -> Result<AnovaTable, StatsError> {
    let rows = table.rows();
    let n = rows.len();
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for a in 0..table.levels_a().len() {
        for b in 0..table.levels_b().len() {
            if table.cell_count(a, b) > 0 {
                cells.push((a, b));
            }
        }
    }
    if cells.len() < 2 {
        return Err(StatsError::Domain(format!(
            "two-way ANOVA needs at least 2 non-empty cells (got {})",
            cells.len()
        )));
    }
    if n <= cells.len() {
        return Err(StatsError::Domain(format!(
            "two-way ANOVA needs more observations ({n}) than non-empty cells ({})",
            cells.len()
        )));
    }

    let mut present_a: Vec<usize> = cells.iter().map(|c| c.0).collect();
    present_a.dedup();
    let mut present_b: Vec<usize> = cells.iter().map(|c| c.1).collect();
    present_b.sort_unstable();
    present_b.dedup();

    let (name_a, name_b) = table.factor_names();
    let mut warnings = Vec::new();
    let interaction_fitted = cells.len() == present_a.len() * present_b.len();
    if !interaction_fitted {
        let missing: Vec<String> = present_a
            .iter()
            .flat_map(|&a| present_b.iter().map(move |&b| (a, b)))
            .filter(|cell| !cells.contains(cell))
            .map(|(a, b)| format!("{}={} × {}={}", name_a, table.levels_a()[a], name_b, table.levels_b()[b]))
            .collect();
        warnings.push(format!(
            "empty cell(s) {}; interaction dropped, main effects from the additive model",
            missing.join(", ")
        ));
    }
    for (label, present, declared) in [
        (name_a, &present_a, table.levels_a()),
        (name_b, &present_b, table.levels_b()),
    ] {
        if present.len() < 2 {
            warnings.push(format!(
                "{label} has a single observed level out of {} declared; its effect has 0 df",
                declared.len()
            ));
        }
    }

    let grand = compensated_sum(rows.iter().map(|r| r.value)) / n as f64;
    let y = DVector::from_iterator(n, rows.iter().map(|r| r.value - grand));
    let total_ss = compensated_sum(y.iter().map(|v| v * v));

    let df_a = (present_a.len() - 1) as f64;
    let df_b = (present_b.len() - 1) as f64;
    let df_additive_resid = n as f64 - (present_a.len() + present_b.len() - 1) as f64;

    if total_ss == 0.0 {
        let mut effects = vec![
            effect_row(EffectKind::FactorA, name_a.to_string(), 0.0, df_a, 0.0),
            effect_row(EffectKind::FactorB, name_b.to_string(), 0.0, df_b, 0.0),
        ];
        let resid_df = if interaction_fitted {
            let df_ab = df_a * df_b;
            effects.push(effect_row(
                EffectKind::Interaction,
                format!("{name_a}:{name_b}"),
                0.0,
                df_ab,
                0.0,
            ));
            (n - cells.len()) as f64
        } else {
            df_additive_resid
        };
        effects.push(AnovaEffect {
            kind: EffectKind::Residual,
            name: "Residual".into(),
            ss: 0.0,
            df: resid_df,
            ms: 0.0,
            f: None,
            p: None,
        });
        warnings.push("all observations are identical; every sum of squares is zero".into());
        return Ok(AnovaTable {
            effects,
            n,
            nonempty_cells: cells.len(),
            interaction_fitted,
            degenerate: true,
            warnings,
        });
    }

    let design = Design { rows, present_a, present_b, cells: cells.clone() };
    let rss_a = residual_ss(&design.matrix(true, false, false), &y)?;
    let rss_b = residual_ss(&design.matrix(false, true, false), &y)?;
    let rss_ab = residual_ss(&design.matrix(true, true, false), &y)?;

    let (resid_ss, resid_df) = if interaction_fitted {
        let rss_cells = residual_ss(&design.matrix(false, false, true), &y)?;
        (rss_cells, (n - cells.len()) as f64)
    } else {
        (rss_ab, df_additive_resid)
    };
    let resid_ss = if resid_ss.abs() < SS_FLOOR { 0.0 } else { resid_ss.max(0.0) };
    let resid_ms = resid_ss / resid_df;

    let mut effects = vec![
        effect_row(EffectKind::FactorA, name_a.to_string(), rss_b - rss_ab, df_a, resid_ms),
        effect_row(EffectKind::FactorB, name_b.to_string(), rss_a - rss_ab, df_b, resid_ms),
    ];
    if interaction_fitted {
        effects.push(effect_row(
            EffectKind::Interaction,
            format!("{name_a}:{name_b}"),
            rss_ab - resid_ss,
            df_a * df_b,
            resid_ms,
        ));
    }
    for e in &mut effects {
        if let (Some(f), Some(p)) = (e.f, e.p) {
            if p.is_nan() {
                e.p = Some(f_upper_p(f, e.df, resid_df));
            }
        }
    }
    effects.push(AnovaEffect {
        kind: EffectKind::Residual,
        name: "Residual".into(),
        ss: resid_ss,
        df: resid_df,
        ms: resid_ms,
        f: None,
        p: None,
    });

    Ok(AnovaTable {
        effects,
        n,
        nonempty_cells: cells.len(),
        interaction_fitted,
        degenerate: false,
        warnings,
    })
}
