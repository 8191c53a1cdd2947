//! Postselection on flag registers, at the end or between stages.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::{CircuitMetadata, CircuitProduct, Extraction, Route};
use crate::encodings::{multiply, ProjectedUnitaryEncoding};
use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec};

/// Below this the postselected branch is treated as never occurring.
pub const MIN_SUCCESS_PROB: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum PostselectInput {
    /// A normalized state on the input space of the extraction.
    State(CVec),
    /// Columns are run as independent inputs.
    Isometry(CMat),
}

impl PostselectInput {
    fn as_matrix(&self) -> CMat {
        match self {
            PostselectInput::State(v) => CMat::from_column_slice(v.len(), 1, v.as_slice()),
            PostselectInput::Isometry(x) => x.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    EndOnly,
    MeasureEarly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostselectOutcome {
    /// Output after projecting the flags to `|0⟩`, scaled so that
    /// `‖conditioned‖_F² ` equals the number of input columns.
    pub conditioned: CMat,
    pub success_prob: f64,
    /// One entry per measurement; their product is `success_prob`.
    pub stage_probs: Vec<f64>,
}

impl PostselectOutcome {
    /// The unnormalized postselected output, `√p · conditioned`.
    pub fn unnormalized(&self) -> CMat {
        self.conditioned.scale(self.success_prob.sqrt())
    }
}

/// Projects the flags of `cp` to `|0⟩` following `schedule`.
///
/// Measure-early applies each stage's block, measures, renormalizes and
/// hands the reinitialized register to the next stage.
pub fn simulate_postselect(
    cp: &CircuitProduct,
    input: &PostselectInput,
    schedule: Schedule,
) -> Result<PostselectOutcome> {
    let x = input.as_matrix();
    let block = cp.extraction("block")?;
    if x.nrows() != block.right.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "input has {} rows, extraction expects {}",
            x.nrows(),
            block.right.ncols()
        )));
    }
    let norm0 = x.norm_squared();
    if norm0 == 0.0 {
        return Err(Error::ZeroProbability(0.0));
    }
    let ncols = x.ncols() as f64;
    let (out, stage_probs) = match schedule {
        Schedule::EndOnly => {
            let out = cp.block() * &x;
            let p = out.norm_squared() / norm0;
            (out, vec![p])
        }
        Schedule::MeasureEarly => {
            if cp.stages.len() < 2 {
                return Err(Error::Schedule(format!(
                    "measure-early needs a mid-circuit flag point, circuit has {} stage(s)",
                    cp.stages.len()
                )));
            }
            let mut state = x.scale((ncols / norm0).sqrt());
            let mut probs = Vec::with_capacity(cp.stages.len());
            for stage in &cp.stages {
                let next = stage.pi_l.adjoint() * (&stage.u * (&stage.pi_r * &state));
                let p = next.norm_squared() / state.norm_squared();
                if p < MIN_SUCCESS_PROB {
                    return Err(Error::ZeroProbability(p));
                }
                probs.push(p);
                state = next.scale(1.0 / p.sqrt());
            }
            let total: f64 = probs.iter().product();
            (state.scale((total * norm0 / ncols).sqrt()), probs)
        }
    };
    let success_prob: f64 = stage_probs.iter().product();
    if success_prob < MIN_SUCCESS_PROB {
        return Err(Error::ZeroProbability(success_prob));
    }
    let conditioned = out.scale((ncols / (success_prob * norm0)).sqrt());
    Ok(PostselectOutcome {
        conditioned,
        success_prob,
        stage_probs,
    })
}

/// One-extra-qubit product of two encodings, with both factors kept as stages
/// so the flag of `e2` can be measured before `e1` runs.
pub fn multiplication_circuit(
    e1: &ProjectedUnitaryEncoding,
    e2: &ProjectedUnitaryEncoding,
) -> Result<CircuitProduct> {
    let product = multiply(e1, e2)?;
    let mut extractions = BTreeMap::new();
    extractions.insert(
        "block".to_string(),
        Extraction {
            left: product.pi_l.clone(),
            right: product.pi_r.clone(),
        },
    );
    Ok(CircuitProduct {
        matrix: product.u,
        metadata: CircuitMetadata {
            scale_applied: 1.0,
            queries_u: 2,
            queries_u_dagger: 0,
            degree: 2,
            route: Route::Product,
        },
        extractions,
        stages: vec![e2.clone(), e1.clone()],
        applied: None,
        phases: None,
    })
}
