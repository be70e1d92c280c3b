//! Sloped distance envelopes and vertex pressure.
//!
//! For a slope `alpha >= 0`,
//!
//! * `vLow[alpha](x)  = min_t v0(t) + alpha * dist(x -> t)`
//! * `vHigh[alpha](x) = max_t v0(t) - alpha * dist(t -> x)`
//!
//! The pressure of `x` (the largest gradient of a terminal path through `x`)
//! exceeds `alpha` exactly when `vHigh[alpha](x) > vLow[alpha](x)`.

use crate::error::{Error, Result};
use crate::graph::{
    check_well_posed, Defect, DefectReport, Graph, PartialAssignment, Tolerance, VertexId,
};
use crate::shortest::{sloped_search, Direction};

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub values: Vec<f64>,
    /// Neighbour from which the value was derived; `None` on terminals that
    /// keep their own label.
    pub parent: Vec<Option<VertexId>>,
}

fn terminal_seeds(v0: &PartialAssignment, sign: f64) -> Vec<(VertexId, f64)> {
    (0..v0.len())
        .filter_map(|x| v0.get(x).map(|val| (x, sign * val)))
        .collect()
}

fn check_slope(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha < 0.0 || alpha.is_infinite() {
        return Err(Error::InvalidArgument(format!(
            "slope must be finite and non-negative, got {alpha}"
        )));
    }
    Ok(())
}

fn check_len(g: &Graph, v0: &PartialAssignment) -> Result<()> {
    if v0.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            actual: v0.len(),
        });
    }
    Ok(())
}

/// Lower envelope without validation; unreachable vertices get `+inf`.
pub(crate) fn vlow_raw(g: &Graph, v0: &PartialAssignment, alpha: f64) -> Envelope {
    let (values, parent) = sloped_search(g, Direction::Backward, &terminal_seeds(v0, 1.0), alpha);
    Envelope { values, parent }
}

/// Upper envelope without validation; unreachable vertices get `-inf`.
pub(crate) fn vhigh_raw(g: &Graph, v0: &PartialAssignment, alpha: f64) -> Envelope {
    let (mut values, parent) =
        sloped_search(g, Direction::Forward, &terminal_seeds(v0, -1.0), alpha);
    for x in &mut values {
        *x = -*x;
    }
    Envelope { values, parent }
}

fn reject_unreached(env: Envelope, defect: fn(VertexId) -> Defect) -> Result<Envelope> {
    let defects: Vec<Defect> = env
        .values
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_finite())
        .map(|(x, _)| defect(x))
        .collect();
    if defects.is_empty() {
        Ok(env)
    } else {
        Err(Error::NotWellPosed(DefectReport { defects }))
    }
}

/// `min_t v0(t) + alpha * dist(t -> x)`, distances taken along edge
/// orientation from the terminal to `x`. Errors if some vertex is reached
/// by no terminal.
pub fn mod_dijkstra(g: &Graph, v0: &PartialAssignment, alpha: f64) -> Result<Envelope> {
    check_slope(alpha)?;
    check_len(g, v0)?;
    let (values, parent) = sloped_search(g, Direction::Forward, &terminal_seeds(v0, 1.0), alpha);
    reject_unreached(Envelope { values, parent }, |vertex| {
        Defect::NoTerminalUpstream { vertex }
    })
}

/// `vLow[alpha](x) = min_t v0(t) + alpha * dist(x -> t)`.
///
/// In directed graphs the distance runs from `x` to the terminal, so that
/// `vLow` bounds the value at `x` from above for any assignment whose
/// positive gradients stay below `alpha`.
pub fn comp_vlow(g: &Graph, v0: &PartialAssignment, alpha: f64) -> Result<Envelope> {
    check_slope(alpha)?;
    check_len(g, v0)?;
    reject_unreached(vlow_raw(g, v0, alpha), |vertex| {
        Defect::NoTerminalDownstream { vertex }
    })
}

/// `vHigh[alpha](x) = max_t v0(t) - alpha * dist(t -> x)`.
pub fn comp_vhigh(g: &Graph, v0: &PartialAssignment, alpha: f64) -> Result<Envelope> {
    check_slope(alpha)?;
    check_len(g, v0)?;
    reject_unreached(vhigh_raw(g, v0, alpha), |vertex| {
        Defect::NoTerminalUpstream { vertex }
    })
}

pub(crate) fn pressure_exceeds_raw(
    g: &Graph,
    v0: &PartialAssignment,
    alpha: f64,
    tol: Tolerance,
) -> Vec<bool> {
    let low = vlow_raw(g, v0, alpha).values;
    let high = vhigh_raw(g, v0, alpha).values;
    low.iter()
        .zip(&high)
        .map(|(&l, &h)| l.is_finite() && h.is_finite() && tol.greater(h, l))
        .collect()
}

/// Per vertex, whether some terminal path through it has gradient above
/// `alpha`. Vertices on no terminal path report `false`.
pub fn pressure_exceeds(g: &Graph, v0: &PartialAssignment, alpha: f64) -> Result<Vec<bool>> {
    pressure_exceeds_with(g, v0, alpha, Tolerance::default())
}

pub fn pressure_exceeds_with(
    g: &Graph,
    v0: &PartialAssignment,
    alpha: f64,
    tol: Tolerance,
) -> Result<Vec<bool>> {
    check_slope(alpha)?;
    check_len(g, v0)?;
    check_well_posed(g, v0).map_err(Error::NotWellPosed)?;
    Ok(pressure_exceeds_raw(g, v0, alpha, tol))
}

/// The subgraph induced on vertices of pressure above some threshold.
#[derive(Debug, Clone)]
pub struct PressureSubgraph {
    pub graph: Graph,
    /// Labels restricted to the subgraph.
    pub labels: PartialAssignment,
    /// Vertex id in the parent graph of each subgraph vertex.
    pub to_parent: Vec<VertexId>,
}

pub(crate) fn high_pressure_raw(
    g: &Graph,
    v0: &PartialAssignment,
    alpha: f64,
    tol: Tolerance,
) -> PressureSubgraph {
    let keep = pressure_exceeds_raw(g, v0, alpha, tol);
    let (graph, to_parent) = g.induced(&keep);
    PressureSubgraph {
        labels: v0.restrict(&to_parent),
        graph,
        to_parent,
    }
}

pub fn high_pressure_subgraph(
    g: &Graph,
    v0: &PartialAssignment,
    alpha: f64,
) -> Result<PressureSubgraph> {
    high_pressure_subgraph_with(g, v0, alpha, Tolerance::default())
}

pub fn high_pressure_subgraph_with(
    g: &Graph,
    v0: &PartialAssignment,
    alpha: f64,
    tol: Tolerance,
) -> Result<PressureSubgraph> {
    check_slope(alpha)?;
    check_len(g, v0)?;
    check_well_posed(g, v0).map_err(Error::NotWellPosed)?;
    Ok(high_pressure_raw(g, v0, alpha, tol))
}
