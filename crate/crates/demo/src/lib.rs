//! WebAssembly bindings for the static page in `www/`. Every export returns a
//! flat `Float64Array` of fixed-width records so the page can draw it without
//! a serialization layer.

use tdfpp::analysis::{estimate_speed, mixing_diagnostic, MixingConfig, SpeedConfig};
use tdfpp::{
    reachable_set, sample_environment, EnvironmentSpec, FieldSpec, StartTimeMode, TravelModel,
    Traversal, Vertex, Workers,
};
use wasm_bindgen::prelude::*;

fn spec(kind: &str, bound: f64, clock: f64, seed: u64) -> Result<EnvironmentSpec, String> {
    let field = FieldSpec::uniform(bound);
    let spec = match kind {
        "block" => EnvironmentSpec::block(2, field, clock, seed),
        "poisson" => EnvironmentSpec::poisson(2, field, clock, seed),
        other => return Err(format!("unknown environment \"{other}\"")),
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

fn model(name: &str) -> Result<TravelModel, String> {
    match name {
        "integral" => Ok(TravelModel::Integral),
        "departure" => Ok(TravelModel::Departure),
        other => Err(format!("unknown travel model \"{other}\"")),
    }
}

/// `S_t` from the origin leaving at time 0, as `[x, y, passage time]` records.
pub fn shape_points(
    kind: &str,
    bound: f64,
    clock: f64,
    law: &str,
    t: f64,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let env = sample_environment(&spec(kind, bound, clock, seed)?).map_err(|e| e.to_string())?;
    let net = Traversal::new(env, model(law)?);
    let set = reachable_set(&net, t, StartTimeMode::FixedZero).map_err(|e| e.to_string())?;
    Ok(set
        .points
        .iter()
        .zip(&set.passage)
        .flat_map(|(p, &x)| [p.coords()[0] as f64, p.coords()[1] as f64, x])
        .collect())
}

/// `X_{0,n}/n` along `(1, 0)` for `n = 1..=n_max`, as
/// `[n, mean, std, fekete envelope]` records.
pub fn rate_curve(
    kind: &str,
    bound: f64,
    clock: f64,
    law: &str,
    n_max: u32,
    replicates: u32,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let cfg = SpeedConfig {
        environment: spec(kind, bound, clock, seed)?,
        model: model(law)?,
        direction: Vertex::from([1, 0]),
        n_grid: (1..=u64::from(n_max)).collect(),
        replicates: replicates as usize,
        base_seed: seed,
        envelope_constant: None,
    };
    let est = estimate_speed(&cfg, Workers::single()).map_err(|e| e.to_string())?;
    Ok(est
        .rows
        .iter()
        .flat_map(|r| [r.n as f64, r.mean, r.std, r.fekete_envelope])
        .collect())
}

/// Speed covariance at `steps + 1` equally spaced lags in `[0, max_lag]`, as
/// `[lag, empirical, standard error, closed form]` records.
pub fn covariance_curve(
    kind: &str,
    bound: f64,
    clock: f64,
    max_lag: f64,
    steps: u32,
    replicates: u32,
    seed: u64,
) -> Result<Vec<f64>, String> {
    if steps == 0 {
        return Err("need at least one step".into());
    }
    let cfg = MixingConfig {
        environment: spec(kind, bound, clock, seed)?,
        lags: (0..=steps)
            .map(|i| max_lag * f64::from(i) / f64::from(steps))
            .collect(),
        replicates: replicates as usize,
        base_seed: seed,
    };
    let m = mixing_diagnostic(&cfg, Workers::single()).map_err(|e| e.to_string())?;
    Ok((0..m.lags.len())
        .flat_map(|j| {
            [
                m.lags[j],
                m.empirical[j],
                m.standard_errors[j],
                m.theoretical[j],
            ]
        })
        .collect())
}

fn js(r: Result<Vec<f64>, String>) -> Result<Vec<f64>, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = reachableShape)]
pub fn reachable_shape(
    kind: &str,
    bound: f64,
    clock: f64,
    law: &str,
    t: f64,
    seed: u64,
) -> Result<Vec<f64>, JsError> {
    js(shape_points(kind, bound, clock, law, t, seed))
}

#[wasm_bindgen(js_name = passageRates)]
pub fn passage_rates(
    kind: &str,
    bound: f64,
    clock: f64,
    law: &str,
    n_max: u32,
    replicates: u32,
    seed: u64,
) -> Result<Vec<f64>, JsError> {
    js(rate_curve(kind, bound, clock, law, n_max, replicates, seed))
}

#[wasm_bindgen(js_name = speedCovariance)]
pub fn speed_covariance(
    kind: &str,
    bound: f64,
    clock: f64,
    max_lag: f64,
    steps: u32,
    replicates: u32,
    seed: u64,
) -> Result<Vec<f64>, JsError> {
    js(covariance_curve(
        kind, bound, clock, max_lag, steps, replicates, seed,
    ))
}
