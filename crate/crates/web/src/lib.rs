//! Browser bindings. Every export returns a JSON string; failures come back as
//! `{"error": {"kind", "message"}}` rather than exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use classtrace::classes::{enumerate_classes, Class, Group};
use classtrace::field::Field;
use classtrace::oracle::{self, OracleError};
use classtrace::witness::{self, WitnessError};

/// Orbits larger than this are refused; the page runs on the main thread.
pub const WEB_BUDGET: u64 = 200_000;

fn error(kind: &str, message: impl ToString) -> Value {
    json!({"error": {"kind": kind, "message": message.to_string()}})
}

fn setup(q: u32, group: &str) -> Result<(Field, Group), Value> {
    let f = Field::of_order(q as u64).map_err(|e| error("usage", e))?;
    let g: Group = group.parse().map_err(|e: String| error("usage", e))?;
    Ok((f, g))
}

fn pair(q: u32, n: u32, group: &str, omega: &str, psi: &str) -> Result<(Field, Class, Class), Value> {
    let (f, g) = setup(q, group)?;
    let parse = |s: &str| {
        let c = Class::parse(&f, g, s).map_err(|e| error("usage", e))?;
        if c.n() != n as usize {
            return Err(error("usage", format!("{s} has size {}, expected {n}", c.n())));
        }
        Ok(c)
    };
    Ok((f.clone(), parse(omega)?, parse(psi)?))
}

fn text(r: Result<Value, Value>) -> String {
    r.unwrap_or_else(|e| e).to_string()
}

/// `{"classes": [...]}` for `M`, `GL` or `SL` of size `n` over GF(q).
#[wasm_bindgen]
pub fn list_classes(q: u32, n: u32, group: &str) -> String {
    text((|| {
        let (f, g) = setup(q, group)?;
        let cs = enumerate_classes(n as usize, &f, g).map_err(|e| error("usage", e))?;
        Ok(json!({"classes": cs.iter().map(Class::to_text).collect::<Vec<_>>()}))
    })())
}

/// A verified pair with `tr(WQ) = τ`.
#[wasm_bindgen]
pub fn build_witness(q: u32, n: u32, group: &str, omega: &str, psi: &str, tau: &str, seed: u32) -> String {
    text((|| {
        let (f, o, p) = pair(q, n, group, omega, psi)?;
        let tau = f.parse(tau).map_err(|e| error("usage", e))?;
        witness::witness(&o, &p, tau, seed as u64).map(|w| w.to_json()).map_err(|e| {
            let kind = match e {
                WitnessError::TraceExcluded { .. } => "trace-excluded",
                WitnessError::ScalarClass(_) => "scalar-class",
                _ => "construction-failed",
            };
            error(kind, e)
        })
    })())
}

/// Brute-force `{tr ωψ}`, capped at [`WEB_BUDGET`] orbit elements.
#[wasm_bindgen]
pub fn trace_set(q: u32, n: u32, group: &str, omega: &str, psi: &str) -> String {
    text((|| {
        let (_, o, p) = pair(q, n, group, omega, psi)?;
        let ts = oracle::trace_set(&o, &p, false, WEB_BUDGET).map_err(|e| match e {
            OracleError::BudgetExceeded { .. } => error("budget-exceeded", e),
            _ => error("usage", e),
        })?;
        Ok(ts.to_json())
    })())
}
