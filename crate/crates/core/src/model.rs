//! Two-band model abstraction: a parametrized map (γ, k) → d-vector plus the
//! decoupled boundary modes at k = 0, π where a chain has them.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bloch::DVector;
use crate::error::{Error, Result};
use crate::xy::XyModel;

pub trait TwoBandModel: Send + Sync {
    /// Registry name, e.g. `"xy"`.
    fn name(&self) -> &str;

    /// Ordered parameter names; the arity of every γ vector.
    fn parameter_names(&self) -> &[&str];

    fn arity(&self) -> usize {
        self.parameter_names().len()
    }

    /// d-vector of the k-mode at momentum k for the given parameters.
    fn dvector(&self, params: &[f64], k: f64) -> DVector;

    /// Quench-fidelity factors of the decoupled k = 0 and k = π modes, each 0
    /// or 1, for models whose momentum decomposition produces them. `None`
    /// when the model has no special boundary modes.
    fn boundary_fidelities(&self, _gamma_i: &[f64], _gamma_f: &[f64]) -> Result<Option<(u8, u8)>> {
        Ok(None)
    }

    /// True when the parameter point sits on an equilibrium critical line
    /// (gap closed at some momentum), where mode counts are undefined.
    fn is_critical(&self, _params: &[f64]) -> bool {
        false
    }
}

/// Validate a parameter vector against the model arity.
pub fn check_arity(model: &dyn TwoBandModel, params: &[f64]) -> Result<()> {
    if params.len() != model.arity() {
        return Err(Error::ArityMismatch {
            model: model.name().to_string(),
            expected: model.arity(),
            got: params.len(),
        });
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::Domain("model parameters must be finite".into()));
    }
    Ok(())
}

/// Name → model lookup for config files and the CLI.
#[derive(Default)]
pub struct ModelRegistry {
    models: BTreeMap<String, Arc<dyn TwoBandModel>>,
}

impl ModelRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry pre-populated with the built-in models.
    pub fn with_builtins() -> Self {
        let mut reg = Self::new();
        reg.register(Arc::new(XyModel));
        reg
    }

    pub fn register(&mut self, model: Arc<dyn TwoBandModel>) {
        self.models.insert(model.name().to_string(), model);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn TwoBandModel>> {
        self.models.get(name).cloned().ok_or_else(|| Error::UnknownModel {
            name: name.to_string(),
            known: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&str> {
        self.models.keys().map(|s| s.as_str()).collect()
    }
}
