use serde::{Deserialize, Serialize};

use crate::grid_fields::{ComplexField, SpectralDomain};
use crate::real::Real;

/// Lifecycle of a simulation. Every state except [`Status::Running`] is terminal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Running,
    Dispersed,
    BlowupSuspected,
    Underresolved,
    TimeExhausted,
}

impl Status {
    pub fn is_terminal(self) -> bool {
        self != Status::Running
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Running => "running",
            Status::Dispersed => "dispersed",
            Status::BlowupSuspected => "blowup_suspected",
            Status::Underresolved => "underresolved",
            Status::TimeExhausted => "time_exhausted",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A point on a discrete trajectory.
#[derive(Debug, Clone)]
pub struct SimulationState<T: Real, G> {
    t: T,
    field: ComplexField<T, G>,
    step: usize,
    status: Status,
    initial_kinetic: T,
}

impl<T: Real, G: SpectralDomain<T>> SimulationState<T, G> {
    /// Running state at `t = 0`.
    pub fn new(field: ComplexField<T, G>) -> Self {
        let initial_kinetic = field.grid().kinetic(field.values());
        Self { t: T::zero(), field, step: 0, status: Status::Running, initial_kinetic }
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn field(&self) -> &ComplexField<T, G> {
        &self.field
    }

    pub fn into_field(self) -> ComplexField<T, G> {
        self.field
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn status(&self) -> Status {
        self.status
    }

    /// `‖∇u₀‖²` of the field the trajectory started from.
    pub fn initial_kinetic(&self) -> T {
        self.initial_kinetic
    }

    /// Moves to `status` unless the state is already terminal.
    pub fn absorb(&mut self, status: Status) {
        if !self.status.is_terminal() {
            self.status = status;
        }
    }

    pub(crate) fn advance(&mut self, field: ComplexField<T, G>, dt: T) {
        self.field = field;
        self.t = self.t + dt;
        self.step += 1;
    }
}
