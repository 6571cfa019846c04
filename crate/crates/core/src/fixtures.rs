//! The bundled plane-flight model: five longitudinal positions, target `4`,
//! three obstacle scenarios.

use crate::io::ModelFile;
use crate::model::Model;

pub const PLANE_FLIGHT_JSON: &str = include_str!("../examples/plane_flight.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// `B_k = {0}` for every `k`.
    B1,
    /// `B_k = {1}` for every `k`.
    B2,
    /// `{1}` at even `k`, `{0}` at odd `k`.
    B3,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::B1, Scenario::B2, Scenario::B3];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::B1 => "b1",
            Scenario::B2 => "b2",
            Scenario::B3 => "b3",
        }
    }
}

pub fn plane_flight(scenario: Scenario) -> Model {
    ModelFile::parse(PLANE_FLIGHT_JSON)
        .and_then(|f| f.build(Some(scenario.name())))
        .expect("bundled model file is valid")
}
