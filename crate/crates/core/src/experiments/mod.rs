//! Task definitions and study drivers: Hamiltonians, exact references, the
//! VQA loop, GHZ metrology, the hybrid study and residual statistics.

mod exact;
mod hamiltonian;
mod hybrid;
mod metrology;
mod pipeline;
mod report;
mod vqa;

use serde::{Deserialize, Serialize};

pub use exact::{exact_ground_energy, matrix_ground_energy, tfim_free_fermion_energy, DENSE_MAX_QUBITS, EXACT_MAX_QUBITS};
pub use hamiltonian::{build_hamiltonian, Hamiltonian, HamiltonianModel};
pub use hybrid::{filtered_inputs, hybrid_study, HybridConfig, HybridResult};
pub use metrology::{
    data_efficiency, metrology_sweep, DataEfficiencyConfig, DataEfficiencyRow, MethodSummary, MetrologyConfig,
    MetrologyResult,
};
pub use pipeline::{Learner, ObservableSpec, PipelineConfig, SurrogateSettings};
pub use report::{residual_report, residual_stats, ResidualReport, KDE_GRID_POINTS};
pub use vqa::{
    run_vqa_study, vqa_optimize, EnergyEstimator, EstimatorKind, VqaSettings, VqaStep, VqaStudyConfig,
    VqaStudyResult, VqaTrajectory,
};

/// Everything a CLI run needs; each section has working defaults.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub output_dir: Option<String>,
    pub pipeline: PipelineConfig,
    pub metrology: MetrologyConfig,
    pub data_efficiency: DataEfficiencyConfig,
    pub vqa: VqaStudyConfig,
    pub hybrid: HybridConfig,
}

impl ExperimentConfig {
    /// Pushes the master seed into every section.
    pub fn with_master_seed(mut self) -> Self {
        let s = self.seed;
        self.pipeline.seed = s;
        self.metrology.seed = s;
        self.data_efficiency.base.seed = s;
        self.vqa.seed = s;
        self.hybrid.seed = s;
        self
    }
}
