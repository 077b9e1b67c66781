#pragma once

#include "tsaudit/risk.hpp"
#include "tsaudit/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tsaudit {

enum class Family : int { F1 = 1, F2, F3, F4, F5, F6, F7, F8, F9, F10 };
const char* family_name(Family f);
Family family_from_name(const std::string& name);

enum class MissingMechanism : int { None = 0, Mcar, Mar, SeasonalMask };
enum class NonlinearTransform : int { None = 0, Tanh, Sin, Relu };
enum class NoiseFamily : int { Gaussian = 0, StudentT, Laplace };
enum class BoundaryCase : int { None = 0, ShortSeries, Sparse, HighDim, NearUnitRoot };

struct BreakSpec {
    double position_fraction = 0.5;  // in (0,1), break row = fraction * T
    double magnitude = 0.0;          // level jump in stationary-SD units
};

struct DgpSpec {
    Family family = Family::F1;
    int n_vars = 5;
    int t_obs = 500;
    std::uint64_t seed = 0;

    double rho_target = 0.5;
    double edge_density = 0.3;
    // Dominant-diagonal construction: every component carries the slow mode
    // (used by the high-persistence and near-unit-root families).
    bool persistent_diagonal = false;

    std::vector<BreakSpec> breaks;

    MissingMechanism missing = MissingMechanism::None;
    double missing_fraction = 0.0;
    // Share of masking applied to whole rows (the rest masks random halves);
    // row masking irregularizes the observed time grid, cell masking does not.
    double row_mask_share = 0.8;
    double gap_jitter_cv = 0.0;  // timestamp irregularity (lognormal gaps)

    int latent_count = 0;
    double sigma_conf = 0.0;
    int latent_children = 0;  // 0 = drawn in {2..N} from the seed

    double seasonal_period = 0.0;
    double seasonal_amplitude = 0.0;
    bool seasonal_common_phase = false;

    NonlinearTransform transform = NonlinearTransform::None;
    NoiseFamily noise = NoiseFamily::Gaussian;
    double student_nu = 0.0;

    BoundaryCase boundary = BoundaryCase::None;

    void validate() const;
};

struct GroundTruthLabels {
    // Parameter-derived severities on [0,1] per risk dimension; binary labels
    // threshold at 0.5.
    std::array<double, kNumRiskDims> severity{};
    std::array<int, kNumRiskDims> label{};
    // Analytic functionals behind the severities.
    double analytic_tau_int = 0.5;
    double analytic_vif_excess = 1.0;
};

struct DiscoveryOutcome {
    bool computed = false;
    bool failure = false;  // Y = 0
    double fpr = 0.0;
    double fnr = 0.0;
    double f1 = 0.0;
    bool errored = false;  // discovery could not run; counted as failure
};

struct AtlasEntry {
    DgpSpec spec;
    TimeSeriesMatrix data;
    SummaryGraph truth;
    GroundTruthLabels labels;
    DiscoveryOutcome discovery;
    double realized_spectral_radius = 0.0;
};

// Sparse random coefficient matrix rescaled so its spectral radius hits the
// target to within 1e-6 (diagonal entries positive and always present).
Eigen::MatrixXd stable_var_matrix(int n, double rho_target, double density,
                                  std::uint64_t seed,
                                  bool persistent_diagonal = false);

double spectral_radius(const Eigen::MatrixXd& a);

AtlasEntry generate_dataset(const DgpSpec& spec);

struct AtlasManifest {
    std::uint64_t master_seed = 0;
    int per_family = 50;
    std::vector<DgpSpec> specs;
    std::vector<GroundTruthLabels> labels;
    std::vector<DiscoveryOutcome> discovery;
};

struct Atlas {
    std::vector<AtlasEntry> entries;
    AtlasManifest manifest;
};

// 10 families x per_family entries with severity parameters swept across each
// family's range; also runs the discovery method against the ground-truth
// graphs to attach failure labels.
Atlas generate_atlas(std::uint64_t master_seed, int per_family = 50,
                     bool with_failure_labels = true);

// Builds the per-family spec without generating data (used by the sweep).
DgpSpec make_family_spec(Family family, int index, int per_family,
                         std::uint64_t master_seed);

}  // namespace tsaudit
