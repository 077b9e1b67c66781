#include "tsaudit/atlas.hpp"

#include "tsaudit/discovery.hpp"
#include "tsaudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace tsaudit {

namespace {

constexpr int kBurnIn = 200;
constexpr double kLatentAr = 0.8;

double frac_of(int index, int per_family) {
    return per_family > 1 ? static_cast<double>(index) / (per_family - 1) : 0.0;
}

template <typename Rng>
int weighted_choice(Rng& rng, const std::vector<double>& weights) {
    std::discrete_distribution<int> dist(weights.begin(), weights.end());
    return dist(rng);
}

double draw_noise(std::mt19937_64& rng, NoiseFamily family, double nu) {
    // Fresh distribution objects per draw: cached spare deviates must not
    // leak state across generation calls.
    std::normal_distribution<double> gauss(0.0, 1.0);
    switch (family) {
        case NoiseFamily::Gaussian:
            return gauss(rng);
        case NoiseFamily::StudentT: {
            std::student_t_distribution<double> t(nu);
            return t(rng) / std::sqrt(nu / (nu - 2.0));
        }
        case NoiseFamily::Laplace: {
            std::exponential_distribution<double> e(1.0);
            return (e(rng) - e(rng)) / std::sqrt(2.0);
        }
    }
    return gauss(rng);
}

double apply_transform(NonlinearTransform f, double v) {
    switch (f) {
        case NonlinearTransform::None: return v;
        case NonlinearTransform::Tanh: return std::tanh(v);
        case NonlinearTransform::Sin: return std::sin(v);
        case NonlinearTransform::Relu: return std::max(0.0, v);
    }
    return v;
}

// Stationary covariance of z_t = M z_{t-1} + w, Cov(w) = Q, by doubling.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& M, const Eigen::MatrixXd& Q) {
    Eigen::MatrixXd S = Q;
    Eigen::MatrixXd P = M;
    for (int it = 0; it < 64; ++it) {
        const Eigen::MatrixXd next = S + P * S * P.transpose();
        const double delta = (next - S).norm();
        S = next;
        P = P * P;
        if (delta < 1e-13 * std::max(1.0, S.norm())) break;
    }
    return S;
}

struct ProcessModel {
    Eigen::MatrixXd M;       // state transition (observed + latent dims)
    Eigen::MatrixXd Q;       // state noise covariance
    int n_obs = 0;

    Eigen::MatrixXd stationary_cov() const { return solve_lyapunov(M, Q); }
};

// State-space form of the generating process: observed VAR(1) block plus
// AR(1) latent drivers loading onto their children.
ProcessModel state_model(const Eigen::MatrixXd& A,
                         const std::vector<std::vector<int>>& latent_children,
                         double sigma_conf) {
    const int n = static_cast<int>(A.rows());
    const int L = static_cast<int>(latent_children.size());
    ProcessModel model;
    model.n_obs = n;
    model.M = Eigen::MatrixXd::Zero(n + L, n + L);
    model.M.topLeftCorner(n, n) = A;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, L);
    for (int l = 0; l < L; ++l)
        for (int child : latent_children[static_cast<std::size_t>(l)])
            C(child, l) = sigma_conf;
    model.M.topRightCorner(n, L) = kLatentAr * C;
    for (int l = 0; l < L; ++l) model.M(n + l, n + l) = kLatentAr;

    // X_t = A X_{t-1} + sigma*C (0.8 u_{t-1} + xi_t) + eps_t; w = [eps + C xi; xi].
    model.Q = Eigen::MatrixXd::Identity(n + L, n + L);
    model.Q.topLeftCorner(n, n) += C * C.transpose();
    model.Q.topRightCorner(n, L) = C;
    model.Q.bottomLeftCorner(L, n) = C.transpose();
    return model;
}

// Deterministic mean path (level breaks + seasonal component) per variable.
Eigen::MatrixXd mean_path(const DgpSpec& spec, const Eigen::VectorXd& stationary_sd,
                          std::mt19937_64& rng) {
    const int T = spec.t_obs;
    const int N = spec.n_vars;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(T, N);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& brk : spec.breaks) {
        for (int j = 0; j < N; ++j) {
            // Per-variable jitter around the nominal break time: shifts are
            // not absorbed by a single lag of the panel.
            const double jitter = 0.08 * (2.0 * unit(rng) - 1.0);
            const int row = std::clamp(
                static_cast<int>((brk.position_fraction + jitter) * T), 1, T - 1);
            const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
            const double jump = sign * brk.magnitude * stationary_sd(j);
            for (int t = row; t < T; ++t) m(t, j) += jump;
        }
    }
    if (spec.seasonal_period > 0.0 && spec.seasonal_amplitude > 0.0) {
        const double shared_phase = 2.0 * M_PI * unit(rng);
        for (int j = 0; j < N; ++j) {
            const double amp =
                spec.seasonal_amplitude * stationary_sd(j) * (0.75 + 0.5 * unit(rng));
            const double phase =
                spec.seasonal_common_phase ? shared_phase : 2.0 * M_PI * unit(rng);
            for (int t = 0; t < T; ++t)
                m(t, j) += amp * std::sin(2.0 * M_PI * t / spec.seasonal_period + phase);
        }
    }
    return m;
}

// Self-consistent window applied to a population autocorrelation sequence.
double windowed_tau(const std::vector<double>& rho) {
    double tau = 0.5;
    for (std::size_t lag = 1; lag < rho.size(); ++lag) {
        tau += rho[lag];
        if (static_cast<double>(lag) >= 5.0 * tau) break;
    }
    return std::max(0.5, tau);
}

// Analytic integrated autocorrelation time of dynamics plus deterministic
// mean path, mirroring what the windowed estimator sees.
double analytic_tau_int(const ProcessModel& model, const Eigen::MatrixXd& mean,
                        int T) {
    const Eigen::MatrixXd S = model.stationary_cov();
    const int n = model.n_obs;
    const int max_lag = std::min(T / 2, 600);

    Eigen::VectorXd mbar = mean.colwise().mean();
    Eigen::VectorXd cm0 = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int t = 0; t < T; ++t) {
            const double d = mean(t, j) - mbar(j);
            acc += d * d;
        }
        cm0(j) = acc / T;
    }

    double worst = 0.5;
    Eigen::MatrixXd Pl = Eigen::MatrixXd::Identity(model.M.rows(), model.M.cols());
    std::vector<std::vector<double>> rho(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        rho[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(max_lag) + 1, 1.0);

    for (int lag = 1; lag <= max_lag; ++lag) {
        Pl = model.M * Pl;
        const Eigen::MatrixXd G = Pl * S;
        for (int j = 0; j < n; ++j) {
            double cm = 0.0;
            for (int t = 0; t + lag < T; ++t)
                cm += (mean(t, j) - mbar(j)) * (mean(t + lag, j) - mbar(j));
            cm /= T;
            rho[static_cast<std::size_t>(j)][static_cast<std::size_t>(lag)] =
                (G(j, j) + cm) / (S(j, j) + cm0(j));
        }
    }
    for (int j = 0; j < n; ++j)
        worst = std::max(worst, windowed_tau(rho[static_cast<std::size_t>(j)]));
    return worst;
}

double max_vif_from_cov(const Eigen::MatrixXd& cov) {
    const Eigen::MatrixXd prec = cov.ldlt().solve(
        Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
    double worst = 1.0;
    for (Eigen::Index j = 0; j < cov.rows(); ++j)
        worst = std::max(worst, cov(j, j) * prec(j, j));
    return worst;
}

// P(dimension violated | severity): smooth logistic link centered at 0.5.
// Real failure labels are noisy functions of severity; a hard threshold would
// make the calibration corpus separable, which no finite-sample failure data
// ever is.
double label_probability(double severity) {
    // Deterministic outside the ambiguous band: a clearly clean dimension
    // never fails and a saturated violation always does; mid-band failures
    // stay genuinely stochastic.
    if (severity <= 0.18) return 0.0;
    if (severity >= 0.82) return 1.0;
    const double p = 1.0 / (1.0 + std::exp(-(severity - 0.48) / 0.12));
    return std::clamp(p, 0.08, 0.92);
}

GroundTruthLabels derive_labels(const DgpSpec& spec, const Eigen::MatrixXd& A,
                                const std::vector<std::vector<int>>& children,
                                const Eigen::MatrixXd& mean) {
    GroundTruthLabels out;

    const auto with_latent = state_model(A, children, spec.sigma_conf);
    const auto without_latent = state_model(A, {}, 0.0);

    // Nonstationarity: break magnitudes, with near-unit-root dynamics adding
    // a unit-root component.
    double mag = 0.0;
    for (const auto& brk : spec.breaks) mag = std::max(mag, brk.magnitude);
    double s_ns = std::min(mag / 3.0, 1.0);
    if (spec.rho_target > 0.85)
        s_ns = std::max(s_ns, 0.55 + 1.5 * (spec.rho_target - 0.85));
    out.severity[0] = s_ns;

    // Irregularity: missing load plus gap irregularity, both the designed
    // timestamp jitter and the irregular observed-row spacing induced by row
    // masking (geometric gaps: CV ~ sqrt(row-mask rate)).
    double gap_cv_effective = spec.gap_jitter_cv;
    if (spec.missing != MissingMechanism::None && spec.missing_fraction > 0.0) {
        double induced = std::sqrt(spec.row_mask_share * spec.missing_fraction);
        if (spec.missing == MissingMechanism::SeasonalMask) induced *= 1.25;
        gap_cv_effective = std::max(gap_cv_effective, induced);
    }
    double s_ir = std::max(std::min(spec.missing_fraction / 0.5, 1.0),
                           std::min(gap_cv_effective, 1.0));
    if (spec.missing == MissingMechanism::SeasonalMask && spec.missing_fraction > 0.0)
        s_ir = std::max(s_ir, 0.55 + 0.25 * std::min(spec.missing_fraction / 0.35, 1.0));
    out.severity[1] = s_ir;

    // Persistence: analytic windowed tau over dynamics + deterministic path.
    out.analytic_tau_int = analytic_tau_int(with_latent, mean, spec.t_obs);
    out.severity[2] = std::min(out.analytic_tau_int / 12.0, 1.0);

    // Confounding proxy: analytic VIF of the full process (latent drivers and
    // the deterministic mean path both act as shared components) against the
    // pure-dynamics baseline.
    const int n = spec.n_vars;
    Eigen::MatrixXd cov_with =
        with_latent.stationary_cov().topLeftCorner(n, n);
    const Eigen::MatrixXd cov_without =
        without_latent.stationary_cov().topLeftCorner(n, n);
    Eigen::RowVectorXd mbar2 = mean.colwise().mean();
    Eigen::MatrixXd centered = mean.rowwise() - mbar2;
    cov_with += centered.transpose() * centered / static_cast<double>(spec.t_obs);
    const double ratio =
        max_vif_from_cov(cov_with) / std::max(1.0, max_vif_from_cov(cov_without));
    out.analytic_vif_excess = std::max(1.0, ratio);
    double s_cf = std::log10(out.analytic_vif_excess) / 0.5;
    if (spec.rho_target > 0.85) s_cf = std::max(s_cf, 4.0 * (spec.rho_target - 0.85));
    out.severity[3] = std::clamp(s_cf, 0.0, 1.0);

    std::mt19937_64 label_rng(stats::derive_seed(spec.seed, 500));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int d = 0; d < kNumRiskDims; ++d) {
        double& severity = out.severity[static_cast<std::size_t>(d)];
        severity = std::clamp(severity, 0.0, 1.0);
        out.label[static_cast<std::size_t>(d)] =
            unit(label_rng) < label_probability(severity) ? 1 : 0;
    }
    return out;
}

}  // namespace

const char* family_name(Family f) {
    static constexpr std::array<const char*, 10> names = {
        "F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9", "F10"};
    return names[static_cast<std::size_t>(static_cast<int>(f) - 1)];
}

Family family_from_name(const std::string& name) {
    for (int i = 1; i <= 10; ++i)
        if (name == family_name(static_cast<Family>(i))) return static_cast<Family>(i);
    fail(ErrorKind::InvalidArgument, "unknown family " + name);
}

void DgpSpec::validate() const {
    if (n_vars < 1) fail(ErrorKind::InvalidArgument, "n_vars must be >= 1");
    if (t_obs < 10) fail(ErrorKind::InvalidArgument, "t_obs must be >= 10");
    if (rho_target < 0.0 || rho_target > 0.99)
        fail(ErrorKind::InvalidArgument, "rho_target must lie in [0, 0.99]");
    if (!(edge_density > 0.0 && edge_density <= 1.0))
        fail(ErrorKind::InvalidArgument, "edge_density must lie in (0, 1]");
    if (missing_fraction < 0.0 || missing_fraction > 0.9)
        fail(ErrorKind::InvalidArgument, "missing_fraction out of range");
}

double spectral_radius(const Eigen::MatrixXd& a) {
    if (a.rows() == 0) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
    return solver.eigenvalues().array().abs().maxCoeff();
}

Eigen::MatrixXd stable_var_matrix(int n, double rho_target, double density,
                                  std::uint64_t seed, bool persistent_diagonal) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "n must be >= 1");
    if (rho_target < 0.0 || rho_target > 0.99)
        fail(ErrorKind::InvalidArgument, "rho_target must lie in [0, 0.99]");
    if (!(density > 0.0 && density <= 1.0))
        fail(ErrorKind::InvalidArgument, "density must lie in (0, 1]");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> coef(0.3, 0.9);
    std::uniform_real_distribution<double> weak(0.08, 0.2);

    for (int attempt = 0; attempt < 10; ++attempt) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            a(i, i) = persistent_diagonal ? 0.8 + 0.15 * unit(rng)
                                          : 0.2 + 0.4 * unit(rng);
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if (unit(rng) < density)
                    a(i, j) = (unit(rng) < 0.5 ? -1.0 : 1.0) *
                              (persistent_diagonal ? weak(rng) : coef(rng));
            }
        }
        const double rho = spectral_radius(a);
        if (rho <= 0.0) continue;
        if (rho_target == 0.0) return Eigen::MatrixXd::Zero(n, n);
        return a * (rho_target / rho);
    }
    fail(ErrorKind::DegenerateDraw, "could not draw a usable coefficient matrix");
}

AtlasEntry generate_dataset(const DgpSpec& spec) {
    spec.validate();

    for (int attempt = 0; attempt < 5; ++attempt) {
        const std::uint64_t seed =
            attempt == 0 ? spec.seed : stats::derive_seed(spec.seed, 7000 + attempt);
        std::mt19937_64 rng(stats::derive_seed(seed, 1));
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        const int N = spec.n_vars;
        const int T = spec.t_obs;

        // Regime coefficient matrices share the support of the first draw.
        Eigen::MatrixXd A =
            stable_var_matrix(N, spec.rho_target, spec.edge_density,
                              stats::derive_seed(seed, 2), spec.persistent_diagonal);
        std::vector<Eigen::MatrixXd> regimes{A};
        for (std::size_t b = 0; b < spec.breaks.size(); ++b) {
            Eigen::MatrixXd R = Eigen::MatrixXd::Zero(N, N);
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    if (A(i, j) != 0.0)
                        R(i, j) = (i == j ? 1.0 : (unit(rng) < 0.5 ? -1.0 : 1.0)) *
                                  (0.3 + 0.6 * unit(rng));
            const double rho = spectral_radius(R);
            regimes.push_back(rho > 0 ? Eigen::MatrixXd(R * (spec.rho_target / rho)) : A);
        }

        // Latent confounders and their children.
        std::vector<std::vector<int>> children;
        for (int l = 0; l < spec.latent_count; ++l) {
            int c = spec.latent_children;
            if (c <= 0) c = 2 + static_cast<int>(unit(rng) * (N - 1));
            c = std::clamp(c, std::min(2, N), N);
            std::vector<int> idx(static_cast<std::size_t>(N));
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), rng);
            idx.resize(static_cast<std::size_t>(c));
            std::sort(idx.begin(), idx.end());
            children.push_back(std::move(idx));
        }

        const auto model = state_model(A, children, spec.sigma_conf);
        const Eigen::MatrixXd cov = model.stationary_cov();
        Eigen::VectorXd stationary_sd(N);
        for (int j = 0; j < N; ++j) stationary_sd(j) = std::sqrt(std::max(cov(j, j), 1e-12));

        const Eigen::MatrixXd mean = mean_path(spec, stationary_sd, rng);

        // Simulate.
        std::vector<int> break_rows;
        for (const auto& brk : spec.breaks)
            break_rows.push_back(
                std::clamp(static_cast<int>(brk.position_fraction * T), 1, T - 1));

        Eigen::MatrixXd X = Eigen::MatrixXd::Zero(T, N);
        Eigen::VectorXd state = Eigen::VectorXd::Zero(N);
        Eigen::VectorXd latent = Eigen::VectorXd::Zero(spec.latent_count);
        bool finite = true;
        for (int t = -kBurnIn; t < T && finite; ++t) {
            std::size_t regime = 0;
            for (std::size_t b = 0; b < break_rows.size(); ++b)
                if (t >= break_rows[b]) regime = b + 1;

            Eigen::VectorXd prop = regimes[regime] * state;
            for (int j = 0; j < N; ++j)
                prop(j) = apply_transform(spec.transform, prop(j)) +
                          draw_noise(rng, spec.noise, spec.student_nu);
            for (int l = 0; l < spec.latent_count; ++l) {
                latent(l) = kLatentAr * latent(l) + draw_noise(rng, NoiseFamily::Gaussian, 0);
                for (int child : children[static_cast<std::size_t>(l)])
                    prop(child) += spec.sigma_conf * latent(l);
            }
            state = prop;
            if (!state.allFinite()) finite = false;
            if (t >= 0) X.row(t) = state.transpose() + mean.row(t);
        }
        if (!finite) continue;

        // Timestamps: unit-spaced unless the spec injects gap irregularity.
        std::vector<double> timestamps(static_cast<std::size_t>(T));
        if (spec.gap_jitter_cv > 0.0) {
            const double sigma = std::sqrt(std::log1p(spec.gap_jitter_cv * spec.gap_jitter_cv));
            std::normal_distribution<double> gauss(0.0, 1.0);
            double t_acc = 0.0;
            for (int t = 0; t < T; ++t) {
                timestamps[static_cast<std::size_t>(t)] = t_acc;
                t_acc += std::exp(sigma * gauss(rng) - 0.5 * sigma * sigma);
            }
        } else {
            for (int t = 0; t < T; ++t) timestamps[static_cast<std::size_t>(t)] = t;
        }

        // Missingness: row-level masking (full row or a random half of the
        // variables) keeps enough complete lag windows for discovery while
        // still producing varied missingness patterns.
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask(T, N);
        mask.setConstant(false);
        if (spec.missing != MissingMechanism::None && spec.missing_fraction > 0.0) {
            const double f = spec.missing_fraction;
            const int half = std::max(1, N / 2);
            const double qhalf = static_cast<double>(half) / N;
            const double p_full = spec.row_mask_share * f;
            const double p_half = (1.0 - spec.row_mask_share) * f / qhalf;

            std::vector<double> row_scale(static_cast<std::size_t>(T), 1.0);
            if (spec.missing == MissingMechanism::Mar) {
                const int neighbor = 0;
                double acc = 0.0;
                for (int t = 1; t < T; ++t) {
                    const double z = X(t - 1, neighbor) / stationary_sd(neighbor);
                    const double s = 1.0 / (1.0 + std::exp(-1.5 * z));
                    row_scale[static_cast<std::size_t>(t)] = s;
                    acc += s;
                }
                (void)acc;  // E[sigmoid(1.5 z)] = 0.5 for a symmetric driver
                for (auto& s : row_scale) s /= 0.5;
                row_scale[0] = 1.0;
            } else if (spec.missing == MissingMechanism::SeasonalMask) {
                for (int t = 0; t < T; ++t)
                    row_scale[static_cast<std::size_t>(t)] =
                        1.0 + 0.95 * std::cos(2.0 * M_PI * t / 12.0);
            }

            for (int t = 0; t < T; ++t) {
                const double scale = std::max(0.0, row_scale[static_cast<std::size_t>(t)]);
                const double u = unit(rng);
                if (u < p_full * scale) {
                    for (int j = 0; j < N; ++j) mask(t, j) = true;
                } else if (u < (p_full + p_half) * scale) {
                    std::vector<int> idx(static_cast<std::size_t>(N));
                    std::iota(idx.begin(), idx.end(), 0);
                    std::shuffle(idx.begin(), idx.end(), rng);
                    for (int j = 0; j < half; ++j) mask(t, idx[static_cast<std::size_t>(j)]) = true;
                }
            }
            // Keep every column usable.
            for (int j = 0; j < N; ++j) {
                int observed = 0;
                for (int t = 0; t < T; ++t)
                    if (!mask(t, j)) ++observed;
                if (observed < 2) {
                    mask(0, j) = false;
                    mask(T - 1, j) = false;
                }
            }
        }

        SummaryGraph truth(N, 1);
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i)
                if (A(j, i) != 0.0) truth.add_edge(i, j, 1);

        TimeSeriesMatrix data(std::move(timestamps), std::move(X), std::move(mask), {});
        AtlasEntry entry{spec,
                         std::move(data),
                         std::move(truth),
                         derive_labels(spec, A, children, mean),
                         {},
                         spectral_radius(A)};
        return entry;
    }
    fail(ErrorKind::UnstableSimulation,
         "simulation produced non-finite values after retry cap");
}

DgpSpec make_family_spec(Family family, int index, int per_family,
                         std::uint64_t master_seed) {
    DgpSpec spec;
    spec.family = family;
    spec.seed = stats::derive_seed(master_seed,
                                   static_cast<std::uint64_t>(static_cast<int>(family)) * 100000 +
                                       static_cast<std::uint64_t>(index));
    std::mt19937_64 rng(stats::derive_seed(spec.seed, 99));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double frac = frac_of(index, per_family);

    // Shared N/T composition for F1-F9.
    spec.n_vars = 5 + weighted_choice(rng, {0.24, 0.27, 0.23, 0.26});
    const std::array<int, 3> t_choices = {500, 750, 1000};
    spec.t_obs = t_choices[static_cast<std::size_t>(weighted_choice(rng, {0.38, 0.32, 0.30}))];

    switch (family) {
        case Family::F1:
            spec.rho_target = 0.2 + 0.5 * frac;
            break;
        case Family::F2: {
            spec.rho_target = 0.3 + 0.3 * unit(rng);
            const int count = 1 + index % 3;
            const double magnitude = index % 3 == 0   ? 0.55 + 0.65 * unit(rng)
                                     : index % 3 == 1 ? 1.75 + 0.65 * unit(rng)
                                                      : 0.5 + 2.5 * frac;
            std::vector<double> pos;
            for (int b = 0; b < count; ++b) pos.push_back(0.2 + 0.6 * unit(rng));
            std::sort(pos.begin(), pos.end());
            for (int b = 0; b < count; ++b) {
                const double mag = b == 0 ? magnitude : magnitude * (0.7 + 0.3 * unit(rng));
                spec.breaks.push_back({pos[static_cast<std::size_t>(b)], mag});
            }
            break;
        }
        case Family::F3: {
            spec.rho_target = 0.3 + 0.3 * unit(rng);
            const std::array<MissingMechanism, 3> mechs = {
                MissingMechanism::Mcar, MissingMechanism::Mar, MissingMechanism::SeasonalMask};
            spec.missing = mechs[static_cast<std::size_t>(index % 3)];
            const int tier = (index / 3) % 3;
            if (tier == 0) {  // mild: mostly cell masking, regular grid
                spec.missing_fraction = 0.15 + 0.07 * unit(rng);
                spec.row_mask_share = 0.25;
            } else if (tier == 1) {  // near the decision band
                spec.missing_fraction = 0.21 + 0.08 * unit(rng);
                spec.row_mask_share = 0.8;
            } else {  // heavy, irregular
                spec.missing_fraction = 0.27 + 0.08 * unit(rng);
                spec.row_mask_share = 0.85;
                if (index % 2 == 1) spec.gap_jitter_cv = 0.45 + 0.25 * unit(rng);
            }
            break;
        }
        case Family::F4:
            spec.rho_target = 0.92 + 0.06 * frac;
            spec.persistent_diagonal = true;
            break;
        case Family::F5: {
            spec.rho_target = 0.3 + 0.3 * unit(rng);
            spec.latent_count = 1 + index % 2;
            const std::array<double, 3> sig = {0.3, 0.6, 0.9};
            spec.sigma_conf = sig[static_cast<std::size_t>((index / 2) % 3)];
            break;
        }
        case Family::F6: {
            spec.rho_target = 0.3 + 0.3 * unit(rng);
            const std::array<double, 3> periods = {12, 24, 52};
            spec.seasonal_period = periods[static_cast<std::size_t>(index % 3)];
            const double amp_cap = spec.seasonal_period <= 12   ? 0.9
                                   : spec.seasonal_period <= 24 ? 1.6
                                                                : 2.5;
            spec.seasonal_amplitude = 0.3 + (amp_cap - 0.3) * frac;
            spec.seasonal_common_phase = true;
            break;
        }
        case Family::F7: {
            spec.rho_target = 0.4 + 0.3 * unit(rng);
            const std::array<NonlinearTransform, 3> fs = {
                NonlinearTransform::Tanh, NonlinearTransform::Sin, NonlinearTransform::Relu};
            spec.transform = fs[static_cast<std::size_t>(index % 3)];
            break;
        }
        case Family::F8: {
            spec.rho_target = 0.3 + 0.3 * unit(rng);
            if (index % 4 == 3) {
                spec.noise = NoiseFamily::Laplace;
            } else {
                spec.noise = NoiseFamily::StudentT;
                const std::array<double, 3> nus = {3, 5, 10};
                spec.student_nu = nus[static_cast<std::size_t>(index % 3)];
            }
            break;
        }
        case Family::F9: {
            const int pattern = index % 5;
            const double sev = 0.6 + 0.35 * frac;
            spec.rho_target = 0.3 + 0.3 * unit(rng);
            if (pattern == 0) {  // breaks + persistence
                spec.rho_target = 0.86 + 0.08 * unit(rng);
                spec.persistent_diagonal = true;
                spec.breaks.push_back({0.3 + 0.4 * unit(rng), 1.2 + 1.8 * sev * unit(rng)});
            } else if (pattern == 1) {  // breaks + irregularity
                spec.breaks.push_back({0.3 + 0.4 * unit(rng), 2.0 + 1.0 * sev});
                spec.missing = MissingMechanism::Mcar;
                spec.missing_fraction = 0.20 + 0.12 * sev;
            } else if (pattern == 2) {  // persistence + seasonality
                spec.rho_target = 0.86 + 0.08 * unit(rng);
                spec.persistent_diagonal = true;
                spec.seasonal_period = index % 2 == 0 ? 12 : 24;
                spec.seasonal_amplitude = 1.5 + 1.5 * sev;
            } else if (pattern == 3) {  // irregularity + confounders
                spec.missing = MissingMechanism::Mar;
                spec.missing_fraction = 0.18 + 0.10 * sev;
                spec.latent_count = 1 + index % 2;
                spec.sigma_conf = 0.9;
            } else {  // all violations
                spec.rho_target = 0.82 + 0.1 * unit(rng);
                spec.persistent_diagonal = true;
                spec.breaks.push_back({0.3 + 0.4 * unit(rng), 1.8 + 1.2 * sev});
                spec.missing = MissingMechanism::Mcar;
                spec.missing_fraction = 0.22;
                spec.latent_count = 1;
                spec.sigma_conf = 0.9;
            }
            break;
        }
        case Family::F10: {
            spec.boundary = index < 8    ? BoundaryCase::ShortSeries
                            : index < 20 ? BoundaryCase::Sparse
                            : index < 38 ? BoundaryCase::HighDim
                                         : BoundaryCase::NearUnitRoot;
            if (spec.boundary == BoundaryCase::ShortSeries) {
                spec.n_vars = 6;
                spec.t_obs = 200;
                spec.rho_target = 0.4 + 0.2 * unit(rng);
            } else if (spec.boundary == BoundaryCase::Sparse) {
                const std::array<int, 4> ns = {3, 4, 10, 12};
                spec.n_vars = ns[static_cast<std::size_t>(index % 4)];
                spec.t_obs = spec.n_vars >= 10 ? 1500
                             : index % 2 == 0 ? 200
                                              : 300;
                spec.rho_target = 0.4 + 0.2 * unit(rng);
                spec.missing = MissingMechanism::Mcar;
                spec.missing_fraction = 0.29 + 0.08 * unit(rng);
            } else if (spec.boundary == BoundaryCase::HighDim) {
                spec.n_vars = 12;
                spec.t_obs = 500;
                spec.rho_target = 0.4 + 0.15 * unit(rng);
            } else {
                const std::array<int, 4> ns = {3, 4, 10, 12};
                const std::array<int, 4> ts = {200, 300, 1500, 2000};
                spec.n_vars = ns[static_cast<std::size_t>(index % 4)];
                spec.t_obs = ts[static_cast<std::size_t>(index % 4)];
                spec.rho_target = 0.9;
                spec.persistent_diagonal = true;
            }
            break;
        }
    }
    return spec;
}

Atlas generate_atlas(std::uint64_t master_seed, int per_family,
                     bool with_failure_labels) {
    if (per_family < 1) fail(ErrorKind::InvalidArgument, "per_family must be >= 1");

    Atlas atlas;
    atlas.manifest.master_seed = master_seed;
    atlas.manifest.per_family = per_family;

    for (int f = 1; f <= 10; ++f) {
        for (int i = 0; i < per_family; ++i) {
            const auto spec =
                make_family_spec(static_cast<Family>(f), i, per_family, master_seed);
            AtlasEntry entry = generate_dataset(spec);

            if (with_failure_labels) {
                entry.discovery.computed = true;
                try {
                    const auto graph = var_granger_discover(entry.data, 1, 0.05);
                    const auto score = score_graph(graph, entry.truth);
                    entry.discovery.failure = failure_label(score);
                    entry.discovery.fpr = score.fpr;
                    entry.discovery.fnr = score.fnr;
                    entry.discovery.f1 = score.f1;
                } catch (const AuditError&) {
                    // Discovery could not run at all; that counts as failure.
                    entry.discovery.errored = true;
                    entry.discovery.failure = true;
                    entry.discovery.fnr = 1.0;
                }
            }
            atlas.manifest.specs.push_back(entry.spec);
            atlas.manifest.labels.push_back(entry.labels);
            atlas.manifest.discovery.push_back(entry.discovery);
            atlas.entries.push_back(std::move(entry));
        }
    }
    return atlas;
}

}  // namespace tsaudit
