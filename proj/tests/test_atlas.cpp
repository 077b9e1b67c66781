#include "tsaudit/atlas.hpp"
#include "tsaudit/config_io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace tsaudit;

TEST_CASE("stable var matrix hits the target spectral radius") {
    // Scalar case.
    const auto a1 = stable_var_matrix(1, 0.5, 1.0, 3);
    CHECK(a1(0, 0) == doctest::Approx(0.5));

    // Zero target.
    const auto a0 = stable_var_matrix(4, 0.0, 0.3, 3);
    CHECK(a0.norm() == doctest::Approx(0.0));

    const auto a = stable_var_matrix(6, 0.95, 0.3, 7);
    CHECK(spectral_radius(a) == doctest::Approx(0.95).epsilon(1e-6));
    for (int i = 0; i < 6; ++i) CHECK(a(i, i) != 0.0);
}

TEST_CASE("generate_dataset is deterministic and matches its truth graph") {
    const auto spec = make_family_spec(Family::F1, 3, 50, 99);
    const auto a = generate_dataset(spec);
    const auto b = generate_dataset(spec);

    CHECK(a.data.values() == b.data.values());
    CHECK(a.data.timestamps() == b.data.timestamps());
    CHECK(a.truth.edges() == b.truth.edges());
    for (Eigen::Index t = 0; t < a.data.rows(); ++t)
        for (Eigen::Index j = 0; j < a.data.cols(); ++j)
            CHECK(a.data.missing(t, j) == b.data.missing(t, j));

    // Truth edges: every diagonal entry is present at lag 1.
    for (int j = 0; j < a.truth.n_vars(); ++j) CHECK(a.truth.has_edge(j, j, 1));
}

TEST_CASE("family F4 entries hit the near-unit-root band") {
    for (int i : {0, 25, 49}) {
        const auto spec = make_family_spec(Family::F4, i, 50, 5);
        CHECK(spec.rho_target >= 0.92);
        CHECK(spec.rho_target <= 0.98);
        const auto entry = generate_dataset(spec);
        CHECK(entry.realized_spectral_radius ==
              doctest::Approx(spec.rho_target).epsilon(1e-6));
        CHECK(entry.labels.severity[2] > 0.5);  // persistence severity saturated
        CHECK(entry.labels.analytic_tau_int > 6.0);
    }
}

TEST_CASE("family F3 realizes its missing fraction") {
    const auto spec = make_family_spec(Family::F3, 24, 50, 5);
    REQUIRE(spec.missing_fraction >= 0.15);
    REQUIRE(spec.missing_fraction <= 0.35);
    const auto entry = generate_dataset(spec);
    CHECK(entry.data.missing_fraction() ==
          doctest::Approx(spec.missing_fraction).epsilon(0.25));
}

TEST_CASE("family F5 sweeps the documented confounder grid") {
    for (int i = 0; i < 12; ++i) {
        const auto spec = make_family_spec(Family::F5, i, 50, 5);
        CHECK((spec.latent_count == 1 || spec.latent_count == 2));
        CHECK((spec.sigma_conf == 0.3 || spec.sigma_conf == 0.6 || spec.sigma_conf == 0.9));
    }
}

TEST_CASE("latent confounder induces detectable dependence between children") {
    DgpSpec spec = make_family_spec(Family::F5, 4, 50, 5);
    spec.sigma_conf = 0.9;
    spec.latent_count = 1;
    spec.latent_children = 2;
    const auto entry = generate_dataset(spec);

    // Strongest absolute cross-correlation between distinct columns.
    const auto& v = entry.data.values();
    double best = 0.0;
    for (Eigen::Index a = 0; a < v.cols(); ++a)
        for (Eigen::Index b = a + 1; b < v.cols(); ++b) {
            const auto ca = v.col(a).array() - v.col(a).mean();
            const auto cb = v.col(b).array() - v.col(b).mean();
            const double corr =
                (ca * cb).sum() / std::sqrt((ca * ca).sum() * (cb * cb).sum());
            best = std::max(best, std::abs(corr));
        }
    CHECK(best > 0.1);
}

TEST_CASE("atlas round-trips through its on-disk layout") {
    const auto atlas = generate_atlas(1234, 2, /*with_failure_labels=*/false);
    REQUIRE(atlas.entries.size() == 20);

    const auto dir = std::filesystem::temp_directory_path() / "tsaudit_atlas_rt";
    std::filesystem::remove_all(dir);
    save_atlas(atlas, dir);
    const auto loaded = load_atlas(dir);
    REQUIRE(loaded.entries.size() == atlas.entries.size());
    for (std::size_t i = 0; i < atlas.entries.size(); ++i) {
        CHECK(loaded.entries[i].spec.seed == atlas.entries[i].spec.seed);
        const auto& a = atlas.entries[i].data;
        const auto& b = loaded.entries[i].data;
        bool observed_equal = a.rows() == b.rows() && a.cols() == b.cols();
        for (Eigen::Index t = 0; t < a.rows() && observed_equal; ++t)
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                if (a.missing(t, j) != b.missing(t, j)) observed_equal = false;
                else if (!a.missing(t, j) && a.values()(t, j) != b.values()(t, j))
                    observed_equal = false;
            }
        CHECK(observed_equal);
        CHECK(loaded.entries[i].truth.edges() == atlas.entries[i].truth.edges());
        CHECK(loaded.entries[i].labels.label == atlas.entries[i].labels.label);
    }
    std::filesystem::remove_all(dir);
}
