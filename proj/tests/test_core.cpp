#include "tsaudit/series_io.hpp"
#include "tsaudit/types.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace tsaudit;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::trunc);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("csv ingestion: 3x2 clean file") {
    const auto path = write_temp("core_clean.csv", "t,a,b\n0,1.0,2.0\n1,1.5,2.5\n2,2.0,3.0\n");
    const auto series = load_series(path, SeriesFormat::CsvWithTimeColumn);
    CHECK(series.rows() == 3);
    CHECK(series.cols() == 2);
    CHECK(series.names()[0] == "a");
    CHECK(series.values()(2, 1) == doctest::Approx(3.0));
    for (Eigen::Index t = 0; t < 3; ++t)
        for (Eigen::Index j = 0; j < 2; ++j) CHECK_FALSE(series.missing(t, j));
}

TEST_CASE("csv ingestion: non-monotone time rejected") {
    const auto path = write_temp("core_nonmono.csv", "t,a,b\n0,1,2\n2,1,2\n1,1,2\n");
    CHECK_THROWS_WITH_AS(load_series(path, SeriesFormat::CsvWithTimeColumn),
                         doctest::Contains("strictly increasing"), AuditError);
}

TEST_CASE("csv ingestion: empty cell becomes mask") {
    const auto path = write_temp("core_hole.csv", "t,a,b\n0,1.0,2.0\n1,,2.5\n2,2.0,3.0\n");
    const auto series = load_series(path, SeriesFormat::CsvWithTimeColumn);
    CHECK(series.missing(1, 0));
    CHECK_FALSE(series.missing(1, 1));
    CHECK(series.values()(2, 0) == doctest::Approx(2.0));
    CHECK(series.missing_fraction() == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("degenerate ingestion: too few rows or observations") {
    const auto one_row = write_temp("core_onerow.csv", "t,a\n0,1\n");
    CHECK_THROWS_AS(load_series(one_row, SeriesFormat::CsvWithTimeColumn), AuditError);

    const auto sparse_col = write_temp("core_sparsecol.csv", "t,a,b\n0,,1\n1,,2\n2,1,3\n");
    CHECK_THROWS_WITH_AS(load_series(sparse_col, SeriesFormat::CsvWithTimeColumn),
                         doctest::Contains("fewer than 2 observed"), AuditError);
}

TEST_CASE("json matrix round trip is exact") {
    Eigen::MatrixXd values(3, 2);
    values << 0.1, -2.25, 1e-17, 3.5, 4.0, 1234.5678;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask(3, 2);
    mask.setConstant(false);
    mask(1, 1) = true;
    TimeSeriesMatrix series({0.0, 0.5, 2.0}, values, mask, {"u", "v"});

    const auto reloaded = from_json_matrix(to_json_matrix(series));
    CHECK(reloaded.timestamps() == series.timestamps());
    CHECK(reloaded.names() == series.names());
    for (Eigen::Index t = 0; t < 3; ++t)
        for (Eigen::Index j = 0; j < 2; ++j) {
            CHECK(reloaded.missing(t, j) == series.missing(t, j));
            if (!series.missing(t, j))
                CHECK(reloaded.values()(t, j) == series.values()(t, j));
        }
}

TEST_CASE("summary graph invariants") {
    SummaryGraph g(3, 2);
    g.add_edge(0, 1, 1);
    g.add_edge(0, 1, 1);  // duplicate collapses
    CHECK(g.size() == 1);
    CHECK_THROWS_AS(g.add_edge(0, 0, 0), AuditError);
    CHECK_THROWS_AS(g.add_edge(3, 0, 1), AuditError);
    CHECK_THROWS_AS(g.add_edge(0, 1, 5), AuditError);
    g.add_edge(2, 2, 1);  // self edge at positive lag is fine
    CHECK(g.universe_size() == 3 * 3 * 3 - 3);
}

TEST_CASE("audit config validation") {
    AuditConfig config;
    CHECK_NOTHROW(config.validate());
    CHECK(config.abstention_threshold() == doctest::Approx(0.3));

    AuditConfig bad = config;
    bad.u_abstain = 10.0;  // violates u_minus >= u_abstain
    CHECK_THROWS_AS(bad.validate(), AuditError);
}
