#include "tsaudit/series_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace tsaudit {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

std::string trimmed(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) fail(ErrorKind::Parse, "trailing characters in " + context);
        return v;
    } catch (const AuditError&) {
        throw;
    } catch (const std::exception&) {
        fail(ErrorKind::Parse, "cannot parse number '" + s + "' in " + context);
    }
}

TimeSeriesMatrix load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Parse, "empty file " + path.string());
    auto header = split_csv_line(line);
    if (header.size() < 2) fail(ErrorKind::Parse, "need a time column plus data columns");

    std::vector<std::string> names(header.begin() + 1, header.end());
    const std::size_t ncols = names.size();

    std::vector<double> timestamps;
    std::vector<std::vector<double>> rows;
    std::vector<std::vector<bool>> masks;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trimmed(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != ncols + 1)
            fail(ErrorKind::Parse, "row " + std::to_string(lineno) + " has " +
                                       std::to_string(fields.size()) + " fields, expected " +
                                       std::to_string(ncols + 1));
        timestamps.push_back(parse_number(trimmed(fields[0]),
                                          "time column, row " + std::to_string(lineno)));
        std::vector<double> row(ncols, 0.0);
        std::vector<bool> miss(ncols, false);
        for (std::size_t j = 0; j < ncols; ++j) {
            const std::string cell = trimmed(fields[j + 1]);
            if (cell.empty() || cell == "NA" || cell == "nan" || cell == "NaN") {
                miss[j] = true;
            } else {
                row[j] = parse_number(cell, "row " + std::to_string(lineno));
            }
        }
        rows.push_back(std::move(row));
        masks.push_back(std::move(miss));
    }

    const Eigen::Index T = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index N = static_cast<Eigen::Index>(ncols);
    if (T < 2) fail(ErrorKind::DegenerateSeries, "fewer than 2 data rows");
    Eigen::MatrixXd values(T, N);
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask(T, N);
    for (Eigen::Index t = 0; t < T; ++t)
        for (Eigen::Index j = 0; j < N; ++j) {
            values(t, j) = rows[t][j];
            mask(t, j) = masks[t][j];
        }
    return TimeSeriesMatrix(std::move(timestamps), std::move(values), std::move(mask),
                            std::move(names));
}

}  // namespace

TimeSeriesMatrix from_json_matrix(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.contains("timestamps") || !doc.contains("values"))
        fail(ErrorKind::Parse, "JSON matrix needs 'timestamps' and 'values'");

    std::vector<double> timestamps = doc["timestamps"].get<std::vector<double>>();
    const auto& vals = doc["values"];
    const Eigen::Index T = static_cast<Eigen::Index>(vals.size());
    if (T < 2) fail(ErrorKind::DegenerateSeries, "fewer than 2 rows");
    const Eigen::Index N = static_cast<Eigen::Index>(vals[0].size());
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(T, N);
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask(T, N);
    mask.setConstant(false);
    for (Eigen::Index t = 0; t < T; ++t) {
        if (static_cast<Eigen::Index>(vals[t].size()) != N)
            fail(ErrorKind::Parse, "ragged 'values' rows");
        for (Eigen::Index j = 0; j < N; ++j) {
            const auto& cell = vals[t][j];
            if (cell.is_null())
                mask(t, j) = true;
            else
                values(t, j) = cell.get<double>();
        }
    }
    std::vector<std::string> names;
    if (doc.contains("names")) names = doc["names"].get<std::vector<std::string>>();
    return TimeSeriesMatrix(std::move(timestamps), std::move(values), std::move(mask),
                            std::move(names));
}

std::string to_json_matrix(const TimeSeriesMatrix& series) {
    json doc;
    doc["timestamps"] = series.timestamps();
    doc["names"] = series.names();
    json rows = json::array();
    for (Eigen::Index t = 0; t < series.rows(); ++t) {
        json row = json::array();
        for (Eigen::Index j = 0; j < series.cols(); ++j) {
            if (series.missing(t, j))
                row.push_back(nullptr);
            else
                row.push_back(series.values()(t, j));
        }
        rows.push_back(std::move(row));
    }
    doc["values"] = std::move(rows);
    return doc.dump(2);
}

TimeSeriesMatrix load_series(const std::filesystem::path& path, SeriesFormat format) {
    if (format == SeriesFormat::CsvWithTimeColumn) return load_csv(path);
    return from_json_matrix(read_file(path));
}

TimeSeriesMatrix load_series(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".csv") return load_series(path, SeriesFormat::CsvWithTimeColumn);
    return load_series(path, SeriesFormat::JsonMatrix);
}

void save_series_json(const TimeSeriesMatrix& series, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << to_json_matrix(series);
    out << '\n';
}

}  // namespace tsaudit
