#pragma once

#include "tsaudit/types.hpp"

#include <filesystem>
#include <string>

namespace tsaudit {

enum class SeriesFormat { CsvWithTimeColumn, JsonMatrix };

// CSV: header row with names, first column is time, empty field = missing.
// JSON matrix: {"timestamps": [...], "values": [[... null ...]], "names": [...]}.
TimeSeriesMatrix load_series(const std::filesystem::path& path, SeriesFormat format);

// Format inferred from the extension (.csv vs .json).
TimeSeriesMatrix load_series(const std::filesystem::path& path);

std::string to_json_matrix(const TimeSeriesMatrix& series);
TimeSeriesMatrix from_json_matrix(const std::string& text);

void save_series_json(const TimeSeriesMatrix& series, const std::filesystem::path& path);

}  // namespace tsaudit
