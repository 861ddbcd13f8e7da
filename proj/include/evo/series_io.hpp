#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "evo/series.hpp"

namespace evo {

/// Raised when an output file or directory cannot be created or written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Columns: t,I,round,S,B,good_swaps,flags. Absent S/B are empty cells.
void write_series_csv(std::ostream& out, const std::vector<TimeSeriesRecord>& series);
void write_series_csv(const std::string& path, const std::vector<TimeSeriesRecord>& series);
void write_json(const std::string& path, const nlohmann::ordered_json& j);
/// Creates the directory (and parents) if needed; throws OutputError.
void ensure_directory(const std::string& dir);

}  // namespace evo
