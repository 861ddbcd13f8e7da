#include "evo/series_io.hpp"

#include <filesystem>
#include <fstream>

namespace evo {

std::string flags_to_string(std::uint32_t flags) {
  static const std::pair<std::uint32_t, const char*> kNames[] = {
      {kRoundEnd, "round_end"},
      {kPreludeEnd, "prelude_end"},
      {kPassEnd, "pass_end"},
      {kViolation, "violation"},
  };
  std::string out;
  for (const auto& [bit, name] : kNames) {
    if (!(flags & bit)) continue;
    if (!out.empty()) out += '|';
    out += name;
  }
  return out;
}

void write_series_csv(std::ostream& out, const std::vector<TimeSeriesRecord>& series) {
  out << "t,I,round,S,B,good_swaps,flags\n";
  for (const auto& r : series) {
    out << r.t << ',' << r.I << ',' << r.round << ',';
    if (r.S) out << *r.S;
    out << ',';
    if (r.B) out << *r.B;
    out << ',' << r.good_swaps << ',' << flags_to_string(r.flags) << '\n';
  }
}

void write_series_csv(const std::string& path, const std::vector<TimeSeriesRecord>& series) {
  std::ofstream out(path);
  if (!out) throw OutputError("cannot write " + path);
  write_series_csv(out, series);
  if (!out) throw OutputError("failed writing " + path);
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw OutputError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw OutputError("failed writing " + path);
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw OutputError("cannot create output directory " + dir);
  }
}

}  // namespace evo
