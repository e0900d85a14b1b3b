#pragma once

#include "lapnum/phase.hpp"
#include "lapnum/suites.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace lapnum {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

Json to_json(const TrendEvidence& t);
Json to_json(const EnvelopeReport& r);
Json to_json(const SweepRecord& s);
Json to_json(const PlateauStats& s);
Json to_json(const LapSuiteReport& r);
Json to_json(const RadiationSuiteReport& r);
Json to_json(const SmoothingReport& r);
Json to_json(const HoelderReport& r);
Json to_json(const RellichReport& r);
Json to_json(const CommutatorReport& r);
Json to_json(const UniquenessReport& r);
Json to_json(const HReport& r);
Json to_json(const WeightFn& w);  // metadata only

/// Rows of pre-formatted cells under a "# schema_version" line; 12 significant digits keep reruns byte-identical.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& row(std::vector<std::string> cells);
  void write(const std::filesystem::path& path) const;
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string cell(double v);
std::string cell(int v);
std::string cell(const std::string& v);

/// One row per (eps, metric).
Csv sweep_csv(const std::vector<SweepRecord>& sweeps);
/// r, Re a, Im a, eta, residual.
Csv phase_csv(const Phase& ph, const RicattiProfile& res, const RadialGrid& g);
/// r, value, derivative on a log axis.
Csv weight_csv(const WeightFn& w, double r_end, int per_octave = 16);

/// Pretty JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

/// <root>/<YYYYmmdd-HHMMSS>-<command>[-n], created fresh.
std::filesystem::path make_run_dir(const std::filesystem::path& root, const std::string& command);

}  // namespace lapnum
