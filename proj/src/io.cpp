#include "lapnum/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lapnum {

namespace {

// JSON has no inf or nan; they become strings so a reader sees them.
Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Json stats_body(const PlateauStats& s) {
  Json j;
  j["eps"] = nums(s.eps);
  j["max_ratio"] = nums(s.max_ratio);
  j["decade_max"] = nums(s.decade_max);
  j["variation"] = num(s.variation);
  j["control_max"] = nums(s.control_max);
  j["contrast"] = nums(s.contrast);
  j["contrast_growth"] = num(s.contrast_growth);
  return j;
}

}  // namespace

Json to_json(const TrendEvidence& t) {
  return Json{{"windows", nums(t.windows)}, {"slope", num(t.slope)}, {"monotone", t.monotone},
              {"verdict", to_string(t.verdict)}};
}

Json to_json(const EnvelopeReport& r) {
  Json j;
  j["potential"] = r.potential;
  j["sup_violation_sr"] = num(r.sup_violation_sr);
  j["sup_violation_lr_derivative"] = num(r.sup_violation_lr_derivative);
  j["sup_violation_grad"] = num(r.sup_violation_grad);
  j["tail_decay"] = to_json(r.tail_decay);
  j["integral"] = to_json(r.integral);
  j["v_lr_vanishing"] = to_json(r.v_lr_vanishing);
  j["integral_estimate"] = nums(r.integral_estimate);
  Json c = Json::object();
  for (const auto& [k, v] : r.clauses) c[k] = to_string(v);
  j["clauses"] = c;
  j["condition1"] = to_string(r.condition1);
  j["condition2"] = to_string(r.condition2);
  j["disclaimer"] = r.disclaimer;
  return j;
}

Json to_json(const SweepRecord& s) {
  Json j;
  j["potential"] = s.potential;
  j["lambda"] = num(s.lambda);
  j["sign"] = s.sign;
  j["truncation_sensitivity"] = num(s.truncation_sensitivity);
  j["truncation_limited"] = s.truncation_limited;
  j["audited"] = s.audited;
  Json rows = Json::array();
  for (const SweepRow& r : s.rows) {
    Json row{{"eps", num(r.eps)},           {"besov_psi", num(r.besov_psi)}, {"besov_star_u", num(r.besov_star_u)},
             {"besov_star_Au", num(r.besov_star_Au)}, {"hessian", num(r.hessian)}, {"l2_u", num(r.l2_u)},
             {"ratio", num(r.ratio)},       {"residual", num(r.residual)},   {"failed", r.failed}};
    for (const auto& [k, v] : r.extra) row[k] = num(v);
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

Json to_json(const PlateauStats& s) { return stats_body(s); }

Json to_json(const LapSuiteReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  j["stats"] = stats_body(r.stats);
  j["p_extension_worst"] = num(r.p_extension_worst);
  j["p_extension_checked"] = r.p_extension_checked;
  j["truncation_limited"] = r.truncation_limited;
  j["sweeps"] = r.sweeps.size();
  return j;
}

Json to_json(const RadiationSuiteReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  j["stats"] = stats_body(r.stats);
  j["h_kind"] = r.h_kind;
  j["h_growth"] = num(r.h_growth);
  j["condition2"] = to_string(r.condition2);
  j["h_valid"] = to_string(r.h_valid);
  j["item_c"] = r.item_c;
  j["truncation_limited"] = r.truncation_limited;
  j["sweeps"] = r.sweeps.size();
  return j;
}

Json to_json(const SmoothingReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  j["w1_valid"] = to_string(r.w1_valid);
  j["w2_valid"] = to_string(r.w2_valid);
  Json var = Json::object();
  for (const auto& [k, v] : r.variation) var[k] = num(v);
  j["variation"] = var;
  Json rows = Json::array();
  for (const SmoothingRow& row : r.rows) {
    Json n = Json::object();
    for (const auto& [k, v] : row.norms) n[k] = num(v);
    rows.push_back(Json{{"lambda", num(row.lambda)}, {"sign", row.sign}, {"eps", num(row.eps)}, {"norms", n},
                        {"nonconverged", row.nonconverged}});
  }
  j["rows"] = rows;
  return j;
}

Json to_json(const HoelderReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  j["lambda"] = num(r.lambda);
  j["slope"] = num(r.slope);
  j["slope_outer"] = num(r.slope_outer);
  j["slope_inner"] = num(r.slope_inner);
  j["tail_power"] = num(r.tail_power);
  j["decades"] = num(r.decades);
  j["c_spread"] = num(r.c_spread);
  j["truncation_delta"] = num(r.truncation_delta);
  j["w_valid"] = to_string(r.w_valid);
  j["h_valid"] = to_string(r.h_valid);
  j["h2w_valid"] = to_string(r.h2w_valid);
  Json rows = Json::array();
  for (const HoelderRow& row : r.rows)
    rows.push_back(Json{{"delta", num(row.delta)},
                        {"difference", num(row.difference)},
                        {"difference_outer", num(row.difference_outer)},
                        {"difference_inner", num(row.difference_inner)},
                        {"fitted_c", num(row.fitted_c)},
                        {"iterations", row.iterations},
                        {"converged", row.converged}});
  j["rows"] = rows;
  return j;
}

Json to_json(const RellichReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  j["max_gamma"] = num(r.max_gamma);
  j["failures"] = r.failures;
  Json c = Json::array();
  for (const RellichCandidate& k : r.candidates)
    c.push_back(Json{{"lambda", num(k.lambda)},
                     {"gamma", num(k.gamma)},
                     {"lo", num(k.lo)},
                     {"hi", num(k.hi)},
                     {"matching", num(k.matching)},
                     {"tail", k.tail}});
  j["candidates"] = c;
  j["bound_states"] = nums(r.bound_states);
  j["scan_points"] = r.scan.size();
  return j;
}

Json to_json(const CommutatorReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["note"] = r.note;
  j["c_min"] = num(r.c_min);
  j["c_common"] = num(r.c_common);
  j["excluded"] = r.excluded;
  int trivial = 0;
  for (const CommutatorState& s : r.states) trivial += s.trivial ? 1 : 0;
  j["trivial"] = trivial;
  j["states"] = r.states.size();
  return j;
}

Json to_json(const UniquenessReport& r) {
  Json j;
  j["accepted"] = r.accepted;
  j["discrepancy"] = num(r.discrepancy);
  j["extrapolation_error"] = num(r.extrapolation_error);
  j["comparison"] = r.comparison;
  j["refusal"] = r.refusal;
  j["besov_star_u"] = num(r.besov_star_u);
  j["besov_star_u_over_h"] = num(r.besov_star_u_over_h);
  j["h_besov_psi"] = num(r.h_besov_psi);
  j["tail_radiation"] = to_string(r.tail_radiation);
  j["tail_control"] = to_string(r.tail_control);
  j["tail_u"] = to_string(r.tail_u);
  j["slope_radiation"] = num(r.slope_radiation);
  j["slope_control"] = num(r.slope_control);
  j["slope_u"] = num(r.slope_u);
  j["flux"] = num(r.flux);
  j["residual"] = num(r.residual);
  return j;
}

Json to_json(const HReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  j["min_h"] = num(r.min_h);
  j["max_negative_derivative"] = num(r.max_negative_derivative);
  j["max_growth_excess"] = num(r.max_growth_excess);
  j["gronwall_worst"] = num(r.gronwall_worst);
  j["gronwall_pairs"] = r.gronwall_pairs;
  j["decay"] = to_json(r.decay);
  j["integrable"] = to_json(r.integrable);
  return j;
}

Json to_json(const WeightFn& w) {
  Json p = Json::object();
  for (const auto& [k, v] : w.params) p[k] = num(v);
  return Json{{"class", to_string(w.tag)}, {"kind", w.kind}, {"params", p}, {"note", w.note}};
}

std::string cell(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string cell(int v) { return std::to_string(v); }

std::string cell(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Csv::Csv(std::vector<std::string> header) : header_(std::move(header)) {}

Csv& Csv::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw Error("Csv::row: expected " + std::to_string(header_.size()) + " cells");
  rows_.push_back(std::move(cells));
  return *this;
}

void Csv::write(const std::filesystem::path& path) const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  };
  os << "# schema_version: " << kSchemaVersion << "\n";
  line(header_);
  for (const auto& r : rows_) line(r);
  write_text(path, os.str());
}

Csv sweep_csv(const std::vector<SweepRecord>& sweeps) {
  Csv csv({"sweep", "potential", "lambda", "sign", "eps", "metric", "value"});
  for (std::size_t s = 0; s < sweeps.size(); ++s) {
    const SweepRecord& rec = sweeps[s];
    for (const SweepRow& r : rec.rows) {
      auto put = [&](const std::string& metric, double v) {
        csv.row({cell(static_cast<int>(s)), cell(rec.potential), cell(rec.lambda), cell(rec.sign), cell(r.eps),
                 metric, cell(v)});
      };
      put("besov_psi", r.besov_psi);
      put("besov_star_u", r.besov_star_u);
      put("besov_star_Au", r.besov_star_Au);
      put("hessian", r.hessian);
      put("l2_u", r.l2_u);
      put("ratio", r.ratio);
      put("residual", r.residual);
      for (const auto& [k, v] : r.extra) put(k, v);
    }
  }
  return csv;
}

Csv phase_csv(const Phase& ph, const RicattiProfile& res, const RadialGrid& g) {
  Csv csv({"r", "re_a", "im_a", "eta", "residual"});
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    if (g.coord[j] < 0.0) continue;  // radial half only
    csv.row({cell(g.r[j]), cell(ph.a[j].real()), cell(ph.a[j].imag()), cell(ph.eta[j]), cell(res.residual[j])});
  }
  return csv;
}

Csv weight_csv(const WeightFn& w, double r_end, int per_octave) {
  Csv csv({"r", "value", "derivative"});
  for (double r : log_axis(r_end, per_octave)) csv.row({cell(r), cell(w.value(r)), cell(w.deriv(r))});
  return csv;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::filesystem::path make_run_dir(const std::filesystem::path& root, const std::string& command) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream stamp;
  stamp << std::put_time(&tm, "%Y%m%d-%H%M%S") << "-" << command;
  std::filesystem::create_directories(root);
  std::filesystem::path dir = root / stamp.str();
  for (int n = 2; std::filesystem::exists(dir); ++n) dir = root / (stamp.str() + "-" + std::to_string(n));
  std::filesystem::create_directory(dir);
  return dir;
}

}  // namespace lapnum
