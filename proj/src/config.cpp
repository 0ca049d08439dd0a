#include "lunar/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>

namespace lunar {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"sx", [](auto& c, auto& k, auto& v) { c.subsample.s_x = parse_int(k, v); }},
      {"sy", [](auto& c, auto& k, auto& v) { c.subsample.s_y = parse_int(k, v); }},
      {"variance_window_w", [](auto& c, auto& k, auto& v) { c.variance_window_w = parse_int(k, v); }},
      {"variance_window_h", [](auto& c, auto& k, auto& v) { c.variance_window_h = parse_int(k, v); }},
      {"template_size",
       [](auto& c, auto& k, auto& v) { c.templates.template_w = c.templates.template_h = parse_int(k, v); }},
      {"template_w", [](auto& c, auto& k, auto& v) { c.templates.template_w = parse_int(k, v); }},
      {"template_h", [](auto& c, auto& k, auto& v) { c.templates.template_h = parse_int(k, v); }},
      {"template_count", [](auto& c, auto& k, auto& v) { c.templates.count = parse_int(k, v); }},
      {"border_margin", [](auto& c, auto& k, auto& v) { c.templates.border_margin = parse_int(k, v); }},
      {"template_min_separation",
       [](auto& c, auto& k, auto& v) { c.templates.min_separation = parse_int(k, v); }},
      {"search_radius", [](auto& c, auto& k, auto& v) { c.search_radius = parse_int(k, v); }},
      {"residual_limit", [](auto& c, auto& k, auto& v) { c.residual_limit = parse_double(k, v); }},
      {"patch_radius", [](auto& c, auto& k, auto& v) { c.detector.patch_radius = parse_int(k, v); }},
      {"lambda_t", [](auto& c, auto& k, auto& v) { c.detector.lambda_t = parse_double(k, v); }},
      {"nms_radius", [](auto& c, auto& k, auto& v) { c.detector.nms_radius = parse_int(k, v); }},
      {"max_features", [](auto& c, auto& k, auto& v) { c.detector.max_features = parse_int(k, v); }},
      {"feature_min_separation",
       [](auto& c, auto& k, auto& v) { c.detector.min_separation = parse_int(k, v); }},
      {"window_radius", [](auto& c, auto& k, auto& v) { c.flow.window_radius = parse_int(k, v); }},
      {"max_iterations", [](auto& c, auto& k, auto& v) { c.flow.max_iterations = parse_int(k, v); }},
      {"epsilon", [](auto& c, auto& k, auto& v) { c.flow.epsilon = parse_double(k, v); }},
      {"det_min", [](auto& c, auto& k, auto& v) { c.flow.det_min = parse_double(k, v); }},
      {"max_residual", [](auto& c, auto& k, auto& v) { c.flow.max_residual = parse_double(k, v); }},
      {"overlay", [](auto& c, auto& k, auto& v) { c.overlay = parse_bool(k, v); }},
  };
  return table;
}

}  // namespace

int PipelineConfig::map_window_w() const {
  return variance_window_w > 0 ? variance_window_w : templates.template_w / std::max(1, subsample.s_x);
}

int PipelineConfig::map_window_h() const {
  return variance_window_h > 0 ? variance_window_h : templates.template_h / std::max(1, subsample.s_y);
}

void PipelineConfig::validate() const {
  if (subsample.s_x < 1 || subsample.s_y < 1) throw ConfigError("sx and sy must be >= 1");
  try {
    (void)templates.resolved(subsample);
  } catch (const BoundsError& e) {
    throw ConfigError(e.what());
  }
  // The variance window is the template footprint on the subsampled grid.
  if (map_window_w() * subsample.s_x != templates.template_w ||
      map_window_h() * subsample.s_y != templates.template_h) {
    throw ConfigError("variance window must equal template size / subsample interval");
  }
  if (search_radius < 0) throw ConfigError("search_radius must be >= 0");
  if (!(residual_limit >= 0.0)) throw ConfigError("residual_limit must be >= 0");
  if (detector.patch_radius < 1) throw ConfigError("patch_radius must be >= 1");
  if (!(detector.lambda_t > 0.0)) throw ConfigError("lambda_t must be > 0");
  if (detector.nms_radius < 1) throw ConfigError("nms_radius must be >= 1");
  if (detector.max_features < 1) throw ConfigError("max_features must be >= 1");
  if (detector.min_separation < 0) throw ConfigError("feature_min_separation must be >= 0");
  if (flow.window_radius < 1) throw ConfigError("window_radius must be >= 1");
  if (flow.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(flow.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(flow.det_min > 0.0)) throw ConfigError("det_min must be > 0");
  if (!(flow.max_residual >= 0.0)) throw ConfigError("max_residual must be >= 0");
}

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, key, value);
}

void apply_config(PipelineConfig& cfg, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  apply_config(cfg, in);
}

}  // namespace lunar
