#include "sapr/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sapr {

Scenario RunConfig::scenario() const {
  Scenario sc;
  sc.sources = sources;
  const double wavelength = kSpeedOfLight / frequency_hz;
  sc.geometry = ApertureGeometry::rectangular(
      aperture_rows, aperture_cols, spacing_lambda * wavelength, frequency_hz);
  sc.embedding = embedding;
  sc.noise.sigma = noise_sigma;
  sc.noise.seed = seed;
  return sc;
}

PipelineConfig RunConfig::pipeline_config() const {
  PipelineConfig pc;
  pc.stage1.l1_weight = stage1_l1_weight;
  pc.stage1.lp_tol = lp_tol;
  pc.stage1.lp_max_iter = lp_max_iter;
  pc.ap = ap;
  pc.ap.stage2_l1_weight = stage2_l1_weight;
  pc.ap.lp_tol = lp_tol;
  pc.ap.lp_max_iter = lp_max_iter;
  return pc;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size() && std::isfinite(out);
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, long long& out) {
  try {
    size_t pos = 0;
    out = std::stoll(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes") { out = true; return true; }
  if (s == "false" || s == "0" || s == "no") { out = false; return true; }
  return false;
}

bool parse_axis(const std::string& s, int& out) {
  if (s == "X" || s == "x" || s == "0") { out = 0; return true; }
  if (s == "Y" || s == "y" || s == "1") { out = 1; return true; }
  if (s == "Z" || s == "z" || s == "2") { out = 2; return true; }
  return false;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig pc;
  auto error = [&](const std::string& msg) {
    pc.issues.push_back({true, msg});
  };
  auto warn = [&](const std::string& msg) {
    pc.issues.push_back({false, msg});
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      error("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      error("line " + std::to_string(lineno) + ": empty key or value");
      continue;
    }
    if (pc.raw.count(key)) {
      error("duplicate key: " + key);
      continue;
    }
    pc.raw[key] = value;
  }

  RunConfig& c = pc.config;
  std::map<int, Source> sources;

  for (const auto& [key, value] : pc.raw) {
    double dv;
    long long iv;
    bool bv;
    int axis;
    if (key == "frequency_hz") {
      if (!parse_double(value, dv)) error(key + ": not a number");
      else c.frequency_hz = dv;
    } else if (key == "aperture.rows" || key == "aperture.cols") {
      if (!parse_int(value, iv) || iv < 1) error(key + ": needs integer >= 1");
      else (key == "aperture.rows" ? c.aperture_rows : c.aperture_cols) =
               static_cast<int>(iv);
    } else if (key == "aperture.spacing_lambda") {
      if (!parse_double(value, dv)) error(key + ": not a number");
      else c.spacing_lambda = dv;
    } else if (key.rfind("source.", 0) == 0) {
      const auto rest = key.substr(7);
      const auto dot = rest.find('.');
      long long idx;
      if (dot == std::string::npos || !parse_int(rest.substr(0, dot), idx) ||
          idx < 0) {
        error(key + ": expected source.<index>.<field>");
        continue;
      }
      const std::string field = rest.substr(dot + 1);
      Source& src = sources[static_cast<int>(idx)];
      if (field == "position_mm") {
        const auto parts = split_list(value);
        double xyz[3];
        bool ok = parts.size() == 3;
        for (int i = 0; ok && i < 3; ++i) ok = parse_double(parts[i], xyz[i]);
        if (!ok) error(key + ": expected three numbers (mm)");
        else src.position_m = Eigen::Vector3d(xyz[0], xyz[1], xyz[2]) * 1e-3;
      } else if (field == "power_db") {
        if (!parse_double(value, dv)) error(key + ": not a number");
        else src.power_db = dv;
      } else {
        error(key + ": unknown source field");
      }
    } else if (key == "noise.sigma") {
      if (!parse_double(value, dv) || dv < 0) error(key + ": needs number >= 0");
      else c.noise_sigma = dv;
    } else if (key == "seed" || key == "noise.seed") {
      if (!parse_int(value, iv) || iv < 0) error(key + ": needs integer >= 0");
      else c.seed = static_cast<std::uint64_t>(iv);
    } else if (key == "embedding.u_axis") {
      if (!parse_axis(value, axis)) error(key + ": expected X, Y or Z");
      else c.embedding.u_axis = axis;
    } else if (key == "embedding.v_axis") {
      if (!parse_axis(value, axis)) error(key + ": expected X, Y or Z");
      else c.embedding.v_axis = axis;
    } else if (key == "embedding.boresight_axis") {
      if (!parse_axis(value, axis)) error(key + ": expected X, Y or Z");
      else c.embedding.boresight_axis = axis;
    } else if (key.rfind("stage1.grid.", 0) == 0 ||
               key.rfind("stage2.grid.", 0) == 0 ||
               key.rfind("eval.grid.", 0) == 0) {
      GridSpec& g = key[0] == 'e' ? c.eval_grid
                    : key[5] == '1' ? c.stage1_grid
                                    : c.stage2_grid;
      const std::string field = key.substr(key.rfind('.') + 1);
      if (field == "rows" || field == "cols") {
        if (!parse_int(value, iv) || iv < 1) error(key + ": needs integer >= 1");
        else (field == "rows" ? g.rows : g.cols) = static_cast<int>(iv);
      } else if (field == "extent") {
        if (!parse_double(value, dv) || dv <= 0 || dv > 1)
          error(key + ": needs number in (0, 1]");
        else g.extent = dv;
      } else {
        error(key + ": unknown grid field");
      }
    } else if (key == "stage1.l1_weight") {
      if (!parse_double(value, dv) || dv < 0) error(key + ": needs number >= 0");
      else c.stage1_l1_weight = dv;
    } else if (key == "stage2.l1_weight") {
      if (!parse_double(value, dv) || dv < 0) error(key + ": needs number >= 0");
      else c.stage2_l1_weight = dv;
    } else if (key == "lp.tol") {
      if (!parse_double(value, dv) || dv <= 0) error(key + ": needs number > 0");
      else c.lp_tol = dv;
    } else if (key == "lp.max_iter") {
      if (!parse_int(value, iv) || iv < 1) error(key + ": needs integer >= 1");
      else c.lp_max_iter = static_cast<int>(iv);
    } else if (key == "ap.k_hat") {
      if (!parse_int(value, iv) || iv < 1) error(key + ": needs integer >= 1");
      else c.ap.k_hat = static_cast<int>(iv);
    } else if (key == "ap.nu") {
      if (!parse_double(value, dv) || dv < 0) error(key + ": needs number >= 0");
      else c.ap.nu = dv;
    } else if (key == "ap.n_cg") {
      if (!parse_int(value, iv) || iv < 1) error(key + ": needs integer >= 1");
      else c.ap.n_cg = static_cast<int>(iv);
    } else if (key == "ap.n_ap") {
      if (!parse_int(value, iv) || iv < 1) error(key + ": needs integer >= 1");
      else c.ap.n_ap = static_cast<int>(iv);
    } else if (key == "ap.stop_tol_scale") {
      if (!parse_double(value, dv) || dv < 0) error(key + ": needs number >= 0");
      else c.ap.stop_tol_scale = dv;
    } else if (key == "ap.phase_update") {
      if (value == "accumulate") c.ap.phase_update = PhaseUpdate::Accumulate;
      else if (value == "replace") c.ap.phase_update = PhaseUpdate::Replace;
      else error(key + ": expected accumulate or replace");
    } else if (key == "linesearch.growth") {
      if (!parse_double(value, dv) || dv <= 1)
        error(key + ": needs number > 1");
      else c.ap.line_search.bracket_growth = dv;
    } else if (key == "linesearch.tol") {
      if (!parse_double(value, dv) || dv <= 0) error(key + ": needs number > 0");
      else c.ap.line_search.tol = dv;
    } else if (key == "linesearch.max_evals") {
      if (!parse_int(value, iv) || iv < 8) error(key + ": needs integer >= 8");
      else c.ap.line_search.max_evals = static_cast<int>(iv);
    } else if (key == "output.dir") {
      c.output_dir = value;
    } else if (key == "output.emit_svg") {
      if (!parse_bool(value, bv)) error(key + ": expected true/false");
      else c.emit_svg = bv;
    } else {
      error("unknown key: " + key);
    }
  }

  // assemble sources in index order, requiring a dense 0..n-1 numbering
  for (const auto& [idx, src] : sources) {
    if (idx != static_cast<int>(c.sources.size())) {
      error("source indices must be dense starting at 0");
      break;
    }
    c.sources.push_back(src);
  }

  // semantic checks
  if (!(c.frequency_hz > 0)) error("frequency_hz must be positive");
  if (!(c.spacing_lambda > 0)) error("aperture.spacing_lambda must be positive");
  if (c.sources.empty()) error("at least one source is required");
  for (size_t i = 0; i < c.sources.size(); ++i) {
    if (!c.sources[i].position_m.allFinite()) {
      error("source." + std::to_string(i) + ".position_mm missing or invalid");
    }
  }
  if (!c.embedding.valid()) error("embedding axes must be distinct");
  if (c.stage1_grid.rows * c.stage1_grid.cols >
      c.stage2_grid.rows * c.stage2_grid.cols) {
    warn("stage1 grid larger than stage2 grid (allowed but unusual)");
  }
  return pc;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParsedConfig pc;
    pc.issues.push_back({true, "cannot open config file: " + path});
    return pc;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::vector<std::pair<std::string, std::string>> effective_parameters(
    const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  auto num = [](double v) {
    char buf[64];
    snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  auto axis_name = [](int a) { return a == 0 ? "X" : a == 1 ? "Y" : "Z"; };
  out.emplace_back("frequency_hz", num(c.frequency_hz));
  out.emplace_back("wavelength_m", num(kSpeedOfLight / c.frequency_hz));
  out.emplace_back("aperture.rows", std::to_string(c.aperture_rows));
  out.emplace_back("aperture.cols", std::to_string(c.aperture_cols));
  out.emplace_back("aperture.spacing_lambda", num(c.spacing_lambda));
  out.emplace_back("aperture.spacing_m",
                   num(c.spacing_lambda * kSpeedOfLight / c.frequency_hz));
  for (size_t i = 0; i < c.sources.size(); ++i) {
    const auto& s = c.sources[i];
    out.emplace_back("source." + std::to_string(i) + ".position_mm",
                     num(s.position_m.x() * 1e3) + "," +
                         num(s.position_m.y() * 1e3) + "," +
                         num(s.position_m.z() * 1e3));
    out.emplace_back("source." + std::to_string(i) + ".power_db",
                     num(s.power_db));
  }
  out.emplace_back("embedding.u_axis", axis_name(c.embedding.u_axis));
  out.emplace_back("embedding.v_axis", axis_name(c.embedding.v_axis));
  out.emplace_back("embedding.boresight_axis",
                   axis_name(c.embedding.boresight_axis));
  out.emplace_back("noise.sigma", num(c.noise_sigma));
  out.emplace_back("seed", std::to_string(c.seed));
  auto grid = [&](const std::string& name, const GridSpec& g) {
    out.emplace_back(name + ".rows", std::to_string(g.rows));
    out.emplace_back(name + ".cols", std::to_string(g.cols));
    out.emplace_back(name + ".extent", num(g.extent));
  };
  grid("stage1.grid", c.stage1_grid);
  grid("stage2.grid", c.stage2_grid);
  grid("eval.grid", c.eval_grid);
  out.emplace_back("stage1.l1_weight", num(c.stage1_l1_weight));
  out.emplace_back("stage2.l1_weight", num(c.stage2_l1_weight));
  out.emplace_back("lp.tol", num(c.lp_tol));
  out.emplace_back("lp.max_iter", std::to_string(c.lp_max_iter));
  out.emplace_back("ap.k_hat", std::to_string(c.ap.k_hat));
  out.emplace_back("ap.nu", num(c.ap.nu));
  out.emplace_back("ap.n_cg", std::to_string(c.ap.n_cg));
  out.emplace_back("ap.n_ap", std::to_string(c.ap.n_ap));
  out.emplace_back("ap.stop_tol_scale", num(c.ap.stop_tol_scale));
  out.emplace_back("ap.phase_update",
                   c.ap.phase_update == PhaseUpdate::Accumulate ? "accumulate"
                                                                : "replace");
  out.emplace_back("linesearch.growth", num(c.ap.line_search.bracket_growth));
  out.emplace_back("linesearch.tol", num(c.ap.line_search.tol));
  out.emplace_back("linesearch.max_evals",
                   std::to_string(c.ap.line_search.max_evals));
  out.emplace_back("output.dir", c.output_dir);
  out.emplace_back("output.emit_svg", c.emit_svg ? "true" : "false");
  return out;
}

}  // namespace sapr
