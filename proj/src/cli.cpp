#include "sapr/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "sapr/alternating_projections.hpp"
#include "sapr/artifacts.hpp"
#include "sapr/beamformer_eval.hpp"
#include "sapr/config.hpp"

namespace sapr {

namespace {

namespace fs = std::filesystem;

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool no_svg = false;
};

int load_config(const CliOptions& opt, RunConfig& config, bool print_issues) {
  ParsedConfig parsed = parse_config_file(opt.config_path);
  for (const auto& issue : parsed.issues) {
    if (print_issues || issue.is_error) {
      std::cerr << (issue.is_error ? "error: " : "warning: ") << issue.message
                << "\n";
    }
  }
  if (!parsed.ok()) return kExitConfigError;
  config = parsed.config;
  if (!opt.out_dir.empty()) config.output_dir = opt.out_dir;
  if (opt.seed) config.seed = *opt.seed;
  if (opt.no_svg) config.emit_svg = false;
  return kExitOk;
}

CsvTable intensity_table(const ApertureGeometry& geom, const Measurements& m) {
  CsvTable t;
  t.header = {"element", "x_m", "y_m", "intensity", "magnitude"};
  for (int i = 0; i < geom.size(); ++i) {
    t.rows.push_back({std::to_string(i), csv_cell(geom.positions[i].x()),
                      csv_cell(geom.positions[i].y()),
                      csv_cell(m.intensity[i]), csv_cell(m.magnitude[i])});
  }
  return t;
}

CsvTable phase_table(const ApertureGeometry& geom, const Eigen::VectorXcd& b) {
  Eigen::VectorXd ph(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    ph[i] = b[i] == Complex(0, 0) ? 0.0 : std::arg(b[i]);
  }
  const Eigen::VectorXd un = unwrap_phases(ph);
  CsvTable t;
  t.header = {"element", "x_m", "y_m", "phase_rad", "phase_unwrapped_rad"};
  for (int i = 0; i < geom.size(); ++i) {
    t.rows.push_back({std::to_string(i), csv_cell(geom.positions[i].x()),
                      csv_cell(geom.positions[i].y()), csv_cell(ph[i]),
                      csv_cell(un[i])});
  }
  return t;
}

CsvTable beam_table(const BeamImage& img) {
  CsvTable t;
  t.header = {"u", "v", "db"};
  for (int i = 0; i < img.grid.size(); ++i) {
    t.rows.push_back({csv_cell(img.grid.angles[i].x()),
                      csv_cell(img.grid.angles[i].y()), csv_cell(img.db[i])});
  }
  return t;
}

int run_command(const CliOptions& opt) {
  RunConfig config;
  if (int rc = load_config(opt, config, false); rc != kExitOk) return rc;

  const auto t_start = std::chrono::steady_clock::now();
  Scenario scenario;
  Measurements meas;
  try {
    scenario = config.scenario();
    meas = simulate_received(scenario);
  } catch (const std::exception& e) {
    std::cerr << "error: scenario: " << e.what() << "\n";
    return kExitConfigError;
  }

  ManifoldMatrix m1, m2, meval;
  PhaseEstimate est;
  try {
    m1 = build_manifold(scenario.geometry,
                        build_grid(config.stage1_grid.rows,
                                   config.stage1_grid.cols,
                                   config.stage1_grid.extent));
    m2 = build_manifold(scenario.geometry,
                        build_grid(config.stage2_grid.rows,
                                   config.stage2_grid.cols,
                                   config.stage2_grid.extent));
    meval = build_manifold(scenario.geometry,
                           build_grid(config.eval_grid.rows,
                                      config.eval_grid.cols,
                                      config.eval_grid.extent));
    est = run_pipeline(m1, m2, meas.intensity, meas.magnitude,
                       config.pipeline_config());
  } catch (const std::exception& e) {
    std::cerr << "error: solver: " << e.what() << "\n";
    return kExitSolverFailure;
  }
  const double wall_s = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t_start)
                            .count();

  try {
    fs::create_directories(config.output_dir);
    const fs::path dir(config.output_dir);
    const Eigen::VectorXcd b_final = est.b_final();

    intensity_table(scenario.geometry, meas).write((dir / "intensity.csv").string());
    phase_table(scenario.geometry, meas.b_true).write((dir / "phase_true.csv").string());

    // estimated phases plus flip-aware aligned error against the truth
    PhaseReport report = align_global_phase(b_final, meas.b_true);
    {
      CsvTable t = phase_table(scenario.geometry, b_final);
      t.header.push_back("aligned_error_rad");
      for (int i = 0; i < scenario.geometry.size(); ++i) {
        t.rows[i].push_back(csv_cell(report.errors[i]));
      }
      t.write((dir / "phase_est.csv").string());
    }

    const BeamImage beam_true = beamform_image(meval, meas.b_true);
    const BeamImage beam_est = beamform_image(meval, b_final);
    beam_table(beam_true).write((dir / "beam_true.csv").string());
    beam_table(beam_est).write((dir / "beam_est.csv").string());

    const int k_hat = config.ap.k_hat;
    const PeakList peaks_true = find_peaks(beam_true, k_hat);
    const PeakList peaks_est = find_peaks(beam_est, k_hat);
    const BeamwidthResult bw = beamwidth(scenario.geometry);
    {
      CsvTable t;
      t.header = {"rank", "u",      "v",      "level_db", "nearest_true_u",
                  "nearest_true_v", "dist",   "beamwidth_null_to_null",
                  "within_null_to_null"};
      for (size_t i = 0; i < peaks_est.peaks.size(); ++i) {
        const Peak& p = peaks_est.peaks[i];
        double best = std::numeric_limits<double>::infinity();
        double bu = 0, bv = 0;
        for (const Peak& q : peaks_true.peaks) {
          const double d = std::hypot(p.u - q.u, p.v - q.v);
          if (d < best) { best = d; bu = q.u; bv = q.v; }
        }
        t.rows.push_back({std::to_string(i), csv_cell(p.u), csv_cell(p.v),
                          csv_cell(p.level_db), csv_cell(bu), csv_cell(bv),
                          csv_cell(best), csv_cell(bw.du_null_to_null),
                          best <= bw.du_null_to_null ? "1" : "0"});
      }
      t.write((dir / "peaks.csv").string());
    }
    {
      CsvTable t;
      t.header = {"iter", "delta", "lp_delta", "power"};
      for (const auto& r : est.trace) {
        t.rows.push_back({std::to_string(r.iter), csv_cell(r.delta),
                          csv_cell(r.lp_delta), csv_cell(r.power)});
      }
      t.write((dir / "delta_trace.csv").string());
    }

    if (config.emit_svg) {
      write_text_file((dir / "beam_true.svg").string(),
                      beam_image_svg(beam_true, "Beamformed output, true phase"));
      write_text_file((dir / "beam_est.svg").string(),
                      beam_image_svg(beam_est, "Beamformed output, estimated phase"));
      std::vector<double> deltas;
      for (const auto& r : est.trace) deltas.push_back(r.delta);
      write_text_file((dir / "delta_trace.svg").string(),
                      delta_trace_svg(deltas, "Minimax residual per outer iteration"));
    }

    std::ostringstream rep;
    rep << "sapr run report\n===============\n\nparameters:\n";
    for (const auto& [k, v] : effective_parameters(config)) {
      rep << "  " << k << " = " << v << "\n";
    }
    rep << "\nresults:\n";
    rep << "  wall_time_s = " << wall_s << "\n";
    rep << "  stage1.delta = " << csv_cell(est.stage1_delta) << "\n";
    rep << "  stage1.lambda_max = " << csv_cell(est.stage1_lambda) << "\n";
    rep << "  stage1.lp_status = " << to_string(est.stage1_status) << "\n";
    rep << "  ap.iterations = " << est.iterations << "\n";
    rep << "  ap.converged = " << (est.converged ? "true" : "false") << "\n";
    if (!est.trace.empty()) {
      rep << "  delta.first = " << csv_cell(est.trace.front().delta) << "\n";
      rep << "  delta.last = " << csv_cell(est.trace.back().delta) << "\n";
    }
    rep << "  align.phi_star = " << csv_cell(report.phi_star) << "\n";
    rep << "  align.conjugated = " << (report.conjugated ? "true" : "false")
        << "\n";
    rep << "  align.max_error_rad = " << csv_cell(report.max_error) << "\n";
    rep << "  align.rms_error_rad = " << csv_cell(report.rms_error) << "\n";
    rep << "  beamwidth.null_to_null_u = " << csv_cell(bw.du_null_to_null)
        << "\n";
    rep << "  beamwidth.first_null_u = " << csv_cell(bw.du_first_null) << "\n";
    rep << "\npeaks (true image):\n";
    for (const auto& p : peaks_true.peaks) {
      rep << "  u=" << csv_cell(p.u) << " v=" << csv_cell(p.v)
          << " level_db=" << csv_cell(p.level_db) << "\n";
    }
    rep << "peaks (estimated image):\n";
    for (const auto& p : peaks_est.peaks) {
      rep << "  u=" << csv_cell(p.u) << " v=" << csv_cell(p.v)
          << " level_db=" << csv_cell(p.level_db) << "\n";
    }
    rep << "\nper-iteration timings (ms):\n";
    for (const auto& r : est.trace) {
      rep << "  iter " << r.iter << ": " << r.wall_ms << "\n";
    }
    write_text_file((dir / "run_report.txt").string(), rep.str());
  } catch (const std::exception& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return kExitIoError;
  }

  std::cout << "run complete: " << config.output_dir << "\n";
  return kExitOk;
}

int validate_command(const CliOptions& opt) {
  ParsedConfig parsed = parse_config_file(opt.config_path);
  for (const auto& issue : parsed.issues) {
    std::cout << (issue.is_error ? "error: " : "warning: ") << issue.message
              << "\n";
  }
  if (!parsed.ok()) {
    std::cout << "config: invalid\n";
    return kExitConfigError;
  }
  std::cout << "config: ok\neffective parameters:\n";
  for (const auto& [k, v] : effective_parameters(parsed.config)) {
    std::cout << "  " << k << " = " << v << "\n";
  }
  return kExitOk;
}

int simulate_command(const CliOptions& opt) {
  RunConfig config;
  if (int rc = load_config(opt, config, false); rc != kExitOk) return rc;
  Scenario scenario;
  Measurements meas;
  try {
    scenario = config.scenario();
    meas = simulate_received(scenario);
  } catch (const std::exception& e) {
    std::cerr << "error: scenario: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    fs::create_directories(config.output_dir);
    const fs::path dir(config.output_dir);
    intensity_table(scenario.geometry, meas).write((dir / "intensity.csv").string());
    phase_table(scenario.geometry, meas.b_true).write((dir / "phase_true.csv").string());
  } catch (const std::exception& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return kExitIoError;
  }
  std::cout << "simulation written: " << config.output_dir << "\n";
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Phase retrieval for intensity-only synthetic aperture scans"};
  app.require_subcommand(1);

  CliOptions opt;
  auto add_common = [&](CLI::App* cmd, bool needs_out) {
    cmd->add_option("--config", opt.config_path, "config file (key = value)")
        ->required();
    if (needs_out) {
      cmd->add_option("--out", opt.out_dir, "output directory override");
      cmd->add_option("--seed", opt.seed, "seed override");
      cmd->add_flag("--no-svg", opt.no_svg, "skip SVG emission");
    }
  };
  CLI::App* run = app.add_subcommand("run", "simulate, retrieve phase, emit artifacts");
  add_common(run, true);
  CLI::App* validate = app.add_subcommand("validate", "check a config without running");
  add_common(validate, false);
  CLI::App* simulate = app.add_subcommand("simulate", "emit measurements only");
  add_common(simulate, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  if (run->parsed()) return run_command(opt);
  if (validate->parsed()) return validate_command(opt);
  if (simulate->parsed()) return simulate_command(opt);
  return kExitConfigError;
}

}  // namespace sapr
