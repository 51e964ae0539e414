#pragma once

#include <string>
#include <vector>

#include "sapr/beamformer_eval.hpp"

namespace sapr {

// CSV cells: doubles at round-trip precision (%.17g), newline-terminated
// rows, header row first. Identical inputs produce bit-identical files.
std::string csv_cell(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(const std::string& path) const;
};

// Heatmap of a beam image over its (possibly hole-punched) sine-space grid.
std::string beam_image_svg(const BeamImage& image, const std::string& title);

// Simple log-scale polyline of the per-iteration delta trace.
std::string delta_trace_svg(const std::vector<double>& deltas,
                            const std::string& title);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sapr
