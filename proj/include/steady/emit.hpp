#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steady/config.hpp"
#include "steady/qgrid.hpp"
#include "steady/sweep.hpp"

namespace steady {

std::string format_number(double v);

std::string sweep_csv(const SweepResult& r, const SweepConfig& cfg);
std::string sweep_json(const SweepResult& r, const SweepConfig& cfg);
std::string qgrid_csv(const QGrid& q, const SweepResult& r, const SweepConfig& cfg, size_t point);

// 8-bit intensities for a row-major w*h field. Row 0 of the image is the last
// (largest-y) row of the field. log mapping clamps at 1e-6 of the maximum.
std::vector<std::uint8_t> map_intensity(const std::vector<double>& field, int w, int h, bool log_scale);

// Binary P5 / P6 images. The colour variant maps intensity t in [0,1] to
//   r = clamp(1.5 - |4t - 3|), g = clamp(1.5 - |4t - 2|), b = clamp(1.5 - |4t - 1|).
std::string pgm_image(const std::vector<std::uint8_t>& pix, int w, int h);
std::string ppm_image(const std::vector<std::uint8_t>& pix, int w, int h);

// Writes every configured output next to cfg.output.path; returns the files.
std::vector<std::string> emit(const SweepResult& r, const SweepConfig& cfg);

void write_file(const std::string& path, const std::string& content);

}  // namespace steady
