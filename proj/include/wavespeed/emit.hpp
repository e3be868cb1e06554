#pragma once

#include <string>

#include "wavespeed/sweep.hpp"

namespace wavespeed {

// speeds.csv: header row = d values, first column = k values; failed cells
// serialize as nan. flags.csv has the same shape with flag names.
void write_speeds_csv(const SweepResult& result, const std::string& path);
void write_flags_csv(const SweepResult& result, const std::string& path);
void write_contours_json(const ContourSet& contours, const std::string& path);

// Grayscale raster: speed 0 maps to white, the most negative speed to black.
void write_heatmap_pgm(const SweepResult& result, const std::string& path);
// Colored cells plus contour polylines overlaid.
void write_heatmap_svg(const SweepResult& result, const ContourSet& contours,
                       const std::string& path);

void write_metadata_json(const SweepResult& result, const std::string& path);

// Rebuilds a result from speeds.csv/flags.csv; axis ranges are inferred from
// the header row and first column. Estimates carry speed and flags only.
SweepResult read_sweep_csv(const std::string& speeds_path, const std::string& flags_path);

}  // namespace wavespeed
