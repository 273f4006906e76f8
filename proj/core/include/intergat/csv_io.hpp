#pragma once

#include <filesystem>
#include <string>

#include "intergat/graph.hpp"

namespace intergat {

struct CsvLoadOptions {
  /// Treat exact zeros in the speed file as missing (loop-detector dropouts).
  bool zeros_missing = false;
};

struct TrafficData {
  Graph graph;
  SignalTensor signal;
};

/// Reads a numeric CSV into a matrix. A first line that does not parse as numbers is
/// skipped as a header. Empty cells become NaN when `allow_missing` is set.
Mat read_csv_matrix(const std::filesystem::path& path, bool allow_missing = false);

/// Loads an N x N adjacency and a speed table (T rows x N columns, or N x T which is
/// transposed). Missing cells are filled per node by linear interpolation; leading and
/// trailing gaps take the nearest observed value.
TrafficData load_csv_dataset(const std::filesystem::path& adjacency_path,
                             const std::filesystem::path& speeds_path,
                             const CsvLoadOptions& options = {});

/// In-place linear interpolation of NaN runs along time for every node and feature.
/// Observed values are left untouched.
void interpolate_missing(SignalTensor& signal);

void write_csv_matrix(const std::filesystem::path& path, const Mat& m);
/// Writes speeds as T rows x N columns (features must be 1).
void write_speeds_csv(const std::filesystem::path& path, const SignalTensor& signal);

}  // namespace intergat
