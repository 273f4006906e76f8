#include "intergat/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "intergat/error.hpp"

namespace intergat {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    cells.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

bool numeric_row(const std::vector<std::string_view>& cells) {
  for (auto c : cells)
    if (!c.empty() && !parse_number(c)) return false;
  return true;
}

}  // namespace

Mat read_csv_matrix(const std::filesystem::path& path, bool allow_missing) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_cells(line);
    if (first_content) {
      first_content = false;
      if (!numeric_row(cells)) continue;  // header
    }
    if (cols == 0) {
      cols = cells.size();
    } else if (cells.size() != cols) {
      std::ostringstream os;
      os << path.string() << ":" << line_no << ": expected " << cols << " columns, found " << cells.size();
      throw LoadError(os.str());
    }
    for (auto c : cells) {
      if (c.empty()) {
        if (!allow_missing) {
          std::ostringstream os;
          os << path.string() << ":" << line_no << ": empty cell";
          throw LoadError(os.str());
        }
        data.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      auto v = parse_number(c);
      if (!v) {
        std::ostringstream os;
        os << path.string() << ":" << line_no << ": cannot parse '" << c << "' as a number";
        throw LoadError(os.str());
      }
      data.push_back(*v);
    }
    ++rows;
  }
  if (rows == 0) throw LoadError(path.string() + ": no numeric rows");
  return Mat(rows, cols, std::move(data));
}

void interpolate_missing(SignalTensor& signal) {
  const std::size_t steps = signal.steps();
  for (std::size_t node = 0; node < signal.nodes(); ++node) {
    for (std::size_t f = 0; f < signal.features(); ++f) {
      std::optional<std::size_t> prev;
      for (std::size_t t = 0; t < steps; ++t) {
        if (std::isnan(signal.at(t, node, f))) continue;
        if (!prev) {
          for (std::size_t u = 0; u < t; ++u) signal.at(u, node, f) = signal.at(t, node, f);
        } else if (t > *prev + 1) {
          const double a = signal.at(*prev, node, f);
          const double b = signal.at(t, node, f);
          const double span = static_cast<double>(t - *prev);
          for (std::size_t u = *prev + 1; u < t; ++u)
            signal.at(u, node, f) = a + (b - a) * static_cast<double>(u - *prev) / span;
        }
        prev = t;
      }
      if (!prev) {
        std::ostringstream os;
        os << "node " << node << " has no observed values";
        throw LoadError(os.str());
      }
      for (std::size_t u = *prev + 1; u < steps; ++u) signal.at(u, node, f) = signal.at(*prev, node, f);
    }
  }
}

TrafficData load_csv_dataset(const std::filesystem::path& adjacency_path,
                             const std::filesystem::path& speeds_path, const CsvLoadOptions& options) {
  Mat adjacency = read_csv_matrix(adjacency_path, false);
  if (adjacency.rows() != adjacency.cols()) {
    throw LoadError(adjacency_path.string() + ": adjacency is not square " + adjacency.shape_string());
  }
  const std::size_t n = adjacency.rows();
  Mat speeds = read_csv_matrix(speeds_path, true);
  if (speeds.cols() != n) {
    if (speeds.rows() == n) {
      speeds = speeds.transposed();
    } else {
      std::ostringstream os;
      os << speeds_path.string() << ": speed table " << speeds.shape_string() << " has no axis of length " << n;
      throw LoadError(os.str());
    }
  }
  if (options.zeros_missing) {
    for (double& v : speeds.values())
      if (v == 0.0) v = std::numeric_limits<double>::quiet_NaN();
  }
  SignalTensor signal(speeds.rows(), n, 1, std::vector<double>(speeds.values().begin(), speeds.values().end()));
  interpolate_missing(signal);
  return {Graph(std::move(adjacency)), std::move(signal)};
}

void write_csv_matrix(const std::filesystem::path& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string());
  out << std::setprecision(17);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
}

void write_speeds_csv(const std::filesystem::path& path, const SignalTensor& signal) {
  if (signal.features() != 1) throw UsageError("write_speeds_csv: only single-feature signals are supported");
  write_csv_matrix(path, Mat(signal.steps(), signal.nodes(), signal.values()));
}

}  // namespace intergat
