#include "blr/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "blr/rng.hpp"

namespace blr {

namespace {

// One CSV line into doubles. RFC-4180 subset: comma-separated plain numeric
// fields, '.' decimal point, no quoting.
std::vector<double> parse_row(const std::string& line, int lineno) {
  std::vector<double> row;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    std::string field = line.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    // trim surrounding spaces/tabs
    const auto l = field.find_first_not_of(" \t");
    const auto r = field.find_last_not_of(" \t");
    if (l == std::string::npos)
      throw DataError("line " + std::to_string(lineno) + ": empty field");
    field = field.substr(l, r - l + 1);

    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end)
      throw DataError("line " + std::to_string(lineno) +
                      ": cannot parse numeric field '" + field + "'");
    if (!std::isfinite(v))
      throw DataError("line " + std::to_string(lineno) +
                      ": non-finite value '" + field + "'");
    row.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return row;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  // ignore one trailing blank line
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

Matrix parse_table(const std::vector<std::string>& lines, int first_lineno,
                   const std::string& what) {
  if (lines.empty()) throw DataError(what + " is empty");
  std::vector<std::vector<double>> rows;
  rows.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int lineno = first_lineno + static_cast<int>(i);
    if (lines[i].empty())
      throw DataError("line " + std::to_string(lineno) + ": blank row");
    rows.push_back(parse_row(lines[i], lineno));
    if (rows.back().size() != rows.front().size())
      throw DataError("line " + std::to_string(lineno) + ": expected " +
                      std::to_string(rows.front().size()) + " fields, got " +
                      std::to_string(rows.back().size()));
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Dataset read_dataset(const std::string& path, const CsvOptions& options) {
  std::vector<std::string> lines = read_lines(path);
  int first = 1;
  if (options.header) {
    if (lines.empty()) throw DataError("file has a header but no data: " + path);
    lines.erase(lines.begin());
    first = 2;
  }
  const Matrix table = parse_table(lines, first, "dataset " + path);
  const int cols = static_cast<int>(table.cols());
  const int d = options.d > 0 ? options.d : cols - 1;
  if (d < 1)
    throw DataError("dataset needs at least one input column and one output "
                    "column, got " + std::to_string(cols));
  if (cols != d + 1)
    throw DataError("dataset has " + std::to_string(cols) +
                    " columns, expected d+1=" + std::to_string(d + 1));
  Dataset out;
  out.x = table.leftCols(d);
  out.y = table.col(d);
  return out;
}

void write_dataset(const std::string& path, const Dataset& data) {
  validate(data);
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw DataError("cannot write file: " + path);
  for (int r = 0; r < data.n(); ++r) {
    for (int c = 0; c < data.d(); ++c) outf << format_double(data.x(r, c)) << ',';
    outf << format_double(data.y[r]) << '\n';
  }
  if (!outf) throw DataError("write failed: " + path);
}

Matrix read_csv_matrix(const std::string& path) {
  return parse_table(read_lines(path), 1, "matrix " + path);
}

void write_csv_matrix(const std::string& path, const ConstMatrixRef& m) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw DataError("cannot write file: " + path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) outf << ',';
      outf << format_double(m(r, c));
    }
    outf << '\n';
  }
  if (!outf) throw DataError("write failed: " + path);
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 1) throw InvalidArgument("synthetic spec needs n >= 1");
  if (spec.set.size() < 1) throw InvalidArgument("synthetic spec needs a basis");
  if (spec.coefficients.size() != spec.set.size())
    throw DimensionMismatch("coefficients must match the index set size");
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma))
    throw InvalidArgument("sigma must be non-negative and finite");

  const int d = spec.set.dim();
  SplitMix64 rng(spec.seed);
  Dataset out;
  out.x.resize(spec.n, d);
  for (int r = 0; r < spec.n; ++r)
    for (int c = 0; c < d; ++c) out.x(r, c) = rng.uniform(-1.0, 1.0);

  const Matrix psi = evaluate_design_values(out.x, spec.set);
  out.y = psi * spec.coefficients;
  if (spec.sigma > 0.0) {
    for (int r = 0; r < spec.n; ++r) out.y[r] += spec.sigma * rng.normal();
  }
  return out;
}

}  // namespace blr
