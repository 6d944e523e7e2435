#pragma once
#include <cstdint>
#include <string>

#include "blr/basis.hpp"
#include "blr/dataset.hpp"

namespace blr {

struct CsvOptions {
  int d = 0;          // input dimension; 0 = infer as columns-1
  bool header = false;  // skip the first line
};

/// Reads a numeric CSV with columns x_1..x_d then y. Errors carry the
/// offending 1-based line number.
Dataset read_dataset(const std::string& path, const CsvOptions& options = {});

/// Writes x columns then y, one row per observation, shortest round-trip
/// number formatting, no header.
void write_dataset(const std::string& path, const Dataset& data);

/// Reads a rectangular numeric CSV (used for full noise covariances).
Matrix read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const ConstMatrixRef& m);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

/// Ground-truth specification for synthetic data: y = Psi a + eps with
/// x ~ U[-1,1]^d and eps ~ N(0, sigma^2) iid, all drawn from `seed`.
struct SyntheticSpec {
  IndexSet set;
  Vector coefficients;
  double sigma = 0.0;
  int n = 0;
  std::uint64_t seed = 0;
};

Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace blr
