#pragma once
#include <string>
#include <vector>

#include "blr/errors.hpp"

namespace blr {

/// Exponent tuple alpha = (alpha_1, ..., alpha_d) selecting one tensor-product
/// basis function. alpha_i = 0 means the function does not depend on x_i.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> exponents);

  int dim() const { return static_cast<int>(exps_.size()); }
  int total_degree() const;
  int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& exponents() const { return exps_; }
  std::string to_string() const;  // "(1,0,2)"

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.exps_ == b.exps_;
  }

 private:
  std::vector<int> exps_;
};

/// Graded-lexicographic order: by total degree, ties broken lexicographically
/// on the exponent tuple. The canonical order of every index set.
bool grlex_less(const MultiIndex& a, const MultiIndex& b);

enum class BasisFamily { monomial, legendre, hermite };

const char* family_name(BasisFamily f);
BasisFamily family_from_name(const std::string& name);

/// Ordered set of distinct multi-indices, always held in graded-lexicographic
/// order so column layouts and stepwise candidate visits are deterministic.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::vector<MultiIndex> indices, BasisFamily family);

  int size() const { return static_cast<int>(indices_.size()); }  // P
  int dim() const;                                                // d, 0 if empty
  BasisFamily family() const { return family_; }
  const MultiIndex& operator[](int j) const {
    return indices_[static_cast<std::size_t>(j)];
  }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  bool contains(const MultiIndex& mi) const;
  /// Position of `mi` in the canonical order, or -1.
  int position(const MultiIndex& mi) const;
  /// Copy with `mi` inserted at its canonical position.
  IndexSet with(const MultiIndex& mi) const;

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  friend bool operator==(const IndexSet& a, const IndexSet& b) {
    return a.family_ == b.family_ && a.indices_ == b.indices_;
  }

 private:
  std::vector<MultiIndex> indices_;
  BasisFamily family_ = BasisFamily::monomial;
};

/// All multi-indices in d variables with total degree <= max_degree, in
/// graded-lexicographic order. Cardinality is C(d + max_degree, d).
IndexSet enumerate_total_degree(int d, int max_degree, BasisFamily family);

}  // namespace blr
