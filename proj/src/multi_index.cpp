#include "blr/multi_index.hpp"

#include <algorithm>
#include <numeric>

namespace blr {

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
  if (exps_.empty()) throw InvalidArgument("multi-index must have dimension >= 1");
  for (int e : exps_) {
    if (e < 0) throw InvalidArgument("multi-index exponents must be non-negative");
  }
}

int MultiIndex::total_degree() const {
  return std::accumulate(exps_.begin(), exps_.end(), 0);
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(exps_[i]);
  }
  s += ")";
  return s;
}

bool grlex_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("cannot order multi-indices of different dimension");
  const int da = a.total_degree();
  const int db = b.total_degree();
  if (da != db) return da < db;
  return std::lexicographical_compare(a.exponents().begin(), a.exponents().end(),
                                      b.exponents().begin(), b.exponents().end());
}

const char* family_name(BasisFamily f) {
  switch (f) {
    case BasisFamily::monomial: return "monomial";
    case BasisFamily::legendre: return "legendre";
    case BasisFamily::hermite: return "hermite";
  }
  return "unknown";
}

BasisFamily family_from_name(const std::string& name) {
  if (name == "monomial") return BasisFamily::monomial;
  if (name == "legendre") return BasisFamily::legendre;
  if (name == "hermite") return BasisFamily::hermite;
  throw InvalidArgument("unknown basis family: " + name);
}

IndexSet::IndexSet(std::vector<MultiIndex> indices, BasisFamily family)
    : indices_(std::move(indices)), family_(family) {
  if (indices_.empty()) return;
  const int d = indices_.front().dim();
  for (const auto& mi : indices_) {
    if (mi.dim() != d)
      throw DimensionMismatch("all multi-indices in a set must share one dimension");
  }
  std::sort(indices_.begin(), indices_.end(), grlex_less);
  auto dup = std::adjacent_find(indices_.begin(), indices_.end());
  if (dup != indices_.end())
    throw InvalidArgument("duplicate multi-index in set: " + dup->to_string());
}

int IndexSet::dim() const { return indices_.empty() ? 0 : indices_.front().dim(); }

bool IndexSet::contains(const MultiIndex& mi) const { return position(mi) >= 0; }

int IndexSet::position(const MultiIndex& mi) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), mi, grlex_less);
  if (it != indices_.end() && *it == mi)
    return static_cast<int>(it - indices_.begin());
  return -1;
}

IndexSet IndexSet::with(const MultiIndex& mi) const {
  if (contains(mi))
    throw InvalidArgument("multi-index already in set: " + mi.to_string());
  IndexSet out = *this;
  auto it = std::lower_bound(out.indices_.begin(), out.indices_.end(), mi, grlex_less);
  out.indices_.insert(it, mi);
  return out;
}

namespace {
void enumerate_rec(int d, int pos, int remaining, std::vector<int>& cur,
                   std::vector<MultiIndex>& out) {
  if (pos == d) {
    out.emplace_back(cur);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    cur[static_cast<std::size_t>(pos)] = e;
    enumerate_rec(d, pos + 1, remaining - e, cur, out);
  }
}
}  // namespace

IndexSet enumerate_total_degree(int d, int max_degree, BasisFamily family) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  if (max_degree < 0) throw InvalidArgument("max_degree must be >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  enumerate_rec(d, 0, max_degree, cur, out);
  return IndexSet(std::move(out), family);
}

}  // namespace blr
