#include "structsel/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace structsel {

SparsityPattern::SparsityPattern(int rows, int cols, std::vector<Entry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative pattern dimension");
  for (const Entry& e : entries_) {
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
      throw std::invalid_argument("entry (" + std::to_string(e.row + 1) + "," + std::to_string(e.col + 1) +
                                  ") outside " + std::to_string(rows) + "x" + std::to_string(cols) + " pattern");
    }
  }
  std::sort(entries_.begin(), entries_.end());
  const auto dup = std::adjacent_find(entries_.begin(), entries_.end());
  if (dup != entries_.end()) {
    throw std::invalid_argument("duplicate entry (" + std::to_string(dup->row + 1) + "," +
                                std::to_string(dup->col + 1) + ")");
  }
}

bool SparsityPattern::contains(int row, int col) const {
  return std::binary_search(entries_.begin(), entries_.end(), Entry{row, col});
}

std::vector<int> SparsityPattern::column_support(int col) const {
  std::vector<int> rows;
  for (const Entry& e : entries_) {
    if (e.col == col) rows.push_back(e.row);
  }
  return rows;
}

SparsityPattern SparsityPattern::select_columns(std::span<const int> cols) const {
  std::vector<Entry> out;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    for (int r : column_support(cols[k])) out.push_back({r, static_cast<int>(k)});
  }
  return SparsityPattern(rows_, static_cast<int>(cols.size()), std::move(out));
}

SparsityPattern pattern_or(std::span<const SparsityPattern> patterns) {
  if (patterns.empty()) return {};
  const int rows = patterns.front().rows();
  const int cols = patterns.front().cols();
  std::vector<Entry> all;
  for (const auto& p : patterns) {
    if (p.rows() != rows || p.cols() != cols) throw std::invalid_argument("pattern_or: dimension mismatch");
    all.insert(all.end(), p.entries().begin(), p.entries().end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return SparsityPattern(rows, cols, std::move(all));
}

SparsityPattern hconcat(std::span<const SparsityPattern> patterns) {
  if (patterns.empty()) return {};
  const int rows = patterns.front().rows();
  int offset = 0;
  std::vector<Entry> all;
  for (const auto& p : patterns) {
    if (p.rows() != rows) throw std::invalid_argument("hconcat: row count mismatch");
    for (const Entry& e : p.entries()) all.push_back({e.row, e.col + offset});
    offset += p.cols();
  }
  return SparsityPattern(rows, offset, std::move(all));
}

namespace {

void check_costs(std::span<const Rational> costs, int m, const std::string& what) {
  if (static_cast<int>(costs.size()) != m) {
    throw std::invalid_argument(what + ": " + std::to_string(costs.size()) + " costs for " + std::to_string(m) +
                                " inputs");
  }
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (sgn(costs[i]) < 0) throw std::invalid_argument(what + ": negative cost for input " + std::to_string(i + 1));
  }
}

}  // namespace

StructuredSystem::StructuredSystem(SparsityPattern a, SparsityPattern b, std::vector<Rational> costs)
    : a_(std::move(a)), b_(std::move(b)), costs_(std::move(costs)) {
  if (a_.rows() != a_.cols()) throw std::invalid_argument("A must be square");
  if (b_.rows() != a_.rows()) throw std::invalid_argument("B must have n rows");
  check_costs(costs_, b_.cols(), "system");
  for (auto& c : costs_) c.canonicalize();
}

StructuredSystem StructuredSystem::with_costs(std::vector<Rational> costs) const {
  return StructuredSystem(a_, b_, std::move(costs));
}

SwitchedStructuredSystem::SwitchedStructuredSystem(int n, std::vector<Mode> modes) : n_(n), modes_(std::move(modes)) {
  if (modes_.empty()) throw std::invalid_argument("switched system needs at least one mode");
  offsets_.push_back(0);
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    Mode& md = modes_[k];
    const std::string what = "mode " + std::to_string(k + 1);
    if (md.a.rows() != n || md.a.cols() != n) throw std::invalid_argument(what + ": A must be " + std::to_string(n) + "x" + std::to_string(n));
    if (md.b.rows() != n) throw std::invalid_argument(what + ": B must have " + std::to_string(n) + " rows");
    check_costs(md.costs, md.b.cols(), what);
    for (auto& c : md.costs) c.canonicalize();
    for (int j = 0; j < md.b.cols(); ++j) {
      if (md.b.column_is_zero(j)) throw std::invalid_argument(what + ": input column " + std::to_string(j + 1) + " is zero");
    }
    if (md.source_columns.empty()) {
      for (int j = 0; j < md.b.cols(); ++j) md.source_columns.push_back(j);
    } else if (static_cast<int>(md.source_columns.size()) != md.b.cols()) {
      throw std::invalid_argument(what + ": source column map has wrong length");
    }
    offsets_.push_back(offsets_.back() + md.b.cols());
  }
}

std::pair<int, int> SwitchedStructuredSystem::split_input(int flat) const {
  if (flat < 0 || flat >= total_inputs()) throw std::out_of_range("input index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
  const int k = static_cast<int>(it - offsets_.begin()) - 1;
  return {k, flat - offsets_[static_cast<std::size_t>(k)]};
}

std::vector<Rational> SwitchedStructuredSystem::flat_costs() const {
  std::vector<Rational> out;
  for (const Mode& md : modes_) out.insert(out.end(), md.costs.begin(), md.costs.end());
  return out;
}

Mode make_effective_mode(SparsityPattern a, const SparsityPattern& b, std::vector<Rational> costs,
                         std::vector<int>* stripped) {
  if (static_cast<int>(costs.size()) != b.cols()) throw std::invalid_argument("cost count does not match B");
  std::vector<int> keep;
  std::vector<Rational> kept_costs;
  for (int j = 0; j < b.cols(); ++j) {
    if (b.column_is_zero(j)) {
      if (stripped) stripped->push_back(j);
      continue;
    }
    keep.push_back(j);
    kept_costs.push_back(costs[static_cast<std::size_t>(j)]);
  }
  return Mode{std::move(a), b.select_columns(keep), std::move(kept_costs), keep};
}

UnionSystem union_system(const SwitchedStructuredSystem& sw) {
  std::vector<SparsityPattern> as;
  std::vector<SparsityPattern> bs;
  for (const Mode& md : sw.modes()) {
    as.push_back(md.a);
    bs.push_back(md.b);
  }
  return UnionSystem{pattern_or(as), hconcat(bs), hconcat(as)};
}

SwitchedStructuredSystem as_switched(const StructuredSystem& sys) {
  std::vector<Rational> costs(sys.costs().begin(), sys.costs().end());
  std::vector<Mode> modes;
  modes.push_back(make_effective_mode(sys.a(), sys.b(), std::move(costs)));
  return SwitchedStructuredSystem(sys.n(), std::move(modes));
}

}  // namespace structsel
