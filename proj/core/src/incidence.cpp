#include "structsel/incidence.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace structsel {

int IncidenceMatrix::max_row_sum() const {
  int best = 0;
  for (const auto& row : w) best = std::max(best, std::accumulate(row.begin(), row.end(), 0));
  return best;
}

namespace {

IncidenceMatrix incidence_from(const SccDecomposition& scc, const SparsityPattern& b,
                               std::vector<std::pair<int, int>> labels) {
  IncidenceMatrix out;
  out.column_inputs = std::move(labels);
  const std::vector<int> sources = scc.sources();
  std::vector<int> row_of(static_cast<std::size_t>(scc.size()), -1);
  for (std::size_t k = 0; k < sources.size(); ++k) {
    row_of[static_cast<std::size_t>(sources[k])] = static_cast<int>(k);
    out.row_sccs.push_back(scc.components[static_cast<std::size_t>(sources[k])]);
  }
  out.w.assign(sources.size(), std::vector<int>(static_cast<std::size_t>(b.cols()), 0));
  for (const Entry& e : b.entries()) {
    const int r = row_of[static_cast<std::size_t>(scc.component_of[static_cast<std::size_t>(e.row)])];
    if (r >= 0) out.w[static_cast<std::size_t>(r)][static_cast<std::size_t>(e.col)] = 1;
  }
  return out;
}

}  // namespace

IncidenceMatrix build_incidence(const StructuredSystem& sys, const SccDecomposition& scc) {
  std::vector<std::pair<int, int>> labels;
  for (int j = 0; j < sys.m(); ++j) labels.emplace_back(0, j);
  return incidence_from(scc, sys.b(), std::move(labels));
}

IncidenceMatrix build_incidence(const StructuredSystem& sys) {
  return build_incidence(sys, scc_decompose(state_digraph(sys.a())));
}

IncidenceMatrix build_switched_incidence(const SwitchedStructuredSystem& sw) {
  const UnionSystem u = union_system(sw);
  std::vector<std::pair<int, int>> labels;
  for (int k = 0; k < sw.num_modes(); ++k) {
    for (int j = 0; j < sw.mode(k).b.cols(); ++j) labels.emplace_back(k, j);
  }
  return incidence_from(scc_decompose(state_digraph(u.a_hat)), u.b_hat, std::move(labels));
}

bool is_sssi(const IntMatrix& w) {
  if (w.empty()) return true;
  for (std::size_t j = 0; j < w.front().size(); ++j) {
    int count = 0;
    for (const auto& row : w) count += row[j] != 0;
    if (count > 1) return false;
  }
  return true;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kFalse:
      return "false";
    case Verdict::kTrue:
      return "true";
    case Verdict::kUndecided:
      return "undecided";
  }
  return "unknown";
}

mpz_class determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw std::invalid_argument("determinant of a non-square matrix");
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  }
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

namespace {

IntMatrix transpose(const IntMatrix& m) {
  if (m.empty()) return {};
  IntMatrix t(m.front().size(), std::vector<int>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  }
  return t;
}

std::size_t num_cols(const IntMatrix& m) { return m.empty() ? 0 : m.front().size(); }

// Searches for a signing of the rows in `subset` whose column sums all lie
// in [lo, hi]. Rows are assigned in order, +1 before -1; a branch is cut
// once some column can no longer reach the interval.
class SigningSearch {
 public:
  SigningSearch(const IntMatrix& m, int lo, int hi) : m_(m), lo_(lo), hi_(hi) {}

  bool run(const std::vector<int>& subset, bool fix_first) {
    subset_ = &subset;
    cols_.clear();
    for (std::size_t j = 0; j < num_cols(m_); ++j) {
      for (int r : subset) {
        if (m_[static_cast<std::size_t>(r)][j] != 0) {
          cols_.push_back(static_cast<int>(j));
          break;
        }
      }
    }
    const std::size_t k = subset.size();
    // remaining_[d][c]: sum of |entries| of column cols_[c] in rows d..k-1.
    remaining_.assign(k + 1, std::vector<int>(cols_.size(), 0));
    for (std::size_t d = k; d-- > 0;) {
      for (std::size_t c = 0; c < cols_.size(); ++c) {
        remaining_[d][c] =
            remaining_[d + 1][c] +
            std::abs(m_[static_cast<std::size_t>(subset[d])][static_cast<std::size_t>(cols_[c])]);
      }
    }
    partial_.assign(cols_.size(), 0);
    fix_first_ = fix_first;
    return dfs(0);
  }

 private:
  bool dfs(std::size_t depth) {
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      const int rem = remaining_[depth][c];
      if (partial_[c] - rem > hi_ || partial_[c] + rem < lo_) return false;
    }
    if (depth == subset_->size()) return true;
    const auto& row = m_[static_cast<std::size_t>((*subset_)[depth])];
    for (int s : {1, -1}) {
      if (s == -1 && depth == 0 && fix_first_) break;
      for (std::size_t c = 0; c < cols_.size(); ++c) partial_[c] += s * row[static_cast<std::size_t>(cols_[c])];
      const bool ok = dfs(depth + 1);
      for (std::size_t c = 0; c < cols_.size(); ++c) partial_[c] -= s * row[static_cast<std::size_t>(cols_[c])];
      if (ok) return true;
    }
    return false;
  }

  const IntMatrix& m_;
  int lo_;
  int hi_;
  bool fix_first_ = false;
  const std::vector<int>* subset_ = nullptr;
  std::vector<int> cols_;
  std::vector<std::vector<int>> remaining_;
  std::vector<int> partial_;
};

// Calls `visit` on every row subset of {0..r-1}, by increasing size and
// lexicographically within a size, until it returns false. Returns the
// subset that stopped the enumeration, if any.
std::optional<std::vector<int>> for_each_subset(int r, const std::function<bool(const std::vector<int>&)>& visit) {
  for (int k = 1; k <= r; ++k) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      if (!visit(idx)) return idx;
      int p = k - 1;
      while (p >= 0 && idx[static_cast<std::size_t>(p)] == r - k + p) --p;
      if (p < 0) break;
      ++idx[static_cast<std::size_t>(p)];
      for (int q = p + 1; q < k; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
    }
  }
  return std::nullopt;
}

// With every proper subset of `rows` signable, a violating submatrix uses
// exactly these rows; search the column combinations for one.
std::optional<SubmatrixWitness> full_row_witness(const IntMatrix& m, const std::vector<int>& rows) {
  std::vector<int> support;
  for (std::size_t j = 0; j < num_cols(m); ++j) {
    for (int r : rows) {
      if (m[static_cast<std::size_t>(r)][j] != 0) {
        support.push_back(static_cast<int>(j));
        break;
      }
    }
  }
  const std::size_t k = rows.size();
  if (support.size() < k) return std::nullopt;
  std::vector<char> pick(support.size(), 0);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), 1);
  do {
    std::vector<int> cols;
    for (std::size_t c = 0; c < support.size(); ++c) {
      if (pick[c]) cols.push_back(support[c]);
    }
    IntMatrix sub(k, std::vector<int>(k));
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        sub[a][b] = m[static_cast<std::size_t>(rows[a])][static_cast<std::size_t>(cols[b])];
      }
    }
    mpz_class det = determinant(sub);
    if (abs(det) > 1) return SubmatrixWitness{rows, cols, det};
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return std::nullopt;
}

}  // namespace

TuResult is_totally_unimodular(const IntMatrix& m, const TuOptions& options) {
  TuResult result;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != num_cols(m)) throw std::invalid_argument("ragged matrix");
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (std::abs(m[i][j]) > 1) {
        result.verdict = Verdict::kFalse;
        result.witness = SubmatrixWitness{{static_cast<int>(i)}, {static_cast<int>(j)}, m[i][j]};
        return result;
      }
    }
  }
  const bool transposed = num_cols(m) < m.size();
  const IntMatrix t = transposed ? transpose(m) : IntMatrix{};
  const IntMatrix& work = transposed ? t : m;
  if (static_cast<int>(work.size()) > options.max_dimension) {
    result.verdict = Verdict::kUndecided;
    return result;
  }
  SigningSearch search(work, -1, 1);
  const auto failing =
      for_each_subset(static_cast<int>(work.size()), [&](const std::vector<int>& s) { return search.run(s, true); });
  if (!failing) {
    result.verdict = Verdict::kTrue;
    return result;
  }
  result.verdict = Verdict::kFalse;
  if (auto wit = full_row_witness(work, *failing)) {
    if (transposed) std::swap(wit->rows, wit->cols);
    result.witness = std::move(*wit);
  }
  return result;
}

TuResult is_restricted_tu(const IntMatrix& w, const TuOptions& options) {
  IntMatrix stacked = w;
  stacked.emplace_back(num_cols(w), 1);
  return is_totally_unimodular(stacked, options);
}

Verdict restricted_tu_by_partition(const IntMatrix& w, const TuOptions& options) {
  if (static_cast<int>(w.size()) > options.max_dimension) return Verdict::kUndecided;
  // Row subsets of [w; 1] either leave out the ones row, which asks for an
  // equitable signing of R alone, or include it. Signing the ones row with -1
  // shifts every column sum of R up by one, so R needs a second signing with
  // sums in {0,1,2}. A single {0,1} split is not enough: w = [[1,1,0],[1,0,1]]
  // stacks to a TU matrix, yet its two rows admit no such split.
  SigningSearch balanced(w, -1, 1);
  SigningSearch shifted(w, 0, 2);
  const auto failing = for_each_subset(static_cast<int>(w.size()), [&](const std::vector<int>& s) {
    return balanced.run(s, true) && shifted.run(s, false);
  });
  return failing ? Verdict::kFalse : Verdict::kTrue;
}

namespace {

using Bits = std::vector<char>;

Bits row_bits(const IntMatrix& w, std::size_t i) {
  Bits b(num_cols(w));
  for (std::size_t j = 0; j < b.size(); ++j) b[j] = w[i][j] != 0;
  return b;
}

Bits col_bits(const IntMatrix& w, std::size_t j) {
  Bits b(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) b[i] = w[i][j] != 0;
  return b;
}

bool subset_of(const Bits& a, const Bits& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] && !b[k]) return false;
  }
  return true;
}

bool comparable(const Bits& a, const Bits& b) { return subset_of(a, b) || subset_of(b, a); }

bool non_increasing(const Bits& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[k - 1]) return false;
  }
  return true;
}

bool non_decreasing(const Bits& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] < v[k - 1]) return false;
  }
  return true;
}

bool is_chain(const std::vector<Bits>& sets) {
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t b = a + 1; b < sets.size(); ++b) {
      if (!comparable(sets[a], sets[b])) return false;
    }
  }
  return true;
}

Bits complement(Bits b) {
  for (auto& x : b) x = !x;
  return b;
}

IntMatrix submatrix(const IntMatrix& w, const std::vector<int>& rows, const std::vector<int>& cols) {
  IntMatrix out(rows.size(), std::vector<int>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      out[a][b] = w[static_cast<std::size_t>(rows[a])][static_cast<std::size_t>(cols[b])];
    }
  }
  return out;
}

}  // namespace

bool is_extended_sssi(const IntMatrix& w) {
  for (std::size_t a = 0; a < w.size(); ++a) {
    const Bits ra = row_bits(w, a);
    for (std::size_t b = a + 1; b < w.size(); ++b) {
      const Bits rb = row_bits(w, b);
      if (ra == rb) continue;
      for (std::size_t j = 0; j < ra.size(); ++j) {
        if (ra[j] && rb[j]) return false;
      }
    }
  }
  return true;
}

bool is_row_monotone(const IntMatrix& w, bool uniform) {
  bool all_inc = true;
  bool all_dec = true;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Bits r = row_bits(w, i);
    const bool inc = non_decreasing(r);
    const bool dec = non_increasing(r);
    if (!inc && !dec) return false;
    all_inc = all_inc && inc;
    all_dec = all_dec && dec;
  }
  return !uniform || all_inc || all_dec;
}

bool is_column_monotone(const IntMatrix& w) {
  bool all_inc = true;
  bool all_dec = true;
  for (std::size_t j = 0; j < num_cols(w); ++j) {
    const Bits c = col_bits(w, j);
    all_inc = all_inc && non_decreasing(c);
    all_dec = all_dec && non_increasing(c);
  }
  return all_inc || all_dec;
}

bool is_permutable_column_monotone(const IntMatrix& w) {
  // Some row order makes every column a prefix (or every column a suffix)
  // exactly when the column supports are nested.
  std::vector<Bits> cols;
  for (std::size_t j = 0; j < num_cols(w); ++j) cols.push_back(col_bits(w, j));
  return is_chain(cols);
}

Verdict is_permutable_row_monotone(const IntMatrix& w, bool uniform, long max_nodes) {
  std::vector<Bits> rows;
  for (std::size_t i = 0; i < w.size(); ++i) rows.push_back(row_bits(w, i));
  if (uniform) return is_chain(rows) ? Verdict::kTrue : Verdict::kFalse;

  // After a column permutation each row must be a prefix or a suffix. Map
  // suffix rows to their complements: the requirement becomes choosing, per
  // row, its support or its complement so that the choices form a chain.
  // Complementing every choice preserves a chain, so row 0 keeps its support.
  std::vector<Bits> chosen;
  long nodes = 0;
  bool capped = false;
  std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
    if (i == rows.size()) return true;
    if (++nodes > max_nodes) {
      capped = true;
      return false;
    }
    for (int orient = 0; orient < 2; ++orient) {
      if (orient == 1 && i == 0) break;
      Bits cand = orient == 0 ? rows[i] : complement(rows[i]);
      bool ok = true;
      for (const Bits& c : chosen) {
        if (!comparable(c, cand)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen.push_back(std::move(cand));
      if (dfs(i + 1)) return true;
      chosen.pop_back();
      if (capped) return false;
    }
    return false;
  };
  if (dfs(0)) return Verdict::kTrue;
  return capped ? Verdict::kUndecided : Verdict::kFalse;
}

Verdict is_block_diagonal_monotone(const IntMatrix& w, bool uniform, long max_nodes) {
  // Connected components of the bipartite row/column graph of the nonzeros.
  const std::size_t r = w.size();
  const std::size_t c = num_cols(w);
  std::vector<int> parent(r + c);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      if (w[i][j] != 0) {
        const int a = find(static_cast<int>(i));
        const int b = find(static_cast<int>(r + j));
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  }
  bool undecided = false;
  std::vector<char> done(r + c, 0);
  for (std::size_t i = 0; i < r; ++i) {
    const int root = find(static_cast<int>(i));
    if (done[static_cast<std::size_t>(root)]) continue;
    done[static_cast<std::size_t>(root)] = 1;
    std::vector<int> rows;
    std::vector<int> cols;
    for (std::size_t k = 0; k < r; ++k) {
      if (find(static_cast<int>(k)) == root) rows.push_back(static_cast<int>(k));
    }
    for (std::size_t k = 0; k < c; ++k) {
      if (find(static_cast<int>(r + k)) == root) cols.push_back(static_cast<int>(k));
    }
    if (cols.empty()) continue;  // zero row
    const IntMatrix block = submatrix(w, rows, cols);
    if (is_permutable_column_monotone(block)) continue;
    const Verdict v = is_permutable_row_monotone(block, uniform, max_nodes);
    if (v == Verdict::kFalse) return Verdict::kFalse;
    if (v == Verdict::kUndecided) undecided = true;
  }
  return undecided ? Verdict::kUndecided : Verdict::kTrue;
}

ConstraintClass classify(const IntMatrix& w, const ClassifyOptions& options) {
  const auto flag = [](bool b) { return b ? Verdict::kTrue : Verdict::kFalse; };
  ConstraintClass out;
  out.sssi = flag(is_sssi(w));
  out.extended_sssi = flag(is_extended_sssi(w));
  out.row_monotone = flag(is_row_monotone(w, options.uniform_row_monotone));
  out.column_monotone = flag(is_column_monotone(w));
  out.permutable_row_monotone = is_permutable_row_monotone(w, options.uniform_row_monotone, options.max_search_nodes);
  out.permutable_column_monotone = flag(is_permutable_column_monotone(w));
  out.block_diagonal_monotone = is_block_diagonal_monotone(w, options.uniform_row_monotone, options.max_search_nodes);

  // Implications between the classes are structural facts; a violation
  // means a recogniser is wrong.
  const auto implies = [](Verdict a, Verdict b) { return a != Verdict::kTrue || b == Verdict::kTrue; };
  if (!implies(out.sssi, out.extended_sssi) || !implies(out.row_monotone, out.permutable_row_monotone) ||
      !implies(out.column_monotone, out.permutable_column_monotone) ||
      !implies(out.permutable_row_monotone, out.block_diagonal_monotone) ||
      !implies(out.permutable_column_monotone, out.block_diagonal_monotone)) {
    throw std::logic_error("classify: inconsistent class flags");
  }

  const TuResult stacked = is_restricted_tu(w, options.tu);
  const Verdict partition = restricted_tu_by_partition(w, options.tu);
  if (stacked.verdict != Verdict::kUndecided && partition != Verdict::kUndecided && stacked.verdict != partition) {
    throw std::logic_error("classify: stacked and partition restricted-TU tests disagree");
  }
  out.restricted_tu = stacked.verdict != Verdict::kUndecided ? stacked.verdict : partition;
  out.witness = stacked.witness;

  const bool sufficient = out.extended_sssi == Verdict::kTrue || out.block_diagonal_monotone == Verdict::kTrue;
  if (sufficient) {
    if (out.restricted_tu == Verdict::kFalse) throw std::logic_error("classify: a sufficient class is not restricted TU");
    if (out.restricted_tu == Verdict::kUndecided) {
      out.restricted_tu = Verdict::kTrue;
      out.restricted_tu_from_class = true;
    }
  }
  return out;
}

}  // namespace structsel
