#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace oracle {

double brute_mae(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

std::optional<std::vector<double>> normal_equations(const std::vector<std::vector<double>>& x,
                                                    const std::vector<double>& y) {
  const std::size_t n = x.size();
  const std::size_t p = x.empty() ? 0 : x.front().size();
  const std::size_t m = p + 1;
  std::vector<std::vector<long double>> a(m, std::vector<long double>(m + 1, 0.0L));
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<long double> row(m);
    row[0] = 1.0L;
    for (std::size_t c = 0; c < p; ++c) row[c + 1] = x[r][c];
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) a[i][j] += row[i] * row[j];
      a[i][m] += row[i] * y[r];
    }
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-300L) return std::nullopt;
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> beta(m);
  for (std::size_t i = 0; i < m; ++i) beta[i] = static_cast<double>(a[i][m] / a[i][i]);
  return beta;
}

namespace {

// score = S_L^2/n_L + S_R^2/n_R as the exact fraction num/den.
struct Frac {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

bool greater(const Frac& a, const Frac& b) { return a.num * b.den > b.num * a.den; }

struct Builder {
  const std::vector<std::vector<int>>& x;
  const std::vector<int>& y;
  int max_depth;
  std::size_t min_leaf;
  std::vector<ExactNode> nodes;

  int grow(const std::vector<std::size_t>& idx, int depth) {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    std::int64_t sum = 0;
    for (auto i : idx) sum += y[i];
    const auto n = static_cast<std::int64_t>(idx.size());
    nodes[static_cast<std::size_t>(id)].value = static_cast<double>(sum) / static_cast<double>(n);
    if (depth >= max_depth) return id;
    if (std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return y[i] == y[idx.front()]; })) return id;

    const Frac parent{sum * sum, n};
    bool found = false;
    Frac best;
    int best_f = -1;
    int best_lo = 0;
    int best_hi = 0;
    const std::size_t nf = x.front().size();
    for (std::size_t f = 0; f < nf; ++f) {
      std::set<int> values;
      for (auto i : idx) values.insert(x[i][f]);
      std::vector<int> v(values.begin(), values.end());
      for (std::size_t t = 0; t + 1 < v.size(); ++t) {
        std::int64_t sl = 0, sr = 0, nl = 0, nr = 0;
        for (auto i : idx) {
          if (x[i][f] <= v[t]) {
            sl += y[i];
            ++nl;
          } else {
            sr += y[i];
            ++nr;
          }
        }
        if (static_cast<std::size_t>(nl) < min_leaf || static_cast<std::size_t>(nr) < min_leaf) continue;
        const Frac score{sl * sl * nr + sr * sr * nl, nl * nr};
        if (!found || greater(score, best)) {
          found = true;
          best = score;
          best_f = static_cast<int>(f);
          best_lo = v[t];
          best_hi = v[t + 1];
        }
      }
    }
    if (!found || !greater(best, parent)) return id;

    std::vector<std::size_t> left, right;
    for (auto i : idx) (x[i][static_cast<std::size_t>(best_f)] <= best_lo ? left : right).push_back(i);
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    auto& node = nodes[static_cast<std::size_t>(id)];
    node.feature = best_f;
    node.threshold = (best_lo + best_hi) / 2.0;
    node.left = l;
    node.right = r;
    return id;
  }
};

}  // namespace

std::vector<ExactNode> exact_tree(const std::vector<std::vector<int>>& x, const std::vector<int>& y,
                                  int max_depth, std::size_t min_samples_leaf) {
  Builder b{x, y, max_depth, min_samples_leaf, {}};
  std::vector<std::size_t> all(y.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  b.grow(all, 0);
  return b.nodes;
}

double exact_tree_predict(const std::vector<ExactNode>& tree, const std::vector<double>& row) {
  std::size_t i = 0;
  while (tree[i].feature >= 0) {
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(tree[i].feature)] <= tree[i].threshold ? tree[i].left
                                                                                                    : tree[i].right);
  }
  return tree[i].value;
}

std::optional<double> calendar_walk_lag(binwatch::Date d, int k, const std::function<bool(binwatch::Date)>& is_open,
                                        const std::function<std::optional<double>(binwatch::Date)>& value_of,
                                        binwatch::Date earliest) {
  auto cur = std::chrono::sys_days{d};
  const auto stop = std::chrono::sys_days{earliest};
  int seen = 0;
  while (seen < k) {
    cur -= std::chrono::days{1};
    if (cur < stop) return std::nullopt;
    if (is_open(binwatch::Date{cur})) ++seen;
  }
  return value_of(binwatch::Date{cur});
}

}  // namespace oracle
