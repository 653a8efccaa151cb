#pragma once
// Independent reference implementations used only by the tests. None of these call into
// the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// Memoized recursion on suffixes, a different formulation than the row-based DP.
inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, go(i + 1, j) + 1);
    best = std::min(best, go(i, j + 1) + 1);
    return memo[key] = best;
  };
  return go(0, 0);
}

struct Rational {
  std::int64_t num = 0, den = 1;
  Rational(std::int64_t n, std::int64_t d) {
    const auto g = std::gcd(n, d);
    num = g ? n / g : 0;
    den = g ? d / g : 1;
  }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

// Exact test p/q > x for a finite double x >= 0, via x = m * 2^e with integer m.
inline bool rational_greater(std::int64_t p, std::int64_t q, double x) {
  if (x == 0) return p > 0;
  int e = 0;
  const double frac = std::frexp(x, &e);  // x = frac * 2^e, frac in [0.5, 1)
  const auto m = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  e -= 53;  // x = m * 2^e exactly
  using u128 = unsigned __int128;
  if (e <= 0) {
    // p / q > m / 2^-e  <=>  p * 2^-e > m * q
    return (static_cast<u128>(p) << (-e)) > static_cast<u128>(m) * static_cast<u128>(q);
  }
  return static_cast<u128>(p) > (static_cast<u128>(m) << e) * static_cast<u128>(q);
}

struct BruteTmc {
  std::map<std::string, std::int64_t> d_i;
  std::map<int, std::int64_t> d_j;
  std::map<std::pair<std::string, int>, std::int64_t> d_ij;
};

// Double loop over every (method, topic) combination and every document.
inline BruteTmc brute_tmc(const std::map<std::string, std::set<std::string>>& methods,
                          const std::map<std::string, int>& topics) {
  BruteTmc out;
  std::set<std::string> all_methods;
  std::set<int> all_topics;
  for (const auto& [d, ms] : methods) all_methods.insert(ms.begin(), ms.end());
  for (const auto& [d, t] : topics) all_topics.insert(t);
  for (const auto& m : all_methods) {
    std::int64_t n = 0;
    for (const auto& [d, ms] : methods) n += ms.count(m) ? 1 : 0;
    out.d_i[m] = n;
  }
  for (int t : all_topics) {
    std::int64_t n = 0;
    for (const auto& [d, tt] : topics) n += tt == t ? 1 : 0;
    out.d_j[t] = n;
  }
  for (const auto& m : all_methods) {
    for (int t : all_topics) {
      std::int64_t n = 0;
      for (const auto& [d, ms] : methods) {
        auto it = topics.find(d);
        if (it != topics.end() && it->second == t && ms.count(m)) ++n;
      }
      if (n > 0) out.d_ij[{m, t}] = n;
    }
  }
  return out;
}

struct Edge {
  std::size_t a, b;
  double w = 1.0;
};

// Q = 1/(2m) * sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j), evaluated over the dense matrix.
inline double modularity(std::size_t n, const std::vector<Edge>& edges, const std::vector<int>& c) {
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  for (const auto& e : edges) {
    A[e.a][e.b] += e.w;
    A[e.b][e.a] += e.w;
  }
  std::vector<double> k(n, 0.0);
  double two_m = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      k[i] += A[i][j];
      two_m += A[i][j];
    }
  double q = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (c[i] == c[j]) q += A[i][j] - k[i] * k[j] / two_m;
  return q / two_m;
}

// Every set partition of n nodes as restricted growth strings.
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> c(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == n) {
      f(c);
      return;
    }
    for (int k = 0; k <= used; ++k) {
      c[i] = k;
      rec(i + 1, std::max(used, k + 1));
    }
  };
  if (n == 0) return;
  c[0] = 0;
  rec(1, 1);
}

inline double max_modularity(std::size_t n, const std::vector<Edge>& edges) {
  double best = -1e300;
  for_each_partition(n, [&](const std::vector<int>& c) { best = std::max(best, modularity(n, edges, c)); });
  return best;
}

struct Found {
  std::size_t start, end;
  std::string variant;
};

inline bool boundary_ok(const std::string& text, std::size_t start, std::size_t end) {
  auto word = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || static_cast<unsigned char>(ch) >= 0x80; };
  const bool left = start == 0 || !word(text[start - 1]);
  const bool right = end == text.size() || !word(text[end]);
  return left && right;
}

// Enumerate every occurrence of every variant, then keep leftmost-longest non-overlapping.
inline std::vector<Found> leftmost_longest(const std::string& text, const std::vector<std::string>& variants) {
  std::vector<Found> all;
  for (const auto& v : variants) {
    if (v.empty()) continue;
    for (std::size_t pos = text.find(v); pos != std::string::npos; pos = text.find(v, pos + 1))
      if (boundary_ok(text, pos, pos + v.size())) all.push_back({pos, pos + v.size(), v});
  }
  std::sort(all.begin(), all.end(), [](const Found& x, const Found& y) {
    if (x.start != y.start) return x.start < y.start;
    return x.end > y.end;
  });
  std::vector<Found> kept;
  std::size_t cursor = 0;
  for (const auto& f : all) {
    if (f.start < cursor) continue;
    kept.push_back(f);
    cursor = f.end;
  }
  return kept;
}

inline double harmonic_mean(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0; }

}  // namespace oracle
