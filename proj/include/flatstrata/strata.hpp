#pragma once

// Combinatorics of mark collisions: surjections that merge marked points,
// their partial order by refinement, pushforward of zero orders, counting,
// and the boundary stratification table with dimension bounds.
//
// A merge pattern on n free points and k zeros is a map of {0..n+k-1} onto
// {0..n+l-1} that fixes the first n (the labeled free points); the k tail
// points may land on head points or on l fresh targets.  Fresh targets are
// unlabeled, so maps are kept in canonical form: fresh targets numbered by
// first occurrence along the tail.

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "flatstrata/common.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

class Surjection {
 public:
  Surjection(int n, std::vector<int> img) : n_(n), img_(std::move(img)) {
    require(n_ >= 0 && static_cast<int>(img_.size()) >= n_,
            ErrorCode::ParamOutOfRange, "merge pattern shorter than its head");
    for (int i = 0; i < n_; ++i)
      require(img_[i] == i, ErrorCode::ParamOutOfRange,
              "merge pattern must fix the labeled points");
    canonicalize();
    const int nl = n_ + l_;
    for (int i = 0; i < size(); ++i)
      require(img_[i] >= 0 && img_[i] < nl, ErrorCode::ParamOutOfRange,
              "merge pattern target out of range");
  }

  static Surjection identity(int n, int k) {
    std::vector<int> img(n + k);
    std::iota(img.begin(), img.end(), 0);
    return Surjection(n, img);
  }

  int n() const { return n_; }
  int k() const { return size() - n_; }
  int l() const { return l_; }
  int size() const { return static_cast<int>(img_.size()); }
  int operator()(int i) const { return img_[i]; }
  const std::vector<int>& image() const { return img_; }

  bool operator==(const Surjection& o) const {
    return n_ == o.n_ && img_ == o.img_;
  }

  // Representative index of each target: the smallest preimage.
  std::vector<int> fiber_representatives() const {
    std::vector<int> rep(n_ + l_, -1);
    for (int i = 0; i < size(); ++i)
      if (rep[img_[i]] < 0) rep[img_[i]] = i;
    return rep;
  }

  std::vector<int> pushforward(const std::vector<int>& m) const {
    require(static_cast<int>(m.size()) == size(), ErrorCode::SizeMismatch,
            "order vector length does not match the merge pattern");
    std::vector<int> out(n_ + l_, 0);
    for (int i = 0; i < size(); ++i) out[img_[i]] += m[i];
    return out;
  }

  // Number of tail permutations preserving the map.
  long long aut_order() const {
    std::map<int, int> mult;
    for (int i = n_; i < size(); ++i) ++mult[img_[i]];
    long long a = 1;
    for (auto [v, c] : mult)
      for (int j = 2; j <= c; ++j) a *= j;
    return a;
  }

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < size(); ++i) {
      if (i) s += ",";
      s += std::to_string(img_[i]);
    }
    return s + "]";
  }

 private:
  void canonicalize() {
    // renumber fresh targets by first occurrence along the tail
    std::map<int, int> relabel;
    l_ = 0;
    for (int i = n_; i < size(); ++i) {
      if (img_[i] < n_) continue;
      auto it = relabel.find(img_[i]);
      if (it == relabel.end())
        it = relabel.emplace(img_[i], n_ + l_++).first;
      img_[i] = it->second;
    }
  }

  int n_;
  int l_ = 0;
  std::vector<int> img_;
};

// a <= b when b's fibers refine a's, i.e. a factors through b by a further
// merge that fixes the labeled points.
inline bool leq(const Surjection& a, const Surjection& b) {
  if (a.n() != b.n() || a.size() != b.size()) return false;
  std::vector<int> induced(b.n() + b.l(), -1);
  for (int i = 0; i < a.size(); ++i) {
    if (b(i) < b.n() && a(i) != b(i)) return false;
    if (induced[b(i)] < 0)
      induced[b(i)] = a(i);
    else if (induced[b(i)] != a(i))
      return false;
  }
  return true;
}

inline bool lt(const Surjection& a, const Surjection& b) {
  return leq(a, b) && !(a == b);
}

inline bool comparable(const Surjection& a, const Surjection& b) {
  return leq(a, b) || leq(b, a);
}

// All canonical merge patterns with exactly l fresh targets, in lexicographic
// order of the tail image vector.
inline std::vector<Surjection> enumerate_surjections(int n, int k, int l) {
  require(n >= 0 && k >= 0 && l >= 0 && l <= k, ErrorCode::ParamOutOfRange,
          "bad merge pattern shape");
  std::vector<Surjection> out;
  std::vector<int> img(n + k);
  std::iota(img.begin(), img.begin() + n, 0);
  auto rec = [&](auto&& self, int pos, int fresh) -> void {
    if (pos == n + k) {
      if (fresh == l) out.push_back(Surjection(n, img));
      return;
    }
    // remaining tail slots must still be able to open l - fresh targets
    const int remaining = n + k - pos;
    for (int v = 0; v < n + fresh; ++v) {
      if (remaining - 1 < l - fresh) break;
      img[pos] = v;
      self(self, pos + 1, fresh);
    }
    if (fresh < l) {
      img[pos] = n + fresh;
      self(self, pos + 1, fresh + 1);
    }
  };
  rec(rec, n, 0);
  return out;
}

// All merge patterns, grouped by increasing number of fresh targets.
inline std::vector<Surjection> enumerate_all_surjections(int n, int k) {
  std::vector<Surjection> out;
  for (int l = 0; l <= k; ++l) {
    if (l == 0 && n == 0 && k > 0) continue;  // nothing to land on
    auto part = enumerate_surjections(n, k, l);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

inline long long binomial(int a, int b) {
  if (b < 0 || b > a) return 0;
  long long r = 1;
  for (int i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
  return r;
}

inline long long stirling2(int m, int l) {
  if (m == 0 && l == 0) return 1;
  if (m <= 0 || l <= 0 || l > m) return 0;
  std::vector<std::vector<long long>> S(m + 1, std::vector<long long>(l + 1, 0));
  S[0][0] = 1;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= std::min(i, l); ++j)
      S[i][j] = S[i - 1][j - 1] + j * S[i - 1][j];
  return S[m][l];
}

// Number of canonical merge patterns: choose which tail points land on the
// head, send them anywhere there, partition the rest into l fresh targets.
inline long long count_surjections(int n, int k, int l) {
  long long total = 0;
  for (int s = 0; s <= k - l; ++s) {
    long long heads = 1;
    for (int i = 0; i < s; ++i) heads *= n;
    total += binomial(k, s) * heads * stirling2(k - s, l);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Boundary stratification rows at a given depth

struct StratumRow {
  int depth = 0;
  std::vector<int> head;  // orders carried by the n labeled points
  std::vector<int> tail;  // decreasing positive orders of the unlabeled zeros
  long long aut = 1;
  int proj_dimension = 0;

  StratumSignature signature(int g) const {
    StratumSignature sig;
    sig.g = g;
    sig.n = static_cast<int>(head.size());
    sig.m = head;
    sig.m.insert(sig.m.end(), tail.begin(), tail.end());
    return sig;
  }
};

// All signatures of codimension `depth` strata: n labeled points carrying
// nonnegative orders plus 2g-2-depth unlabeled zeros with positive orders,
// everything summing to 2g-2.
inline std::vector<StratumRow> stratification_table(int g, int n, int depth) {
  require(g >= 1 && n >= 0 && depth >= 0, ErrorCode::ParamOutOfRange,
          "bad stratification parameters");
  const int total = 2 * g - 2;
  const int parts = total - depth;
  std::vector<StratumRow> out;
  require(parts >= 0, ErrorCode::ParamOutOfRange,
          "depth exceeds the order budget");

  std::vector<int> head(n, 0);
  std::vector<int> tail;
  auto emit = [&]() {
    StratumRow row;
    row.depth = depth;
    row.head = head;
    row.tail = tail;
    std::map<int, int> mult;
    for (int t : tail) ++mult[t];
    row.aut = 1;
    for (auto [v, c] : mult)
      for (int j = 2; j <= c; ++j) row.aut *= j;
    row.proj_dimension = 2 * g - 2 + n + parts;
    out.push_back(row);
  };
  auto rec_tail = [&](auto&& self, int pos, int left, int maxv) -> void {
    if (pos == parts) {
      if (left == 0) emit();
      return;
    }
    const int slots = parts - pos;
    for (int v = std::min(maxv, left - (slots - 1)); v >= 1; --v) {
      tail.push_back(v);
      self(self, pos + 1, left - v, v);
      tail.pop_back();
    }
  };
  auto rec_head = [&](auto&& self, int i, int left) -> void {
    if (i == n) {
      if (parts == 0) {
        if (left == 0) emit();
        return;
      }
      rec_tail(rec_tail, 0, left, left);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      head[i] = v;
      self(self, i + 1, left - v);
    }
    head[i] = 0;
  };
  rec_head(rec_head, 0, total);
  return out;
}

// ---------------------------------------------------------------------------
// Cohomological dimension bounds

struct CohdimBounds {
  int moduli = 0;     // bound proved for the open moduli space
  int hodge = 0;      // bound for the total space of the Hodge bundle
  int strata = 0;     // bound for a single stratum
  int depth = 0;      // depth of the exhaustion chain
  int harer = 0;      // classical homotopy-dimension bound
  int looijenga = 0;  // conjectural lower-side comparison
};

inline CohdimBounds cohdim_bounds(int g, int n) {
  require(g >= 1 && n >= 0, ErrorCode::ParamOutOfRange,
          "bounds need genus at least one");
  const int eps = n > 0 ? 1 : 0;
  CohdimBounds b;
  b.moduli = 2 * g - 2 + eps;
  b.hodge = 3 * g - 3 + eps;
  b.strata = g;
  b.depth = 2 * g - 3 + eps;
  b.harer = 4 * g - 5 + n + eps;
  b.looijenga = g - 2 + eps;
  return b;
}

}  // namespace flatstrata
