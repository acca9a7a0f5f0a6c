#pragma once

// Relative homology of the glued polygon complex and the period chart.
//
// The chain complex has polygons as 2-cells, glued edge pairs as 1-cells and
// vertex classes as 0-cells; marked vertex classes are killed, which computes
// H_1(C, P; Z).  The integral basis comes from Smith reduction with a fixed
// deterministic pivot rule, so the same combinatorics always yields the same
// basis, independent of the polygon geometry.  That makes period coordinates
// comparable across deformations of one surface.

#include <Eigen/Dense>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "flatstrata/common.hpp"
#include "flatstrata/surface.hpp"

namespace flatstrata {

namespace detail {

using IMat = std::vector<std::vector<long long>>;  // row-major

inline IMat identity(int n) {
  IMat m(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline void guard(long long v) {
  require(std::llabs(v) < (1LL << 58), ErrorCode::Internal,
          "integer overflow in homology reduction");
}

// Diagonalizes A by unimodular row/column operations, tracking V, V^{-1} and
// U^{-1} where U A V = D.  Pivots are chosen as the smallest nonzero absolute
// value, ties broken by (row, col), so the reduction is deterministic.
struct Smith {
  IMat D, V, Vinv, Uinv;
  int rank = 0;

  explicit Smith(IMat A, int cols_hint = -1) : D(std::move(A)) {
    const int r = static_cast<int>(D.size());
    const int c = r ? static_cast<int>(D[0].size())
                    : (cols_hint < 0 ? 0 : cols_hint);
    V = identity(c);
    Vinv = identity(c);
    Uinv = identity(r);
    int t = 0;
    while (t < r && t < c) {
      int pi = -1, pj = -1;
      long long best = 0;
      for (int i = t; i < r; ++i)
        for (int j = t; j < c; ++j) {
          const long long a = std::llabs(D[i][j]);
          if (a != 0 && (pi < 0 || a < best)) {
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      if (D[t][t] < 0) negate_row(t);
      bool dirty = true;
      while (dirty) {
        dirty = false;
        for (int i = t + 1; i < r; ++i) {
          if (D[i][t] == 0) continue;
          const long long q = floordiv(D[i][t], D[t][t]);
          if (q != 0) add_row(i, t, -q);
          if (D[i][t] != 0) {  // remainder smaller than pivot: swap up, retry
            swap_rows(t, i);
            if (D[t][t] < 0) negate_row(t);
            dirty = true;
          }
        }
        for (int j = t + 1; j < c; ++j) {
          if (D[t][j] == 0) continue;
          const long long q = floordiv(D[t][j], D[t][t]);
          if (q != 0) add_col(j, t, -q);
          if (D[t][j] != 0) {
            swap_cols(t, j);
            if (D[t][t] < 0) negate_row(t);
            dirty = true;
          }
        }
      }
      ++t;
    }
    rank = t;
  }

  long long diag(int i) const { return D[i][i]; }

 private:
  static long long floordiv(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }
  void swap_rows(int i, int j) {
    if (i == j) return;
    std::swap(D[i], D[j]);
    for (auto& row : Uinv) std::swap(row[i], row[j]);  // swap columns of Uinv
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (auto& row : D) std::swap(row[i], row[j]);
    for (auto& row : V) std::swap(row[i], row[j]);
    std::swap(Vinv[i], Vinv[j]);  // swap rows of Vinv
  }
  void negate_row(int i) {
    for (auto& v : D[i]) v = -v;
    for (auto& row : Uinv) row[i] = -row[i];
  }
  // row i += q * row j on D; Uinv col j -= q * col i (inverse op on the right)
  void add_row(int i, int j, long long q) {
    const int c = static_cast<int>(D[i].size());
    for (int k = 0; k < c; ++k) {
      D[i][k] += q * D[j][k];
      guard(D[i][k]);
    }
    for (auto& row : Uinv) {
      row[j] -= q * row[i];
      guard(row[j]);
    }
  }
  // col i += q * col j on D and V; Vinv row j -= q * row i
  void add_col(int i, int j, long long q) {
    for (auto& row : D) {
      row[i] += q * row[j];
      guard(row[i]);
    }
    for (auto& row : V) {
      row[i] += q * row[j];
      guard(row[i]);
    }
    const int c = static_cast<int>(Vinv[j].size());
    for (int k = 0; k < c; ++k) {
      Vinv[j][k] -= q * Vinv[i][k];
      guard(Vinv[j][k]);
    }
  }
};

}  // namespace detail

// The homology basis and everything needed to evaluate and perturb periods.
class PeriodChart {
 public:
  explicit PeriodChart(const Surface& S, const Config& cfg = Config{})
      : S_(&S), cfg_(cfg) {
    build();
  }

  const Surface& surface() const { return *S_; }
  int rank() const { return d_; }

  // Integral basis: basis_[b][e] is the coefficient of edge class e in the
  // b-th basis cycle.
  const std::vector<std::vector<long long>>& basis() const { return basis_; }

  std::string basis_combo_string(int b) const {
    std::string s;
    for (int e = 0; e < E_; ++e) {
      const long long c = basis_[b][e];
      if (c == 0) continue;
      if (!s.empty()) s += " ";
      s += (c > 0 ? "+" : "-");
      if (std::llabs(c) != 1) s += std::to_string(std::llabs(c)) + "*";
      s += "e" + std::to_string(e);
    }
    return s.empty() ? "0" : s;
  }

  Eigen::VectorXcd periods() const {
    Eigen::VectorXcd p(d_);
    for (int b = 0; b < d_; ++b) {
      cplx z = 0;
      for (int e = 0; e < E_; ++e)
        if (basis_[b][e] != 0)
          z += static_cast<double>(basis_[b][e]) * S_->edge_holonomy(e);
      p(b) = z;
    }
    return p;
  }

  // Coordinate row of a glued edge class: its pairing with the dual cocycles.
  // This is the class of the edge in H_1(C, P; R) whenever both endpoints are
  // marked (then the entries are integers).
  Eigen::VectorXd edge_class_coords(int e) const { return W_.row(e).transpose(); }

  bool edge_is_relative_cycle(int e) const {
    auto [p, v] = S_->edge_rep(e);
    const int a = S_->vertex_class_of(p, v);
    const int b = S_->vertex_class_of(p, (v + 1) % S_->poly_size(p));
    return S_->vertex_classes()[a].marking >= 0 &&
           S_->vertex_classes()[b].marking >= 0;
  }

  // Potential of dual cocycle a at corner v of polygon p.  Potentials turn
  // pairing with a traced path into a telescoping sum of endpoint values.
  double potential(int a, int p, int v) const { return pot_[p](v, a); }

  // Potential at the point of polygon edge (p, e) with parameter t in [0, 1].
  double potential_on_edge(int a, int p, int e, double t) const {
    const int c = S_->edge_class_of(p, e);
    const double step = S_->edge_sign_of(p, e) * W_(c, a);
    return pot_[p](e, a) + t * step;
  }

  // Rebuilds the surface after adding delta to the period of each basis
  // cycle.  The gluing combinatorics is unchanged, so the new surface's own
  // chart has periods exactly old + delta.
  Surface deform(const Eigen::VectorXcd& delta) const {
    require(delta.size() == d_, ErrorCode::SizeMismatch,
            "delta has wrong length");
    Eigen::VectorXd rhs_re = Eigen::VectorXd::Zero(M_.rows());
    Eigen::VectorXd rhs_im = Eigen::VectorXd::Zero(M_.rows());
    const int F = S_->num_polygons();
    for (int b = 0; b < d_; ++b) {
      rhs_re(F + b) = delta(b).real();
      rhs_im(F + b) = delta(b).imag();
    }
    const Eigen::VectorXd w_re = cod_.solve(rhs_re);
    const Eigen::VectorXd w_im = cod_.solve(rhs_im);
    const double scale = std::max(1.0, delta.cwiseAbs().maxCoeff());
    require((M_ * w_re - rhs_re).cwiseAbs().maxCoeff() <= 1e-8 * scale &&
                (M_ * w_im - rhs_im).cwiseAbs().maxCoeff() <= 1e-8 * scale,
            ErrorCode::DeformFailed, "period assignment is not realizable");

    SurfaceDesc nd = S_->desc();
    for (int p = 0; p < S_->num_polygons(); ++p) {
      const Polygon& old = S_->polygons()[p];
      const int np = static_cast<int>(old.size());
      Polygon fresh(np);
      fresh[0] = old[0];
      cplx pos = old[0];
      for (int v = 0; v < np; ++v) {
        const int c = S_->edge_class_of(p, v);
        const double sg = S_->edge_sign_of(p, v);
        const cplx hol = old[(v + 1) % np] - old[v] +
                         sg * cplx(w_re(c), w_im(c));
        pos += hol;
        if (v + 1 < np) fresh[v + 1] = pos;
      }
      require(std::abs(pos - old[0]) <= std::max(S_->tol(), 1e-12 * scale) * 100,
              ErrorCode::ClosureViolation,
              "polygon fails to close after deformation");
      nd.polygons[p] = fresh;
    }
    try {
      Surface out(std::move(nd), cfg_);
      require(out.signature() == S_->signature(), ErrorCode::PolygonDegenerates,
              "deformation changed the stratum signature");
      return out;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ClosureViolation ||
          e.code() == ErrorCode::PolygonDegenerates)
        throw;
      fail(ErrorCode::PolygonDegenerates, e.what());
    }
  }

 private:
  const Surface* S_;
  Config cfg_;
  int E_ = 0, d_ = 0;
  std::vector<std::vector<long long>> basis_;   // d rows of length E
  Eigen::MatrixXd W_;                           // E x d dual cocycles
  Eigen::MatrixXd M_;                           // (F+d) x E constraint matrix
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_;
  std::vector<Eigen::MatrixXd> pot_;            // per polygon: corners x d

  void build() {
    const Surface& S = *S_;
    E_ = S.num_edge_classes();
    const int F = S.num_polygons();

    // boundary of faces in edge classes
    detail::IMat D2(E_, std::vector<long long>(F, 0));
    for (int p = 0; p < F; ++p)
      for (int e = 0; e < S.poly_size(p); ++e)
        D2[S.edge_class_of(p, e)][p] += S.edge_sign_of(p, e);

    // boundary of edges in unmarked vertex classes
    std::vector<int> row_of_class(S.vertex_classes().size(), -1);
    int nrows = 0;
    for (std::size_t c = 0; c < S.vertex_classes().size(); ++c)
      if (S.vertex_classes()[c].marking < 0) row_of_class[c] = nrows++;
    detail::IMat D1(nrows, std::vector<long long>(E_, 0));
    for (int e = 0; e < E_; ++e) {
      auto [p, v] = S.edge_rep(e);
      const int tail = S.vertex_class_of(p, v);
      const int head = S.vertex_class_of(p, (v + 1) % S.poly_size(p));
      if (row_of_class[head] >= 0) D1[row_of_class[head]][e] += 1;
      if (row_of_class[tail] >= 0) D1[row_of_class[tail]][e] -= 1;
    }

    // relative cycles: kernel of D1
    detail::Smith s1(D1, E_);
    const int z = E_ - s1.rank;  // kernel dimension

    // express face boundaries in kernel coordinates: rows >= rank of Vinv*D2
    detail::IMat Y(z, std::vector<long long>(F, 0));
    for (int i = 0; i < E_; ++i)
      for (int f = 0; f < F; ++f) {
        long long acc = 0;
        for (int e = 0; e < E_; ++e) acc += s1.Vinv[i][e] * D2[e][f];
        detail::guard(acc);
        if (i < s1.rank)
          require(acc == 0, ErrorCode::Internal,
                  "face boundary is not a relative cycle");
        else
          Y[i - s1.rank][f] = acc;
      }

    // quotient by face boundaries
    detail::Smith s2(Y);
    for (int i = 0; i < s2.rank; ++i)
      require(std::llabs(s2.diag(i)) == 1, ErrorCode::RankMismatch,
              "relative homology has torsion");
    d_ = z - s2.rank;
    const auto& sig = S.signature();
    require(d_ == sig.period_rank(), ErrorCode::RankMismatch,
            "homology rank " + std::to_string(d_) + " but signature expects " +
                std::to_string(sig.period_rank()));

    // basis in edge-class coordinates: V1[:, rank1 + j] assembled through
    // the quotient's Uinv columns
    basis_.assign(d_, std::vector<long long>(E_, 0));
    for (int b = 0; b < d_; ++b)
      for (int e = 0; e < E_; ++e) {
        long long acc = 0;
        for (int j = 0; j < z; ++j)
          acc += s1.V[e][s1.rank + j] * s2.Uinv[j][s2.rank + b];
        detail::guard(acc);
        basis_[b][e] = acc;
      }

    // dual cocycles: w closed on faces, pairing delta_ab with the basis
    M_.setZero(F + d_, E_);
    for (int e = 0; e < E_; ++e)
      for (int f = 0; f < F; ++f) M_(f, e) = static_cast<double>(D2[e][f]);
    for (int b = 0; b < d_; ++b)
      for (int e = 0; e < E_; ++e)
        M_(F + b, e) = static_cast<double>(basis_[b][e]);
    cod_.compute(M_);
    W_.setZero(E_, d_);
    for (int b = 0; b < d_; ++b) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(F + d_);
      rhs(F + b) = 1.0;
      const Eigen::VectorXd w = cod_.solve(rhs);
      require((M_ * w - rhs).cwiseAbs().maxCoeff() <= 1e-8,
              ErrorCode::Internal, "dual cocycle system is inconsistent");
      W_.col(b) = w;
    }

    // corner potentials per polygon: f(0) = 0, increments by the cocycle
    // value of each traversed edge
    pot_.clear();
    for (int p = 0; p < F; ++p) {
      const int np = S.poly_size(p);
      Eigen::MatrixXd pp = Eigen::MatrixXd::Zero(np, d_);
      for (int v = 0; v + 1 < np; ++v) {
        const int c = S.edge_class_of(p, v);
        pp.row(v + 1) =
            pp.row(v) + S.edge_sign_of(p, v) * W_.row(c);
      }
      pot_.push_back(std::move(pp));
    }
  }
};

inline Eigen::VectorXcd period_vector(const Surface& S, const Config& cfg = Config{}) {
  return PeriodChart(S, cfg).periods();
}

}  // namespace flatstrata
