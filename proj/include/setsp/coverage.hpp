#pragma once

// Generalized coverage functions s_A = c + w(U_{i in A} S_i) described by the
// weights of their Venn-diagram fragments T_B = (n_{i in B} S_i) \ (U_{i not in
// B} S_i), B != {}. Every set function has such a representation; the
// fragment weights are the negated type-4 spectrum and the negated type-3
// spectrum holds the weights of the intersections n_{i in B} S_i.
//
// The joint entropy of a Gaussian vector is the worked instance: its type-3
// coefficients at pairs are negated pairwise mutual informations.

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "setsp/io.hpp"
#include "setsp/powerset.hpp"
#include "setsp/random.hpp"
#include "setsp/transforms.hpp"

namespace setsp {

inline constexpr double kFragmentDropTolerance = 1e-12;

struct CoverageRepresentation {
  GroundSet ground{0};
  double offset = 0.0;                       // c = s_{}
  std::map<mask_t, double> fragment_weights; // B != {} -> w(T_B)

  [[nodiscard]] double total_weight() const {
    double t = 0.0;
    for (const auto &[b, w] : fragment_weights)
      t += w;
    return t;
  }
};

// c + sum of the weights of all fragments that meet A.
[[nodiscard]] inline double coverage_eval(const CoverageRepresentation &rep,
                                          mask_t a) {
  detail::check_mask(rep.ground, a);
  double v = rep.offset;
  for (const auto &[b, w] : rep.fragment_weights)
    if (b & a)
      v += w;
  return v;
}

[[nodiscard]] inline SetFunction
coverage_to_set_function(const CoverageRepresentation &rep) {
  SetFunction s(rep.ground);
  for (mask_t a = 0; a < s.size(); ++a)
    s[a] = coverage_eval(rep, a);
  return s;
}

// Builds the representation from explicit sets over a finite universe:
// membership[i][u] says whether universe element u belongs to S_{i+1}.
// Elements outside every S_i never contribute.
[[nodiscard]] inline CoverageRepresentation
coverage_from_sets(const std::vector<std::vector<bool>> &membership,
                   const std::vector<double> &weights, double offset) {
  const GroundSet g(static_cast<int>(membership.size()));
  CoverageRepresentation rep{g, offset, {}};
  for (std::size_t u = 0; u < weights.size(); ++u) {
    mask_t b = 0;
    for (std::size_t i = 0; i < membership.size(); ++i) {
      if (membership[i].size() != weights.size())
        throw std::invalid_argument("membership row " + std::to_string(i) +
                                    " does not cover the universe");
      if (membership[i][u])
        b |= mask_t{1} << i;
    }
    if (b != 0)
      rep.fragment_weights[b] += weights[u];
  }
  return rep;
}

// Fragment weights -w(T_B) = type-4 coefficients, offset c = s_{}.
[[nodiscard]] inline CoverageRepresentation
coverage_from_setfunction(const SetFunction &s) {
  const Spectrum s4 = dsft(Model::Advance, s);
  CoverageRepresentation rep{s.ground(), s[0], {}};
  for (mask_t b = 1; b < s4.size(); ++b)
    if (std::abs(s4[b]) >= kFragmentDropTolerance)
      rep.fragment_weights.emplace_hint(rep.fragment_weights.end(), b, -s4[b]);

  // Re-evaluate to confirm the representation reproduces s.
  double scale = 1.0;
  for (const double v : s.values())
    scale = std::max(scale, std::abs(v));
  const double tol = 1e-9 * scale;
  const auto check = [&](mask_t a) {
    if (std::abs(coverage_eval(rep, a) - s[a]) > tol)
      throw std::logic_error("coverage representation does not reproduce s at " +
                             std::to_string(a));
  };
  if (s.ground().size() <= 12) {
    for (mask_t a = 0; a < s.size(); ++a)
      check(a);
  } else {
    Rng rng(0x5eedc0feULL);
    check(0);
    check(s.ground().full_mask());
    for (int i = 0; i < 256; ++i)
      check(random_subset(rng, s.ground()));
  }
  return rep;
}

// Type-3 spectrum predicted by the intersection weights:
// {} -> s_{}, B -> -w(n_{i in B} S_i) = -sum_{C contains B} w(T_C).
[[nodiscard]] inline Spectrum
intersection_weights(const CoverageRepresentation &rep) {
  SetFunction sup(rep.ground);
  for (const auto &[b, w] : rep.fragment_weights)
    sup[b] = w;
  // superset sums
  const mask_t len = sup.size();
  for (int i = 0; i < rep.ground.size(); ++i) {
    const mask_t bit = mask_t{1} << i;
    for (mask_t b = 0; b < len; ++b)
      if (!(b & bit))
        sup[b] += sup[b | bit];
  }
  Spectrum out(rep.ground, Model::Delay);
  out[0] = rep.offset;
  for (mask_t b = 1; b < len; ++b)
    out[b] = -sup[b];
  return out;
}

// Type-4 spectrum predicted by the fragment weights:
// {} -> s_N = c + sum of all weights, B -> -w(T_B).
[[nodiscard]] inline Spectrum
fragment_weights_spectrum(const CoverageRepresentation &rep) {
  Spectrum out(rep.ground, Model::Advance);
  out[0] = rep.offset + rep.total_weight();
  for (const auto &[b, w] : rep.fragment_weights)
    out[b] = -w;
  return out;
}

// File form: the type-4 spectrum itself, sparse.
[[nodiscard]] inline SparseSetFunction
coverage_to_spectrum4(const CoverageRepresentation &rep) {
  SparseSetFunction out(rep.ground);
  out.set(0, rep.offset + rep.total_weight());
  for (const auto &[b, w] : rep.fragment_weights)
    out.set(b, -w);
  return out;
}

[[nodiscard]] inline CoverageRepresentation
coverage_from_spectrum4(const SparseSetFunction &spec) {
  CoverageRepresentation rep{spec.ground(), spec.get(0), {}};
  for (const auto &[b, v] : spec.entries()) {
    if (b == 0)
      continue;
    rep.fragment_weights[b] = -v;
    rep.offset += v; // s_{} = s_N - sum of weights
  }
  return rep;
}

// Worst violation of s_{A+x} + s_{A+y} >= s_{A+x+y} + s_A over all A, x != y
// (negative means violated).
[[nodiscard]] inline double submodularity_margin(const SetFunction &s) {
  const int n = s.ground().size();
  double worst = std::numeric_limits<double>::infinity();
  for (mask_t a = 0; a < s.size(); ++a)
    for (int i = 0; i < n; ++i) {
      const mask_t x = mask_t{1} << i;
      if (a & x)
        continue;
      for (int j = i + 1; j < n; ++j) {
        const mask_t y = mask_t{1} << j;
        if (a & y)
          continue;
        const double m = s[a | x] + s[a | y] - s[a | x | y] - s[a];
        worst = std::min(worst, m);
      }
    }
  return worst;
}

class GaussianModel {
public:
  explicit GaussianModel(Eigen::MatrixXd covariance)
      : cov_(std::move(covariance)) {
    if (cov_.rows() != cov_.cols())
      throw std::invalid_argument("covariance must be square");
    if (cov_.rows() > kMaxSparseElements)
      throw std::invalid_argument("covariance dimension exceeds " +
                                  std::to_string(kMaxSparseElements));
    if (cov_.size() == 0)
      throw std::invalid_argument("covariance is empty");
    const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10)
      throw std::invalid_argument("covariance is not symmetric (max |K - K^T| = " +
                                  std::to_string(asym) + ")");
    Eigen::LLT<Eigen::MatrixXd> llt(cov_);
    if (llt.info() != Eigen::Success)
      throw std::domain_error("covariance is not positive definite");
  }

  [[nodiscard]] static GaussianModel from_rows(const DenseRows &rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (static_cast<Eigen::Index>(rows[i].size()) != n)
        throw std::invalid_argument("covariance must be square");
      for (Eigen::Index j = 0; j < n; ++j)
        k(i, j) = rows[i][j];
    }
    return GaussianModel(std::move(k));
  }

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(cov_.rows()); }
  [[nodiscard]] GroundSet ground() const { return GroundSet(dim()); }
  [[nodiscard]] const Eigen::MatrixXd &covariance() const noexcept {
    return cov_;
  }

  [[nodiscard]] DenseRows to_rows() const {
    DenseRows rows(cov_.rows(), std::vector<double>(cov_.cols()));
    for (Eigen::Index i = 0; i < cov_.rows(); ++i)
      for (Eigen::Index j = 0; j < cov_.cols(); ++j)
        rows[i][j] = cov_(i, j);
    return rows;
  }

  // H(X_A) = 1/2 ln det K_A + |A|/2 (1 + ln 2 pi), natural log.
  [[nodiscard]] double entropy(mask_t a) const {
    detail::check_mask(ground(), a);
    if (a == 0)
      return 0.0;
    std::vector<Eigen::Index> idx;
    for (int i = 0; i < dim(); ++i)
      if (a & (mask_t{1} << i))
        idx.push_back(i);
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < k; ++c)
        sub(r, c) = cov_(idx[r], idx[c]);
    Eigen::LLT<Eigen::MatrixXd> llt(sub);
    if (llt.info() != Eigen::Success)
      throw std::domain_error("principal submatrix for subset " +
                              std::to_string(a) +
                              " is numerically not positive definite");
    double log_det = 0.0;
    const auto &l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < k; ++i)
      log_det += 2.0 * std::log(l(i, i));
    return 0.5 * log_det +
           0.5 * static_cast<double>(k) *
               (1.0 + std::log(2.0 * std::numbers::pi));
  }

private:
  Eigen::MatrixXd cov_;
};

[[nodiscard]] inline SetFunction entropy_set_function(const GaussianModel &m) {
  SetFunction s(m.ground());
  for (mask_t a = 0; a < s.size(); ++a)
    s[a] = m.entropy(a);
  return s;
}

// I(X_i; X_j) = H(X_i) + H(X_j) - H(X_i, X_j), elements 1-based.
[[nodiscard]] inline double pairwise_mutual_information(const GaussianModel &m,
                                                        int i, int j) {
  const GroundSet g = m.ground();
  check_element(g, i);
  check_element(g, j);
  if (i == j)
    throw std::invalid_argument("mutual information needs two distinct elements");
  const mask_t xi = element_bit(i), xj = element_bit(j);
  return m.entropy(xi) + m.entropy(xj) - m.entropy(xi | xj);
}

struct MutualInformationReport {
  double max_pair_error = 0.0;      // max |s3_{ij} + I(X_i; X_j)|
  double joint_entropy_error = 0.0; // |s4_{} - H(X_N)|
  std::vector<double> pair_information; // row-major i<j

  [[nodiscard]] bool passed(double tol) const {
    return max_pair_error <= tol && joint_entropy_error <= tol;
  }
};

// Checks the type-3 pair coefficients and the type-4 DC coefficient of the
// densified entropy function against direct mutual information.
[[nodiscard]] inline MutualInformationReport mi_check(const GaussianModel &m) {
  if (m.dim() > kMaxMatrixElements)
    throw std::invalid_argument("mi_check densifies the entropy; n <= " +
                                std::to_string(kMaxMatrixElements));
  const SetFunction h = entropy_set_function(m);
  const Spectrum s3 = dsft(Model::Delay, h);
  const Spectrum s4 = dsft(Model::Advance, h);
  MutualInformationReport rep;
  for (int i = 1; i <= m.dim(); ++i)
    for (int j = i + 1; j <= m.dim(); ++j) {
      const double mi = pairwise_mutual_information(m, i, j);
      rep.pair_information.push_back(mi);
      rep.max_pair_error = std::max(
          rep.max_pair_error, std::abs(s3[element_bit(i) | element_bit(j)] + mi));
    }
  rep.joint_entropy_error =
      std::abs(s4[0] - m.entropy(m.ground().full_mask()));
  return rep;
}

// Sensor-field style covariance: squared-exponential kernel over random
// positions in the unit square plus independent noise.
[[nodiscard]] inline GaussianModel random_sensor_covariance(int n, Rng &rng,
                                                            double length = 0.3,
                                                            double noise = 0.05) {
  std::vector<std::pair<double, double>> pos(static_cast<std::size_t>(n));
  for (auto &p : pos)
    p = {uniform01(rng), uniform01(rng)};
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double dx = pos[i].first - pos[j].first;
      const double dy = pos[i].second - pos[j].second;
      k(i, j) = std::exp(-(dx * dx + dy * dy) / (length * length)) +
                (i == j ? noise : 0.0);
    }
  return GaussianModel(std::move(k));
}

// W W^T / m + eps I with standard normal W (n x 2n).
[[nodiscard]] inline GaussianModel random_wishart_covariance(int n, Rng &rng) {
  const int m = 2 * n;
  Eigen::MatrixXd w(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      w(i, j) = standard_normal(rng);
  Eigen::MatrixXd k = w * w.transpose() / static_cast<double>(m);
  k += 1e-3 * Eigen::MatrixXd::Identity(n, n);
  k = 0.5 * (k + k.transpose()).eval();
  return GaussianModel(std::move(k));
}

} // namespace setsp
