#pragma once

// Sampling of model-4 Fourier-sparse set functions.
//
// With support B_1..B_k and queries at A_i = N \ B_i the system
//   s_{A_i} = sum_j T_ij c_j,   T_ij = [A_i n B_j = {}] = [B_j c B_i]
// is unit lower triangular once the support is sorted by (|B|, mask), so the
// coefficients follow from k queries and forward substitution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "setsp/compression.hpp"
#include "setsp/powerset.hpp"
#include "setsp/random.hpp"
#include "setsp/transforms.hpp"

namespace setsp {

class SparseSupport {
public:
  SparseSupport(GroundSet g, std::vector<mask_t> freqs)
      : ground_(g), freqs_(std::move(freqs)) {
    for (const mask_t b : freqs_)
      detail::check_mask(ground_, b);
    std::sort(freqs_.begin(), freqs_.end(), CardinalityOrder{});
    if (std::adjacent_find(freqs_.begin(), freqs_.end()) != freqs_.end())
      throw std::invalid_argument("support has duplicate frequencies");
  }

  [[nodiscard]] const GroundSet &ground() const noexcept { return ground_; }
  [[nodiscard]] const std::vector<mask_t> &freqs() const noexcept {
    return freqs_;
  }
  [[nodiscard]] std::size_t size() const noexcept { return freqs_.size(); }

private:
  GroundSet ground_;
  std::vector<mask_t> freqs_;
};

class SparseSpectrum4 {
public:
  SparseSpectrum4(SparseSupport support, std::vector<double> coeffs)
      : support_(std::move(support)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != support_.size())
      throw std::invalid_argument("support and coefficient counts differ");
  }

  // Builds from unsorted (frequency, coefficient) pairs.
  [[nodiscard]] static SparseSpectrum4
  from_pairs(GroundSet g, std::vector<std::pair<mask_t, double>> pairs) {
    std::vector<mask_t> freqs;
    freqs.reserve(pairs.size());
    for (const auto &[b, v] : pairs)
      freqs.push_back(b);
    SparseSupport support(g, std::move(freqs));
    std::sort(pairs.begin(), pairs.end(), [](const auto &x, const auto &y) {
      return CardinalityOrder{}(x.first, y.first);
    });
    std::vector<double> coeffs;
    coeffs.reserve(pairs.size());
    for (const auto &[b, v] : pairs)
      coeffs.push_back(v);
    return {std::move(support), std::move(coeffs)};
  }

  [[nodiscard]] static SparseSpectrum4 from_sparse(const SparseSetFunction &s) {
    return from_pairs(s.ground(), {s.entries().begin(), s.entries().end()});
  }

  [[nodiscard]] const SparseSupport &support() const noexcept {
    return support_;
  }
  [[nodiscard]] const GroundSet &ground() const noexcept {
    return support_.ground();
  }
  [[nodiscard]] const std::vector<double> &coeffs() const noexcept {
    return coeffs_;
  }

  // s_A = sum over support frequencies disjoint from A.
  [[nodiscard]] double operator()(mask_t a) const {
    double v = 0.0;
    const auto &f = support_.freqs();
    for (std::size_t k = 0; k < f.size(); ++k)
      if ((f[k] & a) == 0)
        v += coeffs_[k];
    return v;
  }

  [[nodiscard]] Spectrum densify() const {
    Spectrum out(ground(), Model::Advance);
    const auto &f = support_.freqs();
    for (std::size_t k = 0; k < f.size(); ++k)
      out[f[k]] = coeffs_[k];
    return out;
  }

  [[nodiscard]] SparseSetFunction to_sparse() const {
    SparseSetFunction out(ground());
    const auto &f = support_.freqs();
    for (std::size_t k = 0; k < f.size(); ++k)
      out.set(f[k], coeffs_[k]);
    return out;
  }

private:
  SparseSupport support_;
  std::vector<double> coeffs_;
};

[[nodiscard]] inline double eval_sparse(const SparseSpectrum4 &spec, mask_t a) {
  detail::check_mask(spec.ground(), a);
  return spec(a);
}

// A_i = N \ B_i in support order.
[[nodiscard]] inline std::vector<mask_t>
sampling_indices(const SparseSupport &support) {
  std::vector<mask_t> out;
  out.reserve(support.size());
  const mask_t full = support.ground().full_mask();
  for (const mask_t b : support.freqs())
    out.push_back(full & ~b);
  return out;
}

// T_ij = [B_j c B_i]; dense, for inspection of small supports.
[[nodiscard]] inline Eigen::MatrixXd
reconstruction_matrix(const SparseSupport &support) {
  const auto k = static_cast<Eigen::Index>(support.size());
  const auto &f = support.freqs();
  Eigen::MatrixXd t(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      t(i, j) = is_subset(f[static_cast<std::size_t>(j)],
                          f[static_cast<std::size_t>(i)])
                    ? 1.0
                    : 0.0;
  return t;
}

// Solves T c = s_A by forward substitution (unit diagonal, no division).
[[nodiscard]] inline std::vector<double>
solve_triangular_support(const SparseSupport &support,
                         std::span<const double> samples) {
  const auto &f = support.freqs();
  if (samples.size() != f.size())
    throw std::invalid_argument("need one sample per support frequency");
  std::vector<double> c(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double acc = samples[i];
    for (std::size_t j = 0; j < i; ++j)
      if (is_subset(f[j], f[i]))
        acc -= c[j];
    c[i] = acc;
  }
  return c;
}

// k oracle queries at N \ B, then forward substitution. Exact when the
// oracle's type-4 spectrum lives on the support; otherwise the unique
// support-restricted spectrum that matches the oracle on the queried sets.
template <QueryOracle O>
[[nodiscard]] SparseSpectrum4 reconstruct(O &oracle,
                                          const SparseSupport &support) {
  if (oracle.ground() != support.ground())
    throw std::invalid_argument("oracle and support use different ground sets");
  const auto queries = sampling_indices(support);
  std::vector<double> samples;
  samples.reserve(queries.size());
  for (const mask_t a : queries)
    samples.push_back(static_cast<double>(oracle.query(a)));
  return {support, solve_triangular_support(support, samples)};
}

// Top-k frequencies by mean |coefficient| over the training spectra; ties go
// to the lower (cardinality, mask).
[[nodiscard]] inline SparseSupport
select_support(std::span<const Spectrum> training, std::size_t k) {
  if (training.empty())
    throw std::invalid_argument("select_support needs at least one spectrum");
  const GroundSet g = training.front().ground();
  for (const auto &s : training) {
    if (s.ground() != g)
      throw std::invalid_argument("training spectra use different ground sets");
    if (s.model() != Model::Advance)
      throw std::invalid_argument("training spectra must be type-4 spectra");
  }
  if (k > g.powerset_size())
    throw std::invalid_argument("support size " + std::to_string(k) +
                                " exceeds 2^n");
  const std::size_t len = g.powerset_size();
  std::vector<double> importance(len, 0.0);
  for (const auto &s : training)
    for (std::size_t b = 0; b < len; ++b)
      importance[b] += std::abs(s[b]);
  for (double &v : importance)
    v /= static_cast<double>(training.size());

  std::vector<mask_t> order(len);
  std::iota(order.begin(), order.end(), mask_t{0});
  const auto better = [&](mask_t x, mask_t y) {
    if (importance[x] != importance[y])
      return importance[x] > importance[y];
    return CardinalityOrder{}(x, y);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), better);
  order.resize(k);
  return {g, std::move(order)};
}

// sum_{B in support} c_B^2 / sum_B c_B^2 for a dense spectrum.
[[nodiscard]] inline double captured_mass_fraction(const Spectrum &spec,
                                                   const SparseSupport &support) {
  double total = 0.0, kept = 0.0;
  for (const double v : spec.values())
    total += v * v;
  for (const mask_t b : support.freqs())
    kept += spec[b] * spec[b];
  return total == 0.0 ? 1.0 : kept / total;
}

// Random type-4 sparse spectrum with k coefficients: a dominant coefficient
// at {} followed by k-1 uniformly random nonempty frequencies with
// log-uniform magnitudes in [lo, hi] and random signs. k = 0 is the zero
// function.
[[nodiscard]] inline SparseSpectrum4
random_sparse_spectrum4(const GroundSet &g, std::size_t k, Rng &rng,
                        double lo = 0.01, double hi = 1.0,
                        double dominant = 10.0) {
  if (g.size() < 63 && k > g.powerset_size())
    throw std::invalid_argument("more coefficients than frequencies");
  std::vector<std::pair<mask_t, double>> pairs;
  if (k == 0)
    return SparseSpectrum4::from_pairs(g, {});
  pairs.emplace_back(0, dominant * static_cast<double>(k));
  std::unordered_set<mask_t> used{0};
  while (pairs.size() < k) {
    const mask_t b = random_subset(rng, g);
    if (!used.insert(b).second)
      continue;
    pairs.emplace_back(b, random_sign(rng) * log_uniform(rng, lo, hi));
  }
  return SparseSpectrum4::from_pairs(g, std::move(pairs));
}

// Shared pool of frequencies with pool-level importance; bidders drawn from
// it activate every pool frequency with a jittered magnitude and random sign.
struct BidderPool {
  GroundSet ground;
  std::vector<mask_t> freqs;
  std::vector<double> scales;
};

[[nodiscard]] inline BidderPool make_bidder_pool(const GroundSet &g,
                                                 std::size_t size, Rng &rng,
                                                 double lo = 1e-3,
                                                 double hi = 1.0) {
  BidderPool pool{g, {}, {}};
  std::unordered_set<mask_t> used{0};
  while (pool.freqs.size() < size) {
    const mask_t b = random_subset(rng, g);
    if (!used.insert(b).second)
      continue;
    pool.freqs.push_back(b);
    pool.scales.push_back(log_uniform(rng, lo, hi));
  }
  return pool;
}

[[nodiscard]] inline SparseSpectrum4 draw_bidder(const BidderPool &pool,
                                                 Rng &rng,
                                                 double dominant = 10.0) {
  std::vector<std::pair<mask_t, double>> pairs;
  pairs.reserve(pool.freqs.size() + 1);
  pairs.emplace_back(0, dominant * static_cast<double>(pool.freqs.size()) *
                            log_uniform(rng, 0.5, 2.0));
  for (std::size_t i = 0; i < pool.freqs.size(); ++i)
    pairs.emplace_back(pool.freqs[i], random_sign(rng) * pool.scales[i] *
                                          log_uniform(rng, 0.5, 2.0));
  return SparseSpectrum4::from_pairs(pool.ground, std::move(pairs));
}

// s_A ~ c + sum_{i in A} a_i + sum_{i<j in A} b_ij, fitted by least squares.
class QuadraticModel {
public:
  QuadraticModel(GroundSet g, std::vector<double> weights)
      : ground_(g), weights_(std::move(weights)) {
    if (weights_.size() != feature_count(g.size()))
      throw std::invalid_argument("wrong number of quadratic weights");
  }

  [[nodiscard]] static std::size_t feature_count(int n) {
    return 1 + static_cast<std::size_t>(n) +
           static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  }

  [[nodiscard]] static QuadraticModel fit(const GroundSet &g,
                                          std::span<const RegressionSample> samples) {
    if (samples.empty())
      throw std::invalid_argument("quadratic fit needs samples");
    const int n = g.size();
    const auto rows = static_cast<Eigen::Index>(samples.size());
    const auto cols = static_cast<Eigen::Index>(feature_count(n));
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd y(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const mask_t a = samples[static_cast<std::size_t>(r)].subset;
      y(r) = samples[static_cast<std::size_t>(r)].value;
      Eigen::Index c = 0;
      x(r, c++) = 1.0;
      for (int i = 0; i < n; ++i)
        x(r, c++) = (a >> i) & 1 ? 1.0 : 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          x(r, c++) = ((a >> i) & 1) && ((a >> j) & 1) ? 1.0 : 0.0;
    }
    const Eigen::VectorXd w =
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(x).solve(y);
    return {g, std::vector<double>(w.data(), w.data() + w.size())};
  }

  [[nodiscard]] double operator()(mask_t a) const {
    const int n = ground_.size();
    std::size_t c = 0;
    double v = weights_[c++];
    for (int i = 0; i < n; ++i, ++c)
      if ((a >> i) & 1)
        v += weights_[c];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++c)
        if (((a >> i) & 1) && ((a >> j) & 1))
          v += weights_[c];
    return v;
  }

  // The same function as a type-3 spectrum: s3_B = (-1)^|B| (weight of B).
  [[nodiscard]] Spectrum to_spectrum3() const {
    Spectrum out(ground_, Model::Delay);
    const int n = ground_.size();
    std::size_t c = 0;
    out[0] = weights_[c++];
    for (int i = 0; i < n; ++i)
      out[mask_t{1} << i] = -weights_[c++];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        out[(mask_t{1} << i) | (mask_t{1} << j)] = weights_[c++];
    return out;
  }

  [[nodiscard]] const GroundSet &ground() const noexcept { return ground_; }

private:
  GroundSet ground_;
  std::vector<double> weights_;
};

} // namespace setsp
