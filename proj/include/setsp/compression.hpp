#pragma once

// Band-limited approximation of set functions that are only available
// through an (expensive) evaluation oracle.
//
// Model 4 coefficients can be queried directly:
//   s4_B = sum_{C c B} (-1)^|C| s_{(N\B) u C}
// which costs 2^|B| evaluations near the top of the lattice. For |B| <= 2 this
// is s_N, s_{N\x} - s_N and s_{N\{x,y}} - s_{N\x} - s_{N\y} + s_N. The
// general-|B| form follows from the type-4 closed form.
//
// Model 5 coefficients have no such shortcut and are fitted by least squares
// on random samples instead.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "setsp/coverage.hpp"
#include "setsp/powerset.hpp"
#include "setsp/random.hpp"
#include "setsp/transforms.hpp"

namespace setsp {

inline constexpr std::uint64_t kDefaultErrorProbes = 1'000'000;

// Deterministic evaluator A -> s_A with an evaluation counter.
class SetFunctionOracle {
public:
  using Evaluator = std::function<double(mask_t)>;

  SetFunctionOracle(GroundSet g, Evaluator f, bool thread_safe = false)
      : ground_(g), eval_(std::move(f)), thread_safe_(thread_safe),
        counter_(std::make_unique<std::atomic<std::uint64_t>>(0)) {}

  [[nodiscard]] static SetFunctionOracle from_dense(SetFunction s) {
    const GroundSet g = s.ground();
    auto data = std::make_shared<const SetFunction>(std::move(s));
    return {g, [data](mask_t a) { return (*data)[a]; }, true};
  }

  [[nodiscard]] static SetFunctionOracle from_gaussian(GaussianModel m) {
    const GroundSet g = m.ground();
    auto model = std::make_shared<const GaussianModel>(std::move(m));
    return {g, [model](mask_t a) { return model->entropy(a); }, true};
  }

  [[nodiscard]] double query(mask_t a) const {
    detail::check_mask(ground_, a);
    counter_->fetch_add(1, std::memory_order_relaxed);
    return eval_(a);
  }

  [[nodiscard]] const GroundSet &ground() const noexcept { return ground_; }
  [[nodiscard]] bool thread_safe() const noexcept { return thread_safe_; }
  [[nodiscard]] std::uint64_t queries() const noexcept {
    return counter_->load(std::memory_order_relaxed);
  }

private:
  GroundSet ground_;
  Evaluator eval_;
  bool thread_safe_;
  std::unique_ptr<std::atomic<std::uint64_t>> counter_;
};

// Caches evaluations so that each distinct subset hits the oracle once.
class MemoizedOracle {
public:
  explicit MemoizedOracle(const SetFunctionOracle &base) : base_(&base) {}

  [[nodiscard]] double query(mask_t a) {
    std::lock_guard lock(mu_);
    ++requests_;
    if (const auto it = memo_.find(a); it != memo_.end())
      return it->second;
    const double v = base_->query(a);
    memo_.emplace(a, v);
    return v;
  }

  [[nodiscard]] const GroundSet &ground() const noexcept {
    return base_->ground();
  }
  [[nodiscard]] std::uint64_t requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }
  [[nodiscard]] std::uint64_t distinct() const {
    std::lock_guard lock(mu_);
    return memo_.size();
  }

private:
  const SetFunctionOracle *base_;
  mutable std::mutex mu_;
  std::unordered_map<mask_t, double> memo_;
  std::uint64_t requests_ = 0;
};

template <class O>
concept QueryOracle = requires(O &o, mask_t a) {
  { o.query(a) } -> std::convertible_to<double>;
  { o.ground() } -> std::convertible_to<GroundSet>;
};

// s4_B from 2^|B| evaluations at supersets of N\B.
template <QueryOracle O>
[[nodiscard]] double dsft4_coefficient_by_queries(O &oracle, mask_t b) {
  const GroundSet g = oracle.ground();
  detail::check_mask(g, b);
  const mask_t top = g.full_mask() & ~b;
  double acc = 0.0;
  for_each_subset(b, [&](mask_t c) {
    acc += parity_sign(c) * static_cast<double>(oracle.query(top | c));
  });
  return acc;
}

// Sparse spectrum of one model, evaluated through the lazy basis entries.
class BandlimitedApprox {
public:
  BandlimitedApprox(GroundSet g, Model model, std::vector<mask_t> support,
                    std::vector<double> coeffs)
      : ground_(g), model_(model), support_(std::move(support)),
        coeffs_(std::move(coeffs)) {
    if (support_.size() != coeffs_.size())
      throw std::invalid_argument("support and coefficient counts differ");
    std::vector<mask_t> sorted = support_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("band-limited support has duplicate entries");
    for (const mask_t b : support_)
      detail::check_mask(ground_, b);
  }

  [[nodiscard]] const GroundSet &ground() const noexcept { return ground_; }
  [[nodiscard]] Model model() const noexcept { return model_; }
  [[nodiscard]] const std::vector<mask_t> &support() const noexcept {
    return support_;
  }
  [[nodiscard]] const std::vector<double> &coeffs() const noexcept {
    return coeffs_;
  }

  [[nodiscard]] double operator()(mask_t a) const {
    const int n = ground_.size();
    double v = 0.0;
    for (std::size_t k = 0; k < support_.size(); ++k)
      v += coeffs_[k] * fourier_basis_entry(model_, n, support_[k], a);
    return v;
  }

private:
  GroundSet ground_;
  Model model_;
  std::vector<mask_t> support_;
  std::vector<double> coeffs_;
};

// s'_A = sum_{B in support} s_B f^B_A
[[nodiscard]] inline double eval_bandlimited(const BandlimitedApprox &approx,
                                             mask_t a) {
  detail::check_mask(approx.ground(), a);
  return approx(a);
}

// Keeps the coefficients with |B| <= m of a dense spectrum.
[[nodiscard]] inline BandlimitedApprox bandlimit(const Spectrum &spec, int m) {
  std::vector<mask_t> support = subsets_of_cardinality_at_most(spec.ground(), m);
  std::vector<double> coeffs;
  coeffs.reserve(support.size());
  for (const mask_t b : support)
    coeffs.push_back(spec[b]);
  return {spec.ground(), spec.model(), std::move(support), std::move(coeffs)};
}

struct CompressionStats {
  std::uint64_t requested = 0; // evaluations asked for before the memo
  std::uint64_t distinct = 0;  // evaluations that reached the oracle
};

// Model-4 coefficients for all |B| <= m, read off the oracle.
[[nodiscard]] inline BandlimitedApprox
compress_band(const SetFunctionOracle &oracle, int m,
              CompressionStats *stats = nullptr) {
  const GroundSet g = oracle.ground();
  std::vector<mask_t> support = subsets_of_cardinality_at_most(g, m);
  MemoizedOracle memo(oracle);
  std::vector<double> coeffs;
  coeffs.reserve(support.size());
  for (const mask_t b : support)
    coeffs.push_back(dsft4_coefficient_by_queries(memo, b));
  if (stats)
    *stats = {memo.requests(), memo.distinct()};
  return {g, Model::Advance, std::move(support), std::move(coeffs)};
}

struct RegressionSample {
  mask_t subset;
  double value;
};

// Least-squares model-5 coefficients on `support` from samples of s:
// argmin_r || s_A - (WHT^-1)_{A,B} r ||_2, minimum-norm if rank deficient.
// The design is solved with +-1 entries and rescaled by 2^n afterwards.
[[nodiscard]] inline BandlimitedApprox
wht_regression(const GroundSet &g, std::span<const RegressionSample> samples,
               std::vector<mask_t> support, double *residual_norm = nullptr) {
  if (samples.empty())
    throw std::invalid_argument("regression needs at least one sample");
  {
    std::unordered_set<mask_t> seen;
    for (const auto &smp : samples) {
      detail::check_mask(g, smp.subset);
      if (!seen.insert(smp.subset).second)
        throw std::invalid_argument("duplicate sample subset " +
                                    std::to_string(smp.subset));
    }
  }
  const auto rows = static_cast<Eigen::Index>(samples.size());
  const auto cols = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const mask_t a = samples[static_cast<std::size_t>(i)].subset;
    rhs(i) = samples[static_cast<std::size_t>(i)].value;
    for (Eigen::Index j = 0; j < cols; ++j)
      design(i, j) = parity_sign(a & support[static_cast<std::size_t>(j)]);
  }
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  const Eigen::VectorXd x = cod.solve(rhs);
  if (residual_norm)
    *residual_norm = (design * x - rhs).norm();
  std::vector<double> coeffs(static_cast<std::size_t>(cols));
  for (Eigen::Index j = 0; j < cols; ++j)
    coeffs[static_cast<std::size_t>(j)] = std::ldexp(x(j), g.size());
  return {g, Model::SymmetricDifference, std::move(support), std::move(coeffs)};
}

// p distinct uniformly random subsets with their oracle values.
[[nodiscard]] inline std::vector<RegressionSample>
draw_regression_samples(const SetFunctionOracle &oracle, std::uint64_t p,
                        Rng &rng) {
  const GroundSet g = oracle.ground();
  if (g.size() < 64 && p > g.powerset_size())
    throw std::invalid_argument("cannot draw more distinct samples than subsets");
  std::unordered_set<mask_t> seen;
  std::vector<RegressionSample> out;
  out.reserve(p);
  while (out.size() < p) {
    const mask_t a = random_subset(rng, g);
    if (seen.insert(a).second)
      out.push_back({a, oracle.query(a)});
  }
  return out;
}

// ||s_C - s'_C|| / ||s_C|| over m_samples uniform subsets drawn with
// replacement from a seeded mt19937_64.
template <class Approx>
  requires std::invocable<const Approx &, mask_t>
[[nodiscard]] double estimate_relative_error(const SetFunctionOracle &oracle,
                                             const Approx &approx,
                                             std::uint64_t m_samples,
                                             std::uint64_t seed) {
  if (m_samples == 0)
    throw std::invalid_argument("need at least one probe subset");
  Rng rng(seed);
  double num = 0.0, den = 0.0;
  for (std::uint64_t i = 0; i < m_samples; ++i) {
    const mask_t a = random_subset(rng, oracle.ground());
    const double s = oracle.query(a);
    const double d = s - static_cast<double>(approx(a));
    num += d * d;
    den += s * s;
  }
  if (den == 0.0)
    throw std::domain_error("relative error undefined: all probed values are zero");
  return std::sqrt(num / den);
}

// Exact ||s - s'|| / ||s|| over all subsets.
template <class Approx>
  requires std::invocable<const Approx &, mask_t>
[[nodiscard]] double exhaustive_relative_error(const SetFunction &s,
                                               const Approx &approx) {
  double num = 0.0, den = 0.0;
  for (mask_t a = 0; a < s.size(); ++a) {
    const double d = s[a] - static_cast<double>(approx(a));
    num += d * d;
    den += s[a] * s[a];
  }
  if (den == 0.0)
    throw std::domain_error("relative error undefined for the zero function");
  return std::sqrt(num / den);
}

} // namespace setsp
