#pragma once

// Shifts, filters and the five powerset convolutions.
//
//   model  shift by x on signal                      convolution (h * s)_A
//   1      s_A + s_{A\x} if x in A, else 0           sum_{Q u B = A} h_Q s_B
//   2      s_A + s_{A u x} if x not in A, else 0     sum_{Q c N\A} sum_{B c Q} h_Q s_{A u B}
//   3      s_{A\x}                                   sum_Q h_Q s_{A\Q}
//   4      s_{A u x}                                 sum_Q h_Q s_{A u Q}
//   5      s_{A xor x}                               sum_Q h_Q s_{A xor Q}
//
// Filters are diagonalized by the model's transform. Their frequency response
// is the type-1 transform of the taps for models 1-4 and the Walsh-Hadamard
// transform of the taps for model 5.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "setsp/powerset.hpp"
#include "setsp/transforms.hpp"

namespace setsp {

class Filter {
public:
  explicit Filter(SparseSetFunction taps) : taps_(std::move(taps)) {}

  [[nodiscard]] static Filter identity(const GroundSet &g) {
    SparseSetFunction t(g);
    t.set(0, 1.0);
    return Filter(std::move(t));
  }

  // h = {} + {x_1} + ... + {x_n}
  [[nodiscard]] static Filter moving_average(const GroundSet &g) {
    SparseSetFunction t(g);
    t.set(0, 1.0);
    for (int i = 1; i <= g.size(); ++i)
      t.set(element_bit(i), 1.0);
    return Filter(std::move(t));
  }

  [[nodiscard]] const GroundSet &ground() const noexcept {
    return taps_.ground();
  }
  [[nodiscard]] const SparseSetFunction &taps() const noexcept { return taps_; }

private:
  SparseSetFunction taps_;
};

struct FrequencyResponse {
  Model model;
  SetFunction values;
};

namespace detail {
inline void check_same_ground(const GroundSet &a, const GroundSet &b) {
  if (a != b)
    throw std::invalid_argument("ground set size mismatch: " +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
}
} // namespace detail

// Shift by element x_i (1-based).
[[nodiscard]] inline SetFunction shift(Model model, int element,
                                       const SetFunction &s) {
  check_element(s.ground(), element);
  const mask_t x = element_bit(element);
  SetFunction out(s.ground());
  const mask_t len = s.size();
  switch (model) {
  case Model::Union:
    for (mask_t a = 0; a < len; ++a)
      out[a] = (a & x) ? s[a] + s[a & ~x] : 0.0;
    break;
  case Model::Difference:
    for (mask_t a = 0; a < len; ++a)
      out[a] = (a & x) ? 0.0 : s[a] + s[a | x];
    break;
  case Model::Delay:
    for (mask_t a = 0; a < len; ++a)
      out[a] = s[a & ~x];
    break;
  case Model::Advance:
    for (mask_t a = 0; a < len; ++a)
      out[a] = s[a | x];
    break;
  case Model::SymmetricDifference:
    for (mask_t a = 0; a < len; ++a)
      out[a] = s[a ^ x];
    break;
  }
  return out;
}

// Shift by every element of q, using the closed forms for the q-fold shift.
[[nodiscard]] inline SetFunction shift_by_set(Model model, mask_t q,
                                              const SetFunction &s) {
  detail::check_mask(s.ground(), q);
  const mask_t full = s.ground().full_mask();
  SetFunction out(s.ground());
  const mask_t len = s.size();
  switch (model) {
  case Model::Union:
    for (mask_t a = 0; a < len; ++a) {
      if (!is_subset(q, a))
        continue;
      double acc = 0.0;
      for_each_subset(q, [&](mask_t sub) { acc += s[(a & ~q) | sub]; });
      out[a] = acc;
    }
    break;
  case Model::Difference:
    for (mask_t a = 0; a < len; ++a) {
      if (!is_subset(q, full & ~a))
        continue;
      double acc = 0.0;
      for_each_subset(q, [&](mask_t sub) { acc += s[a | sub]; });
      out[a] = acc;
    }
    break;
  case Model::Delay:
    for (mask_t a = 0; a < len; ++a)
      out[a] = s[a & ~q];
    break;
  case Model::Advance:
    for (mask_t a = 0; a < len; ++a)
      out[a] = s[a | q];
    break;
  case Model::SymmetricDifference:
    for (mask_t a = 0; a < len; ++a)
      out[a] = s[a ^ q];
    break;
  }
  return out;
}

[[nodiscard]] inline FrequencyResponse frequency_response(Model model,
                                                          const Filter &h) {
  const Model via = model == Model::SymmetricDifference
                        ? Model::SymmetricDifference
                        : Model::Union;
  Spectrum r = dsft(via, h.taps().densify());
  return {model, r.as_set_function()};
}

// Literal evaluation of the convolution sums.
[[nodiscard]] inline SetFunction convolve_direct(Model model, const Filter &h,
                                                 const SetFunction &s) {
  detail::check_same_ground(h.ground(), s.ground());
  const mask_t full = s.ground().full_mask();
  const mask_t len = s.size();
  SetFunction out(s.ground());
  for (const auto &[q, hq] : h.taps().entries()) {
    switch (model) {
    case Model::Union:
      // Q u B = A  <=>  Q c A and A\Q c B c A
      for (mask_t a = 0; a < len; ++a) {
        if (!is_subset(q, a))
          continue;
        double acc = 0.0;
        for_each_subset(q, [&](mask_t sub) { acc += s[(a & ~q) | sub]; });
        out[a] += hq * acc;
      }
      break;
    case Model::Difference:
      for (mask_t a = 0; a < len; ++a) {
        if (!is_subset(q, full & ~a))
          continue;
        double acc = 0.0;
        for_each_subset(q, [&](mask_t sub) { acc += s[a | sub]; });
        out[a] += hq * acc;
      }
      break;
    case Model::Delay:
      for (mask_t a = 0; a < len; ++a)
        out[a] += hq * s[a & ~q];
      break;
    case Model::Advance:
      for (mask_t a = 0; a < len; ++a)
        out[a] += hq * s[a | q];
      break;
    case Model::SymmetricDifference:
      for (mask_t a = 0; a < len; ++a)
        out[a] += hq * s[a ^ q];
      break;
    }
  }
  return out;
}

// Transform, multiply by the frequency response, transform back.
[[nodiscard]] inline SetFunction convolve_spectral(Model model,
                                                   const Filter &h,
                                                   const SetFunction &s) {
  detail::check_same_ground(h.ground(), s.ground());
  const FrequencyResponse fr = frequency_response(model, h);
  Spectrum spec = dsft(model, s);
  for (mask_t b = 0; b < spec.size(); ++b)
    spec[b] *= fr.values[b];
  return idsft(spec);
}

enum class ConvolutionPath { Auto, Direct, Spectral };

// Auto: model 2 always goes through the spectrum; the others evaluate the
// sums directly when the filter has at most n taps.
[[nodiscard]] inline SetFunction convolve(Model model, const Filter &h,
                                          const SetFunction &s,
                                          ConvolutionPath path =
                                              ConvolutionPath::Auto) {
  if (path == ConvolutionPath::Auto) {
    const bool direct =
        model != Model::Difference &&
        h.taps().nonzeros() <= static_cast<std::size_t>(s.ground().size());
    path = direct ? ConvolutionPath::Direct : ConvolutionPath::Spectral;
  }
  return path == ConvolutionPath::Direct ? convolve_direct(model, h, s)
                                         : convolve_spectral(model, h, s);
}

// 2x2 matrix of the elementary shift; phi(x_i) = I (x) M (x) I with M at the
// position of bit i-1.
[[nodiscard]] inline Kernel2x2 shift_kernel(Model model) {
  switch (model) {
  case Model::Union:
    return {{{{0, 0}, {1, 1}}}};
  case Model::Difference:
    return {{{{1, 1}, {0, 0}}}};
  case Model::Delay:
    return {{{{1, 0}, {1, 0}}}};
  case Model::Advance:
    return {{{{0, 1}, {0, 1}}}};
  case Model::SymmetricDifference:
    return {{{{0, 1}, {1, 0}}}};
  }
  throw std::invalid_argument("unknown model");
}

inline constexpr int kMaxFilterMatrixElements = 10;

[[nodiscard]] inline Eigen::SparseMatrix<double>
shift_matrix(Model model, int n, int element) {
  check_element(GroundSet(n), element);
  const Kernel2x2 k = shift_kernel(model);
  const int bit = element - 1;
  const mask_t len = mask_t{1} << n;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * len);
  for (mask_t r = 0; r < len; ++r) {
    const int rb = static_cast<int>((r >> bit) & 1);
    for (int cb = 0; cb < 2; ++cb) {
      const double v = k(rb, cb);
      if (v == 0.0)
        continue;
      const mask_t c = (r & ~(mask_t{1} << bit)) | (static_cast<mask_t>(cb) << bit);
      trips.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
    }
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(len),
                                static_cast<Eigen::Index>(len));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

// phi(h) = sum_X h_X phi(y_1) ... phi(y_t), X = {y_1, ..., y_t}. Oracle use.
[[nodiscard]] inline Eigen::MatrixXd filter_matrix(Model model,
                                                   const Filter &h) {
  const int n = h.ground().size();
  if (n > kMaxFilterMatrixElements)
    throw std::invalid_argument("filter matrices support n <= " +
                                std::to_string(kMaxFilterMatrixElements));
  const Eigen::Index len = Eigen::Index{1} << n;
  std::vector<Eigen::SparseMatrix<double>> shifts;
  for (int i = 1; i <= n; ++i)
    shifts.push_back(shift_matrix(model, n, i));

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(len, len);
  for (const auto &[x, hx] : h.taps().entries()) {
    Eigen::SparseMatrix<double> p(len, len);
    p.setIdentity();
    for (int i = 1; i <= n; ++i)
      if (x & element_bit(i))
        p = (p * shifts[static_cast<std::size_t>(i - 1)]).pruned();
    out += hx * Eigen::MatrixXd(p);
  }
  return out;
}

} // namespace setsp
