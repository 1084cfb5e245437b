#pragma once

// Discrete set Fourier transforms for the five shift models.
//
// Every transform is the n-fold Kronecker power of a 2x2 kernel, so the fast
// algorithm runs n stages of 2^(n-1) butterflies; stage i pairs the indices
// that differ in bit i-1. Kernels (rows = output bit, columns = input bit):
//
//   model  forward            inverse
//   1      [1 1; 1  0]        [0 1; 1 -1]
//   2      [1 1; 0 -1]        [1 1; 0 -1]
//   3      [1 0; 1 -1]        [1 0; 1 -1]
//   4      [0 1; 1 -1]        [1 1; 1  0]
//   5      [1 1; 1 -1]        1/2 [1 1; 1 -1]

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "setsp/powerset.hpp"

namespace setsp {

enum class Direction { Forward, Inverse };

struct Kernel2x2 {
  std::array<std::array<double, 2>, 2> m;
  double scale = 1.0;

  [[nodiscard]] double operator()(int row, int col) const {
    return scale * m[row][col];
  }
};

[[nodiscard]] inline Kernel2x2 transform_kernel(Model model, Direction dir) {
  const bool fwd = dir == Direction::Forward;
  switch (model) {
  case Model::Union:
    return fwd ? Kernel2x2{{{{1, 1}, {1, 0}}}} : Kernel2x2{{{{0, 1}, {1, -1}}}};
  case Model::Difference:
    return Kernel2x2{{{{1, 1}, {0, -1}}}};
  case Model::Delay:
    return Kernel2x2{{{{1, 0}, {1, -1}}}};
  case Model::Advance:
    return fwd ? Kernel2x2{{{{0, 1}, {1, -1}}}} : Kernel2x2{{{{1, 1}, {1, 0}}}};
  case Model::SymmetricDifference:
    return fwd ? Kernel2x2{{{{1, 1}, {1, -1}}}}
               : Kernel2x2{{{{1, 1}, {1, -1}}}, 0.5};
  }
  throw std::invalid_argument("unknown model");
}

struct TransformStats {
  std::uint64_t additions = 0; // additions and subtractions, negations excluded
};

namespace detail {

inline void check_power_of_two(std::size_t len) {
  if (len == 0 || (len & (len - 1)) != 0)
    throw std::invalid_argument("signal length " + std::to_string(len) +
                                " is not a power of two");
}

// Applies `bf(lo, hi)` to every index pair differing in one bit, stage by
// stage with ascending bit. Returns the number of butterflies executed.
template <class Butterfly>
std::uint64_t run_stages(std::span<double> v, Butterfly bf) {
  const std::size_t len = v.size();
  std::uint64_t butterflies = 0;
  double *data = v.data();
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t base = 0; base < len; base += 2 * h) {
      double *lo = data + base;
      double *hi = lo + h;
      for (std::size_t j = 0; j < h; ++j)
        bf(lo[j], hi[j]);
      butterflies += h;
    }
  }
  return butterflies;
}

// Butterflies, one per distinct kernel. `a` has the bit clear, `b` set.
struct SumFirst { // [1 1; 1 0]
  void operator()(double &a, double &b) const noexcept {
    const double t = a;
    a = a + b;
    b = t;
  }
};
struct SumNegate { // [1 1; 0 -1]
  void operator()(double &a, double &b) const noexcept {
    a = a + b;
    b = -b;
  }
};
struct KeepDifference { // [1 0; 1 -1]
  void operator()(double &a, double &b) const noexcept { b = a - b; }
};
struct SwapDifference { // [0 1; 1 -1]
  void operator()(double &a, double &b) const noexcept {
    const double t = a;
    a = b;
    b = t - b;
  }
};
struct Hadamard { // [1 1; 1 -1]
  void operator()(double &a, double &b) const noexcept {
    const double t = a;
    a = t + b;
    b = t - b;
  }
};

} // namespace detail

// In-place fast transform of a length-2^n vector.
inline TransformStats dsft_inplace(Model model, Direction dir,
                                   std::span<double> v) {
  detail::check_power_of_two(v.size());
  const bool fwd = dir == Direction::Forward;
  TransformStats st;
  switch (model) {
  case Model::Union:
    st.additions = fwd ? detail::run_stages(v, detail::SumFirst{})
                       : detail::run_stages(v, detail::SwapDifference{});
    break;
  case Model::Difference:
    st.additions = detail::run_stages(v, detail::SumNegate{});
    break;
  case Model::Delay:
    st.additions = detail::run_stages(v, detail::KeepDifference{});
    break;
  case Model::Advance:
    st.additions = fwd ? detail::run_stages(v, detail::SwapDifference{})
                       : detail::run_stages(v, detail::SumFirst{});
    break;
  case Model::SymmetricDifference:
    st.additions = 2 * detail::run_stages(v, detail::Hadamard{});
    if (!fwd) {
      // single scaling pass by 2^-n; exact since it is a power of two
      const double s = std::ldexp(1.0, -std::countr_zero(v.size()));
      for (double &x : v)
        x *= s;
    }
    break;
  }
  return st;
}

[[nodiscard]] inline Spectrum dsft(Model model, const SetFunction &s,
                                   TransformStats *stats = nullptr) {
  Spectrum out(model, s);
  const auto st = dsft_inplace(model, Direction::Forward, out.values());
  if (stats)
    *stats = st;
  return out;
}

[[nodiscard]] inline SetFunction idsft(const Spectrum &spec,
                                       TransformStats *stats = nullptr) {
  SetFunction out = spec.as_set_function();
  const auto st = dsft_inplace(spec.model(), Direction::Inverse, out.values());
  if (stats)
    *stats = st;
  return out;
}

[[nodiscard]] inline SetFunction idsft(Model model, const Spectrum &spec,
                                       TransformStats *stats = nullptr) {
  if (spec.model() != model)
    throw std::invalid_argument("spectrum has model " +
                                std::to_string(to_int(spec.model())) +
                                ", inverse requested for model " +
                                std::to_string(to_int(model)));
  return idsft(spec, stats);
}

// Entry (row, col) of the 2^n x 2^n transform matrix from its closed form.
// Forward matrices have rows indexed by frequency B and columns by subset A;
// inverse matrices the other way round.
[[nodiscard]] inline double dsft_entry(Model model, Direction dir, int n,
                                       mask_t row, mask_t col) {
  const mask_t full = (mask_t{1} << n) - 1;
  if (dir == Direction::Forward) {
    const mask_t b = row, a = col;
    switch (model) {
    case Model::Union:
      return (a & b) == 0 ? 1.0 : 0.0;
    case Model::Difference:
      return is_subset(b, a) ? parity_sign(a & b) : 0.0;
    case Model::Delay:
      return is_subset(a, b) ? parity_sign(a) : 0.0;
    case Model::Advance:
      return (a | b) == full ? parity_sign(a & b) : 0.0;
    case Model::SymmetricDifference:
      return parity_sign(a & b);
    }
  } else {
    const mask_t a = row, b = col;
    switch (model) {
    case Model::Union:
      return (a | b) == full ? parity_sign(a & b) : 0.0;
    case Model::Difference:
      return is_subset(a, b) ? parity_sign(a & b) : 0.0;
    case Model::Delay:
      return is_subset(b, a) ? parity_sign(b) : 0.0;
    case Model::Advance:
      return (a & b) == 0 ? 1.0 : 0.0;
    case Model::SymmetricDifference:
      return std::ldexp(parity_sign(a & b), -n);
    }
  }
  throw std::invalid_argument("unknown model");
}

// f^B_A: entry A of the Fourier basis vector for frequency B (column B of the
// inverse transform), O(1) per entry.
[[nodiscard]] inline double fourier_basis_entry(Model model, int n, mask_t b,
                                                mask_t a) {
  return dsft_entry(model, Direction::Inverse, n, a, b);
}

[[nodiscard]] inline SetFunction fourier_basis_vector(Model model,
                                                      const GroundSet &g,
                                                      mask_t b) {
  detail::check_mask(g, b);
  SetFunction f(g);
  for (mask_t a = 0; a < f.size(); ++a)
    f[a] = fourier_basis_entry(model, g.size(), b, a);
  return f;
}

inline constexpr int kMaxMatrixElements = 12;

// Dense transform matrix from the closed-form entries. Oracle use only.
[[nodiscard]] inline Eigen::MatrixXd dsft_matrix(Model model, Direction dir,
                                                 int n) {
  if (n < 0 || n > kMaxMatrixElements)
    throw std::invalid_argument("dense transform matrices support n <= " +
                                std::to_string(kMaxMatrixElements));
  const Eigen::Index len = Eigen::Index{1} << n;
  Eigen::MatrixXd m(len, len);
  for (Eigen::Index c = 0; c < len; ++c)
    for (Eigen::Index r = 0; r < len; ++r)
      m(r, c) = dsft_entry(model, dir, n, static_cast<mask_t>(r),
                           static_cast<mask_t>(c));
  return m;
}

[[nodiscard]] inline Eigen::MatrixXd kronecker(const Eigen::MatrixXd &a,
                                               const Eigen::MatrixXd &b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Same matrix built as the explicit n-fold Kronecker power of the kernel.
[[nodiscard]] inline Eigen::MatrixXd dsft_matrix_kronecker(Model model,
                                                           Direction dir,
                                                           int n) {
  if (n < 0 || n > kMaxMatrixElements)
    throw std::invalid_argument("dense transform matrices support n <= " +
                                std::to_string(kMaxMatrixElements));
  const Kernel2x2 k = transform_kernel(model, dir);
  Eigen::Matrix2d k2;
  k2 << k(0, 0), k(0, 1), k(1, 0), k(1, 1);
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int i = 0; i < n; ++i)
    out = kronecker(k2, out);
  return out;
}

} // namespace setsp
