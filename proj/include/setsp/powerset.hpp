#pragma once

// Ground sets, subset masks and the dense/sparse set-function containers.
//
// A subset A of N = {x_1, ..., x_n} is a bit mask with bit (i - 1) set iff
// x_i is in A. Unsigned integer order of the masks is then exactly the
// lexicographic subset order: {}, {x1}, {x2}, {x1,x2}, {x3}, ...

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace setsp {

using mask_t = std::uint64_t;

inline constexpr int kMaxDenseElements = 30;
inline constexpr int kMaxSparseElements = 62;

class GroundSet {
public:
  explicit GroundSet(int n) : n_(n) {
    if (n < 0 || n > kMaxSparseElements)
      throw std::invalid_argument("ground set size " + std::to_string(n) +
                                  " outside [0, " +
                                  std::to_string(kMaxSparseElements) + "]");
  }

  [[nodiscard]] int size() const noexcept { return n_; }
  [[nodiscard]] mask_t full_mask() const noexcept {
    return (mask_t{1} << n_) - 1;
  }
  // Number of subsets, 2^n.
  [[nodiscard]] std::uint64_t powerset_size() const noexcept {
    return mask_t{1} << n_;
  }
  [[nodiscard]] bool contains(mask_t a) const noexcept {
    return (a & ~full_mask()) == 0;
  }
  [[nodiscard]] bool dense_capable() const noexcept {
    return n_ <= kMaxDenseElements;
  }

  friend bool operator==(GroundSet, GroundSet) = default;

private:
  int n_;
};

struct SubsetIndex {
  mask_t mask = 0;

  friend auto operator<=>(SubsetIndex, SubsetIndex) = default;
};

[[nodiscard]] inline int cardinality(mask_t a) noexcept {
  return std::popcount(a);
}

[[nodiscard]] inline bool is_subset(mask_t a, mask_t b) noexcept {
  return (a & ~b) == 0;
}

// Parity (-1)^|a| as +1.0 / -1.0.
[[nodiscard]] inline double parity_sign(mask_t a) noexcept {
  return (std::popcount(a) & 1) ? -1.0 : 1.0;
}

[[nodiscard]] inline mask_t element_bit(int element) noexcept {
  return mask_t{1} << (element - 1);
}

inline void check_element(const GroundSet &g, int element) {
  if (element < 1 || element > g.size())
    throw std::out_of_range("element index " + std::to_string(element) +
                            " outside [1, " + std::to_string(g.size()) + "]");
}

namespace detail {
inline void check_mask(const GroundSet &g, mask_t a) {
  if (!g.contains(a))
    throw std::invalid_argument("subset mask " + std::to_string(a) +
                                " does not belong to a ground set of size " +
                                std::to_string(g.size()));
}
} // namespace detail

// Checked set algebra on masks of one ground set. A mask with bits outside
// the ground set is treated as coming from a different ground set.
[[nodiscard]] inline mask_t set_union(const GroundSet &g, mask_t a, mask_t b) {
  detail::check_mask(g, a);
  detail::check_mask(g, b);
  return a | b;
}
[[nodiscard]] inline mask_t set_intersection(const GroundSet &g, mask_t a,
                                             mask_t b) {
  detail::check_mask(g, a);
  detail::check_mask(g, b);
  return a & b;
}
[[nodiscard]] inline mask_t set_difference(const GroundSet &g, mask_t a,
                                           mask_t b) {
  detail::check_mask(g, a);
  detail::check_mask(g, b);
  return a & ~b;
}
[[nodiscard]] inline mask_t symmetric_difference(const GroundSet &g, mask_t a,
                                                 mask_t b) {
  detail::check_mask(g, a);
  detail::check_mask(g, b);
  return a ^ b;
}
[[nodiscard]] inline mask_t complement(const GroundSet &g, mask_t a) {
  detail::check_mask(g, a);
  return g.full_mask() & ~a;
}

// Orders subsets by (cardinality, mask), i.e. low frequencies first.
struct CardinalityOrder {
  bool operator()(mask_t a, mask_t b) const noexcept {
    const int ca = cardinality(a), cb = cardinality(b);
    return ca != cb ? ca < cb : a < b;
  }
};

[[nodiscard]] inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n)
    return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i)
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

// All B with |B| <= m, sorted by (cardinality, mask).
[[nodiscard]] inline std::vector<mask_t>
subsets_of_cardinality_at_most(const GroundSet &g, int m) {
  const int n = g.size();
  if (m < 0 || m > n)
    throw std::invalid_argument("cardinality bound " + std::to_string(m) +
                                " outside [0, " + std::to_string(n) + "]");
  std::vector<mask_t> out;
  std::uint64_t total = 0;
  for (int k = 0; k <= m; ++k)
    total += binomial(n, k);
  out.reserve(total);
  for (int k = 0; k <= m; ++k) {
    if (k == 0) {
      out.push_back(0);
      continue;
    }
    // Gosper's hack enumerates k-subsets in increasing mask order.
    mask_t x = (mask_t{1} << k) - 1;
    const mask_t limit = g.full_mask();
    while (true) {
      out.push_back(x);
      if (x == (limit & ~((mask_t{1} << (n - k)) - 1)))
        break;
      const mask_t c = x & (~x + 1);
      const mask_t r = x + c;
      x = (((r ^ x) >> 2) / c) | r;
    }
  }
  return out;
}

// Calls f(sub) for every sub of `set`, in increasing mask order.
template <class F> void for_each_subset(mask_t set, F &&f) {
  mask_t sub = 0;
  while (true) {
    f(sub);
    if (sub == set)
      break;
    sub = (sub - set) & set;
  }
}

// Dense set function: 2^n values indexed by subset mask.
class SetFunction {
public:
  explicit SetFunction(GroundSet g) : ground_(g) {
    check_dense(g);
    values_.assign(g.powerset_size(), 0.0);
  }
  SetFunction(GroundSet g, std::vector<double> values)
      : ground_(g), values_(std::move(values)) {
    check_dense(g);
    if (values_.size() != g.powerset_size())
      throw std::invalid_argument("set function needs " +
                                  std::to_string(g.powerset_size()) +
                                  " values, got " +
                                  std::to_string(values_.size()));
  }

  [[nodiscard]] const GroundSet &ground() const noexcept { return ground_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

  double &operator[](mask_t a) { return values_[a]; }
  double operator[](mask_t a) const { return values_[a]; }
  [[nodiscard]] double at(SubsetIndex a) const {
    detail::check_mask(ground_, a.mask);
    return values_[a.mask];
  }

  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::span<const double> values() const noexcept {
    return values_;
  }
  [[nodiscard]] const std::vector<double> &vector() const noexcept {
    return values_;
  }

  friend bool operator==(const SetFunction &, const SetFunction &) = default;

private:
  static void check_dense(const GroundSet &g) {
    if (!g.dense_capable())
      throw std::invalid_argument(
          "dense set functions support at most " +
          std::to_string(kMaxDenseElements) + " elements, got " +
          std::to_string(g.size()));
  }

  GroundSet ground_;
  std::vector<double> values_;
};

// Sparse set function; absent entries are zero.
class SparseSetFunction {
public:
  explicit SparseSetFunction(GroundSet g) : ground_(g) {}

  [[nodiscard]] const GroundSet &ground() const noexcept { return ground_; }
  [[nodiscard]] const std::map<mask_t, double> &entries() const noexcept {
    return entries_;
  }
  [[nodiscard]] std::size_t nonzeros() const noexcept {
    return entries_.size();
  }

  void set(mask_t a, double v) {
    detail::check_mask(ground_, a);
    entries_[a] = v;
  }
  [[nodiscard]] double get(mask_t a) const {
    const auto it = entries_.find(a);
    return it == entries_.end() ? 0.0 : it->second;
  }

  [[nodiscard]] SetFunction densify() const {
    SetFunction out(ground_);
    for (const auto &[a, v] : entries_)
      out[a] = v;
    return out;
  }

  // Keeps the entries with |value| > tolerance.
  [[nodiscard]] static SparseSetFunction from_dense(const SetFunction &s,
                                                    double tolerance = 0.0) {
    SparseSetFunction out(s.ground());
    for (mask_t a = 0; a < s.size(); ++a)
      if (std::abs(s[a]) > tolerance)
        out.entries_.emplace_hint(out.entries_.end(), a, s[a]);
    return out;
  }

  friend bool operator==(const SparseSetFunction &,
                         const SparseSetFunction &) = default;

private:
  GroundSet ground_;
  std::map<mask_t, double> entries_;
};

// The five shift models; 5 is the Walsh-Hadamard model.
enum class Model : int {
  Union = 1,               // x_i A = A u {x_i}
  Difference = 2,          // x_i A = A \ {x_i}
  Delay = 3,               // s_A -> s_{A \ {x_i}}
  Advance = 4,             // s_A -> s_{A u {x_i}}
  SymmetricDifference = 5, // x_i A = A xor {x_i}
};

inline constexpr Model kAllModels[] = {Model::Union, Model::Difference,
                                       Model::Delay, Model::Advance,
                                       Model::SymmetricDifference};

[[nodiscard]] inline Model model_from_int(int k) {
  if (k < 1 || k > 5)
    throw std::invalid_argument("model must be in 1..5, got " +
                                std::to_string(k));
  return static_cast<Model>(k);
}
[[nodiscard]] constexpr int to_int(Model m) noexcept {
  return static_cast<int>(m);
}

// Fourier coefficients of a set function, tagged with their model.
class Spectrum {
public:
  Spectrum(GroundSet g, Model model) : model_(model), coeffs_(g) {}
  Spectrum(Model model, SetFunction coeffs)
      : model_(model), coeffs_(std::move(coeffs)) {}

  [[nodiscard]] Model model() const noexcept { return model_; }
  [[nodiscard]] const GroundSet &ground() const noexcept {
    return coeffs_.ground();
  }
  [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }

  double &operator[](mask_t b) { return coeffs_[b]; }
  double operator[](mask_t b) const { return coeffs_[b]; }

  [[nodiscard]] std::span<double> values() noexcept { return coeffs_.values(); }
  [[nodiscard]] std::span<const double> values() const noexcept {
    return coeffs_.values();
  }
  [[nodiscard]] const SetFunction &as_set_function() const noexcept {
    return coeffs_;
  }

  friend bool operator==(const Spectrum &, const Spectrum &) = default;

private:
  Model model_;
  SetFunction coeffs_;
};

} // namespace setsp
