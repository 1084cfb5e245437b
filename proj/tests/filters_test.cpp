#include <gtest/gtest.h>

#include <bit>
#include <vector>

#include <Eigen/Dense>

#include "reference.hpp"
#include "setsp/filters.hpp"

using namespace setsp;

namespace {

SetFunction make(int n, std::vector<double> v) {
  return SetFunction(GroundSet(n), std::move(v));
}

Filter random_filter(Rng &rng, int n, std::size_t taps) {
  SparseSetFunction t{GroundSet(n)};
  const GroundSet g(n);
  for (std::size_t i = 0; i < taps; ++i)
    t.set(random_subset(rng, g), setsp::uniform(rng, -1.0, 1.0));
  return Filter(std::move(t));
}

SetFunction random_signal(Rng &rng, int n) {
  return SetFunction(GroundSet(n), ref::random_vec(rng, std::size_t{1} << n));
}

Eigen::VectorXd as_eigen(const SetFunction &s) {
  return Eigen::Map<const Eigen::VectorXd>(s.values().data(),
                                           static_cast<Eigen::Index>(s.size()));
}

double max_diff(const SetFunction &a, const SetFunction &b) {
  return ref::max_abs_diff(a.vector(), b.vector());
}

} // namespace

TEST(Filters, ShiftExamples) {
  const SetFunction s = make(2, {1, 2, 3, 4});
  EXPECT_EQ(shift(Model::Union, 1, s).vector(), (std::vector<double>{0, 3, 0, 7}));
  EXPECT_EQ(shift(Model::Delay, 1, s).vector(), (std::vector<double>{1, 1, 3, 3}));
  EXPECT_EQ(shift(Model::SymmetricDifference, 1, s).vector(),
            (std::vector<double>{2, 1, 4, 3}));
  EXPECT_EQ(shift(Model::Difference, 1, s).vector(), (std::vector<double>{3, 0, 7, 0}));
  EXPECT_EQ(shift(Model::Advance, 1, s).vector(), (std::vector<double>{2, 2, 4, 4}));
  EXPECT_THROW((void)shift(Model::Union, 3, s), std::out_of_range);
  EXPECT_THROW((void)shift(Model::Union, 0, s), std::out_of_range);
}

TEST(Filters, ShiftBySetExamples) {
  const SetFunction s = make(2, {1, 2, 3, 4});
  EXPECT_EQ(shift_by_set(Model::Union, 0, s), s);
  EXPECT_EQ(shift_by_set(Model::Advance, 0b11, s).vector(),
            (std::vector<double>{4, 4, 4, 4}));
  EXPECT_EQ(shift_by_set(Model::Union, 0b01, s), shift(Model::Union, 1, s));
}

TEST(Filters, ShiftBySetEqualsComposedShifts) {
  Rng rng(21);
  const int n = 6;
  for (const Model m : kAllModels)
    for (int trial = 0; trial < 10; ++trial) {
      const SetFunction s = random_signal(rng, n);
      const mask_t q = random_subset(rng, GroundSet(n));
      SetFunction fwd = s, bwd = s;
      for (int i = 1; i <= n; ++i)
        if (q & element_bit(i))
          fwd = shift(m, i, fwd);
      for (int i = n; i >= 1; --i)
        if (q & element_bit(i))
          bwd = shift(m, i, bwd);
      EXPECT_LT(max_diff(shift_by_set(m, q, s), fwd), 1e-12);
      EXPECT_LT(max_diff(fwd, bwd), 1e-12);
    }
}

TEST(Filters, ShiftsCommute) {
  Rng rng(22);
  const int n = 6;
  for (const Model m : kAllModels) {
    const SetFunction s = random_signal(rng, n);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        EXPECT_LT(max_diff(shift(m, i, shift(m, j, s)), shift(m, j, shift(m, i, s))),
                  1e-10);
  }
}

TEST(Filters, IdempotentAndInvolutiveShifts) {
  Rng rng(23);
  const SetFunction s = random_signal(rng, 5);
  for (int i = 1; i <= 5; ++i) {
    for (const Model m : {Model::Union, Model::Difference}) {
      const Eigen::MatrixXd p(shift_matrix(m, 5, i));
      EXPECT_EQ(p * p, p);
    }
    EXPECT_EQ(shift(Model::SymmetricDifference, i,
                    shift(Model::SymmetricDifference, i, s)),
              s);
  }
}

TEST(Filters, ConvolutionExamples) {
  SparseSetFunction h1{GroundSet(1)};
  h1.set(0, 1);
  h1.set(1, 1);
  EXPECT_EQ(convolve(Model::Union, Filter(h1), make(1, {1, 1})).vector(),
            (std::vector<double>{1, 3}));

  SparseSetFunction h3{GroundSet(2)};
  h3.set(0, 1);
  h3.set(1, 1);
  EXPECT_EQ(convolve(Model::Delay, Filter(h3), make(2, {1, 2, 3, 4})).vector(),
            (std::vector<double>{2, 3, 6, 7}));
  EXPECT_EQ(ref::convolve(1, 1, {1, 1}, {1, 1}), (ref::Vec{1, 3}));
  EXPECT_EQ(ref::convolve(3, 2, {1, 1, 0, 0}, {1, 2, 3, 4}), (ref::Vec{2, 3, 6, 7}));
}

TEST(Filters, IdentityFilter) {
  Rng rng(24);
  const SetFunction s = random_signal(rng, 5);
  const Filter id = Filter::identity(s.ground());
  for (const Model m : kAllModels)
    for (const auto path : {ConvolutionPath::Direct, ConvolutionPath::Spectral}) {
      const SetFunction out = convolve(m, id, s, path);
      EXPECT_LT(max_diff(out, s), 1e-12);
    }
  for (const Model m : kAllModels) {
    const FrequencyResponse fr = frequency_response(m, id);
    for (const double x : fr.values.values())
      EXPECT_EQ(x, 1.0);
  }
}

TEST(Filters, ConvolutionMatchesBruteForce) {
  Rng rng(25);
  for (const Model m : kAllModels)
    for (int n = 1; n <= 6; ++n)
      for (int trial = 0; trial < 4; ++trial) {
        const Filter h = random_filter(rng, n, 1 + trial * 3);
        const SetFunction s = random_signal(rng, n);
        const ref::Vec expect =
            ref::convolve(to_int(m), n, h.taps().densify().vector(), s.vector());
        for (const auto path : {ConvolutionPath::Direct, ConvolutionPath::Spectral,
                                ConvolutionPath::Auto})
          EXPECT_LT(ref::max_abs_diff(convolve(m, h, s, path).vector(), expect), 1e-9)
              << "model " << to_int(m) << " n " << n;
      }
}

TEST(Filters, ConvolutionTheorems) {
  Rng rng(26);
  for (const Model m : kAllModels)
    for (int n = 1; n <= 8; ++n)
      for (int trial = 0; trial < 3; ++trial) {
        const Filter h = random_filter(rng, n, 5);
        const SetFunction s = random_signal(rng, n);
        const SetFunction y(GroundSet(n),
                            ref::convolve(to_int(m), n, h.taps().densify().vector(),
                                          s.vector()));
        const Spectrum lhs = dsft(m, y);
        const Spectrum rhs = dsft(m, s);
        const FrequencyResponse fr = frequency_response(m, h);
        for (mask_t b = 0; b < lhs.size(); ++b)
          ASSERT_NEAR(lhs[b], fr.values[b] * rhs[b], 1e-9)
              << "model " << to_int(m) << " n " << n << " B " << b;
      }
}

TEST(Filters, FrequencyResponseFormula) {
  Rng rng(27);
  const int n = 5;
  for (const Model m : kAllModels) {
    const Filter h = random_filter(rng, n, 6);
    const FrequencyResponse fr = frequency_response(m, h);
    for (mask_t b = 0; b < 32; ++b) {
      double expect = 0;
      for (const auto &[x, hx] : h.taps().entries())
        if (m == Model::SymmetricDifference)
          expect += (std::popcount(x & b) % 2 ? -1.0 : 1.0) * hx;
        else if ((x & b) == 0)
          expect += hx;
      EXPECT_NEAR(fr.values[b], expect, 1e-12);
    }
  }
}

TEST(Filters, MovingAverageResponse) {
  const FrequencyResponse fr = frequency_response(Model::Union,
                                                  Filter::moving_average(GroundSet(3)));
  EXPECT_EQ(fr.values.vector(), (std::vector<double>{4, 3, 3, 2, 3, 2, 2, 1}));
  for (int n = 0; n <= 12; ++n) {
    const Filter h = Filter::moving_average(GroundSet(n));
    for (const Model m : {Model::Union, Model::Difference, Model::Delay, Model::Advance}) {
      const FrequencyResponse r = frequency_response(m, h);
      for (mask_t b = 0; b < r.values.size(); ++b)
        ASSERT_EQ(r.values[b], 1.0 + n - std::popcount(b));
    }
  }
}

TEST(Filters, ShiftInvariance) {
  Rng rng(28);
  for (const Model m : kAllModels)
    for (const int n : {1, 4, 8}) {
      const Filter h = random_filter(rng, n, 4);
      const SetFunction s = random_signal(rng, n);
      for (int i = 1; i <= n; ++i)
        EXPECT_LT(max_diff(shift(m, i, convolve(m, h, s)), convolve(m, h, shift(m, i, s))),
                  1e-10)
            << "model " << to_int(m) << " n " << n << " i " << i;
    }
}

TEST(Filters, PaperFilterMatrixExample) {
  const double a = 2, b = 3, c = 5, d = 7;
  SparseSetFunction t{GroundSet(3)};
  t.set(0b000, a);
  t.set(0b010, b);
  t.set(0b101, c);
  t.set(0b111, d);
  Eigen::MatrixXd expect(8, 8);
  // clang-format off
  expect << a, 0, 0,   0,   0, 0,   0,   0,
            0, a, 0,   0,   0, 0,   0,   0,
            b, 0, a+b, 0,   0, 0,   0,   0,
            0, b, 0,   a+b, 0, 0,   0,   0,
            0, 0, 0,   0,   a, 0,   0,   0,
            c, c, 0,   0,   c, a+c, 0,   0,
            0, 0, 0,   0,   b, 0,   a+b, 0,
            d, d, c+d, c+d, d, b+d, c+d, a+b+c+d;
  // clang-format on
  EXPECT_EQ(filter_matrix(Model::Union, Filter(t)), expect);
}

TEST(Filters, FilterMatrixExamples) {
  SparseSetFunction t{GroundSet(3)};
  t.set(0b001, 1.0);
  const Eigen::MatrixXd m3 = filter_matrix(Model::Delay, Filter(t));
  EXPECT_EQ(m3, Eigen::MatrixXd(shift_matrix(Model::Delay, 3, 1)));

  SparseSetFunction t5{GroundSet(3)};
  t5.set(0b101, 1.0);
  const Eigen::MatrixXd m5 = filter_matrix(Model::SymmetricDifference, Filter(t5));
  for (mask_t r = 0; r < 8; ++r)
    for (mask_t c = 0; c < 8; ++c)
      EXPECT_EQ(m5(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)),
                c == (r ^ 0b101) ? 1.0 : 0.0);
  EXPECT_THROW((void)filter_matrix(Model::Union, Filter::identity(GroundSet(11))),
               std::invalid_argument);
}

TEST(Filters, FilterMatrixMatchesConvolution) {
  Rng rng(29);
  for (const Model m : kAllModels)
    for (int n = 1; n <= 8; ++n) {
      const Filter h = random_filter(rng, n, 4);
      const SetFunction s = random_signal(rng, n);
      const Eigen::VectorXd y = filter_matrix(m, h) * as_eigen(s);
      const ref::Vec expect =
          ref::convolve(to_int(m), n, h.taps().densify().vector(), s.vector());
      for (std::size_t a = 0; a < expect.size(); ++a)
        ASSERT_NEAR(y(static_cast<Eigen::Index>(a)), expect[a], 1e-10)
            << "model " << to_int(m) << " n " << n;
    }
}

TEST(Filters, GroundMismatch) {
  const SetFunction s = make(2, {1, 2, 3, 4});
  EXPECT_THROW((void)convolve(Model::Delay, Filter::identity(GroundSet(3)), s),
               std::invalid_argument);
}
