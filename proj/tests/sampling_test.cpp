#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "reference.hpp"
#include "setsp/sampling.hpp"

using namespace setsp;

namespace {

// Oracle evaluating a sparse type-4 spectrum lazily.
SetFunctionOracle sparse_oracle(const SparseSpectrum4 &spec) {
  return {spec.ground(), [spec](mask_t a) { return spec(a); }, true};
}

std::vector<mask_t> random_support(Rng &rng, const GroundSet &g, std::size_t k) {
  std::vector<mask_t> out;
  while (out.size() < k) {
    const mask_t b = random_subset(rng, g);
    if (std::find(out.begin(), out.end(), b) == out.end())
      out.push_back(b);
  }
  return out;
}

} // namespace

TEST(Sampling, SupportIsSortedAndRejectsDuplicates) {
  const SparseSupport s(GroundSet(3), {0b111, 0b001, 0b000, 0b110, 0b010});
  EXPECT_EQ(s.freqs(), (std::vector<mask_t>{0b000, 0b001, 0b010, 0b110, 0b111}));
  EXPECT_THROW(SparseSupport(GroundSet(3), {1, 2, 1}), std::invalid_argument);
  EXPECT_THROW(SparseSupport(GroundSet(3), {8}), std::invalid_argument);
}

TEST(Sampling, SamplingIndicesExamples) {
  EXPECT_EQ(sampling_indices(SparseSupport(GroundSet(4), {0})),
            (std::vector<mask_t>{0b1111}));
  EXPECT_EQ(sampling_indices(SparseSupport(GroundSet(2), {0, 0b01})),
            (std::vector<mask_t>{0b11, 0b10}));
  std::vector<mask_t> all(16);
  for (mask_t b = 0; b < 16; ++b)
    all[b] = b;
  std::vector<mask_t> idx = sampling_indices(SparseSupport(GroundSet(4), all));
  std::sort(idx.begin(), idx.end());
  EXPECT_EQ(idx, all);
}

TEST(Sampling, ReconstructExample) {
  SetFunction s{GroundSet(2)};
  s[0b11] = 2;
  s[0b10] = 5;
  const SetFunctionOracle o = SetFunctionOracle::from_dense(s);
  const SparseSpectrum4 spec = reconstruct(o, SparseSupport(GroundSet(2), {0, 0b01}));
  EXPECT_EQ(spec.coeffs(), (std::vector<double>{2, 3}));
  EXPECT_EQ(o.queries(), 2u);
}

TEST(Sampling, ReconstructConstant) {
  const SetFunction s(GroundSet(5), std::vector<double>(32, 4.5));
  const SetFunctionOracle o = SetFunctionOracle::from_dense(s);
  const SparseSpectrum4 spec = reconstruct(o, SparseSupport(GroundSet(5), {0}));
  EXPECT_EQ(spec.coeffs(), (std::vector<double>{4.5}));
}

TEST(Sampling, EvalSparseExamples) {
  const SparseSpectrum4 spec = SparseSpectrum4::from_pairs(GroundSet(2), {{0b01, 3}, {0, 2}});
  EXPECT_EQ(eval_sparse(spec, 0), 5.0);
  EXPECT_EQ(eval_sparse(spec, 0b01), 2.0);
  const SparseSpectrum4 empty = SparseSpectrum4::from_pairs(GroundSet(3), {});
  for (mask_t a = 0; a < 8; ++a)
    EXPECT_EQ(eval_sparse(empty, a), 0.0);
}

TEST(Sampling, EvalSparseMatchesDenseInverse) {
  Rng rng(51);
  const GroundSet g(8);
  const SparseSpectrum4 spec = random_sparse_spectrum4(g, 30, rng);
  const ref::Vec dense = ref::inverse(4, 8, spec.densify().as_set_function().vector());
  for (mask_t a = 0; a < 256; ++a)
    EXPECT_NEAR(eval_sparse(spec, a), dense[a], 1e-10);
}

TEST(Sampling, TriangularStructure) {
  Rng rng(52);
  for (int n = 1; n <= 12; ++n) {
    const GroundSet g(n);
    const std::size_t k = std::min<std::size_t>(40, g.powerset_size());
    const SparseSupport sup(g, random_support(rng, g, k));
    const Eigen::MatrixXd t = reconstruction_matrix(sup);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      EXPECT_EQ(t(i, i), 1.0);
      for (Eigen::Index j = i + 1; j < t.cols(); ++j)
        EXPECT_EQ(t(i, j), 0.0);
    }
  }
}

TEST(Sampling, MatrixIsInverseTransformSubmatrix) {
  Rng rng(53);
  for (int n = 1; n <= 10; ++n) {
    const GroundSet g(n);
    const std::size_t k = std::min<std::size_t>(25, g.powerset_size());
    const SparseSupport sup(g, random_support(rng, g, k));
    const Eigen::MatrixXd t = reconstruction_matrix(sup);
    const auto rows = sampling_indices(sup);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        // (DSFT4^-1)_{A,B} = [A n B = {}] from the inverse sum
        const double entry = (rows[i] & sup.freqs()[j]) == 0 ? 1.0 : 0.0;
        ASSERT_EQ(t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), entry);
      }
  }
}

TEST(Sampling, ExactRecovery) {
  Rng rng(54);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + trial * 16 / 9;
    const GroundSet g(n);
    const std::size_t k = std::min<std::size_t>(200, g.powerset_size());
    const SparseSpectrum4 truth = random_sparse_spectrum4(g, k, rng);
    const SetFunctionOracle o = sparse_oracle(truth);
    const SparseSpectrum4 got = reconstruct(o, truth.support());
    EXPECT_EQ(o.queries(), k);
    ASSERT_EQ(got.support().freqs(), truth.support().freqs());
    for (std::size_t i = 0; i < k; ++i)
      EXPECT_LE(std::abs(got.coeffs()[i] - truth.coeffs()[i]),
                1e-8 * std::max(1.0, std::abs(truth.coeffs()[i])))
          << "n " << n << " i " << i;
  }
}

TEST(Sampling, ApproximateOracleMatchesOnQueriedSets) {
  Rng rng(55);
  const GroundSet g(6);
  const SetFunction s(g, ref::random_vec(rng, 64));
  const SetFunctionOracle o = SetFunctionOracle::from_dense(s);
  const SparseSupport sup(g, random_support(rng, g, 12));
  const SparseSpectrum4 got = reconstruct(o, sup);
  for (const mask_t a : sampling_indices(sup))
    EXPECT_NEAR(got(a), s[a], 1e-12);
}

TEST(Sampling, SelectSupportExamples) {
  const GroundSet g(4);
  const SparseSpectrum4 one =
      SparseSpectrum4::from_pairs(g, {{0b0011, 2.0}, {0b1000, -1.0}, {0b0100, 0.5}});
  const std::vector<Spectrum> single = {one.densify()};
  EXPECT_EQ(select_support(single, 3).freqs(), one.support().freqs());

  Spectrum a(g, Model::Advance), b(g, Model::Advance);
  a[0b0100] = 1.0;
  b[0b0010] = -1.0;
  const std::vector<Spectrum> tie = {a, b};
  EXPECT_EQ(select_support(tie, 1).freqs(), (std::vector<mask_t>{0b0010}));

  // cardinality beats mask in the tie rule
  Spectrum c(g, Model::Advance), d(g, Model::Advance);
  c[0b0011] = 1.0;
  d[0b1000] = 1.0;
  const std::vector<Spectrum> tie2 = {c, d};
  EXPECT_EQ(select_support(tie2, 1).freqs(), (std::vector<mask_t>{0b1000}));
}

TEST(Sampling, SelectSupportValidation) {
  const std::vector<Spectrum> none;
  EXPECT_THROW((void)select_support(none, 1), std::invalid_argument);
  const std::vector<Spectrum> wrong = {Spectrum(GroundSet(3), Model::Delay)};
  EXPECT_THROW((void)select_support(wrong, 1), std::invalid_argument);
  const std::vector<Spectrum> mixed = {Spectrum(GroundSet(3), Model::Advance),
                                       Spectrum(GroundSet(4), Model::Advance)};
  EXPECT_THROW((void)select_support(mixed, 1), std::invalid_argument);
  const std::vector<Spectrum> ok = {Spectrum(GroundSet(2), Model::Advance)};
  EXPECT_THROW((void)select_support(ok, 5), std::invalid_argument);
}

TEST(Sampling, SelectSupportRanksByMeanMagnitude) {
  Rng rng(56);
  const GroundSet g(6);
  std::vector<Spectrum> training;
  for (int t = 0; t < 5; ++t) {
    Spectrum s(g, Model::Advance);
    for (mask_t b = 0; b < 64; ++b)
      s[b] = setsp::uniform(rng, -1, 1);
    training.push_back(s);
  }
  std::vector<double> mean(64, 0.0);
  for (const auto &s : training)
    for (mask_t b = 0; b < 64; ++b)
      mean[b] += std::abs(s[b]) / 5.0;
  const SparseSupport sup = select_support(training, 10);
  double weakest = 1e9;
  for (const mask_t b : sup.freqs())
    weakest = std::min(weakest, mean[b]);
  int above = 0;
  for (mask_t b = 0; b < 64; ++b)
    above += mean[b] > weakest;
  EXPECT_EQ(above, 9);
}

TEST(Sampling, CapturedMassFraction) {
  const GroundSet g(2);
  Spectrum s(g, Model::Advance);
  s[0] = 3;
  s[1] = 4;
  EXPECT_DOUBLE_EQ(captured_mass_fraction(s, SparseSupport(g, {1})), 16.0 / 25.0);
  EXPECT_DOUBLE_EQ(captured_mass_fraction(s, SparseSupport(g, {0, 1})), 1.0);
}

TEST(Sampling, GeneratorsAreDeterministic) {
  const GroundSet g(20);
  Rng r1(9), r2(9);
  const SparseSpectrum4 a = random_sparse_spectrum4(g, 50, r1);
  const SparseSpectrum4 b = random_sparse_spectrum4(g, 50, r2);
  EXPECT_EQ(a.support().freqs(), b.support().freqs());
  EXPECT_EQ(a.coeffs(), b.coeffs());
  Rng r3(1);
  EXPECT_EQ(random_sparse_spectrum4(g, 0, r3).support().size(), 0u);

  Rng p1(3), p2(3);
  const BidderPool pa = make_bidder_pool(g, 100, p1);
  const BidderPool pb = make_bidder_pool(g, 100, p2);
  EXPECT_EQ(pa.freqs, pb.freqs);
  EXPECT_EQ(draw_bidder(pa, p1).coeffs(), draw_bidder(pb, p2).coeffs());
}

TEST(Sampling, QuadraticModelFitsQuadraticExactly) {
  Rng rng(57);
  const int n = 6;
  const GroundSet g(n);
  std::vector<double> w(QuadraticModel::feature_count(n));
  for (double &x : w)
    x = setsp::uniform(rng, -1, 1);
  const QuadraticModel truth(g, w);
  std::vector<RegressionSample> samples;
  for (mask_t a = 0; a < 64; ++a)
    samples.push_back({a, truth(a)});
  const QuadraticModel fit = QuadraticModel::fit(g, samples);
  for (mask_t a = 0; a < 64; ++a)
    EXPECT_NEAR(fit(a), truth(a), 1e-10);
  const ref::Vec dense = ref::inverse(3, n, fit.to_spectrum3().as_set_function().vector());
  for (mask_t a = 0; a < 64; ++a)
    EXPECT_NEAR(dense[a], truth(a), 1e-10);
}
