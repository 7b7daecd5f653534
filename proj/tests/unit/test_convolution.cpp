#include <gtest/gtest.h>

#include <random>

#include "coagfrag/convolution.h"
#include "oracles.h"

namespace coagfrag {
namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(n);
  for (auto& x : a) x = u(rng);
  return a;
}

TEST(Convolution, DirectMatchesBruteForce) {
  for (std::size_t n : {1u, 2u, 7u, 64u, 257u}) {
    auto a = random_vector(n, static_cast<unsigned>(n));
    auto expected = oracle::convolve_brute(a, a);
    std::vector<double> out(n);
    self_convolution_direct(a, out);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(out[k], expected[k], 1e-12 * (1.0 + expected[k]));
  }
}

TEST(Convolution, FftMatchesDirect) {
  for (std::size_t n : {3u, 100u, 1000u, 5000u}) {
    auto a = random_vector(n, 42u + static_cast<unsigned>(n));
    std::vector<double> direct(n), fast(n);
    self_convolution_direct(a, direct);
    FftSelfConvolver conv(n);
    conv.convolve(a, fast);
    double scale = 0.0;
    for (double v : direct) scale = std::max(scale, v);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(fast[k], direct[k], 1e-10 * scale);
  }
}

TEST(Convolution, CrossConvolutionAccumulates) {
  for (auto [na, nb] : {std::pair<std::size_t, std::size_t>{5, 9}, {200, 300}}) {
    auto a = random_vector(na, 1), b = random_vector(nb, 2);
    auto expected = oracle::convolve_brute(a, b);
    std::vector<double> out(expected.size(), 1.0);
    accumulate_cross_convolution(a, b, 0.5, out);
    for (std::size_t k = 0; k < out.size(); ++k) {
      EXPECT_NEAR(out[k], 1.0 + 0.5 * expected[k], 1e-10 * (1.0 + expected[k]));
    }
  }
}

TEST(Convolution, PathResolution) {
  EXPECT_EQ(resolve_path(ConvolutionPath::automatic, 16), ConvolutionPath::direct);
  EXPECT_EQ(resolve_path(ConvolutionPath::automatic, 100000), ConvolutionPath::fft);
  EXPECT_EQ(resolve_path(ConvolutionPath::direct, 100000), ConvolutionPath::direct);
}

}  // namespace
}  // namespace coagfrag
