#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace coagfrag {

enum class ConvolutionPath { automatic, direct, fft };

// c_k = sum_{j=0}^{k} a_j a_{k-j} for k < out.size().
void self_convolution_direct(std::span<const double> a, std::span<double> out);

// Reusable FFT workspace for repeated self-convolutions of a fixed length.
class FftSelfConvolver {
 public:
  explicit FftSelfConvolver(std::size_t length);
  ~FftSelfConvolver();
  FftSelfConvolver(const FftSelfConvolver&) = delete;
  FftSelfConvolver& operator=(const FftSelfConvolver&) = delete;

  std::size_t length() const { return length_; }
  void convolve(std::span<const double> a, std::span<double> out);

 private:
  struct Plans;
  std::size_t length_;
  std::unique_ptr<Plans> plans_;
};

// Cross-convolution via FFT: out_k += scale * sum_j a_j b_{k-j}, for k < out.size().
void accumulate_cross_convolution(std::span<const double> a, std::span<const double> b,
                                  double scale, std::span<double> out);

ConvolutionPath resolve_path(ConvolutionPath requested, std::size_t n);

}  // namespace coagfrag
