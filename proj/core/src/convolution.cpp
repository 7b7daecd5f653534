#include "coagfrag/convolution.h"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace coagfrag {
namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t fft_size(std::size_t min_len) {
  std::size_t n = 64;
  while (n < min_len) n *= 2;
  return n;
}

constexpr std::size_t kDirectThreshold = 512;

}  // namespace

void self_convolution_direct(std::span<const double> a, std::span<double> out) {
  const std::size_t n = a.size();
  if (n == 0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    double acc = 0.0;
    std::size_t j = k >= n ? k - n + 1 : 0;
    std::size_t p = k - j;
    // symmetric pairs counted once, doubled
    while (j < p) {
      acc += a[j] * a[p];
      ++j;
      --p;
    }
    acc *= 2.0;
    if (j == p) acc += a[j] * a[j];
    out[k] = acc;
  }
}

struct FftSelfConvolver::Plans {
  std::size_t size = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(std::size_t n) : size(n) {
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real, FFTW_ESTIMATE);
  }
  ~Plans() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(forward);
      fftw_destroy_plan(backward);
    }
    fftw_free(real);
    fftw_free(spec);
  }
};

FftSelfConvolver::FftSelfConvolver(std::size_t length)
    : length_(length), plans_(std::make_unique<Plans>(fft_size(2 * length))) {}

FftSelfConvolver::~FftSelfConvolver() = default;

void FftSelfConvolver::convolve(std::span<const double> a, std::span<double> out) {
  const std::size_t n = plans_->size;
  const std::size_t len = std::min(a.size(), length_);
  std::fill(plans_->real, plans_->real + n, 0.0);
  std::copy(a.begin(), a.begin() + len, plans_->real);
  fftw_execute(plans_->forward);
  for (std::size_t k = 0; k < n / 2 + 1; ++k) {
    double re = plans_->spec[k][0], im = plans_->spec[k][1];
    plans_->spec[k][0] = re * re - im * im;
    plans_->spec[k][1] = 2.0 * re * im;
  }
  fftw_execute(plans_->backward);
  const double inv = 1.0 / static_cast<double>(n);
  const std::size_t m = std::min(out.size(), n);
  for (std::size_t k = 0; k < m; ++k) out[k] = plans_->real[k] * inv;
  std::fill(out.begin() + m, out.end(), 0.0);
}

void accumulate_cross_convolution(std::span<const double> a, std::span<const double> b,
                                  double scale, std::span<double> out) {
  if (a.empty() || b.empty() || out.empty()) return;
  if (a.size() * b.size() <= kDirectThreshold * 8) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j) {
        out[i + j] += scale * a[i] * b[j];
      }
    }
    return;
  }
  const std::size_t n = fft_size(a.size() + b.size());
  double* ra = fftw_alloc_real(n);
  double* rb = fftw_alloc_real(n);
  fftw_complex* sa = fftw_alloc_complex(n / 2 + 1);
  fftw_complex* sb = fftw_alloc_complex(n / 2 + 1);
  fftw_plan pa, pb, back;
  {
    std::lock_guard lock(planner_mutex());
    pa = fftw_plan_dft_r2c_1d(static_cast<int>(n), ra, sa, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_1d(static_cast<int>(n), rb, sb, FFTW_ESTIMATE);
    back = fftw_plan_dft_c2r_1d(static_cast<int>(n), sa, ra, FFTW_ESTIMATE);
  }
  std::fill(ra, ra + n, 0.0);
  std::fill(rb, rb + n, 0.0);
  std::copy(a.begin(), a.end(), ra);
  std::copy(b.begin(), b.end(), rb);
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t k = 0; k < n / 2 + 1; ++k) {
    double re = sa[k][0] * sb[k][0] - sa[k][1] * sb[k][1];
    double im = sa[k][0] * sb[k][1] + sa[k][1] * sb[k][0];
    sa[k][0] = re;
    sa[k][1] = im;
  }
  fftw_execute(back);
  const double inv = scale / static_cast<double>(n);
  const std::size_t m = std::min(out.size(), n);
  for (std::size_t k = 0; k < m; ++k) out[k] += ra[k] * inv;
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(back);
  }
  fftw_free(ra);
  fftw_free(rb);
  fftw_free(sa);
  fftw_free(sb);
}

ConvolutionPath resolve_path(ConvolutionPath requested, std::size_t n) {
  if (requested != ConvolutionPath::automatic) return requested;
  return n > kDirectThreshold ? ConvolutionPath::fft : ConvolutionPath::direct;
}

}  // namespace coagfrag
