#include "coagfrag/measures.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coagfrag/errors.h"
#include "coagfrag/format.h"
#include "coagfrag/parallel.h"

namespace coagfrag {
namespace {

constexpr double kClampFloor = -1e-12;

}  // namespace

SizeDistribution::SizeDistribution() : entries_(1, 0.0) {}

SizeDistribution::SizeDistribution(std::vector<double> entries, double lost_mass)
    : entries_(std::move(entries)), lost_mass_(lost_mass) {
  if (entries_.empty()) throw DomainError("size distribution needs at least one class");
  if (!(lost_mass_ >= 0.0)) throw DomainError("lost mass must be nonnegative");
  for (double& f : entries_) {
    if (!std::isfinite(f) || f < kClampFloor) {
      throw DomainError("size distribution entries must be finite and nonnegative");
    }
    if (f < 0.0) f = 0.0;
  }
}

SizeDistribution SizeDistribution::zeros(std::size_t n) {
  return SizeDistribution(std::vector<double>(n, 0.0));
}

double SizeDistribution::at_size(std::size_t i) const {
  if (i == 0 || i > entries_.size()) return 0.0;
  return entries_[i - 1];
}

double moment(const SizeDistribution& dist, int k) {
  if (k < 0 || k > 3) throw DomainError("moment order must be in {0,1,2,3}");
  auto f = dist.entries();
  double sum = 0.0, comp = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    double i = static_cast<double>(idx + 1);
    double term = f[idx] * std::pow(i, k);
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

MomentReport moments_of(const SizeDistribution& dist, double time) {
  return {moment(dist, 0), moment(dist, 1), moment(dist, 2), time};
}

double weighted_distance(const SizeDistribution& a, const SizeDistribution& b, int k) {
  if (k < 0 || k > 1) throw DomainError("distance weight must be in {0,1}");
  std::size_t n = std::max(a.truncation(), b.truncation());
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double w = k == 0 ? 1.0 : static_cast<double>(i);
    sum += w * std::abs(a.at_size(i) - b.at_size(i));
  }
  return sum;
}

std::vector<double> bernstein_of(const SizeDistribution& dist, std::span<const double> s_values,
                                 double bin_width) {
  if (!(bin_width > 0.0)) throw DomainError("bin width must be positive");
  for (std::size_t j = 0; j < s_values.size(); ++j) {
    if (!(s_values[j] > 0.0)) throw DomainError("s values must be positive");
    if (j > 0 && !(s_values[j] > s_values[j - 1])) {
      throw DomainError("s values must be strictly increasing");
    }
  }
  auto f = dist.entries();
  const double m0 = moment(dist, 0);
  std::vector<double> out(s_values.size());
  parallel_for(s_values.size(), [&](std::size_t j) {
    double s = s_values[j];
    if (std::isinf(s)) {
      out[j] = m0;
      return;
    }
    double q = std::exp(-s * bin_width);
    double one_minus_q = -std::expm1(-s * bin_width);
    // d_i = 1 - q^i via d_{i+1} = (1-q) + q d_i, free of cancellation
    double d = one_minus_q;
    double sum = 0.0;
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
      sum += d * f[idx];
      d = one_minus_q + q * d;
    }
    out[j] = sum;
  });
  return out;
}

std::string to_csv(const SizeDistribution& dist) {
  std::string out = "i,f\n";
  auto f = dist.entries();
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    out += std::to_string(idx + 1);
    out += ',';
    out += format_real(f[idx]);
    out += '\n';
  }
  return out;
}

SizeDistribution read_size_distribution_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("empty distribution file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "i,f") throw DomainError("distribution file must start with header i,f");
  std::vector<double> entries;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("malformed distribution row: " + line);
    std::size_t i = 0;
    double f = 0.0;
    try {
      i = std::stoul(line.substr(0, comma));
      f = std::stod(line.substr(comma + 1));
    } catch (const std::logic_error&) {
      throw DomainError("malformed distribution row: " + line);
    }
    if (i != entries.size() + 1) throw DomainError("distribution rows must be consecutive from 1");
    entries.push_back(f);
  }
  return SizeDistribution(std::move(entries));
}

}  // namespace coagfrag
