#pragma once

#include <cstddef>
#include <istream>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace coagfrag {

// Number densities f_1..f_N of groups of size i, stored densely from size 1.
class SizeDistribution {
 public:
  SizeDistribution();
  explicit SizeDistribution(std::vector<double> entries, double lost_mass = 0.0);

  static SizeDistribution zeros(std::size_t n);

  std::size_t truncation() const { return entries_.size(); }
  // f_i for 1 <= i <= N, zero beyond N.
  double at_size(std::size_t i) const;
  std::span<const double> entries() const { return entries_; }
  double lost_mass() const { return lost_mass_; }

 private:
  std::vector<double> entries_;
  double lost_mass_ = 0.0;
};

struct MomentReport {
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double time = 0.0;
};

// Sum of i^k f_i over the stored classes, k in {0,1,2,3}.
double moment(const SizeDistribution& dist, int k);
MomentReport moments_of(const SizeDistribution& dist, double time = 0.0);

// Sum of i^k |a_i - b_i| over the union of index ranges, k in {0,1}.
double weighted_distance(const SizeDistribution& a, const SizeDistribution& b, int k);

inline constexpr double kSInfinity = std::numeric_limits<double>::infinity();

// U(s) = sum (1 - e^{-s i h}) f_i; an infinite s returns m0.
std::vector<double> bernstein_of(const SizeDistribution& dist, std::span<const double> s_values,
                                 double bin_width = 1.0);

std::string to_csv(const SizeDistribution& dist);
SizeDistribution read_size_distribution_csv(std::istream& in);

}  // namespace coagfrag
