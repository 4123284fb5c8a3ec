#pragma once
// Statistical helpers shared by the test binaries. Written against textbook
// formulas, not against the library, so they can serve as oracles.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace testsupport {

// chi2.ppf(0.99, df) for df = 1..250 (scipy).
inline constexpr std::array<double, 250> kChiSquare99 = {
    6.6349, 9.2103, 11.3449, 13.2767, 15.0863, 16.8119, 18.4753, 20.0902, 21.6660, 23.2093,
    24.7250, 26.2170, 27.6882, 29.1412, 30.5779, 31.9999, 33.4087, 34.8053, 36.1909, 37.5662,
    38.9322, 40.2894, 41.6384, 42.9798, 44.3141, 45.6417, 46.9629, 48.2782, 49.5879, 50.8922,
    52.1914, 53.4858, 54.7755, 56.0609, 57.3421, 58.6192, 59.8925, 61.1621, 62.4281, 63.6907,
    64.9501, 66.2062, 67.4593, 68.7095, 69.9568, 71.2014, 72.4433, 73.6826, 74.9195, 76.1539,
    77.3860, 78.6158, 79.8433, 81.0688, 82.2921, 83.5134, 84.7328, 85.9502, 87.1657, 88.3794,
    89.5913, 90.8015, 92.0100, 93.2169, 94.4221, 95.6257, 96.8278, 98.0284, 99.2275, 100.4252,
    101.6214, 102.8163, 104.0098, 105.2020, 106.3929, 107.5825, 108.7709, 109.9581, 111.1440, 112.3288,
    113.5124, 114.6949, 115.8763, 117.0565, 118.2357, 119.4139, 120.5910, 121.7671, 122.9422, 124.1163,
    125.2895, 126.4617, 127.6329, 128.8032, 129.9727, 131.1412, 132.3089, 133.4757, 134.6416, 135.8067,
    136.9710, 138.1345, 139.2971, 140.4590, 141.6201, 142.7804, 143.9400, 145.0988, 146.2569, 147.4143,
    148.5710, 149.7269, 150.8822, 152.0367, 153.1906, 154.3438, 155.4964, 156.6483, 157.7995, 158.9502,
    160.1002, 161.2495, 162.3983, 163.5465, 164.6940, 165.8410, 166.9874, 168.1332, 169.2784, 170.4231,
    171.5673, 172.7108, 173.8539, 174.9963, 176.1383, 177.2797, 178.4207, 179.5611, 180.7009, 181.8403,
    182.9792, 184.1176, 185.2555, 186.3930, 187.5299, 188.6664, 189.8024, 190.9380, 192.0730, 193.2077,
    194.3419, 195.4756, 196.6089, 197.7418, 198.8742, 200.0062, 201.1378, 202.2690, 203.3998, 204.5301,
    205.6600, 206.7896, 207.9187, 209.0474, 210.1758, 211.3037, 212.4313, 213.5585, 214.6853, 215.8117,
    216.9378, 218.0635, 219.1888, 220.3138, 221.4384, 222.5626, 223.6865, 224.8101, 225.9333, 227.0561,
    228.1786, 229.3008, 230.4227, 231.5442, 232.6653, 233.7862, 234.9067, 236.0269, 237.1468, 238.2664,
    239.3856, 240.5046, 241.6232, 242.7415, 243.8595, 244.9772, 246.0947, 247.2118, 248.3286, 249.4451,
    250.5614, 251.6773, 252.7930, 253.9083, 255.0234, 256.1382, 257.2528, 258.3670, 259.4810, 260.5947,
    261.7082, 262.8213, 263.9342, 265.0469, 266.1592, 267.2714, 268.3832, 269.4948, 270.6061, 271.7172,
    272.8281, 273.9386, 275.0490, 276.1591, 277.2689, 278.3785, 279.4879, 280.5970, 281.7058, 282.8145,
    283.9229, 285.0310, 286.1390, 287.2467, 288.3542, 289.4614, 290.5684, 291.6752, 292.7818, 293.8881,
    294.9942, 296.1001, 297.2058, 298.3113, 299.4165, 300.5215, 301.6264, 302.7310, 303.8354, 304.9396,
};

inline double chi_square_critical_99(std::size_t df) {
  if (df == 0 || df > kChiSquare99.size()) throw std::out_of_range("df outside table");
  return kChiSquare99[df - 1];
}

inline double poisson_pmf(double mean, std::uint64_t k) {
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t df = 0;
  bool passes = false;
};

// Pearson chi-square of observed counts against Poisson(mean). Cells are
// single values of k, with both tails pooled until each expects >= 5.
inline ChiSquareResult poisson_chi_square(const std::vector<std::uint64_t>& counts, double mean) {
  const double n = static_cast<double>(counts.size());
  std::uint64_t lo = 0;
  double lower_tail = poisson_pmf(mean, 0);
  while (lower_tail * n < 5.0) lower_tail += poisson_pmf(mean, ++lo);
  std::uint64_t hi = static_cast<std::uint64_t>(mean);
  double upper_tail = 1.0;
  for (std::uint64_t k = 0; k < hi; ++k) upper_tail -= poisson_pmf(mean, k);
  while ((upper_tail - poisson_pmf(mean, hi)) * n >= 5.0) upper_tail -= poisson_pmf(mean, hi++);

  // cells: [0, lo], lo+1 .. hi-1, [hi, inf)
  std::vector<double> expected;
  expected.push_back(lower_tail * n);
  for (std::uint64_t k = lo + 1; k < hi; ++k) expected.push_back(poisson_pmf(mean, k) * n);
  expected.push_back(upper_tail * n);

  std::vector<double> observed(expected.size(), 0.0);
  for (auto c : counts) {
    std::size_t cell = c <= lo ? 0 : c >= hi ? expected.size() - 1 : static_cast<std::size_t>(c - lo);
    observed[cell] += 1.0;
  }
  ChiSquareResult r;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    r.statistic += d * d / expected[i];
  }
  r.df = expected.size() - 1;
  r.passes = r.statistic < chi_square_critical_99(r.df);
  return r;
}

// Kolmogorov-Smirnov distance of a sample against a continuous CDF.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

// Normalized radial CDF of density r exp(-beta r) on [inner, outer].
inline double radial_cdf(double beta, double inner, double outer, double r) {
  const auto g = [beta](double x) {
    if (beta == 0.0) return x * x / 2.0;
    return (1.0 - std::exp(-beta * x) * (1.0 + beta * x)) / (beta * beta);
  };
  return (g(r) - g(inner)) / (g(outer) - g(inner));
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace testsupport
