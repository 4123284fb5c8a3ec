#pragma once

#include <vector>

#include "isac/random.hpp"

namespace isac {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Disk of `radius` around (center_x, center_y) with a centered exclusion
/// disk of `hole_radius`, both measured in the horizontal plane.
struct DiskRegion {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 1500.0;
  double hole_radius = 0.0;

  /// Throws std::invalid_argument on radius <= 0 or hole outside [0, radius].
  void validate() const;
  double area() const;
  double center_distance(const Point2& p) const;
  bool contains(const Point2& p) const;
};

/// Radially decaying Poisson process: intensity base * exp(-beta * r).
struct RpdiParams {
  double beta = 0.0;               // 1/m
  double target_mean_count = 1.0;  // expected number of points in the region
  DiskRegion region;
};

using PointSet = std::vector<Point2>;

/// Base intensity (1/m^2) that makes the expected count over the annulus
/// [hole_radius, radius] equal to target_mean_count. Throws
/// DegenerateRegionError when the annulus is empty.
double normalize_density(const RpdiParams& params);

/// Expected number of points of intensity exp(-beta r) between radii `inner`
/// and `outer`, i.e. the integral of 2 pi r exp(-beta r).
double radial_mass(double beta, double inner, double outer);

/// Draws one radius with density proportional to r exp(-beta r) on
/// [inner, outer] by inverting the normalized radial CDF (bracketed Newton,
/// 1e-9 relative tolerance).
double sample_radius(double beta, double inner, double outer, RandomStream& rng);

/// Plain radially decaying process; requires hole_radius == 0.
PointSet sample_rpdi(const RpdiParams& params, RandomStream& rng);

/// Radially decaying process with a single centered hole. The radial support
/// is restricted to [hole_radius, radius] and the count renormalized, so the
/// expected count stays target_mean_count.
PointSet sample_php(const RpdiParams& params, RandomStream& rng);

/// Homogeneous PPP on the region (annulus if it has a hole).
PointSet sample_ppp_disk(double density, const DiskRegion& region, RandomStream& rng);

/// Matern type-II hardcore process: parents are a PPP, each gets a uniform
/// mark, and a parent survives iff no other parent within hardcore_distance
/// carries a smaller mark.
PointSet sample_mhcpp(double parent_density, double hardcore_distance, const DiskRegion& region,
                      RandomStream& rng);

/// Thomas cluster process: PPP parents, Poisson(mean_offspring) children per
/// parent with isotropic Gaussian displacement. Children outside the region
/// are discarded; parents themselves are not returned.
PointSet sample_thomas_pcp(double parent_density, double mean_offspring, double cluster_std,
                           const DiskRegion& region, RandomStream& rng);

}  // namespace isac
