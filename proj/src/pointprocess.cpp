#include "isac/pointprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "isac/errors.hpp"

namespace isac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRootRelTol = 1e-9;

// h(x) = (1 - e^{-x}(1 + x)) / x^2, so that the partial radial integral
// of r e^{-beta r} over [0, r] is r^2 h(beta r). Series near zero.
double radial_kernel(double x) {
  if (x < 1e-2) {
    return 0.5 + x * (-1.0 / 3.0 + x * (1.0 / 8.0 + x * (-1.0 / 30.0 + x / 144.0)));
  }
  return (-std::expm1(-x) - x * std::exp(-x)) / (x * x);
}

double partial_mass(double beta, double r) { return r * r * radial_kernel(beta * r); }

Point2 polar_point(const DiskRegion& region, double r, double angle) {
  return {region.center_x + r * std::cos(angle), region.center_y + r * std::sin(angle)};
}

PointSet sample_radial(const RpdiParams& params, RandomStream& rng) {
  normalize_density(params);  // validates, rejects an empty annulus
  const auto& region = params.region;
  const std::uint64_t count = rng.poisson(params.target_mean_count);
  PointSet points;
  points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double r = sample_radius(params.beta, region.hole_radius, region.radius, rng);
    const double angle = kTwoPi * rng.uniform();
    points.push_back(polar_point(region, r, angle));
  }
  return points;
}

}  // namespace

void DiskRegion::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("DiskRegion: radius must be positive");
  }
  if (!(hole_radius >= 0.0) || hole_radius > radius) {
    throw std::invalid_argument("DiskRegion: hole radius must lie in [0, radius]");
  }
}

double DiskRegion::area() const {
  return std::numbers::pi * (radius * radius - hole_radius * hole_radius);
}

double DiskRegion::center_distance(const Point2& p) const {
  return std::hypot(p.x - center_x, p.y - center_y);
}

bool DiskRegion::contains(const Point2& p) const {
  const double d = center_distance(p);
  return d <= radius && d >= hole_radius;
}

double radial_mass(double beta, double inner, double outer) {
  return kTwoPi * (partial_mass(beta, outer) - partial_mass(beta, inner));
}

double normalize_density(const RpdiParams& params) {
  params.region.validate();
  if (!(params.beta >= 0.0)) throw std::invalid_argument("RpdiParams: beta must be >= 0");
  if (!(params.target_mean_count > 0.0)) {
    throw std::invalid_argument("RpdiParams: target mean count must be > 0");
  }
  if (params.region.hole_radius >= params.region.radius) throw DegenerateRegionError();
  const double mass = radial_mass(params.beta, params.region.hole_radius, params.region.radius);
  if (!(mass > 0.0)) throw DegenerateRegionError();
  return params.target_mean_count / mass;
}

double sample_radius(double beta, double inner, double outer, RandomStream& rng) {
  const double u = rng.uniform();
  if (beta == 0.0) {
    return std::sqrt(inner * inner + u * (outer * outer - inner * inner));
  }
  // Solve partial_mass(r) = target on the bracket [inner, outer]. Newton steps
  // use the density r e^{-beta r}; any step leaving the bracket is replaced by
  // bisection, so the bracket shrinks monotonically.
  const double low_mass = partial_mass(beta, inner);
  const double target = low_mass + u * (partial_mass(beta, outer) - low_mass);
  double lo = inner;
  double hi = outer;
  double r = std::sqrt(inner * inner + u * (outer * outer - inner * inner));
  for (int iter = 0; iter < 200; ++iter) {
    const double f = partial_mass(beta, r) - target;
    if (f < 0.0) {
      lo = r;
    } else {
      hi = r;
    }
    const double slope = r * std::exp(-beta * r);
    double next = slope > 0.0 ? r - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::fabs(next - r);
    r = next;
    if (step <= kRootRelTol * r || hi - lo <= kRootRelTol * hi) break;
  }
  return r;
}

PointSet sample_rpdi(const RpdiParams& params, RandomStream& rng) {
  if (params.region.hole_radius != 0.0) {
    throw std::invalid_argument("sample_rpdi: region must not have a hole; use sample_php");
  }
  return sample_radial(params, rng);
}

PointSet sample_php(const RpdiParams& params, RandomStream& rng) {
  return sample_radial(params, rng);
}

PointSet sample_ppp_disk(double density, const DiskRegion& region, RandomStream& rng) {
  region.validate();
  if (!(density >= 0.0)) throw std::invalid_argument("sample_ppp_disk: density must be >= 0");
  const std::uint64_t count = rng.poisson(density * region.area());
  PointSet points;
  points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double r = sample_radius(0.0, region.hole_radius, region.radius, rng);
    points.push_back(polar_point(region, r, kTwoPi * rng.uniform()));
  }
  return points;
}

PointSet sample_mhcpp(double parent_density, double hardcore_distance, const DiskRegion& region,
                      RandomStream& rng) {
  if (!(hardcore_distance >= 0.0)) {
    throw std::invalid_argument("sample_mhcpp: hardcore distance must be >= 0");
  }
  PointSet parents = sample_ppp_disk(parent_density, region, rng);
  if (hardcore_distance == 0.0) return parents;

  std::vector<double> marks(parents.size());
  for (auto& m : marks) m = rng.uniform();

  std::vector<std::size_t> order(parents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return parents[a].x < parents[b].x; });

  const double d2 = hardcore_distance * hardcore_distance;
  std::vector<char> keep(parents.size(), 1);
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t i = order[oi];
    // Scan forward in x order; each close pair is visited once.
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const std::size_t j = order[oj];
      const double dx = parents[j].x - parents[i].x;
      if (dx > hardcore_distance) break;
      const double dy = parents[j].y - parents[i].y;
      if (dx * dx + dy * dy < d2) {
        if (marks[i] < marks[j]) {
          keep[j] = 0;
        } else {
          keep[i] = 0;
        }
      }
    }
  }

  PointSet out;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (keep[i]) out.push_back(parents[i]);
  }
  return out;
}

PointSet sample_thomas_pcp(double parent_density, double mean_offspring, double cluster_std,
                           const DiskRegion& region, RandomStream& rng) {
  if (!(mean_offspring >= 0.0) || !(cluster_std >= 0.0)) {
    throw std::invalid_argument("sample_thomas_pcp: parameters must be >= 0");
  }
  const PointSet parents = sample_ppp_disk(parent_density, region, rng);
  PointSet children;
  for (const auto& parent : parents) {
    const std::uint64_t n = rng.poisson(mean_offspring);
    for (std::uint64_t k = 0; k < n; ++k) {
      const Point2 child{parent.x + cluster_std * rng.normal(),
                         parent.y + cluster_std * rng.normal()};
      if (region.contains(child)) children.push_back(child);
    }
  }
  return children;
}

}  // namespace isac
