#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "segsig/rng.hpp"
#include "segsig/segment.hpp"

namespace segsig {

enum class DesignKind {
  dd,  // deterministic regular grid x_i = i/n
  rd,  // increasing reordering of n i.i.d. uniforms on [0,1]
};

enum class NoiseFamily {
  gaussian,
  rademacher,
  uniform_bounded,
};

/// Mean-zero noise with subgaussian scale sigma: gaussian has standard
/// deviation sigma, rademacher takes +-sigma with probability 1/2, and
/// uniform_bounded is uniform on [-sigma, sigma]. All three satisfy
/// E[exp(u xi)] <= exp(sigma^2 u^2 / 2). sigma == 0 is the degenerate
/// noise-free mode used by exact-recovery tests.
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::gaussian;
  double sigma = 1.0;

  static NoiseSpec make(NoiseFamily family, double sigma);
};

/// One noise variate. Always consumes the same stream positions regardless of
/// sigma, so samples with different scales stay draw-for-draw aligned.
double noise_draw(const NoiseSpec& noise, RandomStream& rng);

/// Sorted design points with labels.
struct Sample {
  std::vector<double> x;  // nondecreasing, in [0,1]
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
};

/// DD: exactly (1/n, ..., 1). RD: sorted i.i.d. uniforms, consuming exactly
/// n draws from rng. Throws on n == 0.
std::vector<double> make_design(DesignKind kind, std::size_t n, RandomStream& rng);

/// y_i = 1(x_i in g) + xi_i with the i-th draw from `rng` attached to the
/// i-th sorted design point. Callers keep design and noise on separate
/// streams; this function only ever touches `rng` for noise.
Sample sample_observations(const std::vector<double>& design, const Segment& g,
                           const NoiseSpec& noise, RandomStream& rng);

/// CSV with header "i,x,y", one row per design point, reals with 17
/// significant digits (lossless double round-trip).
void write_sample_csv(const Sample& sample, std::ostream& out);
Sample read_sample_csv(std::istream& in);

std::string design_name(DesignKind kind);
DesignKind design_from_name(const std::string& name);
std::string noise_family_name(NoiseFamily family);
NoiseFamily noise_family_from_name(const std::string& name);

}  // namespace segsig
