#include "segsig/model.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace segsig {

NoiseSpec NoiseSpec::make(NoiseFamily family, double sigma) {
  if (!(sigma >= 0.0))
    throw std::invalid_argument("NoiseSpec: sigma must be >= 0");
  return NoiseSpec{family, sigma};
}

double noise_draw(const NoiseSpec& noise, RandomStream& rng) {
  switch (noise.family) {
    case NoiseFamily::gaussian:
      return noise.sigma * rng.gaussian();
    case NoiseFamily::rademacher:
      return rng.uniform01() < 0.5 ? noise.sigma : -noise.sigma;
    case NoiseFamily::uniform_bounded:
      return noise.sigma * (2.0 * rng.uniform01() - 1.0);
  }
  throw std::logic_error("noise_draw: unknown family");
}

std::vector<double> make_design(DesignKind kind, std::size_t n, RandomStream& rng) {
  if (n == 0) throw std::invalid_argument("make_design: n must be >= 1");
  std::vector<double> x(n);
  if (kind == DesignKind::dd) {
    for (std::size_t i = 0; i < n; ++i)
      x[i] = static_cast<double>(i + 1) / static_cast<double>(n);
  } else {
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform01();
    std::sort(x.begin(), x.end());
  }
  return x;
}

Sample sample_observations(const std::vector<double>& design, const Segment& g,
                           const NoiseSpec& noise, RandomStream& rng) {
  Sample s;
  s.x = design;
  s.y.resize(design.size());
  for (std::size_t i = 0; i < design.size(); ++i)
    s.y[i] = (g.contains(design[i]) ? 1.0 : 0.0) + noise_draw(noise, rng);
  return s;
}

namespace {

void append_real(std::string& buf, double v) {
  char tmp[64];
  std::snprintf(tmp, sizeof tmp, "%.17g", v);
  buf += tmp;
}

}  // namespace

void write_sample_csv(const Sample& sample, std::ostream& out) {
  std::string buf = "i,x,y\n";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    buf += std::to_string(i + 1);
    buf += ',';
    append_real(buf, sample.x[i]);
    buf += ',';
    append_real(buf, sample.y[i]);
    buf += '\n';
  }
  out << buf;
}

Sample read_sample_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("sample csv: empty input");
  if (line.ends_with('\r')) line.pop_back();
  if (line != "i,x,y")
    throw std::runtime_error("sample csv: expected header 'i,x,y'");
  Sample s;
  while (std::getline(in, line)) {
    if (line.ends_with('\r')) line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    if (!std::getline(row, field, ','))
      throw std::runtime_error("sample csv: malformed row: " + line);
    double x = 0.0, y = 0.0;
    if (!std::getline(row, field, ','))
      throw std::runtime_error("sample csv: malformed row: " + line);
    x = std::stod(field);
    if (!std::getline(row, field))
      throw std::runtime_error("sample csv: malformed row: " + line);
    y = std::stod(field);
    s.x.push_back(x);
    s.y.push_back(y);
  }
  if (s.x.empty()) throw std::runtime_error("sample csv: no rows");
  if (!std::is_sorted(s.x.begin(), s.x.end()))
    throw std::runtime_error("sample csv: design not sorted");
  return s;
}

std::string design_name(DesignKind kind) {
  return kind == DesignKind::dd ? "dd" : "rd";
}

DesignKind design_from_name(const std::string& name) {
  if (name == "dd") return DesignKind::dd;
  if (name == "rd") return DesignKind::rd;
  throw std::invalid_argument("unknown design: " + name);
}

std::string noise_family_name(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::gaussian: return "gaussian";
    case NoiseFamily::rademacher: return "rademacher";
    case NoiseFamily::uniform_bounded: return "uniform-bounded";
  }
  return "?";
}

NoiseFamily noise_family_from_name(const std::string& name) {
  if (name == "gaussian") return NoiseFamily::gaussian;
  if (name == "rademacher") return NoiseFamily::rademacher;
  if (name == "uniform-bounded") return NoiseFamily::uniform_bounded;
  throw std::invalid_argument("unknown noise family: " + name);
}

}  // namespace segsig
