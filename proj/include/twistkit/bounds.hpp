#pragma once

// Slope-length certificates and volume / Gromov-norm lower bounds computed
// from twist data. Everything here is a pure function of small integers and
// one of two constant profiles.

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "twistkit/errors.hpp"

namespace twistkit {

struct ConstantsProfile {
  std::string name;
  double v3;  // volume of the regular ideal hyperbolic tetrahedron
  double v8;  // volume of the regular ideal hyperbolic octahedron
};

// "paper": the rounded values these constants are usually quoted with in
// print; keeps published coefficients reproducible digit for digit.
inline const ConstantsProfile& paper_constants() {
  static const ConstantsProfile p{"paper", 1.0149, 3.66386};
  return p;
}

// "precise": tighter evaluations of the same constants.
inline const ConstantsProfile& precise_constants() {
  static const ConstantsProfile p{"precise", 1.0149416064, 3.6638623767};
  return p;
}

inline const ConstantsProfile& constants_profile(const std::string& name) {
  if (name == "paper") return paper_constants();
  if (name == "precise") return precise_constants();
  throw Error("unknown constants profile: " + name);
}

enum class Certificate { None, SixTheorem, SixTheoremAnd2Pi };

inline std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::SixTheorem: return "SixTheorem";
    case Certificate::SixTheoremAnd2Pi: return "SixTheoremAnd2Pi";
    default: return "None";
  }
}

// Length lower bound for the (1, n) filling slope on a crossing-circle cusp
// whose region keeps c half-twists after filling: sqrt(1/4 + c^2).
inline double slope_length_lower(long long c) {
  if (c < 0) throw NegativeCount("slope_length_lower: half-twist count is negative: " + std::to_string(c));
  const double cd = static_cast<double>(c);
  return std::sqrt(0.25 + cd * cd);
}

inline Certificate certify_filling(long long c) {
  const double len = slope_length_lower(c);
  if (len > 2.0 * std::numbers::pi) return Certificate::SixTheoremAnd2Pi;
  if (len > 6.0) return Certificate::SixTheorem;
  return Certificate::None;
}

// Fraction of volume guaranteed to survive filling a slope of length l > 2*pi:
// (1 - (2*pi/l)^2)^(3/2).
inline double retention(long long c) {
  const double len = slope_length_lower(c);
  const double ratio = 2.0 * std::numbers::pi / len;
  if (!(ratio < 1.0))
    throw RetentionUndefined("retention: slope length " + std::to_string(len) +
                             " at c=" + std::to_string(c) + " is not above 2*pi");
  return std::pow(1.0 - ratio * ratio, 1.5);
}

// A numeric lower bound plus the provenance a report needs to print it.
struct Bound {
  double value = 0.0;
  std::string formula;   // formula with the arguments substituted
  std::string profile;   // constants profile used
  bool vacuous = false;  // true when the formula gave <= 0 (no information)
};

namespace detail {
inline Bound make_bound(double raw, std::string formula, const ConstantsProfile& k) {
  Bound b;
  b.value = raw > 0.0 ? raw : 0.0;
  b.formula = std::move(formula);
  b.profile = k.name;
  b.vacuous = !(raw > 0.0);
  return b;
}
inline std::string fmt_args(const char* head, long long a, const char* bn = nullptr, long long b = 0) {
  std::ostringstream os;
  os << head << a;
  if (bn) os << bn << b;
  return os.str();
}
}  // namespace detail

// Volume of a hyperbolic link complement in a solid torus whose diagram has
// t_i twist regions: >= 2*v8*t_i.
inline Bound volume_lower_solid_torus(long long t_i, const ConstantsProfile& k) {
  if (t_i < 0) throw NegativeCount("volume_lower_solid_torus: t_i < 0");
  return detail::make_bound(2.0 * k.v8 * static_cast<double>(t_i),
                            detail::fmt_args("2*v8*t_i with t_i=", t_i), k);
}

// Volume of a hyperbolic augmented link in the 3-sphere with t crossing
// circles: >= 2*v8*(t-1), clamped at 0.
inline Bound volume_lower_s3(long long t, const ConstantsProfile& k) {
  if (t < 0) throw NegativeCount("volume_lower_s3: t < 0");
  return detail::make_bound(2.0 * k.v8 * static_cast<double>(t - 1),
                            detail::fmt_args("max(0, 2*v8*(t-1)) with t=", t), k);
}

// Volume surviving after twisting along every circle of a t_i-region piece
// when each filled slope keeps >= c_min half-twists (needs length > 2*pi).
inline Bound volume_lower_after_twisting(long long t_i, long long c_min, const ConstantsProfile& k) {
  if (t_i < 0) throw NegativeCount("volume_lower_after_twisting: t_i < 0");
  const double r = retention(c_min);  // throws RetentionUndefined when too short
  std::ostringstream os;
  os << "(1-(2*pi/l)^2)^(3/2) * 2*v8*t_i with t_i=" << t_i << ", c_min=" << c_min;
  return detail::make_bound(r * 2.0 * k.v8 * static_cast<double>(t_i), os.str(), k);
}

// Gromov-norm lower bound for the nested augmented link itself:
// max(0, 2*v3*v8*(t - t0 - 1)); t circles outside collapsible product levels,
// t0 collapsible levels.
inline Bound gromov_lower_link(long long t, long long t0, const ConstantsProfile& k) {
  if (t < 0) throw NegativeCount("gromov_lower_link: t < 0");
  if (t0 < 0) throw NegativeCount("gromov_lower_link: t0 < 0");
  std::ostringstream os;
  os << "max(0, 2*v3*v8*(t-t0-1)) with t=" << t << ", t0=" << t0;
  return detail::make_bound(2.0 * k.v3 * k.v8 * static_cast<double>(t - t0 - 1), os.str(), k);
}

// Gromov-norm lower bound for the knot obtained by twisting, valid once every
// region keeps at least 7 half-twists. The rounded profile uses the published
// coefficient 0.65721 = round(0.64756 * 1.0149, 5); the precise profile
// recomputes the product v3 * retention(c_min) * 2*v8 and is never smaller.
inline Bound gromov_lower_knot(long long t, long long c_min, const ConstantsProfile& k) {
  if (t < 0) throw NegativeCount("gromov_lower_knot: t < 0");
  if (c_min < 7)
    throw InsufficientTwisting("gromov_lower_knot: needs at least 7 half-twists per region, c_min=" +
                               std::to_string(c_min));
  if (k.name == "paper") {
    return detail::make_bound(0.65721 * static_cast<double>(t - 1),
                              detail::fmt_args("0.65721*(t-1) with t=", t), k);
  }
  const double coeff = k.v3 * retention(c_min) * 2.0 * k.v8;
  std::ostringstream os;
  os << "v3*(1-(2*pi/l)^2)^(3/2)*2*v8*(t-1) with t=" << t << ", c_min=" << c_min;
  return detail::make_bound(coeff * static_cast<double>(t - 1), os.str(), k);
}

}  // namespace twistkit
