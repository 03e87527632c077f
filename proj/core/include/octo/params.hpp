#pragma once

#include <cmath>

#include "octo/errors.hpp"

namespace octo {

/// Parameters of one octopus landscape instance.
///
/// `L` is the steep curvature, `gamma` the (shallow) escape curvature and
/// `tau` the length scale of the quadratic blocks and connector slabs.
struct LandscapeParams {
  int dim = 2;
  double L = std::exp(1.0);
  double gamma = 1.0;
  double tau = std::exp(1.0);

  /// Escape-time growth factor (L + gamma) / gamma.
  double escape_ratio() const { return (L + gamma) / gamma; }

  /// The non-escape analysis assumes tau >= e; smaller values still build.
  bool tau_below_recommended() const { return tau < std::exp(1.0); }

  void validate() const {
    if (dim < 2) throw ParameterError("LandscapeParams: dim must be >= 2");
    if (!(gamma > 0.0)) throw ParameterError("LandscapeParams: gamma must be > 0");
    if (!(L >= gamma)) throw ParameterError("LandscapeParams: L must be >= gamma");
    if (!(tau > 0.0)) throw ParameterError("LandscapeParams: tau must be > 0");
  }

  bool operator==(const LandscapeParams&) const = default;
};

}  // namespace octo
