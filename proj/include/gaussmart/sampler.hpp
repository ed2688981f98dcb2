#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "family.hpp"
#include "random.hpp"

namespace gaussmart {

/// Draw U_sigma = -ln R_sigma. The caller forms R_sigma = exp(-U).
inline double sample_subordinator_increment(const SubordinatorFamily& family, double sigma,
                                            RandomStream& stream) {
  if (!(sigma >= 1.0)) {
    throw domain_error("sample_subordinator_increment: sigma must be >= 1");
  }
  detail::require_calibrated(family, "sample_subordinator_increment");
  if (sigma == 1.0) {
    return 0.0;
  }
  const double log_sigma = std::log(sigma);
  switch (family.kind()) {
    case FamilyKind::poisson:
      return static_cast<double>(poisson_variate(family.c() * log_sigma, stream));
    case FamilyKind::gamma:
      return gamma_variate(family.a() * log_sigma, family.b(), stream);
    case FamilyKind::compound: {
      double u = family.beta() * log_sigma;
      const auto& atoms = family.atoms();
      if (atoms.empty()) {
        return u;
      }
      const double mass = family.levy_mass();
      const auto jumps = poisson_variate(mass * log_sigma, stream);
      for (std::uint64_t j = 0; j < jumps; ++j) {
        double pick = stream.uniform() * mass;
        std::size_t i = 0;
        while (i + 1 < atoms.size() && pick > atoms[i].weight) {
          pick -= atoms[i].weight;
          ++i;
        }
        u += atoms[i].location;
      }
      return u;
    }
  }
  return 0.0;
}

inline double sample_gaussian(RandomStream& stream) { return standard_normal(stream); }

}  // namespace gaussmart
