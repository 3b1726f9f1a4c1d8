#pragma once

#include <cstdint>
#include <memory>

#include "fountain/geometry.hpp"

namespace fountain::synthetic {

// phi(u) = 1/2 |Qu|^2 - 1/2 |Pu|^2 - (1/p) sum_i |u_i|^p on R^{dim_y + dim_z}.
// Coordinates play the role of a quadrature with unit weights, so every
// fountain quantity has the same form as in the PDE models.
struct Config {
  int dim_y = 3;
  int dim_z = 8;
  double p = 4.0;
  std::uint64_t seed = 1;
};

class CoordinateProblem {
 public:
  static CoordinateProblem build(const Config& cfg);
  const Config& config() const { return cfg_; }
  const GalerkinSpace& space() const { return functional_->space(); }
  std::shared_ptr<const IndefiniteFunctional> functional() const { return functional_; }
  ProblemModel model() const;

 private:
  Config cfg_;
  std::shared_ptr<const IndefiniteFunctional> functional_;
};

}  // namespace fountain::synthetic
