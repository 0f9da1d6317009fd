#pragma once

#include <vector>

#include "fraclab/stiffness_form.hpp"

namespace fraclab {

struct EigenPair {
  double lambda = 0.0;
  GridFunction phi;       // M-normalized, nodal mean positive
  double residual = 0.0;  // ||A phi - lambda M phi|| / ||A phi||
};

/// The `count` smallest generalized eigenpairs of (A, M), ascending, via
/// inverse iteration with M-orthogonal deflation and a Rayleigh-shift polish.
std::vector<EigenPair> eigenpairs(const StiffnessForm& form, int count, double tol = 1e-10,
                                  int max_iter = 400);

/// CSV export: index, lambda, residual.
std::string eigenpairs_to_csv(const std::vector<EigenPair>& pairs);

}  // namespace fraclab
