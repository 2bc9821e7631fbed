#pragma once

#include "bonnet/grid.hpp"

namespace bonnet {

// Tensor-product piecewise-cubic Lagrange interpolation (4-point stencil
// per axis, shifted one-sided near the boundary). Reproduces cubics, so
// resampling a smooth field costs O(h^4) accuracy.
class BicubicInterpolator {
  public:
    explicit BicubicInterpolator(const ScalarField& f);

    double operator()(double u, double v) const;

    // True when (u,v) lies inside the grid rectangle (small tolerance for
    // roundoff at the edges).
    bool in_domain(double u, double v) const;

  private:
    ScalarField field_;
};

// Interpolate u as a function of s on a strictly monotone sample set
// (s[k], u[k]); cubic Lagrange on the 4 nearest samples. Used to invert
// arc-length-style reparameterizations.
double inverse_monotone_interp(const std::vector<double>& s,
                               const std::vector<double>& u, double s_query);

}  // namespace bonnet
