#pragma once

// Adaptive 2D panel integration for vector-valued integrands on a rectangle.
// Each panel is estimated with a tensor Gauss-Kronrod 7-15 pair; the panel
// with the largest error estimate is bisected along its longer (relative)
// side until every component meets the tolerance or the panel budget is
// exhausted.

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace acs {

struct Rect {
  double ax, bx;  // first coordinate range
  double ay, by;  // second coordinate range
};

// Writes the m integrand components at (x, y) into out.
using Integrand2D =
    std::function<void(double x, double y, std::span<std::complex<double>> out)>;

struct Adaptive2DOptions {
  double abs_tol = 1e-6;
  double rel_tol = 1e-6;
  int max_panels = 20000;
  int min_subdivisions = 2;  // initial uniform split per axis
};

struct Adaptive2DResult {
  std::vector<std::complex<double>> value;
  double error = 0.0;  // max over components of the summed panel errors
  bool converged = true;
  long evaluations = 0;
  int panels = 0;
};

Adaptive2DResult integrate2d(int components, const Integrand2D& f, Rect domain,
                             const Adaptive2DOptions& opt = {});

}  // namespace acs
