#pragma once

#include <complex>
#include <functional>
#include <span>

namespace qho {

// Adaptive Simpson quadrature; tol is treated as an absolute tolerance with a
// relative floor of tol * |I|.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 48);

// Composite Simpson weights over a uniform grid.  Even panel counts use the
// plain composite rule; an odd trailing panel is closed with Simpson 3/8.
double integrate_uniform(std::span<const double> values, double h);
std::complex<double> integrate_uniform(std::span<const std::complex<double>> values, double h);

}  // namespace qho
