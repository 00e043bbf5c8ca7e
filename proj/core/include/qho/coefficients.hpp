#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace qho {

// Time-dependent coefficients of the quadratic Hamiltonian in
//   i psi_t = -a psi_xx + b x^2 psi - i c x psi_x - i d psi - f x psi + i g psi_x,
// all real on a closed interval [0, t_end], with a(t) != 0 throughout.
// Derivatives a', c', d', g' are part of the set; b and f never need one.
class CoefficientSet {
 public:
  using Fn = std::function<double(double)>;

  struct Parts {
    Fn a, b, c, d, f, g;
    Fn a_dot, c_dot, d_dot, g_dot;
  };

  CoefficientSet(Parts parts, double t_end, bool homogeneous, std::string id);

  double a(double t) const { return check(t), parts_.a(t); }
  double b(double t) const { return check(t), parts_.b(t); }
  double c(double t) const { return check(t), parts_.c(t); }
  double d(double t) const { return check(t), parts_.d(t); }
  double f(double t) const { return check(t), parts_.f(t); }
  double g(double t) const { return check(t), parts_.g(t); }
  double a_dot(double t) const { return check(t), parts_.a_dot(t); }
  double c_dot(double t) const { return check(t), parts_.c_dot(t); }
  double d_dot(double t) const { return check(t), parts_.d_dot(t); }
  double g_dot(double t) const { return check(t), parts_.g_dot(t); }

  double t_end() const { return t_end_; }
  // True when f and g vanish identically, so the kernel carries no linear phase.
  bool homogeneous() const { return homogeneous_; }
  const std::string& id() const { return id_; }

  // Interpolation knots when built from samples; empty for analytic presets.
  const std::vector<double>& knots() const { return knots_; }

 private:
  friend CoefficientSet tabulated_coefficients(const std::string&, const std::string&);

  void check(double t) const;

  Parts parts_;
  double t_end_;
  bool homogeneous_;
  std::string id_;
  std::vector<double> knots_;
};

struct PresetSpec {
  std::string name;                      // free | sho | driven-sho | damped | custom-tabulated
  std::map<std::string, double> params;  // omega, force, gamma ... per preset
  std::string samples_csv;               // custom-tabulated only
};

// Builds one of the named coefficient presets on the domain [0, t_end].
// custom-tabulated ignores t_end and takes its domain from the sample table.
CoefficientSet make_preset(const PresetSpec& spec, double t_end = 10.0);

// Parses a CSV table with header t,a,b,c,d,f,g (strictly increasing t starting
// at 0) and interpolates each column with a monotone C^1 cubic.
CoefficientSet tabulated_coefficients(const std::string& csv_text, const std::string& id);

// Smooth random coefficient set (bounded cubics, a bounded away from zero)
// for randomized verification.  Deterministic in the seed.
CoefficientSet random_smooth_coefficients(std::uint64_t seed, double t_end);

struct TauSigma {
  double tau;
  double sigma;
};

// tau = a'/a - 2c + 4d and sigma = ab - cd + d^2 + d a'/(2a) - d'/2.
// sigma is evaluated in this expanded form, which stays finite where d -> 0
// (the grouping d/2 (a'/a - d'/d) does not).
TauSigma tau_sigma(const CoefficientSet& coeffs, double t);

// Max relative mismatch between supplied derivatives and central finite
// differences of a, c, d, g over n_points deterministic sample times.
double derivative_consistency(const CoefficientSet& coeffs, int n_points, std::uint64_t seed);

}  // namespace qho
