#pragma once

#include <stdexcept>
#include <string>

namespace qho {

// Base for failures of the numerical machinery itself (as opposed to bad
// arguments).  The CLI maps these to a dedicated exit code.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation requested at (or, for driven systems, beyond) a zero of mu0.
class caustic_error : public numeric_error {
 public:
  caustic_error(double t, const std::string& what) : numeric_error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

// alpha(0) + gamma0(t) vanished; the Gaussian superposition degenerates.
class degenerate_focus_error : public numeric_error {
 public:
  degenerate_focus_error(double t, const std::string& what) : numeric_error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

// Adaptive step-size control failed (step underflow or step budget exhausted).
class integration_error : public numeric_error {
 public:
  explicit integration_error(const std::string& what) : numeric_error(what) {}
};

// Query outside the closed time domain of a coefficient set or solution.
class time_domain_error : public std::out_of_range {
 public:
  time_domain_error(double t, const std::string& what) : std::out_of_range(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

}  // namespace qho
