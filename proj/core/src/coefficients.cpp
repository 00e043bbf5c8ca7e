#include "qho/coefficients.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qho/errors.hpp"

namespace qho {
namespace {

constexpr double kZero[] = {0.0};

CoefficientSet::Fn constant(double v) {
  return [v](double) { return v; };
}

double require_param(const PresetSpec& spec, const std::string& key, double fallback,
                     bool required) {
  auto it = spec.params.find(key);
  if (it != spec.params.end()) return it->second;
  if (required)
    throw std::invalid_argument("preset '" + spec.name + "' is missing parameter '" + key + "'");
  return fallback;
}

// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2) throw std::invalid_argument("tabulated coefficients need at least 2 samples");
    m_.resize(n);
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      if (h[i] <= 0.0) throw std::invalid_argument("tabulated t values must be strictly increasing");
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        m_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    m_[0] = edge_slope(h[0], n > 2 ? h[1] : h[0], delta[0], n > 2 ? delta[1] : delta[0]);
    m_[n - 1] = edge_slope(h[n - 2], n > 2 ? h[n - 3] : h[n - 2], delta[n - 2],
                           n > 2 ? delta[n - 3] : delta[n - 2]);
  }

  double value(double t) const {
    const auto [i, s] = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double t2 = s * s, t3 = t2 * s;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + s;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h * h10 * m_[i] + h01 * y_[i + 1] + h * h11 * m_[i + 1];
  }

  double derivative(double t) const {
    const auto [i, s] = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double t2 = s * s;
    const double dh00 = (6 * t2 - 6 * s) / h;
    const double dh10 = (3 * t2 - 4 * s + 1);
    const double dh01 = (-6 * t2 + 6 * s) / h;
    const double dh11 = (3 * t2 - 2 * s);
    return dh00 * y_[i] + dh10 * m_[i] + dh01 * y_[i + 1] + dh11 * m_[i + 1];
  }

 private:
  static double edge_slope(double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) {
      m = 0.0;
    } else if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0)) {
      m = 3.0 * d0;
    }
    return m;
  }

  std::pair<std::size_t, double> segment(double t) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i > 0) --i;
    if (i >= x_.size() - 1) i = x_.size() - 2;
    return {i, (t - x_[i]) / (x_[i + 1] - x_[i])};
  }

  std::vector<double> x_, y_, m_;
};

// Cubic with explicit coefficients; used by the random smooth generator.
struct Cubic {
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0;
  double operator()(double t) const { return c0 + t * (c1 + t * (c2 + t * c3)); }
  double deriv(double t) const { return c1 + t * (2.0 * c2 + t * 3.0 * c3); }
};

double uniform01(std::mt19937_64& rng) {
  return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace

CoefficientSet::CoefficientSet(Parts parts, double t_end, bool homogeneous, std::string id)
    : parts_(std::move(parts)), t_end_(t_end), homogeneous_(homogeneous), id_(std::move(id)) {
  if (!(t_end_ > 0.0)) throw std::invalid_argument("coefficient domain must satisfy t_end > 0");
}

void CoefficientSet::check(double t) const {
  const double pad = 1e-12 * std::max(1.0, t_end_);
  if (t < -pad || t > t_end_ + pad)
    throw time_domain_error(t, "coefficient query at t=" + std::to_string(t) +
                                   " outside [0, " + std::to_string(t_end_) + "]");
}

CoefficientSet make_preset(const PresetSpec& spec, double t_end) {
  (void)kZero;
  if (spec.name == "free") {
    CoefficientSet::Parts p;
    p.a = constant(0.5);
    p.b = p.c = p.d = p.f = p.g = constant(0.0);
    p.a_dot = p.c_dot = p.d_dot = p.g_dot = constant(0.0);
    return CoefficientSet(std::move(p), t_end, true, "free");
  }
  if (spec.name == "sho" || spec.name == "driven-sho") {
    const double omega = require_param(spec, "omega", 1.0, false);
    if (!(omega > 0.0)) throw std::invalid_argument("sho preset needs omega > 0");
    const bool driven = spec.name == "driven-sho";
    const double force = driven ? require_param(spec, "force", 0.0, true) : 0.0;
    CoefficientSet::Parts p;
    p.a = constant(0.5);
    p.b = constant(0.5 * omega * omega);
    p.c = p.d = p.g = constant(0.0);
    p.f = constant(force);
    p.a_dot = p.c_dot = p.d_dot = p.g_dot = constant(0.0);
    return CoefficientSet(std::move(p), t_end, !driven || force == 0.0, spec.name);
  }
  if (spec.name == "damped") {
    const double gamma = require_param(spec, "gamma", 2.0, false);
    const double omega = require_param(spec, "omega", 1.0, false);
    CoefficientSet::Parts p;
    p.a = [gamma](double t) { return 0.5 * std::exp(-gamma * t); };
    p.b = [gamma, omega](double t) { return 0.5 * omega * omega * std::exp(gamma * t); };
    p.c = p.d = p.f = p.g = constant(0.0);
    p.a_dot = [gamma](double t) { return -0.5 * gamma * std::exp(-gamma * t); };
    p.c_dot = p.d_dot = p.g_dot = constant(0.0);
    return CoefficientSet(std::move(p), t_end, true, "damped");
  }
  if (spec.name == "custom-tabulated") {
    if (spec.samples_csv.empty())
      throw std::invalid_argument("custom-tabulated preset needs a samples table");
    return tabulated_coefficients(spec.samples_csv, "custom-tabulated");
  }
  throw std::invalid_argument("unknown coefficient preset '" + spec.name + "'");
}

CoefficientSet tabulated_coefficients(const std::string& csv_text, const std::string& id) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty coefficient table");
  auto strip = [](std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }),
            s.end());
    return s;
  };
  if (strip(line) != "t,a,b,c,d,f,g")
    throw std::invalid_argument("coefficient table must start with header t,a,b,c,d,f,g");

  std::vector<std::array<double, 7>> rows;
  while (std::getline(in, line)) {
    if (strip(line).empty()) continue;
    std::array<double, 7> row{};
    std::istringstream ls(line);
    std::string cell;
    for (int i = 0; i < 7; ++i) {
      if (!std::getline(ls, cell, ','))
        throw std::invalid_argument("coefficient table row with fewer than 7 columns: " + line);
      std::size_t pos = 0;
      row[i] = std::stod(cell, &pos);
    }
    rows.push_back(row);
  }
  if (rows.size() < 4) throw std::invalid_argument("coefficient table needs at least 4 rows");
  if (rows.front()[0] != 0.0)
    throw std::invalid_argument("coefficient table must start at t = 0");

  std::vector<double> t(rows.size());
  std::array<std::vector<double>, 6> col;
  for (auto& c : col) c.resize(rows.size());
  bool homogeneous = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t[i] = rows[i][0];
    if (i > 0 && t[i] <= t[i - 1])
      throw std::invalid_argument("coefficient table t values must be strictly increasing");
    for (int j = 0; j < 6; ++j) col[j][i] = rows[i][j + 1];
    if (rows[i][5] != 0.0 || rows[i][6] != 0.0) homogeneous = false;
    if (rows[i][1] == 0.0) throw std::invalid_argument("coefficient table requires a(t) != 0");
  }

  auto a = std::make_shared<Pchip>(t, col[0]);
  auto b = std::make_shared<Pchip>(t, col[1]);
  auto c = std::make_shared<Pchip>(t, col[2]);
  auto d = std::make_shared<Pchip>(t, col[3]);
  auto f = std::make_shared<Pchip>(t, col[4]);
  auto g = std::make_shared<Pchip>(t, col[5]);

  CoefficientSet::Parts p;
  p.a = [a](double s) { return a->value(s); };
  p.b = [b](double s) { return b->value(s); };
  p.c = [c](double s) { return c->value(s); };
  p.d = [d](double s) { return d->value(s); };
  p.f = [f](double s) { return f->value(s); };
  p.g = [g](double s) { return g->value(s); };
  p.a_dot = [a](double s) { return a->derivative(s); };
  p.c_dot = [c](double s) { return c->derivative(s); };
  p.d_dot = [d](double s) { return d->derivative(s); };
  p.g_dot = [g](double s) { return g->derivative(s); };

  CoefficientSet set(std::move(p), t.back(), homogeneous, id);
  set.knots_ = t;
  return set;
}

CoefficientSet random_smooth_coefficients(std::uint64_t seed, double t_end) {
  std::mt19937_64 rng(seed);
  auto cubic = [&](double c0_lo, double c0_hi, double amp) {
    Cubic q;
    q.c0 = uniform(rng, c0_lo, c0_hi);
    q.c1 = uniform(rng, -amp, amp);
    q.c2 = uniform(rng, -amp, amp);
    q.c3 = uniform(rng, -amp, amp);
    return q;
  };
  // a stays in [0.4 - 0.24 s, 0.6 + 0.24 s] for s = max(t_end, t_end^3) <= 1,
  // so keep the slope budget small enough that a never approaches zero.
  const double span = std::max({t_end, t_end * t_end, t_end * t_end * t_end});
  const double a_amp = 0.05 / std::max(1.0, span);
  const double amp = 0.25 / std::max(1.0, span);
  const Cubic qa = cubic(0.4, 0.6, a_amp);
  const Cubic qb = cubic(-0.4, 0.4, amp);
  const Cubic qc = cubic(-0.3, 0.3, amp);
  const Cubic qd = cubic(-0.3, 0.3, amp);
  const Cubic qf = cubic(-0.4, 0.4, amp);
  const Cubic qg = cubic(-0.4, 0.4, amp);

  CoefficientSet::Parts p;
  p.a = [qa](double t) { return qa(t); };
  p.b = [qb](double t) { return qb(t); };
  p.c = [qc](double t) { return qc(t); };
  p.d = [qd](double t) { return qd(t); };
  p.f = [qf](double t) { return qf(t); };
  p.g = [qg](double t) { return qg(t); };
  p.a_dot = [qa](double t) { return qa.deriv(t); };
  p.c_dot = [qc](double t) { return qc.deriv(t); };
  p.d_dot = [qd](double t) { return qd.deriv(t); };
  p.g_dot = [qg](double t) { return qg.deriv(t); };
  return CoefficientSet(std::move(p), t_end, false,
                        "random-smooth-" + std::to_string(seed));
}

TauSigma tau_sigma(const CoefficientSet& coeffs, double t) {
  const double a = coeffs.a(t);
  if (a == 0.0) throw std::invalid_argument("tau_sigma requires a(t) != 0");
  const double b = coeffs.b(t);
  const double c = coeffs.c(t);
  const double d = coeffs.d(t);
  const double da = coeffs.a_dot(t);
  const double dd = coeffs.d_dot(t);
  TauSigma out;
  out.tau = da / a - 2.0 * c + 4.0 * d;
  out.sigma = a * b - c * d + d * d + d * da / (2.0 * a) - 0.5 * dd;
  return out;
}

double derivative_consistency(const CoefficientSet& coeffs, int n_points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double T = coeffs.t_end();
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, T) * 0.1;
  const auto& knots = coeffs.knots();
  double worst = 0.0;
  int accepted = 0;
  int guard = 0;
  while (accepted < n_points && ++guard < 100 * n_points) {
    const double t = uniform(rng, 4.0 * h, T - 4.0 * h);
    if (!knots.empty()) {
      // The tabulated interpolant is C^1 only; difference across a knot.
      bool near = false;
      for (double k : knots)
        if (std::abs(t - k) < 4.0 * h) near = true;
      if (near) continue;
    }
    ++accepted;
    const std::pair<CoefficientSet::Fn, CoefficientSet::Fn> pairs[] = {
        {[&](double s) { return coeffs.a(s); }, [&](double s) { return coeffs.a_dot(s); }},
        {[&](double s) { return coeffs.c(s); }, [&](double s) { return coeffs.c_dot(s); }},
        {[&](double s) { return coeffs.d(s); }, [&](double s) { return coeffs.d_dot(s); }},
        {[&](double s) { return coeffs.g(s); }, [&](double s) { return coeffs.g_dot(s); }}};
    for (const auto& [fn, dfn] : pairs) {
      const double fd = (fn(t + h) - fn(t - h)) / (2.0 * h);
      const double an = dfn(t);
      const double scale = std::max({1.0, std::abs(fd), std::abs(an)});
      worst = std::max(worst, std::abs(fd - an) / scale);
    }
  }
  return worst;
}

}  // namespace qho
