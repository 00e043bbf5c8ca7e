#include "qho/wavefield_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace qho {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_row(std::string& out, std::initializer_list<double> vals) {
  bool first = true;
  for (double v : vals) {
    if (!first) out += ',';
    out += format17(v);
    first = false;
  }
  out += '\n';
}

}  // namespace

std::string wave_field_csv(const WaveField& field) {
  std::string out = "t,x,re_psi,im_psi,abs2\n";
  out.reserve(out.size() + 96 * field.values.size());
  for (std::size_t it = 0; it < field.nt(); ++it)
    for (std::size_t ix = 0; ix < field.nx(); ++ix) {
      const complexd v = field.at(it, ix);
      append_row(out, {field.t[it], field.x[ix], v.real(), v.imag(), std::norm(v)});
    }
  return out;
}

std::string wave_slice_csv(const WaveSlice& slice) {
  if (slice.x.size() != slice.psi.size())
    throw std::invalid_argument("wave_slice_csv: mismatched x/psi sizes");
  std::string out = "t,x,re_psi,im_psi,abs2\n";
  for (std::size_t ix = 0; ix < slice.x.size(); ++ix) {
    const complexd v = slice.psi[ix];
    append_row(out, {slice.t, slice.x[ix], v.real(), v.imag(), std::norm(v)});
  }
  return out;
}

std::string kernel_states_csv(std::span<const double> t_grid,
                              std::span<const KernelState> states) {
  if (t_grid.size() != states.size())
    throw std::invalid_argument("kernel_states_csv: mismatched grid/state sizes");
  std::string out = "t,mu,alpha,beta,gamma,delta,epsilon,kappa\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    const KernelState& s = states[i];
    append_row(out, {t_grid[i], s.mu, s.alpha, s.beta, s.gamma, s.delta, s.epsilon,
                     s.kappa});
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj, std::span<const double> xi_bar,
                           std::span<const double> tau) {
  const std::size_t n = traj.t_grid.size();
  if (traj.xbar.size() != n || traj.norm.size() != n)
    throw std::invalid_argument("trajectory_csv: mismatched trajectory arrays");
  const bool with_xi = !xi_bar.empty();
  if (with_xi && (xi_bar.size() != n || tau.size() != n))
    throw std::invalid_argument("trajectory_csv: mismatched xi_bar/tau arrays");
  std::string out = with_xi ? "t,xbar,norm,xi_bar,tau\n" : "t,xbar,norm\n";
  for (std::size_t i = 0; i < n; ++i) {
    if (with_xi)
      append_row(out, {traj.t_grid[i], traj.xbar[i], traj.norm[i], xi_bar[i], tau[i]});
    else
      append_row(out, {traj.t_grid[i], traj.xbar[i], traj.norm[i]});
  }
  return out;
}

std::string fundamental_csv(const FundamentalSolution& fund,
                            std::span<const double> t_grid) {
  const CharacteristicSolution& s = fund.characteristic();
  std::string out =
      "t,mu0,mu0_dot,mu1,mu1_dot,lambda,alpha0,beta0,gamma0,delta0,epsilon0,kappa0,"
      "maslov\n";
  for (double t : t_grid) {
    append_row(out, {t, s.mu0(t), s.mu0_dot(t), s.mu1(t), s.mu1_dot(t), s.lambda(t),
                     fund.alpha0(t), fund.beta0(t), fund.gamma0(t), fund.delta0(t),
                     fund.epsilon0(t), fund.kappa0(t),
                     static_cast<double>(s.maslov_index(t))});
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return text;
}

WaveSlice parse_wave_slice_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("wave slice table is empty");
  if (line.rfind("t,x,re_psi,im_psi", 0) != 0)
    throw std::invalid_argument("wave slice table must start with header t,x,re_psi,im_psi");

  WaveSlice slice;
  bool first = true;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    double v[4];
    std::istringstream ls(line);
    std::string cell;
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(ls, cell, ','))
        throw std::invalid_argument("wave slice row " + std::to_string(row) +
                                    " has fewer than 4 columns");
      std::size_t pos = 0;
      v[i] = std::stod(cell, &pos);
    }
    if (first) {
      slice.t = v[0];
      first = false;
    } else if (std::abs(v[0] - slice.t) > 1e-12 * std::max(1.0, std::abs(slice.t))) {
      throw std::invalid_argument("wave slice table mixes several t values");
    }
    if (!slice.x.empty() && !(v[1] > slice.x.back()))
      throw std::invalid_argument("wave slice x column must be strictly increasing");
    slice.x.push_back(v[1]);
    slice.psi.emplace_back(v[2], v[3]);
  }
  if (slice.x.empty()) throw std::invalid_argument("wave slice table has no data rows");
  return slice;
}

}  // namespace qho
