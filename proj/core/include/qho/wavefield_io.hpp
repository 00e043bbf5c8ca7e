#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "qho/characteristic.hpp"
#include "qho/observables.hpp"
#include "qho/quantum.hpp"

namespace qho {

// Shortest round-trip decimal form (%.17g); goldens diff byte-for-byte.
std::string format17(double v);

// Columns: t,x,re_psi,im_psi,abs2. One row per (t,x) node, time-major.
std::string wave_field_csv(const WaveField& field);

// Same columns for a single slice.
std::string wave_slice_csv(const WaveSlice& slice);

// Columns: t,mu,alpha,beta,gamma,delta,epsilon,kappa.
std::string kernel_states_csv(std::span<const double> t_grid,
                              std::span<const KernelState> states);

// Columns: t,xbar,norm,xi_bar,tau. Pass empty xi_bar/tau to omit those columns.
std::string trajectory_csv(const Trajectory& traj, std::span<const double> xi_bar,
                           std::span<const double> tau);

// Columns: t,mu0,mu0_dot,mu1,mu1_dot,lambda,alpha0,beta0,gamma0,delta0,epsilon0,
// kappa0,maslov. Refuses caustic times (the kernel coefficients are singular there).
std::string fundamental_csv(const FundamentalSolution& fund, std::span<const double> t_grid);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

// Inverse of wave_slice_csv: expects the t,x,re_psi,im_psi[,...] header, one
// common t value, strictly increasing x. Extra columns are ignored.
WaveSlice parse_wave_slice_csv(const std::string& text);

}  // namespace qho
