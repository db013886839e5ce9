#pragma once

// Rotationally symmetric surfaces dt^2 + rho(t)^2 dtheta^2 satisfying
// Delta S + S^2/3 = c, integrated from a smooth pole by shooting.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bachlab/tolerances.hpp"

namespace bachlab::ode {

struct ProfileState {
  double t = 0.0;
  double rho = 0.0;
  double drho = 0.0;
  double S = 0.0;
  double dS = 0.0;
};

/// (rho', rho'', S', S'') with rho'' = -rho S / 2 and
/// S'' = c - S^2/3 - (rho'/rho) S'. Throws DomainError for rho <= 0.
std::array<double, 4> rhs(const ProfileState& s, double c);

/// Series data at t = eps for a smooth pole with S(0) = S0.
ProfileState pole_series(double S0, double c, double eps);

enum class Outcome { Closed, CompleteOpen, CurvatureBlowUp, StepFailure };
std::string to_string(Outcome o);

struct Controls {
  double epsilon = 1e-6;   // launch time
  double delta = 1e-4;     // closure event: rho < delta with rho' < 0
  double t_max = 20.0;
  double rtol = 1e-10;
  double atol = 1e-13;
  double blowup = 1e6;     // |S| beyond this is a curvature blow-up
  double cap = 1e-4;       // |rho' + 1| and |S'| allowed at the event
  std::size_t max_steps = 200000;
  bool keep_trajectory = false;

  static Controls from(const Tolerances& tol);
};

struct ProfileResult {
  Outcome outcome = Outcome::CompleteOpen;
  std::optional<double> t_close;  // rho extrapolated to zero from the event
  double S_min = 0.0, S_max = 0.0;
  ProfileState last;
  std::size_t steps = 0;
  std::string message;
  std::vector<ProfileState> trajectory;  // step endpoints when requested
};

ProfileResult integrate_profile(double S0, double c, const Controls& ctl);

struct Grid {
  double lo = 0.0, hi = 0.0;
  std::size_t count = 0;
  std::vector<double> values() const;
};

struct ScanConfig {
  Grid S0{-4.0, 4.0, 41};
  Grid c{-2.0, 2.0, 41};
  std::vector<std::array<double, 2>> extra{{2.0, 4.0 / 3.0}, {0.5, 1.0 / 12.0}};
  Controls controls;
  double closed_srange = 1e-5;
};

/// {"S0": {"min", "max", "count"}, "c": {...}, "extra": [[S0, c], ...],
///  "epsilon", "delta", "t_max", "rtol", "atol", "blowup", "cap",
///  "closed_srange"}; missing keys keep the defaults.
ScanConfig scan_config_from_json(const std::string& text);
ScanConfig scan_config_from_file(const std::string& path);

struct ScanRow {
  double S0 = 0.0, c = 0.0;
  ProfileResult result;
};

struct ScanReport {
  std::vector<ScanRow> rows;
  std::size_t closed = 0, open = 0, blowup = 0, failures = 0;
  double max_closed_srange = 0.0;
  /// Every Closed outcome has S_max - S_min <= closed_srange.
  bool corroborates = true;
};

/// Grid cells (S0 major), then the extra cells. Cells run in parallel.
ScanReport scan(const ScanConfig& cfg);

std::string scan_csv(const ScanReport& r);
std::string scan_json(const ScanReport& r);

}  // namespace bachlab::ode
