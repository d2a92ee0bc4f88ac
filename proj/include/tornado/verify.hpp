#pragma once

#include "tornado/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tornado {

struct VerifyLevel {
  int n_r = 0;
  int n_z = 0;
  std::size_t nodes = 0;
  double h = 0.0;
  double tau = 0.0;
  int steps = 0;
  double error_l2 = 0.0; // sqrt(e^T M e), e = v_h - I_h v
  double error_h1 = 0.0; // sqrt(e^T (M + K) e)
  double error_pressure_l2 = 0.0;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<VerifyLevel> levels;
  std::vector<double> order_l2; // between consecutive levels, log(e0/e1) / log(h0/h1)
  std::vector<double> order_h1;

  std::string to_csv() const;
  std::string to_text() const;
};

/// Manufactured-solution study on the straight domain: tau = tau_over_h * h,
/// adjusted down so every level ends exactly at T_end.
VerifyLevel run_verify_level(const VerifyConfig& verify, const DomainSpec& domain, double delta_s0, int n_r);
VerifyReport run_convergence_study(const VerifyConfig& verify, const DomainSpec& domain, double delta_s0 = 1.0);

struct VerifySummary {
  VerifyReport report;
  std::filesystem::path csv;
  std::filesystem::path text;
};
VerifySummary cmd_verify(const RunConfig& config);

} // namespace tornado
