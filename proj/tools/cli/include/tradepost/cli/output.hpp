#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "tradepost/analysis.hpp"
#include "tradepost/equilibrium.hpp"
#include "tradepost/trajectory.hpp"

namespace tradepost::cli {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// Header and one row per record. Money runs emit t, b_i_j, B_i, p_j, x_i_j,
/// u_i and, when the records carry them, log_f, log_g, log_h and
/// identity_residual (blank where undefined). Tit-for-tat runs emit t,
/// y_j_i, x_i_j, u_i. Indices are 1-based.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

nlohmann::json certificate_to_json(const EquilibriumCertificate& c, double tol,
                                   const ResidualReport& residuals);
/// Reads p_star and x_star (the rest is recomputed). Throws
/// MalformedCertificateError when either is missing or ill-shaped.
EquilibriumCertificate certificate_from_json(const nlohmann::json& doc, const Economy& e);
nlohmann::json residuals_to_json(const ResidualReport& r);

nlohmann::json to_json(const CycleReport& r);
/// Players are numbered from 1.
nlohmann::json to_json(const Partition& p);
nlohmann::json to_json(const ClassStructure& s);
nlohmann::json to_json(const LyapunovSummary& s);

/// Finite doubles as numbers, everything else as null.
nlohmann::json number_or_null(double v);

}  // namespace tradepost::cli
