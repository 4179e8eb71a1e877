#include "tradepost/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "tradepost/cli/instance.hpp"
#include "tradepost/errors.hpp"

namespace tradepost::cli {

namespace {

void append_number(std::string& line, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    line.append(buf, ptr);
}

std::string index_name(const char* prefix, std::size_t i) {
    return std::string(prefix) + "_" + std::to_string(i + 1);
}

std::string index_name(const char* prefix, std::size_t i, std::size_t j) {
    return index_name(prefix, i) + "_" + std::to_string(j + 1);
}

std::vector<std::vector<std::size_t>> one_based(const std::vector<std::vector<std::size_t>>& groups) {
    auto out = groups;
    for (auto& g : out)
        for (auto& v : g) ++v;
    return out;
}

}  // namespace

std::string format_number(double v) {
    std::string s;
    append_number(s, v);
    return s;
}

nlohmann::json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const std::size_t n = traj.economy.size();
    const bool tft = traj.mode == Mode::kTft;
    const bool lyap = !tft && !traj.records.empty() && traj.records.front().lyapunov.has_value();

    std::string line = "t";
    if (tft) {
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) line += "," + index_name("y", j, i);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) line += "," + index_name("b", i, j);
        for (std::size_t i = 0; i < n; ++i) line += "," + index_name("B", i);
        for (std::size_t j = 0; j < n; ++j) line += "," + index_name("p", j);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) line += "," + index_name("x", i, j);
    for (std::size_t i = 0; i < n; ++i) line += "," + index_name("u", i);
    if (lyap) line += ",log_f,log_g,log_h,identity_residual";
    out << line << '\n';

    for (const TrajectoryRecord& r : traj.records) {
        line = std::to_string(r.t);
        auto put = [&line](double v) {
            line += ',';
            append_number(line, v);
        };
        if (tft) {
            for (double v : r.fractions.values()) put(v);
        } else {
            for (double v : r.bids.values()) put(v);
            for (double v : r.budget) put(v);
            for (double v : r.prices) put(v);
        }
        for (double v : r.allocation.values()) put(v);
        for (double v : r.utilities) put(v);
        if (lyap) {
            const LyapunovValues& l = *r.lyapunov;
            put(l.log_f);
            put(l.log_g);
            put(l.log_h);
            line += ',';
            if (l.identity_residual) append_number(line, *l.identity_residual);
        }
        out << line << '\n';
    }
}

nlohmann::json residuals_to_json(const ResidualReport& r) {
    return {{"clearing", r.clearing},
            {"budget", r.budget},
            {"optimality", r.optimality},
            {"support", r.support},
            {"worst", r.worst()}};
}

nlohmann::json certificate_to_json(const EquilibriumCertificate& c, double tol,
                                   const ResidualReport& residuals) {
    return {{"p_star", c.p_star},
            {"x_star", to_json(c.x_star)},
            {"u_star", c.u_star},
            {"b_star", to_json(c.b_star)},
            {"tol", tol},
            {"residuals", residuals_to_json(residuals)}};
}

EquilibriumCertificate certificate_from_json(const nlohmann::json& doc, const Economy& e) {
    try {
        Vector p = doc.at("p_star").get<Vector>();
        Matrix x = matrix_from_json(doc.at("x_star"), "x_star");
        if (p.size() != e.size() || x.rows() != e.size() || x.cols() != e.size())
            throw MalformedCertificateError("certificate does not match the instance size");
        return make_certificate(e, std::move(p), std::move(x));
    } catch (const nlohmann::json::exception& ex) {
        throw MalformedCertificateError(std::string("malformed certificate: ") + ex.what());
    } catch (const InstanceError& ex) {
        throw MalformedCertificateError(ex.what());
    }
}

nlohmann::json to_json(const CycleReport& r) {
    return {{"detected", r.detected},
            {"period", r.period},
            {"anchor_t", r.anchor_t},
            {"max_deviation", number_or_null(r.max_deviation)}};
}

nlohmann::json to_json(const Partition& p) { return one_based(p.classes); }

nlohmann::json to_json(const ClassStructure& s) {
    nlohmann::json lambda = nlohmann::json::array();
    for (const auto& series : s.lambda) {
        nlohmann::json row = nlohmann::json::array();
        for (double v : series) row.push_back(number_or_null(v));
        lambda.push_back(std::move(row));
    }
    return {{"classes", to_json(s.partition)},
            {"times", s.times},
            {"lambda", std::move(lambda)},
            {"max_within_class_spread", number_or_null(s.max_within_class_spread)},
            {"valid", s.valid},
            {"successors", one_based(s.successors)},
            {"classes_form_cycle", s.classes_form_cycle}};
}

nlohmann::json to_json(const LyapunovSummary& s) {
    return {{"steps", s.steps},
            {"max_identity_residual", number_or_null(s.max_identity_residual)},
            {"max_increase", number_or_null(s.max_increase)},
            {"max_log_g", number_or_null(s.max_log_g)},
            {"max_log_h", number_or_null(s.max_log_h)},
            {"min_log_f", number_or_null(s.min_log_f)}};
}

}  // namespace tradepost::cli
