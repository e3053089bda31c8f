#ifndef DAVIDENKO_IO_HPP
#define DAVIDENKO_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "davidenko/config.hpp"
#include "davidenko/flow.hpp"
#include "davidenko/frontends.hpp"

namespace davidenko {

/// Parse a JSON config file mirroring SolverConfig. Absent fields keep their
/// defaults; unknown fields are an error.
inline SolverConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config parse error in " + path + ": " + e.what());
    }
    if (!j.is_object())
        throw std::runtime_error("config file must hold a JSON object: " + path);

    SolverConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "step_rel_tol") cfg.step_rel_tol = value.get<double>();
            else if (key == "step_abs_tol") cfg.step_abs_tol = value.get<double>();
            else if (key == "drift_tol") cfg.drift_tol = value.get<double>();
            else if (key == "corrector_max_iters") cfg.corrector_max_iters = value.get<int>();
            else if (key == "boundary_epsilon") cfg.boundary_epsilon = value.get<double>();
            else if (key == "condition_max") cfg.condition_max = value.get<double>();
            else if (key == "max_steps") cfg.max_steps = value.get<int>();
            else if (key == "min_step") cfg.min_step = value.get<double>();
            else if (key == "zero_radius") cfg.zero_radius = value.get<double>();
            else if (key == "fd_step") cfg.fd_step = value.get<double>();
            else
                throw std::runtime_error("unknown config field '" + key + "' in " + path);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("config field '" + key + "' in " + path +
                                     " has the wrong type: " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

namespace detail {

// 17 significant digits: lossless round-trip of IEEE doubles
inline std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string g17_array(const Vector& v) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += g17(v[i]);
    }
    s += "]";
    return s;
}

}  // namespace detail

/// One JSONL line per trace state:
/// {"step":i,"t":...,"x":[...],"residual":...,"step_size":...,"event":...}
inline void write_trace_jsonl(const Trace& trace, std::ostream& out) {
    for (size_t i = 0; i < trace.states.size(); ++i) {
        const auto& s = trace.states[i];
        std::string event;
        for (const auto& ev : trace.events) {
            if (ev.t == s.t) {
                if (!event.empty()) event += "+";
                event += ev.kind;
            }
        }
        out << "{\"step\":" << i << ",\"t\":" << detail::g17(s.t)
            << ",\"x\":" << detail::g17_array(s.x)
            << ",\"residual\":" << detail::g17(s.residual)
            << ",\"step_size\":" << detail::g17(s.step_size) << ",\"event\":";
        if (event.empty())
            out << "null";
        else
            out << nlohmann::json(event).dump();
        out << "}\n";
    }
}

inline void write_trace_jsonl(const Trace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open trace file for writing: " + path);
    write_trace_jsonl(trace, out);
}

// ---------------------------------------------------------------------------
// JSON views of results (used by the summary files)

inline nlohmann::json to_json(const Vector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

inline nlohmann::json to_json(const ContinuationOutcome& oc) {
    nlohmann::json j;
    j["type"] = outcome_name(oc);
    if (const auto* iz = std::get_if<InteriorZero>(&oc)) {
        j["x1"] = to_json(iz->x1);
        j["residual"] = iz->residual;
    } else if (const auto* ba = std::get_if<BoundaryApproach>(&oc)) {
        j["tau"] = ba->tau;
        j["x_near"] = to_json(ba->x_near);
        j["residual"] = ba->residual;
        j["boundary_distance"] = ba->boundary_distance;
    } else if (const auto* sj = std::get_if<SingularJacobian>(&oc)) {
        j["t"] = sj->t;
        j["x"] = to_json(sj->x);
        j["condition"] = sj->condition;
    } else if (const auto* sf = std::get_if<StepFailure>(&oc)) {
        j["t"] = sf->t;
        j["reason"] = sf->reason;
    } else if (const auto* dv = std::get_if<Divergence>(&oc)) {
        j["t"] = dv->t;
        j["norm"] = dv->norm;
    }
    return j;
}

inline nlohmann::json to_json(const BoundaryConditionReport& rep) {
    nlohmann::json j;
    j["all_points_satisfy_some"] = rep.all_points_satisfy_some;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& c : rep.points) {
        nlohmann::json p;
        p["x"] = to_json(c.x);
        p["f_x"] = to_json(c.fx);
        p["cond1"] = c.cond1;
        p["cond2"] = c.cond2;
        p["cond3"] = c.cond3;
        p["cond4"] = c.cond4;
        pts.push_back(std::move(p));
    }
    j["points"] = std::move(pts);
    return j;
}

inline nlohmann::json to_json(const FixedPointResult& r) {
    nlohmann::json j;
    if (r.is_fixed()) {
        j["type"] = "fixed";
        j["x_hat"] = to_json(r.fixed().x_hat);
        j["residual"] = r.fixed().residual;
    } else if (r.is_eigenpair()) {
        j["type"] = "boundary_eigenpair";
        j["tau"] = r.eigenpair().tau;
        j["xi"] = to_json(r.eigenpair().xi);
        j["eigen_residual"] = r.eigenpair().eigen_residual;
        if (r.boundary_report)
            j["boundary_conditions"] = to_json(*r.boundary_report);
    } else {
        j["type"] = "failed";
        j["outcome"] = to_json(r.failure().outcome);
    }
    return j;
}

}  // namespace davidenko

#endif
