#ifndef PCMTES_IO_OUTPUT_HPP
#define PCMTES_IO_OUTPUT_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcmtes/engine/scenario.hpp"
#include "pcmtes/errors.hpp"

namespace pcmtes {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// 9 significant digits; absent or non-finite values become empty fields.
inline std::string format_field(double x) {
    if (!std::isfinite(x)) return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline std::vector<std::string> timeseries_header(const RunResult& r) {
    std::vector<std::string> h{"t_s", "mode", "T_int_C", "gamma"};
    h.insert(h.end(), r.state_columns.begin(), r.state_columns.end());
    for (const char* c : {"Q_pcm_W", "Q_ref_W", "Q_sec_W", "zeta_ref", "T_ref_out_C", "T_sec_out_C"}) h.emplace_back(c);
    return h;
}

inline void write_timeseries(const RunResult& r, std::ostream& os) {
    const std::vector<std::string> header = timeseries_header(r);
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const StepRecord& rec : r.records) {
        const AlgebraicSolution& a = rec.solution;
        os << format_field(rec.t) << ',' << to_string(rec.mode) << ',' << format_field(rec.T_int) << ','
           << format_field(rec.gamma);
        for (double v : rec.state_values) os << ',' << format_field(v);
        for (double v : {a.Q_pcm, a.Q_ref, a.Q_sec, a.zeta_ref, a.T_ref_out, a.T_sec_out}) os << ',' << format_field(v);
        os << '\n';
    }
}

inline void emit_timeseries(const RunResult& r, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw OutputError("cannot write '" + path + "'");
    write_timeseries(r, f);
    if (!f) throw OutputError("write failed for '" + path + "'");
}

namespace detail {

inline nlohmann::json number_or_null(double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

inline nlohmann::json energies_json(const InterfaceEnergies& e) {
    return {{"pcm_J", e.pcm}, {"ref_J", e.ref}, {"sec_J", e.sec}};
}

inline nlohmann::json range_json(const CoefficientRange& r) {
    return {{"min", number_or_null(r.min)}, {"max", number_or_null(r.max)}};
}

} // namespace detail

inline nlohmann::json summary_json(const RunResult& r) {
    using nlohmann::json;
    const RunSummary& s = r.summary;
    json steps = json::array();
    for (const StepSummary& st : s.steps)
        steps.push_back({{"mode", std::string(to_string(st.mode))},
                         {"t_start_s", st.t_start},
                         {"t_end_s", st.t_end},
                         {"gamma_start", st.gamma_start},
                         {"gamma_end", st.gamma_end},
                         {"T_int_start_C", st.T_int_start},
                         {"T_int_end_C", st.T_int_end},
                         {"delta_U_J", st.U_end - st.U_start},
                         {"energy", detail::energies_json(st.energy)},
                         {"cycle_duration_s", detail::number_or_null(st.completion_time)}});
    json events = json::array();
    for (const EventRecord& e : r.events) {
        json ev = {{"t_s", e.t}, {"kind", e.kind}};
        if (e.index >= 0) ev["layer"] = e.index;
        events.push_back(ev);
    }
    const HtcRanges& h = s.htc;
    return {
        {"model", r.model},
        {"n_layers", r.n_layers},
        {"records", r.records.size()},
        {"final_time_s", s.final_time},
        {"final_gamma", s.final_gamma},
        {"final_T_int_C", s.final_T_int},
        {"energy", detail::energies_json(s.energy)},
        {"delta_U_capsules_J", s.delta_U_capsules},
        {"steps", steps},
        {"events", events},
        {"htc_ranges_W_m2K",
         {{"pcm_ext", detail::range_json(h.pcm_ext)},
          {"ref2_int", detail::range_json(h.ref2_int)},
          {"ref2_ext", detail::range_json(h.ref2_ext)},
          {"refv_int", detail::range_json(h.refv_int)},
          {"refv_ext", detail::range_json(h.refv_ext)},
          {"sec_int", detail::range_json(h.sec_int)},
          {"sec_ext", detail::range_json(h.sec_ext)}}},
        {"warnings",
         {{"property_extrapolated_records", s.extrapolated_records},
          {"correlation_out_of_range_records", s.out_of_range_records}}},
    };
}

inline nlohmann::json comparison_json(const ComparisonReport& rep) {
    using nlohmann::json;
    json entries = json::array();
    double worst = 0.0;
    for (const ComparisonEntry& e : rep.entries) {
        entries.push_back({{"n_layers", e.n_layers},
                           {"max_rel_error", e.max_rel_error},
                           {"t_at_max_s", e.t_at_max},
                           {"final_rel_error", e.final_rel_error}});
        worst = std::max(worst, e.max_rel_error);
    }
    json runs = json::array();
    runs.push_back(summary_json(rep.continuous));
    for (const RunResult& d : rep.discrete) runs.push_back(summary_json(d));
    return {{"horizon_s", rep.horizon}, {"max_rel_error", worst}, {"entries", entries}, {"runs", runs}};
}

// Cumulative PCM energy of every run and the relative error of each discrete
// run, up to the comparison horizon.
inline void write_comparison_series(const ComparisonReport& rep, std::ostream& os) {
    os << "t_s,E_continuous_J";
    for (const RunResult& d : rep.discrete) os << ",E_n" << d.n_layers << "_J";
    for (const ComparisonEntry& e : rep.entries) os << ",rel_err_n" << e.n_layers;
    os << '\n';
    const RunResult& c = rep.continuous;
    std::size_t k = 0;  // index into rel_error, which skips zero-energy records
    for (std::size_t i = 0; i < c.records.size() && c.records[i].t <= rep.horizon + 1e-9; ++i) {
        const double ref = c.cumulative_pcm_energy[i];
        os << format_field(c.records[i].t) << ',' << format_field(ref);
        for (const RunResult& d : rep.discrete)
            os << ',' << format_field(i < d.cumulative_pcm_energy.size() ? d.cumulative_pcm_energy[i] : absent);
        for (const ComparisonEntry& e : rep.entries)
            os << ',' << format_field(ref != 0.0 && k < e.rel_error.size() ? e.rel_error[k] : absent);
        if (ref != 0.0) ++k;
        os << '\n';
    }
}

inline void write_json_file(const nlohmann::json& j, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw OutputError("cannot write '" + path + "'");
    f << j.dump(2) << '\n';
    if (!f) throw OutputError("write failed for '" + path + "'");
}

inline void emit_summary(const RunResult& r, const std::string& path) { write_json_file(summary_json(r), path); }
inline void emit_summary(const ComparisonReport& rep, const std::string& path) { write_json_file(comparison_json(rep), path); }

// Plain-text run log: one line per scenario step and per event.
inline void write_run_log(const RunResult& r, std::ostream& os) {
    os << "model " << r.model;
    if (r.n_layers > 0) os << " n_layers " << r.n_layers;
    os << '\n';
    std::size_t ev = 0;
    auto flush_events = [&](double until) {
        for (; ev < r.events.size() && r.events[ev].t <= until + 1e-9; ++ev) {
            const EventRecord& e = r.events[ev];
            os << "  t=" << format_field(e.t) << " s  " << e.kind;
            if (e.index >= 0) os << " layer " << e.index;
            os << '\n';
        }
    };
    for (const StepSummary& s : r.summary.steps) {
        os << "step " << to_string(s.mode) << " " << format_field(s.t_start) << " -> " << format_field(s.t_end)
           << " s  gamma " << format_field(s.gamma_start) << " -> " << format_field(s.gamma_end) << "  T_int "
           << format_field(s.T_int_start) << " -> " << format_field(s.T_int_end) << " C\n";
        flush_events(s.t_end);
        if (present(s.completion_time)) os << "  cycle finished after " << format_field(s.completion_time) << " s\n";
    }
    flush_events(r.summary.final_time);
    const RunSummary& s = r.summary;
    os << "final gamma " << format_field(s.final_gamma) << "  T_int " << format_field(s.final_T_int) << " C\n";
    os << "energy pcm " << format_field(s.energy.pcm) << " J  ref " << format_field(s.energy.ref) << " J  sec "
       << format_field(s.energy.sec) << " J  delta_U " << format_field(s.delta_U_capsules) << " J\n";
    if (s.extrapolated_records > 0)
        os << "warning: fluid properties extrapolated in " << s.extrapolated_records << " records\n";
    if (s.out_of_range_records > 0)
        os << "warning: correlation evaluated outside its validity range in " << s.out_of_range_records << " records\n";
}

} // namespace pcmtes

#endif
