#ifndef PCMTES_TESTS_SUPPORT_HPP
#define PCMTES_TESTS_SUPPORT_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "pcmtes/engine/scenario.hpp"

namespace pcmtes::testing {

inline std::vector<ScenarioStep> single(CycleMode mode, double duration) {
    return {{mode, duration, OperatingInputs{}}};
}

inline std::vector<ScenarioStep> partial_sequence() {
    return {{CycleMode::charging, 3600.0, {}},
            {CycleMode::standby, 1800.0, {}},
            {CycleMode::discharging, 1800.0, {}},
            {CycleMode::standby, 1800.0, {}},
            {CycleMode::charging, 1800.0, {}}};
}

// Indices of the records that belong to scenario step i (its end points
// included).
inline std::pair<std::size_t, std::size_t> step_span(const RunResult& r, std::size_t i) {
    const StepSummary& st = r.summary.steps.at(i);
    std::size_t a = 0, b = 0;
    for (std::size_t k = 0; k < r.records.size(); ++k) {
        if (r.records[k].t <= st.t_start + 1e-9) a = k;
        if (r.records[k].t <= st.t_end + 1e-9) b = k;
    }
    return {a, b};
}

struct SequenceChecks {
    bool gamma_rises_in_first_standby = false;
    bool gamma_falls_in_second_standby = false;
    bool stuck_layer_in_discharge = false;
    int stuck_layer = -1;  // 1-based
    bool secondary_cooled = false;
};

// Behaviour of a charge / standby / discharge / standby / charge run.
inline SequenceChecks check_sequence(const RunResult& r, const PcmSpec& pcm) {
    SequenceChecks c;
    {
        const auto [a, b] = step_span(r, 1);
        bool ok = r.records[b].gamma > r.records[a].gamma;
        for (std::size_t k = a + 1; k <= b; ++k)
            if (r.records[k - 1].T_int < pcm.T_lat && r.records[k].gamma < r.records[k - 1].gamma) ok = false;
        c.gamma_rises_in_first_standby = ok;
    }
    {
        const auto [a, b] = step_span(r, 3);
        bool ok = r.records[b].gamma < r.records[a].gamma;
        for (std::size_t k = a + 1; k <= b; ++k)
            if (r.records[k - 1].T_int > pcm.T_lat && r.records[k].gamma > r.records[k - 1].gamma) ok = false;
        c.gamma_falls_in_second_standby = ok;
    }
    {
        const auto [a, b] = step_span(r, 2);
        const std::size_t n = r.records[a].state_values.size();
        // prefer a layer strictly inside the latent zone
        int best = -1;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            bool stuck = true, strict = true;
            for (std::size_t i = a; i <= b && stuck; ++i) {
                const std::vector<double>& h = r.records[i].state_values;
                stuck = is_latent(h[k - 1], pcm) && is_latent(h[k], pcm) && is_latent(h[k + 1], pcm) &&
                        h[k] == r.records[a].state_values[k];
                strict = strict && h[k] > pcm.h_lat_minus() && h[k] < pcm.h_lat_plus();
            }
            if (stuck && (best < 0 || strict)) best = static_cast<int>(k) + 1;
            if (stuck && strict) break;
        }
        c.stuck_layer = best;
        c.stuck_layer_in_discharge = best > 0;
    }
    {
        const auto [a, b] = step_span(r, 2);
        bool ok = b > a;
        for (std::size_t k = a + 1; k <= b; ++k) {
            const AlgebraicSolution& s = r.records[k].solution;
            if (!(present(s.T_sec_out) && s.T_sec_out < OperatingInputs{}.T_sec_in)) ok = false;
        }
        c.secondary_cooled = ok;
    }
    return c;
}

inline double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

} // namespace pcmtes::testing

#endif
