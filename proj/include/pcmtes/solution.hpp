#ifndef PCMTES_SOLUTION_HPP
#define PCMTES_SOLUTION_HPP

#include <string>

#include "pcmtes/continuous/submodels.hpp"
#include "pcmtes/plant.hpp"

namespace pcmtes {

// The per-step algebraic quantities of either model. Heat flows are per
// element (capsule or pipe) and positive out of the intermediate fluid.
struct AlgebraicSolution {
    double T_int_consistency = absent;
    double T_pcm = absent;
    double T_pcm_wall = absent;
    double T_ref_out = absent;
    double h_ref_out = absent;
    double T_ref2_wall = absent;
    double T_refv_wall = absent;
    double T_sec_out = absent;
    double T_sec_wall = absent;
    double r_echo = absent;
    double r_pcm_echo = absent;
    double zeta_ref = absent;
    double Q_pcm = 0.0;
    double Q_ref = absent;
    double Q_ref2 = absent;
    double Q_refv = absent;
    double Q_sec = absent;
    double Q_env = 0.0;
    int mode = 0;  // refrigerant outlet mode; 0 when the refrigerant is stopped
    double mode_margin = -1.0;
    HtcSnapshot htc;
    Diagnostics diag;

    // Net heat leaving the intermediate fluid, all elements included.
    double bath_outflow(const Plant& plant) const noexcept {
        return plant.ref_pipe.count * or_zero(Q_ref) + plant.sec_pipe.count * or_zero(Q_sec) +
               plant.capsule.n_capsules * Q_pcm + Q_env;
    }
};

// Something that happened inside a step (front collapse, a layer leaving the
// latent zone, a refrigerant outlet mode change).
struct EventRecord {
    double t = 0.0;
    std::string kind;
    int index = -1;  // layer number (1-based) where relevant
};

struct SubmodelCache {
    RefrigerantGuess refrigerant;
    double T_sec_out = absent;
    double T_pcm_wall = absent;
    int mode = 0;

    void accept(const AlgebraicSolution& s) {
        if (s.mode != mode) {
            // re-seed from neutral values
            refrigerant = {};
            T_sec_out = absent;
            mode = s.mode;
            return;
        }
        refrigerant = {s.zeta_ref, s.Q_ref2, s.T_ref_out};
        T_sec_out = s.T_sec_out;
        T_pcm_wall = s.T_pcm_wall;
    }
};

// Fills in the pipe-side quantities shared by both models.
inline void solve_pipe_side(const Plant& plant, const OperatingInputs& in, double T_int, const SubmodelCache& cache,
                            AlgebraicSolution& s) {
    const RefrigerantResult ref = refrigerant_submodel(plant, in, T_int, cache.refrigerant);
    if (ref.mode != 0) {
        s.mode = ref.mode;
        s.mode_margin = ref.mode_margin;
        s.Q_ref2 = ref.Q_ref2;
        s.Q_refv = ref.Q_refv;
        s.Q_ref = ref.Q_ref();
        s.zeta_ref = ref.zeta_ref;
        s.T_ref_out = ref.T_ref_out;
        s.h_ref_out = ref.h_ref_out;
        s.T_ref2_wall = ref.T_ref2_wall;
        s.T_refv_wall = ref.T_refv_wall;
        s.htc.alpha_ref2_int = ref.alpha_ref2_int;
        s.htc.alpha_ref2_ext = ref.alpha_ref2_ext;
        s.htc.alpha_refv_int = ref.alpha_refv_int;
        s.htc.alpha_refv_ext = ref.alpha_refv_ext;
        s.diag.merge(ref.diag);
    }
    const SecondaryResult sec = secondary_submodel(plant, in, T_int, cache.T_sec_out);
    if (sec.active) {
        s.Q_sec = sec.Q_sec;
        s.T_sec_out = sec.T_sec_out;
        s.T_sec_wall = sec.T_sec_wall;
        s.htc.alpha_sec_int = sec.alpha_int;
        s.htc.alpha_sec_ext = sec.alpha_ext;
        s.diag.merge(sec.diag);
    }
}

} // namespace pcmtes

#endif
