#ifndef PCMTES_IO_CONFIG_HPP
#define PCMTES_IO_CONFIG_HPP

// JSON run configuration: every key optional, defaults from the nominal
// plant, unknown keys rejected with their path and source line.

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcmtes/engine/scenario.hpp"
#include "pcmtes/errors.hpp"
#include "pcmtes/plant.hpp"

namespace pcmtes {

enum class ModelKind { continuous, discrete };

inline std::string to_string(ModelKind m) { return m == ModelKind::continuous ? "continuous" : "discrete"; }

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "continuous") return ModelKind::continuous;
    if (s == "discrete") return ModelKind::discrete;
    throw ConfigError("model: expected 'continuous' or 'discrete', got '" + s + "'");
}

struct CompareOptions {
    bool enabled = false;
    std::vector<int> layers{10, 20, 50};
};

struct RunConfig {
    ModelKind model = ModelKind::discrete;
    int n_lay = 10;
    double dt = 1.0;
    InitialCharge initial = InitialCharge::discharged;
    double T_int0 = absent;
    Plant plant;
    OperatingInputs inputs;
    std::vector<ScenarioStep> scenario{{CycleMode::charging, 5.0 * 3600.0, OperatingInputs{}}};
    std::string out_dir = "out";
    std::string run_id = "run";
    CompareOptions compare;

    RunOptions run_options() const {
        RunOptions o;
        o.dt = dt;
        o.initial = initial;
        o.T_int0 = T_int0;
        return o;
    }

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("dt: must be positive");
        if (n_lay < 2) throw ConfigError("n_lay: the discrete model needs at least 2 layers");
        for (int n : compare.layers)
            if (n < 2) throw ConfigError("compare.layers: every entry must be at least 2");
        plant.validate();
        inputs.validate();
        for (std::size_t i = 0; i < scenario.size(); ++i) {
            try {
                scenario[i].validate();
            } catch (const ConfigError& e) {
                throw ConfigError("scenario[" + std::to_string(i) + "]: " + e.what());
            }
        }
    }
};

namespace detail {

using json = nlohmann::json;

inline int line_of_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the first occurrence of "key" used as an object key, 0 if unknown.
inline int line_of_key(const std::string& text, const std::string& key) {
    const std::string quoted = "\"" + key + "\"";
    std::size_t pos = 0;
    while ((pos = text.find(quoted, pos)) != std::string::npos) {
        std::size_t after = pos + quoted.size();
        while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
        if (after < text.size() && text[after] == ':') return line_of_offset(text, pos);
        pos = after;
    }
    return 0;
}

class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path, const std::string& text)
        : obj_(obj), path_(std::move(path)), text_(text) {
        if (!obj_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        std::string where = key;
        const std::string leaf = key.substr(key.find_last_of('.') == std::string::npos ? 0 : key.find_last_of('.') + 1);
        const int line = line_of_key(text_, leaf);
        if (line > 0) where += " (line " + std::to_string(line) + ")";
        throw ConfigError(where + ": " + msg);
    }

    const json* find(const std::string& key) {
        used_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() || it->is_null() ? nullptr : &*it;
    }

    void number(const std::string& key, double& dst) {
        if (const json* v = find(key)) {
            if (!v->is_number()) fail(key_path(key), "expected a number");
            dst = v->get<double>();
        }
    }

    void integer(const std::string& key, int& dst) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) fail(key_path(key), "expected an integer");
            dst = v->get<int>();
        }
    }

    void boolean(const std::string& key, bool& dst) {
        if (const json* v = find(key)) {
            if (!v->is_boolean()) fail(key_path(key), "expected true or false");
            dst = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& dst) {
        if (const json* v = find(key)) {
            if (!v->is_string()) fail(key_path(key), "expected a string");
            dst = v->get<std::string>();
        }
    }

    template <class F>
    void object(const std::string& key, F&& f) {
        if (const json* v = find(key)) {
            ObjectReader child(*v, key_path(key), text_);
            f(child);
            child.finish();
        }
    }

    // Rejects keys that were never asked for.
    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!used_.count(it.key())) fail(key_path(it.key()), "unknown key '" + it.key() + "'");
    }

    const std::string& text() const noexcept { return text_; }
    const std::string& path() const noexcept { return path_; }

private:
    const json& obj_;
    std::string path_;
    const std::string& text_;
    std::set<std::string> used_;
};

inline void read_inputs(ObjectReader& r, OperatingInputs& in) {
    r.number("mdot_ref", in.mdot_ref);
    r.number("mdot_sec", in.mdot_sec);
    r.number("T_sec_in", in.T_sec_in);
    r.number("T_ref_in", in.T_ref_in);
    r.number("h_ref_in", in.h_ref_in);
    r.number("T_env", in.T_env);
}

inline void read_pipe(ObjectReader& r, PipeSpec& p) {
    r.number("r_inner", p.r_inner);
    r.number("e_wall", p.e_wall);
    r.number("length", p.length);
    r.integer("count", p.count);
    r.number("kappa_wall", p.kappa_wall);
}

inline void read_linear(ObjectReader& r, const std::string& key, LinearProperty& p) {
    if (const json* v = r.find(key)) {
        if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
            r.fail(r.key_path(key), "expected [value_at_window_low, value_at_window_high]");
        p.at_low = (*v)[0].get<double>();
        p.at_high = (*v)[1].get<double>();
    }
}

inline void read_properties(ObjectReader& r, PropertyModel& m) {
    r.number("window_low", m.window_low);
    r.number("window_high", m.window_high);
    if (const json* fl = r.find("fluids")) {
        ObjectReader fr(*fl, r.key_path("fluids"), r.text());
        for (auto it = fl->begin(); it != fl->end(); ++it) {
            Fluid f;
            try {
                f = fluid_from_string(it.key());
            } catch (const ConfigError& e) {
                fr.fail(fr.key_path(it.key()), e.what());
            }
            fr.object(it.key(), [&](ObjectReader& p) {
                FluidModel& fm = m.model(f);
                read_linear(p, "rho", fm.rho);
                read_linear(p, "cp", fm.cp);
                read_linear(p, "kappa", fm.kappa);
                read_linear(p, "mu", fm.mu);
                read_linear(p, "beta", fm.beta);
                double sigma = fm.sigma.value_or(absent);
                p.number("sigma", sigma);
                if (present(sigma)) fm.sigma = sigma;
            });
        }
        fr.finish();
    }
}

inline void read_plant(ObjectReader& r, Plant& plant, bool& r_min_given) {
    r.object("pcm", [&](ObjectReader& p) {
        PcmSpec& s = plant.pcm;
        p.number("cp_liquid", s.cp_liquid);
        p.number("cp_solid", s.cp_solid);
        p.number("h_lat", s.h_lat);
        p.number("T_lat", s.T_lat);
        p.number("kappa_liquid", s.kappa_liquid);
        p.number("kappa_solid", s.kappa_solid);
        p.number("kappa_eff_multiplier", s.kappa_eff_multiplier);
        p.number("rho_liquid", s.rho_liquid);
        p.number("rho_solid", s.rho_solid);
        p.number("h_lat_minus_ref", s.h_lat_minus_ref);
    });
    r.object("capsule", [&](ObjectReader& p) {
        CapsuleGeometry& c = plant.capsule;
        p.number("r_max", c.r_max);
        double r_min = absent;
        p.number("r_min", r_min);
        r_min_given = present(r_min);
        if (r_min_given) c.r_min = r_min;
        p.number("e_wall", c.e_wall);
        p.number("kappa_wall", c.kappa_wall);
        p.integer("n_capsules", c.n_capsules);
    });
    r.object("ref_pipe", [&](ObjectReader& p) { read_pipe(p, plant.ref_pipe); });
    r.object("sec_pipe", [&](ObjectReader& p) { read_pipe(p, plant.sec_pipe); });
    r.object("refrigerant", [&](ObjectReader& p) {
        RefrigerantSpec& s = plant.refrigerant;
        p.number("h_lat", s.h_lat);
        p.number("rho_sat_liquid", s.rho_sat_liquid);
        p.number("rho_sat_vapour", s.rho_sat_vapour);
        p.number("sigma", s.sigma);
        p.number("h_sat_liquid", s.h_sat_liquid);
        p.number("chi_mean", s.chi_mean);
        p.number("P", s.P);
        p.number("T_sat", s.T_sat);
    });
    r.object("tank", [&](ObjectReader& p) {
        p.number("m_int", plant.tank.m_int);
        p.number("P_int", plant.tank.P_int);
        p.number("g", plant.tank.g);
        p.number("T_env", plant.tank.T_env);
    });
    r.object("properties", [&](ObjectReader& p) { read_properties(p, plant.properties); });
}

} // namespace detail

// Parses configuration text. `source` names the origin in error messages.
inline RunConfig parse_config(const std::string& text, const std::string& source = "<config>") {
    using detail::json;
    RunConfig cfg;
    const bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    json root = json::object();
    if (!blank) {
        try {
            root = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(source + ": parse error at line " +
                              std::to_string(detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0)) + ": " + e.what());
        }
    }
    try {
        detail::ObjectReader r(root, "", text);
        std::string s = to_string(cfg.model);
        r.string("model", s);
        cfg.model = model_kind_from_string(s);
        r.integer("n_lay", cfg.n_lay);
        r.number("dt", cfg.dt);
        std::string init = "discharged";
        r.string("initial_state", init);
        if (init == "discharged") cfg.initial = InitialCharge::discharged;
        else if (init == "charged") cfg.initial = InitialCharge::charged;
        else r.fail("initial_state", "expected 'discharged' or 'charged'");
        r.number("T_int0", cfg.T_int0);

        bool r_min_given = false;
        detail::read_plant(r, cfg.plant, r_min_given);
        if (!r_min_given) cfg.plant.capsule.r_min = mass_conserving_r_min(cfg.plant.capsule.r_max, cfg.plant.pcm);

        r.object("inputs", [&](detail::ObjectReader& p) { detail::read_inputs(p, cfg.inputs); });

        if (const json* sc = r.find("scenario")) {
            if (!sc->is_array()) r.fail("scenario", "expected a list of steps");
            cfg.scenario.clear();
            for (std::size_t i = 0; i < sc->size(); ++i) {
                detail::ObjectReader step((*sc)[i], "scenario[" + std::to_string(i) + "]", text);
                ScenarioStep st;
                st.inputs = cfg.inputs;
                std::string mode;
                step.string("mode", mode);
                if (mode.empty()) step.fail(step.key_path("mode"), "missing step mode");
                try {
                    st.mode = cycle_mode_from_string(mode);
                } catch (const ConfigError& e) {
                    step.fail(step.key_path("mode"), e.what());
                }
                step.number("duration_s", st.duration);
                step.object("inputs", [&](detail::ObjectReader& p) { detail::read_inputs(p, st.inputs); });
                step.finish();
                cfg.scenario.push_back(st);
            }
        } else {
            for (ScenarioStep& st : cfg.scenario) st.inputs = cfg.inputs;
        }
        r.object("output", [&](detail::ObjectReader& p) {
            p.string("dir", cfg.out_dir);
            p.string("run_id", cfg.run_id);
        });
        r.object("compare", [&](detail::ObjectReader& p) {
            p.boolean("enabled", cfg.compare.enabled);
            if (const json* v = p.find("layers")) {
                if (!v->is_array()) p.fail(p.key_path("layers"), "expected a list of layer counts");
                cfg.compare.layers.clear();
                for (const json& n : *v) {
                    if (!n.is_number_integer()) p.fail(p.key_path("layers"), "expected integers");
                    cfg.compare.layers.push_back(n.get<int>());
                }
            }
        });
        r.finish();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    cfg.validate();
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

namespace detail {

inline json inputs_json(const OperatingInputs& in) {
    return {{"mdot_ref", in.mdot_ref}, {"mdot_sec", in.mdot_sec}, {"T_sec_in", in.T_sec_in},
            {"T_ref_in", in.T_ref_in}, {"h_ref_in", in.h_ref_in}, {"T_env", in.T_env}};
}

inline json pipe_json(const PipeSpec& p) {
    return {{"r_inner", p.r_inner}, {"e_wall", p.e_wall}, {"length", p.length}, {"count", p.count},
            {"kappa_wall", p.kappa_wall}};
}

} // namespace detail

// Fully resolved configuration; loading it back reproduces the same config.
inline nlohmann::json config_to_json(const RunConfig& c) {
    using detail::json;
    const Plant& p = c.plant;
    json fluids = json::object();
    for (std::size_t i = 0; i < p.properties.fluids.size(); ++i) {
        const FluidModel& m = p.properties.fluids[i];
        json f = {{"rho", {m.rho.at_low, m.rho.at_high}},
                  {"cp", {m.cp.at_low, m.cp.at_high}},
                  {"kappa", {m.kappa.at_low, m.kappa.at_high}},
                  {"mu", {m.mu.at_low, m.mu.at_high}},
                  {"beta", {m.beta.at_low, m.beta.at_high}}};
        if (m.sigma) f["sigma"] = *m.sigma;
        fluids[std::string(fluid_names[i])] = f;
    }
    json scenario = json::array();
    for (const ScenarioStep& s : c.scenario)
        scenario.push_back({{"mode", std::string(to_string(s.mode))}, {"duration_s", s.duration},
                            {"inputs", detail::inputs_json(s.inputs)}});
    json out = {
        {"model", to_string(c.model)},
        {"n_lay", c.n_lay},
        {"dt", c.dt},
        {"initial_state", c.initial == InitialCharge::discharged ? "discharged" : "charged"},
        {"T_int0", present(c.T_int0) ? json(c.T_int0) : json(nullptr)},
        {"pcm",
         {{"cp_liquid", p.pcm.cp_liquid}, {"cp_solid", p.pcm.cp_solid}, {"h_lat", p.pcm.h_lat},
          {"T_lat", p.pcm.T_lat}, {"kappa_liquid", p.pcm.kappa_liquid}, {"kappa_solid", p.pcm.kappa_solid},
          {"kappa_eff_multiplier", p.pcm.kappa_eff_multiplier}, {"rho_liquid", p.pcm.rho_liquid},
          {"rho_solid", p.pcm.rho_solid}, {"h_lat_minus_ref", p.pcm.h_lat_minus_ref}}},
        {"capsule",
         {{"r_max", p.capsule.r_max}, {"r_min", p.capsule.r_min}, {"e_wall", p.capsule.e_wall},
          {"kappa_wall", p.capsule.kappa_wall}, {"n_capsules", p.capsule.n_capsules}}},
        {"ref_pipe", detail::pipe_json(p.ref_pipe)},
        {"sec_pipe", detail::pipe_json(p.sec_pipe)},
        {"refrigerant",
         {{"h_lat", p.refrigerant.h_lat}, {"rho_sat_liquid", p.refrigerant.rho_sat_liquid},
          {"rho_sat_vapour", p.refrigerant.rho_sat_vapour}, {"sigma", p.refrigerant.sigma},
          {"h_sat_liquid", p.refrigerant.h_sat_liquid}, {"chi_mean", p.refrigerant.chi_mean},
          {"P", p.refrigerant.P}, {"T_sat", p.refrigerant.T_sat}}},
        {"tank", {{"m_int", p.tank.m_int}, {"P_int", p.tank.P_int}, {"g", p.tank.g}, {"T_env", p.tank.T_env}}},
        {"properties",
         {{"window_low", p.properties.window_low}, {"window_high", p.properties.window_high}, {"fluids", fluids}}},
        {"inputs", detail::inputs_json(c.inputs)},
        {"scenario", scenario},
        {"output", {{"dir", c.out_dir}, {"run_id", c.run_id}}},
        {"compare", {{"enabled", c.compare.enabled}, {"layers", c.compare.layers}}},
    };
    return out;
}

} // namespace pcmtes

#endif
