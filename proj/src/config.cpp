#include "becsense/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

namespace becsense::config {

namespace {

using nlohmann::ordered_json;

void reject_unknown(const ordered_json& j, const std::set<std::string>& allowed,
                    const std::string& block) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + (block.empty() ? key : block + "." + key) +
                              "'");
    }
}

template <typename T>
void read(const ordered_json& j, const std::string& block, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("unparseable value for key '" + block + "." + key + "'");
    }
}

void read_opt(const ordered_json& j, const std::string& block, const char* key,
              std::optional<double>& out) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
        out.reset();
        return;
    }
    double v = 0.0;
    read(j, block, key, v);
    out = v;
}

void require_positive(double v, const char* key) {
    if (!(v > 0.0)) throw ConfigError(std::string("key '") + key + "' must be > 0");
}

}  // namespace

cpw::CpwGeometry RunConfig::to_geometry() const {
    cpw::CpwGeometry g;
    g.strip_width = geometry.strip_width_um * 1e-6;
    g.gap = geometry.gap_um * 1e-6;
    g.ground_width = geometry.ground_width_um * 1e-6;
    g.substrate_thickness = geometry.substrate_thickness_um * 1e-6;
    g.eps_r = geometry.eps_r;
    return g;
}

double RunConfig::mode_omega() const { return 2.0 * pi * mode.frequency_ghz * 1e9; }

condensate::CondensateParams RunConfig::to_condensate() const {
    condensate::CondensateParams p;
    p.atom_number = condensate.atom_number;
    if (condensate.tf_radius_um) p.tf_radius = *condensate.tf_radius_um * 1e-6;
    if (condensate.trap_frequency_hz)
        p.trap_omega_y = 2.0 * pi * *condensate.trap_frequency_hz;
    p.b_offset = condensate.b_offset_mt * 1e-3;
    return p;
}

sensing::DetectionVolume RunConfig::to_detection_volume() const {
    sensing::DetectionVolume v;
    v.center_depth = sensing.detection_center_depth_um * 1e-6;
    v.height = sensing.detection_height_um * 1e-6;
    v.lateral_radius = sensing.detection_radius_um * 1e-6;
    return v;
}

double RunConfig::cpw_distance() const { return sensing.cpw_distance_um * 1e-6; }

quad::QuadratureSpec RunConfig::outer_spec() const {
    quad::QuadratureSpec s;
    s.rel_tol = quadrature.rel_tol_outer;
    s.abs_tol = quadrature.abs_tol;
    s.max_subdivisions = quadrature.max_subdivisions;
    s.tail_strategy = quadrature.tail_strategy == "fixed_upper_limit"
                          ? quad::TailStrategy::fixed_upper_limit
                          : quad::TailStrategy::successive_interval_convergence;
    return s;
}

quad::QuadratureSpec RunConfig::inner_spec() const {
    quad::QuadratureSpec s = outer_spec();
    s.rel_tol = quadrature.rel_tol_inner;
    return s;
}

RunConfig parse_config(const std::string& text) {
    ordered_json j;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        j = ordered_json::object();
    } else {
        try {
            j = ordered_json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    reject_unknown(j,
                   {"schema_version", "geometry", "mode", "condensate", "sensing",
                    "quadrature", "field_map", "dfunc_sweep", "sweep", "output"},
                   "");

    RunConfig cfg;
    if (j.contains("schema_version")) {
        const int v = j.at("schema_version").get<int>();
        if (v != 1) throw ConfigError("unsupported schema_version (expected 1)");
    }

    if (j.contains("geometry")) {
        const auto& b = j.at("geometry");
        reject_unknown(
            b, {"strip_width_um", "gap_um", "ground_width_um", "substrate_thickness_um",
                "eps_r"},
            "geometry");
        read(b, "geometry", "strip_width_um", cfg.geometry.strip_width_um);
        read(b, "geometry", "gap_um", cfg.geometry.gap_um);
        read(b, "geometry", "ground_width_um", cfg.geometry.ground_width_um);
        read(b, "geometry", "substrate_thickness_um", cfg.geometry.substrate_thickness_um);
        read(b, "geometry", "eps_r", cfg.geometry.eps_r);
    }
    if (j.contains("mode")) {
        const auto& b = j.at("mode");
        reject_unknown(b, {"frequency_ghz", "quality_factor", "n_transverse"}, "mode");
        read(b, "mode", "frequency_ghz", cfg.mode.frequency_ghz);
        read(b, "mode", "quality_factor", cfg.mode.quality_factor);
        read(b, "mode", "n_transverse", cfg.mode.n_transverse);
    }
    if (j.contains("condensate")) {
        const auto& b = j.at("condensate");
        reject_unknown(b, {"atom_number", "tf_radius_um", "trap_frequency_hz", "b_offset_mt"},
                       "condensate");
        read(b, "condensate", "atom_number", cfg.condensate.atom_number);
        read_opt(b, "condensate", "tf_radius_um", cfg.condensate.tf_radius_um);
        read_opt(b, "condensate", "trap_frequency_hz", cfg.condensate.trap_frequency_hz);
        read(b, "condensate", "b_offset_mt", cfg.condensate.b_offset_mt);
    }
    if (j.contains("sensing")) {
        const auto& b = j.at("sensing");
        reject_unknown(b,
                       {"cpw_distance_um", "detection_center_depth_um",
                        "detection_height_um", "detection_radius_um",
                        "use_attenuated_field"},
                       "sensing");
        read(b, "sensing", "cpw_distance_um", cfg.sensing.cpw_distance_um);
        read(b, "sensing", "detection_center_depth_um",
             cfg.sensing.detection_center_depth_um);
        read(b, "sensing", "detection_height_um", cfg.sensing.detection_height_um);
        read(b, "sensing", "detection_radius_um", cfg.sensing.detection_radius_um);
        read(b, "sensing", "use_attenuated_field", cfg.sensing.use_attenuated_field);
    }
    if (j.contains("quadrature")) {
        const auto& b = j.at("quadrature");
        reject_unknown(
            b, {"rel_tol_inner", "rel_tol_outer", "abs_tol", "max_subdivisions",
                "tail_strategy"},
            "quadrature");
        read(b, "quadrature", "rel_tol_inner", cfg.quadrature.rel_tol_inner);
        read(b, "quadrature", "rel_tol_outer", cfg.quadrature.rel_tol_outer);
        read(b, "quadrature", "abs_tol", cfg.quadrature.abs_tol);
        read(b, "quadrature", "max_subdivisions", cfg.quadrature.max_subdivisions);
        read(b, "quadrature", "tail_strategy", cfg.quadrature.tail_strategy);
        if (cfg.quadrature.tail_strategy != "successive_interval_convergence" &&
            cfg.quadrature.tail_strategy != "fixed_upper_limit")
            throw ConfigError("key 'quadrature.tail_strategy' must be "
                              "'successive_interval_convergence' or 'fixed_upper_limit'");
    }
    if (j.contains("field_map")) {
        const auto& b = j.at("field_map");
        reject_unknown(b,
                       {"x_min_um", "x_max_um", "nx", "y_min_um", "y_max_um", "ny",
                        "z_frac_min", "z_frac_max", "nz", "v0_volts"},
                       "field_map");
        read(b, "field_map", "x_min_um", cfg.field_map.x_min_um);
        read(b, "field_map", "x_max_um", cfg.field_map.x_max_um);
        read(b, "field_map", "nx", cfg.field_map.nx);
        read(b, "field_map", "y_min_um", cfg.field_map.y_min_um);
        read(b, "field_map", "y_max_um", cfg.field_map.y_max_um);
        read(b, "field_map", "ny", cfg.field_map.ny);
        read(b, "field_map", "z_frac_min", cfg.field_map.z_frac_min);
        read(b, "field_map", "z_frac_max", cfg.field_map.z_frac_max);
        read(b, "field_map", "nz", cfg.field_map.nz);
        read(b, "field_map", "v0_volts", cfg.field_map.v0_volts);
    }
    if (j.contains("dfunc_sweep")) {
        const auto& b = j.at("dfunc_sweep");
        reject_unknown(b,
                       {"detuning_min_khz", "detuning_max_khz", "n_detuning", "r_perp_um",
                        "depths_um"},
                       "dfunc_sweep");
        read(b, "dfunc_sweep", "detuning_min_khz", cfg.dfunc_sweep.detuning_min_khz);
        read(b, "dfunc_sweep", "detuning_max_khz", cfg.dfunc_sweep.detuning_max_khz);
        read(b, "dfunc_sweep", "n_detuning", cfg.dfunc_sweep.n_detuning);
        read(b, "dfunc_sweep", "r_perp_um", cfg.dfunc_sweep.r_perp_um);
        read(b, "dfunc_sweep", "depths_um", cfg.dfunc_sweep.depths_um);
    }
    if (j.contains("sweep")) {
        const auto& b = j.at("sweep");
        reject_unknown(b, {"parameter", "values"}, "sweep");
        read(b, "sweep", "parameter", cfg.sweep.parameter);
        read(b, "sweep", "values", cfg.sweep.values);
    }
    if (j.contains("output")) {
        const auto& b = j.at("output");
        reject_unknown(b, {"directory", "format"}, "output");
        read(b, "output", "directory", cfg.output.directory);
        read(b, "output", "format", cfg.output.format);
        if (cfg.output.format != "csv" && cfg.output.format != "json")
            throw ConfigError("key 'output.format' must be 'csv' or 'json'");
    }

    // Validation with key context -------------------------------------------
    require_positive(cfg.geometry.strip_width_um, "geometry.strip_width_um");
    require_positive(cfg.geometry.gap_um, "geometry.gap_um");
    require_positive(cfg.geometry.ground_width_um, "geometry.ground_width_um");
    require_positive(cfg.geometry.substrate_thickness_um,
                     "geometry.substrate_thickness_um");
    if (!(cfg.geometry.eps_r >= 1.0)) throw ConfigError("key 'geometry.eps_r' must be >= 1");
    require_positive(cfg.mode.frequency_ghz, "mode.frequency_ghz");
    require_positive(cfg.mode.quality_factor, "mode.quality_factor");
    if (cfg.mode.n_transverse < 1)
        throw ConfigError("key 'mode.n_transverse' must be >= 1");
    if (!(cfg.condensate.atom_number >= 1.0))
        throw ConfigError("key 'condensate.atom_number' must be >= 1");
    if (!cfg.condensate.tf_radius_um && !cfg.condensate.trap_frequency_hz)
        throw ConfigError(
            "need 'condensate.tf_radius_um' or 'condensate.trap_frequency_hz'");
    if (cfg.condensate.tf_radius_um)
        require_positive(*cfg.condensate.tf_radius_um, "condensate.tf_radius_um");
    if (cfg.condensate.trap_frequency_hz)
        require_positive(*cfg.condensate.trap_frequency_hz, "condensate.trap_frequency_hz");
    if (cfg.condensate.b_offset_mt < 0.0)
        throw ConfigError("key 'condensate.b_offset_mt' must be >= 0");
    require_positive(cfg.sensing.cpw_distance_um, "sensing.cpw_distance_um");
    require_positive(cfg.sensing.detection_center_depth_um,
                     "sensing.detection_center_depth_um");
    require_positive(cfg.sensing.detection_height_um, "sensing.detection_height_um");
    require_positive(cfg.sensing.detection_radius_um, "sensing.detection_radius_um");
    require_positive(cfg.quadrature.rel_tol_inner, "quadrature.rel_tol_inner");
    require_positive(cfg.quadrature.rel_tol_outer, "quadrature.rel_tol_outer");
    if (cfg.quadrature.abs_tol < 0.0)
        throw ConfigError("key 'quadrature.abs_tol' must be >= 0");
    if (cfg.quadrature.max_subdivisions < 8)
        throw ConfigError("key 'quadrature.max_subdivisions' must be >= 8");
    if (cfg.field_map.nx < 1 || cfg.field_map.ny < 1 || cfg.field_map.nz < 1)
        throw ConfigError("field_map grid counts must be >= 1");
    if (cfg.dfunc_sweep.n_detuning < 1)
        throw ConfigError("key 'dfunc_sweep.n_detuning' must be >= 1");
    if (cfg.dfunc_sweep.depths_um.empty())
        throw ConfigError("key 'dfunc_sweep.depths_um' must not be empty");
    if (cfg.sweep.values.empty()) throw ConfigError("key 'sweep.values' must not be empty");
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    ordered_json j;
    j["schema_version"] = 1;
    j["geometry"] = {{"strip_width_um", cfg.geometry.strip_width_um},
                     {"gap_um", cfg.geometry.gap_um},
                     {"ground_width_um", cfg.geometry.ground_width_um},
                     {"substrate_thickness_um", cfg.geometry.substrate_thickness_um},
                     {"eps_r", cfg.geometry.eps_r}};
    j["mode"] = {{"frequency_ghz", cfg.mode.frequency_ghz},
                 {"quality_factor", cfg.mode.quality_factor},
                 {"n_transverse", cfg.mode.n_transverse}};
    j["condensate"] = ordered_json::object();
    j["condensate"]["atom_number"] = cfg.condensate.atom_number;
    if (cfg.condensate.tf_radius_um)
        j["condensate"]["tf_radius_um"] = *cfg.condensate.tf_radius_um;
    else
        j["condensate"]["tf_radius_um"] = nullptr;
    if (cfg.condensate.trap_frequency_hz)
        j["condensate"]["trap_frequency_hz"] = *cfg.condensate.trap_frequency_hz;
    else
        j["condensate"]["trap_frequency_hz"] = nullptr;
    j["condensate"]["b_offset_mt"] = cfg.condensate.b_offset_mt;
    j["sensing"] = {{"cpw_distance_um", cfg.sensing.cpw_distance_um},
                    {"detection_center_depth_um", cfg.sensing.detection_center_depth_um},
                    {"detection_height_um", cfg.sensing.detection_height_um},
                    {"detection_radius_um", cfg.sensing.detection_radius_um},
                    {"use_attenuated_field", cfg.sensing.use_attenuated_field}};
    j["quadrature"] = {{"rel_tol_inner", cfg.quadrature.rel_tol_inner},
                       {"rel_tol_outer", cfg.quadrature.rel_tol_outer},
                       {"abs_tol", cfg.quadrature.abs_tol},
                       {"max_subdivisions", cfg.quadrature.max_subdivisions},
                       {"tail_strategy", cfg.quadrature.tail_strategy}};
    j["field_map"] = {{"x_min_um", cfg.field_map.x_min_um},
                      {"x_max_um", cfg.field_map.x_max_um},
                      {"nx", cfg.field_map.nx},
                      {"y_min_um", cfg.field_map.y_min_um},
                      {"y_max_um", cfg.field_map.y_max_um},
                      {"ny", cfg.field_map.ny},
                      {"z_frac_min", cfg.field_map.z_frac_min},
                      {"z_frac_max", cfg.field_map.z_frac_max},
                      {"nz", cfg.field_map.nz},
                      {"v0_volts", cfg.field_map.v0_volts}};
    j["dfunc_sweep"] = {{"detuning_min_khz", cfg.dfunc_sweep.detuning_min_khz},
                        {"detuning_max_khz", cfg.dfunc_sweep.detuning_max_khz},
                        {"n_detuning", cfg.dfunc_sweep.n_detuning},
                        {"r_perp_um", cfg.dfunc_sweep.r_perp_um},
                        {"depths_um", cfg.dfunc_sweep.depths_um}};
    j["sweep"] = {{"parameter", cfg.sweep.parameter}, {"values", cfg.sweep.values}};
    j["output"] = {{"directory", cfg.output.directory}, {"format", cfg.output.format}};
    return j.dump(2) + "\n";
}

void apply_tolerance_override(RunConfig& cfg, const std::string& key_value) {
    const auto eq = key_value.find('=');
    if (eq == std::string::npos)
        throw ConfigError("tolerance override must look like KEY=VALUE");
    const std::string key = key_value.substr(0, eq);
    const std::string val = key_value.substr(eq + 1);
    std::size_t used = 0;
    double num = 0.0;
    try {
        num = std::stod(val, &used);
    } catch (const std::exception&) {
        throw ConfigError("unparseable override value for '" + key + "'");
    }
    if (used != val.size()) throw ConfigError("unparseable override value for '" + key + "'");
    if (key == "rel_tol_inner")
        cfg.quadrature.rel_tol_inner = num;
    else if (key == "rel_tol_outer")
        cfg.quadrature.rel_tol_outer = num;
    else if (key == "abs_tol")
        cfg.quadrature.abs_tol = num;
    else if (key == "max_subdivisions")
        cfg.quadrature.max_subdivisions = static_cast<int>(num);
    else
        throw ConfigError("unknown tolerance override key '" + key + "'");
}

}  // namespace becsense::config
