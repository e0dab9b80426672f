#pragma once
// config.hpp — run configuration: one canonical JSON document.
//
// Units live in the key names (um, ghz, hz, mt, khz); conversion to SI and
// angular frequencies happens exactly once, in the to_* accessors.  Unknown
// keys are rejected by name, and every value is validated with its key in
// the message.  parse -> serialize -> parse is the identity.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "becsense/condensate.hpp"
#include "becsense/cpw.hpp"
#include "becsense/quadrature.hpp"
#include "becsense/sensing.hpp"

namespace becsense::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeometryBlock {
    double strip_width_um = 15.0;
    double gap_um = 10.0;
    double ground_width_um = 7.5;
    double substrate_thickness_um = 500.0;
    double eps_r = 11.5;
};

struct ModeBlock {
    double frequency_ghz = 6.8354;
    double quality_factor = 1.72e6;
    int n_transverse = 1;
};

struct CondensateBlock {
    double atom_number = 2.0e4;
    std::optional<double> tf_radius_um = 5.0;
    std::optional<double> trap_frequency_hz = 84.0;
    double b_offset_mt = 0.1;
};

struct SensingBlock {
    double cpw_distance_um = 5.0;
    double detection_center_depth_um = 65.0;
    double detection_height_um = 60.0;
    double detection_radius_um = 15.0;  // defaults to 3a for the reference cloud
    bool use_attenuated_field = false;
};

struct QuadratureBlock {
    double rel_tol_inner = 1e-6;
    double rel_tol_outer = 1e-4;
    double abs_tol = 0.0;
    int max_subdivisions = 200;
    std::string tail_strategy = "successive_interval_convergence";
};

struct FieldMapBlock {
    double x_min_um = 0.0, x_max_um = 0.0;
    int nx = 1;
    double y_min_um = -5.0, y_max_um = -5.0;
    int ny = 1;
    double z_frac_min = 0.5, z_frac_max = 0.5;  // fraction of the resonator length
    int nz = 1;
    double v0_volts = 0.0;  // 0 = use the single-photon slot voltage
};

struct DfuncSweepBlock {
    double detuning_min_khz = -10.0;
    double detuning_max_khz = 10.0;
    int n_detuning = 21;
    double r_perp_um = 0.0;
    std::vector<double> depths_um = {65.0};
};

struct SweepBlock {
    std::string parameter = "cpw_distance_um";
    std::vector<double> values = {5.0, 10.0, 15.0};
};

struct OutputBlock {
    std::string directory = ".";
    std::string format = "csv";  // csv | json where a choice exists
};

struct RunConfig {
    GeometryBlock geometry;
    ModeBlock mode;
    CondensateBlock condensate;
    SensingBlock sensing;
    QuadratureBlock quadrature;
    FieldMapBlock field_map;
    DfuncSweepBlock dfunc_sweep;
    SweepBlock sweep;
    OutputBlock output;

    // SI views -------------------------------------------------------------
    cpw::CpwGeometry to_geometry() const;
    double mode_omega() const;  // rad/s
    condensate::CondensateParams to_condensate() const;
    sensing::DetectionVolume to_detection_volume() const;
    double cpw_distance() const;  // m
    quad::QuadratureSpec outer_spec() const;
    quad::QuadratureSpec inner_spec() const;
};

/// Parse a JSON document; missing keys take defaults, unknown keys are
/// rejected with the offending key named.
RunConfig parse_config(const std::string& text);

/// Canonical serialization (fixed key order, shortest round-trip floats).
std::string serialize_config(const RunConfig& cfg);

/// Apply a KEY=VALUE override to the quadrature block.
void apply_tolerance_override(RunConfig& cfg, const std::string& key_value);

}  // namespace becsense::config
