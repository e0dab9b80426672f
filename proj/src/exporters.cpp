#include "becsense/exporters.hpp"

#include <cstdio>

#include <json.hpp>

#include "becsense/config.hpp"

namespace becsense::io {

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

std::string sensing_result_json(const config::RunConfig& cfg,
                                const sensing::SensingResult& res) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["schema_version"] = 1;
    j["inputs"] = ordered_json::parse(config::serialize_config(cfg));

    auto num = [](double v) { return format_sci(v); };
    ordered_json inter;
    inter["eps_eff"] = num(res.eps_eff);
    inter["resonator_length_m"] = num(res.resonator_length);
    inter["mode_volume_m3"] = num(res.mode_volume);
    inter["b_max_tesla"] = num(res.b_max);
    inter["b_cqed_tesla"] = num(res.b_cqed);
    inter["b_x_unattenuated_tesla"] = num(res.b_x_unattenuated);
    inter["b_x_attenuated_tesla"] = num(res.b_x_attenuated);
    inter["eta_rad_per_s"] = num(res.eta);
    inter["bandwidth_over_linewidth"] = num(res.monochromatic_ratio);
    inter["dbar_volume_integral_m3"] = num(res.dbar_volume_integral);
    j["intermediates"] = inter;

    ordered_json rates;
    rates["primary_is_attenuated"] = res.primary_is_attenuated;
    rates["atom_rate_per_s"] = num(res.atom_rate);
    rates["atom_rate_unattenuated_per_s"] = num(res.atom_rate_unattenuated);
    rates["atom_rate_attenuated_per_s"] = num(res.atom_rate_attenuated);
    rates["quadrature_error_per_s"] = num(res.quadrature_error);
    rates["converged"] = res.converged;
    ordered_json study = ordered_json::array();
    for (const auto& [radius, rate] : res.radius_study)
        study.push_back({{"radius_m", num(radius)}, {"atom_rate_per_s", num(rate)}});
    rates["radius_study"] = study;
    j["results"] = rates;
    j["warnings"] = res.warnings;
    return j.dump(2) + "\n";
}

}  // namespace becsense::io
