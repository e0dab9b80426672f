#pragma once
// exporters.hpp — deterministic tabular output.
//
// All floating-point output goes through format_sci (scientific notation,
// nine significant digits) so identical configurations produce byte-identical
// files.

#include <string>
#include <vector>

#include "becsense/sensing.hpp"

namespace becsense::config {
struct RunConfig;
}

namespace becsense::io {

std::string format_sci(double v);

/// One CSV line from already-formatted cells.
std::string csv_line(const std::vector<std::string>& cells);

/// SensingResult as a versioned JSON document (inputs echoed, intermediates,
/// rates and warnings).
std::string sensing_result_json(const config::RunConfig& cfg,
                                const sensing::SensingResult& res);

}  // namespace becsense::io
