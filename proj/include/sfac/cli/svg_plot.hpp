#pragma once

#include <string>
#include <vector>

namespace sfac::cli {

/// Standalone SVG scatter of (log10 k, log10 S) with an optional overlay
/// series drawn as a polyline.
std::string render_loglog_svg(const std::vector<double>& log_k, const std::vector<double>& log_s,
                              const std::vector<double>& overlay_log_k, const std::vector<double>& overlay_log_s,
                              const std::string& title);

}  // namespace sfac::cli
