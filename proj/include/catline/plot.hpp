#pragma once

#include <string>

namespace catline {

/// Render a trace CSV produced by this tool as a self-contained SVG line
/// chart of P_e, P_g and Z. The x axis is labeled from the CSV's first
/// column (time for trajectory traces, collision index for collision
/// traces). Throws ConfigError on malformed input.
void emit_plot(const std::string& csv_path, const std::string& svg_path);

}  // namespace catline
