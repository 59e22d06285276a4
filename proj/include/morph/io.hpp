#pragma once

#include <string>

#include "morph/analysis.hpp"
#include "morph/sim.hpp"

namespace morph {

/// Shortest round-trip decimal for a double.
std::string format_double(double v);

/// CSV with the fixed column order of SimRow; byte-identical for identical logs.
std::string log_to_csv(const SimLog& log);
void write_log_csv(const SimLog& log, const std::string& path);

/// Switch/violation events as a JSON sidecar.
std::string events_to_json(const SimLog& log);
void write_events_json(const SimLog& log, const std::string& path);

/// Certificate as JSON (matrices row-major).
std::string certificate_to_json(const StabilityCertificate& cert);

/// Four-panel plot script (angular velocity tracking, e_R, inertia estimates,
/// control effort) reading the CSV next to it.
std::string plot_script(const std::string& csv_name);

void write_text(const std::string& text, const std::string& path);

}  // namespace morph
