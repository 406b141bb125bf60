#pragma once

#include "rayleigh/compactification.hpp"
#include "rayleigh/flow.hpp"
#include "rayleigh/lienardcheck.hpp"
#include "rayleigh/limitcycle.hpp"
#include "rayleigh/localanalysis.hpp"
#include "rayleigh/portrait.hpp"
#include "rayleigh/vectorfield.hpp"

#include <optional>
#include <string>

namespace rayleigh {

// JSON schema for systems: {"P": [[i, j, "c"], ...], "Q": [...], "d": d}
// with coefficients as decimal strings when the expansion terminates and
// "num/den" otherwise. ChartSystem adds a "chart" field.
std::string to_json_string(const PlanarPolySystem& sys, int indent = 2);
PlanarPolySystem system_from_json(const std::string& text);

std::string to_json_string(const ChartSystem& cs, int indent = 2);
ChartSystem chart_from_json(const std::string& text);

std::string to_json_string(const EquilibriumReport& report, int indent = 2);
std::string to_json_string(const LimitCycleRecord& record, int indent = 2);
std::string to_json_string(const HypothesisReport& report, int indent = 2);
std::string to_json_string(const PortraitModel& model, int indent = 2);

std::string trajectory_csv(const Trajectory& trajectory);

std::string sweep_csv_header();
std::string sweep_csv_row(double a, int n, const std::optional<LimitCycleRecord>& record,
                          const std::string& status);

}  // namespace rayleigh
