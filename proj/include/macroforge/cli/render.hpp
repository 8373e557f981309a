#pragma once

#include <map>
#include <string>

#include "macroforge/exp/experiment.hpp"

namespace macroforge::cli {

/// Aligned plain-text tables for a report: arm summary, the generation
/// table when a GA ran, and the reduction table for transferability runs.
std::string render_report_tables(const exp::Report& report);

/// Per-arm plot data, ready for any plotting tool. Keys are file names like
/// `plot_dense_macro.csv`; each value is a CSV with header
/// `timestep,mean,ci_lo,ci_hi`.
std::map<std::string, std::string> render_plot_data(const exp::Report& report);

/// Minimal SVG line chart comparing the arms of one environment: one
/// polyline per arm, data extrema affinely mapped onto the plot area.
std::string render_svg(const exp::Report& report, const std::string& env_tag);

/// `task,vanilla_mean_steps,macro_mean_steps,reduction_pct` rows.
std::string transfer_table_csv(const exp::Report& report);

} // namespace macroforge::cli
