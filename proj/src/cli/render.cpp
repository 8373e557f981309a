#include "macroforge/cli/render.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "macroforge/errors.hpp"

namespace macroforge::cli {

namespace {

std::string fixed(double v, int precision) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << v;
    return out.str();
}

void write_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) return;
    std::vector<std::size_t> width(rows.front().size(), 0);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << std::left << std::setw(static_cast<int>(width[c]) + 2) << row[c];
        }
        out << '\n';
    }
}

// Fixed arm palette, keyed by arm name with a fallback.
const char* arm_color(const std::string& arm) {
    if (arm == "vanilla") return "#7f7f7f";
    if (arm == "macro") return "#d62728";
    if (arm == "repeat") return "#1f77b4";
    return "#2ca02c";
}

} // namespace

std::string render_report_tables(const exp::Report& report) {
    std::ostringstream out;
    out << "mode: " << report.mode << "  generation: " << report.gen_method << " on "
        << report.gen_env << "  utilization: " << report.util_method << '\n';
    if (!report.macro_names.empty())
        out << "macro: (" << report.macro_names << ")"
            << (report.generated ? " fitness " + fixed(report.macro_fitness, 4) : "") << '\n';
    out << '\n';

    if (!report.generation_log.rows.empty()) {
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"generation", "avg_fitness", "improvement", "best_macro"});
        for (const auto& r : report.generation_log.rows) {
            const std::string improvement =
                r.improvement_pct ? "(" + fixed(*r.improvement_pct, 2) + "%)" : "";
            rows.push_back({std::to_string(r.generation), fixed(r.avg_fitness, 4),
                            improvement, r.best_macro.to_string(report.gen_action_names)});
        }
        write_table(out, rows);
        out << '\n';
    }

    {
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"env", "arm", "auc", "mean_return", "mean_steps", "success"});
        for (const auto& arm : report.arms)
            rows.push_back({arm.env_tag, arm.arm, fixed(arm.auc_aggregate, 4),
                            fixed(arm.eval_mean.mean_return, 4),
                            fixed(arm.eval_mean.mean_steps_to_goal, 2),
                            fixed(arm.eval_mean.success_rate, 2)});
        write_table(out, rows);
    }

    if (!report.transfer.empty()) {
        out << '\n';
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"task", "vanilla_steps", "macro_steps", "reduction"});
        for (const auto& row : report.transfer)
            rows.push_back({row.task, fixed(row.vanilla_mean_steps, 2),
                            fixed(row.macro_mean_steps, 2),
                            fixed(row.reduction_pct, 2) + "%"});
        write_table(out, rows);
    }
    return out.str();
}

std::map<std::string, std::string> render_plot_data(const exp::Report& report) {
    std::map<std::string, std::string> files;
    for (const auto& arm : report.arms) {
        std::ostringstream out;
        out << "timestep,mean,ci_lo,ci_hi\n";
        const auto& agg = arm.aggregated;
        for (std::size_t i = 0; i < agg.timestep.size(); ++i)
            out << agg.timestep[i] << ',' << agg.mean[i] << ',' << agg.ci_lo[i] << ','
                << agg.ci_hi[i] << '\n';
        files["plot_" + arm.env_tag + "_" + arm.arm + ".csv"] = out.str();
    }
    return files;
}

std::string render_svg(const exp::Report& report, const std::string& env_tag) {
    constexpr double kWidth = 640, kHeight = 400;
    constexpr double kLeft = 60, kRight = 620, kTop = 20, kBottom = 360;

    std::vector<const exp::ArmReport*> arms;
    for (const auto& arm : report.arms)
        if (arm.env_tag == env_tag) arms.push_back(&arm);
    if (arms.empty())
        throw InvalidArgumentError("report has no arms for environment '" + env_tag + "'");

    double tmin = 0, tmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    for (const auto* arm : arms) {
        const auto& agg = arm->aggregated;
        for (std::size_t i = 0; i < agg.timestep.size(); ++i) {
            const auto t = static_cast<double>(agg.timestep[i]);
            if (first) { tmin = tmax = t; ymin = ymax = agg.mean[i]; first = false; }
            tmin = std::min(tmin, t);
            tmax = std::max(tmax, t);
            ymin = std::min(ymin, agg.mean[i]);
            ymax = std::max(ymax, agg.mean[i]);
        }
    }
    if (tmax <= tmin) tmax = tmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;

    const auto x_of = [&](double t) { return kLeft + (t - tmin) / (tmax - tmin) * (kRight - kLeft); };
    const auto y_of = [&](double v) { return kBottom - (v - ymin) / (ymax - ymin) * (kBottom - kTop); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight
        << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
        << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
    svg << "  <text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 8
        << "\" text-anchor=\"middle\" font-size=\"12\">timestep</text>\n";
    svg << "  <text x=\"" << kLeft << "\" y=\"" << kTop - 6 << "\" font-size=\"12\">"
        << env_tag << " mean episode return</text>\n";

    int legend = 0;
    for (const auto* arm : arms) {
        const auto& agg = arm->aggregated;
        svg << "  <polyline fill=\"none\" stroke=\"" << arm_color(arm->arm)
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < agg.timestep.size(); ++i) {
            if (i > 0) svg << ' ';
            svg << fixed(x_of(static_cast<double>(agg.timestep[i])), 2) << ','
                << fixed(y_of(agg.mean[i]), 2);
        }
        svg << "\"/>\n";
        svg << "  <text x=\"" << kRight - 150 << "\" y=\"" << kTop + 16 + 14 * legend
            << "\" font-size=\"12\" fill=\"" << arm_color(arm->arm) << "\">" << arm->arm
            << "</text>\n";
        ++legend;
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string transfer_table_csv(const exp::Report& report) {
    std::ostringstream out;
    out << "task,vanilla_mean_steps,macro_mean_steps,reduction_pct\n";
    for (const auto& row : report.transfer)
        out << row.task << ',' << fixed(row.vanilla_mean_steps, 4) << ','
            << fixed(row.macro_mean_steps, 4) << ',' << fixed(row.reduction_pct, 4) << '\n';
    return out.str();
}

} // namespace macroforge::cli
