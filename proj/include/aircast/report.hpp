#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aircast/errors.hpp"
#include "aircast/pipeline.hpp"
#include "aircast/stats.hpp"

namespace aircast {

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace detail

/// RMSE table, best model first, with the percentage-of-reference column.
inline std::string render_rmse_table(const EvaluationReport& rep) {
    std::vector<std::size_t> order(rep.models.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return rep.models[a].rmse_all < rep.models[b].rmse_all;
    });

    std::ostringstream out;
    out << "RMSE by model (millions of RPKs per quarter), best to worst\n";
    out << "reference total for the % column: " << detail::fmt("%.6g", rep.reference_total)
        << "\n\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %12s %12s %12s %12s %12s %10s\n", "model", "rmse_all",
                  "rmse_train", "rmse_test", "rmse_valid", "pct_of_ref", "r2");
    out << line;
    for (std::size_t i : order) {
        const auto& m = rep.models[i];
        std::snprintf(line, sizeof line, "%-8s %12.4f %12.4f %12.4f %12.4f %12.4f %10.4f\n",
                      m.name.c_str(), m.rmse_all, m.rmse_train, m.rmse_test, m.rmse_valid,
                      pct_of_reference(m.rmse_all, rep.reference_total), m.fit.r2);
        out << line;
    }
    out << "\nfit line of predicted on actual per model (ideal beta=1, alpha=0):\n";
    for (std::size_t i : order) {
        const auto& m = rep.models[i];
        std::snprintf(line, sizeof line, "%-8s beta=%.4f alpha=%.4f R2=%.4f\n", m.name.c_str(),
                      m.fit.beta, m.fit.alpha, m.fit.r2);
        out << line;
    }
    return out.str();
}

inline std::string render_anova(const AnovaTable& t) {
    std::ostringstream out;
    out << "One-way ANOVA over per-quarter squared errors\n\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %14s %6s %14s %10s %10s\n", "", "SS", "df", "MS", "F",
                  "p");
    out << line;
    std::snprintf(line, sizeof line, "%-8s %14.6g %6zu %14.6g %10.4f %10.4f\n", "between",
                  t.ss_between, t.df_between, t.ms_between, t.f_stat, t.p_value);
    out << line;
    std::snprintf(line, sizeof line, "%-8s %14.6g %6zu %14.6g\n", "within", t.ss_within,
                  t.df_within, t.ms_within);
    out << line;
    std::snprintf(line, sizeof line, "%-8s %14.6g %6zu\n", "total", t.ss_total, t.df_total);
    out << line;
    return out.str();
}

/// Upper-triangular p-value matrix in the evaluation's RMSE order: the entry
/// at (row, col) tests "row model's squared errors are smaller than col's".
/// Entries below alpha are starred; a Bonferroni-adjusted section follows as
/// a clearly labelled extension.
inline std::string render_posthoc(const PairwiseMatrix& pm,
                                  const std::vector<std::size_t>& order) {
    std::ostringstream out;
    out << "Post-hoc one-sided two-sample t-tests over squared errors, p-values\n";
    out << "row model tested as better (smaller errors) than column model; * marks p < "
        << detail::fmt("%.3g", pm.alpha) << "\n\n";

    const std::size_t k = order.size();
    char cell[64];
    std::snprintf(cell, sizeof cell, "%-8s", "");
    out << cell;
    for (std::size_t j = 1; j < k; ++j) {
        std::snprintf(cell, sizeof cell, " %9s", pm.names[order[j]].c_str());
        out << cell;
    }
    out << "\n";
    for (std::size_t i = 0; i + 1 < k; ++i) {
        std::snprintf(cell, sizeof cell, "%-8s", pm.names[order[i]].c_str());
        out << cell;
        for (std::size_t j = 1; j < k; ++j) {
            if (j <= i) {
                std::snprintf(cell, sizeof cell, " %9s", "-");
            } else {
                double p = pm.p[order[i]][order[j]];
                std::string v = detail::fmt("%.3f", p) + (p < pm.alpha ? "*" : "");
                std::snprintf(cell, sizeof cell, " %9s", v.c_str());
            }
            out << cell;
        }
        out << "\n";
    }

    std::size_t m = k * (k - 1) / 2;
    out << "\nBonferroni-adjusted p-values (extension, not part of the base protocol; "
        << m << " comparisons):\n";
    for (std::size_t i = 0; i + 1 < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            double p = std::min(1.0, pm.p[order[i]][order[j]] * static_cast<double>(m));
            out << pm.names[order[i]] << " < " << pm.names[order[j]] << ": "
                << detail::fmt("%.3f", p) << (p < pm.alpha ? "*" : "") << "\n";
        }
    return out.str();
}

/// Predicted-vs-actual scatter with the least-squares line and its
/// beta/alpha/R2 annotation; plain SVG, no plotting dependency.
inline std::string render_scatter_svg(const ModelEvaluation& ev,
                                      const std::vector<double>& actual) {
    const double W = 640.0, H = 640.0, M = 70.0;
    double lo = actual[0], hi = actual[0];
    for (double v : actual) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : ev.predictions) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == lo) hi = lo + 1.0;
    double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    auto sx = [&](double v) { return M + (v - lo) / (hi - lo) * (W - 2 * M); };
    auto sy = [&](double v) { return H - M - (v - lo) / (hi - lo) * (H - 2 * M); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\""
        << H - M << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M
        << "\" stroke=\"black\"/>\n";

    // axis ticks at the data extremes
    char buf[160];
    for (double v : {lo + pad, hi - pad}) {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\">%."
                      "1f</text>\n",
                      sx(v), H - M + 18.0, v);
        svg << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"end\">%.1f"
                      "</text>\n",
                      M - 6.0, sy(v) + 4.0, v);
        svg << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\">actual "
                  "RPKs</text>\n",
                  W / 2, H - 18.0);
    svg << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 18 %.1f)\">predicted RPKs</text>\n",
                  18.0, H / 2, H / 2);
    svg << buf;

    // fitted line across the actual range
    double x0 = lo + pad, x1 = hi - pad;
    double y0 = ev.fit.beta * x0 + ev.fit.alpha, y1 = ev.fit.beta * x1 + ev.fit.alpha;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#888\" "
                  "stroke-dasharray=\"5 3\"/>\n",
                  sx(x0), sy(y0), sx(x1), sy(y1));
    svg << buf;

    for (std::size_t i = 0; i < actual.size(); ++i) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"#1f77b4\"/>\n",
                      sx(actual[i]), sy(ev.predictions[i]));
        svg << buf;
    }

    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\">%s: y = %.3fx %c %.3f, R2 = "
                  "%.3f</text>\n",
                  M + 8.0, M - 12.0, ev.name.c_str(), ev.fit.beta,
                  ev.fit.alpha < 0 ? '-' : '+', std::fabs(ev.fit.alpha), ev.fit.r2);
    svg << buf;
    svg << "</svg>\n";
    return svg.str();
}

struct PipelineArtifacts {
    EvaluationReport evaluation;
    std::optional<ComparisonReport> comparison;
    std::vector<std::string> files_written;
};

/// The full protocol: fit everything on one split, evaluate over all rows,
/// compare squared errors, and write the report set under cfg.output_dir.
inline PipelineArtifacts run_pipeline(const RunConfig& cfg) {
    PipelineArtifacts art;
    art.evaluation = run_evaluation(cfg);
    art.comparison = run_comparison(art.evaluation, cfg.alpha, cfg.posthoc_variant);

    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.output_dir);
    auto emit = [&](const std::string& name, const std::string& content) {
        std::string path = cfg.output_dir + "/" + name;
        detail::write_file(path, content);
        art.files_written.push_back(path);
    };

    emit("rmse_table.txt", render_rmse_table(art.evaluation));

    std::vector<std::size_t> order(art.evaluation.models.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return art.evaluation.models[a].rmse_all < art.evaluation.models[b].rmse_all;
    });

    if (art.comparison) {
        emit("anova.txt", render_anova(art.comparison->anova));
        emit("posthoc.txt", render_posthoc(art.comparison->pairwise, order));
    } else {
        const char* notice = "comparison skipped: at least 2 enabled models are required\n";
        emit("anova.txt", notice);
        emit("posthoc.txt", notice);
    }

    for (const auto& m : art.evaluation.models)
        emit("scatter_" + m.name + ".svg", render_scatter_svg(m, art.evaluation.dataset.target));
    return art;
}

}  // namespace aircast
