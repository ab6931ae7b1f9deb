#include "vitalink/agent_tools/chart.hpp"

#include <algorithm>
#include <cstdio>

#include "vitalink/clock.hpp"
#include "vitalink/error.hpp"

namespace vitalink::agent_tools {

std::string_view to_string(ChartMetric m) {
    switch (m) {
        case ChartMetric::Hr: return "hr";
        case ChartMetric::Spo2: return "spo2";
        case ChartMetric::TempBody: return "temp_body";
        case ChartMetric::TempAmbient: return "temp_ambient";
        case ChartMetric::Activity: return "activity";
    }
    return "hr";
}

std::optional<ChartMetric> parse_metric(std::string_view t) {
    for (auto m : {ChartMetric::Hr, ChartMetric::Spo2, ChartMetric::TempBody,
                   ChartMetric::TempAmbient, ChartMetric::Activity}) {
        if (to_string(m) == t) return m;
    }
    return std::nullopt;
}

std::optional<ChartKind> parse_chart_kind(std::string_view t) {
    if (t == "line") return ChartKind::Line;
    if (t == "histogram") return ChartKind::Histogram;
    return std::nullopt;
}

namespace {

std::string_view axis_label(ChartMetric m) {
    switch (m) {
        case ChartMetric::Hr: return "Heart rate (BPM)";
        case ChartMetric::Spo2: return "SpO2 (%)";
        case ChartMetric::TempBody: return "Body temperature (C)";
        case ChartMetric::TempAmbient: return "Ambient temperature (C)";
        case ChartMetric::Activity: return "Activity (0 sit, 1 walk, 2 run)";
    }
    return "";
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string header(const ChartRequest& req, std::string_view x_label, std::string_view y_label) {
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"360\" "
         "viewBox=\"0 0 640 360\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"360\" fill=\"#ffffff\"/>\n";
    s += "<text x=\"320\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">";
    s += axis_label(req.metric);
    s += "</text>\n";
    s += "<line class=\"axis\" x1=\"60.00\" y1=\"310.00\" x2=\"620.00\" y2=\"310.00\" stroke=\"#000\"/>\n";
    s += "<line class=\"axis\" x1=\"60.00\" y1=\"30.00\" x2=\"60.00\" y2=\"310.00\" stroke=\"#000\"/>\n";
    s += "<text class=\"x-label\" x=\"340\" y=\"350\" text-anchor=\"middle\">";
    s += x_label;
    s += "</text>\n";
    s += "<text class=\"y-label\" x=\"14\" y=\"170\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 14 170)\">";
    s += y_label;
    s += "</text>\n";
    return s;
}

}  // namespace

std::vector<ChartPoint> chart_points(const orchestrator::Store& store, const ChartRequest& req) {
    std::vector<ChartPoint> out;
    for (const auto& v : store.vitals(req.user, req.from_ts, req.to_ts)) {
        const auto& e = v.estimate;
        std::optional<double> value;
        switch (req.metric) {
            case ChartMetric::Hr: value = e.hr; break;
            case ChartMetric::Spo2: value = e.spo2; break;
            case ChartMetric::TempBody: value = e.temp_body; break;
            case ChartMetric::TempAmbient: value = e.temp_ambient; break;
            case ChartMetric::Activity:
                if (e.activity == "sit") value = 0.0;
                if (e.activity == "walk") value = 1.0;
                if (e.activity == "run") value = 2.0;
                break;
        }
        if (value) out.push_back({e.burst_ts, *value});
    }
    return out;
}

std::string render_svg(const ChartRequest& req, const std::vector<ChartPoint>& points) {
    if (req.to_ts <= req.from_ts) throw NoData("empty time range");
    if (points.empty()) throw NoData("no " + std::string(to_string(req.metric)) + " data in range");

    const double w = kPlotRight - kPlotLeft, h = kPlotBottom - kPlotTop;
    std::string s;
    if (req.kind == ChartKind::Line) {
        auto [lo_it, hi_it] = std::minmax_element(
            points.begin(), points.end(),
            [](const ChartPoint& a, const ChartPoint& b) { return a.value < b.value; });
        double lo = lo_it->value, hi = hi_it->value;
        if (hi == lo) lo -= 1.0, hi += 1.0;
        const double span = static_cast<double>(req.to_ts - req.from_ts);
        s = header(req, "Time (UTC)", axis_label(req.metric));
        s += "<text class=\"tick\" x=\"60.00\" y=\"326\" text-anchor=\"start\">" +
             format_utc(req.from_ts) + "</text>\n";
        s += "<text class=\"tick\" x=\"620.00\" y=\"326\" text-anchor=\"end\">" +
             format_utc(req.to_ts) + "</text>\n";
        s += "<text class=\"tick\" x=\"56\" y=\"314.00\" text-anchor=\"end\">" + fmt("%.1f", lo) + "</text>\n";
        s += "<text class=\"tick\" x=\"56\" y=\"34.00\" text-anchor=\"end\">" + fmt("%.1f", hi) + "</text>\n";
        std::string poly, dots;
        for (const auto& p : points) {
            const double x = kPlotLeft + static_cast<double>(p.ts - req.from_ts) / span * w;
            const double y = kPlotBottom - (p.value - lo) / (hi - lo) * h;
            if (!poly.empty()) poly += ' ';
            poly += fmt("%.2f", x) + "," + fmt("%.2f", y);
            dots += "<circle cx=\"" + fmt("%.2f", x) + "\" cy=\"" + fmt("%.2f", y) +
                    "\" r=\"3\" fill=\"#1f77b4\"><title>" + format_utc(p.ts) + " " +
                    fmt("%.1f", p.value) + "</title></circle>\n";
        }
        s += "<polyline points=\"" + poly + "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
        s += dots;
    } else {
        auto [lo_it, hi_it] = std::minmax_element(
            points.begin(), points.end(),
            [](const ChartPoint& a, const ChartPoint& b) { return a.value < b.value; });
        double lo = lo_it->value, hi = hi_it->value;
        if (hi == lo) lo -= 0.5, hi += 0.5;
        std::vector<int> counts(kHistogramBins, 0);
        for (const auto& p : points) {
            int bin = static_cast<int>((p.value - lo) / (hi - lo) * kHistogramBins);
            counts[static_cast<std::size_t>(std::clamp(bin, 0, kHistogramBins - 1))]++;
        }
        const int max_count = *std::max_element(counts.begin(), counts.end());
        s = header(req, axis_label(req.metric), "Count");
        s += "<text class=\"tick\" x=\"60.00\" y=\"326\" text-anchor=\"start\">" + fmt("%.1f", lo) + "</text>\n";
        s += "<text class=\"tick\" x=\"620.00\" y=\"326\" text-anchor=\"end\">" + fmt("%.1f", hi) + "</text>\n";
        s += "<text class=\"tick\" x=\"56\" y=\"34.00\" text-anchor=\"end\">" +
             std::to_string(max_count) + "</text>\n";
        const double bw = w / kHistogramBins;
        for (int i = 0; i < kHistogramBins; ++i) {
            const double bh = static_cast<double>(counts[i]) / max_count * h;
            s += "<rect class=\"bar\" x=\"" + fmt("%.2f", kPlotLeft + i * bw) + "\" y=\"" +
                 fmt("%.2f", kPlotBottom - bh) + "\" width=\"" + fmt("%.2f", bw - 1.0) +
                 "\" height=\"" + fmt("%.2f", bh) + "\" fill=\"#1f77b4\"><title>" +
                 std::to_string(counts[i]) + "</title></rect>\n";
        }
    }
    s += "</svg>\n";
    return s;
}

std::string render_chart(const orchestrator::Store& store, MediaStore& media,
                         const ChartRequest& req) {
    return media.put(render_svg(req, chart_points(store, req)), "image/svg+xml");
}

}  // namespace vitalink::agent_tools
