#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vitalink/agent_tools/media_store.hpp"
#include "vitalink/orchestrator/store.hpp"

namespace vitalink::agent_tools {

enum class ChartMetric { Hr, Spo2, TempBody, TempAmbient, Activity };
enum class ChartKind { Line, Histogram };

std::string_view to_string(ChartMetric m);
std::optional<ChartMetric> parse_metric(std::string_view text);
std::optional<ChartKind> parse_chart_kind(std::string_view text);

struct ChartRequest {
    std::string user;
    ChartMetric metric = ChartMetric::Hr;
    std::int64_t from_ts = 0;  // inclusive
    std::int64_t to_ts = 0;    // inclusive, > from_ts
    ChartKind kind = ChartKind::Line;
};

struct ChartPoint {
    std::int64_t ts = 0;
    double value = 0.0;
};

// Canvas geometry of every chart.
inline constexpr double kChartWidth = 640.0;
inline constexpr double kChartHeight = 360.0;
inline constexpr double kPlotLeft = 60.0;
inline constexpr double kPlotRight = 620.0;
inline constexpr double kPlotTop = 30.0;
inline constexpr double kPlotBottom = 310.0;
inline constexpr int kHistogramBins = 10;

/// Points of `req.metric` inside the range, in time order. Activity maps to
/// sit 0, walk 1, run 2; absent values are skipped.
std::vector<ChartPoint> chart_points(const orchestrator::Store& store, const ChartRequest& req);

/// SVG markup. Line charts place point i at
///   x = left + (ts - from) / (to - from) * (right - left)
///   y = bottom - (v - lo) / (hi - lo) * (bottom - top)
/// where [lo, hi] is the value range widened by 1 on each side when flat.
/// Coordinates are printed with two decimals. Throws NoData on an empty range
/// or no points.
std::string render_svg(const ChartRequest& req, const std::vector<ChartPoint>& points);

/// chart_points -> render_svg -> media store. Returns the media id.
std::string render_chart(const orchestrator::Store& store, MediaStore& media,
                         const ChartRequest& req);

}  // namespace vitalink::agent_tools
