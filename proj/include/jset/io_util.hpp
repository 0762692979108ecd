#pragma once

#include <string>

#include <json.hpp>

#include "jset/analysis.hpp"
#include "jset/geometry.hpp"
#include "jset/transseries.hpp"

namespace jset {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// locale-independent, round-trip formatting
std::string format_double(double v);
std::string format_complex(Complex z);  // "a+bi"

// flag syntax: "a", "a+bi", "a-bi", "bi", "i"
Complex parse_complex(const std::string& s);
// "p/q" or a bare integer
ExternalAngle parse_rational(const std::string& s);

Json complex_to_json(Complex z);  // [re, im]
Complex complex_from_json(const Json& j);

Json series_to_json(const TruncatedSeries& s, Complex lambda);
TruncatedSeries series_from_json(const Json& j);

Json model_to_json(const TransseriesModel& m);

Json beta_to_json(const BetaEResult& r);
Json report_to_json(const DimensionReport& r);
Json distribution_to_json(const ExponentDistribution& d);

// CSV with leading '#' metadata lines, then the header row.
void write_polyline_csv(const std::string& path, const Polyline& line,
                        const std::string& metadata);
void write_cloud_csv(const std::string& path, const PointCloud& cloud,
                     const std::string& metadata);
void write_distribution_csv(const std::string& path, const ExponentDistribution& d,
                            const std::string& metadata);

// Binary PGM (P5) for grayscale, PPM (P6) for RGB; metadata as a comment.
void write_pnm(const std::string& path, const RasterImage& img, const std::string& metadata);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace jset
