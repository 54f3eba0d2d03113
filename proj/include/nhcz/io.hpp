#ifndef NHCZ_IO_HPP
#define NHCZ_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "nhcz/decomposition.hpp"
#include "nhcz/measure.hpp"
#include "nhcz/verify.hpp"

namespace nhcz {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double ("inf", "-inf", "nan" otherwise).
std::string format_number(double v);

/// { "atoms": [[re, im, weight], ...], "nonnegative": bool } with 17 significant digits.
std::string measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const std::string& text);

DiscreteMeasure read_measure(const std::string& path);
void write_measure(const std::string& path, const DiscreteMeasure& mu);

/// Either [[re, im], ...] or { "points": [[re, im], ...] }.
std::vector<Point> points_from_json(const std::string& text);
std::vector<Point> read_points(const std::string& path);

Json decomposition_json(const CZDecomposition& dec);
Json fit_json(const ConstantFit& fit);
/// runtime_seconds is included only with `timing`, so reports of identical
/// runs are byte-identical by default.
Json report_json(const CheckReport& report, bool timing = false);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace nhcz

#endif  // NHCZ_IO_HPP
