#include "nhcz/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nhcz {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string digits17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Point parse_point(const Json& p) {
  if (!p.is_array() || p.size() < 2 || !p[0].is_number() || !p[1].is_number())
    throw Error("malformed point: expected [re, im]");
  return {p[0].get<double>(), p[1].get<double>()};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
}

Json point_json(Point p) { return Json::array({p.real(), p.imag()}); }

}  // namespace

std::string measure_to_json(const DiscreteMeasure& mu) {
  std::string out = "{\"atoms\": [";
  for (Index i = 0; i < mu.size(); ++i) {
    if (i) out += ", ";
    out += "[" + digits17(mu.point(i).real()) + ", " + digits17(mu.point(i).imag()) + ", " +
           digits17(mu.weight(i)) + "]";
  }
  out += "], \"nonnegative\": ";
  out += mu.nonnegative() ? "true" : "false";
  out += "}\n";
  return out;
}

DiscreteMeasure measure_from_json(const std::string& text) {
  const Json j = parse_json(text);
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
    throw Error("malformed measure: missing \"atoms\" array");
  const bool nonneg = j.value("nonnegative", true);
  std::vector<Point> pts;
  RealField w(static_cast<Index>(j["atoms"].size()));
  Index k = 0;
  for (const auto& a : j["atoms"]) {
    if (!a.is_array() || a.size() != 3 || !a[2].is_number())
      throw Error("malformed measure: atoms are [re, im, weight]");
    pts.push_back(parse_point(a));
    w[k++] = a[2].get<double>();
  }
  return DiscreteMeasure(std::move(pts), std::move(w), nonneg);
}

DiscreteMeasure read_measure(const std::string& path) { return measure_from_json(read_file(path)); }

void write_measure(const std::string& path, const DiscreteMeasure& mu) {
  write_file(path, measure_to_json(mu));
}

std::vector<Point> points_from_json(const std::string& text) {
  Json j = parse_json(text);
  if (j.is_object() && j.contains("points")) j = j["points"];
  if (!j.is_array()) throw Error("malformed points: expected an array");
  std::vector<Point> pts;
  for (const auto& p : j) pts.push_back(parse_point(p));
  return pts;
}

std::vector<Point> read_points(const std::string& path) { return points_from_json(read_file(path)); }

Json decomposition_json(const CZDecomposition& dec) {
  Json disks = Json::array();
  for (const auto& d : dec.disks) {
    disks.push_back(Json{{"center", point_json(d.center)},
                         {"radius", d.radius},
                         {"alpha", d.alpha},
                         {"target", d.target},
                         {"achieved", d.achieved},
                         {"overshoot", d.overshoot()},
                         {"atoms", d.atoms}});
  }
  return Json{{"t", dec.t},
              {"nu_norm", dec.nu_norm},
              {"exhausted", dec.exhausted},
              {"total_overshoot", dec.total_overshoot()},
              {"disks", std::move(disks)}};
}

Json fit_json(const ConstantFit& fit) {
  return Json{{"A", fit.A},
              {"B", fit.B},
              {"residual", fit.residual},
              {"sentinel_count", fit.sentinel_count},
              {"points", fit.points},
              {"flagged", fit.flagged}};
}

Json report_json(const CheckReport& r, bool timing) {
  Json metrics = Json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = v;
  Json j{{"check", r.check},
         {"instance", r.instance},
         {"atoms", r.atoms},
         {"seed", r.seed},
         {"kernel", r.kernel},
         {"trials", r.trials},
         {"skipped", r.skipped},
         {"violations", r.violations},
         {"statistic_kind", r.statistic_kind},
         {"statistic", r.statistic},
         {"witness",
          Json{{"trial", r.witness.trial},
               {"point_index", r.witness.point_index},
               {"point", point_json(r.witness.point)},
               {"radius", r.witness.radius},
               {"value", r.witness.value}}}};
  if (r.has_bound) j["bound"] = Json{{"formula", r.bound_formula}, {"value", r.bound}};
  j["passed"] = r.passed;
  j["metrics"] = std::move(metrics);
  if (timing) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << contents;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace nhcz
