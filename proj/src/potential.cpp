#include "bosonize/potential.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "bosonize/errors.hpp"

namespace bosonize {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw InvalidArgument("potential: cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return v;
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Potential zero_potential() {
  return {"zero", [](const Vec3&) { return 0.0; }, 0.0, false};
}

Potential coulomb_potential() {
  return {"coulomb", [](const Vec3& k) { return 1.0 / k.dot(k); }, std::nullopt, true};
}

Potential indicator_potential(double radius, double strength) {
  if (!(radius > 0.0)) throw InvalidArgument("indicator potential: radius must be positive");
  if (!(strength >= 0.0)) throw InvalidArgument("indicator potential: strength must be non-negative");
  const double r2 = radius * radius * (1.0 + 1e-12);
  return {"indicator:" + shortest(radius) + ":" + shortest(strength),
          [r2, strength](const Vec3& k) { return k.dot(k) <= r2 ? strength : 0.0; }, radius, false};
}

Potential tabulated_potential(std::map<IntVec3, double> table, std::string id) {
  double support = 0.0;
  for (const auto& [k, v] : table) {
    if (!(v >= 0.0)) throw InvalidArgument("tabulated potential: values must be non-negative");
    if (v != 0.0) support = std::max(support, std::sqrt(static_cast<double>(k.norm2())));
  }
  auto shared = std::make_shared<const std::map<IntVec3, double>>(std::move(table));
  return {std::move(id),
          [shared](const Vec3& k) {
            const IntVec3 q{static_cast<std::int32_t>(std::lround(k.x)), static_cast<std::int32_t>(std::lround(k.y)),
                            static_cast<std::int32_t>(std::lround(k.z))};
            if (Vec3(q) != k) return 0.0;
            const auto it = shared->find(q);
            return it == shared->end() ? 0.0 : it->second;
          },
          support, false};
}

Potential load_tabulated_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("tabulated potential: cannot open '" + path + "'");
  std::map<IntVec3, double> table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    IntVec3 k;
    double v = 0.0;
    if (!(ss >> k.x)) continue;
    if (!(ss >> k.y >> k.z >> v)) {
      throw InvalidArgument("tabulated potential: malformed line " + std::to_string(line_no) + " in '" + path + "'");
    }
    table[k] = v;
  }
  return tabulated_potential(std::move(table), "table:" + path);
}

Potential parse_potential(std::string_view spec) {
  if (spec == "zero") return zero_potential();
  if (spec == "coulomb") return coulomb_potential();
  if (spec.starts_with("table:")) return load_tabulated_potential(std::string(spec.substr(6)));
  if (spec.starts_with("indicator:")) {
    std::string_view rest = spec.substr(10);
    const auto colon = rest.find(':');
    const double radius = parse_number(rest.substr(0, colon), "indicator radius");
    const double strength = colon == std::string_view::npos ? 1.0 : parse_number(rest.substr(colon + 1), "indicator strength");
    return indicator_potential(radius, strength);
  }
  throw InvalidArgument("unknown potential '" + std::string(spec) +
                        "' (expected zero, coulomb, indicator:R[:V] or table:PATH)");
}

}  // namespace bosonize
