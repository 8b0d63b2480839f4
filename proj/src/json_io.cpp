#include "hbinterp/json_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hbinterp/core.hpp"

namespace hbinterp::io {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void fail(const std::string& what) { throw DomainError("json: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) fail(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key '") + key + "'");
  return *it;
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) fail(what + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(what + " must be finite");
  return x;
}

std::size_t count_of(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    fail(std::string("'") + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(trim(s), &used);
  } catch (const std::exception&) {
    fail("cannot parse " + what + " from '" + s + "'");
  }
  if (used != trim(s).size() || !std::isfinite(x)) fail("cannot parse " + what + " from '" + s + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

Json real(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json to_json(Complex z) { return Json::array({real(z.real()), real(z.imag())}); }

Json to_json(const ComplexPoly& p) {
  Json out = Json::array();
  for (const Complex& c : p.coeffs()) out.push_back(to_json(c));
  return out;
}

Json to_json(const RationalFn& f) { return {{"num", to_json(f.num())}, {"den", to_json(f.den())}}; }

Json to_json(const BoundaryZeroSet& zeros) {
  Json out = Json::array();
  for (const auto& z : zeros.zeros()) out.push_back({{"zeta", to_json(z.zeta.value())}, {"multiplicity", z.multiplicity}});
  return out;
}

Json to_json(const RationalPair& pair) {
  return {{"b", to_json(pair.b)}, {"a", to_json(pair.a)}, {"zeros", to_json(pair.zeros)}, {"N", pair.N}, {"M", pair.M}};
}

Json to_json(const RadiiFamily& radii) {
  Json out = std::visit(Overloaded{
                            [](const PowerRadii& p) { return Json{{"kind", "power"}, {"c", p.c}, {"beta", p.beta}}; },
                            [](const GeometricRadii& g) { return Json{{"kind", "geometric"}, {"c", g.c}, {"q", g.q}}; },
                            [](const ExplicitRadii& e) { return Json{{"kind", "explicit"}, {"radii", e.radii}}; },
                        },
                        radii.kind());
  out["count"] = radii.count();
  return out;
}

Json to_json(const FamilyDescriptor& family) {
  Json out = to_json(family.radii);
  out["angles"] = std::visit(Overloaded{
                                 [](const SteinhausAngles& s) { return Json{{"mode", "steinhaus"}, {"seed", s.seed}}; },
                                 [](const FixedAngles& f) { return Json{{"mode", "fixed"}, {"values", f.values}}; },
                             },
                             family.angles);
  return out;
}

Json to_json(const DiskSequence& seq) {
  if (seq.family()) return {{"family", to_json(*seq.family())}};
  return {{"points", to_json(seq.values())}};
}

Json to_json(const std::vector<Complex>& zs) {
  Json out = Json::array();
  for (const Complex& z : zs) out.push_back(to_json(z));
  return out;
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {number(j, "complex value"), 0.0};
  if (!j.is_array() || j.size() != 2) fail("complex values are [re, im]");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

std::vector<Complex> complex_list_from_json(const Json& j) {
  if (!j.is_array()) fail("expected an array of complex values");
  std::vector<Complex> out;
  for (const Json& e : j) out.push_back(complex_from_json(e));
  return out;
}

ComplexPoly poly_from_json(const Json& j) { return ComplexPoly(complex_list_from_json(j)); }

RationalFn rational_from_json(const Json& j) {
  if (j.is_array()) return RationalFn::polynomial(poly_from_json(j));
  return RationalFn(poly_from_json(field(j, "num")), poly_from_json(field(j, "den")));
}

BoundaryZeroSet zeros_from_json(const Json& j) {
  if (!j.is_array()) fail("zeros must be an array");
  std::vector<BoundaryZero> zs;
  for (const Json& e : j) {
    const Json& m = field(e, "multiplicity");
    if (!m.is_number_integer() || m.get<int>() < 1) fail("multiplicity must be a positive integer");
    zs.push_back({UnitCirclePoint(complex_from_json(field(e, "zeta"))), m.get<int>()});
  }
  return BoundaryZeroSet(std::move(zs));
}

RationalPair pair_from_json(const Json& j) {
  RationalPair pair{rational_from_json(field(j, "b")), rational_from_json(field(j, "a")),
                    zeros_from_json(field(j, "zeros")), 0, 0};
  pair.N = static_cast<int>(count_of(j, "N"));
  pair.M = static_cast<int>(count_of(j, "M"));
  if (pair.N != pair.zeros.total_multiplicity() || pair.M != pair.zeros.max_multiplicity()) {
    fail("N and M disagree with the boundary zero set");
  }
  return pair;
}

RadiiFamily radii_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) fail("family kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "power") {
    return RadiiFamily::power(number(field(j, "c"), "c"), number(field(j, "beta"), "beta"), count_of(j, "count"));
  }
  if (k == "geometric") {
    return RadiiFamily::geometric(number(field(j, "c"), "c"), number(field(j, "q"), "q"), count_of(j, "count"));
  }
  if (k == "explicit") {
    const Json& r = field(j, "radii");
    if (!r.is_array()) fail("radii must be an array");
    std::vector<double> radii;
    for (const Json& e : r) radii.push_back(number(e, "radius"));
    const std::size_t n = j.contains("count") ? count_of(j, "count") : radii.size();
    return RadiiFamily(ExplicitRadii{std::move(radii)}, n);
  }
  fail("unknown family kind '" + k + "'");
}

FamilyDescriptor family_from_json(const Json& j) {
  FamilyDescriptor desc{radii_from_json(j), SteinhausAngles{0}};
  if (!j.contains("angles")) return desc;
  const Json& a = j["angles"];
  const Json& mode = field(a, "mode");
  if (mode == "steinhaus") {
    const Json& seed = field(a, "seed");
    if (!seed.is_number_integer()) fail("seed must be an integer");
    desc.angles = SteinhausAngles{seed.get<std::uint64_t>()};
  } else if (mode == "fixed") {
    const Json& v = field(a, "values");
    if (!v.is_array() || v.empty()) fail("fixed angles need a nonempty values array");
    std::vector<double> values;
    for (const Json& e : v) values.push_back(number(e, "angle"));
    desc.angles = FixedAngles{std::move(values)};
  } else {
    fail("angle mode must be 'steinhaus' or 'fixed'");
  }
  return desc;
}

DiskSequence sequence_from_json(const Json& j) {
  if (j.is_object() && j.contains("family")) return DiskSequence::from_family(family_from_json(j["family"]));
  const auto zs = complex_list_from_json(field(j, "points"));
  return DiskSequence::from_complex(zs);
}

RadiiFamily parse_family_spec(const std::string& spec, std::size_t default_count) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) fail("family spec must look like kind:key=value,...");
  const std::string kind = trim(spec.substr(0, colon));
  const std::string rest = spec.substr(colon + 1);
  if (kind == "explicit") {
    std::vector<double> radii;
    for (const auto& s : split(rest, ',')) radii.push_back(parse_double(s, "radius"));
    return RadiiFamily::explicit_radii(std::move(radii));
  }
  std::map<std::string, double> kv;
  for (const auto& item : split(rest, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail("expected key=value in family spec, got '" + item + "'");
    kv[trim(item.substr(0, eq))] = parse_double(item.substr(eq + 1), trim(item.substr(0, eq)));
  }
  auto get = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) fail(std::string("family spec lacks '") + key + "'");
    return it->second;
  };
  std::size_t count = default_count;
  if (kv.count("count")) {
    const double c = kv["count"];
    if (!(c >= 1) || c != std::floor(c)) fail("count must be a positive integer");
    count = static_cast<std::size_t>(c);
  }
  if (kind == "power") return RadiiFamily::power(get("c"), get("beta"), count);
  if (kind == "geometric") return RadiiFamily::geometric(get("c"), get("q"), count);
  fail("unknown family kind '" + kind + "'");
}

Complex parse_complex(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() == 1) return {parse_double(parts[0], "real part"), 0.0};
  if (parts.size() == 2) return {parse_double(parts[0], "real part"), parse_double(parts[1], "imaginary part")};
  fail("complex values are written re or re,im");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail("cannot parse '" + path + "': " + e.what());
  }
}

namespace {

enum class T { number, integer, boolean, string, array, object, complex, poly, rational, number_or_null };

bool has_type(const Json& v, T t) {
  switch (t) {
    case T::number: return v.is_number();
    case T::number_or_null: return v.is_number() || v.is_null();
    case T::integer: return v.is_number_integer();
    case T::boolean: return v.is_boolean();
    case T::string: return v.is_string();
    case T::array: return v.is_array();
    case T::object: return v.is_object();
    case T::complex: return v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number();
    case T::poly:
      if (!v.is_array()) return false;
      for (const Json& c : v)
        if (!has_type(c, T::complex)) return false;
      return true;
    case T::rational: return v.is_object() && v.contains("num") && v.contains("den") && has_type(v["num"], T::poly) &&
                             has_type(v["den"], T::poly);
  }
  return false;
}

using Layout = std::vector<std::pair<const char*, T>>;

const std::map<std::string, Layout>& layouts() {
  static const std::map<std::string, Layout> table = {
      {"mate", {{"pair", T::object}, {"verification", T::object}}},
      {"verify-pair", {{"verification", T::object}, {"corona_lower_bound", T::number}}},
      {"decide",
       {{"verdict", T::string},
        {"almost_sure", T::boolean},
        {"reason", T::string},
        {"carleson", T::object},
        {"delta_curve", T::object},
        {"carleson_class", T::string},
        {"sums", T::array}}},
      {"carleson", {{"delta", T::number}, {"separation", T::number}, {"argmin_index", T::integer}, {"curve", T::object}}},
      {"dnorm", {{"zeta", T::complex}, {"order", T::integer}, {"value", T::number}, {"quadrature", T::number_or_null}}},
      {"blaschke",
       {{"zeta", T::complex},
        {"zero_count", T::integer},
        {"derivatives", T::poly},
        {"ahern_clark", T::array},
        {"radial", T::object}}},
      {"gram", {{"size", T::integer}, {"min_eig", T::number}, {"max_eig", T::number}, {"curve", T::object}}},
      {"np-solve",
       {{"t_star", T::number},
        {"inflation", T::number},
        {"boundary_sup", T::number},
        {"schur", T::object},
        {"max_value_residual", T::number}}},
      {"construct",
       {{"F", T::rational},
        {"boundary_sup", T::number},
        {"value_residuals", T::array},
        {"lambda0_count", T::integer},
        {"lambda1_count", T::integer},
        {"decomposition", T::object}}},
      {"add-point", {{"F", T::rational}, {"value_at_lambda", T::complex}, {"residual", T::number}}},
      {"simulate",
       {{"family", T::object},
        {"M", T::integer},
        {"trials", T::integer},
        {"seed", T::integer},
        {"threshold", T::number},
        {"truncations", T::array},
        {"exceedance_fraction", T::array},
        {"median_sum", T::array},
        {"median_change", T::number},
        {"classification", T::string}}},
      {"three-series",
       {{"family", T::object},
        {"M", T::integer},
        {"classification", T::string},
        {"truncations", T::array},
        {"sum_prob", T::array},
        {"sum_mean", T::array},
        {"sum_var", T::array},
        {"prob_exceed", T::array},
        {"mean_truncated", T::array},
        {"var_truncated", T::array}}},
      {"dyadic",
       {{"family", T::object},
        {"M", T::integer},
        {"annulus", T::string},
        {"counts", T::array},
        {"carleson_sum", T::number},
        {"random_sum", T::number}}},
  };
  return table;
}

}  // namespace

void validate_report(const std::string& subcommand, const Json& report) {
  auto it = layouts().find(subcommand);
  if (it == layouts().end()) fail("no report layout for '" + subcommand + "'");
  if (!report.is_object()) fail("report must be an object");
  if (report.value("command", std::string()) != subcommand) fail("report 'command' must be '" + subcommand + "'");
  if (!report.contains("version") || !report["version"].is_number_integer()) fail("report lacks an integer version");
  for (const auto& [key, type] : it->second) {
    if (!report.contains(key)) fail(std::string("report lacks '") + key + "'");
    if (!has_type(report[key], type)) fail(std::string("report key '") + key + "' has the wrong type");
  }
  if (subcommand == "mate") pair_from_json(report["pair"]);
  if (subcommand == "construct" || subcommand == "add-point") rational_from_json(report["F"]);
}

}  // namespace hbinterp::io
