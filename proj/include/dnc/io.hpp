#pragma once

// JSON instance and report files. Parsing is strict: unknown keys, missing
// keys, wrong types and non-finite numbers are input errors.

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "dnc/errors.hpp"
#include "dnc/model.hpp"
#include "dnc/priors.hpp"

namespace dnc {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

namespace detail {

inline void only_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw DomainError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw DomainError("unknown key '" + key + "' in " + where);
  }
}

inline const Json& member(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DomainError("missing key '" + std::string(key) + "' in " + where);
  return *it;
}

inline double number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw DomainError(where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw DomainError(where + " must be finite");
  return x;
}

inline std::vector<double> number_array(const Json& v, const std::string& where) {
  if (!v.is_array()) throw DomainError(where + " must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline std::optional<double> read_optional(const Json& v, const std::string& where) {
  if (v.is_null()) return std::nullopt;
  return number(v, where);
}

}  // namespace detail

inline PriorSpec prior_from_json(const Json& j) {
  using namespace detail;
  if (!j.is_object()) throw DomainError("prior must be a JSON object");
  const auto& kind_v = member(j, "kind", "prior");
  if (!kind_v.is_string()) throw DomainError("prior.kind must be a string");
  const auto kind = kind_v.get<std::string>();
  PriorSpec out;
  if (kind == "normal") {
    only_keys(j, {"kind", "goods"}, "normal prior");
    const auto& goods = member(j, "goods", "normal prior");
    if (!goods.is_array()) throw DomainError("prior.goods must be an array");
    NormalPrior p;
    for (std::size_t i = 0; i < goods.size(); ++i) {
      const std::string w = "prior.goods[" + std::to_string(i) + "]";
      only_keys(goods[i], {"mean", "stdev"}, w);
      p.goods.push_back({number(member(goods[i], "mean", w), w + ".mean"), number(member(goods[i], "stdev", w), w + ".stdev")});
    }
    out = p;
  } else if (kind == "discrete_per_good") {
    only_keys(j, {"kind", "goods"}, "discrete_per_good prior");
    const auto& goods = member(j, "goods", "discrete_per_good prior");
    if (!goods.is_array()) throw DomainError("prior.goods must be an array");
    DiscretePerGoodPrior p;
    for (std::size_t i = 0; i < goods.size(); ++i) {
      if (!goods[i].is_array()) throw DomainError("prior.goods[" + std::to_string(i) + "] must be an array");
      std::vector<ValueProb> support;
      for (std::size_t a = 0; a < goods[i].size(); ++a) {
        const std::string w = "prior.goods[" + std::to_string(i) + "][" + std::to_string(a) + "]";
        only_keys(goods[i][a], {"value", "prob"}, w);
        support.push_back({number(member(goods[i][a], "value", w), w + ".value"),
                           number(member(goods[i][a], "prob", w), w + ".prob")});
      }
      p.goods.push_back(std::move(support));
    }
    out = p;
  } else if (kind == "joint_discrete") {
    only_keys(j, {"kind", "types"}, "joint_discrete prior");
    const auto& types = member(j, "types", "joint_discrete prior");
    if (!types.is_array()) throw DomainError("prior.types must be an array");
    JointDiscretePrior p;
    for (std::size_t k = 0; k < types.size(); ++k) {
      const std::string w = "prior.types[" + std::to_string(k) + "]";
      only_keys(types[k], {"values", "prob"}, w);
      p.types.push_back({number_array(member(types[k], "values", w), w + ".values"),
                         number(member(types[k], "prob", w), w + ".prob")});
    }
    out = p;
  } else if (kind == "uniform01") {
    only_keys(j, {"kind", "n"}, "uniform01 prior");
    const auto& n = member(j, "n", "uniform01 prior");
    if (!n.is_number_integer() || n.get<long long>() < 1) throw DomainError("prior.n must be a positive integer");
    out = Uniform01Prior{static_cast<std::size_t>(n.get<long long>())};
  } else {
    throw DomainError("unknown prior kind '" + kind + "'");
  }
  validate_prior(out);
  return out;
}

inline Json prior_to_json(const PriorSpec& prior) {
  Json j;
  if (const auto* p = std::get_if<NormalPrior>(&prior)) {
    j["kind"] = "normal";
    j["goods"] = Json::array();
    for (const auto& g : p->goods) j["goods"].push_back({{"mean", g.mean}, {"stdev", g.stdev}});
  } else if (const auto* d = std::get_if<DiscretePerGoodPrior>(&prior)) {
    j["kind"] = "discrete_per_good";
    j["goods"] = Json::array();
    for (const auto& s : d->goods) {
      Json arr = Json::array();
      for (const auto& vp : s) arr.push_back({{"value", vp.value}, {"prob", vp.prob}});
      j["goods"].push_back(arr);
    }
  } else if (const auto* t = std::get_if<JointDiscretePrior>(&prior)) {
    j["kind"] = "joint_discrete";
    j["types"] = Json::array();
    for (const auto& ty : t->types) j["types"].push_back({{"values", ty.values}, {"prob", ty.prob}});
  } else {
    j["kind"] = "uniform01";
    j["n"] = std::get<Uniform01Prior>(prior).n;
  }
  return j;
}

/// Parses and validates an instance document; the error names the failing
/// precondition.
inline Instance instance_from_json(const Json& j) {
  using namespace detail;
  only_keys(j, {"divider_values", "prior"}, "instance");
  Instance inst;
  inst.divider_values = number_array(member(j, "divider_values", "instance"), "divider_values");
  inst.prior = prior_from_json(member(j, "prior", "instance"));
  validate_instance(inst);
  return inst;
}

inline Json instance_to_json(const Instance& inst) {
  return Json{{"divider_values", inst.divider_values}, {"prior", prior_to_json(inst.prior)}};
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DomainError(what + " is not valid JSON: " + e.what());
  }
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open instance file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(parse_json_text(ss.str(), "instance file '" + path + "'"));
}

inline Json report_to_json(const SolveReport& r) {
  return Json{{"division", std::vector<double>(r.division.p().begin(), r.division.p().end())},
              {"pile1_probability", r.pile1_probability},
              {"divider_utility", r.divider_utility},
              {"chooser_utility", detail::optional_number(r.chooser_utility)},
              {"baseline_divider", r.baseline_divider},
              {"method", std::string(to_string(r.method))},
              {"gap_bound", detail::optional_number(r.gap_bound)},
              {"iterations", r.iterations},
              {"pile1_probability_stderr", detail::optional_number(r.pile1_probability_stderr)},
              {"notes", r.notes}};
}

inline SolveReport report_from_json(const Json& j) {
  using namespace detail;
  only_keys(j,
            {"division", "pile1_probability", "divider_utility", "chooser_utility", "baseline_divider", "method",
             "gap_bound", "iterations", "pile1_probability_stderr", "notes"},
            "report");
  SolveReport r;
  r.division = Division(number_array(member(j, "division", "report"), "report.division"));
  r.pile1_probability = number(member(j, "pile1_probability", "report"), "report.pile1_probability");
  if (r.pile1_probability < 0.0 || r.pile1_probability > 1.0) throw DomainError("report.pile1_probability outside [0,1]");
  r.divider_utility = number(member(j, "divider_utility", "report"), "report.divider_utility");
  r.chooser_utility = read_optional(member(j, "chooser_utility", "report"), "report.chooser_utility");
  r.baseline_divider = number(member(j, "baseline_divider", "report"), "report.baseline_divider");
  const auto& m = member(j, "method", "report");
  if (!m.is_string()) throw DomainError("report.method must be a string");
  const auto method = solve_method_from_string(m.get<std::string>());
  if (!method) throw DomainError("unknown report.method '" + m.get<std::string>() + "'");
  r.method = *method;
  r.gap_bound = read_optional(member(j, "gap_bound", "report"), "report.gap_bound");
  const auto& it = member(j, "iterations", "report");
  if (!it.is_number_unsigned() && !(it.is_number_integer() && it.get<long long>() >= 0)) {
    throw DomainError("report.iterations must be a nonnegative integer");
  }
  r.iterations = it.get<std::uint64_t>();
  r.pile1_probability_stderr =
      read_optional(member(j, "pile1_probability_stderr", "report"), "report.pile1_probability_stderr");
  const auto& notes = member(j, "notes", "report");
  if (!notes.is_string()) throw DomainError("report.notes must be a string");
  r.notes = notes.get<std::string>();
  return r;
}

/// Report document: the report plus tool version, config echo and timing.
inline Json report_file(const SolveReport& r, const Json& config, double wall_seconds) {
  return Json{{"tool", "dnc"},
              {"version", kToolVersion},
              {"config", config},
              {"wall_clock_seconds", wall_seconds},
              {"report", report_to_json(r)}};
}

inline SolveReport report_from_file_json(const Json& j) {
  detail::only_keys(j, {"tool", "version", "config", "wall_clock_seconds", "report"}, "report file");
  return report_from_json(detail::member(j, "report", "report file"));
}

}  // namespace dnc
