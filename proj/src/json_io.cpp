#include "blockopt/json_io.hpp"

#include <cmath>

namespace blockopt {

json to_json(const Value& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

Value value_from_json(const Domain& d, const json& j) {
  if (d.is_continuous()) {
    if (!j.is_number()) throw SpaceError("expected a number, got " + j.dump());
    return j.get<double>();
  }
  if (d.is_integer()) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) {
      const double x = j.get<double>();
      if (x == std::floor(x)) return static_cast<std::int64_t>(x);
    }
    throw SpaceError("expected an integer, got " + j.dump());
  }
  if (!j.is_string()) throw SpaceError("expected a label, got " + j.dump());
  return j.get<std::string>();
}

json to_json(const Assignment& a) {
  json out = json::object();
  for (const auto& [name, value] : a) out[name] = to_json(value);
  return out;
}

Assignment assignment_from_json(const SearchSpace& space, const json& j) {
  if (!j.is_object()) throw SpaceError("assignment must be a JSON object");
  Assignment out;
  for (const auto& [name, value] : j.items()) {
    out.emplace(name, value_from_json(space.at(name).domain, value));
  }
  validate(space, out);
  return out;
}

json to_json(const Variable& v) {
  json out = {{"name", v.name}};
  const auto& k = v.domain.kind();
  if (const auto* c = std::get_if<ContinuousDomain>(&k)) {
    out["type"] = "continuous";
    out["bounds"] = {c->lo, c->hi};
    out["log"] = c->log_scale;
  } else if (const auto* i = std::get_if<IntegerDomain>(&k)) {
    out["type"] = "integer";
    out["bounds"] = {i->lo, i->hi};
    out["log"] = false;
  } else {
    out["type"] = "categorical";
    out["labels"] = std::get<CategoricalDomain>(k).labels;
  }
  return out;
}

Variable variable_from_json(const json& j) {
  if (!j.is_object()) throw SpaceError("variable declaration must be an object");
  if (!j.contains("name") || !j.contains("type")) {
    throw SpaceError("variable declaration needs 'name' and 'type'");
  }
  const auto name = j.at("name").get<std::string>();
  const auto type = j.at("type").get<std::string>();
  const bool log = j.value("log", false);
  if (type == "categorical") {
    if (!j.contains("labels")) throw SpaceError("categorical '" + name + "' needs 'labels'");
    return {name, Domain::categorical(j.at("labels").get<std::vector<std::string>>())};
  }
  if (!j.contains("bounds") || !j.at("bounds").is_array() || j.at("bounds").size() != 2) {
    throw SpaceError("'" + name + "' needs 'bounds': [lo, hi]");
  }
  const auto& b = j.at("bounds");
  if (type == "continuous") {
    return {name, Domain::continuous(b[0].get<double>(), b[1].get<double>(), log)};
  }
  if (type == "integer") {
    if (log) throw SpaceError("log scale is only supported for continuous variables");
    return {name, Domain::integer(b[0].get<std::int64_t>(), b[1].get<std::int64_t>())};
  }
  throw SpaceError("unknown variable type '" + type + "'");
}

json to_json(const SearchSpace& space) {
  json out = json::array();
  for (const auto& v : space.variables()) out.push_back(to_json(v));
  return out;
}

SearchSpace space_from_json(const json& j) {
  if (!j.is_array()) throw SpaceError("'space' must be a list of variable declarations");
  std::vector<Variable> vars;
  for (const auto& v : j) vars.push_back(variable_from_json(v));
  return SearchSpace(std::move(vars));
}

}  // namespace blockopt
