#include <json.hpp>

#include "pvmerge/dual_cert.hpp"
#include "pvmerge/error.hpp"
#include "pvmerge/grid_copula.hpp"

namespace pvmerge {

using json = nlohmann::ordered_json;

namespace {

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string(what) + ": malformed JSON: " + e.what());
  }
}

template <class T>
T field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string(what) + ": missing field \"" + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string(what) + ": field \"" + key + "\" has the wrong type");
  }
}

json spec_json(const DecreasingSetSpec& spec) {
  if (const auto* x = std::get_if<set::SumThreshold>(&spec)) {
    return {{"type", "sum_threshold"}, {"s", x->s}};
  }
  if (const auto* x = std::get_if<set::RugerSet>(&spec)) {
    return {{"type", "ruger_set"}, {"alpha", x->alpha}, {"k", x->order}};
  }
  if (const auto* x = std::get_if<set::Box>(&spec)) return {{"type", "box"}, {"u", x->upper}};
  throw InvalidArgument("general boundary sets cannot be serialized");
}

DecreasingSetSpec spec_from(const json& j) {
  const auto type = field<std::string>(j, "type", "set spec");
  if (type == "sum_threshold") return set::SumThreshold{field<double>(j, "s", "sum_threshold")};
  if (type == "ruger_set") {
    return set::RugerSet{field<double>(j, "alpha", "ruger_set"),
                         field<std::size_t>(j, "k", "ruger_set")};
  }
  if (type == "box") return set::Box{field<std::vector<double>>(j, "u", "box")};
  throw InvalidArgument("set spec: unknown type \"" + type + "\"");
}

}  // namespace

std::string to_json(const GridCopula& c) {
  json j;
  j["k"] = c.dimension();
  j["n"] = c.resolution();
  j["mass"] = std::vector<double>(c.mass().begin(), c.mass().end());
  return j.dump();
}

GridCopula grid_copula_from_json(const std::string& text) {
  const json j = parse(text, "grid copula");
  return GridCopula(field<std::size_t>(j, "k", "grid copula"),
                    field<std::size_t>(j, "n", "grid copula"),
                    field<std::vector<double>>(j, "mass", "grid copula"));
}

std::string spec_to_json(const DecreasingSetSpec& spec) { return spec_json(spec).dump(); }

DecreasingSetSpec spec_from_json(const std::string& text) {
  return spec_from(parse(text, "set spec"));
}

std::string to_json(const DualCertificate& cert) {
  json comps = json::array();
  for (const auto& c : cert.components) {
    json pts = json::array();
    for (const auto& p : c.breakpoints()) pts.push_back({p.x, p.y});
    comps.push_back(std::move(pts));
  }
  return json{{"target", spec_json(cert.target)}, {"components", std::move(comps)}}.dump();
}

DualCertificate certificate_from_json(const std::string& text) {
  const json j = parse(text, "certificate");
  DualCertificate cert{{}, spec_from(field<json>(j, "target", "certificate"))};
  const auto comps = field<std::vector<std::vector<std::array<double, 2>>>>(
      j, "components", "certificate");
  for (const auto& pts : comps) {
    std::vector<PiecewiseLinear::Breakpoint> bp;
    bp.reserve(pts.size());
    for (const auto& p : pts) bp.push_back({p[0], p[1]});
    cert.components.emplace_back(std::move(bp));
  }
  validate_spec(cert.target, cert.dimension());
  return cert;
}

}  // namespace pvmerge
