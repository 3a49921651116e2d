#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltspec/corpus.hpp"
#include "ltspec/potential.hpp"

namespace ltspec {

using json = nlohmann::json;

inline std::string kind_name(PotentialKind k) {
  switch (k) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::square_well: return "square_well";
    case PotentialKind::truncated_gaussian: return "truncated_gaussian";
    case PotentialKind::scalar_times_identity: return "scalar_times_identity";
    case PotentialKind::random_hermitian: return "random_hermitian";
  }
  return "unknown";
}

inline PotentialKind kind_from_name(const std::string& s) {
  if (s == "zero") return PotentialKind::zero;
  if (s == "square_well") return PotentialKind::square_well;
  if (s == "truncated_gaussian") return PotentialKind::truncated_gaussian;
  if (s == "scalar_times_identity") return PotentialKind::scalar_times_identity;
  if (s == "random_hermitian") return PotentialKind::random_hermitian;
  throw std::invalid_argument("unknown potential kind: " + s);
}

inline json to_json(const PotentialSpec& s) {
  json j;
  j["kind"] = kind_name(s.kind);
  j["depth"] = s.depth;
  j["width"] = s.width;
  j["amplitude"] = s.amplitude;
  j["sigma"] = s.sigma;
  j["cutoff"] = s.cutoff;
  j["n"] = s.n;
  j["seed"] = s.seed;
  j["center"] = s.center;
  j["halfwidth"] = s.halfwidth;
  j["scale"] = s.scale;
  j["support"] = {s.support_lo, s.support_hi};
  j["grid"] = {{"spacing", s.target_spacing}, {"pad_points", s.pad_points}};
  if (s.scalar) j["scalar"] = to_json(*s.scalar);
  return j;
}

inline PotentialSpec potential_spec_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("potential spec: expected an object");
  if (!j.contains("kind")) throw std::invalid_argument("potential spec: missing 'kind'");
  PotentialSpec s;
  s.kind = kind_from_name(j.at("kind").get<std::string>());
  auto num = [&](const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number())
      throw std::invalid_argument(std::string("potential spec: '") + key + "' must be a number");
    return j.at(key).get<double>();
  };
  s.depth = num("depth", s.depth);
  s.width = num("width", s.width);
  s.amplitude = num("amplitude", s.amplitude);
  s.sigma = num("sigma", s.sigma);
  s.cutoff = num("cutoff", s.cutoff);
  s.center = num("center", s.center);
  s.halfwidth = num("halfwidth", s.halfwidth);
  s.scale = num("scale", s.scale);
  if (j.contains("n")) s.n = j.at("n").get<int>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("support")) {
    s.support_lo = j.at("support").at(0).get<double>();
    s.support_hi = j.at("support").at(1).get<double>();
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (g.contains("spacing")) s.target_spacing = g.at("spacing").get<double>();
    if (g.contains("pad_points")) s.pad_points = g.at("pad_points").get<int>();
  }
  if (j.contains("scalar")) s.scalar = std::make_shared<PotentialSpec>(
      potential_spec_from_json(j.at("scalar")));
  return s;
}

inline bool spec_equal(const PotentialSpec& a, const PotentialSpec& b) {
  bool base = a.kind == b.kind && a.depth == b.depth && a.width == b.width &&
              a.amplitude == b.amplitude && a.sigma == b.sigma && a.cutoff == b.cutoff &&
              a.n == b.n && a.seed == b.seed && a.center == b.center &&
              a.halfwidth == b.halfwidth && a.scale == b.scale &&
              a.support_lo == b.support_lo && a.support_hi == b.support_hi &&
              a.target_spacing == b.target_spacing && a.pad_points == b.pad_points;
  if (!base) return false;
  if (static_cast<bool>(a.scalar) != static_cast<bool>(b.scalar)) return false;
  return !a.scalar || spec_equal(*a.scalar, *b.scalar);
}

/// Accepts either a file path or "corpus:<name>" for the built-in entries.
inline PotentialSpec load_potential_spec(const std::string& ref) {
  if (ref.rfind("corpus:", 0) == 0) {
    std::string name = ref.substr(7);
    for (const auto& e : corpus_all())
      if (e.name == name) return e.spec;
    throw std::invalid_argument("unknown corpus potential: " + name);
  }
  std::ifstream in(ref);
  if (!in) throw std::invalid_argument("cannot open potential file: " + ref);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed potential file: ") + e.what());
  }
  return potential_spec_from_json(j);
}

}  // namespace ltspec
