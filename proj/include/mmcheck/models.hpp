#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "mmcheck/error.hpp"
#include "mmcheck/graph.hpp"
#include "mmcheck/history.hpp"
#include "mmcheck/relation.hpp"

namespace mmcheck {

enum class ModelName { SC, TSO, PSO, RMO };

inline constexpr std::string_view to_string(ModelName m) {
  switch (m) {
    case ModelName::SC: return "sc";
    case ModelName::TSO: return "tso";
    case ModelName::PSO: return "pso";
    case ModelName::RMO: return "rmo";
  }
  return "?";
}

struct ModelSpec {
  ModelName name = ModelName::SC;
  bool allows_llh = false;
  bool requires_oota = false;

  static ModelSpec of(ModelName name) {
    const bool rmo = name == ModelName::RMO;
    return {name, rmo, rmo};
  }

  /// Case-insensitive lookup of "sc", "tso", "pso" or "rmo".
  static ModelSpec parse(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (ModelName m : {ModelName::SC, ModelName::TSO, ModelName::PSO, ModelName::RMO}) {
      if (lower == to_string(m)) {
        return of(m);
      }
    }
    throw Error(ErrorKind::UnknownModel, "unknown memory model '" + std::string(text) + "'");
  }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

inline const std::vector<ModelSpec>& all_models() {
  static const std::vector<ModelSpec> models{ModelSpec::of(ModelName::SC), ModelSpec::of(ModelName::TSO),
                                             ModelSpec::of(ModelName::PSO), ModelSpec::of(ModelName::RMO)};
  return models;
}

/// A history's relations as seen by one memory model.
struct DerivedModel {
  ModelSpec spec;
  Relation po_mm;
  Relation rf_mm;
  Relation po_loc_effective;
  /// Non-fatal observations, e.g. init writes dropped from rf-mm.
  std::vector<std::string> warnings;
};

/// rf minus pairs related by po in either direction.
inline Relation rf_external(const History& h) {
  return h.rf().filter([&](const Edge& e) { return !h.po().contains(e.from, e.to) && !h.po().contains(e.to, e.from); });
}

inline void check_dp(const History& h) {
  for (const Edge& e : h.dp().pairs()) {
    if (!h.event(e.from).is_read() || !h.po().contains(e.from, e.to)) {
      throw Error(ErrorKind::InvalidDp, "dp " + h.ref(e.from) + " -> " + h.ref(e.to) +
                                            " must start at a read and follow program order");
    }
  }
}

inline DerivedModel derive(const History& h, const ModelSpec& spec) {
  DerivedModel m;
  m.spec = spec;
  auto kind_filter = [&](bool drop_wr, bool drop_ww) {
    return h.po().filter([&, drop_wr, drop_ww](const Edge& e) {
      const Event& a = h.event(e.from);
      const Event& b = h.event(e.to);
      if (a.is_write() && b.is_read() && drop_wr) {
        return false;
      }
      return !(a.is_write() && b.is_write() && drop_ww);
    });
  };
  switch (spec.name) {
    case ModelName::SC:
      m.po_mm = h.po();
      m.rf_mm = h.rf();
      break;
    case ModelName::TSO:
      m.po_mm = kind_filter(true, false);
      m.rf_mm = rf_external(h);
      break;
    case ModelName::PSO:
      m.po_mm = kind_filter(true, true);
      m.rf_mm = rf_external(h);
      break;
    case ModelName::RMO:
      check_dp(h);
      m.po_mm = h.dp();
      m.rf_mm = rf_external(h);
      break;
  }
  m.po_loc_effective = po_loc(h, spec.allows_llh);
  if (spec.name != ModelName::SC) {
    for (EventId r : h.reads()) {
      EventId w = h.source_of(r);
      if (h.event(w).is_init) {
        m.warnings.push_back("init write " + h.ref(w) + " sources " + h.ref(r) +
                             "; init writes are po-before every read and never appear in rf-" +
                             std::string(to_string(spec.name)));
      }
    }
  }
  return m;
}

/// Out-of-thin-air test: (O, dp + rf) must be acyclic.
inline bool oota_check(const History& h) {
  return kahn_acyclic(make_graph(h.n(), {h.dp(), h.rf()})).acyclic;
}

}  // namespace mmcheck
