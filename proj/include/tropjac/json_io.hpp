#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "tropjac/errors.hpp"
#include "tropjac/jacobian.hpp"
#include "tropjac/strata.hpp"
#include "tropjac/tropcurve.hpp"

namespace tropjac {

using nlohmann::json;

// Integers ride as JSON numbers up to 2^53 and as decimal strings beyond.

inline json int_to_json(const Int& x) {
  static const Int limit = Int(1) << 53;
  if (x <= limit && x >= -limit) return json(static_cast<std::int64_t>(x.get_si()));
  return json(x.get_str());
}

inline Int int_from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw SchemaError(path, "not a decimal integer string");
    }
  }
  throw SchemaError(path, "expected an integer or a decimal string");
}

inline json vec_to_json(const Vec& v) {
  json a = json::array();
  for (const Int& x : v) a.push_back(int_to_json(x));
  return a;
}

inline Vec vec_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of integers");
  Vec v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(int_from_json(j[i], path + "/" + std::to_string(i)));
  return v;
}

inline json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i)));
  return rows;
}

/// One parsed input: a monoid chart, a curve over it, and the output options
/// carried by the document. Lengths arrive in the chart's coordinates; when
/// the monoid constructor re-embeds into a smaller rank, the lengths (and any
/// later --split vectors) are converted through the same change of basis.
struct FamilyDocument {
  FsMonoid monoid;
  TropCurve curve;
  bool json_output = false;
  bool enumerate_models = false;
  std::size_t input_rank = 0;
};

namespace detail {

inline const json& require_field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "/" + key, "missing required field");
  return *it;
}

}  // namespace detail

/// Converts a vector given in the document's coordinates to the monoid's
/// internal coordinates (identity unless the constructor re-embedded).
inline Vec to_monoid_coords(const FsMonoid& m, const Vec& input, const std::string& what) {
  if (!m.was_reembedded()) return input;
  if (input.size() != m.embedding().cols())
    throw dimension_mismatch(what + " has wrong length for the monoid chart");
  auto coords = Sublattice::from_generators(m.embedding().cols(), m.embedding())
                    .coordinates(input);
  if (!coords) throw length_not_in_monoid(what + " lies outside the span of the monoid");
  return *coords;
}

inline FamilyDocument parse_family_document(const json& doc) {
  const json& jmon = detail::require_field(doc, "monoid", "");
  const json& jrank = detail::require_field(jmon, "rank", "/monoid");
  if (!jrank.is_number_integer() || jrank.get<std::int64_t>() < 0)
    throw SchemaError("/monoid/rank", "expected a nonnegative integer");
  auto rank = static_cast<std::size_t>(jrank.get<std::int64_t>());
  const json& jgens = detail::require_field(jmon, "generators", "/monoid");
  if (!jgens.is_array()) throw SchemaError("/monoid/generators", "expected an array");
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < jgens.size(); ++i) {
    Vec g = vec_from_json(jgens[i], "/monoid/generators/" + std::to_string(i));
    if (g.size() != rank)
      throw SchemaError("/monoid/generators/" + std::to_string(i),
                        "generator length does not match the rank");
    gens.push_back(std::move(g));
  }
  FsMonoid monoid(rank, gens);

  const json& jcurve = detail::require_field(doc, "curve", "");
  const json& jverts = detail::require_field(jcurve, "vertices", "/curve");
  if (!jverts.is_array()) throw SchemaError("/curve/vertices", "expected an array of ids");
  std::vector<std::string> vertices;
  for (std::size_t i = 0; i < jverts.size(); ++i) {
    if (!jverts[i].is_string())
      throw SchemaError("/curve/vertices/" + std::to_string(i), "expected a string id");
    vertices.push_back(jverts[i].get<std::string>());
  }
  const json& jedges = detail::require_field(jcurve, "edges", "/curve");
  if (!jedges.is_array()) throw SchemaError("/curve/edges", "expected an array");
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    const std::string path = "/curve/edges/" + std::to_string(i);
    const json& je = jedges[i];
    const json& jid = detail::require_field(je, "id", path);
    if (!jid.is_string()) throw SchemaError(path + "/id", "expected a string id");
    const json& jends = detail::require_field(je, "ends", path);
    if (!jends.is_array() || jends.size() != 2 || !jends[0].is_string() || !jends[1].is_string())
      throw SchemaError(path + "/ends", "expected exactly two vertex ids");
    Vec length = vec_from_json(detail::require_field(je, "length", path), path + "/length");
    if (length.size() != rank)
      throw SchemaError(path + "/length", "length does not match the monoid rank");
    edges.push_back(EdgeSpec{jid.get<std::string>(), jends[0].get<std::string>(),
                             jends[1].get<std::string>(),
                             to_monoid_coords(monoid, length, "length of edge " + std::to_string(i))});
  }

  FamilyDocument out{monoid, TropCurve(monoid, std::move(vertices), edges), false, false, rank};
  if (doc.contains("options")) {
    const json& jopt = doc["options"];
    if (!jopt.is_object()) throw SchemaError("/options", "expected an object");
    if (jopt.contains("json")) {
      if (!jopt["json"].is_boolean()) throw SchemaError("/options/json", "expected a boolean");
      out.json_output = jopt["json"].get<bool>();
    }
    if (jopt.contains("enumerate")) {
      if (!jopt["enumerate"].is_boolean())
        throw SchemaError("/options/enumerate", "expected a boolean");
      out.enumerate_models = jopt["enumerate"].get<bool>();
    }
  }
  return out;
}

/// Re-emits a curve (over its own monoid) as a valid input document, e.g.
/// after a contraction or subdivision.
inline json family_document_json(const TropCurve& c) {
  json jmon;
  jmon["rank"] = static_cast<std::int64_t>(c.monoid().rank());
  json jgens = json::array();
  for (const Vec& g : c.monoid().generators()) jgens.push_back(vec_to_json(g));
  jmon["generators"] = jgens;
  json jverts = json::array();
  for (const std::string& v : c.vertex_ids()) jverts.push_back(v);
  json jedges = json::array();
  for (const Edge& e : c.edges()) {
    json je;
    je["id"] = e.id;
    je["ends"] = json::array({c.vertex_ids()[e.a], c.vertex_ids()[e.b]});
    je["length"] = vec_to_json(e.length);
    jedges.push_back(je);
  }
  json doc;
  doc["monoid"] = jmon;
  doc["curve"] = {{"vertices", jverts}, {"edges", jedges}};
  return doc;
}

inline json witness_json(const TropCurve& c, const std::optional<AlignmentWitness>& w) {
  if (!w) return json(nullptr);
  json cycle = json::array();
  for (std::size_t e = 0; e < w->cycle.size(); ++e)
    if (w->cycle[e] != 0)
      cycle.push_back({{"edge", c.edges()[e].id}, {"coeff", int_to_json(w->cycle[e])}});
  return json{{"edges", w->edge_ids}, {"cycle", cycle}};
}

inline json jacobian_json(const TropCurve& c, const TropicalJacobian& j,
                          const AlignmentReport& alignment) {
  json torsion = json::array();
  for (const Int& d : j.group.invariant_factors) torsion.push_back(int_to_json(d));
  json gens = json::array();
  for (const Vec& g : j.torsion_generators) gens.push_back(vec_to_json(g));
  return json{{"rank", static_cast<std::int64_t>(j.group.rank)},
              {"torsion", torsion},
              {"aligned", alignment.aligned},
              {"witness", witness_json(c, alignment.witness)},
              {"presentation",
               {{"hom_rank", static_cast<std::int64_t>(j.hom_rank())},
                {"hom_basis", matrix_to_json(j.hom.lattice.basis())},
                {"periods", matrix_to_json(j.periods)},
                {"torsion_generators", gens}}}};
}

inline json face_name_json(const std::vector<std::size_t>& rays) {
  json a = json::array();
  for (std::size_t r : rays) a.push_back(static_cast<std::int64_t>(r));
  return a;
}

inline json models_json(const StratifiedFamily& fam, const ModelClassification& mc) {
  json faces = json::array();
  for (std::size_t i = 0; i < fam.fibers().size(); ++i) {
    json torsion = json::array();
    for (const Int& d : mc.torsion_groups[i].invariant_factors)
      torsion.push_back(int_to_json(d));
    json gens = json::array();
    for (const Vec& g : mc.torsion_gens[i]) gens.push_back(vec_to_json(g));
    faces.push_back(
        {{"rays", face_name_json(fam.base().faces()[fam.fibers()[i].face_index].ray_indices)},
         {"torsion", torsion},
         {"generators", gens}});
  }
  json out{{"torsion_system", faces}};
  if (mc.systems) {
    json systems = json::array();
    for (const SubgroupSystem& s : *mc.systems) {
      json sizes = json::array();
      json elements = json::array();
      for (const auto& face_elems : s.per_face) {
        sizes.push_back(static_cast<std::int64_t>(face_elems.size()));
        json els = json::array();
        for (const Vec& v : face_elems) els.push_back(vec_to_json(v));
        elements.push_back(els);
      }
      systems.push_back({{"orders", sizes}, {"elements", elements}});
    }
    json poset = json::array();
    for (auto [a, b] : mc.poset)
      poset.push_back(json::array(
          {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)}));
    out["systems"] = systems;
    out["poset"] = poset;
    out["maximum"] = static_cast<std::int64_t>(*mc.maximum_index);
    out["count"] = static_cast<std::int64_t>(mc.systems->size());
  } else {
    out["systems"] = json(nullptr);
  }
  return out;
}

inline json family_json(const StratifiedFamily& fam, const FamilyReport& rep,
                        const ModelClassification* models) {
  json faces = json::array();
  for (std::size_t i = 0; i < rep.per_face.size(); ++i) {
    const FaceReport& fr = rep.per_face[i];
    const Fiber& fiber = fam.fibers()[i];
    json torsion = json::array();
    for (const Int& d : fr.torsion) torsion.push_back(int_to_json(d));
    faces.push_back({{"rays", face_name_json(fr.rays)},
                     {"aligned", fr.aligned},
                     {"jacobian", jacobian_json(fiber.curve, fiber.jacobian, fiber.alignment)},
                     {"torsion", torsion}});
  }
  json failing = json::array();
  for (std::size_t f : rep.failing_faces) failing.push_back(static_cast<std::int64_t>(f));
  json out{{"faces", faces},
           {"quasi_finite", rep.quasi_finite},
           {"aligned_everywhere", rep.aligned_everywhere},
           {"saturated_equals_neron", rep.saturated_equals_neron},
           {"failing_faces", failing},
           {"models", models ? models_json(fam, *models) : json(nullptr)}};
  return out;
}

}  // namespace tropjac
