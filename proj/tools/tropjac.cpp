// tropjac: tropical Jacobians of curves metrized by fs monoids, their
// alignment, strata, torsion and separated-model classification.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tropjac/json_io.hpp"

namespace {

using namespace tropjac;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;
constexpr int kExitTheorem = 4;

std::string face_name(const std::vector<std::size_t>& rays) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (i) os << ",";
    os << rays[i];
  }
  os << "}";
  return os.str();
}

std::string torsion_text(const std::vector<Int>& factors) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) os << ", ";
    os << factors[i].get_str();
  }
  os << "]";
  return os.str();
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::size_t enumeration_guard() {
  if (const char* env = std::getenv("TROPJAC_MAX_ENUM")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw SchemaError("TROPJAC_MAX_ENUM", "expected a positive integer");
  }
  return 10000;
}

FamilyDocument load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open input file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path, std::string("JSON parse error: ") + e.what());
  }
  return parse_family_document(doc);
}

std::string witness_text(const TropCurve& c, const AlignmentWitness& w) {
  std::ostringstream os;
  os << "cycle {";
  bool first = true;
  for (std::size_t e = 0; e < w.cycle.size(); ++e) {
    if (w.cycle[e] == 0) continue;
    if (!first) os << ",";
    os << c.edges()[e].id;
    first = false;
  }
  os << "}";
  if (w.edge_ids.size() >= 2) {
    os << " crosses rays (" << w.edge_ids[0] << ", " << w.edge_ids[1] << ")";
  } else if (!w.edge_ids.empty()) {
    os << ": length of " << w.edge_ids[0] << " lies on no extreme ray";
  }
  return os.str();
}

int cmd_jacobian(const FamilyDocument& doc, bool json_out) {
  TropicalJacobian jac = tropical_jacobian(doc.curve);
  AlignmentReport alignment = is_aligned(doc.curve);
  if (json_out) {
    emit(jacobian_json(doc.curve, jac, alignment));
    return kExitOk;
  }
  std::cout << "rank " << jac.group.rank << ", torsion "
            << torsion_text(jac.group.invariant_factors) << "\n";
  std::cout << "group: " << jac.group.to_string() << "\n";
  std::cout << "presentation: hom rank " << jac.hom_rank() << ", " << jac.periods.rows()
            << " period relations\n";
  if (alignment.aligned) std::cout << "aligned: yes\n";
  else std::cout << "aligned: no, " << witness_text(doc.curve, *alignment.witness) << "\n";
  return kExitOk;
}

int cmd_align(const FamilyDocument& doc, bool json_out) {
  AlignmentReport rep = is_aligned(doc.curve);
  if (json_out) {
    emit(json{{"aligned", rep.aligned}, {"witness", witness_json(doc.curve, rep.witness)}});
    return kExitOk;
  }
  if (rep.aligned) std::cout << "ALIGNED\n";
  else std::cout << "NOT ALIGNED: " << witness_text(doc.curve, *rep.witness) << "\n";
  return kExitOk;
}

int cmd_torsion(const FamilyDocument& doc, bool json_out) {
  TropicalJacobian jac = tropical_jacobian(doc.curve);
  auto [group, gens] = torsion_subgroup(jac);
  if (json_out) {
    json jg = json::array();
    for (const Vec& g : gens) jg.push_back(vec_to_json(g));
    json torsion = json::array();
    for (const Int& d : group.invariant_factors) torsion.push_back(int_to_json(d));
    emit(json{{"torsion", torsion},
              {"order", int_to_json(group.torsion_order())},
              {"generators", jg}});
    return kExitOk;
  }
  std::cout << "torsion " << torsion_text(group.invariant_factors) << ", order "
            << group.torsion_order().get_str() << "\n";
  for (std::size_t i = 0; i < gens.size(); ++i)
    std::cout << "  generator " << i << ": " << to_string(gens[i]) << " (order "
              << group.invariant_factors[i].get_str() << ")\n";
  return kExitOk;
}

int cmd_strata(const FamilyDocument& doc, bool json_out) {
  StratifiedFamily fam = build_family(doc.curve.monoid(), doc.curve);
  FamilyReport rep = check_family(fam);
  if (json_out) {
    emit(family_json(fam, rep, nullptr));
    return kExitOk;
  }
  for (std::size_t i = 0; i < rep.per_face.size(); ++i) {
    const FaceReport& fr = rep.per_face[i];
    std::cout << "face " << face_name(fr.rays) << ": "
              << (fr.aligned ? "aligned" : "not aligned") << ", jacobian "
              << fr.group.to_string() << "\n";
  }
  std::cout << "quasi-finite: " << (rep.quasi_finite ? "yes" : "no") << "\n";
  return kExitOk;
}

int cmd_check(const FamilyDocument& doc, bool json_out) {
  StratifiedFamily fam = build_family(doc.curve.monoid(), doc.curve);
  FamilyReport rep = check_family(fam);
  if (json_out) {
    emit(family_json(fam, rep, nullptr));
    return kExitOk;
  }
  std::cout << "aligned everywhere: " << (rep.aligned_everywhere ? "yes" : "no") << "\n";
  std::cout << "quasi-finite:       " << (rep.quasi_finite ? "yes" : "no") << "\n";
  std::cout << "saturated = Neron:  " << (rep.saturated_equals_neron ? "yes" : "no") << "\n";
  if (!rep.failing_faces.empty()) {
    std::cout << "failing faces:\n";
    for (std::size_t fi : rep.failing_faces) {
      const FaceReport& fr = rep.per_face[fi];
      const Fiber& fiber = fam.fibers()[fi];
      std::cout << "  face " << face_name(fr.rays) << ": "
                << witness_text(fiber.curve, *fr.witness) << "\n";
    }
  }
  return kExitOk;
}

int cmd_models(const FamilyDocument& doc, bool enumerate, bool json_out) {
  StratifiedFamily fam = build_family(doc.curve.monoid(), doc.curve);
  FamilyReport rep = check_family(fam);
  ModelClassification mc = classify_models(fam, enumerate, enumeration_guard());
  if (json_out) {
    emit(family_json(fam, rep, &mc));
    return kExitOk;
  }
  std::cout << "torsion system (saturated model):\n";
  for (std::size_t i = 0; i < fam.fibers().size(); ++i) {
    const auto& rays = fam.base().faces()[fam.fibers()[i].face_index].ray_indices;
    std::cout << "  face " << face_name(rays) << ": " << mc.torsion_groups[i].to_string()
              << "\n";
  }
  if (mc.systems) {
    std::cout << "subgroup systems: " << mc.systems->size() << " (maximum is #"
              << *mc.maximum_index << ")\n";
    for (std::size_t s = 0; s < mc.systems->size(); ++s) {
      std::cout << "  system #" << s << ": orders";
      for (const auto& elems : (*mc.systems)[s].per_face) std::cout << " " << elems.size();
      std::cout << "\n";
    }
    std::cout << "inclusions:";
    if (mc.poset.empty()) std::cout << " none";
    for (auto [a, b] : mc.poset) std::cout << " #" << a << "<#" << b;
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_contract(const FamilyDocument& doc, const std::string& face_spec, bool json_out) {
  std::vector<std::size_t> rays;
  if (!face_spec.empty()) {
    std::istringstream in(face_spec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        rays.push_back(static_cast<std::size_t>(std::stoul(tok)));
      } catch (const std::exception&) {
        throw SchemaError("--face", "expected comma-separated ray indices");
      }
    }
  }
  const FsMonoid& m = doc.curve.monoid();
  for (std::size_t r : rays)
    if (r >= m.extreme_rays().size())
      throw not_a_face("ray index " + std::to_string(r) + " out of range");
  auto face_index = m.face_with_rays(rays);
  if (!face_index)
    throw not_a_face("no face of the monoid is spanned by rays " + face_name(rays));
  auto [proj, q] = m.quotient_by_face(*face_index);
  auto [curve, map] = contract(doc.curve, proj, q);
  if (!json_out)
    std::cout << "contracted " << (doc.curve.edge_count() - curve.edge_count()) << " of "
              << doc.curve.edge_count() << " edges; quotient monoid rank " << q.rank() << "\n";
  emit(family_document_json(curve));
  return kExitOk;
}

int cmd_subdivide(const FamilyDocument& doc, const std::string& edge,
                  const std::vector<std::string>& splits, bool json_out) {
  if (splits.size() != 2) throw SchemaError("--split", "expected exactly two length vectors");
  auto parse_vec = [&](const std::string& s) {
    Vec v;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        v.push_back(Int(tok));
      } catch (const std::exception&) {
        throw SchemaError("--split", "expected comma-separated integers");
      }
    }
    if (v.size() != doc.input_rank)
      throw SchemaError("--split", "split vector does not match the monoid rank");
    return to_monoid_coords(doc.curve.monoid(), v, "split piece");
  };
  Vec l1 = parse_vec(splits[0]), l2 = parse_vec(splits[1]);
  auto [curve, map] = subdivide(doc.curve, edge, l1, l2);
  if (!json_out)
    std::cout << "subdivided edge " << edge << " into two pieces\n";
  emit(family_document_json(curve));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tropical Jacobians of curves metrized by fs monoids"};
  app.require_subcommand(1);

  std::string file, face_spec, edge_id;
  std::vector<std::string> splits;
  bool json_out = false, enumerate = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "family document (JSON)")->required();
    sub->add_flag("--json", json_out, "machine-readable output");
    return sub;
  };
  CLI::App* jac = add_common(app.add_subcommand("jacobian", "tropical Jacobian of the curve"));
  CLI::App* ali = add_common(app.add_subcommand("align", "decide log alignment"));
  CLI::App* str = add_common(app.add_subcommand("strata", "per-face fibers and Jacobians"));
  CLI::App* tor = add_common(app.add_subcommand("torsion", "torsion subgroup of the Jacobian"));
  CLI::App* mod = add_common(app.add_subcommand("models", "separated group model classification"));
  mod->add_flag("--enumerate", enumerate, "enumerate all subgroup systems");
  CLI::App* con = add_common(app.add_subcommand("contract", "contract along a face quotient"));
  con->add_option("--face", face_spec, "extreme ray indices spanning the face, e.g. 0,2");
  CLI::App* sub = add_common(app.add_subcommand("subdivide", "split one edge into two"));
  sub->add_option("--edge", edge_id, "edge id to subdivide")->required();
  sub->add_option("--split", splits, "the two piece lengths, e.g. --split 1,0 0,1")->expected(2);
  CLI::App* chk = add_common(app.add_subcommand("check", "alignment/separatedness diagnosis"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitInput;
  }

  try {
    FamilyDocument doc = load(file);
    bool jout = json_out || doc.json_output;
    bool enu = enumerate || doc.enumerate_models;
    if (jac->parsed()) return cmd_jacobian(doc, jout);
    if (ali->parsed()) return cmd_align(doc, jout);
    if (str->parsed()) return cmd_strata(doc, jout);
    if (tor->parsed()) return cmd_torsion(doc, jout);
    if (mod->parsed()) return cmd_models(doc, enu, jout);
    if (con->parsed()) return cmd_contract(doc, face_spec, jout);
    if (sub->parsed()) return cmd_subdivide(doc, edge_id, splits, jout);
    if (chk->parsed()) return cmd_check(doc, jout);
    return kExitInput;
  } catch (const SchemaError& e) {
    std::cerr << "input error " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "domain error " << e.what() << "\n";
    return kExitDomain;
  } catch (const TheoremViolation& e) {
    std::cerr << "internal consistency failure (please report): " << e.what() << "\n";
    return kExitTheorem;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitTheorem;
  }
}
