#pragma once

// Tightness certificates. A certificate is an ordered list of rule
// applications over contact-structure facts; every premise is an earlier
// step, and every step is re-derivable from the data it carries, so the
// verifier needs nothing but the certificate itself.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tightcert/contact_diagram.hpp"
#include "tightcert/errors.hpp"
#include "tightcert/floer_engine.hpp"
#include "tightcert/rationals.hpp"
#include "tightcert/smooth_topology.hpp"

namespace tightcert {

// ---------------------------------------------------------------------------
// Rule set

struct RuleInfo {
  std::string id;
  std::string statement;
  std::string provenance;
};

inline const std::vector<RuleInfo>& rules() {
  static const std::vector<RuleInfo> table = {
      {"NODE", "declare a contact manifold by a (+/-1) contact surgery diagram",
       "diagram re-derived and its H1 recomputed from the linking matrix"},
      {"EDGE", "to is obtained from from by contact (+1)-surgery on the witness knot",
       "witness surgery re-applied; both sides compared after pushoff cancellation"},
      {"EQUIV", "two diagrams present the same contact manifold",
       "contact (+1)-surgery on a Legendrian pushoff cancels Legendrian surgery on the knot"},
      {"RANK", "dim HF-hat(M; Z/2) = n",
       "declared rank facts propagated through declared exact triangles"},
      {"TRIANGLE", "the cobordism map of an edge is injective",
       "exact triangle of total groups; f: A -> B is injective iff h: C -> A vanishes"},
      {"R1", "Stein fillable => c(M, xi) != 0",
       "the contact invariant of a Stein fillable contact structure is nonzero"},
      {"R2", "overtwisted => c(M, xi) = 0",
       "the contact invariant of an overtwisted contact structure vanishes"},
      {"R3", "c(M, xi) != 0 => tight", "contrapositive of R2"},
      {"R4", "edge M1 -> M2 and c(M2) != 0 => c(M1) != 0",
       "the (+1)-surgery cobordism map sends c(M1) to c(M2)"},
      {"R5", "edge M1 -> M2, c(M1) != 0 and F injective => c(M2) != 0",
       "the (+1)-surgery cobordism map sends c(M1) to c(M2)"},
      {"R6", "a diagram of Legendrian surgeries only is Stein fillable",
       "contact (-1)-surgery on Legendrian links in (S3, xi_st) yields Stein fillable structures"},
      {"TRANSFER", "c != 0 is preserved across an EQUIV step",
       "contact invariants of contactomorphic manifolds agree"},
  };
  return table;
}

inline const RuleInfo& rule(std::string_view id) {
  for (const auto& r : rules())
    if (r.id == id) return r;
  throw ArgumentError("unknown rule '" + std::string(id) + "'");
}

// ---------------------------------------------------------------------------
// Facts

// How a node's diagram is obtained; the verifier re-derives it.
struct NodeOrigin {
  enum class Kind { Intermediate, Slope, Vk, StandardS3, UnknotPlusOne };
  Kind kind = Kind::Intermediate;
  Coefficient slope;         // Slope
  NormalizeChoices choices;  // Slope
  long long k = 0;           // Vk

  static NodeOrigin of(Kind kind) {
    NodeOrigin o;
    o.kind = kind;
    return o;
  }
  static NodeOrigin from_slope(Coefficient r, NormalizeChoices choices = {}) {
    NodeOrigin o = of(Kind::Slope);
    o.slope = std::move(r);
    o.choices = std::move(choices);
    return o;
  }
  static NodeOrigin vk(long long k) {
    NodeOrigin o = of(Kind::Vk);
    o.k = k;
    return o;
  }

  friend bool operator==(const NodeOrigin&, const NodeOrigin&) = default;
};

struct ContactNode {
  std::string id;
  std::string description;
  ContactDiagram diagram;
  ManifoldId manifold = ManifoldId::opaque("");  // the manifold -M whose HF-hat holds c(M, xi)
  HomologyResult h1;
  NodeOrigin origin;
};

struct Witness {
  enum class Kind { PushoffOf, NewKnot };
  Kind kind = Kind::PushoffOf;
  std::string component;  // PushoffOf
  KnotType knot = KnotType::Unknot;  // NewKnot
  long long tb = -1;
  long long rot = 0;

  static Witness pushoff_of(std::string component) {
    Witness w;
    w.component = std::move(component);
    return w;
  }
  static Witness new_knot(KnotType knot, long long tb, long long rot) {
    Witness w;
    w.kind = Kind::NewKnot;
    w.knot = knot;
    w.tb = tb;
    w.rot = rot;
    return w;
  }

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct SurgeryEdge {
  std::string from;
  std::string to;
  Witness witness;
};

struct RankSource {
  enum class Kind { Base, Propagation };
  Kind kind = Kind::Base;
  long long max_k = 0;  // Propagation over vk_triangles(max_k)
};

struct NodeFact { ContactNode node; };
struct EdgeFact { SurgeryEdge edge; };
struct EquivalentFact { std::string a, b; };
struct RankClaim {
  ManifoldId manifold = ManifoldId::s3();
  long long rank = 0;
  RankSource source;
};
struct InjectiveFact {
  TriangleInstance triangle;
  long long dims[3] = {0, 0, 0};
  TriangleSolution solution;
};
struct SteinFact { std::string node; };
struct NonzeroFact { std::string node; };
struct TightFact { std::string node; };

using Conclusion = std::variant<NodeFact, EdgeFact, EquivalentFact, RankClaim, InjectiveFact, SteinFact,
                                NonzeroFact, TightFact>;

struct Step {
  std::string rule;
  std::vector<std::size_t> premises;
  Conclusion conclusion;
  std::string provenance;
};

struct Derivation {
  std::vector<Step> steps;
};

struct Certificate {
  Coefficient slope;
  std::string verdict;  // "TIGHT"
  std::string root;     // node id of the presented (Y_r, xi)
  std::vector<Step> steps;
};

// ---------------------------------------------------------------------------
// Building

class DerivationBuilder {
 public:
  explicit DerivationBuilder(std::vector<Step>& steps) : steps_(steps) {
    for (std::size_t i = 0; i < steps_.size(); ++i)
      if (const auto* n = std::get_if<NodeFact>(&steps_[i].conclusion)) nodes_[n->node.id] = i;
  }

  std::size_t add(std::string rule_id, std::vector<std::size_t> premises, Conclusion c) {
    std::string prov = rule(rule_id).provenance;
    steps_.push_back({std::move(rule_id), std::move(premises), std::move(c), std::move(prov)});
    return steps_.size() - 1;
  }

  std::size_t node(std::string id, std::string description, ContactDiagram d, ManifoldId m, NodeOrigin origin) {
    HomologyResult h = h1(d);
    std::size_t i = add("NODE", {}, NodeFact{{id, std::move(description), std::move(d), std::move(m), h, std::move(origin)}});
    nodes_[id] = i;
    return i;
  }

  std::size_t node_step(const std::string& id) const { return nodes_.at(id); }
  const ContactNode& node_of(const std::string& id) const {
    return std::get<NodeFact>(steps_[nodes_.at(id)].conclusion).node;
  }

  std::size_t edge(const std::string& from, const std::string& to, Witness w) {
    return add("EDGE", {node_step(from), node_step(to)}, EdgeFact{{from, to, std::move(w)}});
  }

  std::size_t rank(const ManifoldId& m, long long value, RankSource src) {
    return add("RANK", {}, RankClaim{m, value, src});
  }

  std::size_t injective(std::size_t edge_step, const TriangleInstance& t, std::size_t ra, std::size_t rb,
                        std::size_t rc) {
    long long a = std::get<RankClaim>(steps_[ra].conclusion).rank;
    long long b = std::get<RankClaim>(steps_[rb].conclusion).rank;
    long long c = std::get<RankClaim>(steps_[rc].conclusion).rank;
    return add("TRIANGLE", {edge_step, ra, rb, rc}, InjectiveFact{t, {a, b, c}, triangle_solve(a, b, c)});
  }

  std::size_t equivalent(const std::string& a, const std::string& b) {
    return add("EQUIV", {node_step(a), node_step(b)}, EquivalentFact{a, b});
  }

 private:
  std::vector<Step>& steps_;
  std::map<std::string, std::size_t> nodes_;
};

inline std::string vk_node_id(long long k) { return "V" + std::to_string(k); }

/// Nodes V_1..V_{K+1}, the (+1)-surgery edges between them, rank facts from
/// propagation over vk_triangles(K), and c(V_k) != 0 for every k <= K.
/// c(V_1) != 0 is derived twice: by cancelling V_1 down to (S^3, xi_st), and
/// through (S^1 x S^2, eta) along a (+1)-surgery edge V_1 -> S^1 x S^2.
inline Derivation build_vk_chain(long long K) {
  if (K < 1) throw DomainError("build_vk_chain needs K >= 1");
  Derivation out;
  DerivationBuilder b(out.steps);

  auto ranks = propagate(base_facts(), vk_triangles(K));
  if (!ranks.ok()) throw InvariantViolation("rank propagation failed: " + ranks.contradiction->detail);

  // (S^3, xi_st) and (S^1 x S^2, eta).
  b.node("S3", "(S3, xi_st)", ContactDiagram{}, ManifoldId::s3(), NodeOrigin::of(NodeOrigin::Kind::StandardS3));
  ContactDiagram unknot;
  unknot.add({"U", KnotType::Unknot, std::nullopt, -1, 0, Coefficient(1)});
  b.node("S1xS2", "(S1xS2, eta)", unknot, ManifoldId::s1xs2(), NodeOrigin::of(NodeOrigin::Kind::UnknotPlusOne));
  std::size_t stein_s3 = b.add("R6", {b.node_step("S3")}, SteinFact{"S3"});
  std::size_t c_s3 = b.add("R1", {stein_s3}, NonzeroFact{"S3"});
  const Witness new_unknot = Witness::new_knot(KnotType::Unknot, -1, 0);
  std::size_t e_s3 = b.edge("S3", "S1xS2", new_unknot);
  std::size_t r_s3 = b.rank(ManifoldId::s3(), 1, {RankSource::Kind::Base});
  std::size_t r_s1s2 = b.rank(ManifoldId::s1xs2(), 2, {RankSource::Kind::Base});
  std::size_t inj_s3 = b.injective(e_s3, unknot_triangle(), r_s3, r_s1s2, r_s3);
  std::size_t c_s1s2 = b.add("R5", {e_s3, c_s3, inj_s3}, NonzeroFact{"S1xS2"});

  for (long long k = 1; k <= K + 1; ++k) {
    b.node(vk_node_id(k), "(V_" + std::to_string(k) + ", xi_" + std::to_string(k) + ")", generate_vk(k),
           ManifoldId::minus_vk(k), NodeOrigin::vk(k));
  }
  std::vector<std::size_t> edges;
  for (long long k = 1; k <= K; ++k)
    edges.push_back(b.edge(vk_node_id(k), vk_node_id(k + 1), Witness::pushoff_of("T")));

  // c(V_1) != 0, primary route.
  std::size_t eq = b.equivalent(vk_node_id(1), "S3");
  std::size_t c_v1 = b.add("TRANSFER", {eq, c_s3}, NonzeroFact{vk_node_id(1)});
  // Second route through S^1 x S^2.
  std::size_t e_v1 = b.edge(vk_node_id(1), "S1xS2", new_unknot);
  b.add("R4", {e_v1, c_s1s2}, NonzeroFact{vk_node_id(1)});

  std::size_t r_ps = b.rank(ManifoldId::poincare_sphere(), 1, {RankSource::Kind::Base});
  std::vector<std::size_t> rank_steps;
  for (long long k = 1; k <= K; ++k) {
    RankFact f = ranks.db.get(ManifoldId::minus_vk(k));
    if (!f.is_exact()) throw InvariantViolation("rank of -V_" + std::to_string(k) + " is not determined");
    RankSource src = k == 1 ? RankSource{RankSource::Kind::Base} : RankSource{RankSource::Kind::Propagation, K};
    rank_steps.push_back(b.rank(ManifoldId::minus_vk(k), f.lo, src));
  }
  std::size_t c_prev = c_v1;
  for (long long k = 1; k < K; ++k) {
    std::size_t e = edges[static_cast<std::size_t>(k - 1)];
    std::size_t inj = b.injective(e, vk_step_triangle(k), rank_steps[static_cast<std::size_t>(k - 1)],
                                  rank_steps[static_cast<std::size_t>(k)], r_ps);
    c_prev = b.add("R5", {e, c_prev, inj}, NonzeroFact{vk_node_id(k + 1)});
  }
  return out;
}

namespace detail {

// Last (-1)-surgered component other than the trefoil: the tail of the
// Legendrian chain.
inline std::optional<std::string> last_chain_knot(const ContactDiagram& d) {
  const auto& comps = d.components();
  for (auto it = comps.rbegin(); it != comps.rend(); ++it)
    if (it->id != "T" && it->coeff == Coefficient(-1)) return it->id;
  return std::nullopt;
}

inline std::size_t find_nonzero(const std::vector<Step>& steps, const std::string& node) {
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (const auto* f = std::get_if<NonzeroFact>(&steps[i].conclusion); f && f->node == node) return i;
  throw InvariantViolation("no c != 0 conclusion for " + node);
}

}  // namespace detail

/// Certificate that the contact structure presented on Y_r by the trefoil
/// diagram (default stabilization choices) is tight.
inline Certificate certify_tight(const Coefficient& r) {
  if (r.is_finite() && r == Coefficient(1))
    throw ExcludedSlopeError("r = 1: Y_1 carries no positive tight contact structure; no claim is made");
  Coefficient rp = rprime_from_r(r);
  if (rp.is_zero()) throw InvariantViolation("contact coefficient 0 after transform");

  Certificate cert;
  cert.slope = r;
  cert.verdict = "TIGHT";
  cert.root = "Y";
  DerivationBuilder b(cert.steps);

  ContactDiagram normalized = dg_normalize(generate_yr_diagram(r));
  NodeOrigin origin = NodeOrigin::from_slope(r);
  const std::string label = "-Y_" + r.to_string();
  std::size_t root = b.node("Y", "(Y_" + r.to_string() + ", xi)", normalized, ManifoldId::opaque(label), origin);

  if (rp.is_infinite() || rp.sign() < 0) {
    std::size_t stein = b.add("R6", {root}, SteinFact{"Y"});
    std::size_t c = b.add("R1", {stein}, NonzeroFact{"Y"});
    b.add("R3", {c}, TightFact{"Y"});
    return cert;
  }

  long long k = rp.is_unit_fraction() ? static_cast<long long>(rp.denominator()) : min_k_negative(rp);

  // (+1)-surgeries on pushoffs of the chain knots, one per edge.
  std::vector<std::size_t> edges;
  std::string current_id = "Y";
  ContactDiagram current = normalized;
  for (int j = 1; auto chain = detail::last_chain_knot(current); ++j) {
    auto [with_pushoff, pushoff_id] = contact_pushoff(current, *chain);
    with_pushoff.at(pushoff_id).coeff = Coefficient(1);
    ContactDiagram next = cancel_pair(std::move(with_pushoff), *chain, pushoff_id);
    std::string next_id = "Y." + std::to_string(j);
    b.node(next_id, "(+1)-surgery on a pushoff of " + *chain, next, ManifoldId::opaque(label + "." + std::to_string(j)),
           NodeOrigin::of(NodeOrigin::Kind::Intermediate));
    edges.push_back(b.edge(current_id, next_id, Witness::pushoff_of(*chain)));
    current_id = next_id;
    current = std::move(next);
  }
  if (!same_layout(current, generate_vk(k)))
    throw InvariantViolation("cancellation path does not end at V_" + std::to_string(k));

  Derivation chain = build_vk_chain(k);
  const std::size_t offset = cert.steps.size();
  for (auto& s : chain.steps) {
    for (auto& p : s.premises) p += offset;
    cert.steps.push_back(std::move(s));
  }
  DerivationBuilder b2(cert.steps);
  std::size_t eq = b2.equivalent(current_id, vk_node_id(k));
  std::size_t c = b2.add("TRANSFER", {eq, detail::find_nonzero(cert.steps, vk_node_id(k))}, NonzeroFact{current_id});
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    const auto& e = std::get<EdgeFact>(cert.steps[*it].conclusion).edge;
    c = b2.add("R4", {*it, c}, NonzeroFact{e.from});
  }
  b2.add("R3", {c}, TightFact{"Y"});
  return cert;
}

// ---------------------------------------------------------------------------
// Verification

struct CheckReport {
  bool ok = true;
  std::optional<std::size_t> failing_step;
  std::string message;

  explicit operator bool() const noexcept { return ok; }
};

namespace detail {

class CertificateChecker {
 public:
  explicit CertificateChecker(const Certificate& c) : cert_(c) {}

  CheckReport run() {
    for (std::size_t i = 0; i < cert_.steps.size(); ++i) {
      try {
        check_step(i);
      } catch (const StepFailure& f) {
        return {false, i, f.what};
      } catch (const std::exception& e) {
        return {false, i, std::string("step could not be re-derived: ") + e.what()};
      }
    }
    if (cert_.steps.empty()) return {false, std::nullopt, "empty certificate"};
    if (cert_.verdict != "TIGHT") return {false, std::nullopt, "unsupported verdict '" + cert_.verdict + "'"};
    const auto* last = std::get_if<TightFact>(&cert_.steps.back().conclusion);
    if (!last || last->node != cert_.root)
      return {false, cert_.steps.size() - 1, "final step does not conclude tightness of the root node"};
    auto root = nodes_.find(cert_.root);
    if (root == nodes_.end()) return {false, std::nullopt, "root node is never declared"};
    const NodeOrigin& o = root->second->origin;
    if (o.kind != NodeOrigin::Kind::Slope || o.slope != cert_.slope)
      return {false, std::nullopt, "root node is not the presentation of the queried slope"};
    return {};
  }

 private:
  struct StepFailure {
    std::string what;
  };
  [[noreturn]] static void fail(std::string why) { throw StepFailure{std::move(why)}; }

  template <class T>
  const T& premise(std::size_t step, std::size_t which, const char* what) const {
    const auto& s = cert_.steps[step];
    if (which >= s.premises.size()) fail(std::string("missing premise: ") + what);
    std::size_t p = s.premises[which];
    if (p >= step) fail("premise " + std::to_string(p) + " does not precede the step");
    const T* fact = std::get_if<T>(&cert_.steps[p].conclusion);
    if (!fact) fail("premise " + std::to_string(p) + " is not a " + what);
    return *fact;
  }

  const ContactNode& node(const std::string& id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) fail("unknown node '" + id + "'");
    return *it->second;
  }

  static void expect_h1(const ContactNode& n, const Integer& order) {
    if (!n.h1.is_cyclic() || n.h1.order() != order)
      fail("H1 of node " + n.id + " is " + n.h1.to_string() + ", expected cyclic of order " + order.str());
  }

  const RankDb& propagated(long long max_k) {
    auto it = propagation_cache_.find(max_k);
    if (it == propagation_cache_.end()) {
      if (max_k < 1 || max_k > 100000) fail("unreasonable propagation bound");
      auto result = propagate(base_facts(), vk_triangles(max_k));
      if (!result.ok()) fail("rank propagation reports a contradiction: " + result.contradiction->detail);
      it = propagation_cache_.emplace(max_k, std::move(result.db)).first;
    }
    return it->second;
  }

  void check_step(std::size_t i) {
    const Step& s = cert_.steps[i];
    const RuleInfo* info = nullptr;
    for (const auto& r : rules())
      if (r.id == s.rule) info = &r;
    if (!info) fail("unknown rule '" + s.rule + "'");
    if (s.provenance != info->provenance) fail("provenance does not match rule " + s.rule);

    auto expect_premises = [&](std::size_t n) {
      if (s.premises.size() != n)
        fail("rule " + s.rule + " takes " + std::to_string(n) + " premises, got " + std::to_string(s.premises.size()));
    };
    auto conclusion = [&]<class T>(std::type_identity<T>) -> const T& {
      const T* c = std::get_if<T>(&s.conclusion);
      if (!c) fail("conclusion kind does not match rule " + s.rule);
      return *c;
    };

    if (s.rule == "NODE") {
      expect_premises(0);
      check_node(conclusion(std::type_identity<NodeFact>{}).node);
    } else if (s.rule == "EDGE") {
      expect_premises(2);
      const auto& e = conclusion(std::type_identity<EdgeFact>{}).edge;
      const auto& from = premise<NodeFact>(i, 0, "node").node;
      const auto& to = premise<NodeFact>(i, 1, "node").node;
      if (from.id != e.from || to.id != e.to) fail("edge endpoints do not match the cited nodes");
      check_edge(e, from, to);
    } else if (s.rule == "EQUIV") {
      expect_premises(2);
      const auto& eq = conclusion(std::type_identity<EquivalentFact>{});
      const auto& a = premise<NodeFact>(i, 0, "node").node;
      const auto& b = premise<NodeFact>(i, 1, "node").node;
      if (a.id != eq.a || b.id != eq.b) fail("equivalence does not match the cited nodes");
      if (!same_layout(cancel_pushoff_pairs(a.diagram), cancel_pushoff_pairs(b.diagram)))
        fail("diagrams of " + a.id + " and " + b.id + " do not cancel to the same diagram");
    } else if (s.rule == "RANK") {
      expect_premises(0);
      check_rank(conclusion(std::type_identity<RankClaim>{}));
    } else if (s.rule == "TRIANGLE") {
      expect_premises(4);
      check_triangle(i, conclusion(std::type_identity<InjectiveFact>{}));
    } else if (s.rule == "R6") {
      expect_premises(1);
      const auto& st = conclusion(std::type_identity<SteinFact>{});
      const auto& n = premise<NodeFact>(i, 0, "node").node;
      if (n.id != st.node) fail("R6 conclusion names a different node");
      for (const auto& c : n.diagram.components())
        if (c.coeff != Coefficient(-1)) fail("R6: component " + c.id + " is not a Legendrian (-1) surgery");
    } else if (s.rule == "R1") {
      expect_premises(1);
      const auto& st = premise<SteinFact>(i, 0, "Stein fillability fact");
      if (conclusion(std::type_identity<NonzeroFact>{}).node != st.node) fail("R1 conclusion names a different node");
    } else if (s.rule == "R2") {
      fail("R2 yields vanishing invariants only; it cannot appear in a tightness certificate");
    } else if (s.rule == "R3") {
      expect_premises(1);
      const auto& nz = premise<NonzeroFact>(i, 0, "c != 0 fact");
      if (conclusion(std::type_identity<TightFact>{}).node != nz.node) fail("R3 conclusion names a different node");
    } else if (s.rule == "R4") {
      expect_premises(2);
      const auto& e = premise<EdgeFact>(i, 0, "edge").edge;
      const auto& nz = premise<NonzeroFact>(i, 1, "c != 0 fact");
      if (nz.node != e.to) fail("R4 needs c != 0 at the target of the edge");
      if (conclusion(std::type_identity<NonzeroFact>{}).node != e.from) fail("R4 concludes at the source of the edge");
    } else if (s.rule == "R5") {
      expect_premises(3);
      const auto& e = premise<EdgeFact>(i, 0, "edge").edge;
      const auto& nz = premise<NonzeroFact>(i, 1, "c != 0 fact");
      const auto& inj = premise<InjectiveFact>(i, 2, "injectivity fact");
      (void)inj;
      if (cert_.steps[s.premises[2]].premises.empty() || cert_.steps[s.premises[2]].premises[0] != s.premises[0])
        fail("R5: injectivity is established for a different edge");
      if (nz.node != e.from) fail("R5 needs c != 0 at the source of the edge");
      if (conclusion(std::type_identity<NonzeroFact>{}).node != e.to) fail("R5 concludes at the target of the edge");
    } else if (s.rule == "TRANSFER") {
      expect_premises(2);
      const auto& eq = premise<EquivalentFact>(i, 0, "equivalence");
      const auto& nz = premise<NonzeroFact>(i, 1, "c != 0 fact");
      const auto& out = conclusion(std::type_identity<NonzeroFact>{}).node;
      bool ok = (nz.node == eq.b && out == eq.a) || (nz.node == eq.a && out == eq.b);
      if (!ok) fail("TRANSFER does not follow the cited equivalence");
    }
  }

  void check_node(const ContactNode& n) {
    if (nodes_.contains(n.id)) fail("node '" + n.id + "' declared twice");
    n.diagram.validate();
    for (const auto& c : n.diagram.components())
      if (c.coeff != Coefficient(1) && c.coeff != Coefficient(-1))
        fail("node " + n.id + " has a non-(+/-1) coefficient on " + c.id);
    HomologyResult h = h1(n.diagram);
    if (h != n.h1) fail("recorded H1 " + n.h1.to_string() + " of " + n.id + " recomputes as " + h.to_string());

    using K = NodeOrigin::Kind;
    const NodeOrigin& o = n.origin;
    // Named manifolds need the origin that names them.
    switch (n.manifold.kind()) {
      case ManifoldId::Kind::S3:
        if (o.kind != K::StandardS3) fail("S3 node without the standard origin");
        break;
      case ManifoldId::Kind::S1xS2:
        if (o.kind != K::UnknotPlusOne) fail("S1xS2 node without the (+1) unknot origin");
        break;
      case ManifoldId::Kind::MinusVk:
        if (o.kind != K::Vk || o.k != n.manifold.p()) fail("-V_k node without the matching V_k origin");
        break;
      case ManifoldId::Kind::Opaque:
        if (o.kind == K::Vk || o.kind == K::StandardS3 || o.kind == K::UnknotPlusOne)
          fail("named origin on an opaque node");
        break;
      default:
        fail("node manifolds must be S3, S1xS2, -V_k or opaque");
    }
    switch (o.kind) {
      case K::Intermediate: break;
      case K::StandardS3:
        if (!n.diagram.empty()) fail("(S3, xi_st) is the empty diagram");
        break;
      case K::UnknotPlusOne: {
        const auto& cs = n.diagram.components();
        if (cs.size() != 1 || cs[0].knot != KnotType::Unknot || cs[0].is_pushoff() || cs[0].tb != -1 ||
            cs[0].rot != 0 || cs[0].coeff != Coefficient(1))
          fail("(S1xS2, eta) is (+1)-surgery on the tb -1 unknot");
        break;
      }
      case K::Vk:
        if (o.k < 1 || !same_layout(n.diagram, generate_vk(o.k))) fail("node " + n.id + " is not the V_k diagram");
        break;
      case K::Slope: {
        if (o.slope.is_finite() && o.slope == Coefficient(1)) fail("slope 1 is excluded");
        if (!same_layout(n.diagram, dg_normalize(generate_yr_diagram(o.slope), o.choices)))
          fail("node " + n.id + " is not the normalized diagram of slope " + o.slope.to_string());
        break;
      }
    }
    if (auto order = n.manifold.h1_order()) expect_h1(n, *order);
    if (o.kind == K::Slope) {
      Integer p = o.slope.is_infinite() ? Integer(1) : detail::abs(o.slope.numerator());
      expect_h1(n, p);
    }
    nodes_[n.id] = &n;
  }

  void check_edge(const SurgeryEdge& e, const ContactNode& from, const ContactNode& to) {
    ContactDiagram after = from.diagram;
    if (e.witness.kind == Witness::Kind::PushoffOf) {
      if (!after.contains(e.witness.component)) fail("witness " + e.witness.component + " is not in " + from.id);
      auto [d, id] = contact_pushoff(after, e.witness.component);
      d.at(id).coeff = Coefficient(1);
      after = std::move(d);
    } else {
      LegendrianComponent knot{after.fresh_id("w"), e.witness.knot, std::nullopt, e.witness.tb, e.witness.rot,
                               Coefficient(1)};
      after.add(std::move(knot));
      after.validate();
    }
    if (!same_layout(cancel_pushoff_pairs(after), cancel_pushoff_pairs(to.diagram)))
      fail("(+1)-surgery on the witness in " + from.id + " does not give " + to.id);
  }

  void check_rank(const RankClaim& r) {
    std::optional<RankFact> fact;
    if (r.source.kind == RankSource::Kind::Base)
      fact = base_facts().find(r.manifold);
    else
      fact = propagated(r.source.max_k).find(r.manifold);
    if (!fact || !fact->is_exact() || fact->lo != r.rank)
      fail("rank of " + r.manifold.to_string() + " is not " + std::to_string(r.rank) + " (recomputed " +
           (fact ? fact->to_string() : std::string("unknown")) + ")");
  }

  void check_triangle(std::size_t i, const InjectiveFact& inj) {
    const auto& e = premise<EdgeFact>(i, 0, "edge").edge;
    const RankClaim* ranks[3] = {&premise<RankClaim>(i, 1, "rank fact"), &premise<RankClaim>(i, 2, "rank fact"),
                                 &premise<RankClaim>(i, 3, "rank fact")};
    const TriangleInstance& t = inj.triangle;
    // Only the declared triangle families are admissible.
    bool declared = t == unknot_triangle();
    if (t.a.kind() == ManifoldId::Kind::MinusVk) declared = declared || t == vk_step_triangle(t.a.p());
    if (!declared) fail("triangle is not one of the declared exact triangles");
    const ContactNode& from = node(e.from);
    const ContactNode& to = node(e.to);
    if (from.manifold != t.a || to.manifold != t.b) fail("triangle does not sit on the cited edge");
    bool right_witness = t == unknot_triangle()
                             ? e.witness.kind == Witness::Kind::NewKnot && e.witness.knot == KnotType::Unknot &&
                                   e.witness.tb == -1
                             : e.witness.kind == Witness::Kind::PushoffOf && e.witness.component == "T";
    if (!right_witness) fail("edge witness does not induce the triangle's cobordism");
    const ManifoldId* vertex[3] = {&t.a, &t.b, &t.c};
    for (int v = 0; v < 3; ++v) {
      if (ranks[v]->manifold != *vertex[v]) fail("rank premise does not match triangle vertex");
      if (ranks[v]->rank != inj.dims[v]) fail("triangle dimensions differ from the cited ranks");
    }
    TriangleSolution sol = triangle_solve(inj.dims[0], inj.dims[1], inj.dims[2]);
    if (sol != inj.solution) fail("recorded triangle solution differs from the recomputed one");
    if (!sol.f_injective) fail("edge map is not injective");
  }

  const Certificate& cert_;
  std::map<std::string, const ContactNode*> nodes_;
  std::map<long long, RankDb> propagation_cache_;
};

}  // namespace detail

inline CheckReport check_certificate(const Certificate& c) { return detail::CertificateChecker(c).run(); }

}  // namespace tightcert
