#pragma once

// File formats.
//
// Diagram files are line-oriented text:
//
//   # comment
//   component <id> <unknot|rhtrefoil|pushoff:<id>> <tb> <rot> <coeff|none>
//   link <id> <id> <linking number>
//
// A pushoff inherits its linkings when its line is read (it links its parent
// tb(parent) times and everything else as the parent does); later `link`
// records override any linking number.
//
// Framed links, rank facts, triangles and certificates are JSON.

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tightcert/contact_certifier.hpp"
#include "tightcert/contact_diagram.hpp"
#include "tightcert/errors.hpp"
#include "tightcert/floer_engine.hpp"
#include "tightcert/rationals.hpp"
#include "tightcert/smooth_topology.hpp"

namespace tightcert::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Diagram text format

inline ContactDiagram parse_diagram(std::string_view text) {
  ContactDiagram d;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;

    struct Token {
      std::string_view text;
      std::size_t column;
    };
    std::vector<Token> tokens;
    for (std::size_t i = 0; i < line.size();) {
      if (line[i] == '#') break;
      if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
      tokens.push_back({line.substr(i, j - i), i + 1});
      i = j;
    }
    auto error = [&](const std::string& what, std::size_t col) { return ParseError(what, line_no, col); };
    auto integer = [&](const Token& t) {
      std::size_t pos = 0;
      long long v = 0;
      try {
        v = std::stoll(std::string(t.text), &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != t.text.size() || t.text.empty()) throw error("expected an integer, got '" + std::string(t.text) + "'", t.column);
      return v;
    };

    if (!tokens.empty()) {
      std::string_view kw = tokens[0].text;
      if (kw == "component") {
        if (tokens.size() != 6) throw error("component record needs: id type tb rot coeff", tokens[0].column);
        LegendrianComponent c;
        c.id = std::string(tokens[1].text);
        std::string_view type = tokens[2].text;
        if (type == "unknot") {
          c.knot = KnotType::Unknot;
        } else if (type == "rhtrefoil") {
          c.knot = KnotType::RHTrefoil;
        } else if (type.starts_with("pushoff:")) {
          c.parent = std::string(type.substr(8));
          if (!d.contains(*c.parent))
            throw error("pushoff parent '" + *c.parent + "' is not defined above", tokens[2].column);
        } else {
          throw error("unknown component type '" + std::string(type) + "'", tokens[2].column);
        }
        c.tb = integer(tokens[3]);
        c.rot = integer(tokens[4]);
        if (tokens[5].text != "none") {
          try {
            c.coeff = Coefficient::parse(tokens[5].text);
          } catch (const Error& e) {
            throw error(e.what(), tokens[5].column);
          }
        }
        if (d.contains(c.id)) throw error("duplicate component id '" + c.id + "'", tokens[1].column);
        std::vector<std::pair<std::string, long long>> inherited;
        long long parent_tb = 0;
        if (c.parent) {
          parent_tb = d.at(*c.parent).tb;
          for (const auto& other : d.components())
            if (other.id != *c.parent) inherited.emplace_back(other.id, d.linking(*c.parent, other.id));
        }
        std::string id = c.id;
        std::optional<std::string> parent = c.parent;
        d.add(std::move(c));
        if (parent) {
          d.set_linking(id, *parent, parent_tb);
          for (const auto& [other, lk] : inherited) d.set_linking(id, other, lk);
        }
        try {
          d.validate();
        } catch (const Error& e) {
          throw error(e.what(), tokens[0].column);
        }
      } else if (kw == "link") {
        if (tokens.size() != 4) throw error("link record needs: id id value", tokens[0].column);
        for (int k = 1; k <= 2; ++k)
          if (!d.contains(tokens[static_cast<std::size_t>(k)].text))
            throw error("unknown component '" + std::string(tokens[static_cast<std::size_t>(k)].text) + "'",
                        tokens[static_cast<std::size_t>(k)].column);
        if (tokens[1].text == tokens[2].text) throw error("a component cannot link itself", tokens[2].column);
        d.set_linking(tokens[1].text, tokens[2].text, integer(tokens[3]));
      } else {
        throw error("unknown record '" + std::string(kw) + "'", tokens[0].column);
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return d;
}

inline std::string format_diagram(const ContactDiagram& d) {
  std::ostringstream out;
  for (const auto& c : d.components())
    out << "component " << c.id << ' ' << c.type_string() << ' ' << c.tb << ' ' << c.rot << ' '
        << (c.coeff ? c.coeff->to_string() : "none") << '\n';
  const auto& comps = d.components();
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      long long lk = d.linking(comps[i].id, comps[j].id);
      if (lk != 0 || comps[i].is_pushoff() || comps[j].is_pushoff())
        out << "link " << comps[i].id << ' ' << comps[j].id << ' ' << lk << '\n';
    }
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON helpers

inline ParseError json_error(std::string_view text, const json::parse_error& e) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return ParseError(e.what(), line, col);
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw json_error(text, e);
  }
}

// Structural errors in otherwise well-formed JSON carry no position.
inline ParseError schema_error(const std::string& what) { return ParseError(what, 0, 0); }

template <class F>
auto with_schema(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw schema_error(where + ": " + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw schema_error(where + ": " + e.what());
  }
}

inline json to_json(const HomologyResult& h) {
  json t = json::array();
  for (const auto& d : h.torsion) t.push_back(d.str());
  return {{"free_rank", h.free_rank}, {"torsion", t}, {"group", h.to_string()}};
}

inline HomologyResult homology_from_json(const json& j) {
  HomologyResult h;
  h.free_rank = j.at("free_rank").get<std::size_t>();
  for (const auto& d : j.at("torsion")) h.torsion.emplace_back(d.get<std::string>());
  return h;
}

inline json to_json(const ContactDiagram& d) {
  json comps = json::array();
  for (const auto& c : d.components())
    comps.push_back({{"id", c.id},
                     {"type", c.type_string()},
                     {"tb", c.tb},
                     {"rot", c.rot},
                     {"coeff", c.coeff ? json(c.coeff->to_string()) : json(nullptr)}});
  json links = json::array();
  const auto& cs = d.components();
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j)
      if (long long lk = d.linking(cs[i].id, cs[j].id); lk != 0) links.push_back({cs[i].id, cs[j].id, lk});
  return {{"components", comps}, {"linkings", links}};
}

// Linkings are taken verbatim from the record list (no pushoff defaults).
inline ContactDiagram diagram_from_json(const json& j) {
  ContactDiagram d;
  for (const auto& c : j.at("components")) {
    LegendrianComponent comp;
    comp.id = c.at("id").get<std::string>();
    auto type = c.at("type").get<std::string>();
    if (type == "unknot")
      comp.knot = KnotType::Unknot;
    else if (type == "rhtrefoil")
      comp.knot = KnotType::RHTrefoil;
    else if (type.starts_with("pushoff:"))
      comp.parent = type.substr(8);
    else
      throw ArgumentError("unknown component type '" + type + "'");
    comp.tb = c.at("tb").get<long long>();
    comp.rot = c.at("rot").get<long long>();
    if (!c.at("coeff").is_null()) comp.coeff = Coefficient::parse(c.at("coeff").get<std::string>());
    d.add(std::move(comp));
  }
  for (const auto& l : j.at("linkings")) {
    auto a = l.at(0).get<std::string>();
    auto b = l.at(1).get<std::string>();
    if (!d.contains(a) || !d.contains(b)) throw ArgumentError("linking refers to an unknown component");
    d.set_linking(a, b, l.at(2).get<long long>());
  }
  d.validate();
  return d;
}

// ---------------------------------------------------------------------------
// Framed links: {"n": N, "matrix": [row-major N*N], "tags": [...]}

inline json to_json(const FramedLink& fl) {
  json m = json::array();
  for (const auto& row : fl.matrix)
    for (const auto& v : row) m.push_back(static_cast<long long>(v));
  json tags = json::array();
  for (auto t : fl.tags) tags.push_back(std::string(link_tag_name(t)));
  return {{"n", fl.n()}, {"matrix", m}, {"tags", tags}};
}

inline FramedLink parse_framed_link(std::string_view text) {
  json j = parse_json(text);
  return with_schema("framed link", [&] {
    FramedLink fl;
    auto n = j.at("n").get<std::size_t>();
    const auto& m = j.at("matrix");
    if (m.size() != n * n) throw ArgumentError("matrix must have n*n entries");
    fl.matrix.assign(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) fl.matrix[i][k] = m.at(i * n + k).get<long long>();
    if (j.contains("tags")) {
      for (const auto& t : j.at("tags")) fl.tags.push_back(parse_link_tag(t.get<std::string>()));
    } else {
      fl.tags.assign(n, LinkTag::Unknown);
    }
    try {
      fl.validate();
    } catch (const InvariantViolation& e) {
      throw ArgumentError(e.what());
    }
    return fl;
  });
}

// ---------------------------------------------------------------------------
// Rank facts: [{"manifold": "...", "rank": n} | {"manifold": "...", "interval": [lo, hi|null]}]
// Triangles:  [{"a": "...", "b": "...", "c": "...", "provenance": "..."}]

inline json to_json(const RankFact& f) {
  if (f.is_exact()) return {{"rank", f.lo}};
  json j = {{"interval", {f.lo, f.hi ? json(*f.hi) : json(nullptr)}}};
  if (f.parity) j["parity"] = *f.parity ? "odd" : "even";
  return j;
}

inline RankDb parse_facts(std::string_view text, RankDb db) {
  json j = parse_json(text);
  with_schema("rank facts", [&] {
    for (const auto& rec : j) {
      auto id = ManifoldId::parse(rec.at("manifold").get<std::string>());
      RankFact f;
      if (rec.contains("rank")) {
        f = RankFact::exactly(rec.at("rank").get<long long>());
      } else {
        const auto& iv = rec.at("interval");
        std::optional<long long> hi;
        if (!iv.at(1).is_null()) hi = iv.at(1).get<long long>();
        std::optional<int> parity;
        if (rec.contains("parity")) parity = rec.at("parity").get<std::string>() == "odd" ? 1 : 0;
        f = RankFact::between(iv.at(0).get<long long>(), hi, parity);
      }
      db.declare(id, f);
    }
    return 0;
  });
  return db;
}

inline json to_json(const TriangleInstance& t) {
  json j = {{"a", t.a.to_string()}, {"b", t.b.to_string()}, {"c", t.c.to_string()}, {"provenance", t.provenance}};
  if (t.informational) j["informational"] = true;
  return j;
}

inline TriangleInstance triangle_from_json(const json& rec) {
  TriangleInstance t{ManifoldId::parse(rec.at("a").get<std::string>()),
                     ManifoldId::parse(rec.at("b").get<std::string>()),
                     ManifoldId::parse(rec.at("c").get<std::string>()),
                     rec.value("provenance", std::string()), rec.value("informational", false)};
  return t;
}

inline std::vector<TriangleInstance> parse_triangles(std::string_view text) {
  json j = parse_json(text);
  return with_schema("triangles", [&] {
    std::vector<TriangleInstance> out;
    for (const auto& rec : j) out.push_back(triangle_from_json(rec));
    return out;
  });
}

inline json to_json(const TriangleSolution& s) {
  return {{"rank_f", s.rank_f},           {"rank_g", s.rank_g},           {"rank_h", s.rank_h},
          {"f_injective", s.f_injective}, {"f_surjective", s.f_surjective}, {"g_injective", s.g_injective},
          {"g_surjective", s.g_surjective}, {"h_injective", s.h_injective}, {"h_surjective", s.h_surjective}};
}

inline TriangleSolution solution_from_json(const json& j) {
  TriangleSolution s;
  s.rank_f = j.at("rank_f").get<long long>();
  s.rank_g = j.at("rank_g").get<long long>();
  s.rank_h = j.at("rank_h").get<long long>();
  s.f_injective = j.at("f_injective").get<bool>();
  s.f_surjective = j.at("f_surjective").get<bool>();
  s.g_injective = j.at("g_injective").get<bool>();
  s.g_surjective = j.at("g_surjective").get<bool>();
  s.h_injective = j.at("h_injective").get<bool>();
  s.h_surjective = j.at("h_surjective").get<bool>();
  return s;
}

// ---------------------------------------------------------------------------
// Certificates

inline constexpr std::string_view kCertificateFormat = "tightcert-certificate/1";

inline std::string origin_kind_name(NodeOrigin::Kind k) {
  switch (k) {
    case NodeOrigin::Kind::Intermediate: return "intermediate";
    case NodeOrigin::Kind::Slope: return "slope";
    case NodeOrigin::Kind::Vk: return "vk";
    case NodeOrigin::Kind::StandardS3: return "standard-s3";
    case NodeOrigin::Kind::UnknotPlusOne: return "unknot-plus-one";
  }
  return "";
}

inline NodeOrigin::Kind origin_kind_from(const std::string& s) {
  for (auto k : {NodeOrigin::Kind::Intermediate, NodeOrigin::Kind::Slope, NodeOrigin::Kind::Vk,
                 NodeOrigin::Kind::StandardS3, NodeOrigin::Kind::UnknotPlusOne})
    if (origin_kind_name(k) == s) return k;
  throw ArgumentError("unknown node origin '" + s + "'");
}

inline json to_json(const NodeOrigin& o) {
  json j = {{"kind", origin_kind_name(o.kind)}};
  if (o.kind == NodeOrigin::Kind::Slope) {
    j["slope"] = o.slope.to_string();
    json ch = json::object();
    for (const auto& [id, vecs] : o.choices) ch[id] = vecs;
    j["choices"] = ch;
  }
  if (o.kind == NodeOrigin::Kind::Vk) j["k"] = o.k;
  return j;
}

inline NodeOrigin origin_from_json(const json& j) {
  NodeOrigin o;
  o.kind = origin_kind_from(j.at("kind").get<std::string>());
  if (o.kind == NodeOrigin::Kind::Slope) {
    o.slope = Coefficient::parse(j.at("slope").get<std::string>());
    for (const auto& [id, vecs] : j.at("choices").items()) o.choices[id] = vecs.get<SignChoice>();
  }
  if (o.kind == NodeOrigin::Kind::Vk) o.k = j.at("k").get<long long>();
  return o;
}

inline json to_json(const Witness& w) {
  if (w.kind == Witness::Kind::PushoffOf) return {{"kind", "pushoff"}, {"component", w.component}};
  return {{"kind", "new-knot"}, {"knot", std::string(knot_type_name(w.knot))}, {"tb", w.tb}, {"rot", w.rot}};
}

inline Witness witness_from_json(const json& j) {
  Witness w;
  auto kind = j.at("kind").get<std::string>();
  if (kind == "pushoff") {
    w.kind = Witness::Kind::PushoffOf;
    w.component = j.at("component").get<std::string>();
  } else if (kind == "new-knot") {
    w.kind = Witness::Kind::NewKnot;
    auto knot = j.at("knot").get<std::string>();
    if (knot != "unknot" && knot != "rhtrefoil") throw ArgumentError("unknown witness knot '" + knot + "'");
    w.knot = knot == "unknot" ? KnotType::Unknot : KnotType::RHTrefoil;
    w.tb = j.at("tb").get<long long>();
    w.rot = j.at("rot").get<long long>();
  } else {
    throw ArgumentError("unknown witness kind '" + kind + "'");
  }
  return w;
}

inline json to_json(const Conclusion& c) {
  return std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, NodeFact>) {
          const auto& n = f.node;
          return {{"kind", "node"},          {"id", n.id},
                  {"description", n.description}, {"manifold", n.manifold.to_string()},
                  {"h1", to_json(n.h1)},     {"origin", to_json(n.origin)},
                  {"diagram", to_json(n.diagram)}};
        } else if constexpr (std::is_same_v<T, EdgeFact>) {
          return {{"kind", "edge"}, {"from", f.edge.from}, {"to", f.edge.to}, {"witness", to_json(f.edge.witness)}};
        } else if constexpr (std::is_same_v<T, EquivalentFact>) {
          return {{"kind", "equivalent"}, {"a", f.a}, {"b", f.b}};
        } else if constexpr (std::is_same_v<T, RankClaim>) {
          json src = f.source.kind == RankSource::Kind::Base
                         ? json{{"kind", "base"}}
                         : json{{"kind", "propagation"}, {"max_k", f.source.max_k}};
          return {{"kind", "rank"}, {"manifold", f.manifold.to_string()}, {"rank", f.rank}, {"source", src}};
        } else if constexpr (std::is_same_v<T, InjectiveFact>) {
          return {{"kind", "injective"},
                  {"triangle", to_json(f.triangle)},
                  {"dims", {f.dims[0], f.dims[1], f.dims[2]}},
                  {"solution", to_json(f.solution)}};
        } else if constexpr (std::is_same_v<T, SteinFact>) {
          return {{"kind", "stein-fillable"}, {"node", f.node}};
        } else if constexpr (std::is_same_v<T, NonzeroFact>) {
          return {{"kind", "contact-invariant-nonzero"}, {"node", f.node}};
        } else {
          return {{"kind", "tight"}, {"node", f.node}};
        }
      },
      c);
}

inline Conclusion conclusion_from_json(const json& j) {
  auto kind = j.at("kind").get<std::string>();
  if (kind == "node") {
    ContactNode n;
    n.id = j.at("id").get<std::string>();
    n.description = j.at("description").get<std::string>();
    n.manifold = ManifoldId::parse(j.at("manifold").get<std::string>());
    n.h1 = homology_from_json(j.at("h1"));
    n.origin = origin_from_json(j.at("origin"));
    n.diagram = diagram_from_json(j.at("diagram"));
    return NodeFact{std::move(n)};
  }
  if (kind == "edge")
    return EdgeFact{{j.at("from").get<std::string>(), j.at("to").get<std::string>(), witness_from_json(j.at("witness"))}};
  if (kind == "equivalent") return EquivalentFact{j.at("a").get<std::string>(), j.at("b").get<std::string>()};
  if (kind == "rank") {
    RankClaim r;
    r.manifold = ManifoldId::parse(j.at("manifold").get<std::string>());
    r.rank = j.at("rank").get<long long>();
    auto src = j.at("source").at("kind").get<std::string>();
    if (src == "base") {
      r.source = {RankSource::Kind::Base, 0};
    } else if (src == "propagation") {
      r.source = {RankSource::Kind::Propagation, j.at("source").at("max_k").get<long long>()};
    } else {
      throw ArgumentError("unknown rank source '" + src + "'");
    }
    return r;
  }
  if (kind == "injective") {
    InjectiveFact f;
    f.triangle = triangle_from_json(j.at("triangle"));
    for (int i = 0; i < 3; ++i) f.dims[i] = j.at("dims").at(static_cast<std::size_t>(i)).get<long long>();
    f.solution = solution_from_json(j.at("solution"));
    return f;
  }
  if (kind == "stein-fillable") return SteinFact{j.at("node").get<std::string>()};
  if (kind == "contact-invariant-nonzero") return NonzeroFact{j.at("node").get<std::string>()};
  if (kind == "tight") return TightFact{j.at("node").get<std::string>()};
  throw ArgumentError("unknown conclusion kind '" + kind + "'");
}

inline json to_json(const Certificate& c) {
  json steps = json::array();
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const auto& s = c.steps[i];
    steps.push_back({{"index", i},
                     {"rule", s.rule},
                     {"premises", s.premises},
                     {"conclusion", to_json(s.conclusion)},
                     {"provenance", s.provenance}});
  }
  return {{"format", kCertificateFormat}, {"slope", c.slope.to_string()}, {"verdict", c.verdict},
          {"root", c.root},               {"steps", steps}};
}

inline Certificate certificate_from_json(const json& j) {
  return with_schema("certificate", [&] {
    if (j.at("format").get<std::string>() != kCertificateFormat) throw ArgumentError("unsupported certificate format");
    Certificate c;
    c.slope = Coefficient::parse(j.at("slope").get<std::string>());
    c.verdict = j.at("verdict").get<std::string>();
    c.root = j.at("root").get<std::string>();
    for (const auto& s : j.at("steps")) {
      Step step{s.at("rule").get<std::string>(), s.at("premises").get<std::vector<std::size_t>>(),
                conclusion_from_json(s.at("conclusion")), s.at("provenance").get<std::string>()};
      c.steps.push_back(std::move(step));
    }
    return c;
  });
}

inline Certificate parse_certificate(std::string_view text) { return certificate_from_json(parse_json(text)); }

}  // namespace tightcert::io
