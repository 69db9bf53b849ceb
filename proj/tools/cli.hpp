#pragma once

// tightcert command-line front end. Exit codes: 0 success, 1 usage or parse
// error, 2 domain error (excluded slope, coefficient 0, inconsistent ranks),
// 3 verification failure.

#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tightcert/tightcert.hpp"

namespace tightcert::cli {

inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDomain = 2;
inline constexpr int kVerifyFailed = 3;

namespace detail {

using io::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  out << text;
}

// "ID=+-/-" : one '/'-separated sign string per chain knot.
inline NormalizeChoices parse_choices(const std::vector<std::string>& specs) {
  NormalizeChoices out;
  for (const auto& spec : specs) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ArgumentError("choice must look like ID=+-/-, got '" + spec + "'");
    SignChoice vecs(1);
    for (char ch : spec.substr(eq + 1)) {
      if (ch == '/')
        vecs.emplace_back();
      else if (ch == '+' || ch == '-')
        vecs.back().push_back(ch == '+' ? 1 : -1);
      else
        throw ArgumentError("choice signs must be '+', '-' or '/', got '" + spec + "'");
    }
    out[spec.substr(0, eq)] = std::move(vecs);
  }
  return out;
}

inline std::string describe(const Conclusion& c) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, NodeFact>)
          return "node " + f.node.id + " " + f.node.description + ", H1 = " + f.node.h1.to_string();
        else if constexpr (std::is_same_v<T, EdgeFact>)
          return "edge " + f.edge.from + " -> " + f.edge.to + " by (+1)-surgery on " +
                 (f.edge.witness.kind == Witness::Kind::PushoffOf
                      ? "a pushoff of " + f.edge.witness.component
                      : "a new " + std::string(knot_type_name(f.edge.witness.knot)) + " (tb " +
                            std::to_string(f.edge.witness.tb) + ")");
        else if constexpr (std::is_same_v<T, EquivalentFact>)
          return f.a + " == " + f.b;
        else if constexpr (std::is_same_v<T, RankClaim>)
          return "rank HF(" + f.manifold.to_string() + ") = " + std::to_string(f.rank);
        else if constexpr (std::is_same_v<T, InjectiveFact>)
          return "F injective on (" + std::to_string(f.dims[0]) + ", " + std::to_string(f.dims[1]) + ", " +
                 std::to_string(f.dims[2]) + ")";
        else if constexpr (std::is_same_v<T, SteinFact>)
          return f.node + " Stein fillable";
        else if constexpr (std::is_same_v<T, NonzeroFact>)
          return "c(" + f.node + ") != 0";
        else
          return f.node + " tight";
      },
      c);
}

inline std::string certificate_report(const Certificate& cert) {
  std::ostringstream out;
  std::map<std::string, std::size_t> per_rule;
  for (const auto& s : cert.steps) ++per_rule[s.rule];
  out << "TIGHT r=" << cert.slope.to_string() << " (" << cert.steps.size() << " steps";
  for (const auto& [rule, n] : per_rule) out << ", " << rule << " x" << n;
  out << ")\n";
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const auto& s = cert.steps[i];
    out << "  [" << i << "] " << s.rule << ": " << describe(s.conclusion);
    if (!s.premises.empty()) {
      out << " <=";
      for (auto p : s.premises) out << " [" << p << "]";
    }
    out << "\n        " << s.provenance << "\n";
  }
  return out.str();
}

inline ContactDiagram load_or_build_diagram(const std::string& diagram_path, const std::string& slope) {
  if (!diagram_path.empty()) return io::parse_diagram(read_file(diagram_path));
  if (!slope.empty()) return generate_yr_diagram(Coefficient::parse(slope));
  throw ArgumentError("give --diagram FILE or --r SLOPE");
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using detail::json;
  CLI::App app{"tightcert: contact surgery, Floer rank bookkeeping and tightness certificates", "tightcert"};
  app.require_subcommand(1);
  bool as_json = false;

  std::string diagram_path, link_path, slope, coeff, facts_path, triangles_path, emit_path, batch_path, verify_path;
  std::vector<std::string> choice_specs;
  long long max_k = 0;
  std::vector<long long> solve;

  auto* convert = app.add_subcommand("convert", "normalize a contact diagram to (+/-1) surgeries");
  convert->add_option("--diagram", diagram_path, "diagram file");
  convert->add_option("--r", slope, "build the trefoil diagram of Y_r instead");
  convert->add_option("--choice", choice_specs, "stabilization signs, ID=+-/- (repeatable)");
  convert->add_option("--out", emit_path, "write the normalized diagram here");
  convert->add_flag("--json", as_json);

  auto* h1cmd = app.add_subcommand("h1", "first homology of the surgered manifold");
  h1cmd->add_option("--link", link_path, "framed link JSON");
  h1cmd->add_option("--diagram", diagram_path, "diagram file (normalized first)");
  h1cmd->add_option("--r", slope, "trefoil slope");
  h1cmd->add_flag("--json", as_json);

  auto* det = app.add_subcommand("det", "determinant of the linking matrix");
  det->add_option("--link", link_path, "framed link JSON");
  det->add_option("--diagram", diagram_path, "diagram file (normalized first)");
  det->add_flag("--json", as_json);

  auto* count = app.add_subcommand("count", "number of tight presentations of a contact coefficient");
  count->add_option("--coeff", coeff, "contact coefficient")->required();
  count->add_flag("--json", as_json);

  auto* ranks = app.add_subcommand("ranks", "propagate HF-hat rank constraints to a fixpoint");
  ranks->add_option("--max-k", max_k, "include the V_k triangle families up to k");
  ranks->add_option("--facts", facts_path, "extra rank facts (JSON)");
  ranks->add_option("--triangles", triangles_path, "extra exact triangles (JSON)");
  ranks->add_flag("--json", as_json);

  auto* triangle = app.add_subcommand("triangle", "solve an exact triangle of Z/2 vector spaces");
  triangle->add_option("--solve", solve, "dimensions a b c")->expected(3)->required();
  triangle->add_flag("--json", as_json);

  auto* certify = app.add_subcommand("certify", "emit a tightness certificate for Y_r");
  certify->add_option("--r", slope, "trefoil slope p/q");
  certify->add_option("--batch", batch_path, "file of slopes, one per line");
  certify->add_option("--emit", emit_path, "write the certificate JSON here");
  certify->add_flag("--json", as_json);

  auto* verify = app.add_subcommand("verify", "check a certificate file");
  verify->add_option("file", verify_path, "certificate JSON")->required();
  verify->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (convert->parsed()) {
      ContactDiagram d = dg_normalize(detail::load_or_build_diagram(diagram_path, slope),
                                      detail::parse_choices(choice_specs));
      HomologyResult h = h1(d);
      std::string text = as_json ? json{{"diagram", io::to_json(d)}, {"h1", io::to_json(h)}}.dump(2) + "\n"
                                 : io::format_diagram(d) + "# H1 = " + h.to_string() + "\n";
      if (!emit_path.empty())
        detail::write_file(emit_path, text);
      else
        out << text;
      return kOk;
    }

    if (h1cmd->parsed()) {
      HomologyResult h = !link_path.empty() ? h1(io::parse_framed_link(detail::read_file(link_path)))
                                            : h1(dg_normalize(detail::load_or_build_diagram(diagram_path, slope)));
      if (as_json)
        out << io::to_json(h).dump(2) << "\n";
      else
        out << "H1 = " << h.to_string() << "\n";
      return kOk;
    }

    if (det->parsed()) {
      FramedLink fl = !link_path.empty() ? io::parse_framed_link(detail::read_file(link_path))
                                         : linking_matrix(dg_normalize(detail::load_or_build_diagram(diagram_path, "")));
      Integer value = det_signed(fl.matrix);
      if (as_json)
        out << json{{"det", value.str()}, {"n", fl.n()}}.dump(2) << "\n";
      else
        out << "det = " << value.str() << "\n";
      return kOk;
    }

    if (count->parsed()) {
      Coefficient c = Coefficient::parse(coeff);
      Integer n = count_presentations(c);
      if (as_json)
        out << json{{"coeff", c.to_string()}, {"presentations", n.str()}}.dump(2) << "\n";
      else
        out << "presentations(" << c.to_string() << ") = " << n.str() << "\n";
      return kOk;
    }

    if (ranks->parsed()) {
      RankDb db = base_facts();
      if (!facts_path.empty()) db = io::parse_facts(detail::read_file(facts_path), db);
      std::vector<TriangleInstance> tris;
      if (max_k > 0) tris = vk_triangles(max_k);
      if (!triangles_path.empty())
        for (auto& t : io::parse_triangles(detail::read_file(triangles_path))) tris.push_back(std::move(t));
      PropagationResult r = propagate(db, tris);
      if (as_json) {
        json table = json::array();
        for (const auto& [id, f] : r.db.facts()) {
          json row = io::to_json(f);
          row["manifold"] = id.to_string();
          table.push_back(row);
        }
        json j = {{"facts", table}, {"sweeps", r.sweeps}, {"triangles", tris.size()}};
        if (r.contradiction)
          j["contradiction"] = {{"triangle", r.contradiction->triangle_index},
                                {"provenance", r.contradiction->provenance},
                                {"vertex", r.contradiction->vertex.to_string()},
                                {"detail", r.contradiction->detail}};
        out << j.dump(2) << "\n";
      } else {
        if (r.contradiction) {
          out << "CONTRADICTION in triangle " << r.contradiction->triangle_index << ": " << r.contradiction->detail
              << "\n  " << r.contradiction->provenance << "\n";
        } else {
          out << "fixpoint after " << r.sweeps << " sweeps over " << tris.size() << " triangles\n";
          for (const auto& [id, f] : r.db.facts()) {
            if (id.kind() == ManifoldId::Kind::MinusVk)
              out << "d(" << id.p() << ") = " << f.to_string() << "\n";
            else
              out << "rank HF(" << id.to_string() << ") = " << f.to_string() << "\n";
          }
        }
      }
      return r.contradiction ? kDomain : kOk;
    }

    if (triangle->parsed()) {
      TriangleSolution s = triangle_solve(solve[0], solve[1], solve[2]);
      if (as_json) {
        out << io::to_json(s).dump(2) << "\n";
      } else {
        out << "rank f = " << s.rank_f << ", rank g = " << s.rank_g << ", rank h = " << s.rank_h << "\n";
        auto flag = [&](const char* name, bool inj, bool surj) {
          out << name << (inj && surj ? " bijective" : inj ? " injective" : surj ? " surjective" : " neither")
              << "\n";
        };
        flag("f", s.f_injective, s.f_surjective);
        flag("g", s.g_injective, s.g_surjective);
        flag("h", s.h_injective, s.h_surjective);
      }
      return kOk;
    }

    if (certify->parsed()) {
      if (slope.empty() == batch_path.empty()) throw ArgumentError("give exactly one of --r or --batch");
      std::vector<std::string> slopes;
      if (!slope.empty()) {
        slopes.push_back(slope);
      } else {
        std::istringstream lines(detail::read_file(batch_path));
        for (std::string line; std::getline(lines, line);) {
          auto b = line.find_first_not_of(" \t\r");
          if (b == std::string::npos || line[b] == '#') continue;
          auto e = line.find_last_not_of(" \t\r");
          slopes.push_back(line.substr(b, e - b + 1));
        }
      }
      struct Outcome {
        std::optional<Certificate> cert;
        std::string text;
        int code = kOk;
      };
      auto work = [as_json](const std::string& s) {
        Outcome o;
        try {
          Coefficient r = Coefficient::parse(s);
          o.cert = certify_tight(r);
          CheckReport rep = check_certificate(*o.cert);
          if (!rep) {
            o.code = kVerifyFailed;
            o.text = "INTERNAL: emitted certificate for r=" + s + " fails verification: " + rep.message + "\n";
          } else if (!as_json) {
            o.text = detail::certificate_report(*o.cert);
          }
        } catch (const ExcludedSlopeError& e) {
          o.code = kDomain;
          o.cert.reset();
          o.text = "EXCLUDED r=" + s + ": " + e.what() + "\n";
        } catch (const DomainError& e) {
          o.code = kDomain;
          o.cert.reset();
          o.text = "ERROR r=" + s + ": " + e.what() + "\n";
        } catch (const ArgumentError& e) {
          o.code = kUsage;
          o.text = "ERROR r=" + s + ": " + e.what() + "\n";
        }
        return o;
      };
      std::vector<std::future<Outcome>> futures;
      for (const auto& s : slopes) futures.push_back(std::async(std::launch::async, work, s));
      int code = kOk;
      json emitted = json::array();
      json report = json::array();
      for (std::size_t i = 0; i < futures.size(); ++i) {
        Outcome o = futures[i].get();
        code = std::max(code, o.code);
        if (o.cert) emitted.push_back(io::to_json(*o.cert));
        if (as_json) {
          json row = {{"slope", slopes[i]}, {"exit", o.code}};
          if (o.cert)
            row["verdict"] = o.cert->verdict, row["steps"] = o.cert->steps.size();
          else
            row["error"] = o.text;
          report.push_back(row);
        } else {
          out << o.text;
        }
      }
      if (as_json) out << (slope.empty() ? json{{"results", report}} : report[0]).dump(2) << "\n";
      if (!emit_path.empty()) {
        json payload = slope.empty() ? emitted : (emitted.empty() ? json(nullptr) : emitted[0]);
        if (!payload.is_null()) detail::write_file(emit_path, payload.dump(1) + "\n");
      }
      return code;
    }

    if (verify->parsed()) {
      std::string text = detail::read_file(verify_path);
      json j = io::parse_json(text);
      std::vector<json> items = j.is_array() ? std::vector<json>(j.begin(), j.end()) : std::vector<json>{j};
      int code = kOk;
      json report = json::array();
      for (std::size_t i = 0; i < items.size(); ++i) {
        CheckReport rep;
        std::string slope_text = "?";
        if (items[i].is_object() && items[i].contains("slope") && items[i]["slope"].is_string())
          slope_text = items[i]["slope"].get<std::string>();
        try {
          rep = check_certificate(io::certificate_from_json(items[i]));
        } catch (const ParseError& e) {
          rep = {false, std::nullopt, std::string("malformed certificate: ") + e.what()};
        }
        if (!rep) code = kVerifyFailed;
        if (as_json) {
          json row = {{"slope", slope_text}, {"valid", rep.ok}};
          if (!rep.ok) {
            row["message"] = rep.message;
            if (rep.failing_step) row["step"] = *rep.failing_step;
          }
          report.push_back(row);
        } else if (rep.ok) {
          out << "VALID r=" << slope_text << "\n";
        } else {
          out << "INVALID r=" << slope_text;
          if (rep.failing_step) out << " at step " << *rep.failing_step;
          out << ": " << rep.message << "\n";
        }
      }
      if (as_json) out << (j.is_array() ? report : report[0]).dump(2) << "\n";
      return code;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const NoExactTriangleError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace tightcert::cli
