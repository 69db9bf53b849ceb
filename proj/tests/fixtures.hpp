#pragma once

// Diagram helpers shared by the unit tests and the acceptance binary. The
// counting and matrix helpers read data off a diagram directly and never go
// through the library's own homology or counting code.

#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "tightcert/contact_diagram.hpp"

namespace fixture {

using tightcert::Coefficient;
using tightcert::ContactDiagram;
using tightcert::Integer;
using tightcert::KnotType;

inline Coefficient q(long long n, long long d = 1) { return Coefficient(Integer(n), Integer(d)); }

inline ContactDiagram single(KnotType knot, long long tb, std::optional<Coefficient> coeff, std::string id = "K") {
  ContactDiagram d;
  d.add({std::move(id), knot, std::nullopt, tb, 0, std::move(coeff)});
  return d;
}

// Framings tb + coeff and recorded linkings. Every coefficient must be +-1.
inline oracle::Mat matrix_of(const ContactDiagram& d) {
  const auto& cs = d.components();
  oracle::Mat m(cs.size(), std::vector<long long>(cs.size(), 0));
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Coefficient& c = *cs[i].coeff;
    if (c != q(1) && c != q(-1)) throw std::logic_error("component " + cs[i].id + " is not normalized");
    m[i][i] = cs[i].tb + static_cast<long long>(c.numerator());
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (i != j) m[i][j] = d.linking(cs[i].id, cs[j].id);
  }
  return m;
}

// Floor expansion of p/q < 0 with machine integers.
inline std::vector<long long> expansion(long long p, long long d) {
  std::vector<long long> out;
  while (true) {
    long long a = p / d;
    if (a * d > p) --a;
    out.push_back(a);
    long long rem = p - a * d;
    if (rem == 0) return out;
    p = -d;
    d = rem;
  }
}

inline std::vector<long long> counts_of(const std::vector<long long>& cf) {
  std::vector<long long> s;
  for (std::size_t i = 0; i < cf.size(); ++i) s.push_back(std::llabs(cf[i] + (i == 0 ? 1 : 2)));
  return s;
}

// Stabilization counts of the chain that normalizing p/q produces.
inline std::vector<long long> chain_counts(long long p, long long d) {
  if (p < 0) return counts_of(expansion(p, d));
  if (p == 1 || d == 0) return {};
  long long k = d / p + 1;
  // r'' = p / (d - k p) = -p / (k p - d) < 0
  return counts_of(expansion(-p, k * p - d));
}

inline std::vector<std::pair<long long, long long>> invariants(const ContactDiagram& d) {
  std::vector<std::pair<long long, long long>> out;
  for (const auto& c : d.components()) out.emplace_back(c.tb, c.rot);
  return out;
}

// Normalizes a tb -1 unknot with coefficient p/d under every sign vector and
// counts the distinct (tb, rot) outcomes.
inline long long brute_force_count(long long p, long long d) {
  auto counts = chain_counts(p, d);
  long long total = 0;
  for (long long s : counts) total += s;
  if (total > 24) throw std::logic_error("too many stabilizations to enumerate");
  std::set<std::vector<std::pair<long long, long long>>> outcomes;
  for (long long mask = 0; mask < (1LL << total); ++mask) {
    tightcert::SignChoice choice;
    long long bit = 0;
    for (long long s : counts) {
      std::vector<int> v;
      for (long long j = 0; j < s; ++j) v.push_back((mask >> bit++) & 1 ? 1 : -1);
      choice.push_back(v);
    }
    tightcert::NormalizeChoices nc;
    if (!counts.empty()) nc["K"] = choice;
    outcomes.insert(invariants(tightcert::dg_normalize(single(KnotType::Unknot, -1, q(p, d)), nc)));
  }
  return static_cast<long long>(outcomes.size());
}

// The surgery is smoothly r - 1 on the unknot, a lens space whose tight
// structures number prod |b_i + 1| over the expansion of r - 1.
inline long long lens_count(long long p, long long d) {
  long long product = 1;
  for (long long b : expansion(p - d, d)) product *= std::llabs(b + 1);
  return product;
}

}  // namespace fixture
