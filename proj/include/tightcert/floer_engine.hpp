#pragma once

// Rank bookkeeping for HF-hat over Z/2: declared rank facts, exact triangles
// among total groups, and interval propagation to a fixpoint.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tightcert/errors.hpp"
#include "tightcert/smooth_topology.hpp"

namespace tightcert {

/// A set of admissible ranks: {lo..hi} (hi may be unbounded), optionally
/// restricted to one parity class. Always kept normalized so that lo and hi
/// have the stated parity.
struct RankFact {
  long long lo = 0;
  std::optional<long long> hi;
  std::optional<int> parity;

  static RankFact exactly(long long v) { return RankFact{v, v, static_cast<int>(v & 1)}; }
  static RankFact unknown() { return RankFact{}; }
  static RankFact between(long long lo, std::optional<long long> hi, std::optional<int> parity = std::nullopt) {
    RankFact f{std::max(0LL, lo), hi, parity};
    return f.normalized().value_or(f);
  }

  bool is_exact() const noexcept { return hi && *hi == lo; }
  bool contains(long long v) const noexcept {
    return v >= lo && (!hi || v <= *hi) && (!parity || (v & 1) == *parity);
  }

  // nullopt when the set is empty.
  std::optional<RankFact> normalized() const {
    RankFact f = *this;
    if (f.parity) {
      if ((f.lo & 1) != *f.parity) ++f.lo;
      if (f.hi && (*f.hi & 1) != *f.parity) --*f.hi;
    }
    if (f.hi && *f.hi < f.lo) return std::nullopt;
    if (f.is_exact()) f.parity = static_cast<int>(f.lo & 1);
    return f;
  }

  std::optional<RankFact> intersect(const RankFact& o) const {
    if (parity && o.parity && *parity != *o.parity) return std::nullopt;
    RankFact f;
    f.lo = std::max(lo, o.lo);
    if (hi && o.hi)
      f.hi = std::min(*hi, *o.hi);
    else
      f.hi = hi ? hi : o.hi;
    f.parity = parity ? parity : o.parity;
    return f.normalized();
  }

  std::string to_string() const {
    if (is_exact()) return std::to_string(lo);
    std::string s = "[" + std::to_string(lo) + "," + (hi ? std::to_string(*hi) + "]" : std::string("inf)"));
    if (parity) s += *parity ? " odd" : " even";
    return s;
  }

  friend bool operator==(const RankFact&, const RankFact&) = default;
};

class RankDb {
 public:
  // With the lens axiom on, every L(p, q) has rank p without being stored.
  explicit RankDb(bool lens_axiom = false) : lens_axiom_(lens_axiom) {}

  bool lens_axiom() const noexcept { return lens_axiom_; }
  const std::map<ManifoldId, RankFact>& facts() const noexcept { return facts_; }

  std::optional<RankFact> find(const ManifoldId& id) const {
    if (auto it = facts_.find(id); it != facts_.end()) return it->second;
    if (lens_axiom_ && id.kind() == ManifoldId::Kind::Lens) return RankFact::exactly(id.p());
    return std::nullopt;
  }

  RankFact get(const ManifoldId& id) const { return find(id).value_or(RankFact::unknown()); }

  // Narrows the fact for `id`; an empty intersection is a contradiction.
  void declare(const ManifoldId& id, const RankFact& fact) {
    auto merged = get(id).intersect(fact);
    if (!merged)
      throw DomainError("rank fact " + fact.to_string() + " for " + id.to_string() + " contradicts " +
                        get(id).to_string());
    facts_[id] = *merged;
  }

  friend bool operator==(const RankDb&, const RankDb&) = default;

 private:
  std::map<ManifoldId, RankFact> facts_;
  bool lens_axiom_;
};

/// S^3 and -Y_{+1} (the Poincaré sphere) have rank 1, S^1 x S^2 rank 2,
/// L(p, q) rank p, and -V_1 = S^3 rank 1.
inline RankDb base_facts() {
  RankDb db(true);
  db.declare(ManifoldId::s3(), RankFact::exactly(1));
  db.declare(ManifoldId::s1xs2(), RankFact::exactly(2));
  db.declare(ManifoldId::poincare_sphere(), RankFact::exactly(1));
  db.declare(ManifoldId::minus_vk(1), RankFact::exactly(1));
  return db;
}

/// A -> B -> C -> A, exact at each vertex.
struct TriangleInstance {
  ManifoldId a = ManifoldId::s3();
  ManifoldId b = ManifoldId::s3();
  ManifoldId c = ManifoldId::s3();
  std::string provenance;
  bool informational = false;  // recorded, never propagated

  friend bool operator==(const TriangleInstance&, const TriangleInstance&) = default;
};

// Ranks of f: A -> B, g: B -> C, h: C -> A.
struct TriangleSolution {
  long long rank_f = 0;
  long long rank_g = 0;
  long long rank_h = 0;
  bool f_injective = false;
  bool f_surjective = false;
  bool g_injective = false;
  bool g_surjective = false;
  bool h_injective = false;
  bool h_surjective = false;

  friend bool operator==(const TriangleSolution&, const TriangleSolution&) = default;
};

/// Exactness forces rank f = (a+b-c)/2, rank g = (b+c-a)/2, rank h = (a+c-b)/2.
inline TriangleSolution triangle_solve(long long a, long long b, long long c) {
  auto fail = [&](const std::string& why) {
    return NoExactTriangleError("no exact triangle with dimensions (" + std::to_string(a) + ", " +
                                std::to_string(b) + ", " + std::to_string(c) + "): " + why);
  };
  if (a < 0 || b < 0 || c < 0) throw fail("negative dimension");
  if ((a + b + c) % 2 != 0) throw fail("odd total dimension");
  TriangleSolution s;
  s.rank_f = (a + b - c) / 2;
  s.rank_g = (b + c - a) / 2;
  s.rank_h = (a + c - b) / 2;
  if (s.rank_f < 0 || s.rank_g < 0 || s.rank_h < 0) throw fail("triangle inequality violated");
  // ker f = im h, ker g = im f, ker h = im g.
  s.f_injective = s.rank_h == 0;
  s.f_surjective = s.rank_g == 0;
  s.g_injective = s.rank_f == 0;
  s.g_surjective = s.rank_h == 0;
  s.h_injective = s.rank_g == 0;
  s.h_surjective = s.rank_f == 0;
  if (a != s.rank_f + s.rank_h || b != s.rank_g + s.rank_f || c != s.rank_h + s.rank_g)
    throw InvariantViolation("triangle solution violates the dimension identities");
  return s;
}

/// Admissible ranks of the third vertex given the other two.
inline RankFact rank_bounds(long long known1, long long known2) {
  long long lo = known1 > known2 ? known1 - known2 : known2 - known1;
  return RankFact{lo, known1 + known2, static_cast<int>((known1 + known2) & 1)};
}

inline RankFact rank_bounds(const RankFact& x, const RankFact& y) {
  long long lo = 0;
  if (y.hi) lo = std::max(lo, x.lo - *y.hi);
  if (x.hi) lo = std::max(lo, y.lo - *x.hi);
  std::optional<long long> hi;
  if (x.hi && y.hi) hi = *x.hi + *y.hi;
  std::optional<int> parity;
  if (x.parity && y.parity) parity = (*x.parity + *y.parity) & 1;
  RankFact f{lo, hi, parity};
  return f.normalized().value_or(f);
}

struct Contradiction {
  std::size_t triangle_index = 0;
  std::string provenance;
  ManifoldId vertex = ManifoldId::s3();
  std::string detail;
};

struct PropagationResult {
  RankDb db;
  std::optional<Contradiction> contradiction;
  std::size_t sweeps = 0;

  bool ok() const noexcept { return !contradiction; }
};

/// Round-robin narrowing over all non-informational triangles until no fact
/// changes. Vertices missing from the database start as [0, inf).
inline PropagationResult propagate(RankDb db, std::span<const TriangleInstance> triangles,
                                   std::size_t max_sweeps = 100000) {
  PropagationResult result{std::move(db), std::nullopt, 0};
  RankDb& facts = result.db;
  for (const auto& t : triangles) {
    if (t.informational) continue;
    for (const auto* id : {&t.a, &t.b, &t.c})
      if (!facts.facts().contains(*id)) facts.declare(*id, facts.get(*id));
  }
  bool changed = true;
  while (changed) {
    if (result.sweeps == max_sweeps) {
      result.contradiction = Contradiction{0, "", ManifoldId::s3(),
                                           "no fixpoint after " + std::to_string(max_sweeps) + " sweeps"};
      return result;
    }
    ++result.sweeps;
    changed = false;
    for (std::size_t ti = 0; ti < triangles.size(); ++ti) {
      const auto& t = triangles[ti];
      if (t.informational) continue;
      const ManifoldId* v[3] = {&t.a, &t.b, &t.c};
      for (int pos = 0; pos < 3; ++pos) {
        const ManifoldId& target = *v[pos];
        RankFact current = facts.get(target);
        RankFact bound = rank_bounds(facts.get(*v[(pos + 1) % 3]), facts.get(*v[(pos + 2) % 3]));
        auto narrowed = current.intersect(bound);
        if (!narrowed) {
          result.contradiction = Contradiction{ti, t.provenance, target,
                                               "rank of " + target.to_string() + " must lie in both " +
                                                   current.to_string() + " and " + bound.to_string()};
          return result;
        }
        if (*narrowed != current) {
          facts.declare(target, *narrowed);
          changed = true;
        }
      }
    }
  }
  return result;
}

/// The triangle of the 0-framed unknot in S^3: S^3 -> S^1 x S^2 -> S^3.
inline TriangleInstance unknot_triangle() {
  return {ManifoldId::s3(), ManifoldId::s1xs2(), ManifoldId::s3(),
          "0-framed unknot in S3: HF(S3) -> HF(S1xS2) -> HF(S3)", false};
}

inline TriangleInstance vk_step_triangle(long long k) {
  return {ManifoldId::minus_vk(k), ManifoldId::minus_vk(k + 1), ManifoldId::poincare_sphere(),
          "(+1)-surgery on a trefoil pushoff: HF(-V_" + std::to_string(k) + ") -> HF(-V_" +
              std::to_string(k + 1) + ") -> HF(-Y_1), Y_1 the Poincare sphere",
          false};
}

// At k = 1 the orders 7k-9 and 8k-9 are negative; the instance is kept with
// absolute values for the record and excluded from propagation.
inline TriangleInstance vk_lens_triangle(long long k) {
  long long p1 = 7 * k - 9;
  long long p2 = 8 * k - 9;
  bool flagged = p1 < 1 || p2 < 1;
  return {ManifoldId::lens(p1 < 0 ? -p1 : p1, 7), ManifoldId::lens(p2 < 0 ? -p2 : p2, 8), ManifoldId::minus_vk(k),
          "surgery on the 2-framed knot of the -V_" + std::to_string(k) + " diagram: HF(L(" + std::to_string(p1) +
              ",7)) -> HF(L(" + std::to_string(p2) + ",8)) -> HF(-V_" + std::to_string(k) + ")" +
              (flagged ? " [informational: negative orders]" : ""),
          flagged};
}

/// Both triangle families for 1 <= k <= K.
inline std::vector<TriangleInstance> vk_triangles(long long K) {
  if (K < 1) throw DomainError("vk_triangles needs K >= 1");
  std::vector<TriangleInstance> out;
  for (long long k = 1; k <= K; ++k) out.push_back(vk_step_triangle(k));
  for (long long k = 1; k <= K; ++k) out.push_back(vk_lens_triangle(k));
  return out;
}

}  // namespace tightcert
