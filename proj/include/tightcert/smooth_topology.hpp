#pragma once

// Integral surgery on framed links in S^3: linking matrices, the first
// homology of the surgered manifold via Smith normal form, determinants and
// blow-downs. Used as a correctness oracle for every diagram manipulation.

#include <algorithm>
#include <compare>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tightcert/contact_diagram.hpp"
#include "tightcert/errors.hpp"
#include "tightcert/rationals.hpp"

namespace tightcert {

using IntMatrix = std::vector<std::vector<Integer>>;

// What we can vouch for about a component's knot type.
enum class LinkTag { Unknot, RHTrefoil, Unknown };

inline std::string_view link_tag_name(LinkTag t) {
  switch (t) {
    case LinkTag::Unknot: return "unknot";
    case LinkTag::RHTrefoil: return "rhtrefoil";
    case LinkTag::Unknown: return "unknown";
  }
  return "unknown";
}

inline LinkTag parse_link_tag(std::string_view s) {
  if (s == "unknot") return LinkTag::Unknot;
  if (s == "rhtrefoil") return LinkTag::RHTrefoil;
  if (s == "unknown") return LinkTag::Unknown;
  throw ArgumentError("unknown component tag '" + std::string(s) + "'");
}

struct FramedLink {
  IntMatrix matrix;  // diagonal: framings, off-diagonal: linking numbers
  std::vector<LinkTag> tags;

  std::size_t n() const noexcept { return matrix.size(); }

  void validate() const {
    if (tags.size() != matrix.size()) throw InvariantViolation("framed link: tag count differs from size");
    for (std::size_t i = 0; i < n(); ++i) {
      if (matrix[i].size() != n()) throw InvariantViolation("framed link: matrix is not square");
      for (std::size_t j = 0; j < i; ++j)
        if (matrix[i][j] != matrix[j][i]) throw InvariantViolation("framed link: matrix is not symmetric");
    }
  }

  friend bool operator==(const FramedLink&, const FramedLink&) = default;
};

/// H_1 = Z^free_rank ⊕ Z/d_1 ⊕ ... with d_1 | d_2 | ... and every d_i >= 2.
struct HomologyResult {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  bool is_cyclic() const { return free_rank + torsion.size() <= 1; }

  // |H_1| for finite groups, 0 when H_1 is infinite.
  Integer order() const {
    if (free_rank > 0) return 0;
    Integer o = 1;
    for (const auto& d : torsion) o *= d;
    return o;
  }

  std::string to_string() const {
    std::string s;
    auto append = [&](const std::string& part) { s += s.empty() ? part : " + " + part; };
    if (free_rank == 1) append("Z");
    if (free_rank > 1) append("Z^" + std::to_string(free_rank));
    for (const auto& d : torsion) append("Z/" + d.str());
    return s.empty() ? "0" : s;
  }

  friend bool operator==(const HomologyResult&, const HomologyResult&) = default;
};

/// Smooth framed link of a (+/-1)-normalized contact diagram; unsurgered
/// components are left out.
inline FramedLink linking_matrix(const ContactDiagram& d) {
  std::vector<const LegendrianComponent*> surgered;
  for (const auto& c : d.components()) {
    if (!c.coeff) continue;
    if (*c.coeff != Coefficient(1) && *c.coeff != Coefficient(-1))
      throw NormalizationRequiredError("component '" + c.id + "' has contact coefficient " +
                                       c.coeff->to_string() + "; normalize the diagram first");
    surgered.push_back(&c);
  }
  FramedLink fl;
  fl.matrix.assign(surgered.size(), std::vector<Integer>(surgered.size(), 0));
  for (std::size_t i = 0; i < surgered.size(); ++i) {
    fl.matrix[i][i] = smooth_framing(*surgered[i]).numerator();
    for (std::size_t j = 0; j < surgered.size(); ++j)
      if (i != j) fl.matrix[i][j] = d.linking(surgered[i]->id, surgered[j]->id);
    fl.tags.push_back(surgered[i]->knot == KnotType::Unknot ? LinkTag::Unknot : LinkTag::RHTrefoil);
  }
  return fl;
}

/// Invariant factors of the cokernel of an integer matrix (rows = generators).
inline HomologyResult smith_normal_form(IntMatrix a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (const auto& row : a)
    if (row.size() != cols) throw ArgumentError("ragged matrix");

  std::size_t t = 0;
  std::vector<Integer> diag;
  for (; t < std::min(rows, cols); ++t) {
    // Pivot: smallest nonzero entry of the remaining block.
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (!best || detail::abs(a[i][j]) < detail::abs(a[best->first][best->second])))
          best = {i, j};
    if (!best) break;
    std::swap(a[t], a[best->first]);
    for (auto& row : a) std::swap(row[t], row[best->second]);

    while (true) {
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Integer q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Integer q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
      }
      // Any remainder in row/column t is smaller than the pivot: promote it.
      std::optional<std::pair<std::size_t, std::size_t>> smaller;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (a[i][t] != 0 && (!smaller || detail::abs(a[i][t]) < detail::abs(a[smaller->first][smaller->second])))
          smaller = {i, t};
      for (std::size_t j = t + 1; j < cols; ++j)
        if (a[t][j] != 0 && (!smaller || detail::abs(a[t][j]) < detail::abs(a[smaller->first][smaller->second])))
          smaller = {t, j};
      if (!smaller) break;
      if (smaller->first != t) std::swap(a[t], a[smaller->first]);
      if (smaller->second != t)
        for (auto& row : a) std::swap(row[t], row[smaller->second]);
    }
    diag.push_back(detail::abs(a[t][t]));
  }

  // Diagonal form to invariant factors.
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      Integer g = detail::gcd(diag[i], diag[j]);
      Integer l = diag[i] / g * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  HomologyResult h;
  h.free_rank = rows - t;
  for (auto& d : diag)
    if (d != 1) h.torsion.push_back(d);
  return h;
}

inline HomologyResult h1(const FramedLink& fl) { return smith_normal_form(fl.matrix); }
inline HomologyResult h1(const ContactDiagram& d) { return h1(linking_matrix(d)); }

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer det_signed(IntMatrix a) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw ArgumentError("determinant of a non-square matrix");
  if (n == 0) return 1;
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// Blows down an unknotted ±1-framed component. Remaining components may be
/// twisted by the move, so their tags are no longer vouched for.
inline FramedLink blow_down(const FramedLink& fl, std::size_t i) {
  fl.validate();
  if (i >= fl.n()) throw ArgumentError("component index out of range");
  if (fl.tags[i] != LinkTag::Unknot)
    throw MoveNotApplicableError("component " + std::to_string(i) + " is not known to be unknotted");
  const Integer& eps = fl.matrix[i][i];
  if (eps != 1 && eps != -1)
    throw MoveNotApplicableError("component " + std::to_string(i) + " has framing " + eps.str() + ", not ±1");
  FramedLink out;
  for (std::size_t j = 0; j < fl.n(); ++j) {
    if (j == i) continue;
    std::vector<Integer> row;
    for (std::size_t k = 0; k < fl.n(); ++k) {
      if (k == i) continue;
      row.push_back(fl.matrix[j][k] - eps * fl.matrix[i][j] * fl.matrix[i][k]);
    }
    out.matrix.push_back(std::move(row));
    out.tags.push_back(LinkTag::Unknown);
  }
  return out;
}

/// Torsion orders (0 = infinite H_1) that can sit on a surgery exact triangle:
/// the third is |second ± first|.
inline bool triangle_det_check(const Integer& d_m, const Integer& d_mn, const Integer& d_mn1) {
  return d_mn1 == detail::abs(d_mn - d_m) || d_mn1 == detail::abs(d_mn + d_m);
}

// ---------------------------------------------------------------------------
// Named manifolds

class ManifoldId {
 public:
  enum class Kind { S3, S1xS2, Lens, PoincareSphere, MinusVk, Opaque };

  static ManifoldId s3() { return ManifoldId(Kind::S3); }
  static ManifoldId s1xs2() { return ManifoldId(Kind::S1xS2); }
  static ManifoldId poincare_sphere() { return ManifoldId(Kind::PoincareSphere); }

  // L(p, q) with q reduced mod p; L(1, q) is S^3.
  static ManifoldId lens(long long p, long long q) {
    if (p < 1) throw DomainError("lens space L(" + std::to_string(p) + "," + std::to_string(q) + ") needs p >= 1");
    if (p == 1) return s3();
    if (std::gcd(p, q) != 1) throw DomainError("lens space needs gcd(p, q) = 1");
    ManifoldId m(Kind::Lens);
    m.p_ = p;
    m.q_ = ((q % p) + p) % p;
    return m;
  }

  // -V_k.
  static ManifoldId minus_vk(long long k) {
    if (k < 1) throw DomainError("-V_k needs k >= 1");
    ManifoldId m(Kind::MinusVk);
    m.p_ = k;
    return m;
  }

  static ManifoldId opaque(std::string label) {
    ManifoldId m(Kind::Opaque);
    m.label_ = std::move(label);
    return m;
  }

  Kind kind() const noexcept { return kind_; }
  long long p() const noexcept { return p_; }
  long long q() const noexcept { return q_; }
  const std::string& label() const noexcept { return label_; }

  // |H_1| (0 = infinite) when the name determines it.
  std::optional<Integer> h1_order() const {
    switch (kind_) {
      case Kind::S3: return Integer(1);
      case Kind::S1xS2: return Integer(0);
      case Kind::Lens: return Integer(p_);
      case Kind::PoincareSphere: return Integer(1);
      case Kind::MinusVk: return Integer(p_);
      case Kind::Opaque: return std::nullopt;
    }
    return std::nullopt;
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::S3: return "S3";
      case Kind::S1xS2: return "S1xS2";
      case Kind::Lens: return "L(" + std::to_string(p_) + "," + std::to_string(q_) + ")";
      case Kind::PoincareSphere: return "Poincare";
      case Kind::MinusVk: return "-V(" + std::to_string(p_) + ")";
      case Kind::Opaque: return "opaque:" + label_;
    }
    return "";
  }

  static ManifoldId parse(std::string_view s) {
    auto number = [&](std::string_view t) {
      if (t.empty()) throw ArgumentError("malformed manifold '" + std::string(s) + "'");
      std::size_t pos = 0;
      long long v = 0;
      try {
        v = std::stoll(std::string(t), &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != t.size()) throw ArgumentError("malformed manifold '" + std::string(s) + "'");
      return v;
    };
    if (s == "S3") return s3();
    if (s == "S1xS2") return s1xs2();
    if (s == "Poincare") return poincare_sphere();
    if (s.starts_with("opaque:")) return opaque(std::string(s.substr(7)));
    if (s.starts_with("-V(") && s.ends_with(")")) return minus_vk(number(s.substr(3, s.size() - 4)));
    if (s.starts_with("L(") && s.ends_with(")")) {
      auto body = s.substr(2, s.size() - 3);
      auto comma = body.find(',');
      if (comma == std::string_view::npos) throw ArgumentError("malformed manifold '" + std::string(s) + "'");
      return lens(number(body.substr(0, comma)), number(body.substr(comma + 1)));
    }
    throw ArgumentError("unknown manifold '" + std::string(s) + "'");
  }

  friend auto operator<=>(const ManifoldId&, const ManifoldId&) = default;
  friend bool operator==(const ManifoldId&, const ManifoldId&) = default;

 private:
  explicit ManifoldId(Kind k) : kind_(k) {}

  Kind kind_;
  long long p_ = 0;
  long long q_ = 0;
  std::string label_;
};

}  // namespace tightcert
