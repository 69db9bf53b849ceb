#pragma once

// Contact surgery diagrams in (S^3, xi_st): Legendrian unknots, right-handed
// trefoils and their contact pushoffs, each with a contact surgery
// coefficient measured against the contact framing.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tightcert/errors.hpp"
#include "tightcert/rationals.hpp"

namespace tightcert {

enum class KnotType { Unknot, RHTrefoil };

inline std::string_view knot_type_name(KnotType t) {
  return t == KnotType::Unknot ? "unknot" : "rhtrefoil";
}

// Max of tb + |rot| for the knot type.
inline long long bennequin_bound(KnotType t) { return t == KnotType::Unknot ? -1 : 1; }

struct LegendrianComponent {
  std::string id;
  KnotType knot = KnotType::Unknot;     // knot type of the ancestry root
  std::optional<std::string> parent;    // set for PushoffOf(parent)
  long long tb = -1;
  long long rot = 0;
  std::optional<Coefficient> coeff;     // nullopt: not surgered

  bool is_pushoff() const noexcept { return parent.has_value(); }

  // "unknot" | "rhtrefoil" | "pushoff:<id>"
  std::string type_string() const {
    return parent ? "pushoff:" + *parent : std::string(knot_type_name(knot));
  }
};

class ContactDiagram {
 public:
  const std::vector<LegendrianComponent>& components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }
  bool empty() const noexcept { return components_.empty(); }

  bool contains(std::string_view id) const { return find(id) != nullptr; }

  const LegendrianComponent& at(std::string_view id) const {
    const auto* c = find(id);
    if (!c) throw ArgumentError("no component with id '" + std::string(id) + "'");
    return *c;
  }
  LegendrianComponent& at(std::string_view id) {
    return const_cast<LegendrianComponent&>(std::as_const(*this).at(id));
  }

  std::size_t index_of(std::string_view id) const {
    for (std::size_t i = 0; i < components_.size(); ++i)
      if (components_[i].id == id) return i;
    throw ArgumentError("no component with id '" + std::string(id) + "'");
  }

  long long linking(std::string_view a, std::string_view b) const {
    auto it = linkings_.find(key(a, b));
    return it == linkings_.end() ? 0 : it->second;
  }

  void set_linking(std::string_view a, std::string_view b, long long value) {
    if (a == b) throw ArgumentError("self-linking is the framing, not a linking record");
    if (value == 0)
      linkings_.erase(key(a, b));
    else
      linkings_[key(a, b)] = value;
  }

  const std::map<std::pair<std::string, std::string>, long long>& linkings() const noexcept {
    return linkings_;
  }

  // Appends a component. Linkings with existing components start at 0.
  void add(LegendrianComponent c) {
    if (c.id.empty()) throw ArgumentError("component id must be nonempty");
    if (contains(c.id)) throw ArgumentError("duplicate component id '" + c.id + "'");
    if (c.parent) c.knot = at(*c.parent).knot;
    components_.push_back(std::move(c));
  }

  // Deletes a component and its linking records. Pushoffs of it are
  // re-attached to its own parent, or become roots of the same knot type.
  void remove(std::string_view id) {
    std::size_t i = index_of(id);
    std::optional<std::string> grandparent = components_[i].parent;
    std::string gone = components_[i].id;
    components_.erase(components_.begin() + static_cast<std::ptrdiff_t>(i));
    for (auto& c : components_)
      if (c.parent && *c.parent == gone) c.parent = grandparent;
    for (auto it = linkings_.begin(); it != linkings_.end();) {
      if (it->first.first == gone || it->first.second == gone)
        it = linkings_.erase(it);
      else
        ++it;
    }
  }

  std::string fresh_id(std::string_view prefix) const {
    for (std::size_t n = 1;; ++n) {
      std::string candidate = std::string(prefix) + "." + std::to_string(n);
      if (!contains(candidate)) return candidate;
    }
  }

  // Throws InvariantViolation on broken structure.
  void validate() const {
    std::set<std::string_view> seen;
    for (const auto& c : components_) {
      if (!seen.insert(c.id).second) throw InvariantViolation("duplicate id '" + c.id + "'");
      if (c.parent && !contains(*c.parent))
        throw InvariantViolation("pushoff '" + c.id + "' has no parent '" + *c.parent + "'");
      if (c.tb + (c.rot < 0 ? -c.rot : c.rot) > bennequin_bound(c.knot))
        throw InvariantViolation("component '" + c.id + "' violates the Bennequin bound (tb " +
                                 std::to_string(c.tb) + ", rot " + std::to_string(c.rot) + ")");
      if (c.coeff && c.coeff->is_zero())
        throw InvariantViolation("component '" + c.id + "' has contact coefficient 0");
    }
    for (const auto& [k, v] : linkings_)
      if (!contains(k.first) || !contains(k.second))
        throw InvariantViolation("linking record refers to a missing component");
  }

  // Equality up to renaming, comparing components position by position.
  friend bool same_layout(const ContactDiagram& a, const ContactDiagram& b) {
    if (a.size() != b.size()) return false;
    auto parent_pos = [](const ContactDiagram& d, const LegendrianComponent& c) -> long long {
      return c.parent ? static_cast<long long>(d.index_of(*c.parent)) : -1;
    };
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto& x = a.components_[i];
      const auto& y = b.components_[i];
      if (x.knot != y.knot || x.tb != y.tb || x.rot != y.rot || x.coeff != y.coeff ||
          parent_pos(a, x) != parent_pos(b, y))
        return false;
      for (std::size_t j = i + 1; j < a.size(); ++j)
        if (a.linking(x.id, a.components_[j].id) != b.linking(y.id, b.components_[j].id))
          return false;
    }
    return true;
  }

 private:
  static std::pair<std::string, std::string> key(std::string_view a, std::string_view b) {
    return a < b ? std::pair{std::string(a), std::string(b)} : std::pair{std::string(b), std::string(a)};
  }

  const LegendrianComponent* find(std::string_view id) const {
    for (const auto& c : components_)
      if (c.id == id) return &c;
    return nullptr;
  }

  std::vector<LegendrianComponent> components_;
  std::map<std::pair<std::string, std::string>, long long> linkings_;
};

// ---------------------------------------------------------------------------
// Elementary moves

inline ContactDiagram stabilize(ContactDiagram d, std::string_view id, int sign) {
  if (sign != 1 && sign != -1) throw ArgumentError("stabilization sign must be +1 or -1");
  auto& c = d.at(id);
  c.tb -= 1;
  c.rot += sign;
  d.validate();
  return d;
}

/// Legendrian pushoff along the contact framing. The copy is unsurgered; it
/// links the original tb times and every other component as the original does.
inline std::pair<ContactDiagram, std::string> contact_pushoff(ContactDiagram d, std::string_view id) {
  const LegendrianComponent& src = d.at(id);
  LegendrianComponent copy;
  copy.id = d.fresh_id(src.id);
  copy.parent = src.id;
  copy.knot = src.knot;
  copy.tb = src.tb;
  copy.rot = src.rot;
  std::string new_id = copy.id;
  std::string src_id = src.id;
  long long src_tb = src.tb;
  std::vector<std::pair<std::string, long long>> inherited;
  for (const auto& other : d.components())
    if (other.id != src_id) inherited.emplace_back(other.id, d.linking(src_id, other.id));
  d.add(std::move(copy));
  d.set_linking(new_id, src_id, src_tb);
  for (const auto& [other, lk] : inherited) d.set_linking(new_id, other, lk);
  d.validate();
  return {std::move(d), new_id};
}

inline ContactDiagram set_coefficient(ContactDiagram d, std::string_view id, std::optional<Coefficient> coeff) {
  d.at(id).coeff = std::move(coeff);
  d.validate();
  return d;
}

/// Smooth surgery coefficient tb + contact coefficient.
inline Coefficient smooth_framing(const LegendrianComponent& c) {
  if (!c.coeff) throw ArgumentError("component '" + c.id + "' is not surgered");
  if (c.coeff->is_infinite()) throw DomainError("component '" + c.id + "' carries no surgery (infinite)");
  return Coefficient(c.tb) + *c.coeff;
}

// ---------------------------------------------------------------------------
// Rational contact surgery to (+/-1) surgeries

/// Stabilization counts of the Legendrian chain for a negative coefficient:
/// |a_1 + 1| on the knot itself, |a_i + 2| on the i-th pushoff.
inline std::vector<long long> stabilization_counts(const NegContinuedFraction& cf) {
  std::vector<long long> s;
  for (std::size_t i = 0; i < cf.coefficients.size(); ++i) {
    Integer v = detail::abs(cf.coefficients[i] + (i == 0 ? 1 : 2));
    if (v > 1'000'000) throw DomainError("stabilization count too large to materialize");
    s.push_back(static_cast<long long>(v));
  }
  return s;
}

using SignChoice = std::vector<std::vector<int>>;

/// Replaces contact r-surgery (r < 0) on `id` by a chain of Legendrian
/// surgeries. `choice` is empty (all negative stabilizations) or gives one
/// sign vector per chain knot with the exact stabilization count as length.
inline ContactDiagram convert_negative(ContactDiagram d, std::string_view id, const SignChoice& choice = {}) {
  const auto& c = d.at(id);
  if (!c.coeff || c.coeff->is_infinite() || c.coeff->sign() >= 0)
    throw DomainError("chain conversion needs a finite negative coefficient on '" + std::string(id) + "'");
  auto counts = stabilization_counts(neg_cf(*c.coeff));
  if (!choice.empty()) {
    if (choice.size() != counts.size())
      throw ArgumentError("expected " + std::to_string(counts.size()) + " sign vectors, got " +
                          std::to_string(choice.size()));
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (choice[i].size() != static_cast<std::size_t>(counts[i]))
        throw ArgumentError("sign vector " + std::to_string(i + 1) + " has length " +
                            std::to_string(choice[i].size()) + ", expected " + std::to_string(counts[i]));
  }
  auto sign_at = [&](std::size_t knot, long long j) {
    return choice.empty() ? -1 : choice[knot][static_cast<std::size_t>(j)];
  };

  std::string current(id);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i > 0) {
      auto [next, new_id] = contact_pushoff(std::move(d), current);
      d = std::move(next);
      current = new_id;
    }
    for (long long j = 0; j < counts[i]; ++j) d = stabilize(std::move(d), current, sign_at(i, j));
    d.at(current).coeff = Coefficient(-1);
  }
  d.validate();
  return d;
}

/// Splits k (+1)-surgered pushoffs off a positive coefficient r'; the knot is
/// left with r'' = r'/(1 - k r') and deleted when r'' = ∞.
inline ContactDiagram convert_positive(ContactDiagram d, std::string_view id, long long k) {
  const auto& c = d.at(id);
  if (!c.coeff || c.coeff->is_infinite() || c.coeff->sign() <= 0)
    throw DomainError("pushoff splitting needs a finite positive coefficient on '" + std::string(id) + "'");
  Coefficient rest = prop7_transform(*c.coeff, k);
  std::string target(id);
  for (long long i = 0; i < k; ++i) {
    auto [next, new_id] = contact_pushoff(std::move(d), target);
    d = std::move(next);
    d.at(new_id).coeff = Coefficient(1);
  }
  if (rest.is_infinite())
    d.remove(target);
  else
    d.at(target).coeff = rest;
  d.validate();
  return d;
}

using NormalizeChoices = std::map<std::string, SignChoice, std::less<>>;

/// Rewrites every surgery as contact (+1) or (-1) surgeries. Unsurgered and
/// ∞-coefficient components are dropped.
inline ContactDiagram dg_normalize(ContactDiagram d, const NormalizeChoices& choices = {}) {
  std::vector<std::string> ids;
  for (const auto& c : d.components()) ids.push_back(c.id);
  for (const auto& id : ids) {
    const auto& c = d.at(id);
    if (c.coeff && c.coeff->is_zero())
      throw NoTightExtensionError("component '" + id + "' has contact coefficient 0: no tight extension");
  }
  for (const auto& id : ids) {
    const auto& c = d.at(id);
    if (!c.coeff || c.coeff->is_infinite()) d.remove(id);
  }
  for (const auto& id : ids) {
    if (!d.contains(id)) continue;
    const Coefficient coeff = *d.at(id).coeff;
    if (coeff.sign() <= 0 || coeff == Coefficient(1)) continue;
    long long k = coeff.is_unit_fraction() ? static_cast<long long>(coeff.denominator()) : min_k_negative(coeff);
    d = convert_positive(std::move(d), id, k);
  }
  std::vector<std::string> now;
  for (const auto& c : d.components()) now.push_back(c.id);
  for (const auto& id : now) {
    const Coefficient coeff = *d.at(id).coeff;
    if (coeff.sign() >= 0 || coeff == Coefficient(-1)) continue;
    auto it = choices.find(id);
    d = convert_negative(std::move(d), id, it == choices.end() ? SignChoice{} : it->second);
  }
  return d;
}

/// Number of tight presentations produced by normalizing a single coefficient:
/// the product of (s_i + 1) over its Legendrian chain.
inline Integer count_presentations(const Coefficient& r) {
  if (r.is_zero()) throw NoTightExtensionError("coefficient 0: no tight extension");
  if (r.is_infinite() || r.is_unit_fraction() || r == Coefficient(-1)) return 1;
  Coefficient negative = r;
  if (r.sign() > 0) negative = prop7_transform(r, min_k_negative(r));
  Integer total = 1;
  for (long long s : stabilization_counts(neg_cf(negative))) total *= (s + 1);
  return total;
}

// ---------------------------------------------------------------------------
// Pushoff cancellation

namespace detail {

// An unstabilized (+1) pushoff of a (-1) knot that still sits in a standard
// neighbourhood of it: same classical invariants, linking tb with it and
// linking every other component as it does.
inline std::optional<std::pair<std::string, std::string>> find_cancelling_pair(const ContactDiagram& d) {
  const auto& comps = d.components();
  for (const auto& k : comps) {
    if (k.coeff != Coefficient(-1)) continue;
    for (auto it = comps.rbegin(); it != comps.rend(); ++it) {
      const auto& p = *it;
      if (!p.parent || *p.parent != k.id || p.coeff != Coefficient(1)) continue;
      if (p.tb != k.tb || p.rot != k.rot || d.linking(p.id, k.id) != k.tb) continue;
      bool parallel = std::all_of(comps.begin(), comps.end(), [&](const LegendrianComponent& j) {
        return j.id == p.id || j.id == k.id || d.linking(p.id, j.id) == d.linking(k.id, j.id);
      });
      if (parallel) return std::pair{k.id, p.id};
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Removes cancelling (-1 knot, +1 pushoff) pairs until none remain.
inline ContactDiagram cancel_pushoff_pairs(ContactDiagram d) {
  while (auto pair = detail::find_cancelling_pair(d)) {
    d.remove(pair->second);
    d.remove(pair->first);
  }
  d.validate();
  return d;
}

/// Removes one specific cancelling pair; throws if the pair does not cancel.
inline ContactDiagram cancel_pair(ContactDiagram d, std::string_view knot, std::string_view pushoff) {
  const auto& k = d.at(knot);
  const auto& p = d.at(pushoff);
  bool ok = k.coeff == Coefficient(-1) && p.coeff == Coefficient(1) && p.parent && *p.parent == k.id &&
            p.tb == k.tb && p.rot == k.rot && d.linking(p.id, k.id) == k.tb;
  for (const auto& j : d.components())
    if (j.id != p.id && j.id != k.id && d.linking(p.id, j.id) != d.linking(k.id, j.id)) ok = false;
  if (!ok)
    throw MoveNotApplicableError("'" + std::string(pushoff) + "' does not cancel '" + std::string(knot) + "'");
  d.remove(pushoff);
  d.remove(knot);
  d.validate();
  return d;
}

// ---------------------------------------------------------------------------
// The diagrams of the construction

/// Trefoil (tb 1, contact -1) with k contact (+1) pushoffs.
inline ContactDiagram generate_vk(long long k) {
  if (k < 1) throw DomainError("V_k needs k >= 1");
  ContactDiagram d;
  d.add({"T", KnotType::RHTrefoil, std::nullopt, 1, 0, Coefficient(-1)});
  for (long long i = 1; i <= k; ++i) {
    std::string id = "P" + std::to_string(i);
    d.add({id, KnotType::RHTrefoil, std::string("T"), 1, 0, Coefficient(1)});
    d.set_linking(id, "T", 1);
    for (long long j = 1; j < i; ++j) d.set_linking(id, "P" + std::to_string(j), 1);
  }
  d.validate();
  return d;
}

/// Trefoil (tb 1, contact -1) and a pushoff with contact coefficient
/// r' = (r - 1)/r; presents r-surgery on the right-handed trefoil.
inline ContactDiagram generate_yr_diagram(const Coefficient& r) {
  Coefficient rp = rprime_from_r(r);
  ContactDiagram d;
  d.add({"T", KnotType::RHTrefoil, std::nullopt, 1, 0, Coefficient(-1)});
  if (!rp.is_infinite()) {
    d.add({"P", KnotType::RHTrefoil, std::string("T"), 1, 0, rp});
    d.set_linking("P", "T", 1);
  }
  d.validate();
  return d;
}

}  // namespace tightcert
