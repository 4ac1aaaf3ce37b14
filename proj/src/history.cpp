#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "acdterm/engine.hpp"

namespace acd {

std::string HistoryEntry::to_string() const {
  std::ostringstream os;
  os << '(' << rule << " @ (";
  for (std::size_t i = 0; i < ids.size(); ++i) os << (i ? " " : "") << ids[i];
  os << "))";
  return os.str();
}

namespace {

void entry_rec(const Term& t, std::vector<Id>& out) {
  if (!t.is_ac()) out.push_back(t.id());
  if (t.is_compound()) {
    for (const auto& a : t.args()) entry_rec(a, out);
  }
}

using Variants = std::vector<std::vector<Id>>;

// Concatenates one choice from each part, in order.
Variants product(const std::vector<Variants>& parts, std::size_t limit) {
  Variants acc{{}};
  for (const auto& part : parts) {
    Variants next;
    for (const auto& prefix : acc) {
      for (const auto& v : part) {
        if (next.size() >= limit) break;
        auto joined = prefix;
        joined.insert(joined.end(), v.begin(), v.end());
        next.push_back(std::move(joined));
      }
    }
    acc = std::move(next);
  }
  return acc;
}

// Any order of AC children anywhere inside a variable binding.
Variants free_variants(const Term& t, std::size_t limit) {
  if (!t.is_compound() || t.arity() == 0) return {{t.id()}};
  std::vector<Variants> kids;
  for (const auto& a : t.args()) kids.push_back(free_variants(a, limit));
  if (!t.is_ac()) {
    Variants head{{t.id()}};
    std::vector<Variants> parts{head};
    parts.insert(parts.end(), kids.begin(), kids.end());
    return product(parts, limit);
  }
  std::vector<std::size_t> perm(kids.size());
  std::iota(perm.begin(), perm.end(), 0);
  Variants out;
  do {
    std::vector<Variants> parts;
    for (auto i : perm) parts.push_back(kids[i]);
    for (auto& v : product(parts, limit - out.size())) out.push_back(std::move(v));
  } while (out.size() < limit && std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Variants pattern_variants(const Term& p, const Term& inst, std::size_t limit) {
  if (p.is_variable()) return free_variants(inst, limit);
  if (!inst.is_compound() || inst.arity() == 0) return {{inst.id()}};
  std::vector<Variants> parts;
  if (!inst.is_ac()) parts.push_back({{inst.id()}});
  for (std::size_t i = 0; i < inst.arity(); ++i) {
    parts.push_back(pattern_variants(p.arg(i), inst.arg(i), limit));
  }
  return product(parts, limit);
}

void var_subterms(const Term& p, const Term& inst,
                  std::multimap<std::string, Term>& out) {
  if (p.is_variable()) {
    out.emplace(p.name(), inst);
    return;
  }
  if (!p.is_compound()) return;
  for (std::size_t i = 0; i < p.arity() && i < inst.arity(); ++i) {
    var_subterms(p.arg(i), inst.arg(i), out);
  }
}

// Maps the identifiers of a onto those of b, where b is an AC
// rearrangement of a.
void align(const Term& a, const Term& b, std::map<Id, Id>& rho) {
  if (a.id() != 0 && b.id() != 0) rho.emplace(a.id(), b.id());
  if (!a.is_compound() || !b.is_compound() || a.arity() != b.arity()) return;
  bool ordered = true;
  for (std::size_t i = 0; i < a.arity() && ordered; ++i) {
    ordered = ac_equal(a.arg(i), b.arg(i));
  }
  if (ordered || !a.is_ac()) {
    for (std::size_t i = 0; i < a.arity(); ++i) align(a.arg(i), b.arg(i), rho);
    return;
  }
  std::vector<bool> taken(b.arity(), false);
  for (std::size_t i = 0; i < a.arity(); ++i) {
    for (std::size_t j = 0; j < b.arity(); ++j) {
      if (taken[j] || !ac_equal(a.arg(i), b.arg(j))) continue;
      taken[j] = true;
      align(a.arg(i), b.arg(j), rho);
      break;
    }
  }
}

}  // namespace

HistoryEntry entry_of(std::string_view rule, const Term& instance) {
  HistoryEntry e{std::string(rule), {}};
  entry_rec(instance, e.ids);
  return e;
}

std::vector<std::vector<Id>> entry_variants(const Term& head, const Term& instance,
                                            std::size_t limit) {
  auto out = pattern_variants(head, instance, std::max<std::size_t>(limit, 1));
  // Keep the stored order first.
  auto stored = entry_of("", instance).ids;
  auto it = std::find(out.begin(), out.end(), stored);
  if (it != out.end()) {
    std::rotate(out.begin(), it, it + 1);
  } else {
    out.insert(out.begin(), stored);
  }
  return out;
}

History update_history(const Term& head, const Term& head_inst, const Term& body,
                       const Term& body_inst, const History& h0) {
  std::multimap<std::string, Term> in_head;
  std::multimap<std::string, Term> in_body;
  var_subterms(head, head_inst, in_head);
  var_subterms(body, body_inst, in_body);
  History out = h0;
  for (const auto& [var, hsub] : in_head) {
    auto [lo, hi] = in_body.equal_range(var);
    for (auto it = lo; it != hi; ++it) {
      std::map<Id, Id> rho;
      align(hsub, it->second, rho);
      if (rho.empty()) continue;
      for (const auto& e : h0) {
        bool touched = false;
        HistoryEntry renamed{e.rule, e.ids};
        for (auto& id : renamed.ids) {
          auto r = rho.find(id);
          if (r != rho.end()) {
            id = r->second;
            touched = true;
          }
        }
        if (touched) out.insert(std::move(renamed));
      }
    }
  }
  return out;
}

}  // namespace acd
