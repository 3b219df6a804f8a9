#include "kundt/chart.hpp"

#include <algorithm>
#include <set>

#include "kundt/errors.hpp"

namespace kundt {

Chart::Chart(std::vector<std::string> coords, std::map<std::string, Constraint> constraints,
             EvalPoint base)
    : coords_(std::move(coords)), constraints_(std::move(constraints)), base_(std::move(base)) {
  if (coords_.size() < 2 || coords_.size() > 6)
    throw BadParameter("chart dimension must be between 2 and 6");
  std::set<std::string> seen;
  for (const auto& c : coords_) {
    if (c.empty()) throw BadParameter("empty coordinate name");
    if (!seen.insert(c).second) throw BadParameter("duplicate coordinate '" + c + "'");
  }
  for (const auto& [name, cons] : constraints_) {
    if (seen.count(name) == 0)
      throw BadParameter("constraint on unknown coordinate '" + name + "'");
    if (cons.kind == Constraint::Kind::Interval && !(cons.lo < cons.hi))
      throw BadParameter("empty interval constraint on '" + name + "'");
  }
  for (const auto& c : coords_)
    if (base_.find(c) == base_.end())
      throw BadParameter("base point does not bind coordinate '" + c + "'");
  if (base_.size() != coords_.size())
    throw BadParameter("base point binds symbols outside the chart");
  if (!contains(base_)) throw BadParameter("base point violates a domain constraint");
}

int Chart::index_of(const std::string& name) const {
  for (size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] == name) return static_cast<int>(i);
  return -1;
}

DomainBox Chart::default_box() const {
  DomainBox box;
  for (const auto& c : coords_) {
    double lo = -2.0, hi = 2.0;
    auto it = constraints_.find(c);
    if (it != constraints_.end()) {
      const Constraint& k = it->second;
      if (k.kind == Constraint::Kind::Positive) {
        lo = 0.1;
        hi = 2.0;
      } else if (k.kind == Constraint::Kind::Interval) {
        lo = std::max(lo, k.lo);
        hi = std::min(hi, k.hi);
      }
    }
    box.ranges[c] = {lo, hi};
  }
  return box;
}

bool Chart::contains(const EvalPoint& pt) const {
  for (const auto& c : coords_) {
    auto it = pt.find(c);
    if (it == pt.end()) return false;
    auto ct = constraints_.find(c);
    if (ct == constraints_.end()) continue;
    const Constraint& k = ct->second;
    if (k.kind == Constraint::Kind::Positive && !(it->second > 0)) return false;
    if (k.kind == Constraint::Kind::Interval && !(k.lo < it->second && it->second < k.hi))
      return false;
  }
  return true;
}

SymbolTable Chart::symbol_table(const std::set<std::string>& parameters) const {
  SymbolTable t;
  for (const auto& c : coords_) t.coordinates.insert(c);
  t.parameters = parameters;
  return t;
}

}  // namespace kundt
