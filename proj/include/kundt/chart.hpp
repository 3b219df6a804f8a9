#pragma once

#include <map>
#include <string>
#include <vector>

#include "kundt/expr.hpp"
#include "kundt/zerotest.hpp"

namespace kundt {

// Open-domain restriction on a single coordinate.
struct Constraint {
  enum class Kind { None, Positive, Interval };
  Kind kind = Kind::None;
  double lo = 0;
  double hi = 0;

  static Constraint none() { return {}; }
  static Constraint positive() { return {Kind::Positive, 0, 0}; }
  static Constraint interval(double lo, double hi) { return {Kind::Interval, lo, hi}; }
};

// Ordered coordinate names, per-coordinate domain constraints, and a base
// point inside the domain.
class Chart {
 public:
  Chart(std::vector<std::string> coords, std::map<std::string, Constraint> constraints,
        EvalPoint base);

  size_t dim() const { return coords_.size(); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::string& coord(size_t i) const { return coords_[i]; }
  int index_of(const std::string& name) const;
  const EvalPoint& base_point() const { return base_; }
  const std::map<std::string, Constraint>& constraints() const { return constraints_; }

  // Sampling box: [-2,2] per coordinate; a positivity constraint becomes
  // [0.1, 2] and an interval constraint intersects with [-2,2].
  DomainBox default_box() const;

  bool contains(const EvalPoint& pt) const;

  SymbolTable symbol_table(const std::set<std::string>& parameters = {}) const;

 private:
  std::vector<std::string> coords_;
  std::map<std::string, Constraint> constraints_;
  EvalPoint base_;
};

}  // namespace kundt
