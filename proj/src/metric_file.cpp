#include "kundt/metric_file.hpp"

#include <cctype>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "kundt/errors.hpp"

namespace kundt {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

[[noreturn]] void fail(std::size_t offset, const std::string& expected) {
  throw SyntaxError(offset, expected);
}

// One physical line with its byte offset in the document.
struct Line {
  std::size_t offset;
  std::string text;
};

std::vector<Line> logical_lines(const std::string& text) {
  std::vector<Line> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string raw = end == std::string::npos ? text.substr(start)
                                               : text.substr(start, end - start);
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::string t = trim(raw);
    if (!t.empty()) out.push_back({start, t});
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

Expr parse_expr_at(const std::string& text, const SymbolTable& table,
                   std::size_t offset) {
  try {
    return parse(text, table);
  } catch (const SyntaxError& e) {
    fail(offset + e.position, e.expected);
  }
}

Rational parse_rational_at(const std::string& text, std::size_t offset) {
  Expr e = simplify(parse_expr_at(text, SymbolTable{}, offset));
  if (!e.is_number()) fail(offset, "a rational constant");
  return e.number_value();
}

double parse_double_at(const std::string& text, std::size_t offset) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || trim(std::string(end)) != "")
    fail(offset, "a numeric value");
  return v;
}

// "g(a,b)" or "bracket(X,Y)" or "ip(A,B)": returns the two argument names.
std::pair<std::string, std::string> parse_pair_head(const std::string& head,
                                                    const std::string& keyword,
                                                    std::size_t offset) {
  std::string t = trim(head);
  if (t.compare(0, keyword.size(), keyword) != 0)
    fail(offset, keyword + "(a,b) = ...");
  std::string rest = trim(t.substr(keyword.size()));
  if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')')
    fail(offset, keyword + "(a,b) = ...");
  std::vector<std::string> args = split(rest.substr(1, rest.size() - 2), ',');
  if (args.size() != 2 || !valid_name(args[0]) || !valid_name(args[1]))
    fail(offset, "two names inside " + keyword + "(...)");
  return {args[0], args[1]};
}

// Exact coefficients of a linear combination of the given names; rejects
// nonlinear terms and constant offsets.
RatVec linear_combination(const Expr& e, const std::vector<std::string>& names,
                          std::size_t offset) {
  RatVec out(names.size(), Rational(0));
  Expr residual = e;
  for (std::size_t i = 0; i < names.size(); ++i) {
    Expr c = simplify(differentiate(e, names[i]));
    if (!c.is_number())
      fail(offset, "a linear combination of basis elements");
    out[i] = c.number_value();
    residual = residual - Expr::number(out[i]) * Expr::symbol(names[i]);
  }
  Expr r = simplify(residual);
  if (!(r.is_number() && r.number_value() == 0))
    fail(offset, "a linear combination of basis elements");
  return out;
}

struct ChartDraft {
  std::vector<std::string> coords;
  std::map<std::string, Constraint> constraints;
  std::map<std::string, double> base;
  std::size_t offset = 0;
  bool seen = false;
};

struct AlgebraDraft {
  std::vector<std::string> basis;
  std::vector<LieAlgebra::BracketSpec> brackets;
  std::vector<std::tuple<std::string, std::string, Rational>> ips;
  std::optional<RatVec> v;
  std::size_t offset = 0;
  bool seen = false;
};

struct FieldDraft {
  std::string name;
  std::optional<std::vector<Expr>> components;
  std::map<std::string, Expr> named;
  std::size_t offset = 0;
};

int require_coord(const Chart& chart, const std::string& name,
                  std::size_t offset) {
  int idx = chart.index_of(name);
  if (idx < 0) fail(offset, "a declared coordinate (got '" + name + "')");
  return idx;
}

}  // namespace

const VectorField* MetricFile::find_field(const std::string& name) const {
  for (const auto& [n, f] : fields)
    if (n == name) return &f;
  return nullptr;
}

MetricFile parse_metric_file(const std::string& text) {
  std::vector<Line> lines = logical_lines(text);

  MetricFile doc;
  ChartDraft chart_draft;
  AlgebraDraft algebra_draft;
  std::vector<FieldDraft> field_drafts;
  std::map<std::pair<int, int>, Expr> metric_entries;
  bool metric_seen = false;
  std::size_t metric_offset = 0;

  enum class Section { None, Chart, Metric, Field, Roles, Algebra };
  Section section = Section::None;
  FieldDraft* current_field = nullptr;
  // A bare token after transverse=... continues the transverse list.
  bool transverse_open = false;
  std::vector<std::string> roles_transverse;
  std::string roles_u, roles_v;
  bool roles_seen = false;
  std::size_t roles_offset = 0;

  auto finish_chart = [&]() {
    if (!chart_draft.seen) return;
    if (doc.chart) fail(chart_draft.offset, "a single [chart] section");
    if (chart_draft.coords.empty())
      fail(chart_draft.offset, "a coords: line in [chart]");
    EvalPoint base;
    for (const std::string& c : chart_draft.coords) {
      auto it = chart_draft.base.find(c);
      base[c] = it != chart_draft.base.end() ? it->second : 0.0;
    }
    doc.chart = Chart(chart_draft.coords, chart_draft.constraints, base);
    chart_draft = ChartDraft{};
  };

  auto ensure_chart = [&](std::size_t offset) -> const Chart& {
    finish_chart();
    if (!doc.chart) fail(offset, "a [chart] section before this one");
    return *doc.chart;
  };

  for (const Line& line : lines) {
    if (line.text.front() == '[') {
      if (line.text.back() != ']') fail(line.offset, "a closing ']'");
      std::string header = trim(line.text.substr(1, line.text.size() - 2));
      current_field = nullptr;
      transverse_open = false;
      if (header == "chart") {
        section = Section::Chart;
        chart_draft.seen = true;
        chart_draft.offset = line.offset;
      } else if (header == "metric") {
        ensure_chart(line.offset);
        section = Section::Metric;
        metric_seen = true;
        metric_offset = line.offset;
      } else if (header.compare(0, 6, "field ") == 0) {
        ensure_chart(line.offset);
        std::string name = trim(header.substr(6));
        if (!valid_name(name)) fail(line.offset, "a field name after 'field'");
        for (const FieldDraft& f : field_drafts)
          if (f.name == name) fail(line.offset, "a fresh field name");
        field_drafts.push_back(FieldDraft{name, std::nullopt, {}, line.offset});
        current_field = &field_drafts.back();
        section = Section::Field;
      } else if (header == "roles") {
        ensure_chart(line.offset);
        section = Section::Roles;
        roles_seen = true;
        roles_offset = line.offset;
      } else if (header == "algebra") {
        section = Section::Algebra;
        algebra_draft.seen = true;
        algebra_draft.offset = line.offset;
      } else {
        fail(line.offset, "a known section header");
      }
      continue;
    }

    switch (section) {
      case Section::None:
        fail(line.offset, "a section header");
      case Section::Chart: {
        std::size_t colon = line.text.find(':');
        if (colon == std::string::npos)
          fail(line.offset, "'coords:', 'constraint:' or 'base:'");
        std::string key = trim(line.text.substr(0, colon));
        std::string value = trim(line.text.substr(colon + 1));
        if (key == "coords") {
          if (!chart_draft.coords.empty())
            fail(line.offset, "a single coords: line");
          for (const std::string& name : split(value, ',')) {
            if (!valid_name(name)) fail(line.offset, "a coordinate name");
            for (const std::string& seen : chart_draft.coords)
              if (seen == name) fail(line.offset, "distinct coordinate names");
            chart_draft.coords.push_back(name);
          }
        } else if (key == "constraint") {
          std::size_t gt = value.find('>');
          std::size_t in_pos = value.find(" in ");
          if (gt != std::string::npos) {
            std::string name = trim(value.substr(0, gt));
            std::string rhs = trim(value.substr(gt + 1));
            if (!valid_name(name) || rhs != "0")
              fail(line.offset, "'NAME > 0'");
            chart_draft.constraints[name] = Constraint::positive();
          } else if (in_pos != std::string::npos) {
            std::string name = trim(value.substr(0, in_pos));
            std::string rhs = trim(value.substr(in_pos + 4));
            if (!valid_name(name) || rhs.size() < 2 || rhs.front() != '(' ||
                rhs.back() != ')')
              fail(line.offset, "'NAME in (lo, hi)'");
            std::vector<std::string> ends =
                split(rhs.substr(1, rhs.size() - 2), ',');
            if (ends.size() != 2) fail(line.offset, "'NAME in (lo, hi)'");
            double lo = parse_double_at(ends[0], line.offset);
            double hi = parse_double_at(ends[1], line.offset);
            if (!(lo < hi)) fail(line.offset, "an interval with lo < hi");
            chart_draft.constraints[name] = Constraint::interval(lo, hi);
          } else {
            fail(line.offset, "'NAME > 0' or 'NAME in (lo, hi)'");
          }
        } else if (key == "base") {
          for (const std::string& piece : split(value, ',')) {
            std::size_t eq = piece.find('=');
            if (eq == std::string::npos) fail(line.offset, "'coord=value'");
            std::string name = trim(piece.substr(0, eq));
            chart_draft.base[name] =
                parse_double_at(trim(piece.substr(eq + 1)), line.offset);
          }
        } else {
          fail(line.offset, "'coords:', 'constraint:' or 'base:'");
        }
        break;
      }
      case Section::Metric: {
        std::size_t eq = line.text.find('=');
        if (eq == std::string::npos) fail(line.offset, "'g(a,b) = expr'");
        auto [a, b] =
            parse_pair_head(line.text.substr(0, eq), "g", line.offset);
        const Chart& chart = *doc.chart;
        int i = require_coord(chart, a, line.offset);
        int j = require_coord(chart, b, line.offset);
        std::pair<int, int> key = {std::min(i, j), std::max(i, j)};
        if (metric_entries.count(key))
          fail(line.offset, "each metric entry at most once");
        Expr e = parse_expr_at(trim(line.text.substr(eq + 1)),
                               chart.symbol_table(), line.offset);
        metric_entries.emplace(key, e);
        break;
      }
      case Section::Field: {
        const Chart& chart = *doc.chart;
        std::size_t colon = line.text.find(':');
        std::size_t eq = line.text.find('=');
        if (colon != std::string::npos &&
            trim(line.text.substr(0, colon)) == "components") {
          if (current_field->components || !current_field->named.empty())
            fail(line.offset, "a single components: line");
          std::vector<std::string> pieces =
              split(line.text.substr(colon + 1), ',');
          if (pieces.size() != chart.dim())
            fail(line.offset,
                 std::to_string(chart.dim()) + " component expressions");
          std::vector<Expr> comps;
          for (const std::string& piece : pieces)
            comps.push_back(
                parse_expr_at(piece, chart.symbol_table(), line.offset));
          current_field->components = comps;
        } else if (eq != std::string::npos) {
          if (current_field->components)
            fail(line.offset, "no named components after components:");
          std::string name = trim(line.text.substr(0, eq));
          require_coord(chart, name, line.offset);
          if (current_field->named.count(name))
            fail(line.offset, "each component at most once");
          current_field->named.emplace(
              name, parse_expr_at(trim(line.text.substr(eq + 1)),
                                  chart.symbol_table(), line.offset));
        } else {
          fail(line.offset, "'components: ...' or 'coord = expr'");
        }
        break;
      }
      case Section::Roles: {
        for (const std::string& piece : split(line.text, ',')) {
          std::size_t eq = piece.find('=');
          if (eq == std::string::npos) {
            if (!transverse_open || piece.empty())
              fail(line.offset, "'u=...', 'v=...' or 'transverse=...'");
            roles_transverse.push_back(piece);
            continue;
          }
          std::string key = trim(piece.substr(0, eq));
          std::string value = trim(piece.substr(eq + 1));
          transverse_open = false;
          if (key == "u") {
            roles_u = value;
          } else if (key == "v") {
            roles_v = value;
          } else if (key == "transverse") {
            if (!value.empty()) roles_transverse.push_back(value);
            transverse_open = true;
          } else {
            fail(line.offset, "'u', 'v' or 'transverse' on the left");
          }
        }
        break;
      }
      case Section::Algebra: {
        std::size_t colon = line.text.find(':');
        if (colon != std::string::npos &&
            trim(line.text.substr(0, colon)) == "basis") {
          if (!algebra_draft.basis.empty())
            fail(line.offset, "a single basis: line");
          for (const std::string& name :
               split(line.text.substr(colon + 1), ',')) {
            if (!valid_name(name)) fail(line.offset, "a basis element name");
            for (const std::string& seen : algebra_draft.basis)
              if (seen == name) fail(line.offset, "distinct basis names");
            algebra_draft.basis.push_back(name);
          }
          break;
        }
        std::size_t eq = line.text.find('=');
        if (eq == std::string::npos)
          fail(line.offset, "'basis:', 'bracket(a,b) = ...', 'ip(a,b) = ...' or 'V = ...'");
        std::string head = trim(line.text.substr(0, eq));
        std::string rhs = trim(line.text.substr(eq + 1));
        if (algebra_draft.basis.empty())
          fail(line.offset, "a basis: line before other algebra lines");
        SymbolTable table;
        table.coordinates.insert(algebra_draft.basis.begin(),
                                 algebra_draft.basis.end());
        if (head.compare(0, 7, "bracket") == 0) {
          auto [a, b] = parse_pair_head(head, "bracket", line.offset);
          RatVec coeffs = linear_combination(
              parse_expr_at(rhs, table, line.offset), algebra_draft.basis,
              line.offset);
          LieAlgebra::BracketSpec spec;
          spec.a = a;
          spec.b = b;
          for (std::size_t k = 0; k < coeffs.size(); ++k)
            if (coeffs[k] != 0) spec.rhs[algebra_draft.basis[k]] = coeffs[k];
          algebra_draft.brackets.push_back(spec);
        } else if (head.compare(0, 2, "ip") == 0) {
          auto [a, b] = parse_pair_head(head, "ip", line.offset);
          algebra_draft.ips.emplace_back(a, b,
                                         parse_rational_at(rhs, line.offset));
        } else if (head == "V") {
          if (algebra_draft.v) fail(line.offset, "a single V = line");
          algebra_draft.v = linear_combination(
              parse_expr_at(rhs, table, line.offset), algebra_draft.basis,
              line.offset);
        } else {
          fail(line.offset, "'basis:', 'bracket(a,b)', 'ip(a,b)' or 'V'");
        }
        break;
      }
    }
  }

  finish_chart();

  if (metric_seen) {
    const Chart& chart = *doc.chart;
    std::size_t d = chart.dim();
    ExprMatrix g = expr_matrix_zero(d);
    for (const auto& [key, e] : metric_entries)
      g[key.first][key.second] = g[key.second][key.first] = e;
    bool any = false;
    for (const auto& row : g)
      for (const Expr& e : row)
        if (!e.is_zero_literal()) any = true;
    if (!any) fail(metric_offset, "at least one metric entry");
    doc.metric = g;
  }

  for (const FieldDraft& draft : field_drafts) {
    const Chart& chart = *doc.chart;
    VectorField f;
    if (draft.components) {
      f.comps = *draft.components;
    } else {
      if (draft.named.empty())
        fail(draft.offset, "components for field " + draft.name);
      f.comps.assign(chart.dim(), Expr::integer(0));
      for (const auto& [name, e] : draft.named)
        f.comps[static_cast<std::size_t>(chart.index_of(name))] = e;
    }
    doc.fields.emplace_back(draft.name, f);
  }

  if (roles_seen) {
    const Chart& chart = *doc.chart;
    if (roles_u.empty() || roles_v.empty())
      fail(roles_offset, "both u= and v= in [roles]");
    require_coord(chart, roles_u, roles_offset);
    require_coord(chart, roles_v, roles_offset);
    for (const std::string& t : roles_transverse)
      require_coord(chart, t, roles_offset);
    doc.roles = CoordinateRoles{roles_u, roles_v, roles_transverse};
  }

  if (algebra_draft.seen) {
    if (algebra_draft.basis.empty())
      fail(algebra_draft.offset, "a basis: line in [algebra]");
    try {
      doc.algebra =
          LieAlgebra::from_sparse(algebra_draft.basis, algebra_draft.brackets);
    } catch (const Error& e) {
      fail(algebra_draft.offset, std::string("a consistent bracket table (") +
                                     e.what() + ")");
    }
    std::size_t n = algebra_draft.basis.size();
    RatMat m(n, std::vector<Rational>(n, Rational(0)));
    auto index_of = [&](const std::string& name) -> std::size_t {
      for (std::size_t i = 0; i < n; ++i)
        if (algebra_draft.basis[i] == name) return i;
      fail(algebra_draft.offset, "a basis element (got '" + name + "')");
    };
    for (const auto& [a, b, value] : algebra_draft.ips) {
      std::size_t i = index_of(a);
      std::size_t j = index_of(b);
      m[i][j] = m[j][i] = value;
    }
    doc.ip = m;
    if (algebra_draft.v) doc.algebra_v = algebra_draft.v;
  }

  if (!doc.chart && !doc.algebra)
    fail(0, "a [chart] or [algebra] section");
  return doc;
}

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string fmt_combination(const RatVec& coeffs,
                            const std::vector<std::string>& names) {
  Expr combo = Expr::integer(0);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0)
      combo = combo + Expr::number(coeffs[i]) * Expr::symbol(names[i]);
  return print(simplify(combo));
}

}  // namespace

std::string serialize_metric_file(const MetricFile& doc) {
  std::ostringstream os;
  if (doc.chart) {
    const Chart& chart = *doc.chart;
    os << "[chart]\n";
    os << "coords: ";
    for (std::size_t i = 0; i < chart.dim(); ++i)
      os << (i ? ", " : "") << chart.coord(i);
    os << "\n";
    for (const auto& [name, c] : chart.constraints()) {
      if (c.kind == Constraint::Kind::Positive)
        os << "constraint: " << name << " > 0\n";
      else if (c.kind == Constraint::Kind::Interval)
        os << "constraint: " << name << " in (" << fmt_double(c.lo) << ", "
           << fmt_double(c.hi) << ")\n";
    }
    os << "base: ";
    bool first = true;
    for (std::size_t i = 0; i < chart.dim(); ++i) {
      os << (first ? "" : ", ") << chart.coord(i) << "="
         << fmt_double(chart.base_point().at(chart.coord(i)));
      first = false;
    }
    os << "\n";
  }
  if (doc.metric) {
    const Chart& chart = *doc.chart;
    os << "\n[metric]\n";
    const ExprMatrix& g = *doc.metric;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i; j < g.size(); ++j)
        if (!g[i][j].is_zero_literal())
          os << "g(" << chart.coord(i) << "," << chart.coord(j)
             << ") = " << print(g[i][j]) << "\n";
  }
  for (const auto& [name, f] : doc.fields) {
    os << "\n[field " << name << "]\n";
    os << "components: ";
    for (std::size_t i = 0; i < f.comps.size(); ++i)
      os << (i ? ", " : "") << print(f.comps[i]);
    os << "\n";
  }
  if (doc.roles) {
    os << "\n[roles]\n";
    os << "u=" << doc.roles->u << ", v=" << doc.roles->v << ", transverse=";
    for (std::size_t i = 0; i < doc.roles->transverse.size(); ++i)
      os << (i ? ", " : "") << doc.roles->transverse[i];
    os << "\n";
  }
  if (doc.algebra) {
    const LieAlgebra& L = *doc.algebra;
    os << "\n[algebra]\n";
    os << "basis: ";
    for (std::size_t i = 0; i < L.dim(); ++i)
      os << (i ? ", " : "") << L.basis()[i];
    os << "\n";
    for (std::size_t i = 0; i < L.dim(); ++i)
      for (std::size_t j = i + 1; j < L.dim(); ++j) {
        RatVec bracket = L.bracket_basis(i, j);
        bool nonzero = false;
        for (const Rational& c : bracket)
          if (c != 0) nonzero = true;
        if (nonzero)
          os << "bracket(" << L.basis()[i] << "," << L.basis()[j]
             << ") = " << fmt_combination(bracket, L.basis()) << "\n";
      }
    if (doc.ip) {
      for (std::size_t i = 0; i < L.dim(); ++i)
        for (std::size_t j = i; j < L.dim(); ++j)
          if ((*doc.ip)[i][j] != 0)
            os << "ip(" << L.basis()[i] << "," << L.basis()[j]
               << ") = " << print(Expr::number((*doc.ip)[i][j])) << "\n";
    }
    if (doc.algebra_v)
      os << "V = " << fmt_combination(*doc.algebra_v, L.basis()) << "\n";
  }
  return os.str();
}

Metric build_metric(const MetricFile& doc, const ZeroTestOptions& opt) {
  if (!doc.chart) throw BadParameter("document has no [chart] section");
  if (!doc.metric) throw BadParameter("document has no [metric] section");
  return Metric(*doc.chart, *doc.metric, opt);
}

}  // namespace kundt
