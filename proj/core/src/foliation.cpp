#include "foliate/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "foliate/error.hpp"

namespace foliate {

namespace {

std::map<std::string, Expr> bindings(const std::vector<std::string>& names, const std::vector<Expr>& values) {
  std::map<std::string, Expr> b;
  for (std::size_t i = 0; i < names.size() && i < values.size(); ++i) b[names[i]] = values[i];
  return b;
}

std::vector<Expr> substitute_all(const std::vector<Expr>& es, const std::map<std::string, Expr>& b) {
  std::vector<Expr> out;
  out.reserve(es.size());
  for (const auto& e : es) out.push_back(normalize(substitute(e, b)));
  return out;
}

void require_variables(const Expr& e, const std::vector<std::string>& allowed, const std::string& where) {
  for (const auto& v : free_variables(e))
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
      throw Error("semantic", "unknown identifier '" + v + "' in " + where);
}

std::string fraction_text(double f) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << f;
  return os.str();
}

struct IdentityResult {
  Status status;
  std::string detail;
};

// Decides e == 0 on the part of the chart cut out by `domain`: exactly by
// normal form, else by exact or numeric evaluation at sampled points.
IdentityResult check_identity(const Expr& e, const std::vector<std::string>& coords, const std::vector<Expr>& domain,
                              int samples, Rng& rng) {
  if (normalize(e).is_zero()) return {Status::PassExact, ""};
  auto points = sample_domain(coords, domain, samples, rng);
  if (points.empty()) return {Status::Undecided, "no sample point found in the overlap"};
  bool all_exact = true;
  for (const auto& p : points) {
    PointDecision d = decide_at(e, p);
    if (d.status == ZeroStatus::ProvenNonzero) {
      std::ostringstream os;
      os << "witness " << point_to_string(p, coords) << " value ";
      if (d.exact) os << exact_value(e, p)->get_str();
      else os << d.value;
      return {Status::Fail, os.str()};
    }
    all_exact = all_exact && d.exact && d.status == ZeroStatus::ProvenZero;
  }
  std::string detail = std::to_string(points.size()) + (all_exact ? " samples, exact values" : " samples, numeric values");
  return {Status::PassNumeric, detail};
}

IdentityResult combine(const std::vector<IdentityResult>& parts) {
  IdentityResult r{Status::PassExact, ""};
  for (const auto& p : parts) {
    if (worst(r.status, p.status) != r.status || (r.status == p.status && r.detail.empty())) {
      r.status = worst(r.status, p.status);
      r.detail = p.detail;
    }
  }
  return r;
}

}  // namespace

const AtlasChart& Atlas::chart(const std::string& name) const {
  if (const AtlasChart* c = find_chart(name)) return *c;
  throw Error("semantic", "unknown chart '" + name + "'");
}

const AtlasChart* Atlas::find_chart(const std::string& name) const {
  for (const auto& c : charts)
    if (c.name == name) return &c;
  return nullptr;
}

const Transition* Atlas::find_transition(const std::string& a, const std::string& b) const {
  for (const auto& t : transitions)
    if (t.a == a && t.b == b) return &t;
  return nullptr;
}

std::vector<Expr> Atlas::coordinate_change(const std::string& a, const std::string& b) const {
  auto it = coordinate_changes.find({a, b});
  if (it != coordinate_changes.end()) return it->second;
  const AtlasChart& ca = chart(a);
  const AtlasChart& cb = chart(b);
  if (ca.chart->coordinates != cb.chart->coordinates)
    throw Error("semantic", "charts '" + a + "' and '" + b + "' have no coordinate change");
  std::vector<Expr> out;
  for (const auto& c : ca.chart->coordinates) out.push_back(var(c));
  return out;
}

void validate_atlas(const Atlas& a) {
  if (a.q < 1 || a.q > a.n) throw Error("semantic", "codimension must satisfy 1 <= q <= n");
  if (a.charts.empty()) throw Error("semantic", "atlas has no charts");
  std::set<std::string> names;
  for (const auto& c : a.charts) {
    if (!names.insert(c.name).second) throw Error("semantic", "duplicate chart '" + c.name + "'");
    if (c.chart->dimension() != a.n)
      throw Error("semantic", "chart '" + c.name + "' has " + std::to_string(c.chart->dimension()) + " coordinates, expected " + std::to_string(a.n));
    if (static_cast<int>(c.map.size()) != a.q)
      throw Error("semantic", "chart '" + c.name + "' map has " + std::to_string(c.map.size()) + " components, expected " + std::to_string(a.q));
    for (const auto& e : c.map) require_variables(e, c.chart->coordinates, "map of chart '" + c.name + "'");
    for (const auto& e : c.domain) require_variables(e, c.chart->coordinates, "domain of chart '" + c.name + "'");
  }
  for (const auto& t : a.transitions) {
    const AtlasChart& cb = a.chart(t.b);
    a.chart(t.a);
    if (static_cast<int>(t.vars.size()) != a.q || static_cast<int>(t.map.size()) != a.q)
      throw Error("semantic", "transition " + t.a + " " + t.b + " must have " + std::to_string(a.q) + " variables and components");
    for (const auto& e : t.map) require_variables(e, t.vars, "transition " + t.a + " " + t.b);
    for (const auto& e : t.domain) require_variables(e, cb.chart->coordinates, "domain of transition " + t.a + " " + t.b);
  }
}

ExprMatrix jacobian(const std::vector<Expr>& f, const std::vector<std::string>& coords) {
  ExprMatrix j(static_cast<int>(f.size()), static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t k = 0; k < coords.size(); ++k)
      j(static_cast<int>(i), static_cast<int>(k)) = normalize(differentiate(f[i], coords[k]));
  return j;
}

Report verify_cocycle(const Atlas& a, const CocycleOptions& options) {
  validate_atlas(a);
  Report r;
  Rng rng(options.seed);
  if (a.charts.size() == 1 && a.transitions.empty()) {
    r.check("cocycle", Status::PassExact, "single chart");
    return r;
  }
  for (const auto& t : a.transitions) {
    const AtlasChart& ca = a.chart(t.a);
    const AtlasChart& cb = a.chart(t.b);
    const auto& coords = cb.chart->coordinates;
    auto to_b = bindings(ca.chart->coordinates, a.coordinate_change(t.a, t.b));
    std::vector<Expr> domain = cb.domain;
    for (const auto& e : substitute_all(ca.domain, to_b)) domain.push_back(e);
    for (const auto& e : t.domain) domain.push_back(e);
    auto fa = substitute_all(ca.map, to_b);
    auto hf = substitute_all(t.map, bindings(t.vars, cb.map));
    std::vector<IdentityResult> parts;
    for (int i = 0; i < a.q; ++i) parts.push_back(check_identity(fa[i] - hf[i], coords, domain, options.samples, rng));
    IdentityResult res = combine(parts);
    r.check("compatibility " + t.a + " " + t.b, res.status, res.detail);
    if (t.a == t.b) {
      std::vector<IdentityResult> id;
      for (int i = 0; i < a.q; ++i) id.push_back({normalize(t.map[i] - var(t.vars[i])).is_zero() ? Status::PassExact : Status::Fail, "h is not the identity"});
      IdentityResult ir = combine(id);
      r.check("identity " + t.a, ir.status, ir.status == Status::Fail ? ir.detail : "");
    } else if (!a.find_transition(t.b, t.a)) {
      r.check("symmetry " + t.a + " " + t.b, Status::Fail, "missing transition " + t.b + " " + t.a);
    }
  }
  // h_ab o h_bc = h_ac, with h_aa the identity when undeclared.
  for (const auto& ab : a.transitions) {
    for (const auto& bc : a.transitions) {
      if (ab.b != bc.a || ab.a == ab.b || bc.a == bc.b) continue;
      const Transition* ac = a.find_transition(ab.a, bc.b);
      if (!ac && ab.a != bc.b) continue;
      const AtlasChart& cc = a.chart(bc.b);
      const auto& coords = cc.chart->coordinates;
      std::vector<Expr> domain = cc.domain;
      for (const std::string& other : {ab.a, ab.b}) {
        auto to_c = bindings(a.chart(other).chart->coordinates, a.coordinate_change(other, bc.b));
        for (const auto& e : substitute_all(a.chart(other).domain, to_c)) domain.push_back(e);
      }
      for (const auto& e : bc.domain) domain.push_back(e);
      auto inner = bc.map;  // in bc.vars
      auto composite = substitute_all(ab.map, bindings(ab.vars, inner));
      std::vector<Expr> direct;
      if (ac) {
        std::vector<Expr> renamed;
        for (const auto& v : bc.vars) renamed.push_back(var(v));
        direct = substitute_all(ac->map, bindings(ac->vars, renamed));
      } else {
        for (const auto& v : bc.vars) direct.push_back(var(v));
      }
      auto at_f = bindings(bc.vars, cc.map);
      std::vector<IdentityResult> parts;
      for (int i = 0; i < a.q; ++i) {
        Expr diff = normalize(composite[i] - direct[i]);
        if (diff.is_zero()) {
          parts.push_back({Status::PassExact, ""});
          continue;
        }
        parts.push_back(check_identity(substitute(diff, at_f), coords, domain, options.samples, rng));
      }
      IdentityResult res = combine(parts);
      r.check("cocycle " + ab.a + " " + ab.b + " " + bc.b, res.status, res.detail);
    }
  }
  if (r.lines.empty()) r.check("cocycle", Status::PassExact, "no overlaps");
  return r;
}

const ChartLocus* SingularLocus::find(const std::string& chart) const {
  for (const auto& c : charts)
    if (c.chart == chart) return &c;
  return nullptr;
}

bool SingularLocus::contains(const std::string& chart, const Point& p) const {
  const ChartLocus* c = find(chart);
  if (!c) throw Error("semantic", "unknown chart '" + chart + "'");
  for (const auto& [cols, m] : c->minors)
    if (decide_at(m, p).status == ZeroStatus::ProvenNonzero) return false;
  return true;
}

SingularLocus singular_locus(const Atlas& a) {
  validate_atlas(a);
  SingularLocus locus;
  for (const auto& c : a.charts) {
    ChartLocus cl;
    cl.chart = c.name;
    for (auto& [cols, m] : maximal_minors(jacobian(c.map, c.chart->coordinates))) cl.minors.emplace_back(cols, normalize(m));
    locus.charts.push_back(std::move(cl));
  }
  return locus;
}

int default_resolution(int n) {
  int r = std::max(11, static_cast<int>(std::ceil(std::pow(10000.0, 1.0 / std::max(n, 1)) - 1e-9)));
  return r % 2 == 0 ? r + 1 : r;
}

DensityResult density_check(const Atlas& a, const SingularLocus& locus, const DensityOptions& options) {
  DensityResult result;
  result.haefliger_singular = true;
  int res = options.resolution > 0 ? options.resolution : default_resolution(a.n);
  if (res % 2 == 0) ++res;
  for (const auto& c : a.charts) {
    const ChartLocus* cl = locus.find(c.name);
    if (!cl) throw Error("semantic", "no singular locus for chart '" + c.name + "'");
    bool constant_minor = false;
    for (const auto& [cols, m] : cl->minors) constant_minor = constant_minor || (m.is_constant() && !m.is_zero());
    std::string name = "density " + c.name;
    if (constant_minor) {
      result.report.check(name, Status::PassExact, "locus empty: constant nonzero minor");
      continue;
    }
    const auto& coords = c.chart->coordinates;
    int n = static_cast<int>(coords.size());
    long total = 1;
    for (int k = 0; k < n; ++k) total *= res;
    std::vector<signed char> state(static_cast<std::size_t>(total), -1);
    auto point_of = [&](long idx) {
      Point p;
      for (int k = 0; k < n; ++k) {
        long i = idx % res;
        idx /= res;
        p[coords[k]] = -options.half_width + 2 * options.half_width * make_rational(i, res - 1);
      }
      return p;
    };
    long inside = 0, regular = 0;
    for (long idx = 0; idx < total; ++idx) {
      Point p = point_of(idx);
      if (!in_domain(c.domain, p)) continue;
      ++inside;
      bool reg = false;
      for (const auto& [cols, m] : cl->minors) {
        double v = numeric_value(m, p);
        if (std::isfinite(v) && std::fabs(v) > 1e-9) { reg = true; break; }
      }
      if (!reg) {
        for (const auto& [cols, m] : cl->minors)
          if (decide_at(m, p).status == ZeroStatus::ProvenNonzero) { reg = true; break; }
      }
      state[static_cast<std::size_t>(idx)] = reg ? 1 : 0;
      if (reg) ++regular;
    }
    if (inside == 0) {
      result.report.check(name, Status::Undecided, "no grid point inside the chart domain");
      result.haefliger_singular = false;
      continue;
    }
    long singular = inside - regular;
    bool isolated_ok = true;
    std::vector<Point> singular_points;
    for (long idx = 0; idx < total && isolated_ok; ++idx) {
      if (state[static_cast<std::size_t>(idx)] != 0) continue;
      singular_points.push_back(point_of(idx));
      bool neighbour = false;
      long stride = 1;
      for (int k = 0; k < n && !neighbour; ++k) {
        long i = (idx / stride) % res;
        if (i > 0 && state[static_cast<std::size_t>(idx - stride)] == 1) neighbour = true;
        if (i + 1 < res && state[static_cast<std::size_t>(idx + stride)] == 1) neighbour = true;
        stride *= res;
      }
      isolated_ok = neighbour;
    }
    double fraction = static_cast<double>(regular) / static_cast<double>(inside);
    bool ok = fraction >= options.threshold && isolated_ok;
    std::ostringstream detail;
    detail << "regular fraction " << fraction_text(fraction) << " on " << res << "^" << n << " grid, " << singular
           << " singular points";
    if (!isolated_ok) detail << ", singular point without regular neighbour";
    result.report.check(name, ok ? Status::PassNumeric : Status::Fail, detail.str());
    result.haefliger_singular = result.haefliger_singular && ok;
    result.singular_points[c.name] = std::move(singular_points);
  }
  return result;
}

Atlas pullback_foliation(const Atlas& target, const std::vector<Expr>& phi, const std::vector<std::string>& coords,
                         const std::string& name) {
  validate_atlas(target);
  const AtlasChart& first = target.charts.front();
  if (phi.size() != first.chart->coordinates.size())
    throw Error("semantic", "pullback map has " + std::to_string(phi.size()) + " components, target dimension is " + std::to_string(target.n));
  for (const auto& e : phi) require_variables(e, coords, "pullback map");
  Atlas out;
  out.name = name.empty() ? target.name + "_pullback" : name;
  out.n = static_cast<int>(coords.size());
  out.q = target.q;
  auto to_first = bindings(first.chart->coordinates, phi);
  std::map<std::string, std::map<std::string, Expr>> chart_bindings;
  for (const auto& c : target.charts) {
    auto phi_c = substitute_all(target.coordinate_change(c.name, first.name), to_first);
    auto b = bindings(c.chart->coordinates, phi_c);
    chart_bindings[c.name] = b;
    AtlasChart pc;
    pc.name = c.name;
    pc.chart = make_chart(c.name, coords);
    pc.domain = substitute_all(c.domain, b);
    pc.map = substitute_all(c.map, b);
    out.charts.push_back(std::move(pc));
  }
  for (const auto& t : target.transitions) {
    Transition pt = t;
    pt.domain = substitute_all(t.domain, chart_bindings.at(t.b));
    out.transitions.push_back(std::move(pt));
  }
  return out;
}

Regularity map_regularity(const Atlas& target, const std::vector<Expr>& phi, const std::vector<std::string>& coords,
                          const Point& point) {
  Atlas pulled = pullback_foliation(target, phi, coords);
  for (const auto& c : pulled.charts) {
    if (!in_domain(c.domain, point)) continue;
    for (const auto& [cols, m] : maximal_minors(jacobian(c.map, coords)))
      if (decide_at(m, point).status == ZeroStatus::ProvenNonzero) return Regularity::Regular;
    return Regularity::Singular;
  }
  throw Error("outside-domain", "point " + point_to_string(point, coords) + " lies outside every chart domain");
}

GraphFoliation graph_foliation(const Atlas& a) {
  validate_atlas(a);
  GraphFoliation g;
  std::set<std::string> used;
  for (const auto& c : a.charts)
    for (const auto& v : c.chart->coordinates) used.insert(v);
  for (int i = 1; i <= a.q; ++i) {
    std::string s = "s" + std::to_string(i);
    while (used.count(s)) s += "'";
    used.insert(s);
    g.fibre_coordinates.push_back(s);
  }
  g.graph.name = a.name + "_graph";
  g.graph.n = a.n + a.q;
  g.graph.q = a.q;
  for (const auto& c : a.charts) {
    auto coords = c.chart->coordinates;
    for (const auto& s : g.fibre_coordinates) coords.push_back(s);
    AtlasChart gc;
    gc.name = c.name;
    gc.chart = make_chart(c.name, coords);
    gc.domain = c.domain;
    for (const auto& s : g.fibre_coordinates) gc.map.push_back(var(s));
    g.graph.charts.push_back(std::move(gc));
    std::vector<Expr> emb;
    for (const auto& v : c.chart->coordinates) emb.push_back(var(v));
    for (const auto& f : c.map) emb.push_back(f);
    g.embedding[c.name] = std::move(emb);
  }
  std::vector<Expr> fibre;
  for (const auto& s : g.fibre_coordinates) fibre.push_back(var(s));
  for (const auto& t : a.transitions) {
    g.graph.transitions.push_back(t);
    if (t.a == t.b) continue;
    auto change = a.coordinate_change(t.a, t.b);
    for (const auto& e : substitute_all(t.map, bindings(t.vars, fibre))) change.push_back(e);
    g.graph.coordinate_changes[{t.a, t.b}] = change;
  }
  return g;
}

std::vector<VectorField> kernel_fields(const ExprMatrix& j, const Point& p) {
  int q = j.rows(), n = j.cols();
  for (const auto& cols : combinations(n, q)) {
    ExprMatrix m(q, q);
    for (int r = 0; r < q; ++r)
      for (int k = 0; k < q; ++k) m(r, k) = j(r, cols[k]);
    Expr det = normalize(determinant(m));
    if (decide_at(det, p).status != ZeroStatus::ProvenNonzero) continue;
    ExprMatrix adj(q, q);
    if (q == 1) {
      adj(0, 0) = Expr(1);
    } else {
      for (int r = 0; r < q; ++r)
        for (int k = 0; k < q; ++k) {
          Expr cof = determinant(minor_matrix(m, k, r));
          adj(r, k) = (r + k) % 2 == 0 ? cof : -cof;
        }
    }
    std::vector<VectorField> out;
    for (int free = 0; free < n; ++free) {
      if (std::find(cols.begin(), cols.end(), free) != cols.end()) continue;
      VectorField v(static_cast<std::size_t>(n), Expr(0));
      v[static_cast<std::size_t>(free)] = det;
      for (int r = 0; r < q; ++r) {
        Expr s(0);
        for (int k = 0; k < q; ++k) s = s + adj(r, k) * j(k, free);
        v[static_cast<std::size_t>(cols[r])] = normalize(-s);
      }
      out.push_back(std::move(v));
    }
    return out;
  }
  throw Error("singular-point", "every maximal minor vanishes at " + point_to_string(p, {}));
}

Report involutivity_check_forms(const std::vector<DiffForm>& omegas, const std::vector<Point>& points,
                                const std::string& label) {
  Report r;
  if (omegas.empty()) throw Error("semantic", "no 1-forms supplied");
  const ChartPtr& chart = omegas.front().chart();
  int n = chart->dimension(), q = static_cast<int>(omegas.size());
  ExprMatrix j(q, n);
  for (int i = 0; i < q; ++i) {
    if (omegas[i].degree() != 1) throw Error("degree-mismatch", "coframe entries must be 1-forms");
    for (int k = 0; k < n; ++k) j(i, k) = omegas[i].coefficient({k});
  }
  std::vector<DiffForm> domegas;
  for (const auto& w : omegas) domegas.push_back(exterior_derivative(w));
  for (const auto& p : points) {
    std::string where = label + " at (" + point_to_string(p, chart->coordinates) + ")";
    std::vector<VectorField> fields;
    try {
      fields = kernel_fields(j, p);
    } catch (const Error& e) {
      if (e.code() != "singular-point") throw;
      throw Error("singular-point", "involutivity needs a regular point, got " + point_to_string(p, chart->coordinates));
    }
    Status status = Status::PassExact;
    std::string detail = std::to_string(fields.size()) + " kernel fields";
    for (std::size_t x = 0; x < fields.size(); ++x) {
      for (std::size_t y = x + 1; y < fields.size(); ++y) {
        VectorField br = lie_bracket(fields[x], fields[y], *chart);
        for (int i = 0; i < q; ++i) {
          Expr direct = normalize(evaluate_form(omegas[i], {br}));
          Expr via = normalize(evaluate_form(domegas[i], {fields[x], fields[y]}) -
                               apply_vector(fields[x], evaluate_form(omegas[i], {fields[y]}), *chart) +
                               apply_vector(fields[y], evaluate_form(omegas[i], {fields[x]}), *chart));
          if (!normalize(direct - via).is_zero()) {
            status = Status::Fail;
            detail = "bracket identity mismatch";
            continue;
          }
          PointDecision d = decide_at(direct, p);
          if (d.status == ZeroStatus::ProvenNonzero) {
            status = Status::Fail;
            std::ostringstream os;
            os << "omega" << i + 1 << "([X" << x + 1 << ",X" << y + 1 << "]) = " << (d.exact ? exact_value(direct, p)->get_str() : std::to_string(d.value));
            detail = os.str();
          } else if (!d.exact) {
            status = worst(status, Status::PassNumeric);
          }
        }
      }
    }
    r.check("involutive " + where, status, detail);
  }
  return r;
}

Report involutivity_check(const Atlas& a, const std::vector<Point>& points) {
  validate_atlas(a);
  Report r;
  for (const auto& p : points) {
    bool any = false;
    for (const auto& c : a.charts) {
      if (!in_domain(c.domain, p)) continue;
      any = true;
      std::vector<DiffForm> omegas;
      for (const auto& f : c.map) {
        DiffForm w(c.chart, 1);
        for (int k = 0; k < a.n; ++k) w.add_term({k}, differentiate(f, c.chart->coordinates[k]));
        omegas.push_back(w);
      }
      r.append(involutivity_check_forms(omegas, {p}, c.name));
    }
    if (!any) throw Error("outside-domain", "point " + point_to_string(p, a.charts.front().chart->coordinates) + " lies outside every chart domain");
  }
  return r;
}

}  // namespace foliate
