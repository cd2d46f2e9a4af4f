#include "foliate/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "foliate/gelfand_fuks.hpp"
#include "foliate/woq.hpp"

namespace foliate {

namespace {

const std::vector<std::string> kCommands = {"check-cocycle", "singular-set", "involutivity", "adapted-check",
                                            "chern-weil",    "gv",           "wo-cohomology", "gf-verify"};

Point regular_reference(const AtlasChart& ch, const RunOptions& options) {
  Rng rng(options.seed);
  auto minors = maximal_minors(jacobian(ch.map, ch.chart->coordinates));
  for (const auto& p : sample_domain(ch.chart->coordinates, ch.domain, 32, rng))
    for (const auto& [cols, m] : minors)
      if (decide_at(m, p).status == ZeroStatus::ProvenNonzero) return p;
  throw Error("nowhere-regular", "no regular sample point in chart '" + ch.name + "'");
}

}  // namespace

ResolvedGeometry resolve_geometry(const Document& doc, const RunOptions& options) {
  ResolvedGeometry g;
  const AtlasChart& ch = doc.primary();
  g.chart = ch.chart;
  g.chart_map = ch.map;
  g.metric = doc.metric ? Metric{ch.chart, *doc.metric} : euclidean_metric(ch.chart);
  g.splitting = metric_splitting(g.metric, ch.map, regular_reference(ch, options));
  switch (doc.geometry.kind) {
    case GeometrySource::Kind::Direct:
      g.source = "direct";
      g.connection = doc.connection ? Connection{ch.chart, *doc.connection} : bott_levi_civita(g.metric, g.splitting);
      g.eps = doc.euclid ? EuclideanStructure{ch.chart, *doc.euclid} : induced_euclidean(g.metric, g.splitting);
      break;
    case GeometrySource::Kind::Pullback: {
      g.source = "pullback";
      const Document& target = *doc.geometry.target;
      ResolvedGeometry tg = resolve_geometry(target, options);
      std::map<std::string, Expr> b;
      for (std::size_t i = 0; i < tg.chart->coordinates.size(); ++i) b[tg.chart->coordinates[i]] = doc.geometry.map[i];
      for (std::size_t i = 0; i < ch.map.size(); ++i)
        if (!normalize(ch.map[i] - substitute(tg.chart_map[i], b)).is_zero())
          throw Error("semantic", "map of chart '" + ch.name + "' is not the pullback of the chart map of '" + target.path + "'");
      PulledGeometry pg = pullback_geometry(doc.geometry.map, ch.chart, tg.eps, tg.connection, tg.chart_map);
      g.connection = pg.connection;
      g.eps = pg.eps;
      break;
    }
    case GeometrySource::Kind::Graph: {
      g.source = "graph";
      GraphFoliation gf = graph_foliation(doc.atlas);
      const AtlasChart& gc = gf.graph.chart(ch.name);
      Metric gm = euclidean_metric(gc.chart);
      Splitting gs = metric_splitting(gm, gc.map, regular_reference(gc, options));
      PulledGeometry pg = pullback_geometry(gf.embedding.at(ch.name), ch.chart, induced_euclidean(gm, gs),
                                            bott_levi_civita(gm, gs), gc.map);
      g.connection = pg.connection;
      g.eps = pg.eps;
      break;
    }
  }
  return g;
}

std::vector<Point> singular_points(const Document& doc, const RunOptions& options) {
  DensityOptions d;
  d.resolution = options.grid;
  DensityResult res = density_check(doc.atlas, singular_locus(doc.atlas), d);
  auto it = res.singular_points.find(doc.primary().name);
  return it == res.singular_points.end() ? std::vector<Point>{} : it->second;
}

bool is_command(const std::string& command) {
  return std::find(kCommands.begin(), kCommands.end(), command) != kCommands.end();
}

bool command_needs_document(const std::string& command) {
  return command != "wo-cohomology" && command != "gf-verify";
}

namespace {

ZeroOptions zero_options(const RunOptions& o) {
  ZeroOptions z;
  z.seed = o.seed;
  return z;
}

void geometry_checks(Report& r, const ResolvedGeometry& g, const RunOptions& options) {
  r.append(torsion(g.connection, g.splitting, zero_options(options)));
  r.append(is_bott(g.connection, g.splitting, zero_options(options)));
}

Report adapted_report(const Document& doc, const ResolvedGeometry& g, const std::vector<Point>& sing,
                      const RunOptions& options) {
  Report r;
  geometry_checks(r, g, options);
  if (r.has_failure()) {
    r.check("adapted", Status::Fail, "needs a torsion-free Bott connection");
    return r;
  }
  AdaptedOptions a;
  a.seed = options.seed;
  r.append(adapted_check(g.chart_map, g.splitting, g.eps, g.connection, sing, a));
  (void)doc;
  return r;
}

int codimension(const Document* doc, const std::map<std::string, std::string>& args) {
  auto it = args.find("q");
  if (it != args.end()) {
    try {
      std::size_t used = 0;
      int q = std::stoi(it->second, &used);
      if (used == it->second.size()) return q;
    } catch (const std::exception&) {
    }
    throw Error("usage", "q must be an integer, got '" + it->second + "'");
  }
  if (doc) return doc->atlas.q;
  throw Error("usage", "missing q=<k>");
}

Report wo_report(int q) {
  Report r;
  bool d2 = true;
  for (int deg = 0; deg <= wo_top_degree(q); ++deg)
    for (const auto& m : wo_basis(q, deg)) d2 = d2 && wo_differential(wo_differential(WOElement::monomial(m, q))).is_zero();
  r.check("WO_" + std::to_string(q) + " d^2 = 0", d2);
  for (const auto& g : wo_cohomology(q, 0, wo_top_degree(q))) {
    std::string detail = "dim " + std::to_string(g.betti);
    if (!g.representatives.empty()) {
      detail += g.representatives.size() == 1 ? " representative " : " representatives ";
      for (std::size_t k = 0; k < g.representatives.size(); ++k)
        detail += (k ? ", " : "") + to_string(g.representatives[k]);
    }
    r.check("H^" + std::to_string(g.degree), Status::PassExact, detail);
  }
  return r;
}

Report chern_weil_report(const Document& doc, const RunOptions& options) {
  Report r;
  ResolvedGeometry g = resolve_geometry(doc, options);
  int q = doc.atlas.q;
  MetricConnection mc = metric_connection(g.connection, g.eps, zero_options(options));
  std::vector<std::pair<std::string, DiffForm>> forms;
  for (int i = 1; i <= q; ++i) forms.emplace_back("lambda(c" + std::to_string(i) + ")", lambda_c(i, mc));
  for (int j = 1; j <= q; j += 2) forms.emplace_back("lambda(h" + std::to_string(j) + ")", lambda_h(j, mc));
  for (const auto& [name, f] : forms) r.form(name, to_string(f));
  r.append(chain_map_check(mc, zero_options(options)));
  if (is_bott(g.connection, g.splitting, zero_options(options)).all_passed()) {
    r.append(bott_vanishing_check(g.connection, g.splitting, nullptr, zero_options(options)));
  } else {
    r.check("bott vanishing", Status::Fail, "refused: the connection is not Bott");
    for (const auto& [name, f] : high_c_monomials(g.connection, doc.atlas.n)) r.form(name, to_string(f));
  }
  auto sing = singular_points(doc, options);
  if (!sing.empty()) {
    ExtensionOptions e;
    e.seed = options.seed;
    r.append(extension_report(forms, sing, e));
  }
  return r;
}

Report gv_report(const Document& doc, const RunOptions& options) {
  Report r;
  ResolvedGeometry g = resolve_geometry(doc, options);
  auto sing = singular_points(doc, options);
  Report pre = adapted_report(doc, g, sing, options);
  r.append(pre);
  if (pre.has_failure()) {
    r.check("gv prerequisites", Status::Fail, "the geometry is not adapted");
    return r;
  }
  MetricConnection mc = metric_connection(g.connection, g.eps, zero_options(options));
  GVResult gv = gv_algorithm(g.chart_map, mc, zero_options(options));
  r.append(gv.report);
  if (!sing.empty()) {
    ExtensionOptions e;
    e.seed = options.seed;
    r.append(extension_report({{"lambda(h1)", lambda_h(1, mc)}, {"omega", gv.omega}, {"eta", gv.eta}, {"gv", gv.gv}},
                              sing, e));
  }
  return r;
}

}  // namespace

Report run_command(const std::string& command, const Document* doc, const std::map<std::string, std::string>& args,
                   const RunOptions& options) {
  if (!is_command(command)) throw Error("usage", "unknown command '" + command + "'");
  if (command == "wo-cohomology") return wo_report(codimension(doc, args));
  if (command == "gf-verify") return gf_verify(codimension(doc, args));
  if (!doc) throw Error("usage", command + " needs a foliation file");
  if (command == "check-cocycle") {
    CocycleOptions c;
    c.samples = options.samples;
    c.seed = options.seed;
    return verify_cocycle(doc->atlas, c);
  }
  if (command == "singular-set") {
    DensityOptions d;
    d.resolution = options.grid;
    SingularLocus locus = singular_locus(doc->atlas);
    Report r;
    for (const auto& cl : locus.charts) {
      std::string minors;
      for (const auto& [cols, m] : cl.minors) minors += (minors.empty() ? "" : ", ") + to_string(m);
      r.form("minors " + cl.chart, "(" + minors + ")");
    }
    DensityResult res = density_check(doc->atlas, locus, d);
    r.append(res.report);
    for (const auto& [chart, pts] : res.singular_points)
      for (const auto& p : pts) r.form("singular point " + chart, point_to_string(p, doc->atlas.chart(chart).chart->coordinates));
    return r;
  }
  if (command == "involutivity") {
    Rng rng(options.seed);
    const AtlasChart& ch = doc->primary();
    return involutivity_check(doc->atlas, sample_domain(ch.chart->coordinates, ch.domain, options.samples, rng));
  }
  if (command == "adapted-check") {
    ResolvedGeometry g = resolve_geometry(*doc, options);
    return adapted_report(*doc, g, singular_points(*doc, options), options);
  }
  if (command == "chern-weil") return chern_weil_report(*doc, options);
  return gv_report(*doc, options);
}

std::string emit(const Report& r, Format format) {
  std::ostringstream os;
  for (const auto& line : r.lines) {
    if (line.kind == ReportLine::Kind::Form) {
      os << (format == Format::Lines ? "FORM " : "") << line.name << " = " << line.text << "\n";
      continue;
    }
    if (format == Format::Lines) {
      os << "CHECK " << line.name << " " << status_name(line.status);
      if (!line.text.empty()) os << " " << line.text;
    } else {
      os << "[" << status_name(line.status) << "] " << line.name;
      if (!line.text.empty()) os << " " << line.text;
    }
    os << "\n";
  }
  return os.str();
}

int exit_status(const Report& r) { return r.has_failure() ? 1 : 0; }

}  // namespace foliate
