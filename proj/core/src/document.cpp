#include "foliate/document.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace foliate {

namespace {

const std::set<std::string> kFunctions = {"sqrt", "exp", "log", "sin", "cos"};

struct Item {
  std::string text;
  SourceLocation loc;
};

// Character cursor over one line.
class Cursor {
 public:
  Cursor(const std::string& line, int lineno) : line_(line), lineno_(lineno) {}

  SourceLocation loc() const { return {lineno_, static_cast<int>(pos_) + 1}; }
  void skip_ws() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= line_.size();
  }
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(loc(), message); }

  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_])) && line_[pos_] != '=' &&
           line_[pos_] != '(' && line_[pos_] != '[')
      ++pos_;
    if (start == pos_) fail("expected a word");
    return line_.substr(start, pos_ - start);
  }

  std::string identifier(const std::string& what) {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < line_.size() && (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '_')) ++pos_;
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(line_[start]))) fail("expected " + what);
    return line_.substr(start, pos_ - start);
  }

  // key=
  std::string key() {
    std::string k = identifier("a key");
    skip_ws();
    if (pos_ >= line_.size() || line_[pos_] != '=') fail("expected '=' after '" + k + "'");
    ++pos_;
    return k;
  }

  int integer() {
    skip_ws();
    SourceLocation at = loc();
    std::size_t start = pos_;
    while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError(at, "expected an integer");
    return std::stoi(line_.substr(start, pos_ - start));
  }

  // '(' item, ... ')' split at top-level commas.
  std::vector<Item> group() {
    skip_ws();
    if (pos_ >= line_.size() || line_[pos_] != '(') fail("expected '('");
    ++pos_;
    return items(')');
  }

  // '[' '[' item, ... ']' , ... ']'
  std::vector<std::vector<Item>> matrix() {
    skip_ws();
    if (pos_ >= line_.size() || line_[pos_] != '[') fail("expected '['");
    ++pos_;
    std::vector<std::vector<Item>> rows;
    for (;;) {
      skip_ws();
      if (pos_ >= line_.size() || line_[pos_] != '[') fail("expected '[' opening a row");
      ++pos_;
      rows.push_back(items(']'));
      skip_ws();
      if (pos_ < line_.size() && line_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (pos_ < line_.size() && line_[pos_] == ']') {
        ++pos_;
        return rows;
      }
      fail("expected ',' or ']'");
    }
  }

 private:
  std::vector<Item> items(char close) {
    std::vector<Item> out;
    int depth = 0;
    skip_ws();
    if (pos_ < line_.size() && line_[pos_] == close) {
      ++pos_;
      return out;
    }
    std::size_t start = pos_;
    for (; pos_ < line_.size(); ++pos_) {
      char c = line_[pos_];
      if (c == '(' || c == '[') ++depth;
      if ((c == ')' || c == ']') && depth > 0) {
        --depth;
        continue;
      }
      if (depth == 0 && (c == ',' || c == close)) {
        push(out, start, pos_);
        if (c == close) {
          ++pos_;
          return out;
        }
        start = pos_ + 1;
      }
    }
    fail(std::string("missing '") + close + "'");
  }

  void push(std::vector<Item>& out, std::size_t start, std::size_t end) const {
    while (start < end && std::isspace(static_cast<unsigned char>(line_[start]))) ++start;
    while (end > start && std::isspace(static_cast<unsigned char>(line_[end - 1]))) --end;
    if (start == end) throw ParseError({lineno_, static_cast<int>(start) + 1}, "empty entry");
    out.push_back({line_.substr(start, end - start), {lineno_, static_cast<int>(start) + 1}});
  }

  const std::string& line_;
  int lineno_;
  std::size_t pos_ = 0;
};

// Every identifier must be a function name, an allowed variable, or (for
// forms) the differential of one.
void check_names(const Item& item, const std::vector<std::string>& allowed, bool forms, const std::string& where) {
  auto tokens = tokenize(item.text, item.loc);
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const Token& t = tokens[k];
    if (t.kind != Token::Kind::Ident) continue;
    bool call = k + 1 < tokens.size() && tokens[k + 1].kind == Token::Kind::Symbol && tokens[k + 1].text == "(";
    if (call && kFunctions.count(t.text)) continue;
    auto known = [&](const std::string& n) { return std::find(allowed.begin(), allowed.end(), n) != allowed.end(); };
    if (known(t.text)) continue;
    if (forms && t.text.size() > 1 && t.text[0] == 'd' && known(t.text.substr(1))) continue;
    throw SemanticError(t.loc, "unknown identifier '" + t.text + "' in " + where);
  }
}

Expr expr_item(const Item& item, const std::vector<std::string>& allowed, const std::string& where) {
  check_names(item, allowed, false, where);
  return parse_expr(item.text, nullptr, item.loc);
}

std::vector<Expr> exprs(const std::vector<Item>& items, const std::vector<std::string>& allowed, const std::string& where) {
  std::vector<Expr> out;
  for (const auto& i : items) out.push_back(expr_item(i, allowed, where));
  return out;
}

std::vector<std::string> identifiers(const std::vector<Item>& items) {
  std::vector<std::string> out;
  for (const auto& i : items) {
    Cursor c(i.text, i.loc.line);
    std::string id = c.identifier("an identifier");
    if (!c.done()) throw ParseError({i.loc.line, i.loc.column}, "expected a plain identifier, got '" + i.text + "'");
    if (std::find(out.begin(), out.end(), id) != out.end()) throw SemanticError(i.loc, "duplicate name '" + id + "'");
    out.push_back(id);
  }
  return out;
}

void require_size(std::size_t got, int want, const SourceLocation& loc, const std::string& what) {
  if (static_cast<int>(got) != want)
    throw SemanticError(loc, what + " has " + std::to_string(got) + " entries, expected " + std::to_string(want));
}

}  // namespace

Document parse_document(const std::string& text, const std::string& base_dir, const std::string& path) {
  Document doc;
  doc.path = path;
  bool have_manifold = false, have_codim = false;
  SourceLocation metric_loc, euclid_loc, connection_loc;
  std::vector<std::vector<Item>> metric_items, euclid_items, connection_items;
  std::vector<std::pair<std::string, SourceLocation>> pending_transitions;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    Cursor c(line, lineno);
    if (c.done()) continue;
    SourceLocation start = c.loc();
    std::string kw = c.word();
    if (kw == "manifold") {
      doc.atlas.name = c.identifier("a manifold name");
      std::string k = c.key();
      if (k != "dim") c.fail("expected dim=");
      doc.atlas.n = c.integer();
      if (doc.atlas.n < 1) throw SemanticError(start, "dimension must be positive");
      have_manifold = true;
    } else if (kw == "codim") {
      doc.atlas.q = c.integer();
      have_codim = true;
    } else if (kw == "chart") {
      if (!have_manifold || !have_codim) throw SemanticError(start, "chart before manifold and codim declarations");
      AtlasChart ch;
      ch.name = c.identifier("a chart name");
      if (doc.atlas.find_chart(ch.name)) throw SemanticError(start, "duplicate chart '" + ch.name + "'");
      std::vector<std::string> coords;
      std::vector<Item> domain, map;
      SourceLocation map_loc;
      bool have_coords = false, have_map = false;
      while (!c.done()) {
        SourceLocation kl = c.loc();
        std::string k = c.key();
        if (k == "coords") {
          auto items = c.group();
          coords = identifiers(items);
          require_size(coords.size(), doc.atlas.n, kl, "coords of chart '" + ch.name + "'");
          have_coords = true;
        } else if (k == "domain") {
          domain = c.group();
        } else if (k == "map") {
          map_loc = kl;
          map = c.group();
          have_map = true;
        } else {
          throw ParseError(kl, "unknown chart attribute '" + k + "'");
        }
      }
      if (!have_coords) throw SemanticError(start, "chart '" + ch.name + "' has no coords");
      if (!have_map) throw SemanticError(start, "chart '" + ch.name + "' has no map");
      if (!doc.atlas.charts.empty() && doc.atlas.charts.front().chart->coordinates != coords)
        throw SemanticError(start, "chart '" + ch.name + "' must use the coordinates of chart '" +
                                       doc.atlas.charts.front().name + "'");
      require_size(map.size(), doc.atlas.q, map_loc, "map of chart '" + ch.name + "'");
      ch.chart = make_chart(ch.name, coords);
      ch.domain = exprs(domain, coords, "domain of chart '" + ch.name + "'");
      ch.map = exprs(map, coords, "map of chart '" + ch.name + "'");
      doc.atlas.charts.push_back(std::move(ch));
    } else if (kw == "transition") {
      Transition t;
      SourceLocation al = c.loc();
      t.a = c.identifier("a chart name");
      SourceLocation bl = c.loc();
      t.b = c.identifier("a chart name");
      if (!doc.atlas.find_chart(t.a)) throw SemanticError(al, "transition references unknown chart '" + t.a + "'");
      if (!doc.atlas.find_chart(t.b)) throw SemanticError(bl, "transition references unknown chart '" + t.b + "'");
      std::vector<Item> map, domain;
      SourceLocation map_loc;
      bool have_vars = false;
      while (!c.done()) {
        SourceLocation kl = c.loc();
        std::string k = c.key();
        if (k == "vars") {
          t.vars = identifiers(c.group());
          require_size(t.vars.size(), doc.atlas.q, kl, "vars of transition " + t.a + " " + t.b);
          have_vars = true;
        } else if (k == "map") {
          map_loc = kl;
          map = c.group();
        } else if (k == "domain") {
          domain = c.group();
        } else {
          throw ParseError(kl, "unknown transition attribute '" + k + "'");
        }
      }
      if (!have_vars) throw SemanticError(start, "transition " + t.a + " " + t.b + " has no vars");
      require_size(map.size(), doc.atlas.q, map_loc, "map of transition " + t.a + " " + t.b);
      std::string where = "transition " + t.a + " " + t.b;
      t.map = exprs(map, t.vars, where);
      t.domain = exprs(domain, doc.atlas.chart(t.b).chart->coordinates, where);
      doc.atlas.transitions.push_back(std::move(t));
    } else if (kw == "metric" || kw == "euclid" || kw == "connection") {
      if (doc.atlas.charts.empty()) throw SemanticError(start, kw + " before any chart");
      auto m = c.matrix();
      if (kw == "metric") metric_items = m, metric_loc = start;
      if (kw == "euclid") euclid_items = m, euclid_loc = start;
      if (kw == "connection") connection_items = m, connection_loc = start;
    } else if (kw == "geometry") {
      std::string kind = c.identifier("pullback or graph");
      if (kind == "graph") {
        doc.geometry.kind = GeometrySource::Kind::Graph;
      } else if (kind == "pullback") {
        if (doc.atlas.charts.empty()) throw SemanticError(start, "geometry before any chart");
        SourceLocation kl = c.loc();
        if (c.key() != "map") throw ParseError(kl, "expected map=");
        auto items = c.group();
        std::string of = c.identifier("'of'");
        if (of != "of") c.fail("expected 'of'");
        SourceLocation fl = c.loc();
        doc.geometry.kind = GeometrySource::Kind::Pullback;
        doc.geometry.file = c.word();
        if (!c.done()) c.fail("unexpected text after the file name");
        doc.geometry.map = exprs(items, doc.primary().chart->coordinates, "pullback map");
        std::filesystem::path target = std::filesystem::path(base_dir) / doc.geometry.file;
        std::ifstream f(target);
        if (!f) throw SemanticError(fl, "cannot open '" + doc.geometry.file + "'");
        std::stringstream buf;
        buf << f.rdbuf();
        doc.geometry.target = std::make_shared<Document>(
            parse_document(buf.str(), target.parent_path().string(), target.string()));
        require_size(doc.geometry.map.size(), doc.geometry.target->atlas.n, kl, "pullback map");
      } else {
        throw ParseError(start, "unknown geometry source '" + kind + "'");
      }
    } else {
      throw ParseError(start, "unknown statement '" + kw + "'");
    }
    if (!c.done()) c.fail("unexpected text");
  }
  SourceLocation end{lineno + 1, 1};
  if (!have_manifold) throw SemanticError(end, "missing manifold declaration");
  if (!have_codim) throw SemanticError(end, "missing codim declaration");
  if (doc.atlas.q < 1 || doc.atlas.q > doc.atlas.n) throw SemanticError(end, "codim must lie in 1..dim");
  if (doc.atlas.charts.empty()) throw SemanticError(end, "no charts");
  const auto& coords = doc.primary().chart->coordinates;
  auto matrix = [&](const std::vector<std::vector<Item>>& rows, int size, const SourceLocation& loc,
                    const std::string& what) {
    require_size(rows.size(), size, loc, what);
    ExprMatrix m(size, size);
    for (int i = 0; i < size; ++i) {
      require_size(rows[static_cast<std::size_t>(i)].size(), size, loc, what + " row " + std::to_string(i + 1));
      for (int j = 0; j < size; ++j) m(i, j) = expr_item(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], coords, what);
    }
    return m;
  };
  if (!metric_items.empty()) doc.metric = matrix(metric_items, doc.atlas.n, metric_loc, "metric");
  if (!euclid_items.empty()) doc.euclid = matrix(euclid_items, doc.atlas.q, euclid_loc, "euclid");
  if (!connection_items.empty()) {
    int q = doc.atlas.q;
    require_size(connection_items.size(), q, connection_loc, "connection");
    MatrixForm m(doc.primary().chart, q, q, 1);
    for (int i = 0; i < q; ++i) {
      const auto& row = connection_items[static_cast<std::size_t>(i)];
      require_size(row.size(), q, connection_loc, "connection row " + std::to_string(i + 1));
      for (int j = 0; j < q; ++j) {
        const Item& item = row[static_cast<std::size_t>(j)];
        check_names(item, coords, true, "connection");
        DiffForm f = parse_form(item.text, doc.primary().chart, item.loc, 1);
        if (f.degree() != 1) throw SemanticError(item.loc, "connection entries must be 1-forms");
        m(i, j) = f;
      }
    }
    doc.connection = m;
  }
  if (doc.geometry.kind == GeometrySource::Kind::Pullback) {
    const Document& t = *doc.geometry.target;
    if (t.atlas.q != doc.atlas.q) throw SemanticError(end, "pullback target has a different codimension");
  }
  try {
    validate_atlas(doc.atlas);
  } catch (const Error& e) {
    throw SemanticError(end, e.what());
  }
  return doc;
}

Document parse_document_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("io", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_document(buf.str(), std::filesystem::path(path).parent_path().string(), path);
}

}  // namespace foliate
