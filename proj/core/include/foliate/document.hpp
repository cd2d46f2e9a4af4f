#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "foliate/exterior.hpp"
#include "foliate/foliation.hpp"
#include "foliate/parser.hpp"

namespace foliate {

// Undeclared names, dimension mismatches and similar; code "semantic".
class SemanticError : public Error {
 public:
  SemanticError(const SourceLocation& loc, const std::string& message)
      : Error("semantic", std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message),
        location_(loc) {}

  const SourceLocation& location() const noexcept { return location_; }

 private:
  SourceLocation location_;
};

struct Document;

struct GeometrySource {
  enum class Kind { Direct, Pullback, Graph };
  Kind kind = Kind::Direct;
  std::vector<Expr> map;                // pullback: target coordinates in ours
  std::string file;                     // as written
  std::shared_ptr<const Document> target;
};

// A parsed foliation description. Geometry blocks live on the first chart.
struct Document {
  std::string path;
  Atlas atlas;
  std::optional<ExprMatrix> metric;
  std::optional<ExprMatrix> euclid;
  std::optional<MatrixForm> connection;
  GeometrySource geometry;

  const AtlasChart& primary() const { return atlas.charts.front(); }
};

// Grammar, one statement per line, '#' starts a comment:
//   manifold <name> dim=<n>
//   codim <q>
//   chart <name> coords=(<id>,...) [domain=(<expr>,...)] map=(<expr>,...)
//   transition <a> <b> vars=(<id>,...) [domain=(<expr>,...)] map=(<expr>,...)
//   metric [[<expr>,...],...]      euclid [[<expr>,...],...]
//   connection [[<form>,...],...]
//   geometry pullback map=(<expr>,...) of <file>  |  geometry graph
// Pullback targets are resolved relative to `base_dir`.
Document parse_document(const std::string& text, const std::string& base_dir = ".", const std::string& path = "");
Document parse_document_file(const std::string& path);

}  // namespace foliate
