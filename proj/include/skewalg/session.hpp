#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "skewalg/expr.hpp"
#include "skewalg/ore.hpp"

namespace skewalg {

// One parsed and name-resolved statement.
struct Statement {
  std::string command;  // "ring", "mul", "check commute", ...
  SourcePos pos;
  std::optional<Token> name;          // the name a definition introduces
  std::vector<Token> refs;            // referenced bindings, in source order
  std::vector<Token> fresh;           // new variable names
  std::vector<std::pair<Token, ExprPtr>> maps;  // "var -> expr" lists
  std::vector<ExprPtr> exprs;
  std::optional<FieldSpec> field;
  std::optional<std::uint64_t> number;
  std::string word;                   // option values
  // Ring in which the expressions are evaluated; empty for the implicit
  // QQ[x, y] of a Darboux search.
  std::string eval_ring;
};

// Static scope: which names exist, what they are, and the current ring.
class Resolver {
 public:
  // Checks names and arities, fills eval_ring and records definitions.
  void resolve(Statement& s);

 private:
  enum class Kind { Ring, Ideal, Derivation, Endomorphism, SkewDerivation, Element };
  enum class Shape { Polynomial, Quotient, Skew, Ore };
  struct Symbol {
    Kind kind;
    Shape shape = Shape::Polynomial;  // rings only
    std::string ring;                 // owning ring for non-rings
    std::vector<std::string> vars;    // rings only: base then skew variables
  };

  const Symbol& lookup(const Token& t) const;
  const Symbol& expect(const Token& t, Kind kind, const std::string& what) const;
  const Symbol& expect_ring(const Token& t, bool commutative_only, bool polynomial_only) const;
  void check_expr(const ExprPtr& e, const std::string& ring) const;
  void define(const Token& name, Symbol sym, bool allow_rebind = false);
  const std::string& current(SourcePos pos) const;

  std::map<std::string, Symbol> symbols_;
  std::string current_;
};

// Parses and resolves a whole session. Throws ParseError for the first
// syntax error, unknown identifier or arity mismatch; nothing is executed.
std::vector<Statement> parse_session(std::string_view text, Resolver& scope);
std::vector<Statement> parse_session(std::string_view text);

enum class OutputMode { Text, Json };

enum ExitCode { ExitOk = 0, ExitParse = 1, ExitMath = 2, ExitBudget = 3 };

using Value = std::variant<Poly, SkewPoly>;

struct CommandResult {
  nlohmann::json json;
  std::string text;
};

class Session {
 public:
  Session();

  // Parses, then executes until the first error. One record per command.
  // Definitions persist across calls.
  int run(std::string_view text, std::ostream& out, std::ostream& err,
          OutputMode mode = OutputMode::Json);

  // Executes one statement resolved against this session's history.
  CommandResult execute(const Statement& s);

  GroebnerOptions& options() { return opts_; }

 private:
  struct RingEntry {
    std::variant<QuotientRing, SkewRing, OreExtension> ring;
    std::string display;
  };
  struct IdealEntry {
    std::string ring;
    IdealHandle ideal;
  };
  struct DerEntry {
    std::string ring;
    Derivation d;
  };
  struct EndoEntry {
    std::string ring;
    RingEndomorphism f;
  };
  struct SkewDerEntry {
    std::string ring;
    SkewDerivation d;
  };
  struct ElementEntry {
    std::string ring;
    Value value;
  };
  using Binding =
      std::variant<RingEntry, IdealEntry, DerEntry, EndoEntry, SkewDerEntry, ElementEntry>;

  const RingEntry& ring_entry(const std::string& name) const;
  const QuotientRing& commutative(const std::string& name) const;
  const Derivation& derivation(const std::string& name) const;
  Value eval(const ExprPtr& e, const std::string& ring) const;
  Poly eval_poly(const ExprPtr& e, const std::string& ring) const;
  nlohmann::json value_json(const Value& v) const;
  void bind(const std::string& name, Binding b);

  std::map<std::string, Binding> bindings_;
  Resolver scope_;
  GroebnerOptions opts_;
  VarContext plane_;
};

nlohmann::json verdict_json(const SimplicityVerdict& v);

}  // namespace skewalg
