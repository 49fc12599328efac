#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skewalg/session.hpp"

using namespace skewalg;

namespace {

struct Globals {
  bool json = false;
  std::string order = "grevlex";
  std::uint64_t budget = GroebnerOptions{}.budget;
  std::string prelude;
  std::string ring;
  std::size_t weyl = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void configure(Session& s, const Globals& g) {
  s.options().order = g.order == "lex" ? TermOrder::Lex : TermOrder::GrevLex;
  s.options().budget = g.budget;
}

OutputMode mode(const Globals& g) { return g.json ? OutputMode::Json : OutputMode::Text; }

// Runs the prelude silently, then the statement.
int one_shot(const Globals& g, const std::string& statement) {
  Session session;
  configure(session, g);
  std::string prelude;
  if (!g.ring.empty()) prelude += "ring R = " + g.ring + "\n";
  if (g.weyl) prelude += "weyl " + std::to_string(g.weyl) + "\n";
  if (!g.prelude.empty()) prelude += read_file(g.prelude) + "\n";
  if (!prelude.empty()) {
    std::ostringstream sink;
    int code = session.run(prelude, sink, std::cerr, mode(g));
    if (code != ExitOk) {
      std::cout << sink.str();
      return code;
    }
  }
  return session.run(statement, std::cout, std::cerr, mode(g));
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::string joined(const std::vector<std::string>& args) {
  std::string out;
  for (const auto& a : args) out += (out.empty() ? "" : " ") + a;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derivations, quotient rings and iterated skew polynomial rings"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Emit one JSON object per command");
  app.add_option("--order", g.order, "Term order")->check(CLI::IsMember({"lex", "grevlex"}));
  app.add_option("--budget", g.budget, "Gröbner step budget");

  int exit_code = 0;

  auto* repl = app.add_subcommand("repl", "Interactive session");
  repl->callback([&] {
    Session session;
    configure(session, g);
    const bool tty = isatty(STDIN_FILENO);
    std::string line;
    while (true) {
      if (tty) std::cout << "> " << std::flush;
      if (!std::getline(std::cin, line)) break;
      int code = session.run(line, std::cout, std::cerr, mode(g));
      if (code != ExitOk) exit_code = code;
    }
  });

  std::string file;
  auto* run = app.add_subcommand("run", "Execute a session file");
  run->add_option("file", file, "Session file")->required()->check(CLI::ExistingFile);
  run->callback([&] {
    Session session;
    configure(session, g);
    exit_code = session.run(read_file(file), std::cout, std::cerr, mode(g));
  });

  // One-shot commands: the arguments form one statement of the session language.
  struct OneShot {
    const char* name;
    const char* help;
    bool wrap_list;  // parenthesize an expression list
  };
  const std::vector<OneShot> shots{
      {"gb", "Reduced Gröbner basis of (g1, ..., gk) or a named ideal", true},
      {"dim", "Krull dimension of an ideal or ring", true},
      {"member", "Ideal membership: IDEAL : expr", false},
      {"reduce", "Normal form in a quotient: RING : expr", false},
      {"apply", "Apply a derivation: DER : expr", false},
      {"mul", "Normal form of a product in the current ring", false},
      {"inner", "Inner derivation induced by an element", false},
      {"weyl", "Define the Weyl algebra A_n", false},
      {"darboux", "Darboux polynomial search for d/dx + F d/dy", false},
      {"certificate", "Simplicity certificate for a polynomial", false},
      {"check", "Run a check: commute, dideal, simple, dsimple, necessary, principal, charp, injective",
       false},
  };
  std::vector<std::vector<std::string>> shot_args(shots.size());
  std::uint64_t darboux_bound = 0;
  for (std::size_t i = 0; i < shots.size(); ++i) {
    auto* sub = app.add_subcommand(shots[i].name, shots[i].help);
    sub->add_option("args", shot_args[i], "Statement arguments")->required();
    sub->add_option("--prelude", g.prelude, "Session file run before the command")
        ->check(CLI::ExistingFile);
    sub->add_option("--ring", g.ring, "Define R = <ring>, e.g. \"QQ[x, y]\"");
    sub->add_option("--weyl", g.weyl, "Define the Weyl algebra A_n first");
    if (std::string(shots[i].name) == "darboux")
      sub->add_option("--bound", darboux_bound, "Total degree bound (default 3)");
    sub->callback([&, i] {
      std::string body = joined(shot_args[i]);
      if (shots[i].wrap_list && !is_identifier(body)) body = "(" + body + ")";
      if (darboux_bound) body += " --bound " + std::to_string(darboux_bound);
      exit_code = one_shot(g, std::string(shots[i].name) + " " + body);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
