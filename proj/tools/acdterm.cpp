// acdterm: run, check or explore ACDTR programs from the command line.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "acdterm/engine.hpp"
#include "acdterm/oracle.hpp"
#include "acdterm/syntax.hpp"
#include "acdterm/trace_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kBudget = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

acd::Program load_program(const std::string& path) {
  try {
    return acd::parse_program(read_file(path));
  } catch (const acd::ParseError& e) {
    throw std::runtime_error(path + ":" + e.what());
  }
}

acd::Term load_goal(const std::string& text, const std::string& origin) {
  try {
    return acd::parse_term(text);
  } catch (const acd::ParseError& e) {
    throw std::runtime_error(origin + ":" + e.what());
  }
}

std::size_t default_max_steps() {
  if (const char* env = std::getenv("ACDTERM_MAX_STEPS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 10000;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ACDTR term rewriting engine"};
  app.require_subcommand(1);

  std::string program_path;
  std::string goal_text;
  std::string goal_file;
  std::size_t max_steps = default_max_steps();
  bool trace = false;
  std::string trace_out;
  bool print_ids = false;
  std::string format = "text";

  auto* run = app.add_subcommand("run", "Normalise a goal");
  run->add_option("-p,--program", program_path, "Program file")->required();
  auto* g = run->add_option("-g,--goal", goal_text, "Goal term");
  auto* gf = run->add_option("-G,--goal-file", goal_file, "File holding the goal term");
  g->excludes(gf);
  gf->excludes(g);
  run->add_option("--max-steps", max_steps, "Transition budget")
      ->check(CLI::PositiveNumber);
  run->add_flag("--trace", trace, "Print one line per transition");
  run->add_option("--trace-out", trace_out, "Write the trace to a file instead of stderr");
  run->add_flag("--print-ids", print_ids, "Show node identifiers");
  run->add_option("--format", format, "Trace format")
      ->check(CLI::IsMember({"text", "json-lines"}));

  auto* check = app.add_subcommand("check", "Parse and validate a program");
  check->add_option("-p,--program", program_path, "Program file")->required();

  std::size_t depth = 20;
  std::size_t width = 10000;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive normal-form search");
  oracle->group("");
  oracle->add_option("-p,--program", program_path, "Program file")->required();
  oracle->add_option("-g,--goal", goal_text, "Goal term")->required();
  oracle->add_option("--depth", depth, "Maximum derivation length");
  oracle->add_option("--width", width, "Maximum number of states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  }

  try {
    if (*check) {
      acd::Program p = load_program(program_path);
      std::cout << p.rules.size() << " rules\n";
      return kOk;
    }
    if (*oracle) {
      acd::Program p = load_program(program_path);
      acd::SearchResult r =
          acd::search_normal_forms(p, load_goal(goal_text, "goal"), depth, width);
      for (const auto& nf : r.normal_forms) std::cout << acd::pretty(nf) << '\n';
      std::cerr << r.explored << " states" << (r.truncated ? " (truncated)" : "") << '\n';
      return kOk;
    }

    if (goal_text.empty() == goal_file.empty()) {
      std::cerr << "run: exactly one of --goal and --goal-file is required\n";
      return kError;
    }
    acd::Program p = load_program(program_path);
    acd::Term goal = goal_file.empty() ? load_goal(goal_text, "goal")
                                       : load_goal(read_file(goal_file), goal_file);
    acd::RunResult r = acd::run(p, goal, {max_steps});

    if (trace) {
      std::ofstream file;
      if (!trace_out.empty()) {
        file.open(trace_out);
        if (!file) throw std::runtime_error("cannot write " + trace_out);
      }
      std::ostream& os = trace_out.empty() ? std::cerr : file;
      for (const auto& s : r.trace) {
        os << (format == "json-lines" ? acd::step_to_json(s) : acd::format_step(s, print_ids))
           << '\n';
      }
    }
    const acd::Term& final_goal = r.final_state.goal;
    std::cout << (print_ids ? acd::pretty(final_goal, {true})
                            : acd::pretty(acd::canonical(acd::strip(final_goal))))
              << '\n';
    if (r.status == acd::RunStatus::BudgetExhausted) {
      std::cerr << "step budget of " << max_steps << " exhausted\n";
      return kBudget;
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}
