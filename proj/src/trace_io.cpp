#include "acdterm/trace_io.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace acd {

std::string format_step(const TraceStep& step, bool print_ids) {
  std::ostringstream os;
  os << '#' << step.index << ' ' << to_string(step.kind) << ' ' << step.rule << " @ "
     << step.focus.to_string();
  if (!step.selection.empty()) {
    os << '{';
    for (std::size_t i = 0; i < step.selection.size(); ++i) {
      os << (i ? "," : "") << step.selection[i] + 1;
    }
    os << '}';
  }
  Term g = print_ids ? step.goal_after : strip(step.goal_after);
  os << " : " << pretty(g, {print_ids});
  return os.str();
}

std::string step_to_json(const TraceStep& step) {
  nlohmann::ordered_json j;
  j["n"] = step.index;
  j["kind"] = to_string(step.kind);
  j["rule"] = step.rule;
  j["path"] = step.focus.to_string();
  std::vector<std::size_t> sel;
  for (auto i : step.selection) sel.push_back(i + 1);
  j["selection"] = sel;
  j["ids"] = step.entry;
  j["goal"] = pretty(step.goal_after, {true});
  return j.dump();
}

Position parse_position(const std::string& text) {
  if (text.empty() || text == "ε") return Position{};
  std::vector<std::size_t> path;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t dot = text.find('.', start);
    if (dot == std::string::npos) dot = text.size();
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(text.data() + start, text.data() + dot, v);
    if (ec != std::errc() || p != text.data() + dot || v == 0) {
      throw std::runtime_error("bad position '" + text + "'");
    }
    path.push_back(v);
    start = dot + 1;
  }
  return Position(std::move(path));
}

TraceStep step_from_json(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad trace record: ") + e.what());
  }
  TraceStep s;
  try {
    s.index = j.at("n").get<std::size_t>();
    auto kind = step_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error("bad trace record: unknown kind");
    s.kind = *kind;
    s.rule = j.at("rule").get<std::string>();
    s.focus = parse_position(j.at("path").get<std::string>());
    for (auto i : j.value("selection", std::vector<std::size_t>{})) {
      if (i == 0) throw std::runtime_error("bad trace record: selection index 0");
      s.selection.push_back(i - 1);
    }
    s.entry = j.value("ids", std::vector<Id>{});
    s.goal_after = parse_term(j.at("goal").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad trace record: ") + e.what());
  }
  return s;
}

}  // namespace acd
