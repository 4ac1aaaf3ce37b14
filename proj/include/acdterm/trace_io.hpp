#pragma once

// Trace rendering: one human-readable line per step, or one JSON object
// per line with fields n, kind, rule, path, selection, ids, goal.

#include <string>

#include "acdterm/engine.hpp"

namespace acd {

/// "#3 simplify idempotence @ 1 : leq(X,Y) /\ ..."
std::string format_step(const TraceStep& step, bool print_ids = false);

/// Single-line JSON record. The goal keeps its identifiers so that it
/// parses back to the same annotated term.
std::string step_to_json(const TraceStep& step);

/// Inverse of step_to_json. Throws std::runtime_error (or ParseError for
/// the goal) on malformed input.
TraceStep step_from_json(const std::string& line);

/// "1.2" -> Position{1, 2}; "ε" or "" -> root.
Position parse_position(const std::string& text);

}  // namespace acd
