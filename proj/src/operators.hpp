#pragma once

#include <string_view>

namespace acd {

struct OperatorInfo {
  std::string_view symbol;
  int precedence;
  bool ac;
};

inline constexpr int kPrefixPrecedence = 600;
inline constexpr int kPrimaryPrecedence = 1000;

inline const OperatorInfo* binary_operator(std::string_view symbol) {
  static constexpr OperatorInfo table[] = {
      {"\\/", 100, true}, {"/\\", 200, true}, {"=", 300, false},
      {"!=", 300, false}, {"!==", 300, false}, {"<=", 300, false},
      {"<", 300, false},  {">=", 300, false}, {">", 300, false},
      {"+", 400, true},   {"*", 500, true},
  };
  for (const auto& op : table) {
    if (op.symbol == symbol) return &op;
  }
  return nullptr;
}

}  // namespace acd
