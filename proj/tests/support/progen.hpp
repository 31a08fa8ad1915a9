#pragma once

// Random structured programs over parameters a, b and locals u, w.

#include <cstdint>
#include <random>
#include <string>

namespace flowloc::oracle {

class ProgramGen {
 public:
  explicit ProgramGen(uint64_t seed) : rng_(seed) {}

  std::string program() {
    std::string s = "/*@ requires a >= " + std::to_string(pick(-3, 0)) + ";\n  @ ensures " + post() + "; */\n";
    s += "int g(int a, int b) {\n  int w = 0;\n  int u = " + expr() + ";\n";
    s += block(2, "  ");
    s += "  return " + expr() + ";\n}\n";
    return s;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string atom() {
    static const char* names[] = {"a", "b", "u", "w"};
    return pick(0, 3) == 0 ? std::to_string(pick(-5, 5)) : names[pick(0, 3)];
  }

  std::string param() { return pick(0, 2) == 0 ? std::to_string(pick(-3, 3)) : (pick(0, 1) ? "a" : "b"); }

  std::string post() {
    switch (pick(0, 2)) {
      case 0: return "\\result >= a - 9 || \\result < b";
      case 1: return "\\result == " + param() + " + " + param();
      default: return "\\result >= " + param() + " && \\result <= b + " + std::to_string(pick(0, 6));
    }
  }

  std::string expr() {
    switch (pick(0, 5)) {
      case 0: return atom() + " + " + atom();
      case 1: return atom() + " - (" + atom() + " + " + atom() + ")";
      case 2: return std::to_string(pick(-3, 3)) + " * " + atom();
      case 3: return "-(" + atom() + ")";
      default: return atom();
    }
  }

  std::string cond() {
    static const char* ops[] = {"<", "<=", ">", ">=", "==", "!="};
    std::string c = expr() + " " + ops[pick(0, 5)] + " " + atom();
    switch (pick(0, 4)) {
      case 0: return "(" + c + ") && !(" + atom() + " == " + atom() + ")";
      case 1: return c + " || " + atom() + " < 0";
      default: return c;
    }
  }

  std::string block(int depth, const std::string& ind) {
    std::string s;
    int n = pick(1, 3);
    for (int i = 0; i < n; ++i) {
      if (depth > 0 && pick(0, 2) == 0) {
        s += ind + "if (" + cond() + ") {\n" + block(depth - 1, ind + "  ") + ind + "}";
        if (pick(0, 1)) s += " else {\n" + block(depth - 1, ind + "  ") + ind + "}";
        s += "\n";
      } else {
        s += ind + (pick(0, 1) ? "u" : "w") + " = " + expr() + ";\n";
      }
    }
    return s;
  }

  std::mt19937_64 rng_;
};

}  // namespace flowloc::oracle
