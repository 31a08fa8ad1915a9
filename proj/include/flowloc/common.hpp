#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flowloc {

/// 1-based position in a source text.
struct SourceLoc {
  int line = 1;
  int column = 1;

  auto operator<=>(const SourceLoc&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

/// Operator with both sides swapped (a op b  <=>  b swap(op) a).
CmpOp swapped(CmpOp op);
/// Logical complement (a op b  <=>  !(a complement(op) b)).
CmpOp complement(CmpOp op);
std::string_view to_string(CmpOp op);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the parser; carries the offending location.
class ParseError : public Error {
 public:
  ParseError(SourceLoc loc, const std::string& message);
  SourceLoc loc() const { return loc_; }
  const std::string& detail() const { return detail_; }

 private:
  SourceLoc loc_;
  std::string detail_;
};

class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

// Checked 64-bit helpers. They throw ArithmeticOverflow instead of wrapping.
int64_t checked_add(int64_t a, int64_t b);
int64_t checked_sub(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);
int64_t checked_neg(int64_t a);

}  // namespace flowloc
