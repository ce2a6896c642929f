#pragma once

// Surface syntax:
//   term   := factor { "*" factor }
//   factor := { deriv } name [ "(" { "D4" | "D3" | "Dc" } "R" ")" ] [ "^{(" halfint ")}" ]
//   deriv  := "nab4" | "nab3" | "nab" | "D4" | "D3" | "Dc"
//   norm   := "||" term "||_{L" ( "2" | "4" | "inf" ) [ "sc" ] "(" ( "S" | "H" | "Hb" ) ")}"
// A prefix D-derivative is the same as writing it inside Psi(... R).

#include "nullcalc/term.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nullcalc {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::string message, std::vector<std::string> expected);
  std::size_t offset() const { return offset_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }
  // "offset:{a,b,...}"
  std::string diagnostic_line() const;

 private:
  std::size_t offset_;
  std::string message_;
  std::vector<std::string> expected_;
};

SchematicTerm parse_term(std::string_view src);
NormExpr parse_norm(std::string_view src);

}  // namespace nullcalc
