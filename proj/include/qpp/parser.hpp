#pragma once

#include <string>
#include <string_view>

#include "qpp/program.hpp"

namespace qpp {

/// Parses a .qpp source file and validates it. Throws ParseError for
/// syntax errors and ValidationError for semantic ones (duplicate or
/// undeclared names, a second quantum register, ...).
Program parse_program(std::string_view text);

/// Fragments, without declarations or validation.
Stmt parse_stmt(std::string_view text);
Expr parse_expr(std::string_view text);

/// Source text that parses back to an equal program.
std::string print_program(const Program& program);
/// `qreg` names the register in quantum statements.
std::string print_stmt(const Stmt& stmt, const std::string& qreg = "psi");
std::string print_expr(const Expr& expr);

}  // namespace qpp
