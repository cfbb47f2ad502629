// Canonical source text for models and expressions.  Printing and parsing
// again yields an equal AST.
#pragma once

#include <string>

#include "syn/ast.hpp"

namespace syn {

std::string print_expr(const Expr& e);
std::string print_type_ref(const TypeRef& t);
std::string pretty_print(const Model& m);

}  // namespace syn
