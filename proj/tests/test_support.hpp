#pragma once

#include <string>

#include "jetcalc/jetcalc.hpp"
#include "jetcalc/oracle.hpp"
#include "jetcalc/properties.hpp"

namespace jetcalc::test {

inline Poly P(const std::string& text, std::size_t n = 1) { return parse_poly(text, n); }
inline NormalOperator Op(const std::string& text, std::size_t n = 1) { return parse_operator(text, n); }
inline FreeModuleElement S(const std::string& text, std::size_t n = 1) { return parse_section(text, n); }
inline Rational Q(const std::string& text) { return parse_rational(text); }

}  // namespace jetcalc::test
