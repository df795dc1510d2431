#pragma once

#include <string>

#include "kb/recurrence.hpp"

namespace kb::rec {

/// Parses a recurrence document:
///
///   {"family": "dc",     "parameters": {"a": 2, "b": 2, "c": "1"}, "h": "n/2"}
///   {"family": "linear", "parameters": {"k": 2, "base": [1, 1], "coeffs": [1, 1]}, "h": "1"}
///   {"family": "prob",   "parameters": {"k": 2, "base": [0], "K": 2}, "h": "n-1", "weights": "2/n"}
///
/// Rationals may be JSON integers or strings ("3/4", "0.25"). Throws
/// InvalidSpec on malformed documents.
Recurrence parse_spec(const std::string& text);
Recurrence load_spec(const std::string& path);

/// Textbook fixtures with standard parameters.
Recurrence mergesort(const mpq_class& c = 1);           ///< a=2, b=2, h(n)=n/2
Recurrence divide_three_halves(const mpq_class& c = 1);  ///< a=3, b=2, h(n)=n
Recurrence hanoi();                                      ///< T(n)=2T(n-1)+1, T(1)=1
Recurrence fibonacci();                                  ///< T(n)=T(n-1)+T(n-2)+1, T(1)=T(2)=1
Recurrence largetwo();                                   ///< T(n)=T(n-1)+2, T(1)=1
Recurrence quicksort();                                  ///< k=2, c_1=0, v_i(n)=2/n, h(n)=n-1, K=2

}  // namespace kb::rec
