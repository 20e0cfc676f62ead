// Copyright 2026 The EPike Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EPIKE_SYNTAX_HPP
#define EPIKE_SYNTAX_HPP

#include <string>
#include <string_view>

#include "epike/constraint.hpp"
#include "epike/formula.hpp"

namespace epike {

// Constraint text:  var=value  !(c)  (c & c ...)  (c | c ...)  true  false
// Formula text:     in(c)  entailed(c)  sat(c)  suc  !f  (f & f ...)
//                   B[a](f)  B[a | g](f)
// print(parse(s)) is canonical and parse(print(x)) == x structurally.
Constraint parse_constraint(std::string_view text);
std::string to_string(const Constraint& c);

Formula parse_formula(std::string_view text);
std::string to_string(const Formula& f);

}  // namespace epike

#endif  // EPIKE_SYNTAX_HPP
