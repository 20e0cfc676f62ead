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


#ifndef EPIKE_TESTS_UNIT_FIXTURES_HPP
#define EPIKE_TESTS_UNIT_FIXTURES_HPP

#include <string>
#include <vector>

#include "epike/formula.hpp"
#include "epike/model.hpp"
#include "epike/scenario.hpp"
#include "epike/syntax.hpp"

namespace fixture {

inline const std::string kScenarioDir = EPIKE_SCENARIO_DIR;
inline const std::string kC1 = "(container=mug & drink=coffee) | (container=glass & drink=juice)";

inline epike::Scenario breakfast(const std::string& name) {
  return epike::load_scenario(kScenarioDir + "/breakfast_" + name + ".json");
}

inline epike::Formula F(const std::string& text) { return epike::parse_formula(text); }
inline epike::Constraint C(const std::string& text) { return epike::parse_constraint(text); }

// Formulas of belief depth <= 2 over the breakfast vocabulary: atoms on the
// task constraint and each assignment, under every B[a] and B[a]B[b] prefix.
inline std::vector<epike::Formula> breakfast_battery() {
  std::vector<std::string> atoms{"in(" + kC1 + ")", "entailed(container=mug)",
                                 "sat(drink=juice)", "entailed(false)", "suc",
                                 "sat(container=glass & drink=juice)"};
  std::vector<epike::Formula> out;
  for (const auto& a : atoms) {
    out.push_back(F(a));
    out.push_back(F("!" + a));
    for (const std::string x : {"R", "H"}) {
      out.push_back(F("B[" + x + "](" + a + ")"));
      for (const std::string y : {"R", "H"}) {
        out.push_back(F("B[" + x + "](B[" + y + "](" + a + "))"));
      }
    }
  }
  return out;
}

inline std::vector<bool> truth(const epike::PointedState& s,
                               const std::vector<epike::Formula>& battery) {
  std::vector<bool> out;
  for (const auto& f : battery) out.push_back(epike::evaluate(s, f));
  return out;
}

}  // namespace fixture

#endif  // EPIKE_TESTS_UNIT_FIXTURES_HPP
