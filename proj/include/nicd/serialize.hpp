// Copyright 2026 nicd Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NICD_SERIALIZE_HPP
#define NICD_SERIALIZE_HPP

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "nicd/protocol.hpp"
#include "nicd/sets.hpp"

namespace nicd {

// Explicit sets as text: header line "s n", then one base-s string per
// line (digits 0-9a-zA-Z, so s <= 62). Points are written sorted.
void write_explicit_set(std::ostream& out, const ExplicitSet& set);
ExplicitSet read_explicit_set(std::istream& in);
void save_explicit_set(const std::string& path, const ExplicitSet& set);
ExplicitSet load_explicit_set(const std::string& path);

// Set descriptor strings: "cylinder:s=..,n=..,k=..",
// "ball:s=..,n=..,alpha=..[,zeros=1]", or a path to an explicit-set file.
// Parse failures throw std::invalid_argument naming the bad field.
SetSpec parse_set_descriptor(const std::string& descriptor);

nlohmann::json report_to_json(const SetSpec& spec, const NoiseModel& model,
                              const AgreementReport& report);

nlohmann::json protocol_to_json(const TranslationProtocol& tp, bool include_decoder);
TranslationProtocol protocol_from_json(const nlohmann::json& j);

std::string format_double(double v);  // shortest round-trip-exact decimal

}  // namespace nicd

#endif  // NICD_SERIALIZE_HPP
