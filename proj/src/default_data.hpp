// Copyright 2026 The Pseudopilot Authors.
//
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

// Contents of data/*.tsv and data/rules.txt, embedded at configure time.

#ifndef PSEUDOPILOT_SRC_DEFAULT_DATA_HPP_
#define PSEUDOPILOT_SRC_DEFAULT_DATA_HPP_

#include <string_view>

namespace pseudopilot::data {

extern const std::string_view kTelephonyTsv;
extern const std::string_view kCommandsTsv;
extern const std::string_view kRulesTxt;

}  // namespace pseudopilot::data

#endif  // PSEUDOPILOT_SRC_DEFAULT_DATA_HPP_
