// Copyright 2026 The spinmbqc Authors
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

#ifndef SPINMBQC_CLI_H
#define SPINMBQC_CLI_H

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "spinmbqc/noise_mc.h"

namespace spinmbqc {

/// Usage, config or parse problem; maps to exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum ExitCode { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

/// Command parameters keyed by flag name (without the leading dashes).
struct RunConfig {
    nlohmann::json values;

    static RunConfig defaults();
    static const std::vector<std::string> &known_keys();

    /// Overlays a JSON object; unknown keys and mistyped values throw ConfigError.
    void merge(const nlohmann::json &j);
    void merge_file(const std::filesystem::path &path);
    /// Sets one key from flag text, converting to the key's type.
    void set_from_text(const std::string &key, const std::string &text);

    uint64_t seed() const;
    uint64_t trials() const;
    unsigned threads() const;
    std::string str(const std::string &key) const;
    ErrorModel error_model() const;
};

int cmd_validate(const std::string &sequence, std::ostream &out, std::ostream &err);
int cmd_derive(const std::string &sequence, const std::string &outcomes, std::ostream &out, std::ostream &err);
int cmd_run(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_montecarlo(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_compile(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Full command line without the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace spinmbqc

#endif
