// SPDX-License-Identifier: Apache-2.0
//
// papc — precoding and combining for frequency-selective mmWave MIMO links
// with per-antenna power constraints.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef PAPC_EXPERIMENT_HPP
#define PAPC_EXPERIMENT_HPP

#include "papc/types.hpp"
#include "papc/parallel.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace papc
{

/// Config or schema problem; the CLI maps it to exit code 2.
struct ValidationError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Filesystem problem; the CLI maps it to exit code 3.
struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind
{
    se_vs_snr,
    ccdf,
    se_vs_bandwidth,
    gamma_vs_d,
    gamma_vs_bandwidth,
};

enum class DesignKind
{
    tpc,
    ppc_digital,
    ppc_hybrid,
};

const char* to_string(ExperimentKind kind);
const char* to_string(DesignKind kind);

/// A full study description: which experiment, over which sweep, with which
/// designs, and how many seeded Monte Carlo trials.
struct ExperimentSpec
{
    ExperimentKind experiment = ExperimentKind::se_vs_snr;
    SystemConfig system;
    ChannelParams channel;
    std::vector<DesignKind> designs = {DesignKind::tpc, DesignKind::ppc_digital,
                                       DesignKind::ppc_hybrid};
    std::vector<double> sweep;
    int trials = 100;
    std::uint64_t master_seed = 1;
    std::string output_dir = "out";
    int workers = 0; // 0 = all logical cores

    void validate() const;
};

/// Parses and validates a JSON experiment config. Unknown keys are rejected;
/// malformed files raise ValidationError with line/column context.
ExperimentSpec parse_config(const std::string& path);

/// Same, from an in-memory JSON string.
ExperimentSpec parse_config_text(const std::string& text);

/// Applies an antenna/RF-chain preset ("system1" / "system2", flexible
/// spelling) to a SystemConfig.
void apply_preset(SystemConfig& cfg, const std::string& name);

/// Human-readable preset table for the `presets` subcommand.
std::string preset_listing();

/// Serialized resolved spec (defaults filled in), as written next to results.
std::string resolved_config_json(const ExperimentSpec& spec);

struct RunOutputs
{
    std::string records_csv;
    std::string summary_json;
    std::string resolved_config;
};

/// Runs the Monte Carlo study and writes records.csv, summary.json and
/// resolved_config.json into spec.output_dir. Numeric CSV content (all
/// columns except runtime_ms) is reproducible for a fixed spec and seed,
/// independent of the worker count.
RunOutputs run_experiment(const ExperimentSpec& spec);

} // namespace papc

#endif
