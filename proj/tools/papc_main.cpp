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

#include "papc/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"papc — mmWave MIMO precoding experiments with per-antenna power constraints"};
    app.require_subcommand(1);

    std::string config_path;
    int trials_override = -1;
    long long seed_override = -1;
    std::string out_override;
    int workers_override = -1;

    CLI::App* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
    run->add_option("config", config_path, "Path to the experiment config")->required();
    run->add_option("--trials", trials_override, "Override the trial count");
    run->add_option("--seed", seed_override, "Override the master seed");
    run->add_option("--out", out_override, "Override the output directory");
    run->add_option("--workers", workers_override, "Worker threads (0 = all logical cores)");

    CLI::App* presets = app.add_subcommand("presets", "List the built-in system presets");

    CLI11_PARSE(app, argc, argv);

    if (presets->parsed())
    {
        std::cout << papc::preset_listing();
        return 0;
    }

    try
    {
        papc::ExperimentSpec spec = papc::parse_config(config_path);
        if (trials_override >= 0) spec.trials = trials_override;
        if (seed_override >= 0) spec.master_seed = static_cast<std::uint64_t>(seed_override);
        if (!out_override.empty()) spec.output_dir = out_override;
        if (workers_override >= 0) spec.workers = workers_override;
        spec.validate();

        const papc::RunOutputs outputs = papc::run_experiment(spec);
        std::cout << "records : " << outputs.records_csv << "\n"
                  << "summary : " << outputs.summary_json << "\n"
                  << "config  : " << outputs.resolved_config << "\n";
        return 0;
    }
    catch (const papc::ValidationError& e)
    {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    }
    catch (const papc::IoError& e)
    {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
