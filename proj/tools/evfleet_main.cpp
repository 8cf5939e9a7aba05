// Copyright 2026 The evfleet Authors
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

// evfleet command-line tool. Talks to the library only through evfleet.h.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "evfleet/evfleet.h"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

// Machine-parsable failure line: "error <module>.<Kind>: <message>".
int report_failure(evf_status status) {
  const char* msg = evf_last_error();
  std::fprintf(stderr, "error %s\n", (msg && *msg) ? msg : evf_status_name(status));
  return status == EVF_E_USAGE ? 2 : 1;
}

struct Settings {
  std::vector<std::pair<std::string, std::optional<std::string>>> flags;

  std::optional<std::string>& add(CLI::App& app, const std::string& key, const std::string& help) {
    flags.emplace_back(key, std::nullopt);
    auto& slot = flags.back().second;
    std::string name = "--" + key;
    for (auto& c : name) {
      if (c == '_') c = '-';
    }
    app.add_option(name, slot, help);
    return slot;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic EV fleet telemetry, consumption models and battery-aging checks"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings settings;
  settings.flags.reserve(32);
  settings.add(app, "seed", "Seed for fleet generation and training");
  settings.add(app, "root", "Trip store root directory (default: $EVFLEET_ROOT)");
  settings.add(app, "out_dir", "Artifact directory (default: <root>/_artifacts)");
  settings.add(app, "endpoint", "Broker endpoint host:port (port 0: ephemeral / in-process)");
  settings.add(app, "validation_vehicles", "Comma list of held-out vehicle ids");
  settings.add(app, "epochs", "Training epochs for the MLP");
  settings.add(app, "batch_size", "Mini-batch size for the MLP");
  settings.add(app, "lr", "Adam learning rate");
  settings.add(app, "hidden_widths", "Comma list of the 5 hidden layer widths");
  settings.add(app, "k_aging", "z-score threshold for flagging aging");
  settings.add(app, "speedup", "Replay speed factor (inf: flat out)");
  settings.add(app, "vehicles", "Fleet size");
  settings.add(app, "trips_per_vehicle", "Trips generated per vehicle");
  settings.add(app, "aging_map", "Comma list vehicle_id=internal_loss_factor");
  settings.add(app, "min_trip_minutes", "Shortest generated trip");
  settings.add(app, "max_trip_minutes", "Longest generated trip");
  settings.add(app, "t_sec", "Section length in seconds");
  settings.add(app, "t_agg", "Aggregation window in seconds");
  settings.add(app, "model_kind", "linear, mlp or both");
  std::string config_file;
  app.add_option("--config", config_file, "File of key = value settings; overrides flags")->check(CLI::ExistingFile);

  struct Command {
    const char* name;
    const char* help;
    evf_status (*run)(const evf_config*);
  };
  const std::vector<Command> commands{
      {"synth", "Generate the synthetic fleet into the store", evf_cmd_synth},
      {"extract", "Build the dataset CSV from stored trips", evf_cmd_extract},
      {"train", "Fit the consumption models", evf_cmd_train},
      {"eval", "Evaluate models on the validation vehicles", evf_cmd_eval},
      {"aging", "Flag vehicles whose residuals exceed the fresh baseline", evf_cmd_aging},
      {"replay", "Stream stored trips through the broker into a recorder", evf_cmd_replay},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help);
  app.add_subcommand("run", "synth, extract, train, eval and aging in sequence");
  app.add_subcommand("broker", "Serve the pub/sub broker until interrupted");
  app.add_subcommand("config", "Print the effective settings");

  CLI11_PARSE(app, argc, argv);

  evf_config* cfg = nullptr;
  if (evf_config_new(&cfg) != EVF_OK) return report_failure(EVF_E_INTERNAL);
  struct Guard {
    evf_config* c;
    ~Guard() { evf_config_free(c); }
  } guard{cfg};

  // Precedence, lowest first: environment, flags, config file.
  if (const char* env = std::getenv("EVFLEET_ROOT"); env && *env) {
    if (auto st = evf_config_set(cfg, "root", env); st != EVF_OK) return report_failure(st);
  }
  for (const auto& [key, value] : settings.flags) {
    if (!value) continue;
    if (auto st = evf_config_set(cfg, key.c_str(), value->c_str()); st != EVF_OK) return report_failure(st);
  }
  if (!config_file.empty()) {
    if (auto st = evf_config_load_file(cfg, config_file.c_str()); st != EVF_OK) return report_failure(st);
  }

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  if (name == "config") {
    std::fputs(evf_config_text(cfg), stdout);
    return 0;
  }
  if (name == "broker") {
    evf_broker* broker = nullptr;
    if (auto st = evf_broker_start(cfg, &broker); st != EVF_OK) return report_failure(st);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::printf("broker listening on %s\n", evf_broker_endpoint(broker));
    std::fflush(stdout);
    while (!g_stop) {
      struct timespec ts {0, 100'000'000};
      nanosleep(&ts, nullptr);
    }
    evf_broker_free(broker);
    return 0;
  }

  std::vector<evf_status (*)(const evf_config*)> steps;
  if (name == "run") {
    steps = {evf_cmd_synth, evf_cmd_extract, evf_cmd_train, evf_cmd_eval, evf_cmd_aging};
  } else {
    for (const auto& c : commands) {
      if (name == c.name) steps.push_back(c.run);
    }
  }
  for (auto step : steps) {
    if (auto st = step(cfg); st != EVF_OK) return report_failure(st);
    std::fputs(evf_last_output(), stdout);
  }
  return 0;
}
