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

/* Stable C interface to the evfleet library. */
#ifndef EVFLEET_EVFLEET_H_
#define EVFLEET_EVFLEET_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(EVF_BUILDING_LIBRARY)
#define EVF_API __attribute__((visibility("default")))
#else
#define EVF_API
#endif

/* One code per library error kind; 0 is success. */
typedef enum evf_status {
  EVF_OK = 0,
  EVF_E_NOT_FOUND = 1,
  EVF_E_STRUCTURAL = 2,
  EVF_E_PARAM = 3,
  EVF_E_ZERO_DISTANCE = 4,
  EVF_E_PROTOCOL = 5,
  EVF_E_CONNECTION = 6,
  EVF_E_REPLAY_ABORTED = 7,
  EVF_E_ALREADY_EXISTS = 8,
  EVF_E_IO = 9,
  EVF_E_CORRUPT_TRIP = 10,
  EVF_E_BAD_SPLIT = 11,
  EVF_E_CORRUPT_DATASET = 12,
  EVF_E_FIT = 13,
  EVF_E_INPUT = 14,
  EVF_E_CONFIG = 15,
  EVF_E_EVAL = 16,
  EVF_E_ARTIFACT = 17,
  EVF_E_BASELINE = 18,
  EVF_E_ASSESS = 19,
  EVF_E_USAGE = 20,
  EVF_E_INVALID_ARGUMENT = 21,
  EVF_E_INTERNAL = 22
} evf_status;

typedef struct evf_config evf_config;
typedef struct evf_broker evf_broker;
typedef struct evf_model evf_model;
typedef struct evf_dataset evf_dataset;

/* "<module>.<Kind>" for a status, e.g. "models.EvalError". */
EVF_API const char* evf_status_name(evf_status status);

/* Message of the last failed call on this thread, prefixed with the
 * status name. Empty after a successful call. */
EVF_API const char* evf_last_error(void);

/* Human-readable summary of the last successful command on this thread. */
EVF_API const char* evf_last_output(void);

EVF_API const char* evf_version(void);

/* Pipeline configuration. Keys: seed, vehicles, trips_per_vehicle,
 * aging_map, min_trip_minutes, max_trip_minutes, root, out_dir, endpoint,
 * validation_vehicles, epochs, batch_size, lr, hidden_widths, k_aging,
 * speedup, t_sec, t_agg, model_kind. */
EVF_API evf_status evf_config_new(evf_config** out);
EVF_API void evf_config_free(evf_config* config);
EVF_API evf_status evf_config_set(evf_config* config, const char* key, const char* value);
/* Applies a file of "key = value" lines on top of the current settings. */
EVF_API evf_status evf_config_load_file(evf_config* config, const char* path);
/* Effective settings as "key = value" lines; owned by the config and valid
 * until the next call on it. */
EVF_API const char* evf_config_text(evf_config* config);

/* Pipeline steps. Each reads and writes through the store root and the
 * artifact directory named in the configuration. */
EVF_API evf_status evf_cmd_synth(const evf_config* config);
EVF_API evf_status evf_cmd_extract(const evf_config* config);
EVF_API evf_status evf_cmd_train(const evf_config* config);
EVF_API evf_status evf_cmd_eval(const evf_config* config);
EVF_API evf_status evf_cmd_aging(const evf_config* config);
EVF_API evf_status evf_cmd_replay(const evf_config* config);

/* Broker listening on the configured endpoint (port 0: ephemeral). */
EVF_API evf_status evf_broker_start(const evf_config* config, evf_broker** out);
/* "host:port" actually bound; owned by the broker. */
EVF_API const char* evf_broker_endpoint(const evf_broker* broker);
EVF_API void evf_broker_free(evf_broker* broker);

/* Model artifacts. */
EVF_API evf_status evf_model_load(const char* path, evf_model** out);
EVF_API void evf_model_free(evf_model* model);
/* "linear" or "mlp". */
EVF_API const char* evf_model_kind(const evf_model* model);
EVF_API size_t evf_model_feature_count(const evf_model* model);
EVF_API evf_status evf_model_predict(const evf_model* model, const double* x, size_t n, double* gamma_hat);

/* Dataset CSV files. */
EVF_API evf_status evf_dataset_load(const char* path, evf_dataset** out);
EVF_API void evf_dataset_free(evf_dataset* dataset);
EVF_API size_t evf_dataset_size(const evf_dataset* dataset);
EVF_API size_t evf_dataset_feature_count(const evf_dataset* dataset);
/* Copies sample i's features (feature_count values) and label. */
EVF_API evf_status evf_dataset_sample(const evf_dataset* dataset, size_t i, double* x, double* gamma);

#ifdef __cplusplus
}
#endif

#endif /* EVFLEET_EVFLEET_H_ */
