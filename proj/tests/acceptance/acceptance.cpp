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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Pass criterion numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evfleet/agingwatch/agingwatch.hpp"
#include "evfleet/features/features.hpp"
#include "evfleet/ingest/codec.hpp"
#include "evfleet/ingest/net.hpp"
#include "evfleet/ingest/recorder.hpp"
#include "evfleet/ingest/topic.hpp"
#include "evfleet/models/adam.hpp"
#include "evfleet/models/linear.hpp"
#include "evfleet/models/metrics.hpp"
#include "evfleet/models/mlp.hpp"
#include "evfleet/pipeline/pipeline.hpp"
#include "evfleet/synthfleet/synthfleet.hpp"
#include "fixtures.hpp"
#include "grad_check.hpp"
#include "reference_matcher.hpp"

namespace {

using namespace evfleet;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool rel_close(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

models::PredictFn predictor(const auto& model) {
  return [&model](std::span<const double> x) { return model.predict(x); };
}

// 1. Metric suite on the hand case, RMSE^2 = MSE on random reports.
Outcome metrics() {
  const std::vector<double> g{-0.002, -0.004};
  const std::vector<double> gh{-0.003, -0.004};
  const auto r = models::evaluate_pairs(g, gh);
  bool ok = rel_close(r.mae, 0.0005, 1e-12) && rel_close(r.rmae, 0.25, 1e-12) && rel_close(r.mse, 5e-7, 1e-12) &&
            rel_close(r.rmse, std::sqrt(5e-7), 1e-12) && std::abs(r.rmse - 7.0711e-4) < 5e-9;
  Rng rng(1);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> a(1 + rng.below(100)), b(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] = rng.normal(-0.003, 0.002);
      b[k] = a[k] + rng.normal(0.0, 1e-3);
    }
    const auto rep = models::evaluate_pairs(a, b);
    worst = std::max(worst, std::abs(rep.rmse * rep.rmse - rep.mse) / rep.mse);
  }
  ok = ok && worst <= 1e-12;
  return {ok, fmt("MAE %.6g RMAE %.6g MSE %.6g RMSE %.6g; worst |RMSE^2-MSE|/MSE %.2g", r.mae, r.rmae, r.mse,
                  r.rmse, worst)};
}

// 2. Linear regression recovers known weights.
Outcome linear_recovery() {
  Rng rng(2);
  std::vector<double> w(90);
  for (auto& v : w) v = rng.uniform(-1e-3, 1e-3);
  const double b = -0.004;
  const auto truth = [&](std::span<const double> x) {
    double y = b;
    for (std::size_t j = 0; j < w.size(); ++j) y += w[j] * x[j];
    return y;
  };
  const auto ds = testing::synthetic_dataset(1000, 90, 3, truth);
  const auto m = models::fit_linear(ds);
  double worst = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) worst = std::max(worst, std::abs(m.weights[j] - w[j]));
  const double mae = models::evaluate(predictor(m), ds).mae;
  return {worst < 1e-6 && mae < 1e-8, fmt("max|dW| %.3g, training MAE %.3g", worst, mae)};
}

// 3. Backprop against central differences.
Outcome gradient_check() {
  Rng rng(3);
  std::size_t mismatches = 0, params = 0;
  double worst_rel = 0.0, worst_abs = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto r = testing::check_random_network(rng, {6, 5, 4, 3, 2, 1}, 1e-5, 1e-4, 1e-7);
    mismatches += r.mismatches;
    params += r.parameters;
    worst_rel = std::max(worst_rel, r.worst_rel);
    worst_abs = std::max(worst_abs, r.worst_abs);
  }
  return {mismatches == 0, fmt("50 nets, %zu parameters, %zu mismatches, worst abs %.3g, worst rel above floor %.3g",
                               params, mismatches, worst_abs, worst_rel)};
}

// 4. Adam's bias-corrected first step.
Outcome adam_first_step() {
  const models::AdamConfig cfg;
  double worst = 0.0;
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double g = rng.normal() * std::pow(10.0, rng.uniform(-6, 2));
    const double p0 = rng.normal();
    std::vector<double> p{p0};
    models::AdamState st(1);
    models::adam_step(p, std::vector<double>{g}, st, cfg);
    const double m_hat = g, v_hat = g * g;
    const double want = p0 - cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    worst = std::max(worst, std::abs(p[0] - want));
  }
  return {worst <= 1e-12, fmt("worst |step error| %.3g over 100 gradients", worst)};
}

// 5. Nonlinear model beats the linear one on a synthetic fleet.
Outcome model_ordering() {
  pipeline::PipelineConfig c;
  c.seed = 7;
  c.fleet.n_vehicles = 10;
  c.fleet.trips_per_vehicle = 100;
  c.fleet.min_trip_minutes = 20;
  c.fleet.max_trip_minutes = 60;
  c.sync_seeds();
  const auto split = pipeline::split_dataset(pipeline::synth_dataset(c.fleet), c);
  const auto a = models::fit_linear(split.train);
  const auto b = models::train_mlp(split.train, c.train).model;
  const auto ra = models::evaluate(predictor(a), split.valid);
  const auto rb = models::evaluate(predictor(b), split.valid);
  const bool ok = rb.mae < ra.mae && rb.rmae < ra.rmae && rb.mse < ra.mse && rb.rmse < ra.rmse && rb.rmae < 0.10;
  return {ok, fmt("train %zu / valid %zu sections; A: MAE %.3g RMAE %.4f MSE %.3g RMSE %.3g; "
                  "B: MAE %.3g RMAE %.4f MSE %.3g RMSE %.3g",
                  split.train.size(), split.valid.size(), ra.mae, ra.rmae, ra.mse, ra.rmse, rb.mae, rb.rmae, rb.mse,
                  rb.rmse)};
}

// 6. Label extraction against the generator's oracle.
Outcome label_conformance() {
  synthfleet::FleetConfig fc;
  fc.n_vehicles = 2;
  fc.trips_per_vehicle = 3;
  fc.seed = 6;
  const auto trips = synthfleet::generate_fleet(fc);
  Rng rng(6);
  double worst = 0.0;
  int checked = 0;
  while (checked < 1000) {
    const auto& t = trips[rng.below(trips.size())];
    const auto t0 = t.start_ms + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(t.end_ms - t.start_ms)));
    const auto t1 = t0 + 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(t.end_ms - t0)));
    const auto got = features::label_section(t, t0, t1);
    if (!std::holds_alternative<double>(got)) continue;  // parked window
    const double want = synthfleet::oracle_gamma(t, t0, t1);
    worst = std::max(worst, std::abs(std::get<double>(got) - want));
    ++checked;
  }
  return {worst <= 1e-12, fmt("1000 windows, worst |dGamma| %.3g", worst)};
}

// 7. Broker/recorder loopback, codec and topic matcher.
Outcome ingestion() {
  using namespace ingest;
  bool ok = true;
  std::string detail;

  synthfleet::FleetConfig fc;
  fc.n_vehicles = 1;
  fc.trips_per_vehicle = 1;
  fc.seed = 70;
  const auto trip = synthfleet::generate_fleet(fc).front();
  {
    Broker broker;
    broker.start({"127.0.0.1", 0});
    std::mutex mu;
    std::vector<core::Trip> got;
    Recorder rec(broker.endpoint(), TopicFilter::parse("fleet/#"), [&](const core::Trip& t) {
      std::lock_guard lock(mu);
      got.push_back(t);
    });
    const auto n = gateway_replay(trip, broker.endpoint());
    const bool arrived = rec.wait_for_samples(n, std::chrono::seconds(60));
    rec.stop();
    const bool equal = arrived && got.size() == 1 && core::bitwise_equal(got[0], trip);
    ok = ok && equal;
    detail += fmt("loopback %zu publishes %s; ", n, equal ? "identical" : "DIFFERENT");
  }

  Rng rng(7);
  std::size_t codec_bad = 0;
  for (int i = 0; i < 10'000; ++i) {
    Frame f;
    if (i % 2 == 0) {
      const Telemetry tv{static_cast<std::int64_t>(rng.next_u64() >> 1), rng.normal(0.0, 1e3)};
      f = make_publish("fleet/v" + std::to_string(rng.below(100)) + "/signal/soc", encode_telemetry(tv));
      const auto back = parse_publish(decode_frame(encode_frame(f)));
      const auto tb = decode_telemetry(back.payload);
      if (tb.t_ms != tv.t_ms || std::memcmp(&tb.value, &tv.value, sizeof(double)) != 0) ++codec_bad;
    } else {
      f.type = static_cast<MsgType>(1 + rng.below(8));
      f.body.resize(rng.below(256));
      for (auto& b : f.body) b = static_cast<std::uint8_t>(rng.below(256));
    }
    if (!(decode_frame(encode_frame(f)) == f)) ++codec_bad;
  }
  ok = ok && codec_bad == 0;
  detail += fmt("codec 10000 frames, %zu bad; ", codec_bad);

  std::size_t disagree = 0, matched = 0;
  for (int i = 0; i < 10'000; ++i) {
    const auto filter = testing::random_filter(rng);
    const auto topic = testing::random_topic(rng);
    const bool want = testing::reference_match(filter, topic);
    matched += want;
    if (TopicFilter::parse(filter).matches(topic) != want) ++disagree;
  }
  ok = ok && disagree == 0;
  detail += fmt("matcher 10000 pairs (%zu matches), %zu disagreements", matched, disagree);
  return {ok, detail};
}

// 8. Aging detection over 20 seeded fleets.
Outcome aging_detection() {
  int fresh_flagged = 0, aged_flagged = 0;
  double fresh_max_z = -1e300, aged_min_z = 1e300;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    pipeline::PipelineConfig c;
    c.seed = seed;
    c.fleet.n_vehicles = 20;
    c.fleet.trips_per_vehicle = 50;
    c.fleet.min_trip_minutes = 20;
    c.fleet.max_trip_minutes = 60;
    c.sync_seeds();
    const auto split = pipeline::split_dataset(pipeline::synth_dataset(c.fleet), c);
    const auto model = models::train_mlp(split.train, c.train).model;
    const auto predict = predictor(model);
    const auto baseline = agingwatch::build_baseline(predict, split.valid);

    // One vehicle outside the fleet, driven twice over the same routes.
    auto unseen = c.fleet;
    unseen.trips_per_vehicle = 20;
    unseen.min_trip_minutes = 8;
    unseen.max_trip_minutes = 14;
    const auto sections = [&](double ilf) {
      features::DatasetBuilder b;
      for (const auto& t : synthfleet::generate_vehicle_trips(unseen, c.fleet.n_vehicles, ilf)) b.add_trip(t);
      return std::move(b).finish();
    };
    const auto fresh = agingwatch::assess_vehicle(predict, baseline, sections(1.0), 3.0);
    const auto aged = agingwatch::assess_vehicle(predict, baseline, sections(1.2), 3.0);
    fresh_flagged += fresh.flagged;
    aged_flagged += aged.flagged;
    fresh_max_z = std::max(fresh_max_z, fresh.z_score);
    aged_min_z = std::min(aged_min_z, aged.z_score);
  }
  const bool ok = fresh_flagged <= 1 && aged_flagged >= 19;
  return {ok, fmt("fresh flagged %d/20 (max z %.2f), aged flagged %d/20 (min z %.2f)", fresh_flagged, fresh_max_z,
                  aged_flagged, aged_min_z)};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// 9. Two identical pipeline runs give identical bytes.
Outcome determinism() {
  testing::TempDir a("evf_accept_a"), b("evf_accept_b");
  for (const auto* dir : {&a, &b}) {
    pipeline::PipelineConfig c;
    c.seed = 9;
    c.fleet.n_vehicles = 5;
    c.fleet.trips_per_vehicle = 6;
    c.train.epochs = 10;
    c.sync_seeds();
    c.root = dir->path();
    pipeline::run_synth(c);
    pipeline::run_extract(c);
    pipeline::run_train(c);
    pipeline::run_eval(c);
  }
  bool ok = true;
  std::string detail;
  for (const auto& f : {std::string(pipeline::kDatasetFile), pipeline::model_file(pipeline::ModelKind::Linear),
                        pipeline::model_file(pipeline::ModelKind::Mlp), pipeline::report_file(pipeline::ModelKind::Linear),
                        pipeline::report_file(pipeline::ModelKind::Mlp)}) {
    const auto x = slurp(a.path() / "_artifacts" / f);
    const bool same = !x.empty() && x == slurp(b.path() / "_artifacts" / f);
    ok = ok && same;
    detail += f + (same ? " same; " : " DIFFERS; ");
  }
  return {ok, detail};
}

// 10. Section and feature counts on clean trips.
Outcome feature_counts() {
  constexpr std::int64_t kStart = 1'700'000'000'000;
  const auto long_trip = testing::cruise_trip("v01", kStart, testing::samples_for_minutes(13));
  const auto short_trip = testing::cruise_trip("v01", kStart, testing::samples_for_minutes(5));

  features::DatasetBuilder builder;
  const auto kept = builder.add_trip(long_trip);
  const auto ds = std::move(builder).finish();
  bool finite = true;
  for (const auto& s : ds.samples()) {
    finite = finite && s.x.size() == 90;
    for (double v : s.x) finite = finite && std::isfinite(v);
  }

  features::DatasetBuilder short_builder;
  const auto kept_short = short_builder.add_trip(short_trip);
  const auto verdict = core::validate_trip(short_trip);
  const bool too_short =
      verdict.status == core::TripStatus::TooShort && short_builder.discards().trips_too_short == 1;
  const bool ok = kept == 2 && ds.size() == 2 && finite && kept_short == 0 && too_short;
  return {ok, fmt("13 min: %zu sections x %zu features%s; 5 min: %zu sections%s", kept, ds.feature_count(),
                  finite ? " finite" : " NOT FINITE", kept_short, too_short ? ", TooShort" : ", not TooShort")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"metric suite", metrics},
      {"linear recovery", linear_recovery},
      {"gradient check", gradient_check},
      {"adam first step", adam_first_step},
      {"model ordering", model_ordering},
      {"label conformance", label_conformance},
      {"ingestion loopback", ingestion},
      {"aging detection", aging_detection},
      {"determinism", determinism},
      {"feature counts", feature_counts},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i + 1);
    if (!only.empty() && !only.contains(n)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s  %s: %s (%.1f s)\n", n, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
