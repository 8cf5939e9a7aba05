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

#pragma once

#include <filesystem>
#include <span>
#include <string>

namespace evfleet::pipeline {

struct ScatterLayout {
  double size_px = 480.0;    // plot area, square
  double margin_px = 70.0;
  double point_radius_px = 2.5;
};

/// Measured vs estimated Gamma: red points, a solid identity line, dashed
/// lines at +-5% relative error, equal axes in km^-1. Coordinates are
/// printed with three decimals, so identical input gives identical bytes.
/// Throws Error(EvalError) when empty or the spans differ in length.
std::string render_scatter(std::span<const double> gamma, std::span<const double> gamma_hat,
                           const std::string& title = {}, const ScatterLayout& layout = {});

/// Throws Error(IoError) when the file cannot be written.
void write_scatter(const std::filesystem::path& path, std::span<const double> gamma,
                   std::span<const double> gamma_hat, const std::string& title = {});

/// Pixel position of a value on either axis for the given pairs (exposed
/// for tests).
struct ScatterAxes {
  double lo = 0.0;
  double hi = 0.0;
  ScatterLayout layout;

  double x_px(double v) const;
  double y_px(double v) const;
};

ScatterAxes scatter_axes(std::span<const double> gamma, std::span<const double> gamma_hat,
                         const ScatterLayout& layout = {});

}  // namespace evfleet::pipeline
