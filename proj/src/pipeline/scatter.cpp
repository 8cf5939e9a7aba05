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

#include "evfleet/pipeline/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "evfleet/error.hpp"

namespace evfleet::pipeline {
namespace {

std::string fixed(double v, int decimals = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s == "-0.000" || s == "-0.0000" || s == "-0.00000") s.erase(0, 1);
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void check_pairs(std::span<const double> gamma, std::span<const double> gamma_hat) {
  if (gamma.empty()) throw Error(ErrorCode::EvalError, "scatter plot needs at least one pair");
  if (gamma.size() != gamma_hat.size()) throw Error(ErrorCode::EvalError, "label and prediction counts differ");
}

}  // namespace

double ScatterAxes::x_px(double v) const { return layout.margin_px + (v - lo) / (hi - lo) * layout.size_px; }

double ScatterAxes::y_px(double v) const {
  return layout.margin_px + layout.size_px - (v - lo) / (hi - lo) * layout.size_px;
}

ScatterAxes scatter_axes(std::span<const double> gamma, std::span<const double> gamma_hat,
                         const ScatterLayout& layout) {
  check_pairs(gamma, gamma_hat);
  double lo = gamma[0];
  double hi = gamma[0];
  for (auto values : {gamma, gamma_hat}) {
    for (double v : values) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double span = hi - lo;
  const double pad = span > 0.0 ? 0.05 * span : std::max(1e-3, 0.1 * std::abs(lo));
  return ScatterAxes{lo - pad, hi + pad, layout};
}

std::string render_scatter(std::span<const double> gamma, std::span<const double> gamma_hat,
                           const std::string& title, const ScatterLayout& layout) {
  const auto ax = scatter_axes(gamma, gamma_hat, layout);
  const double m = layout.margin_px;
  const double s = layout.size_px;
  const double total = s + 2 * m;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(total, 0) + "\" height=\"" + fixed(total, 0) +
         "\" viewBox=\"0 0 " + fixed(total, 0) + " " + fixed(total, 0) + "\" font-family=\"sans-serif\">\n";
  svg += "<defs><clipPath id=\"plot\"><rect x=\"" + fixed(m) + "\" y=\"" + fixed(m) + "\" width=\"" + fixed(s) +
         "\" height=\"" + fixed(s) + "\"/></clipPath></defs>\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fixed(total, 0) + "\" height=\"" + fixed(total, 0) + "\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + fixed(m) + "\" y=\"" + fixed(m) + "\" width=\"" + fixed(s) + "\" height=\"" + fixed(s) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!title.empty()) {
    svg += "<text x=\"" + fixed(total / 2) + "\" y=\"" + fixed(m / 2) + "\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(title) + "</text>\n";
  }

  // Ticks and grid on both axes (equal scales).
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double v = ax.lo + (ax.hi - ax.lo) * i / kTicks;
    const double x = ax.x_px(v);
    const double y = ax.y_px(v);
    svg += "<line x1=\"" + fixed(x) + "\" y1=\"" + fixed(m + s) + "\" x2=\"" + fixed(x) + "\" y2=\"" + fixed(m + s + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(m + s + 18) + "\" text-anchor=\"middle\" font-size=\"10\">" +
           fixed(v, 4) + "</text>\n";
    svg += "<line x1=\"" + fixed(m - 5) + "\" y1=\"" + fixed(y) + "\" x2=\"" + fixed(m) + "\" y2=\"" + fixed(y) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(m - 8) + "\" y=\"" + fixed(y + 3) + "\" text-anchor=\"end\" font-size=\"10\">" +
           fixed(v, 4) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(m + s / 2) + "\" y=\"" + fixed(m + s + 40) +
         "\" text-anchor=\"middle\" font-size=\"12\">measured Γ [km⁻¹]</text>\n";
  svg += "<text x=\"" + fixed(m / 3) + "\" y=\"" + fixed(m + s / 2) + "\" text-anchor=\"middle\" font-size=\"12\" " +
         "transform=\"rotate(-90 " + fixed(m / 3) + " " + fixed(m + s / 2) + ")\">estimated Γ̂ [km⁻¹]</text>\n";

  auto line = [&](double slope, const char* style) {
    svg += "<line x1=\"" + fixed(ax.x_px(ax.lo)) + "\" y1=\"" + fixed(ax.y_px(slope * ax.lo)) + "\" x2=\"" +
           fixed(ax.x_px(ax.hi)) + "\" y2=\"" + fixed(ax.y_px(slope * ax.hi)) + "\" " + style +
           " clip-path=\"url(#plot)\"/>\n";
  };
  line(1.0, "class=\"identity\" stroke=\"black\" stroke-width=\"1\"");
  line(1.05, "class=\"band\" stroke=\"green\" stroke-width=\"1\" stroke-dasharray=\"6,4\"");
  line(0.95, "class=\"band\" stroke=\"green\" stroke-width=\"1\" stroke-dasharray=\"6,4\"");

  svg += "<g class=\"points\" fill=\"red\">\n";
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    svg += "<circle cx=\"" + fixed(ax.x_px(gamma[i])) + "\" cy=\"" + fixed(ax.y_px(gamma_hat[i])) + "\" r=\"" +
           fixed(layout.point_radius_px, 1) + "\"/>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void write_scatter(const std::filesystem::path& path, std::span<const double> gamma,
                   std::span<const double> gamma_hat, const std::string& title) {
  const auto svg = render_scatter(gamma, gamma_hat, title);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os << svg;
  os.close();
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

}  // namespace evfleet::pipeline
