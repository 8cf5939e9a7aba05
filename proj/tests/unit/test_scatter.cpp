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

#include <gtest/gtest.h>

#include <regex>

#include "evfleet/pipeline/scatter.hpp"
#include "evfleet/util/rng.hpp"
#include "fixtures.hpp"

namespace evfleet {
namespace {

using namespace pipeline;
using testing::error_of;

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = s.find(needle); at != std::string::npos; at = s.find(needle, at + 1)) ++n;
  return n;
}

TEST(Scatter, AxesAreEqualSoTheIdentityIsTheDiagonal) {
  const std::vector<double> g{-0.006, -0.002, -0.004};
  const std::vector<double> gh{-0.0055, -0.0025, -0.004};
  const auto ax = scatter_axes(g, gh);
  for (double v : {-0.006, -0.004, -0.002}) {
    // Pixel (x, y) of (v, v) sits on the plot's anti-diagonal in SVG space.
    EXPECT_NEAR(ax.x_px(v) - ax.layout.margin_px, ax.layout.margin_px + ax.layout.size_px - ax.y_px(v), 1e-9);
  }
  EXPECT_LT(ax.lo, -0.006);
  EXPECT_GT(ax.hi, -0.002);
}

TEST(Scatter, BandLinesSitAtFivePercent) {
  const std::vector<double> g{-0.006, -0.002};
  const auto svg = render_scatter(g, g);
  EXPECT_EQ(count(svg, "class=\"identity\""), 1u);
  EXPECT_EQ(count(svg, "class=\"band\""), 2u);
  EXPECT_EQ(count(svg, "stroke-dasharray"), 2u);

  const auto ax = scatter_axes(g, g);
  std::smatch m;
  const std::regex band(R"re(<line x1="([-0-9.]+)" y1="([-0-9.]+)" x2="[-0-9.]+" y2="[-0-9.]+" class="band")re");
  ASSERT_TRUE(std::regex_search(svg, m, band));
  EXPECT_NEAR(std::stod(m[2]), ax.y_px(1.05 * ax.lo), 1e-3);
}

TEST(Scatter, OneRedCirclePerPair) {
  Rng rng(4);
  std::vector<double> g(500), gh(500);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = rng.normal(-0.004, 0.001);
    gh[i] = g[i] * rng.uniform(0.9, 1.1);
  }
  const auto svg = render_scatter(g, gh, "model <b>");
  EXPECT_EQ(count(svg, "<circle "), 500u);
  EXPECT_NE(svg.find("fill=\"red\""), std::string::npos);
  EXPECT_NE(svg.find("model &lt;b&gt;"), std::string::npos);
  EXPECT_EQ(svg, render_scatter(g, gh, "model <b>"));
}

TEST(Scatter, RejectsEmptyAndMismatchedInput) {
  EXPECT_EQ(error_of([] { render_scatter({}, {}); }), "models.EvalError");
  const std::vector<double> a{1.0}, b{1.0, 2.0};
  EXPECT_EQ(error_of([&] { render_scatter(a, b); }), "models.EvalError");
}

TEST(Scatter, WritesTheFile) {
  testing::TempDir dir;
  const std::vector<double> g{-0.003};
  write_scatter(dir.path() / "s.svg", g, g);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "s.svg"));
  EXPECT_EQ(error_of([&] { write_scatter(dir.path() / "missing" / "s.svg", g, g); }), "store.IoError");
}

}  // namespace
}  // namespace evfleet
