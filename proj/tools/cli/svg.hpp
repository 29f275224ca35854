/**
 * Copyright 2026 The mmgauss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mmg::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained line plot: one polyline per series, axes with end labels.
void write_svg(std::ostream& out, const std::string& title, const std::string& x_label,
               const std::string& y_label, const std::vector<Series>& series);

}  // namespace mmg::cli
