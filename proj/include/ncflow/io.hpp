// Copyright 2026 The ncflow Authors
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

#ifndef NCFLOW_IO_HPP
#define NCFLOW_IO_HPP

/*
 *  File formats.
 *
 *  CMatrix JSON    {"n": int, "entries": [[re, im], ...]}  row-major, n*n pairs
 *  Geometry JSON   {"n", "m", "q": [re, im], "u", "v", "x", "y"}  (CMatrix JSON)
 *  Trajectory CSV  t, c_re_j_k, c_im_j_k (row-major over j, k), trace, det,
 *                  min_eig, dist_to_flat
 *  Spectrum JSON   {"t"?, "eigenvalues": [...], "eigenvectors_Hc": [CMatrix JSON...]}
 *  Curves CSV      t, curve_id, lambda, lambda_dot_fd, variation_rhs, residual,
 *                  min_gap, degenerate_flag
 *
 *  Doubles are written in shortest round-trip form, so identical values give
 *  identical bytes.
 */

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncflow/flow.hpp"
#include "ncflow/laplace_beltrami.hpp"
#include "ncflow/torus.hpp"
#include "ncflow/tracking.hpp"

namespace ncflow {

using Json = nlohmann::ordered_json;

std::string format_double(double x);

Json cmatrix_to_json(const CMatrix& a);
CMatrix cmatrix_from_json(const Json& j);

Json geometry_to_json(const TorusGeometry& g);
/// Loads matrices exactly as stored; relations are not checked here.
TorusGeometry geometry_from_json(const Json& j);

std::string trajectory_csv(const FlowTrajectory& traj);
Json trajectory_json(const FlowTrajectory& traj);

Json spectrum_json(const SpectralData& spec, std::optional<double> t = std::nullopt);

std::string curves_csv(const VariationReport& report);
Json report_json(const VariationReport& report, double residual_threshold);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace ncflow

#endif
