#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "curvekit/frenet.hpp"
#include "curvekit/generating.hpp"
#include "curvekit/mannheim.hpp"
#include "curvekit/profile.hpp"
#include "curvekit/sampled_curve.hpp"

namespace curvekit::io {

// All writers format doubles with 17 significant digits, '\n' line endings,
// and replace the target file atomically (temp file + rename).

std::string format_double(double value);
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Curve CSV: header `s,x,y,z`.
std::string curve_to_csv(const SampledCurve& curve);
SampledCurve curve_from_csv(const std::string& text);
void write_curve_csv(const std::string& path, const SampledCurve& curve);
SampledCurve read_curve_csv(const std::string& path);

// Apparatus CSV: header `s,x,y,z,tx,ty,tz,nx,ny,nz,bx,by,bz,kappa,tau`.
// The point columns are optional on the apparatus type, so writing takes the
// curve alongside.
std::string apparatus_to_csv(const SampledCurve& curve, const FrenetApparatus& app);
FrenetApparatus apparatus_from_csv(const std::string& text);
void write_apparatus_csv(const std::string& path, const SampledCurve& curve,
                         const FrenetApparatus& app);
FrenetApparatus read_apparatus_csv(const std::string& path);

// Profile JSON:
//   {"kind":"named","family":"helix","params":{"a":2,"b":1},"s_max":10,"step":0.001}
//   {"kind":"tabulated","grid":[...],"kappa":[...],"tau":[...],"step":0.001}
struct ProfileSpec {
    CurvatureProfile profile;
    std::optional<double> step;
};

ProfileSpec profile_from_json(const nlohmann::json& j);
ProfileSpec read_profile_json(const std::string& path);

// Report JSON with the exact key set
//   {"verdict","lambda_fit","residual_max","collinearity_max","epsilon",
//    "sign_convention","tolerances"}.
nlohmann::json report_to_json(const MannheimReport& report);

// Classification JSON: {"label","R","theta0","fit_residual"}.
nlohmann::json classification_to_json(const ClassificationResult& result);

// Three-panel orthographic SVG (xy, xz, yz) with an optional overlay curve.
std::string projection_svg(const SampledCurve& curve, const SampledCurve* overlay);
void write_projection_svg(const std::string& path, const SampledCurve& curve,
                          const SampledCurve* overlay = nullptr);

} // namespace curvekit::io
