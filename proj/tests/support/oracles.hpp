#pragma once

// Brute-force reference implementations. Written from the definitions,
// without sharing code or algebraic shortcuts with the library.

#include <optional>
#include <vector>

namespace oracle {

std::optional<double> heart_rate(const std::vector<double>& rr);
std::optional<double> sdnn_ms(const std::vector<double>& rr);
std::optional<double> rmssd_ms(const std::vector<double>& rr);
std::optional<double> cv(const std::vector<double>& rr);
/// Bin lookup by scanning explicit edges; out-of-range values clamp.
std::optional<double> delta_rr_entropy(const std::vector<double>& rr, int bins = 16, double half_range_s = 0.6);
std::optional<double> turning_point_ratio(const std::vector<double>& rr);

/// Two-sided relative comparison with an absolute floor for values near 0.
bool close(double a, double b, double rel = 1e-9, double abs_floor = 1e-12);

}  // namespace oracle
