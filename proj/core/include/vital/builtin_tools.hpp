#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vital/rhythm.hpp"
#include "vital/stores.hpp"
#include "vital/tool_registry.hpp"

namespace vital {

/// Targets each dataset can answer, as reported by
/// state_get_dataset_capabilities.
std::vector<std::string> dataset_supported_targets(Dataset d);
Modality dataset_default_modality(Dataset d);
double dataset_default_window_s(Dataset d);

/// Rhythm screen for the stored window ending at `end_s`, using the same
/// trailing RR context as the streaming monitor.
RhythmAssessment screen_stored_window(const WindowStore& store, const SampleWindow& w, const MonitorConfig& cfg);

}  // namespace vital
