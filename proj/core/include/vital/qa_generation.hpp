#pragma once

#include <string>
#include <vector>

#include "vital/qa.hpp"
#include "vital/stores.hpp"

namespace vital {

struct QAGenConfig {
  std::size_t per_cell = 12;
  std::size_t tier_b_windows = 12;  // states per Tier B monitoring window
  std::size_t tier_b_stride = 2;    // start offset between candidate spans, in states
};

struct QACell {
  Tier tier;
  QType qtype;
  std::string target;
};

/// The ten (tier, qtype, target) cells, Tier A first.
const std::vector<QACell>& qa_cells();

struct QAGenResult {
  std::vector<QAExample> examples;
  std::vector<std::string> report;  // skipped or short cells
};

/// Template questions with answers read from the states: Tier A from one
/// window state, Tier B from aggregates over consecutive states. AF
/// answers use the hidden rhythm_class, so the store must be unfiltered.
/// Yes/no and option cells are filled round-robin over answer groups.
QAGenResult generate_synthetic_qa(const StateStore& states, const QAGenConfig& cfg = {});

/// Decimal with trailing zeros trimmed at one place ("72", "72.4").
std::string format_decimal(double v);

}  // namespace vital
