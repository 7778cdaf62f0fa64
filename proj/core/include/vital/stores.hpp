#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vital/signal.hpp"
#include "vital/state.hpp"

namespace vital {

/// Canonical windows indexed by (dataset, patient), ordered by start time.
class WindowStore {
 public:
  void add(SampleWindow w);
  void add_all(std::span<const SampleWindow> ws);
  /// One SampleWindow per JSONL line; schema violations raise ParseError
  /// naming the line.
  static WindowStore load_jsonl(const std::filesystem::path& path);

  std::vector<std::string> patients(std::optional<Dataset> dataset = std::nullopt,
                                    std::optional<Modality> modality = std::nullopt) const;
  const std::vector<SampleWindow>* windows(Dataset dataset, const std::string& patient_id) const;
  /// Searches every dataset for the patient.
  const std::vector<SampleWindow>* windows(const std::string& patient_id) const;

  /// Stored windows fully inside [start_s, end_s].
  std::vector<const SampleWindow*> range(Dataset dataset, const std::string& patient_id, double start_s,
                                         double end_s) const;

  /// Concatenates the contiguous stored windows covering [start_s, end_s]
  /// into one window. Throws IntegrityError when the span is not covered.
  SampleWindow extract(Dataset dataset, const std::string& patient_id, double start_s, double end_s) const;

  std::size_t size() const;

 private:
  std::map<std::pair<Dataset, std::string>, std::vector<SampleWindow>> by_key_;
};

/// Monitoring-state logs per patient, as produced by the monitor.
class StateStore {
 public:
  void put(const std::string& patient_id, std::vector<MonitoringState> states);
  /// Reads <dir>/<patient>/states.jsonl for every patient subdirectory.
  static StateStore load_dir(const std::filesystem::path& dir);
  static StateStore from_jsonl(const std::filesystem::path& path);

  std::vector<std::string> patients() const;
  const std::vector<MonitoringState>* states(const std::string& patient_id) const;
  /// States whose window lies inside [start_s, end_s].
  std::vector<MonitoringState> range(const std::string& patient_id, double start_s, double end_s) const;
  /// Leakage-filtered copy of the whole store.
  StateStore fair_view() const;

 private:
  std::map<std::string, std::vector<MonitoringState>> by_patient_;
};

}  // namespace vital
