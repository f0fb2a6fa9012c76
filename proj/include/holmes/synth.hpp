#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "holmes/event.hpp"

namespace holmes {

enum class AnomalyKind { novel_sender_phish, account_takeover_burst, malvertisement_blast };

std::string_view to_string(AnomalyKind kind);
AnomalyKind parse_anomaly_kind(std::string_view text);  // throws InvalidSpec

struct AnomalySpec {
  AnomalyKind kind = AnomalyKind::novel_sender_phish;
  int count = 1;
  // Offsets from the corpus start, half-open.
  Duration window_begin{0};
  Duration window_end{24 * 3600};
};

struct GeneratorSpec {
  int n_senders = 50;
  int recipients_per_sender = 10;
  int events_per_relation_per_day = 20;
  int subject_pool_size = 3;
  std::vector<std::string> baseline_countries = {"US", "GB", "DE", "FR",
                                                 "NL", "SG", "JP", "AU"};
  Duration duration{2 * 24 * 3600};
  Timestamp start = Timestamp{std::chrono::sys_days{std::chrono::year{2020} /
                                                    std::chrono::December / 1}};
  std::vector<AnomalySpec> anomalies;
  std::uint64_t seed = 1;

  void validate() const;  // throws InvalidSpec
};

enum class Label { benign, anomalous };

std::string_view to_string(Label label);

struct LabeledCorpus {
  Corpus corpus;
  std::map<std::string, Label> labels;  // event_id -> label
};

// Baseline traffic: every (sender, recipient) relation repeats
// events_per_relation_per_day times per day with the sender's stable IP,
// country, user agent and a subject from its small pool. Each injected
// anomaly has a fresh sender, an IP from a country outside
// baseline_countries and a unique subject. Deterministic for a fixed seed.
LabeledCorpus generate(const GeneratorSpec& spec);

// {"event_id": ..., "label": "benign" | "anomalous"} per line, corpus order.
void write_labels(const LabeledCorpus& data, std::ostream& out);
void write_labels(const LabeledCorpus& data, const std::filesystem::path& path);
std::map<std::string, Label> read_labels(const std::filesystem::path& path);

}  // namespace holmes
