#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holmes/cga.hpp"
#include "holmes/embedding.hpp"
#include "holmes/event.hpp"
#include "holmes/kernels.hpp"
#include "holmes/novelty.hpp"
#include "holmes/rareness.hpp"
#include "holmes/stream.hpp"

namespace holmes {

struct WindowConfig {
  Duration train_duration{24 * 3600};
  Duration detect_duration{24 * 3600};
  EmbeddingParams embedding;
  NoveltyParams novelty;
  int rareness_threshold = 2;
  kernels::Execution execution = kernels::Execution::parallel;

  void validate() const;  // throws InvalidParams
};

// Half-open [start, end).
struct WindowBounds {
  Timestamp start{};
  Timestamp end{};

  friend bool operator==(const WindowBounds&, const WindowBounds&) = default;
};

struct DetectionCounts {
  std::size_t train_events = 0;
  std::size_t detect_events = 0;
  std::size_t novel = 0;
  std::size_t rare = 0;

  friend bool operator==(const DetectionCounts&, const DetectionCounts&) = default;
};

struct FlaggedEvent {
  std::string event_id;
  double score = 0.0;
  RelationKey relation;
  std::string subject;
  std::string src_ip;
  std::string src_country;

  friend bool operator==(const FlaggedEvent&, const FlaggedEvent&) = default;
};

struct DetectionReport {
  WindowBounds train_window;
  WindowBounds detect_window;
  DetectionCounts counts;
  std::vector<FlaggedEvent> flagged;  // detect-window order
  CorrelationGraph graph;

  friend bool operator==(const DetectionReport&, const DetectionReport&) = default;
};

// Optional observers for intermediate stages.
struct CycleHooks {
  // Joint embedding of train followed by detect events.
  std::function<void(const DetectionReport&, const std::vector<DocVector>&)> on_vectors;
};

// One detection cycle: featurize train and detect together, embed jointly,
// fit LOF on the train vectors, score the detect vectors, keep scores below
// the decision threshold, keep rare relations, and link the survivors.
// Bounds default to [first, last + 1s) of each event list.
// Throws TooFewTrainingEvents, EmptyDetectWindow, or any stage error.
DetectionReport run_cycle(const std::vector<EmailEvent>& train,
                          const std::vector<EmailEvent>& detect,
                          const WindowConfig& cfg,
                          std::optional<WindowBounds> train_window = std::nullopt,
                          std::optional<WindowBounds> detect_window = std::nullopt,
                          const CycleHooks* hooks = nullptr);

using ReportSink = std::function<void(const DetectionReport&)>;

// Splits the timeline into consecutive detect_duration windows aligned to
// multiples of detect_duration since the epoch. The first window only
// trains; each later window is scored against the events of the preceding
// train_duration, and its report is handed to `sink` as soon as the window
// closes (a later event arrives or the source ends). A window without
// events yields a report with zero detect events. Returns the number of
// reports emitted.
std::size_t run_rolling(EventSource& source, const WindowConfig& cfg,
                        const ReportSink& sink, const CycleHooks* hooks = nullptr);
std::vector<DetectionReport> run_rolling(EventSource& source, const WindowConfig& cfg);

// Stable-key JSON, one object. Doubles use the shortest round-trip form.
std::string report_to_json(const DetectionReport& report);
DetectionReport report_from_json(std::string_view json);

// "report_<detect-start ISO-8601>.json"
std::string report_filename(const DetectionReport& report);
// "<stem>_<detect-start ISO-8601>.<ext>"
std::string window_filename(const DetectionReport& report, std::string_view stem,
                            std::string_view ext);

}  // namespace holmes
