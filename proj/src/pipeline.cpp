#include "holmes/pipeline.hpp"

#include <deque>
#include <unordered_set>

#include "holmes/error.hpp"
#include "holmes/featurizer.hpp"

namespace holmes {

void WindowConfig::validate() const {
  if (train_duration <= Duration{0} || detect_duration <= Duration{0}) {
    throw Error(ErrorCode::InvalidParams, "window durations must be positive");
  }
  if (rareness_threshold < 0) {
    throw Error(ErrorCode::InvalidParams, "rareness threshold must be >= 0");
  }
  embedding.validate();
  novelty.validate();
}

namespace {

WindowBounds span_of(const std::vector<EmailEvent>& events) {
  Timestamp lo = events.front().timestamp;
  Timestamp hi = lo;
  for (const auto& e : events) {
    lo = std::min(lo, e.timestamp);
    hi = std::max(hi, e.timestamp);
  }
  return {lo, hi + Duration{1}};
}

}  // namespace

DetectionReport run_cycle(const std::vector<EmailEvent>& train,
                          const std::vector<EmailEvent>& detect,
                          const WindowConfig& cfg,
                          std::optional<WindowBounds> train_window,
                          std::optional<WindowBounds> detect_window,
                          const CycleHooks* hooks) {
  cfg.validate();
  const auto k = static_cast<std::size_t>(cfg.novelty.n_neighbors);
  if (train.size() <= k) {
    throw Error(ErrorCode::TooFewTrainingEvents,
                std::to_string(train.size()) + " training events, need more than " +
                    std::to_string(k));
  }
  if (detect.empty()) throw Error(ErrorCode::EmptyDetectWindow, "no events to score");

  DetectionReport report;
  report.train_window = train_window.value_or(span_of(train));
  report.detect_window = detect_window.value_or(span_of(detect));
  report.counts.train_events = train.size();
  report.counts.detect_events = detect.size();

  std::vector<EmailEvent> all;
  all.reserve(train.size() + detect.size());
  all.insert(all.end(), train.begin(), train.end());
  all.insert(all.end(), detect.begin(), detect.end());
  const auto vectors = train_embedding(featurize_all(all), cfg.embedding);
  if (hooks != nullptr && hooks->on_vectors) hooks->on_vectors(report, vectors);

  const std::vector<DocVector> train_vectors(vectors.begin(),
                                             vectors.begin() + static_cast<std::ptrdiff_t>(train.size()));
  const std::vector<DocVector> detect_vectors(
      vectors.begin() + static_cast<std::ptrdiff_t>(train.size()), vectors.end());

  const NoveltyModel model = fit_novelty(train_vectors, cfg.novelty, cfg.execution);
  const auto scores = decision_scores(model, detect_vectors, cfg.execution);

  // Positional, since event ids are not guaranteed unique across the two lists.
  std::vector<EmailEvent> novel;
  std::vector<double> novel_scores;
  for (std::size_t i = 0; i < detect.size(); ++i) {
    if (scores[i].score < cfg.novelty.decision_threshold) {
      novel.push_back(detect[i]);
      novel_scores.push_back(scores[i].score);
    }
  }
  report.counts.novel = novel.size();

  const auto rare = select_rare(novel, cfg.rareness_threshold);
  std::unordered_set<std::string> rare_keys;
  for (const auto& e : rare) rare_keys.insert(relation_key(e).joined());
  // select_rare keeps whole relation groups, so membership by key is exact.
  for (std::size_t i = 0; i < novel.size(); ++i) {
    const EmailEvent& e = novel[i];
    if (!rare_keys.contains(relation_key(e).joined())) continue;
    report.flagged.push_back({e.event_id, novel_scores[i], relation_key(e), e.subject,
                              e.src_ip, e.src_country});
  }
  report.counts.rare = report.flagged.size();
  report.graph = build_graph(rare, cfg.execution);
  return report;
}

namespace {

class RollingDetector {
 public:
  RollingDetector(const WindowConfig& cfg, const ReportSink& sink, const CycleHooks* hooks)
      : cfg_(cfg), sink_(sink), hooks_(hooks) {}

  void push(EmailEvent e) {
    if (!started_) {
      window_start_ = floor_to(e.timestamp, cfg_.detect_duration);
      started_ = true;
    }
    if (e.timestamp < window_start_) {
      throw Error(ErrorCode::OutOfOrderEvent,
                  "event '" + e.event_id + "' precedes the open window");
    }
    while (e.timestamp >= window_start_ + cfg_.detect_duration) close_window();
    current_.push_back(std::move(e));
  }

  void finish() {
    if (started_ && !current_.empty()) close_window();
  }

  std::size_t emitted() const { return emitted_; }

 private:
  void close_window() {
    const WindowBounds detect{window_start_, window_start_ + cfg_.detect_duration};
    const WindowBounds train{detect.start - cfg_.train_duration, detect.start};
    if (window_index_ > 0) emit(train, detect);

    for (auto& e : current_) history_.push_back(std::move(e));
    current_.clear();
    window_start_ = detect.end;
    ++window_index_;
    const Timestamp horizon = window_start_ - cfg_.train_duration;
    while (!history_.empty() && history_.front().timestamp < horizon) {
      history_.pop_front();
    }
  }

  void emit(const WindowBounds& train_bounds, const WindowBounds& detect_bounds) {
    std::vector<EmailEvent> train;
    for (const auto& e : history_) {
      if (e.timestamp >= train_bounds.start && e.timestamp < train_bounds.end) {
        train.push_back(e);
      }
    }
    DetectionReport report;
    if (current_.empty()) {
      report.train_window = train_bounds;
      report.detect_window = detect_bounds;
      report.counts.train_events = train.size();
    } else {
      report = run_cycle(train, current_, cfg_, train_bounds, detect_bounds, hooks_);
    }
    sink_(report);
    ++emitted_;
  }

  const WindowConfig& cfg_;
  const ReportSink& sink_;
  const CycleHooks* hooks_;
  bool started_ = false;
  Timestamp window_start_{};
  std::size_t window_index_ = 0;
  std::size_t emitted_ = 0;
  std::deque<EmailEvent> history_;
  std::vector<EmailEvent> current_;
};

}  // namespace

std::size_t run_rolling(EventSource& source, const WindowConfig& cfg,
                        const ReportSink& sink, const CycleHooks* hooks) {
  cfg.validate();
  RollingDetector detector(cfg, sink, hooks);
  while (auto e = source.next()) detector.push(std::move(*e));
  detector.finish();
  return detector.emitted();
}

std::vector<DetectionReport> run_rolling(EventSource& source, const WindowConfig& cfg) {
  std::vector<DetectionReport> reports;
  run_rolling(source, cfg, [&](const DetectionReport& r) { reports.push_back(r); });
  return reports;
}

}  // namespace holmes
