#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "holmes/event.hpp"

namespace holmes {

enum class SourceKind { batch_file, line_stream };

// Yields events in non-decreasing timestamp order.
class EventSource {
 public:
  virtual ~EventSource() = default;
  virtual SourceKind kind() const = 0;
  // std::nullopt once the source is exhausted.
  virtual std::optional<EmailEvent> next() = 0;
};

// Replays a fully loaded (and therefore sorted) corpus.
class BatchFileSource final : public EventSource {
 public:
  explicit BatchFileSource(Corpus corpus) : corpus_(std::move(corpus)) {}
  explicit BatchFileSource(const std::filesystem::path& path);

  SourceKind kind() const override { return SourceKind::batch_file; }
  std::optional<EmailEvent> next() override;

 private:
  Corpus corpus_;
  std::size_t position_ = 0;
};

// Parses JSONL events from a byte stream as they arrive. Events may arrive
// up to `lateness` behind the newest timestamp seen; they are reordered
// before release. Anything later raises OutOfOrderEvent.
class LineStreamSource final : public EventSource {
 public:
  explicit LineStreamSource(std::istream& in, Duration lateness = Duration{0},
                            std::string label = "stream");

  SourceKind kind() const override { return SourceKind::line_stream; }
  std::optional<EmailEvent> next() override;

  std::size_t lines_read() const { return line_no_; }

 private:
  struct Pending {
    EmailEvent event;
    std::uint64_t arrival;
  };
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const {
      if (a.event.timestamp != b.event.timestamp) {
        return a.event.timestamp > b.event.timestamp;
      }
      return a.arrival > b.arrival;
    }
  };

  bool read_one();
  bool releasable() const;

  std::istream& in_;
  Duration lateness_;
  std::string label_;
  std::size_t line_no_ = 0;
  std::uint64_t arrivals_ = 0;
  bool eof_ = false;
  std::optional<Timestamp> newest_;
  std::priority_queue<Pending, std::vector<Pending>, Later> pending_;
};

// Copies JSONL lines from `in` to `out`, one LF-terminated line at a time,
// pacing to `lines_per_second` when it is positive. Returns lines written.
std::size_t replay_lines(std::istream& in, std::ostream& out,
                         double lines_per_second = 0.0);

}  // namespace holmes
