#include "holmes/stream.hpp"

#include <chrono>
#include <istream>
#include <ostream>
#include <thread>

#include "holmes/error.hpp"
#include "holmes/text.hpp"

namespace holmes {

BatchFileSource::BatchFileSource(const std::filesystem::path& path)
    : corpus_(read_corpus(path)) {}

std::optional<EmailEvent> BatchFileSource::next() {
  if (position_ >= corpus_.events.size()) return std::nullopt;
  return corpus_.events[position_++];
}

LineStreamSource::LineStreamSource(std::istream& in, Duration lateness,
                                   std::string label)
    : in_(in), lateness_(lateness), label_(std::move(label)) {
  if (lateness_ < Duration{0}) {
    throw Error(ErrorCode::InvalidParams, "lateness must be >= 0");
  }
}

bool LineStreamSource::read_one() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    EmailEvent e;
    try {
      e = parse_event_line(line);
    } catch (const Error& ex) {
      throw Error(ex.code(), label_ + ":" + std::to_string(line_no_) + ": " + ex.what());
    }
    if (newest_ && e.timestamp + lateness_ < *newest_) {
      throw Error(ErrorCode::OutOfOrderEvent,
                  label_ + ":" + std::to_string(line_no_) + ": event '" +
                      e.event_id + "' at " + format_iso8601(e.timestamp) +
                      " arrived after " + format_iso8601(*newest_));
    }
    if (!newest_ || e.timestamp > *newest_) newest_ = e.timestamp;
    pending_.push({std::move(e), arrivals_++});
    return true;
  }
  if (in_.bad()) throw Error(ErrorCode::IoError, label_ + ": read failed");
  eof_ = true;
  return false;
}

bool LineStreamSource::releasable() const {
  if (pending_.empty()) return false;
  if (eof_) return true;
  return pending_.top().event.timestamp + lateness_ <= *newest_;
}

std::optional<EmailEvent> LineStreamSource::next() {
  // With zero lateness every buffered event is immediately releasable.
  while (!releasable()) {
    if (eof_ || !read_one()) break;
  }
  if (pending_.empty()) return std::nullopt;
  EmailEvent e = pending_.top().event;
  pending_.pop();
  return e;
}

std::size_t replay_lines(std::istream& in, std::ostream& out, double lines_per_second) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  std::size_t written = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    if (lines_per_second > 0.0) {
      const auto due = start + std::chrono::duration_cast<clock::duration>(
                                   std::chrono::duration<double>(
                                       static_cast<double>(written) / lines_per_second));
      std::this_thread::sleep_until(due);
    }
    out << line << '\n';
    if (!out) throw Error(ErrorCode::ConnectionFailed, "write to stream failed");
    ++written;
  }
  out.flush();
  if (!out) throw Error(ErrorCode::ConnectionFailed, "write to stream failed");
  return written;
}

}  // namespace holmes
