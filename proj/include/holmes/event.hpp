#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "holmes/time.hpp"

namespace holmes {

enum class Direction { inbound, outbound, internal };

std::string_view to_string(Direction d);
// Throws Error(InvalidValue) for anything but the three enum names.
Direction parse_direction(std::string_view text);

// One normalized email header observation.
struct EmailEvent {
  std::string event_id;
  Timestamp timestamp{};
  std::string src_ip;
  std::string src_country = "ZZ";
  Direction direction = Direction::inbound;
  std::string mail_from;  // lowercased
  std::string mail_to;    // lowercased
  std::string header_from;
  std::string subject;
  std::string user_agent;

  friend bool operator==(const EmailEvent&, const EmailEvent&) = default;
};

bool is_valid_ip(std::string_view text);

// Checks the record invariants; throws Error(InvalidValue).
void validate(const EmailEvent& e);

// Canonical JSON object on one line (no trailing newline).
std::string serialize_event(const EmailEvent& e);

// Throws MalformedLine for non-JSON or missing required fields and
// InvalidValue for field values that break an invariant.
EmailEvent parse_event_line(std::string_view line);

struct Corpus {
  std::vector<EmailEvent> events;  // ascending by timestamp
  std::string source_label;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Stable sort by timestamp, then rejects duplicate event ids.
Corpus make_corpus(std::vector<EmailEvent> events, std::string source_label);

// A blank line is skipped. Errors name the 1-based line number.
Corpus read_corpus(std::istream& in, std::string source_label);
Corpus read_corpus(const std::filesystem::path& path);

void write_corpus(const Corpus& corpus, std::ostream& out);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Envelope fields the raw header block does not carry.
struct EnvelopeMetadata {
  std::string event_id;
  Timestamp timestamp{};
  bool has_timestamp = false;
  std::string src_ip;
  std::string src_country = "ZZ";
  Direction direction = Direction::inbound;
  std::string mail_from;
};

struct HeaderField {
  std::string name;   // as written
  std::string value;  // unfolded, trimmed
};

// Splits an RFC 5322 header block into unfolded fields, stopping at the
// first empty line. Lines that are neither "Name: value" nor continuations
// are skipped.
std::vector<HeaderField> parse_header_fields(std::string_view text);

// Extracts the first mailbox's addr-spec from an address-list value.
std::string first_address(std::string_view value);

// Builds an event from a raw header block plus envelope metadata. When the
// metadata has no timestamp the Date header is used. Throws NoHeaders or
// MissingRequired (no From/To, or no usable timestamp).
EmailEvent parse_raw_headers(std::string_view text, const EnvelopeMetadata& meta);

}  // namespace holmes
