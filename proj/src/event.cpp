#include "holmes/event.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "holmes/error.hpp"
#include "holmes/text.hpp"
#include "json.hpp"

namespace holmes {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::NoHeaders: return "NoHeaders";
    case ErrorCode::MissingRequired: return "MissingRequired";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::TooFewTrainingEvents: return "TooFewTrainingEvents";
    case ErrorCode::EmptyDetectWindow: return "EmptyDetectWindow";
    case ErrorCode::OutOfOrderEvent: return "OutOfOrderEvent";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ConnectionFailed: return "ConnectionFailed";
  }
  return "Unknown";
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::inbound: return "inbound";
    case Direction::outbound: return "outbound";
    case Direction::internal: return "internal";
  }
  return "inbound";
}

Direction parse_direction(std::string_view text) {
  if (text == "inbound") return Direction::inbound;
  if (text == "outbound") return Direction::outbound;
  if (text == "internal") return Direction::internal;
  throw Error(ErrorCode::InvalidValue,
              "direction must be inbound, outbound or internal, got '" +
                  std::string(text) + "'");
}

bool is_valid_ip(std::string_view text) {
  const std::string s(text);
  unsigned char buf[sizeof(struct in6_addr)];
  return inet_pton(AF_INET, s.c_str(), buf) == 1 ||
         inet_pton(AF_INET6, s.c_str(), buf) == 1;
}

namespace {

bool is_country_code(std::string_view c) {
  return c.size() == 2 && c[0] >= 'A' && c[0] <= 'Z' && c[1] >= 'A' &&
         c[1] <= 'Z';
}

}  // namespace

void validate(const EmailEvent& e) {
  if (e.event_id.empty()) {
    throw Error(ErrorCode::InvalidValue, "event_id is empty");
  }
  if (!is_valid_ip(e.src_ip)) {
    throw Error(ErrorCode::InvalidValue, "bad src_ip '" + e.src_ip + "'");
  }
  if (!is_country_code(e.src_country)) {
    throw Error(ErrorCode::InvalidValue,
                "bad src_country '" + e.src_country + "'");
  }
  if (e.mail_from.empty()) {
    throw Error(ErrorCode::InvalidValue, "mail_from is empty");
  }
  if (e.mail_to.empty()) {
    throw Error(ErrorCode::InvalidValue, "mail_to is empty");
  }
}

std::string serialize_event(const EmailEvent& e) {
  nlohmann::ordered_json j;
  j["event_id"] = e.event_id;
  j["timestamp"] = format_iso8601(e.timestamp);
  j["src_ip"] = e.src_ip;
  j["src_country"] = e.src_country;
  j["direction"] = to_string(e.direction);
  j["mail_from"] = e.mail_from;
  j["mail_to"] = e.mail_to;
  j["header_from"] = e.header_from;
  j["subject"] = e.subject;
  j["user_agent"] = e.user_agent;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

namespace {

std::string required_string(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::MalformedLine,
                std::string("missing field '") + key + "'");
  }
  if (!it->is_string()) {
    throw Error(ErrorCode::MalformedLine,
                std::string("field '") + key + "' is not a string");
  }
  return it->get<std::string>();
}

std::string optional_string(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw Error(ErrorCode::MalformedLine,
                std::string("field '") + key + "' is not a string");
  }
  return it->get<std::string>();
}

}  // namespace

EmailEvent parse_event_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& ex) {
    throw Error(ErrorCode::MalformedLine, std::string("not JSON: ") + ex.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::MalformedLine, "line is not a JSON object");
  }
  EmailEvent e;
  e.event_id = required_string(j, "event_id");
  e.timestamp = parse_iso8601(required_string(j, "timestamp"));
  e.src_ip = required_string(j, "src_ip");
  e.src_country = required_string(j, "src_country");
  for (char& c : e.src_country) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 0x20);
  }
  e.direction = parse_direction(required_string(j, "direction"));
  e.mail_from = text::to_lower(required_string(j, "mail_from"));
  e.mail_to = text::to_lower(required_string(j, "mail_to"));
  e.header_from = required_string(j, "header_from");
  e.subject = optional_string(j, "subject");
  e.user_agent = optional_string(j, "user_agent");
  validate(e);
  return e;
}

Corpus make_corpus(std::vector<EmailEvent> events, std::string source_label) {
  std::stable_sort(events.begin(), events.end(),
                   [](const EmailEvent& a, const EmailEvent& b) {
                     return a.timestamp < b.timestamp;
                   });
  std::unordered_set<std::string_view> seen;
  seen.reserve(events.size());
  for (const auto& e : events) {
    if (!seen.insert(e.event_id).second) {
      throw Error(ErrorCode::InvalidValue,
                  "duplicate event_id '" + e.event_id + "'");
    }
  }
  return Corpus{std::move(events), std::move(source_label)};
}

Corpus read_corpus(std::istream& in, std::string source_label) {
  std::vector<EmailEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    try {
      events.push_back(parse_event_line(line));
    } catch (const Error& ex) {
      throw Error(ex.code(), source_label + ":" + std::to_string(line_no) +
                                 ": " + ex.what());
    }
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed: " + source_label);
  return make_corpus(std::move(events), std::move(source_label));
}

Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_corpus(in, path.string());
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& e : corpus.events) out << serialize_event(e) << '\n';
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_corpus(corpus, out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace holmes
