#include <algorithm>

#include "holmes/error.hpp"
#include "holmes/event.hpp"
#include "holmes/text.hpp"

namespace holmes {

namespace {

bool is_field_name_char(char c) {
  // ftext: printable US-ASCII except ':'
  return c > 32 && c < 127 && c != ':';
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::vector<HeaderField> parse_header_fields(std::string_view text) {
  std::vector<HeaderField> fields;
  bool in_field = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = strip_cr(text.substr(pos, eol - pos));
    pos = eol + 1;

    if (line.empty()) break;  // end of header section
    if (line.front() == ' ' || line.front() == '\t') {
      // Unfolding removes only the line break; the leading whitespace stays.
      if (in_field) fields.back().value.append(line);
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0 ||
        !std::all_of(line.begin(), line.begin() + colon, is_field_name_char)) {
      in_field = false;
      continue;
    }
    fields.push_back({std::string(line.substr(0, colon)),
                      std::string(line.substr(colon + 1))});
    in_field = true;
  }
  for (auto& f : fields) f.value = std::string(text::trim(f.value));
  return fields;
}

std::string first_address(std::string_view value) {
  // Skip quoted display names so a comma inside quotes does not split.
  bool quoted = false;
  std::size_t end = value.size();
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i] == '"' && (i == 0 || value[i - 1] != '\\')) quoted = !quoted;
    if (!quoted && value[i] == ',') {
      end = i;
      break;
    }
  }
  std::string_view mailbox = text::trim(value.substr(0, end));
  const auto lt = mailbox.rfind('<');
  if (lt != std::string_view::npos) {
    const auto gt = mailbox.find('>', lt);
    mailbox = mailbox.substr(lt + 1, gt == std::string_view::npos
                                         ? std::string_view::npos
                                         : gt - lt - 1);
  } else {
    // Drop a trailing "(comment)".
    const auto paren = mailbox.find('(');
    if (paren != std::string_view::npos) mailbox = mailbox.substr(0, paren);
  }
  return text::to_lower(text::trim(mailbox));
}

EmailEvent parse_raw_headers(std::string_view raw, const EnvelopeMetadata& meta) {
  const std::string clean = text::sanitize_utf8(raw);
  const auto fields = parse_header_fields(clean);
  if (fields.empty()) {
    throw Error(ErrorCode::NoHeaders, "no parseable header line");
  }
  auto find = [&](std::string_view name) -> const HeaderField* {
    for (const auto& f : fields) {
      if (text::ascii_lower(f.name) == name) return &f;
    }
    return nullptr;
  };

  const HeaderField* from = find("from");
  const HeaderField* to = find("to");
  if (from == nullptr) throw Error(ErrorCode::MissingRequired, "no From header");
  if (to == nullptr) throw Error(ErrorCode::MissingRequired, "no To header");

  EmailEvent e;
  e.event_id = meta.event_id;
  e.src_ip = meta.src_ip;
  e.src_country = meta.src_country.empty() ? "ZZ" : meta.src_country;
  for (char& c : e.src_country) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  e.direction = meta.direction;
  e.mail_from = text::to_lower(meta.mail_from);
  e.header_from = from->value;
  e.mail_to = first_address(to->value);
  if (e.mail_to.empty()) {
    throw Error(ErrorCode::MissingRequired, "To header has no address");
  }
  if (const auto* subject = find("subject")) e.subject = subject->value;
  if (const auto* ua = find("user-agent")) {
    e.user_agent = ua->value;
  } else if (const auto* mailer = find("x-mailer")) {
    e.user_agent = mailer->value;
  }
  if (meta.has_timestamp) {
    e.timestamp = meta.timestamp;
  } else if (const auto* date = find("date")) {
    e.timestamp = parse_rfc5322_date(date->value);
  } else {
    throw Error(ErrorCode::MissingRequired,
                "no timestamp in metadata and no Date header");
  }
  validate(e);
  return e;
}

}  // namespace holmes
