#include "holmes/rareness.hpp"

#include <unordered_map>

#include "holmes/error.hpp"

namespace holmes {

std::string RelationKey::joined() const {
  std::string out;
  out.reserve(src_ip.size() + mail_from.size() + mail_to.size() + 12);
  out += src_ip;
  out += kKeySeparator;
  out += to_string(direction);
  out += kKeySeparator;
  out += mail_from;
  out += kKeySeparator;
  out += mail_to;
  return out;
}

RelationKey relation_key(const EmailEvent& e) {
  return {e.src_ip, e.direction, e.mail_from, e.mail_to};
}

std::vector<EmailEvent> select_rare(const std::vector<EmailEvent>& events,
                                    int threshold) {
  if (threshold < 0) {
    throw Error(ErrorCode::InvalidParams, "rareness threshold must be >= 0");
  }
  std::vector<std::string> keys;
  keys.reserve(events.size());
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& e : events) {
    keys.push_back(relation_key(e).joined());
    ++counts[keys.back()];
  }
  std::vector<EmailEvent> rare;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (counts[keys[i]] <= static_cast<std::size_t>(threshold)) {
      rare.push_back(events[i]);
    }
  }
  return rare;
}

}  // namespace holmes
