#pragma once

#include <string>
#include <vector>

#include "holmes/event.hpp"

namespace holmes {

struct RelationKey {
  std::string src_ip;
  Direction direction = Direction::inbound;
  std::string mail_from;
  std::string mail_to;

  // Components joined by the unit separator (0x1F), which cannot occur in
  // any of them, so distinct keys never alias.
  std::string joined() const;

  friend bool operator==(const RelationKey&, const RelationKey&) = default;
};

inline constexpr char kKeySeparator = '\x1f';

RelationKey relation_key(const EmailEvent& e);

// Keeps, in input order, every event whose relation occurs at most
// `threshold` times within `events`. Throws InvalidParams for threshold < 0.
std::vector<EmailEvent> select_rare(const std::vector<EmailEvent>& events,
                                    int threshold = 2);

}  // namespace holmes
