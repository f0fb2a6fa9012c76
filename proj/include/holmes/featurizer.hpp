#pragma once

#include <string>
#include <vector>

#include "holmes/event.hpp"

namespace holmes {

struct TokenDocument {
  std::string event_id;
  std::vector<std::string> tokens;

  friend bool operator==(const TokenDocument&, const TokenDocument&) = default;
};

// Field-tagged tokens in fixed order:
//   dir=<direction> country=<cc> from=<mail_from> hfrom=<slug> ua=<slug>
// followed by the lowercased subject words. Subject words never contain '='
// so they cannot collide with a tagged token.
TokenDocument featurize(const EmailEvent& event);

// One document per event in corpus order. Throws EmptyCorpus.
std::vector<TokenDocument> featurize_corpus(const Corpus& corpus);
std::vector<TokenDocument> featurize_all(const std::vector<EmailEvent>& events);

}  // namespace holmes
