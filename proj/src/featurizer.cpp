#include "holmes/featurizer.hpp"

#include "holmes/error.hpp"
#include "holmes/text.hpp"

namespace holmes {

TokenDocument featurize(const EmailEvent& event) {
  TokenDocument doc;
  doc.event_id = event.event_id;
  auto words = text::word_tokens(event.subject);
  doc.tokens.reserve(5 + words.size());
  doc.tokens.push_back("dir=" + std::string(to_string(event.direction)));
  doc.tokens.push_back("country=" + text::ascii_lower(event.src_country));
  doc.tokens.push_back("from=" + event.mail_from);
  doc.tokens.push_back("hfrom=" + text::slugify(event.header_from));
  doc.tokens.push_back("ua=" + text::slugify(event.user_agent));
  for (auto& w : words) doc.tokens.push_back(std::move(w));
  return doc;
}

std::vector<TokenDocument> featurize_all(const std::vector<EmailEvent>& events) {
  if (events.empty()) throw Error(ErrorCode::EmptyCorpus, "no events to featurize");
  std::vector<TokenDocument> docs;
  docs.reserve(events.size());
  for (const auto& e : events) docs.push_back(featurize(e));
  return docs;
}

std::vector<TokenDocument> featurize_corpus(const Corpus& corpus) {
  return featurize_all(corpus.events);
}

}  // namespace holmes
