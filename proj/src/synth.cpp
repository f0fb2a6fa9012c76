#include "holmes/synth.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <ostream>
#include <random>

#include "holmes/error.hpp"
#include "json.hpp"

namespace holmes {

std::string_view to_string(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::novel_sender_phish: return "novel_sender_phish";
    case AnomalyKind::account_takeover_burst: return "account_takeover_burst";
    case AnomalyKind::malvertisement_blast: return "malvertisement_blast";
  }
  return "novel_sender_phish";
}

AnomalyKind parse_anomaly_kind(std::string_view text) {
  for (auto k : {AnomalyKind::novel_sender_phish, AnomalyKind::account_takeover_burst,
                 AnomalyKind::malvertisement_blast}) {
    if (text == to_string(k)) return k;
  }
  throw Error(ErrorCode::InvalidSpec, "unknown anomaly kind '" + std::string(text) + "'");
}

std::string_view to_string(Label label) {
  return label == Label::anomalous ? "anomalous" : "benign";
}

void GeneratorSpec::validate() const {
  if (n_senders < 1 || recipients_per_sender < 1 || events_per_relation_per_day < 1 ||
      subject_pool_size < 1) {
    throw Error(ErrorCode::InvalidSpec, "generator counts must be positive");
  }
  if (n_senders > 60000) throw Error(ErrorCode::InvalidSpec, "too many senders");
  if (baseline_countries.empty()) {
    throw Error(ErrorCode::InvalidSpec, "need at least one baseline country");
  }
  for (const auto& c : baseline_countries) {
    if (c.size() != 2 || c[0] < 'A' || c[0] > 'Z' || c[1] < 'A' || c[1] > 'Z') {
      throw Error(ErrorCode::InvalidSpec, "bad country code '" + c + "'");
    }
  }
  if (duration <= Duration{0}) throw Error(ErrorCode::InvalidSpec, "duration must be positive");
  for (const auto& a : anomalies) {
    if (a.count < 1) throw Error(ErrorCode::InvalidSpec, "anomaly count must be >= 1");
    if (a.window_begin < Duration{0} || a.window_end > duration ||
        a.window_begin >= a.window_end) {
      throw Error(ErrorCode::InvalidSpec, "anomaly window must lie inside the duration");
    }
  }
}

namespace {

constexpr std::int64_t kDay = 24 * 3600;
constexpr std::string_view kOrgDomain = "corp.example";

constexpr std::array<std::string_view, 16> kFirstNames = {
    "Alice", "Bob",   "Carol", "David", "Erin",  "Frank", "Grace", "Heidi",
    "Ivan",  "Judy",  "Mallory", "Niaj", "Olivia", "Peggy", "Rupert", "Sybil"};
constexpr std::array<std::string_view, 12> kPartners = {
    "northwind", "contoso", "fabrikam", "tailspin", "wingtip", "adventure",
    "litware",   "proseware", "lucerne", "margie",  "fourth",  "wide"};
constexpr std::array<std::string_view, 6> kUserAgents = {
    "Microsoft Outlook 16.0", "Mozilla Thunderbird 78.5", "Apple Mail (2.3654)",
    "Roundcube Webmail 1.4",  "eM Client 8.1",            "Postfix mailer"};
constexpr std::array<std::string_view, 12> kTopics = {
    "invoice",  "shipment", "quarterly", "roadmap", "payroll", "backup",
    "contract", "meeting",  "forecast",  "support", "release", "inventory"};
constexpr std::array<std::string_view, 8> kFollow = {
    "status", "update", "summary", "review", "schedule", "notes", "request", "report"};
constexpr std::array<std::string_view, 12> kNovelCountries = {
    "RU", "CN", "NG", "KP", "IR", "BR", "VN", "UA", "RO", "TR", "PK", "KZ"};

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(unit(rng) * static_cast<double>(n));
}

std::string hex_ref(std::mt19937_64& rng) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  for (int i = 0; i < 6; ++i) s.push_back(digits[rng() & 0xF]);
  return s;
}

struct Sender {
  Direction direction;
  std::string mail_from;
  std::string header_from;
  std::string src_ip;
  std::string country;
  std::string user_agent;
  std::vector<std::string> subjects;
  std::vector<std::string> recipients;
};

std::vector<std::string> novel_countries(const std::vector<std::string>& baseline) {
  std::vector<std::string> out;
  for (auto c : kNovelCountries) {
    if (std::find(baseline.begin(), baseline.end(), c) == baseline.end()) {
      out.emplace_back(c);
    }
  }
  // Fall back to any unused code.
  for (char a = 'A'; out.size() < 4 && a <= 'Y'; ++a) {
    for (char b = 'A'; out.size() < 4 && b <= 'Z'; ++b) {
      const std::string c{a, b};
      if (std::find(baseline.begin(), baseline.end(), c) == baseline.end()) {
        out.push_back(c);
      }
    }
  }
  return out;
}

std::vector<Sender> make_senders(const GeneratorSpec& spec, std::mt19937_64& rng) {
  std::vector<Sender> senders;
  for (int s = 0; s < spec.n_senders; ++s) {
    Sender snd;
    const auto name = kFirstNames[static_cast<std::size_t>(s) % kFirstNames.size()];
    const auto partner = kPartners[pick(rng, kPartners.size())];
    const int kind = s % 5;
    snd.direction = kind == 0 ? Direction::internal
                    : kind == 1 ? Direction::outbound
                                : Direction::inbound;
    const std::string local = "sender" + std::to_string(s);
    const std::string partner_domain = std::string(partner) + std::to_string(s % 7) + ".com";
    if (snd.direction == Direction::inbound) {
      snd.mail_from = local + "@" + partner_domain;
      snd.country = spec.baseline_countries[pick(rng, spec.baseline_countries.size())];
      snd.src_ip = "198.51." + std::to_string(s / 200) + "." + std::to_string(s % 200 + 1);
    } else {
      snd.mail_from = local + "@" + std::string(kOrgDomain);
      snd.country = spec.baseline_countries.front();
      snd.src_ip = "10.20." + std::to_string(s / 200) + "." + std::to_string(s % 200 + 1);
    }
    snd.header_from = std::string(name) + " " + std::to_string(s) + " <" + snd.mail_from + ">";
    snd.user_agent = std::string(kUserAgents[pick(rng, kUserAgents.size())]);
    for (int k = 0; k < spec.subject_pool_size; ++k) {
      snd.subjects.push_back(std::string(kTopics[pick(rng, kTopics.size())]) + " " +
                             std::string(kFollow[pick(rng, kFollow.size())]) + " " +
                             std::string(partner) + " " + std::to_string(k + 1));
      snd.subjects.back()[0] = static_cast<char>(snd.subjects.back()[0] - 0x20);
    }
    for (int r = 0; r < spec.recipients_per_sender; ++r) {
      const int staff = (s * 37 + r * 11) % 997;
      if (snd.direction == Direction::outbound) {
        snd.recipients.push_back("contact" + std::to_string(r) + "@" + partner_domain);
      } else {
        snd.recipients.push_back("staff" + std::to_string(staff) + "@" +
                                 std::string(kOrgDomain));
      }
    }
    senders.push_back(std::move(snd));
  }
  return senders;
}

struct Draft {
  EmailEvent event;
  Label label;
};

Timestamp uniform_in(std::mt19937_64& rng, Timestamp lo, Timestamp hi) {
  const auto span = (hi - lo).count();
  return lo + Duration{static_cast<std::int64_t>(unit(rng) * static_cast<double>(span))};
}

void add_anomalies(const GeneratorSpec& spec, const AnomalySpec& a, int& serial,
                   const std::vector<std::string>& countries,
                   const std::vector<std::string>& staff, std::mt19937_64& rng,
                   std::vector<Draft>& out) {
  const Timestamp lo = spec.start + a.window_begin;
  const Timestamp hi = spec.start + a.window_end;
  // Bursts share one attacker address and land within an hour.
  const int burst_ip = serial;
  const Timestamp burst_start =
      uniform_in(rng, lo, std::max(lo + Duration{1}, hi - Duration{3600}));
  for (int i = 0; i < a.count; ++i, ++serial) {
    EmailEvent e;
    const std::string ref = std::to_string(serial) + hex_ref(rng);
    const std::string country = countries[pick(rng, countries.size())];
    e.src_country = country;
    e.mail_to = staff[pick(rng, staff.size())];
    switch (a.kind) {
      case AnomalyKind::novel_sender_phish: {
        static constexpr std::array<std::string_view, 5> lures = {
            "New Sign-in Attempt", "Your parcel could not be delivered",
            "Urgent: verify your mailbox", "Invoice payment overdue",
            "Action required on your account"};
        e.direction = Direction::inbound;
        e.mail_from = "notice" + std::to_string(serial) + "@secure-login" +
                      std::to_string(serial) + ".top";
        e.header_from = "Account Security <" + e.mail_from + ">";
        e.src_ip = "185." + std::to_string(100 + serial / 250) + "." +
                   std::to_string(serial % 250) + ".23";
        e.subject = std::string(lures[pick(rng, lures.size())]) + " ref " + ref;
        e.user_agent = "";
        e.timestamp = uniform_in(rng, lo, hi);
        break;
      }
      case AnomalyKind::account_takeover_burst: {
        e.direction = Direction::internal;
        e.mail_from = "helpdesk" + std::to_string(serial) + "@corp-examp1e.com";
        e.header_from = "IT Helpdesk <" + e.mail_from + ">";
        e.src_ip = "91.203." + std::to_string(burst_ip / 250 % 250) + "." +
                   std::to_string(burst_ip % 250 + 1);
        e.src_country = countries.front();
        e.subject = "Password expiry notice " + ref;
        e.user_agent = "python-requests/2.25";
        e.timestamp = std::min(hi - Duration{1},
                               burst_start + Duration{static_cast<std::int64_t>(
                                                 unit(rng) * 3600.0)});
        break;
      }
      case AnomalyKind::malvertisement_blast: {
        const int source = serial / 5;
        e.direction = Direction::inbound;
        e.mail_from = "promo" + std::to_string(serial) + "@mega-deals" +
                      std::to_string(source) + ".shop";
        e.header_from = "Mega Deals <" + e.mail_from + ">";
        e.src_ip = "103.77." + std::to_string(source / 250 % 250) + "." +
                   std::to_string(source % 250 + 1);
        e.subject = "Exclusive offer just for you " + ref;
        e.user_agent = "BulkMailer 3";
        e.timestamp = uniform_in(rng, lo, hi);
        break;
      }
    }
    out.push_back({std::move(e), Label::anomalous});
  }
}

}  // namespace

LabeledCorpus generate(const GeneratorSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const auto senders = make_senders(spec, rng);

  std::vector<Draft> drafts;
  const Timestamp end = spec.start + spec.duration;
  for (Timestamp day = spec.start; day < end; day += Duration{kDay}) {
    const Timestamp day_end = std::min(day + Duration{kDay}, end);
    const double fraction =
        static_cast<double>((day_end - day).count()) / static_cast<double>(kDay);
    const auto per_day = static_cast<int>(
        std::lround(spec.events_per_relation_per_day * fraction));
    for (const auto& snd : senders) {
      for (const auto& rcpt : snd.recipients) {
        for (int n = 0; n < per_day; ++n) {
          EmailEvent e;
          e.timestamp = uniform_in(rng, day, day_end);
          e.src_ip = snd.src_ip;
          e.src_country = snd.country;
          e.direction = snd.direction;
          e.mail_from = snd.mail_from;
          e.mail_to = rcpt;
          e.header_from = snd.header_from;
          e.subject = snd.subjects[pick(rng, snd.subjects.size())];
          e.user_agent = snd.user_agent;
          drafts.push_back({std::move(e), Label::benign});
        }
      }
    }
  }

  std::vector<std::string> staff;
  for (const auto& snd : senders) {
    if (snd.direction == Direction::outbound) continue;
    for (const auto& r : snd.recipients) staff.push_back(r);
  }
  if (staff.empty()) staff.push_back("staff0@" + std::string(kOrgDomain));
  const auto countries = novel_countries(spec.baseline_countries);
  int serial = 0;
  for (const auto& a : spec.anomalies) {
    add_anomalies(spec, a, serial, countries, staff, rng, drafts);
  }

  std::stable_sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    return a.event.timestamp < b.event.timestamp;
  });
  LabeledCorpus out;
  std::vector<EmailEvent> events;
  events.reserve(drafts.size());
  const int width = drafts.size() < 1000000 ? 7 : 10;
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    std::string id = std::to_string(i + 1);
    id.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(id.size()))), '0');
    drafts[i].event.event_id = "evt-" + id;
    out.labels.emplace(drafts[i].event.event_id, drafts[i].label);
    events.push_back(std::move(drafts[i].event));
  }
  out.corpus = make_corpus(std::move(events), "synthetic seed " + std::to_string(spec.seed));
  return out;
}

void write_labels(const LabeledCorpus& data, std::ostream& out) {
  for (const auto& e : data.corpus.events) {
    nlohmann::ordered_json j;
    j["event_id"] = e.event_id;
    j["label"] = to_string(data.labels.at(e.event_id));
    out << j.dump() << '\n';
  }
}

void write_labels(const LabeledCorpus& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_labels(data, out);
}

std::map<std::string, Label> read_labels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::map<std::string, Label> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto label = j.at("label").get<std::string>();
      labels[j.at("event_id").get<std::string>()] =
          label == "anomalous" ? Label::anomalous : Label::benign;
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::MalformedLine,
                  path.string() + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return labels;
}

}  // namespace holmes
