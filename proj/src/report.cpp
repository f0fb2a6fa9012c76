#include "graph_json.hpp"
#include "holmes/error.hpp"
#include "holmes/pipeline.hpp"
#include "json.hpp"

namespace holmes {

namespace {

using ojson = nlohmann::ordered_json;

ojson bounds_json(const WindowBounds& b) {
  ojson j;
  j["start"] = format_iso8601(b.start);
  j["end"] = format_iso8601(b.end);
  return j;
}

WindowBounds bounds_from(const nlohmann::json& j) {
  return {parse_iso8601(j.at("start").get<std::string>()),
          parse_iso8601(j.at("end").get<std::string>())};
}

}  // namespace

std::string report_to_json(const DetectionReport& report) {
  ojson j;
  j["train_window"] = bounds_json(report.train_window);
  j["detect_window"] = bounds_json(report.detect_window);
  ojson counts;
  counts["train_events"] = report.counts.train_events;
  counts["detect_events"] = report.counts.detect_events;
  counts["novel"] = report.counts.novel;
  counts["rare"] = report.counts.rare;
  j["counts"] = std::move(counts);
  j["flagged"] = ojson::array();
  for (const auto& f : report.flagged) {
    ojson item;
    item["event_id"] = f.event_id;
    item["score"] = f.score;
    ojson key;
    key["src_ip"] = f.relation.src_ip;
    key["direction"] = to_string(f.relation.direction);
    key["mail_from"] = f.relation.mail_from;
    key["mail_to"] = f.relation.mail_to;
    item["relation_key"] = std::move(key);
    item["subject"] = f.subject;
    item["src_ip"] = f.src_ip;
    item["src_country"] = f.src_country;
    j["flagged"].push_back(std::move(item));
  }
  j["graph"] = detail::graph_to_json(report.graph);
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

DetectionReport report_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    DetectionReport r;
    r.train_window = bounds_from(j.at("train_window"));
    r.detect_window = bounds_from(j.at("detect_window"));
    const auto& c = j.at("counts");
    r.counts = {c.at("train_events").get<std::size_t>(),
                c.at("detect_events").get<std::size_t>(),
                c.at("novel").get<std::size_t>(), c.at("rare").get<std::size_t>()};
    for (const auto& f : j.at("flagged")) {
      const auto& key = f.at("relation_key");
      r.flagged.push_back(
          {f.at("event_id").get<std::string>(), f.at("score").get<double>(),
           RelationKey{key.at("src_ip").get<std::string>(),
                       parse_direction(key.at("direction").get<std::string>()),
                       key.at("mail_from").get<std::string>(),
                       key.at("mail_to").get<std::string>()},
           f.at("subject").get<std::string>(), f.at("src_ip").get<std::string>(),
           f.at("src_country").get<std::string>()});
    }
    r.graph = detail::graph_from_json(j.at("graph"));
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::MalformedLine, std::string("bad report JSON: ") + ex.what());
  }
}

std::string window_filename(const DetectionReport& report, std::string_view stem,
                            std::string_view ext) {
  return std::string(stem) + "_" + format_iso8601(report.detect_window.start) + "." +
         std::string(ext);
}

std::string report_filename(const DetectionReport& report) {
  return window_filename(report, "report", "json");
}

}  // namespace holmes
